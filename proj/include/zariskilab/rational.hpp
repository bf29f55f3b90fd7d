#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace zar {

// Exact rational scalar used throughout tier 1. GMP-backed, always canonical
// (gcd(num, den) = 1, den > 0).
using Rat = boost::multiprecision::mpq_rational;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

// Canonical wire format: "p" when the denominator is 1, else "p/q" with the
// sign on the numerator.
std::string rat_to_string(const Rat& r);

// Parses "p", "p/q", optional leading '+'/'-'. Non-canonical fractions are
// accepted and normalized; zero denominators and any other junk throw
// std::invalid_argument.
Rat rat_from_string(const std::string& s);

double rat_to_double(const Rat& r);

RatVec mat_vec(const RatMat& m, const RatVec& v);
RatMat mat_mul(const RatMat& a, const RatMat& b);
RatMat mat_transpose(const RatMat& m);
RatMat mat_identity(std::size_t n);

// Determinant by fraction-exact Gaussian elimination.
Rat mat_det(RatMat m);

// Rank by exact Gaussian elimination (m is copied).
std::size_t mat_rank(RatMat m);

}  // namespace zar
