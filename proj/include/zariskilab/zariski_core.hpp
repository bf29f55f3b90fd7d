#pragma once

#include "zariskilab/rational.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Tier 1: exact solver and certifier for Zariski decompositions in a
// finite-dimensional vector space V with basis e = {e_lambda} and functionals
// phi = {phi_lambda}, encoded by the matrix Q with Q[l][m] = phi_l(e_m) and
// Q[l][m] >= 0 off the diagonal. Nef(phi) = { v : Qv >= 0 }. A decomposition
// of x is x = y + z with y the greatest element of { v <= x } ∩ Nef(phi).
// Everything here is exact rational arithmetic; no floating point enters.

namespace zar::core {

// ---------------------------------------------------------------------------
// Errors

struct OffDiagonalNegative : std::runtime_error {
  std::size_t row, col;  // 0-based positions in the validated matrix
  OffDiagonalNegative(std::size_t r, std::size_t c)
      : std::runtime_error("off-diagonal entry Q[" + std::to_string(r + 1) +
                           "][" + std::to_string(c + 1) + "] is negative"),
        row(r),
        col(c) {}
};

struct LabelMismatch : std::runtime_error {
  explicit LabelMismatch(const std::string& label)
      : std::runtime_error("unknown label: " + label) {}
};

struct EmptyList : std::runtime_error {
  EmptyList() : std::runtime_error("coordinate_max of an empty list") {}
};

struct NoNefBelow : std::runtime_error {
  NoNefBelow() : std::runtime_error("(-inf, x] ∩ Nef(phi) is empty") {}
};

struct CertificateFailure : std::runtime_error {
  explicit CertificateFailure(const std::string& what)
      : std::runtime_error("certificate failure: " + what) {}
};

struct NonNegativeDiagonal : std::runtime_error {
  std::string label;
  explicit NonNegativeDiagonal(std::string l)
      : std::runtime_error("diagonal entry at label '" + l +
                           "' is non-negative; negativity certificate "
                           "impossible"),
        label(std::move(l)) {}
};

struct SingularReduction : std::runtime_error {
  std::size_t stage;
  explicit SingularReduction(std::size_t s)
      : std::runtime_error("pivot reduction degenerated at stage " +
                           std::to_string(s)),
        stage(s) {}
};

// ---------------------------------------------------------------------------
// Types

struct ZariskiSystem {
  std::vector<std::string> labels;  // distinct, defines coordinate order
  RatMat q;                         // n x n, q[l][m] = phi_l(e_m)

  std::size_t size() const { return labels.size(); }
  // Throws LabelMismatch.
  std::size_t index_of(const std::string& label) const;
};

struct BasisVector {
  // Missing labels read as 0.
  std::map<std::string, Rat> coords;

  Rat at(const std::string& label) const {
    auto it = coords.find(label);
    return it == coords.end() ? Rat(0) : it->second;
  }
};

struct NegativityCertificate {
  std::vector<std::string> support;     // in system order
  RatMat lower;                         // A: lower triangular, entries >= 0
  RatMat upper;                         // B: upper triangular, entries >= 0
  bool det_sign_ok = false;             // (-1)^k det(Q') > 0
  std::optional<bool> symmetric_negdef; // set iff Q' symmetric: exact leading
                                        // principal minors alternate in sign
};

struct Decomposition {
  BasisVector positive;            // y
  BasisVector negative;            // z
  std::vector<std::string> support;  // Supp(z), in system order
  std::optional<NegativityCertificate> certificate;  // present iff z != 0
};

// ---------------------------------------------------------------------------
// Operations

// Checks the defining condition q[l][m] >= 0 for l != m and distinct labels.
// When labels are omitted they default to "0", "1", ..., "n-1".
ZariskiSystem validate_system(const RatMat& q,
                              std::vector<std::string> labels = {});

// Aligns v to the system's coordinate order. Throws LabelMismatch if v
// mentions a label the system does not have.
RatVec align(const ZariskiSystem& sys, const BasisVector& v);
BasisVector to_basis_vector(const ZariskiSystem& sys, const RatVec& coords);

// (Qv)[l] >= 0 for all l, evaluated exactly.
bool is_nef(const ZariskiSystem& sys, const BasisVector& v);

// Coordinate-wise maximum; if every input is nef so is the output.
BasisVector coordinate_max(const ZariskiSystem& sys,
                           const std::vector<BasisVector>& vs);

// Greatest element y of { v <= x } ∩ Nef(phi) and z = x - y, with the
// negative-part certificate attached when z != 0.
Decomposition solve_decomposition(const ZariskiSystem& sys,
                                  const BasisVector& x);

// Triangular A, B with non-negative entries and A Q' B = -I exactly, where Q'
// is q restricted to the support rows/columns (taken in system order).
NegativityCertificate certify_negative_part(
    const ZariskiSystem& sys, const std::vector<std::string>& support);

// True iff the columns of Q indexed by support have full rank.
bool independence_check(const ZariskiSystem& sys,
                        const std::vector<std::string>& support);

// Monotone clipping iteration: sweeps lambda = 0..n-1 setting
// y_l <- y_l - (Qy)_l / Q[l][l] whenever (Qy)_l < 0 (requires Q[l][l] < 0 at
// violated coordinates; throws std::domain_error otherwise). Converges to the
// greatest element from above; exposed as an independent cross-check.
RatVec clip_iterate(const ZariskiSystem& sys, const RatVec& x, int sweeps);

}  // namespace zar::core
