#pragma once

// Section lattices of arithmetic R-divisors on P^1_Z: sup/L2 norms of integer
// sections, exact and bounded small-section counting, distortion functions,
// sigma-decompositions, asymptotic multiplicities, and numerical probes for
// the distortion-growth, Gromov, and asymptotic-orthogonality properties.
//
// Conventions (matching p1_divisors):
//   * t = log|z| on the complex points; a divisor with lowered radial profile
//     g carries the metric weight e^{-g/2} on O(1)-sections.
//   * The graded piece H^0(nD) is spanned by the monomials z^{-i} with
//     i in [-n*cinf, n*c0]; an integer section is an integer combination.
//   * All inner products use the fixed volume form Phi given by the curvature
//     density of Admissible{1}: dPhi = w(s) ds dtheta/(2 pi), s = 2t, where
//     w(s) = e^s/(1+e^s)^2 is the logistic density (total mass 1, rotation-
//     and F_inf-invariant).

#include "zariskilab/p1_divisors.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zar::sec {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Operation applied to the zero section (norms are undefined).
struct ZeroSection : std::invalid_argument {
    ZeroSection() : std::invalid_argument("operation undefined for the zero section") {}
};

// Section uses an exponent outside the space it is measured in.
struct InvalidSection : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// No integer section of any computed degree has sup-norm <= 1.
struct EmptySections : std::runtime_error {
    EmptySections() : std::runtime_error("no nonzero small sections in the computed range") {}
};

// The candidate box for exact enumeration exceeds the hard cap.
struct BoxTooLarge : std::runtime_error {
    double size;  // candidate count (may be huge; kept as double)
    explicit BoxTooLarge(double s)
        : std::runtime_error("candidate box exceeds the enumeration cap"), size(s) {}
};

// Candidates whose sup-norm stays within tol/10 of 1 after refinement.
struct AmbiguousBoundary : std::runtime_error {
    long long count;
    explicit AmbiguousBoundary(long long c)
        : std::runtime_error("sections too close to the unit-ball boundary to classify"),
          count(c) {}
};

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

// The lattice of integer sections of H^0(P^1_Z, nD) with its norm data.
struct SectionSpace {
    p1::ModelDivisor divisor = p1::ModelDivisor::zero();
    int n = 1;
    p1::RadialProfile profile;         // lowered profile of `divisor` (degree-1 data)
    std::vector<long long> exponents;  // admissible i for z^{-i}, strictly increasing
    std::vector<double> log_norms;     // log sup-norm of z^{-i} under e^{-n g/2}
};

// Builds the space for H^0(nD).  Throws InvalidDivisor via lowering, and
// EmptySections when no monomial exponent is admissible.
SectionSpace make_section_space(const p1::ModelDivisor& divisor, int n);

// Integer section sum_i c_i z^{-i} as a sparse exponent -> coefficient map.
struct IntegerSection {
    std::map<long long, long long> coeffs;
};

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

// Sup-norm sup_x |s(x)| e^{-n g(x)/2}: maximum over radius of the maximum over
// angle (trigonometric-polynomial maximization by dense sampling plus local
// refinement).  Kink-only profiles use the exact reduction to kink circles and
// edge limits.  Throws ZeroSection / InvalidSection.
double sup_norm(const SectionSpace& space, const IntegerSection& s, double tol = 1e-10);

// log <z^{-i}, z^{-i}>_{n g} under the fixed volume form, by adaptive radial
// quadrature of e^{-i s - n g(s/2)} w(s) computed with a stabilizing shift.
// Throws InvalidSection for inadmissible i, QuadratureDivergence on failure.
double log_inner_monomial(const SectionSpace& space, long long i, double tol = 1e-10);

// log <s, s>_{n g}; monomials are orthogonal for rotation-invariant profiles,
// so this is a stable log-sum-exp over squared coefficients.
double log_inner(const SectionSpace& space, const IntegerSection& s, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

struct CountResult {
    long long count = 0;   // number of sections with sup-norm <= 1 (zero included)
    double log_count = 0;  // log(count)
};

// Exact count by enumeration of the per-coordinate candidate box
// |c_i| <= floor(exp(-log_norms_i)), pruned by the Parseval lower bound and
// accepted by the triangle upper bound; undecided candidates get the full
// sup-norm search.  Boundary values within tol of 1 are re-tested at tol/10;
// exact hits (within 1e-12) count as inside.  Throws BoxTooLarge above 1e7
// candidates and AmbiguousBoundary when re-testing cannot classify.
CountResult hhat0_exact(const SectionSpace& space, double tol = 1e-10);

struct CountBounds {
    double log_lower = 0;  // log-count of a sub-box certified by the triangle inequality
    double log_upper = 0;  // log of the L2-ellipsoid lattice-point bound
};

// Enumeration-free log-domain bounds, usable at large n.
CountBounds hhat0_bounds(const SectionSpace& space);

// ---------------------------------------------------------------------------
// Distortion
// ---------------------------------------------------------------------------

struct DistortionTable {
    std::vector<double> log_r;     // grid of log-radii
    std::vector<double> log_dist;  // log dist at each grid point (F_inf-invariant)
};

// dist(V; ng)(r) = sum_i |z^{-i}|^2_{ng}(r) / <z^{-i}, z^{-i}>_{ng} over the
// sub-basis (subset of the space's exponents); computed in the log domain.
DistortionTable distortion(const SectionSpace& space, const std::vector<long long>& sub_basis,
                           const std::vector<double>& log_radii, double tol = 1e-10);

struct DistGrowthReport {
    std::vector<int> ns;
    std::vector<double> log_dn;   // log D_n, D_n = sup over the grid of dist(V(nD); ng)
    double c_fit = 0;             // smallest C with D_n <= C (n+1)^3 for all tested n
    double c_chain = 0;           // smallest C making the chain inequality hold
    double c = 0;                 // reported constant: max(c_fit, c_chain)
    bool chain_ok = false;        // chain verified at the reported constant
    double growth_exponent = 0;   // least-squares slope of log D_n against log(n+1)
};

// Probes dist(V(nD); ng) <= C (n+1)^3 together with the chain inequality
//   (D_n / C(n+1)^3) (D_m / C(m+1)^3) <= D_{n+m} / C(n+m+1)^3,
// reporting the smallest single constant satisfying both on the tested range
// (the theorem asserts one constant for both properties).  V(nD) is the span
// of the unit-ball monomials.  Requires n_max <= 32.
DistGrowthReport dist_growth_probe(const p1::ModelDivisor& divisor, int n_max,
                                   double tol = 1e-10);

struct GromovReport {
    double constant = 0;          // max ratio over all samples
    double constant_half = 0;     // max over the first half of the samples
    bool stable = false;          // constant <= 1.1 * constant_half
    double constant_doubled = 0;  // max ratio with all coefficients a doubled
    bool doubling_bounded = false;  // constant_doubled <= constant * (1 + 1e-6)
    int samples = 0;
};

// Estimates the Gromov constant sup |phi|^2_{sum a_i g_i} /
// [(1 + sum |a_i|)^2 <phi, phi>_{sum a_i g_i}] over random integer sections
// and random nonnegative coefficients (deterministic seed).
GromovReport gromov_probe(const std::vector<p1::ModelDivisor>& divisors, int samples,
                          double tol = 1e-10);

// ---------------------------------------------------------------------------
// Sigma-decomposition and multiplicities
// ---------------------------------------------------------------------------

struct SigmaDecomposition {
    double f_c0 = 0, f_cinf = 0;  // F_n coefficients along C_0 / C_inf
    double m_c0 = 0, m_cinf = 0;  // M_n = D - F_n coefficients
    long long i_min_ball = 0, i_max_ball = 0;      // extreme unit-ball exponents
    std::vector<double> grid_log_r;                // default radial grid
    std::vector<double> green_m;                   // g_{M_n} = g + (1/n) log dist(V(nD); ng)
};

// F_n = (1/n) sum_C min{mult_C((phi) + nD)} C over the unit-ball monomials.
// The per-circle Parseval bound forces every norm<=1 integer section to be
// supported on unit-ball exponents, so the monomial minimum is exact here.
// Throws EmptySections when the unit ball holds no nonzero section.
SigmaDecomposition sigma_decomposition(const p1::ModelDivisor& divisor, int n,
                                       double tol = 1e-10);

struct MultiplicityReport {
    double mu = 0;  // inf over computed n of nu_C(nD)/n
    std::vector<std::pair<int, double>> sequence;  // (n, nu_C(nD)/n)
};

// Asymptotic multiplicity along a horizontal curve: inf over n <= n_max with
// nonzero small sections.  Rational-point curves always report 0.  Throws
// EmptySections when no computed n has sections.
MultiplicityReport asymptotic_multiplicity(const p1::ModelDivisor& divisor,
                                           const p1::HorizontalCurve& curve, int n_max);

// ---------------------------------------------------------------------------
// Asymptotic orthogonality
// ---------------------------------------------------------------------------

struct OrthogonalityReport {
    std::vector<int> ns;
    std::vector<double> values;     // deg(M_n | F_n) per requested n
    double extrapolated_limit = 0;  // log(n)/n-model fit through the last two points
    bool nonnegative = false;       // all values >= -1e-12
    bool decreasing = false;        // last value < first value
    bool limit_within_tol = false;  // |extrapolated_limit| <= tol
    bool eval_consistent = false;   // Richardson pair evaluations agree within tol
};

// deg(M_n | F_n) = (F_n coefficient) * deg(M_n | C_0), the degree evaluated by
// the canonical value of n g_{M_n} along C_0: Richardson extrapolation of
// g + (1/n) log dist + 2 (i_max/n) t at log r = -40 and -44.  Requires an
// effective big one-kink divisor (alpha >= 1 > beta, alpha > 1); nef divisors
// report identically zero.
OrthogonalityReport orthogonality_probe(const p1::ModelDivisor& divisor,
                                        const std::vector<int>& n_list, double tol = 0.05);

}  // namespace zar::sec
