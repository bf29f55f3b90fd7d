#pragma once

// Arithmetic R-divisors of continuous type on the projective line over Z,
// restricted to six closed families of rotation-invariant Green functions.
// All radial data is handled in the variable t = log|z|.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zar::p1 {

// ---------------------------------------------------------------------------
// Errors

struct InvalidDivisor : std::runtime_error {
    explicit InvalidDivisor(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidCurve : std::runtime_error {
    explicit InvalidCurve(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedFamily : std::runtime_error {
    explicit UnsupportedFamily(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedConfiguration : std::runtime_error {
    explicit UnsupportedConfiguration(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureDivergence : std::runtime_error {
    explicit QuadratureDivergence(const std::string& what) : std::runtime_error(what) {}
};

// Constructive witness that no decomposition exists: a scaling t0 of the
// divisor whose translate by epsilon/(1+epsilon) of log t0 still has both
// effective radii below 1, which contradicts any candidate positive part.
struct NoDecompositionWitness {
    double log_t0 = 0.0;
    double epsilon = 0.0;
    double check_log_alpha = 0.0;  // must be < 0
    double check_log_beta = 0.0;   // must be < 0
};

struct NoDecomposition : std::runtime_error {
    NoDecompositionWitness witness;
    explicit NoDecomposition(NoDecompositionWitness w)
        : std::runtime_error("divisor admits no Zariski decomposition"), witness(w) {}
};

struct NotComputed : std::runtime_error {
    std::string reason;
    explicit NotComputed(std::string r)
        : std::runtime_error("decomposition not computed: " + r), reason(std::move(r)) {}
};

// ---------------------------------------------------------------------------
// Divisor families

class ModelDivisor;

struct OneKinkParams {
    double lambda = 1.0;  // coefficient of C0; also the kink mass
    double log_a = 0.0;   // log of the inner radius parameter
    double log_b = 0.0;   // log of the outer radius parameter
};

struct TwoKinkParams {
    double log_alpha = 0.0;
    double log_alpha_p = 0.0;
    double log_beta = 0.0;
    double log_beta_p = 0.0;
};

struct AdmissibleParams {
    double lambda = 1.0;  // curvature parameter of -log|z|^2 + log(|z|^2 + lambda)
};

// One curvature circle: mass `mass` spread uniformly on |z| = e^t.
struct KinkPoint {
    double t = 0.0;
    double mass = 0.0;
};

// Piecewise-linear radial Green with divisor part c0*C0 + cinf*Cinf where
// cinf is derived from the kink masses: cinf = sum(mass) - c0.
struct KinkedParams {
    double c0 = 0.0;
    double a0 = 0.0;  // left-asymptote intercept of the Green function
    std::vector<KinkPoint> kinks;
    double cinf() const;
};

struct DivisorNode;

class ModelDivisor {
public:
    enum class Family { OneKink, TwoKink, Admissible, PrincipalShift, Scaled, Kinked };

    static ModelDivisor one_kink(double lambda, double log_a, double log_b);
    static ModelDivisor two_kink(double log_alpha, double log_alpha_p,
                                 double log_beta, double log_beta_p);
    static ModelDivisor admissible(double lambda);
    static ModelDivisor principal_shift(ModelDivisor base, double k);
    static ModelDivisor scaled(ModelDivisor base, double t);
    static ModelDivisor kinked(double c0, double a0, std::vector<KinkPoint> kinks);
    static ModelDivisor zero();

    Family family() const;

    // Parameter accessors throw UnsupportedFamily if the family does not match.
    const OneKinkParams& one_kink_params() const;
    const TwoKinkParams& two_kink_params() const;
    const AdmissibleParams& admissible_params() const;
    const KinkedParams& kinked_params() const;
    const ModelDivisor& base() const;   // PrincipalShift / Scaled
    double wrap_param() const;          // k for PrincipalShift, t for Scaled

private:
    explicit ModelDivisor(std::shared_ptr<const DivisorNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const DivisorNode> node_;
};

struct DivisorNode {
    ModelDivisor::Family family = ModelDivisor::Family::Kinked;
    OneKinkParams one_kink;
    TwoKinkParams two_kink;
    AdmissibleParams admissible;
    KinkedParams kinked;
    std::optional<ModelDivisor> base;  // PrincipalShift / Scaled
    double wrap_param = 0.0;
};

// ---------------------------------------------------------------------------
// Horizontal curves

class HorizontalCurve {
public:
    enum class Kind { C0, CInf, Rational };

    static HorizontalCurve c0();
    static HorizontalCurve cinf();
    // The section z = m/n with gcd(|m|, n) = 1 and n >= 1; (0 : 1) is C0.
    static HorizontalCurve rational_point(std::int64_t m, std::int64_t n);

    Kind kind() const { return kind_; }
    std::int64_t m() const { return m_; }
    std::int64_t n() const { return n_; }

private:
    Kind kind_ = Kind::C0;
    std::int64_t m_ = 0;
    std::int64_t n_ = 1;
};

// ---------------------------------------------------------------------------
// Lowered radial form
//
//   g(t) = a0 + b0*t + sum_j 2*m_j*max(0, t - t_j)
//               + sum_k w_k*log(1 + e^{2t}/lambda_k)
//
// with b0 = -2*c0 and right slope 2*cinf.  Total curvature mass equals
// c0 + cinf (fibre degree of the divisor part).

struct AdmissibleTerm {
    double weight = 0.0;
    double lambda = 1.0;
};

struct RadialProfile {
    double a0 = 0.0;
    double b0 = 0.0;
    std::vector<KinkPoint> kinks;       // sorted by t, positive masses merged
    std::vector<AdmissibleTerm> adm;    // positive weights
    double c0 = 0.0;
    double cinf = 0.0;

    double green(double t) const;
    double dgreen(double t) const;      // right derivative
    double left_intercept() const;      // lim_{t -> -inf} g(t) + 2*c0*t
    double right_intercept() const;     // lim_{t -> +inf} g(t) - 2*cinf*t
    double min_green() const;           // infimum; -inf if unbounded below
};

RadialProfile lower(const ModelDivisor& d);

// ---------------------------------------------------------------------------
// Decomposition result

struct DecompositionP1 {
    ModelDivisor positive;              // the nef positive part
    double negative_c0 = 0.0;           // multiplicity of C0 in the negative part
    double negative_cinf = 0.0;         // multiplicity of Cinf in the negative part
    std::optional<double> theta;        // normalized kink split (one-kink / two-kink)
    std::optional<double> theta_p;      // second split parameter (two-kink)
    DecompositionP1() : positive(ModelDivisor::zero()) {}
};

struct HodgeReport {
    double self_pairing = 0.0;   // deg(D^2)
    double vol_estimate = 0.0;   // volume or a certified lower bound for it
    bool holds = false;          // vol_estimate >= self_pairing - tol
    std::string method;          // "decomposition" or "count-lower-bound"
};

// ---------------------------------------------------------------------------
// Operations

double green_value(const ModelDivisor& d, double log_r);
double degree_on_curve(const ModelDivisor& d, const HorizontalCurve& c);
double pairing(const ModelDivisor& d1, const ModelDivisor& d2, double tol = 1e-10);

bool is_effective(const ModelDivisor& d);
bool is_nef_p1(const ModelDivisor& d);
bool is_big(const ModelDivisor& d);
// Sufficient criterion for adequacy of a one-kink divisor (strict inequalities
// 2*log a > lambda*log 2 and 2*log b > lambda*log 2).  One-kink only.
bool is_adequate_sufficient(const ModelDivisor& d);

DecompositionP1 zariski_decompose_p1(const ModelDivisor& d);
double volume_p1(const ModelDivisor& d, double tol = 1e-10);

// For a two-kink divisor with alpha = alpha' = 1: the Gram matrix
// [deg(N_i | C_j)] of the two components of the negative part.
std::array<std::array<double, 2>, 2> negative_part_matrix(const ModelDivisor& d);

HodgeReport hodge_index_check(const ModelDivisor& d, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Section-norm helpers (shared with the section-lattice layer)

// log sup_{t} ( -i*t - (n/2) g(t) ): the log of the sup norm of z^{-i} under
// the metric of n*D.  Finite exactly when -n*cinf <= i <= n*c0.
double monomial_log_norm(const RadialProfile& p, long n, long i);

// Certified bounds for the log-count of lattice points of norm <= 1 in a box
// with per-coordinate radii u_i = e^{-log_norms[i]} (only coordinates with
// log_norms[i] <= 0 contribute to the lower bound).
double log_count_lower_bound(const std::vector<double>& log_norms);
double log_count_upper_bound(const std::vector<double>& log_norms);

}  // namespace zar::p1
