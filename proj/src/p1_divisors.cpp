#include "zariskilab/p1_divisors.hpp"

#include "quadrature_detail.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace zar::p1 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidDivisor(what);
}

// log(1 + e^x) without overflow.
double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

// ---------------------------------------------------------------------------
// Families

double KinkedParams::cinf() const {
    double mass = 0.0;
    for (const auto& k : kinks) mass += k.mass;
    return mass - c0;
}

ModelDivisor ModelDivisor::one_kink(double lambda, double log_a, double log_b) {
    require(std::isfinite(lambda) && std::isfinite(log_a) && std::isfinite(log_b),
            "one-kink parameters must be finite");
    require(lambda > 0.0, "one-kink lambda must be positive");
    auto node = std::make_shared<DivisorNode>();
    node->family = Family::OneKink;
    node->one_kink = {lambda, log_a, log_b};
    return ModelDivisor(std::move(node));
}

ModelDivisor ModelDivisor::two_kink(double log_alpha, double log_alpha_p,
                                    double log_beta, double log_beta_p) {
    require(std::isfinite(log_alpha) && std::isfinite(log_alpha_p) &&
                std::isfinite(log_beta) && std::isfinite(log_beta_p),
            "two-kink parameters must be finite");
    auto node = std::make_shared<DivisorNode>();
    node->family = Family::TwoKink;
    node->two_kink = {log_alpha, log_alpha_p, log_beta, log_beta_p};
    return ModelDivisor(std::move(node));
}

ModelDivisor ModelDivisor::admissible(double lambda) {
    require(std::isfinite(lambda), "admissible lambda must be finite");
    require(lambda > 0.0, "admissible lambda must be positive");
    auto node = std::make_shared<DivisorNode>();
    node->family = Family::Admissible;
    node->admissible = {lambda};
    return ModelDivisor(std::move(node));
}

ModelDivisor ModelDivisor::principal_shift(ModelDivisor base, double k) {
    require(std::isfinite(k), "principal shift multiplier must be finite");
    auto node = std::make_shared<DivisorNode>();
    node->family = Family::PrincipalShift;
    node->base = std::move(base);
    node->wrap_param = k;
    return ModelDivisor(std::move(node));
}

ModelDivisor ModelDivisor::scaled(ModelDivisor base, double t) {
    require(std::isfinite(t), "scale factor must be finite");
    require(t >= 0.0, "scale factor must be nonnegative");
    auto node = std::make_shared<DivisorNode>();
    node->family = Family::Scaled;
    node->base = std::move(base);
    node->wrap_param = t;
    return ModelDivisor(std::move(node));
}

ModelDivisor ModelDivisor::kinked(double c0, double a0, std::vector<KinkPoint> kinks) {
    require(std::isfinite(c0) && std::isfinite(a0), "kinked parameters must be finite");
    for (const auto& k : kinks) {
        require(std::isfinite(k.t) && std::isfinite(k.mass), "kink data must be finite");
        require(k.mass > 0.0, "kink masses must be positive");
    }
    std::sort(kinks.begin(), kinks.end(),
              [](const KinkPoint& x, const KinkPoint& y) { return x.t < y.t; });
    std::vector<KinkPoint> merged;
    for (const auto& k : kinks) {
        if (!merged.empty() && merged.back().t == k.t) {
            merged.back().mass += k.mass;
        } else {
            merged.push_back(k);
        }
    }
    auto node = std::make_shared<DivisorNode>();
    node->family = Family::Kinked;
    node->kinked = {c0, a0, std::move(merged)};
    return ModelDivisor(std::move(node));
}

ModelDivisor ModelDivisor::zero() { return scaled(one_kink(1.0, 0.0, 0.0), 0.0); }

ModelDivisor::Family ModelDivisor::family() const { return node_->family; }

namespace {
void check_family(ModelDivisor::Family have, ModelDivisor::Family want, const char* name) {
    if (have != want) {
        throw UnsupportedFamily(std::string("divisor does not belong to the ") + name +
                                " family");
    }
}
}  // namespace

const OneKinkParams& ModelDivisor::one_kink_params() const {
    check_family(node_->family, Family::OneKink, "one-kink");
    return node_->one_kink;
}

const TwoKinkParams& ModelDivisor::two_kink_params() const {
    check_family(node_->family, Family::TwoKink, "two-kink");
    return node_->two_kink;
}

const AdmissibleParams& ModelDivisor::admissible_params() const {
    check_family(node_->family, Family::Admissible, "admissible");
    return node_->admissible;
}

const KinkedParams& ModelDivisor::kinked_params() const {
    check_family(node_->family, Family::Kinked, "kinked");
    return node_->kinked;
}

const ModelDivisor& ModelDivisor::base() const {
    if (node_->family != Family::PrincipalShift && node_->family != Family::Scaled) {
        throw UnsupportedFamily("divisor is not a wrapper around a base divisor");
    }
    return *node_->base;
}

double ModelDivisor::wrap_param() const {
    if (node_->family != Family::PrincipalShift && node_->family != Family::Scaled) {
        throw UnsupportedFamily("divisor is not a wrapper around a base divisor");
    }
    return node_->wrap_param;
}

// ---------------------------------------------------------------------------
// Horizontal curves

HorizontalCurve HorizontalCurve::c0() { return HorizontalCurve{}; }

HorizontalCurve HorizontalCurve::cinf() {
    HorizontalCurve c;
    c.kind_ = Kind::CInf;
    return c;
}

HorizontalCurve HorizontalCurve::rational_point(std::int64_t m, std::int64_t n) {
    if (n < 1) throw InvalidCurve("the denominator of a rational point must be >= 1");
    if (m == 0) {
        if (n != 1) throw InvalidCurve("the zero section is (0 : 1)");
        return c0();
    }
    if (std::gcd(m < 0 ? -m : m, n) != 1) {
        throw InvalidCurve("rational point coordinates must be coprime");
    }
    HorizontalCurve c;
    c.kind_ = Kind::Rational;
    c.m_ = m;
    c.n_ = n;
    return c;
}

// ---------------------------------------------------------------------------
// Lowering to radial profiles

namespace {
void normalize_profile(RadialProfile& p) {
    std::sort(p.kinks.begin(), p.kinks.end(),
              [](const KinkPoint& x, const KinkPoint& y) { return x.t < y.t; });
    std::vector<KinkPoint> merged;
    for (const auto& k : p.kinks) {
        if (k.mass == 0.0) continue;
        if (!merged.empty() && merged.back().t == k.t) {
            merged.back().mass += k.mass;
        } else {
            merged.push_back(k);
        }
    }
    p.kinks = std::move(merged);
    std::vector<AdmissibleTerm> adm;
    for (const auto& a : p.adm) {
        if (a.weight != 0.0) adm.push_back(a);
    }
    p.adm = std::move(adm);
}
}  // namespace

RadialProfile lower(const ModelDivisor& d) {
    RadialProfile p;
    switch (d.family()) {
        case ModelDivisor::Family::OneKink: {
            const auto& q = d.one_kink_params();
            p.c0 = q.lambda;
            p.cinf = 0.0;
            p.a0 = 2.0 * q.log_b;
            p.b0 = -2.0 * q.lambda;
            p.kinks.push_back({(q.log_b - q.log_a) / q.lambda, q.lambda});
            break;
        }
        case ModelDivisor::Family::TwoKink: {
            const auto& q = d.two_kink_params();
            p.c0 = 1.0;
            p.cinf = 1.0;
            p.a0 = 2.0 * (q.log_alpha_p + q.log_beta);
            p.b0 = -2.0;
            p.kinks.push_back({q.log_beta - q.log_alpha, 1.0});
            p.kinks.push_back({q.log_alpha_p - q.log_beta_p, 1.0});
            break;
        }
        case ModelDivisor::Family::Admissible: {
            const auto& q = d.admissible_params();
            p.c0 = 1.0;
            p.cinf = 0.0;
            p.a0 = std::log(q.lambda);
            p.b0 = -2.0;
            p.adm.push_back({1.0, q.lambda});
            break;
        }
        case ModelDivisor::Family::Kinked: {
            const auto& q = d.kinked_params();
            p.c0 = q.c0;
            p.cinf = q.cinf();
            p.a0 = q.a0;
            p.b0 = -2.0 * q.c0;
            p.kinks = q.kinks;
            break;
        }
        case ModelDivisor::Family::PrincipalShift: {
            p = lower(d.base());
            double k = d.wrap_param();
            p.b0 -= 2.0 * k;
            p.c0 += k;
            p.cinf -= k;
            break;
        }
        case ModelDivisor::Family::Scaled: {
            p = lower(d.base());
            double t = d.wrap_param();
            p.a0 *= t;
            p.b0 *= t;
            p.c0 *= t;
            p.cinf *= t;
            for (auto& k : p.kinks) k.mass *= t;
            for (auto& a : p.adm) a.weight *= t;
            break;
        }
    }
    normalize_profile(p);
    return p;
}

double RadialProfile::green(double t) const {
    double v = a0 + b0 * t;
    for (const auto& k : kinks) {
        if (t > k.t) v += 2.0 * k.mass * (t - k.t);
    }
    for (const auto& a : adm) v += a.weight * softplus(2.0 * t - std::log(a.lambda));
    return v;
}

double RadialProfile::dgreen(double t) const {
    double s = b0;
    for (const auto& k : kinks) {
        if (t >= k.t) s += 2.0 * k.mass;
    }
    for (const auto& a : adm) s += 2.0 * a.weight * sigmoid(2.0 * t - std::log(a.lambda));
    return s;
}

double RadialProfile::left_intercept() const { return a0; }

double RadialProfile::right_intercept() const {
    double v = a0;
    for (const auto& k : kinks) v -= 2.0 * k.mass * k.t;
    for (const auto& a : adm) v -= a.weight * std::log(a.lambda);
    return v;
}

double RadialProfile::min_green() const {
    if (c0 < 0.0 || cinf < 0.0) return -kInf;
    double best = kInf;
    if (c0 == 0.0) best = std::min(best, left_intercept());
    if (cinf == 0.0) best = std::min(best, right_intercept());
    double reach = 1.0;
    for (const auto& k : kinks) {
        best = std::min(best, green(k.t));
        reach = std::max(reach, std::abs(k.t));
    }
    for (const auto& a : adm) reach = std::max(reach, std::abs(std::log(a.lambda)) / 2.0);
    double radius = reach + 60.0;
    best = std::min(best, std::min(green(-radius), green(radius)));
    if (!adm.empty()) {
        // The derivative is continuous and increasing between kinks; bisect for
        // the zero crossing in every segment.
        std::vector<double> bps{-radius};
        for (const auto& k : kinks) bps.push_back(k.t);
        bps.push_back(radius);
        for (size_t s = 0; s + 1 < bps.size(); ++s) {
            double lo = bps[s], hi = bps[s + 1];
            if (hi - lo <= 0.0) continue;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (lo + hi);
                if (dgreen(mid) < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            best = std::min(best, green(0.5 * (lo + hi)));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Quadrature against the logistic curvature density

namespace {

using detail::integrate_adaptive;

// Integral of g((s + log lambda)/2) against the logistic density e^s/(1+e^s)^2.
// This is the radial part of the admissible curvature measure.  The window
// [-60, 60] leaves a tail below 1e-24 of the linear-growth integrand.
double integrate_logistic(const RadialProfile& g, double lambda, double tol) {
    const double kWindow = 60.0;
    const double ll = std::log(lambda);
    std::vector<double> cuts{-kWindow, 0.0, kWindow};
    for (const auto& k : g.kinks) {
        double s = 2.0 * k.t - ll;
        if (s > -kWindow && s < kWindow) cuts.push_back(s);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto f = [&](double s) {
        double ea = std::exp(-std::abs(s));
        double w = ea / ((1.0 + ea) * (1.0 + ea));
        return g.green(0.5 * (s + ll)) * w;
    };
    double eps = std::max(tol * 1e-2, 1e-13) / double(cuts.size() - 1);
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate_adaptive(f, cuts[i], cuts[i + 1], eps, 0);
    }
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// Degrees and the pairing

double green_value(const ModelDivisor& d, double log_r) {
    return lower(d).green(log_r);
}

namespace {
double degree_on_curve_profile(const RadialProfile& p, const HorizontalCurve& c) {
    switch (c.kind()) {
        case HorizontalCurve::Kind::C0:
            return 0.5 * p.left_intercept();
        case HorizontalCurve::Kind::CInf:
            return 0.5 * p.right_intercept();
        case HorizontalCurve::Kind::Rational: {
            double am = std::abs(double(c.m()));
            double an = double(c.n());
            return p.c0 * std::log(am) + p.cinf * std::log(an) +
                   0.5 * p.green(std::log(am / an));
        }
    }
    return 0.0;
}
}  // namespace

double degree_on_curve(const ModelDivisor& d, const HorizontalCurve& c) {
    return degree_on_curve_profile(lower(d), c);
}

double pairing(const ModelDivisor& d1, const ModelDivisor& d2, double tol) {
    RadialProfile p1 = lower(d1);
    RadialProfile p2 = lower(d2);
    double total = p1.c0 * (0.5 * p2.left_intercept()) +
                   p1.cinf * (0.5 * p2.right_intercept());
    for (const auto& k : p2.kinks) total += 0.5 * k.mass * p1.green(k.t);
    for (const auto& a : p2.adm) {
        total += 0.5 * a.weight * integrate_logistic(p1, a.lambda, tol);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Positivity predicates

bool is_effective(const ModelDivisor& d) {
    RadialProfile p = lower(d);
    if (p.c0 < 0.0 || p.cinf < 0.0) return false;
    return p.min_green() >= -1e-12;
}

namespace {
// One-sided consistency guard: whenever the closed form declares a divisor
// nef, the degree on every sampled section must be nonnegative up to noise.
void crosscheck_nef_by_sampling(const RadialProfile& p) {
    double scale =
        1.0 + std::abs(p.left_intercept()) + std::abs(p.right_intercept());
    for (std::int64_t m = 1; m <= 20; ++m) {
        for (std::int64_t n = 1; n <= 20; ++n) {
            if (std::gcd(m, n) != 1) continue;
            double t = std::log(double(m) / double(n));
            double deg = p.c0 * std::log(double(m)) + p.cinf * std::log(double(n)) +
                         0.5 * p.green(t);
            if (deg < -1e-9 * scale) {
                throw std::logic_error(
                    "nef closed form contradicted by section sampling");
            }
        }
    }
}
}  // namespace

bool is_nef_p1(const ModelDivisor& d) {
    RadialProfile p = lower(d);
    bool nef = 0.5 * p.left_intercept() >= 0.0 && 0.5 * p.right_intercept() >= 0.0 &&
               p.c0 + p.cinf >= 0.0;
    if (nef) crosscheck_nef_by_sampling(p);
    return nef;
}

namespace {

struct TwoKinkSplit {
    double theta = 0.0;
    double theta_p = 0.0;
};

TwoKinkSplit two_kink_split(const TwoKinkParams& q) {
    TwoKinkSplit s;
    s.theta = (q.log_alpha + q.log_alpha_p) / (q.log_alpha - q.log_beta);
    s.theta_p = (q.log_alpha + q.log_alpha_p) / (q.log_alpha_p - q.log_beta_p);
    return s;
}

}  // namespace

bool is_big(const ModelDivisor& d) {
    switch (d.family()) {
        case ModelDivisor::Family::Scaled:
            return d.wrap_param() > 0.0 && is_big(d.base());
        case ModelDivisor::Family::PrincipalShift:
            return is_big(d.base());
        case ModelDivisor::Family::Admissible:
            return true;
        case ModelDivisor::Family::OneKink: {
            const auto& q = d.one_kink_params();
            if (q.log_a >= 0.0 && q.log_b >= 0.0) return q.log_a + q.log_b > 0.0;
            if (q.log_a >= 0.0) return q.log_a > 0.0;
            if (q.log_b >= 0.0) return q.log_b > 0.0;
            return false;
        }
        case ModelDivisor::Family::TwoKink: {
            const auto& q = d.two_kink_params();
            double degc0 = q.log_alpha_p + q.log_beta;
            double degci = q.log_alpha + q.log_beta_p;
            if (degc0 >= 0.0 && degci >= 0.0) {
                return 3.0 * (q.log_alpha + q.log_alpha_p) + q.log_beta + q.log_beta_p >
                       0.0;
            }
            if (q.log_alpha >= 0.0 && q.log_alpha_p >= 0.0 && degc0 < 0.0 && degci < 0.0) {
                return q.log_alpha + q.log_alpha_p > 0.0;
            }
            throw NotComputed("bigness of this two-kink configuration");
        }
        case ModelDivisor::Family::Kinked: {
            if (is_nef_p1(d)) return pairing(d, d) > 1e-12;
            throw NotComputed("bigness of a non-nef kinked divisor");
        }
    }
    return false;
}

bool is_adequate_sufficient(const ModelDivisor& d) {
    const ModelDivisor* cur = &d;
    double scale = 1.0;
    while (cur->family() == ModelDivisor::Family::Scaled) {
        scale *= cur->wrap_param();
        cur = &cur->base();
    }
    if (cur->family() != ModelDivisor::Family::OneKink) {
        throw UnsupportedFamily("adequacy criterion is implemented for one-kink divisors");
    }
    if (scale == 0.0) {
        throw UnsupportedFamily("adequacy criterion needs a nonzero divisor");
    }
    const auto& q = cur->one_kink_params();
    double bar = q.lambda * std::log(2.0);
    return 2.0 * q.log_a > bar && 2.0 * q.log_b > bar;
}

// ---------------------------------------------------------------------------
// Decomposition

namespace {

DecompositionP1 trivial_decomposition(const ModelDivisor& d) {
    DecompositionP1 dec;
    dec.positive = d;
    return dec;
}

}  // namespace

DecompositionP1 zariski_decompose_p1(const ModelDivisor& d) {
    switch (d.family()) {
        case ModelDivisor::Family::Scaled: {
            double t = d.wrap_param();
            if (t == 0.0) {
                DecompositionP1 dec;  // the zero divisor
                return dec;
            }
            DecompositionP1 dec = zariski_decompose_p1(d.base());
            DecompositionP1 out;
            out.positive = ModelDivisor::scaled(dec.positive, t);
            out.negative_c0 = t * dec.negative_c0;
            out.negative_cinf = t * dec.negative_cinf;
            out.theta = dec.theta;
            out.theta_p = dec.theta_p;
            return out;
        }
        case ModelDivisor::Family::PrincipalShift: {
            double k = d.wrap_param();
            DecompositionP1 dec = zariski_decompose_p1(d.base());
            DecompositionP1 out;
            out.positive = ModelDivisor::principal_shift(dec.positive, k);
            out.negative_c0 = dec.negative_c0;
            out.negative_cinf = dec.negative_cinf;
            out.theta = dec.theta;
            out.theta_p = dec.theta_p;
            return out;
        }
        case ModelDivisor::Family::Admissible: {
            const auto& q = d.admissible_params();
            if (q.lambda >= 1.0) return trivial_decomposition(d);
            throw NotComputed(
                "admissible divisors with lambda < 1: the greatest nef minorant has no "
                "known closed form");
        }
        case ModelDivisor::Family::Kinked: {
            if (is_nef_p1(d)) return trivial_decomposition(d);
            throw NotComputed("non-nef kinked divisors are outside the treated cases");
        }
        case ModelDivisor::Family::OneKink: {
            const auto& q = d.one_kink_params();
            double la = q.log_a, lb = q.log_b, lam = q.lambda;
            if (la >= 0.0 && lb >= 0.0) {
                DecompositionP1 dec = trivial_decomposition(d);
                dec.theta = 1.0;
                return dec;
            }
            if (la >= 0.0 && lb < 0.0) {
                double theta = la / (la - lb);
                DecompositionP1 dec;
                dec.positive = theta == 0.0
                                   ? ModelDivisor::zero()
                                   : ModelDivisor::one_kink(lam * theta, la, 0.0);
                dec.negative_c0 = lam * (1.0 - theta);
                dec.theta = theta;
                return dec;
            }
            if (lb >= 0.0 && la < 0.0) {
                double theta = lb / (lb - la);
                DecompositionP1 dec;
                dec.positive =
                    theta == 0.0
                        ? ModelDivisor::zero()
                        : ModelDivisor::principal_shift(
                              ModelDivisor::one_kink(lam * theta, 0.0, lb),
                              lam * (1.0 - theta));
                dec.negative_cinf = lam * (1.0 - theta);
                dec.theta = theta;
                return dec;
            }
            // Both radii below 1: no multiple of the divisor carries a nonzero
            // nef minorant; report the scaling witness.
            double lan = la / lam, lbn = lb / lam;
            NoDecompositionWitness w;
            w.log_t0 = std::log(2.0) - std::min(lan, lbn);
            double rho = -std::max(lan, lbn) / w.log_t0;
            double s = std::min(rho, 1.0) / 2.0;
            w.epsilon = s / (1.0 - s);
            w.check_log_alpha = s * w.log_t0 + lan;
            w.check_log_beta = s * w.log_t0 + lbn;
            throw NoDecomposition(w);
        }
        case ModelDivisor::Family::TwoKink: {
            const auto& q = d.two_kink_params();
            double la = q.log_alpha, lap = q.log_alpha_p;
            double lb = q.log_beta, lbp = q.log_beta_p;
            double degc0 = lap + lb, degci = la + lbp;
            if (degc0 >= 0.0 && degci >= 0.0) {
                DecompositionP1 dec = trivial_decomposition(d);
                dec.theta = 1.0;
                dec.theta_p = 1.0;
                return dec;
            }
            if (la >= 0.0 && lap >= 0.0 && degc0 < 0.0 && degci < 0.0) {
                TwoKinkSplit s = two_kink_split(q);
                DecompositionP1 dec;
                if (s.theta == 0.0) {
                    dec.positive = ModelDivisor::zero();
                } else {
                    dec.positive = ModelDivisor::kinked(
                        s.theta, 0.0,
                        {{lb - la, s.theta}, {lap - lbp, s.theta_p}});
                }
                dec.negative_c0 = 1.0 - s.theta;
                dec.negative_cinf = 1.0 - s.theta_p;
                dec.theta = s.theta;
                dec.theta_p = s.theta_p;
                return dec;
            }
            throw NotComputed(
                "two-kink parameters outside the closed-form decomposition cases");
        }
    }
    throw UnsupportedFamily("unknown divisor family");
}

// ---------------------------------------------------------------------------
// Volume

namespace {

std::optional<double> closed_volume(const ModelDivisor& d) {
    switch (d.family()) {
        case ModelDivisor::Family::Scaled: {
            auto cv = closed_volume(d.base());
            if (!cv) return std::nullopt;
            double t = d.wrap_param();
            return t * t * *cv;
        }
        case ModelDivisor::Family::PrincipalShift:
            return closed_volume(d.base());
        case ModelDivisor::Family::Admissible: {
            const auto& q = d.admissible_params();
            if (q.lambda >= 1.0) return (std::log(q.lambda) + 1.0) / 2.0;
            return std::nullopt;
        }
        case ModelDivisor::Family::OneKink: {
            const auto& q = d.one_kink_params();
            double la = q.log_a, lb = q.log_b, lam = q.lambda;
            if (la >= 0.0 && lb >= 0.0) return lam * (la + lb);
            if (la >= 0.0) return lam * (la / (la - lb)) * la;
            if (lb >= 0.0) return lam * (lb / (lb - la)) * lb;
            return 0.0;
        }
        case ModelDivisor::Family::TwoKink: {
            const auto& q = d.two_kink_params();
            double la = q.log_alpha, lap = q.log_alpha_p;
            double lb = q.log_beta, lbp = q.log_beta_p;
            double degc0 = lap + lb, degci = la + lbp;
            if (degc0 >= 0.0 && degci >= 0.0) return 3.0 * (la + lap) + lb + lbp;
            if (la >= 0.0 && lap >= 0.0 && degc0 < 0.0 && degci < 0.0) {
                TwoKinkSplit s = two_kink_split(q);
                return (s.theta + s.theta_p) * (la + lap);
            }
            return std::nullopt;
        }
        case ModelDivisor::Family::Kinked:
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

double volume_p1(const ModelDivisor& d, double tol) {
    DecompositionP1 dec;
    try {
        dec = zariski_decompose_p1(d);
    } catch (const NoDecomposition&) {
        // Both radii below 1: no multiple carries sections, so the volume is 0.
        return 0.0;
    }
    double vq = pairing(dec.positive, dec.positive, tol);
    if (auto cv = closed_volume(d)) {
        if (std::abs(vq - *cv) > std::max(tol, 1e-8) * (1.0 + std::abs(*cv))) {
            throw QuadratureDivergence("volume quadrature disagrees with the closed form");
        }
        return *cv;
    }
    return vq;
}

// ---------------------------------------------------------------------------
// Negative part matrix

std::array<std::array<double, 2>, 2> negative_part_matrix(const ModelDivisor& d) {
    if (d.family() != ModelDivisor::Family::TwoKink) {
        throw UnsupportedConfiguration(
            "negative part matrix requires a two-kink divisor");
    }
    const auto& q = d.two_kink_params();
    if (q.log_alpha != 0.0 || q.log_alpha_p != 0.0 || q.log_beta >= 0.0 ||
        q.log_beta_p >= 0.0) {
        throw UnsupportedConfiguration(
            "negative part matrix requires alpha = alpha' = 1 and beta, beta' < 1");
    }
    ModelDivisor n1 = ModelDivisor::one_kink(1.0, 0.0, q.log_beta);
    ModelDivisor n2 = ModelDivisor::principal_shift(
        ModelDivisor::one_kink(1.0, q.log_beta_p, 0.0), -1.0);
    const HorizontalCurve c0 = HorizontalCurve::c0();
    const HorizontalCurve ci = HorizontalCurve::cinf();
    return {{{degree_on_curve(n1, c0), degree_on_curve(n1, ci)},
             {degree_on_curve(n2, c0), degree_on_curve(n2, ci)}}};
}

// ---------------------------------------------------------------------------
// Hodge index check

HodgeReport hodge_index_check(const ModelDivisor& d, double tol) {
    HodgeReport r;
    r.self_pairing = pairing(d, d, tol);
    bool fallback = false;
    try {
        r.vol_estimate = volume_p1(d, tol);
        r.method = "decomposition";
    } catch (const NotComputed&) {
        fallback = true;
    }
    if (fallback) {
        r.method = "count-lower-bound";
        RadialProfile p = lower(d);
        double best = 0.0;
        for (long n : {128L, 256L, 400L}) {
            long imin = (long)std::ceil(-double(n) * p.cinf - 1e-9);
            long imax = (long)std::floor(double(n) * p.c0 + 1e-9);
            if (imax < imin || imax - imin > 5000) continue;
            std::vector<double> lns;
            lns.reserve(size_t(imax - imin + 1));
            for (long i = imin; i <= imax; ++i) {
                double v = monomial_log_norm(p, n, i);
                if (std::isfinite(v)) lns.push_back(v);
            }
            best = std::max(best,
                            2.0 * log_count_lower_bound(lns) / (double(n) * double(n)));
        }
        r.vol_estimate = best;
    }
    r.holds = r.vol_estimate >=
              r.self_pairing - std::max(tol, 1e-9) * (1.0 + std::abs(r.self_pairing));
    return r;
}

// ---------------------------------------------------------------------------
// Section-norm helpers

double monomial_log_norm(const RadialProfile& p, long n, long i) {
    // Maximize the concave function f(t) = -i t - (n/2) g(t).
    const double sl = double(n) * p.c0 - double(i);     // slope at -infinity
    const double sr = -double(i) - double(n) * p.cinf;  // slope at +infinity
    if (sl < 0.0 || sr > 0.0) return kInf;
    auto f = [&](double t) { return -double(i) * t - 0.5 * double(n) * p.green(t); };
    auto fp = [&](double t) { return -double(i) - 0.5 * double(n) * p.dgreen(t); };
    double best = -kInf;
    if (sl == 0.0) best = std::max(best, -0.5 * double(n) * p.left_intercept());
    if (sr == 0.0) best = std::max(best, -0.5 * double(n) * p.right_intercept());
    double reach = 1.0;
    for (const auto& k : p.kinks) {
        best = std::max(best, f(k.t));
        reach = std::max(reach, std::abs(k.t));
    }
    for (const auto& a : p.adm) reach = std::max(reach, std::abs(std::log(a.lambda)) / 2.0);
    double radius = reach + 60.0;
    best = std::max(best, std::max(f(-radius), f(radius)));
    if (!p.adm.empty()) {
        std::vector<double> bps{-radius};
        for (const auto& k : p.kinks) bps.push_back(k.t);
        bps.push_back(radius);
        for (size_t s = 0; s + 1 < bps.size(); ++s) {
            double lo = bps[s], hi = bps[s + 1];
            if (hi - lo <= 0.0) continue;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (lo + hi);
                if (fp(mid) > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            best = std::max(best, f(0.5 * (lo + hi)));
        }
    }
    return best;
}

double log_count_upper_bound(const std::vector<double>& log_norms) {
    double s = 0.0;
    for (double ln : log_norms) {
        if (!std::isfinite(ln)) continue;  // infinite norm: only the zero coefficient
        s += ln < -700.0 ? std::log(2.0) - ln : std::log(2.0 * std::exp(-ln) + 1.0);
    }
    return s;
}

double log_count_lower_bound(const std::vector<double>& log_norms) {
    std::vector<double> lus;  // log radii, descending
    lus.reserve(log_norms.size());
    for (double ln : log_norms) {
        if (std::isfinite(ln)) lus.push_back(-ln);
    }
    std::sort(lus.begin(), lus.end(), std::greater<double>());
    double best = 0.0;  // the zero section alone
    // Axis union: the origin plus, for each coordinate, the +-floor(u) points
    // supported on that coordinate alone.  Accumulated as a log-sum-exp.
    {
        std::vector<double> terms{0.0};
        for (double lu : lus) {
            if (lu < 0.0) break;
            double m = std::floor(std::exp(std::min(lu, 34.0)));
            if (lu >= 34.0) {
                terms.push_back(std::log(2.0) + lu);
            } else if (m >= 1.0) {
                terms.push_back(std::log(2.0 * m));
            }
        }
        double mx = *std::max_element(terms.begin(), terms.end());
        double acc = 0.0;
        for (double v : terms) acc += std::exp(v - mx);
        best = std::max(best, mx + std::log(acc));
    }
    // Pooled boxes: the k largest coordinates with |c| <= floor(u/k) each; the
    // triangle inequality certifies every such point.
    for (size_t k = 1; k <= lus.size(); ++k) {
        double lk = std::log(double(k));
        double tot = 0.0;
        for (size_t i = 0; i < k; ++i) {
            double lu = lus[i] - lk;
            if (lu < 0.0) break;
            if (lu >= 34.0) {
                tot += std::log(2.0) + lu;
            } else {
                tot += std::log(2.0 * std::floor(std::exp(lu)) + 1.0);
            }
        }
        best = std::max(best, tot);
    }
    return best;
}

}  // namespace zar::p1
