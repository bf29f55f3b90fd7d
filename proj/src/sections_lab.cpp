#include "zariskilab/sections_lab.hpp"

#include "quadrature_detail.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>

namespace zar::sec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
constexpr double kWindow = 60.0;   // logistic-density window: tails below e^{-60}
constexpr double kBoxCap = 1e7;    // hard enumeration cap
constexpr double kMachineBoundary = 1e-12;  // closed-form boundary hits

double logistic_density(double s) {
    double ea = std::exp(-std::abs(s));
    return ea / ((1.0 + ea) * (1.0 + ea));
}

double logsumexp(const std::vector<double>& xs) {
    double m = -kInf;
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

// ---------------------------------------------------------------------------
// Sparse section as parallel arrays (exponents ascending, coefficients != 0).

struct FlatSection {
    std::vector<long long> is;
    std::vector<double> cs;
};

FlatSection flatten_checked(const SectionSpace& space, const IntegerSection& s) {
    FlatSection f;
    for (const auto& [i, c] : s.coeffs) {
        if (c == 0) continue;
        if (!std::binary_search(space.exponents.begin(), space.exponents.end(), i)) {
            throw InvalidSection("section exponent outside the space");
        }
        f.is.push_back(i);
        f.cs.push_back(double(c));
    }
    if (f.is.empty()) throw ZeroSection();
    return f;
}

// ---------------------------------------------------------------------------
// Angle maximization: max over theta of |sum_j b_j e^{-I i_j theta}| for real
// signed magnitudes b_j.  Dense sampling plus golden-section refinement around
// the best local maxima.

double angle_max(const std::vector<long long>& is, const std::vector<double>& b, int samples) {
    if (is.size() == 1) return std::abs(b[0]);
    long long span = 1;
    for (long long i : is) span = std::max(span, std::llabs(i - is[0]));
    int n_samp = std::max(samples, int(std::min<long long>(32 * span, 8192)));
    auto sq = [&](double theta) {
        std::complex<double> acc(0.0, 0.0);
        for (size_t j = 0; j < is.size(); ++j) {
            acc += b[j] * std::exp(std::complex<double>(0.0, -double(is[j]) * theta));
        }
        return std::norm(acc);
    };
    // Dense pass, keeping the three best well-separated samples.
    std::vector<std::pair<double, double>> best;  // (value, theta)
    double step = 2.0 * kPi / n_samp;
    for (int k = 0; k < n_samp; ++k) {
        double th = k * step;
        double v = sq(th);
        best.emplace_back(v, th);
    }
    std::sort(best.begin(), best.end(), std::greater<>());
    std::vector<double> seeds;
    for (const auto& [v, th] : best) {
        bool close = false;
        for (double s : seeds) {
            double d = std::abs(th - s);
            d = std::min(d, 2.0 * kPi - d);
            if (d < 2.5 * step) close = true;
        }
        if (!close) seeds.push_back(th);
        if (seeds.size() == 3) break;
    }
    // Golden-section refinement around each seed.
    const double gr = 0.6180339887498949;
    double out = 0.0;
    for (double s : seeds) {
        double lo = s - step, hi = s + step;
        double x1 = hi - gr * (hi - lo);
        double x2 = lo + gr * (hi - lo);
        double f1 = sq(x1), f2 = sq(x2);
        for (int it = 0; it < 80; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = sq(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = sq(x1);
            }
        }
        out = std::max(out, std::max(f1, f2));
    }
    return std::sqrt(out);
}

// log of the angle maximum of |s| e^{-n g/2} on the circle log|z| = t,
// computed with an overflow-safe shift.
double log_circle_max(const p1::RadialProfile& p, int n, const FlatSection& f, double t,
                      int samples) {
    double shift = -kInf;
    std::vector<double> logmag(f.is.size());
    for (size_t j = 0; j < f.is.size(); ++j) {
        logmag[j] = std::log(std::abs(f.cs[j])) - double(f.is[j]) * t;
        shift = std::max(shift, logmag[j]);
    }
    std::vector<double> b(f.is.size());
    for (size_t j = 0; j < f.is.size(); ++j) {
        b[j] = std::copysign(std::exp(logmag[j] - shift), f.cs[j]);
    }
    return shift + std::log(angle_max(f.is, b, samples)) - 0.5 * n * p.green(t);
}

// log sup norm of an integer section.  Kink-only profiles reduce exactly to
// kink circles plus zero-slope edge limits (the radial factor log max_theta is
// convex in t by the three-circle theorem, so piecewise-linear weights put the
// maximum on breakpoints); profiles with admissible terms use a grid search
// with golden refinement.
double log_sup_core(const p1::RadialProfile& p, int n, const FlatSection& f, int samples) {
    if (f.is.size() == 1) {
        return std::log(std::abs(f.cs[0])) + p1::monomial_log_norm(p, n, f.is[0]);
    }
    long long i_min = f.is.front(), i_max = f.is.back();
    std::vector<double> cands;
    // Edge limits exist exactly when the corresponding slope vanishes.
    if (std::abs(double(n) * p.c0 - double(i_max)) <= 1e-9) {
        cands.push_back(std::log(std::abs(f.cs.back())) - 0.5 * n * p.left_intercept());
    }
    if (std::abs(double(i_min) + double(n) * p.cinf) <= 1e-9) {
        cands.push_back(std::log(std::abs(f.cs.front())) - 0.5 * n * p.right_intercept());
    }
    if (p.adm.empty()) {
        for (const auto& k : p.kinks) {
            cands.push_back(log_circle_max(p, n, f, k.t, samples));
        }
        if (cands.empty()) {
            // No kinks and no zero-slope edge cannot happen for a convex
            // radial factor; fall through to the search defensively.
            cands.push_back(log_circle_max(p, n, f, 0.0, samples));
        }
        return *std::max_element(cands.begin(), cands.end());
    }
    // Radial search: scan the cheap triangle upper envelope
    //   U(t) = log sum_j |c_j| e^{-i_j t} - (n/2) g(t) >= F(t) >= U(t) - log m,
    // keep the grid circles that can still carry the maximum, rank them by a
    // coarse angle search, then golden-refine the best few.
    double lo = 0.0, hi = 0.0;
    for (const auto& k : p.kinks) {
        lo = std::min(lo, k.t);
        hi = std::max(hi, k.t);
    }
    for (const auto& a : p.adm) {
        lo = std::min(lo, 0.5 * std::log(a.lambda));
        hi = std::max(hi, 0.5 * std::log(a.lambda));
    }
    lo -= 30.0;
    hi += 30.0;
    const double step = 0.05;
    std::vector<double> logc(f.is.size());
    for (size_t j = 0; j < f.is.size(); ++j) logc[j] = std::log(std::abs(f.cs[j]));
    std::vector<std::pair<double, double>> env;  // (U, t)
    double bestU = -kInf;
    for (double t = lo; t <= hi + 1e-12; t += step) {
        std::vector<double> terms(f.is.size());
        for (size_t j = 0; j < f.is.size(); ++j) terms[j] = logc[j] - double(f.is[j]) * t;
        double u = logsumexp(terms) - 0.5 * n * p.green(t);
        env.emplace_back(u, t);
        bestU = std::max(bestU, u);
    }
    // Window margin: log m covers the envelope gap, plus one grid step of the
    // worst-case slope (|U'| <= max|i_j| + n max(|c0|, |cinf|) by convexity).
    double maxi = 0.0;
    for (long long i : f.is) maxi = std::max(maxi, double(std::llabs(i)));
    double slope = maxi + double(n) * std::max(std::abs(p.c0), std::abs(p.cinf));
    double margin = std::log(double(f.is.size())) + 0.5 + step * slope;
    std::vector<std::pair<double, double>> vals;  // (coarse F, t)
    for (const auto& [u, t] : env) {
        if (u >= bestU - margin) vals.emplace_back(log_circle_max(p, n, f, t, 64), t);
    }
    std::sort(vals.begin(), vals.end(), std::greater<>());
    const double gr = 0.6180339887498949;
    double out = cands.empty() ? -kInf : *std::max_element(cands.begin(), cands.end());
    for (size_t seed = 0; seed < std::min<size_t>(3, vals.size()); ++seed) {
        double a = vals[seed].second - step, bqq = vals[seed].second + step;
        double x1 = bqq - gr * (bqq - a);
        double x2 = a + gr * (bqq - a);
        double f1 = log_circle_max(p, n, f, x1, samples);
        double f2 = log_circle_max(p, n, f, x2, samples);
        for (int it = 0; it < 70; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (bqq - a);
                f2 = log_circle_max(p, n, f, x2, samples);
            } else {
                bqq = x2;
                x2 = x1;
                f2 = f1;
                x1 = bqq - gr * (bqq - a);
                f1 = log_circle_max(p, n, f, x1, samples);
            }
        }
        out = std::max(out, std::max(f1, f2));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Monomial inner products: log of I = int e^{-i s - n g(s/2)} w(s) ds with the
// stabilizing shift 2 ln_i (the integrand is then bounded by w <= 1/4).

double log_inner_core(const p1::RadialProfile& p, int n, long long i, double tol) {
    double ln = p1::monomial_log_norm(p, n, long(i));
    if (!std::isfinite(ln)) throw InvalidSection("monomial exponent outside the space");
    std::vector<double> cuts{-kWindow, 0.0, kWindow};
    for (const auto& k : p.kinks) {
        double s = 2.0 * k.t;
        if (s > -kWindow && s < kWindow) cuts.push_back(s);
    }
    if (!p.adm.empty()) {
        // Interior peak of -i t - (n/2) g(t): bisect the monotone derivative
        // so the adaptive intervals cannot straddle a narrow maximum unseen.
        double lo = -100.0, hi = 100.0;
        auto fp = [&](double t) { return -double(i) - 0.5 * n * p.dgreen(t); };
        if (fp(lo) > 0.0 && fp(hi) < 0.0) {
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (lo + hi);
                (fp(mid) > 0.0 ? lo : hi) = mid;
            }
            double speak = lo + hi;  // 2 * t_peak
            for (double off : {-2.0, 0.0, 2.0}) {
                double s = speak + off;
                if (s > -kWindow && s < kWindow) cuts.push_back(s);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto f = [&](double s) {
        return std::exp(-double(i) * s - double(n) * p.green(0.5 * s) - 2.0 * ln) *
               logistic_density(s);
    };
    double eps = std::max(tol * 1e-3, 1e-14) / double(cuts.size() - 1);
    double total = 0.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        total += detail::integrate_adaptive(f, cuts[k], cuts[k + 1], eps, 0);
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw p1::QuadratureDivergence("monomial inner product did not converge");
    }
    return 2.0 * ln + std::log(total);
}

// Unit-ball exponent subset (norm <= 1, machine-inclusive).
std::vector<size_t> ball_indices(const SectionSpace& sp) {
    std::vector<size_t> out;
    for (size_t j = 0; j < sp.exponents.size(); ++j) {
        if (sp.log_norms[j] <= kMachineBoundary) out.push_back(j);
    }
    return out;
}

std::vector<double> default_grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double t = lo; t <= hi + 1e-12; t += step) g.push_back(t);
    return g;
}

// log dist over a sub-basis given precomputed log inner products.
double log_dist_at(const p1::RadialProfile& p, int n, const std::vector<long long>& is,
                   const std::vector<double>& li, double t) {
    double g = p.green(t);
    std::vector<double> terms(is.size());
    for (size_t j = 0; j < is.size(); ++j) {
        terms[j] = -2.0 * double(is[j]) * t - double(n) * g - li[j];
    }
    return logsumexp(terms);
}

// Combined radial profile sum_k a_k * profile_k (linear in the Green data).
p1::RadialProfile combine(const std::vector<p1::RadialProfile>& ps,
                          const std::vector<double>& as) {
    p1::RadialProfile out;
    for (size_t k = 0; k < ps.size(); ++k) {
        const auto& p = ps[k];
        double a = as[k];
        if (a == 0.0) continue;
        out.a0 += a * p.a0;
        out.b0 += a * p.b0;
        out.c0 += a * p.c0;
        out.cinf += a * p.cinf;
        for (const auto& kk : p.kinks) out.kinks.push_back({kk.t, a * kk.mass});
        for (const auto& ad : p.adm) out.adm.push_back({a * ad.weight, ad.lambda});
    }
    std::sort(out.kinks.begin(), out.kinks.end(),
              [](const p1::KinkPoint& x, const p1::KinkPoint& y) { return x.t < y.t; });
    std::vector<p1::KinkPoint> merged;
    for (const auto& kk : out.kinks) {
        if (!merged.empty() && merged.back().t == kk.t) {
            merged.back().mass += kk.mass;
        } else {
            merged.push_back(kk);
        }
    }
    out.kinks = std::move(merged);
    return out;
}

SectionSpace space_from_profile(p1::RadialProfile p, const p1::ModelDivisor& d, int n) {
    SectionSpace sp;
    sp.divisor = d;
    sp.n = n;
    sp.profile = std::move(p);
    long long i_lo = (long long)std::ceil(-double(n) * sp.profile.cinf - 1e-9);
    long long i_hi = (long long)std::floor(double(n) * sp.profile.c0 + 1e-9);
    for (long long i = i_lo; i <= i_hi; ++i) {
        double ln = p1::monomial_log_norm(sp.profile, n, long(i));
        if (std::isfinite(ln)) {
            sp.exponents.push_back(i);
            sp.log_norms.push_back(ln);
        }
    }
    if (sp.exponents.empty()) throw EmptySections();
    return sp;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public operations

SectionSpace make_section_space(const p1::ModelDivisor& divisor, int n) {
    if (n < 1) throw std::invalid_argument("section space degree must be positive");
    return space_from_profile(p1::lower(divisor), divisor, n);
}

double sup_norm(const SectionSpace& space, const IntegerSection& s, double tol) {
    FlatSection f = flatten_checked(space, s);
    (void)tol;
    return std::exp(log_sup_core(space.profile, space.n, f, 512));
}

double log_inner_monomial(const SectionSpace& space, long long i, double tol) {
    if (!std::binary_search(space.exponents.begin(), space.exponents.end(), i)) {
        throw InvalidSection("monomial exponent outside the space");
    }
    return log_inner_core(space.profile, space.n, i, tol);
}

double log_inner(const SectionSpace& space, const IntegerSection& s, double tol) {
    FlatSection f = flatten_checked(space, s);
    std::vector<double> terms(f.is.size());
    for (size_t j = 0; j < f.is.size(); ++j) {
        terms[j] = 2.0 * std::log(std::abs(f.cs[j])) +
                   log_inner_core(space.profile, space.n, f.is[j], tol);
    }
    return logsumexp(terms);
}

// ---------------------------------------------------------------------------
// Exact counting

namespace {

struct Enumerator {
    const SectionSpace& sp;
    double tol;
    double bound2;                 // (1 + tol)^2, the Parseval rejection level
    std::vector<size_t> active;    // indices with cap >= 1, ascending exponent
    std::vector<long long> caps;
    std::vector<double> w;         // e^{ln} per active coordinate
    std::vector<double> circw;     // K x m circle weights e^{-2 i t_k - n g(t_k)}
    size_t K = 0;
    std::vector<double> psum;      // (m+1) x K running circle-Parseval sums
    std::vector<long long> cur;
    long long members = 0;         // lexicographically-positive members
    long long ambiguous = 0;

    Enumerator(const SectionSpace& s, double t)
        : sp(s), tol(t), bound2((1.0 + t) * (1.0 + t)) {}

    // Parseval at fixed circles is a valid sup lower bound for any profile
    // (per-coordinate e^{2 ln} is not once monomial maxima sit on different
    // circles).  Probe the kink circles, the admissible centers, and 0.
    void init_circles() {
        std::vector<double> ts{0.0};
        for (const auto& k : sp.profile.kinks) ts.push_back(k.t);
        for (const auto& a : sp.profile.adm) ts.push_back(0.5 * std::log(a.lambda));
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        K = ts.size();
        size_t m = active.size();
        circw.assign(K * m, 0.0);
        for (size_t k = 0; k < K; ++k) {
            double g = sp.profile.green(ts[k]);
            for (size_t j = 0; j < m; ++j) {
                double e = -2.0 * double(sp.exponents[active[j]]) * ts[k] -
                           double(sp.n) * g;
                circw[k * m + j] = std::exp(std::min(e, 700.0));
            }
        }
        psum.assign((m + 1) * K, 0.0);
        cur.assign(m, 0);
    }

    void classify() {
        double ub = 0.0;
        FlatSection f;
        for (size_t j = 0; j < active.size(); ++j) {
            if (cur[j] == 0) continue;
            ub += std::abs(double(cur[j])) * w[j];
            f.is.push_back(sp.exponents[active[j]]);
            f.cs.push_back(double(cur[j]));
        }
        if (ub <= 1.0 - tol) {
            ++members;
            return;
        }
        double v = std::exp(log_sup_core(sp.profile, sp.n, f, 512));
        if (std::abs(v - 1.0) <= kMachineBoundary) {
            ++members;  // deterministic boundary hit
            return;
        }
        if (std::abs(v - 1.0) <= tol) {
            double v2 = std::exp(log_sup_core(sp.profile, sp.n, f, 4096));
            if (std::abs(v2 - 1.0) <= kMachineBoundary) {
                ++members;
                return;
            }
            if (std::abs(v2 - 1.0) <= tol / 10.0) {
                ++ambiguous;
                return;
            }
            v = v2;
        }
        if (v <= 1.0) ++members;
    }

    // Recursion with the partial circle-Parseval prune; `positive_seen`
    // implements the +/- symmetry (count the first-nonzero-positive half).
    void rec(size_t j, bool positive_seen) {
        size_t m = active.size();
        if (j == m) {
            if (positive_seen) classify();
            return;
        }
        long long lo = positive_seen ? -caps[j] : 0;
        for (long long c = lo; c <= caps[j]; ++c) {
            cur[j] = c;
            double c2 = double(c) * double(c);
            bool prune = false;
            for (size_t k = 0; k < K; ++k) {
                double s = psum[j * K + k] + c2 * circw[k * m + j];
                psum[(j + 1) * K + k] = s;
                if (s > bound2) prune = true;
            }
            if (!prune) rec(j + 1, positive_seen || c > 0);
        }
        cur[j] = 0;
    }
};

}  // namespace

CountResult hhat0_exact(const SectionSpace& space, double tol) {
    Enumerator en(space, tol);
    double box = 1.0;
    for (size_t j = 0; j < space.exponents.size(); ++j) {
        double cap = std::floor(std::exp(-space.log_norms[j]) + kMachineBoundary);
        if (cap >= 1.0) {
            en.active.push_back(j);
            en.caps.push_back((long long)cap);
            en.w.push_back(std::exp(space.log_norms[j]));
            box *= 2.0 * cap + 1.0;
        }
    }
    if (box > kBoxCap) throw BoxTooLarge(box);
    if (!en.active.empty()) {
        en.init_circles();
        en.rec(0, false);
    }
    if (en.ambiguous > 0) throw AmbiguousBoundary(2 * en.ambiguous);  // both signs
    CountResult r;
    r.count = 2 * en.members + 1;  // +/- halves and the zero section
    r.log_count = std::log(double(r.count));
    return r;
}

CountBounds hhat0_bounds(const SectionSpace& space) {
    CountBounds b;
    b.log_lower = p1::log_count_lower_bound(space.log_norms);
    b.log_upper = p1::log_count_upper_bound(space.log_norms);
    return b;
}

// ---------------------------------------------------------------------------
// Distortion

DistortionTable distortion(const SectionSpace& space, const std::vector<long long>& sub_basis,
                           const std::vector<double>& log_radii, double tol) {
    if (sub_basis.empty()) throw InvalidSection("distortion needs a nonempty sub-basis");
    std::vector<double> li(sub_basis.size());
    for (size_t j = 0; j < sub_basis.size(); ++j) {
        li[j] = log_inner_monomial(space, sub_basis[j], tol);
    }
    DistortionTable out;
    out.log_r = log_radii;
    out.log_dist.reserve(log_radii.size());
    for (double t : log_radii) {
        out.log_dist.push_back(log_dist_at(space.profile, space.n, sub_basis, li, t));
    }
    return out;
}

DistGrowthReport dist_growth_probe(const p1::ModelDivisor& divisor, int n_max, double tol) {
    if (n_max < 1 || n_max > 32) {
        throw std::invalid_argument("dist_growth_probe requires 1 <= n_max <= 32");
    }
    auto grid = default_grid(-10.0, 10.0, 0.25);
    DistGrowthReport rep;
    std::vector<double> logr(size_t(n_max) + 1, -kInf);  // log D_n - 3 log(n+1)
    for (int n = 1; n <= n_max; ++n) {
        SectionSpace sp;
        try {
            sp = make_section_space(divisor, n);
        } catch (const EmptySections&) {
            continue;
        }
        auto ball = ball_indices(sp);
        if (ball.empty()) continue;
        std::vector<long long> is;
        std::vector<double> li;
        for (size_t j : ball) {
            is.push_back(sp.exponents[j]);
            li.push_back(log_inner_core(sp.profile, n, sp.exponents[j], tol));
        }
        double best = -kInf;
        for (double t : grid) {
            best = std::max(best, log_dist_at(sp.profile, n, is, li, t));
        }
        rep.ns.push_back(n);
        rep.log_dn.push_back(best);
        logr[size_t(n)] = best - 3.0 * std::log(double(n) + 1.0);
    }
    double log_cfit = -kInf, log_cchain = -kInf;
    for (size_t k = 0; k < rep.ns.size(); ++k) {
        log_cfit = std::max(log_cfit, logr[size_t(rep.ns[k])]);
    }
    for (int n : rep.ns) {
        for (int m : rep.ns) {
            if (m < n || n + m > n_max) continue;
            if (!std::isfinite(logr[size_t(n + m)])) continue;
            log_cchain = std::max(log_cchain, logr[size_t(n)] + logr[size_t(m)] -
                                                  logr[size_t(n + m)]);
        }
    }
    double log_c = std::max(log_cfit, log_cchain);
    rep.c_fit = std::exp(log_cfit);
    rep.c_chain = std::isfinite(log_cchain) ? std::exp(log_cchain) : 0.0;
    rep.c = std::exp(log_c);
    rep.chain_ok = true;
    for (int n : rep.ns) {
        for (int m : rep.ns) {
            if (m < n || n + m > n_max || !std::isfinite(logr[size_t(n + m)])) continue;
            if (logr[size_t(n)] + logr[size_t(m)] - log_c > logr[size_t(n + m)] + 1e-9) {
                rep.chain_ok = false;
            }
        }
    }
    // Log-log regression of log D_n on log(n+1).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < rep.ns.size(); ++k) {
        double x = std::log(double(rep.ns[k]) + 1.0);
        double y = rep.log_dn[k];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = double(rep.ns.size());
    rep.growth_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return rep;
}

// ---------------------------------------------------------------------------
// Gromov probe

GromovReport gromov_probe(const std::vector<p1::ModelDivisor>& divisors, int samples,
                          double tol) {
    if (divisors.empty()) throw std::invalid_argument("gromov_probe needs divisors");
    if (samples < 2) throw std::invalid_argument("gromov_probe needs at least 2 samples");
    std::vector<p1::RadialProfile> ps;
    ps.reserve(divisors.size());
    for (const auto& d : divisors) ps.push_back(p1::lower(d));

    std::mt19937 gen(20260825u);
    GromovReport rep;
    rep.samples = samples;
    double best = -kInf, best_half = -kInf, best_doubled = -kInf;

    for (int k = 0; k < samples; ++k) {
        std::vector<double> as(ps.size());
        double suma = 0.0;
        for (auto& a : as) {
            a = 0.1 * double(1 + gen() % 20);
            suma += a;
        }
        p1::RadialProfile g1 = combine(ps, as);
        long long i_lo = (long long)std::ceil(-g1.cinf - 1e-9);
        long long i_hi = (long long)std::floor(g1.c0 + 1e-9);
        std::vector<long long> pool;
        for (long long i = i_lo; i <= i_hi; ++i) {
            if (std::isfinite(p1::monomial_log_norm(g1, 1, long(i)))) pool.push_back(i);
        }
        int m = 1 + int(gen() % 3);
        FlatSection f;
        for (int q = 0; q < m && !pool.empty(); ++q) {
            long long i = pool[gen() % pool.size()];
            long long c = (long long)(gen() % 11) - 5;
            bool dup = false;
            for (size_t j = 0; j < f.is.size(); ++j) {
                if (f.is[j] == i) dup = true;
            }
            if (dup || c == 0) continue;
            f.is.push_back(i);
            f.cs.push_back(double(c));
        }
        if (pool.empty()) continue;
        if (f.is.empty()) {
            f.is.push_back(pool.front());
            f.cs.push_back(1.0);
        }
        std::vector<size_t> order(f.is.size());
        for (size_t j = 0; j < order.size(); ++j) order[j] = j;
        std::sort(order.begin(), order.end(),
                  [&](size_t x, size_t y) { return f.is[x] < f.is[y]; });
        FlatSection fs;
        for (size_t j : order) {
            fs.is.push_back(f.is[j]);
            fs.cs.push_back(f.cs[j]);
        }

        // Deterministic enrichment: besides the random section, probe every
        // single monomial and the aligned all-ones section, so near-extremal
        // ratios recur in every sample and the running max saturates.
        std::vector<FlatSection> cands;
        cands.push_back(fs);
        for (long long i : pool) {
            FlatSection s1;
            s1.is = {i};
            s1.cs = {1.0};
            cands.push_back(std::move(s1));
        }
        if (pool.size() >= 2) {
            FlatSection al;
            for (long long i : pool) {
                al.is.push_back(i);
                al.cs.push_back(1.0);
            }
            cands.push_back(std::move(al));
        }

        auto best_ratio_under = [&](double scale) {
            std::vector<double> a2(as);
            for (auto& a : a2) a *= scale;
            p1::RadialProfile gp = combine(ps, a2);
            std::map<long long, double> li;
            for (long long i : pool) {
                if (std::isfinite(p1::monomial_log_norm(gp, 1, long(i)))) {
                    li[i] = log_inner_core(gp, 1, i, tol);
                }
            }
            double bst = -kInf;
            for (const auto& cand : cands) {
                bool ok = true;
                std::vector<double> terms(cand.is.size());
                for (size_t j = 0; j < cand.is.size(); ++j) {
                    auto it = li.find(cand.is[j]);
                    if (it == li.end()) {
                        ok = false;
                        break;
                    }
                    terms[j] = 2.0 * std::log(std::abs(cand.cs[j])) + it->second;
                }
                if (!ok) continue;
                double ls = log_sup_core(gp, 1, cand, 512);
                bst = std::max(bst,
                               2.0 * ls - 2.0 * std::log1p(scale * suma) - logsumexp(terms));
            }
            return bst;
        };
        double lr = best_ratio_under(1.0);
        double lr2 = best_ratio_under(2.0);
        best = std::max(best, lr);
        if (k < samples / 2) best_half = std::max(best_half, lr);
        best_doubled = std::max(best_doubled, lr2);
    }
    rep.constant = std::exp(best);
    rep.constant_half = std::exp(best_half);
    rep.constant_doubled = std::exp(best_doubled);
    rep.stable = rep.constant <= 1.1 * rep.constant_half;
    rep.doubling_bounded = rep.constant_doubled <= rep.constant * (1.0 + 1e-6);
    return rep;
}

// ---------------------------------------------------------------------------
// Sigma-decomposition and multiplicities

namespace {

double clamp_mult(double nu) { return std::abs(nu) <= 1e-9 ? 0.0 : nu; }

}  // namespace

SigmaDecomposition sigma_decomposition(const p1::ModelDivisor& divisor, int n, double tol) {
    SectionSpace sp = make_section_space(divisor, n);
    auto ball = ball_indices(sp);
    if (ball.empty()) throw EmptySections();
    SigmaDecomposition out;
    out.i_min_ball = sp.exponents[ball.front()];
    out.i_max_ball = sp.exponents[ball.back()];
    double nu0 = clamp_mult(double(n) * sp.profile.c0 - double(out.i_max_ball));
    double nuinf = clamp_mult(double(out.i_min_ball) + double(n) * sp.profile.cinf);
    out.f_c0 = nu0 / double(n);
    out.f_cinf = nuinf / double(n);
    out.m_c0 = sp.profile.c0 - out.f_c0;
    out.m_cinf = sp.profile.cinf - out.f_cinf;
    std::vector<long long> is;
    std::vector<double> li;
    for (size_t j : ball) {
        is.push_back(sp.exponents[j]);
        li.push_back(log_inner_core(sp.profile, n, sp.exponents[j], tol));
    }
    out.grid_log_r = default_grid(-10.0, 10.0, 0.5);
    out.green_m.reserve(out.grid_log_r.size());
    for (double t : out.grid_log_r) {
        out.green_m.push_back(sp.profile.green(t) +
                              log_dist_at(sp.profile, n, is, li, t) / double(n));
    }
    return out;
}

MultiplicityReport asymptotic_multiplicity(const p1::ModelDivisor& divisor,
                                           const p1::HorizontalCurve& curve, int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be positive");
    MultiplicityReport rep;
    rep.mu = kInf;
    p1::RadialProfile p = p1::lower(divisor);
    for (int n = 1; n <= n_max; ++n) {
        SectionSpace sp;
        try {
            sp = space_from_profile(p, divisor, n);
        } catch (const EmptySections&) {
            continue;
        }
        auto ball = ball_indices(sp);
        if (ball.empty()) continue;
        double nu = 0.0;
        switch (curve.kind()) {
            case p1::HorizontalCurve::Kind::C0:
                nu = clamp_mult(double(n) * p.c0 - double(sp.exponents[ball.back()]));
                break;
            case p1::HorizontalCurve::Kind::CInf:
                nu = clamp_mult(double(sp.exponents[ball.front()]) + double(n) * p.cinf);
                break;
            case p1::HorizontalCurve::Kind::Rational:
                nu = 0.0;  // monomials never vanish along z = m/n with m != 0
                break;
        }
        rep.sequence.emplace_back(n, nu / double(n));
        rep.mu = std::min(rep.mu, nu / double(n));
    }
    if (rep.sequence.empty()) throw EmptySections();
    return rep;
}

// ---------------------------------------------------------------------------
// Asymptotic orthogonality

OrthogonalityReport orthogonality_probe(const p1::ModelDivisor& divisor,
                                        const std::vector<int>& n_list, double tol) {
    p1::RadialProfile p = p1::lower(divisor);
    if (!p.adm.empty() || p.kinks.size() > 1) {
        throw p1::UnsupportedConfiguration(
            "orthogonality probe supports one-kink (possibly scaled) divisors only");
    }
    OrthogonalityReport rep;
    rep.eval_consistent = true;
    for (int n : n_list) {
        if (n < 1) throw std::invalid_argument("orthogonality probe needs positive degrees");
        SectionSpace sp = space_from_profile(p, divisor, n);
        auto ball = ball_indices(sp);
        if (ball.empty()) throw EmptySections();
        long long i_max = sp.exponents[ball.back()];
        double f_coeff = clamp_mult(double(n) * p.c0 - double(i_max)) / double(n);
        rep.ns.push_back(n);
        if (f_coeff == 0.0) {
            rep.values.push_back(0.0);
            continue;
        }
        std::vector<long long> is;
        std::vector<double> li;
        for (size_t j : ball) {
            is.push_back(sp.exponents[j]);
            li.push_back(log_inner_core(sp.profile, n, sp.exponents[j], tol * 1e-8));
        }
        // Canonical value of g + (1/n) log dist + 2 (i_max/n) t along C0,
        // Richardson-extrapolated from t = -40 and -44 (correction ~ e^{2t}).
        auto v = [&](double t) {
            return p.green(t) + log_dist_at(p, n, is, li, t) / double(n) +
                   2.0 * double(i_max) / double(n) * t;
        };
        double v40 = v(-40.0), v44 = v(-44.0);
        double rho = std::exp(-8.0);
        double limit = (v44 - rho * v40) / (1.0 - rho);
        if (std::abs(v44 - v40) > tol) rep.eval_consistent = false;
        rep.values.push_back(f_coeff * 0.5 * limit);
    }
    rep.nonnegative = true;
    for (double v : rep.values) {
        if (v < -1e-12) rep.nonnegative = false;
    }
    rep.decreasing = rep.values.size() >= 2 && rep.values.back() < rep.values.front();
    size_t k = rep.values.size();
    if (k >= 2) {
        double n1 = double(rep.ns[k - 2]), n2 = double(rep.ns[k - 1]);
        double x1 = std::log(n1) / n1, x2 = std::log(n2) / n2;
        double v1 = rep.values[k - 2], v2 = rep.values[k - 1];
        if (std::abs(x1 - x2) > 1e-15) {
            double a = (v1 - v2) / (x1 - x2);
            rep.extrapolated_limit = v1 - a * x1;
        } else {
            rep.extrapolated_limit = v2;
        }
    } else if (k == 1) {
        rep.extrapolated_limit = rep.values[0];
    }
    rep.limit_within_tol = std::abs(rep.extrapolated_limit) <= tol;
    return rep;
}

}  // namespace zar::sec
