#pragma once

// Adaptive Gauss-Kronrod quadrature (15-point Kronrod / 7-point Gauss pair),
// shared by the divisor-pairing and section-lattice translation units.
// Private to src/; not part of the installed headers.

#include "zariskilab/p1_divisors.hpp"

#include <cmath>
#include <functional>

namespace zar::detail {

constexpr double kXGK[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWGK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

inline double gk15(const std::function<double(double)>& f, double a, double b, double* err,
                   double* resabs) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    double fc = f(c);
    double sk = fc * kWGK[7];
    double sg = fc * kWG[3];
    double sa = std::abs(fc) * kWGK[7];
    for (int j = 0; j < 7; ++j) {
        double x = h * kXGK[j];
        double f1 = f(c - x);
        double f2 = f(c + x);
        sk += kWGK[j] * (f1 + f2);
        sa += kWGK[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) sg += kWG[j / 2] * (f1 + f2);
    }
    *err = std::abs((sk - sg) * h);
    *resabs = sa * h;
    return sk * h;
}

inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double eps, int depth) {
    double err = 0.0, resabs = 0.0;
    double v = gk15(f, a, b, &err, &resabs);
    if (!std::isfinite(v)) {
        throw p1::QuadratureDivergence("integrand is not finite");
    }
    // The Kronrod-Gauss difference carries roundoff noise of a few dozen ulps
    // of the absolute integral; below that level the estimate is not real
    // error and subdivision cannot reduce it (it would recurse until the
    // width floor instead).
    double floor = 50.0 * 2.220446049250313e-16 * resabs;
    if (err <= eps || err <= floor ||
        (b - a) <= 1e-13 * (1.0 + std::abs(a) + std::abs(b))) {
        return v;
    }
    if (depth >= 60) {
        throw p1::QuadratureDivergence("adaptive quadrature failed to converge");
    }
    double mid = 0.5 * (a + b);
    return integrate_adaptive(f, a, mid, 0.5 * eps, depth + 1) +
           integrate_adaptive(f, mid, b, 0.5 * eps, depth + 1);
}

}  // namespace zar::detail
