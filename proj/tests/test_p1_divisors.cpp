#include "zariskilab/p1_divisors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"

using namespace zar::p1;

namespace {

constexpr double kLog2 = 0.69314718055994531;
constexpr double kLog5 = 1.6094379124341004;

ModelDivisor ok(double lambda, double la, double lb) {
    return ModelDivisor::one_kink(lambda, la, lb);
}

double deg(const ModelDivisor& d, const HorizontalCurve& c) { return degree_on_curve(d, c); }

const HorizontalCurve C0 = HorizontalCurve::c0();
const HorizontalCurve CINF = HorizontalCurve::cinf();

}  // namespace

TEST_CASE("divisor construction and validation") {
    CHECK_THROWS_AS(ModelDivisor::one_kink(0.0, 1.0, 1.0), InvalidDivisor);
    CHECK_THROWS_AS(ModelDivisor::one_kink(-1.0, 1.0, 1.0), InvalidDivisor);
    CHECK_THROWS_AS(ModelDivisor::admissible(0.0), InvalidDivisor);
    CHECK_THROWS_AS(ModelDivisor::admissible(-0.5), InvalidDivisor);
    CHECK_THROWS_AS(ModelDivisor::scaled(ok(1, 1, -1), -2.0), InvalidDivisor);
    CHECK_NOTHROW(ModelDivisor::scaled(ok(1, 1, -1), 0.0));
    // Kinked masses must be positive.
    CHECK_THROWS_AS(ModelDivisor::kinked(1.0, 0.0, {{0.0, -1.0}}), InvalidDivisor);
    CHECK_THROWS_AS(ModelDivisor::kinked(1.0, 0.0, {{0.0, 0.0}}), InvalidDivisor);
    // Non-finite parameters are rejected.
    CHECK_THROWS_AS(ModelDivisor::one_kink(1.0, std::nan(""), 0.0), InvalidDivisor);
    CHECK_THROWS_AS(ModelDivisor::admissible(std::numeric_limits<double>::infinity()),
                    InvalidDivisor);

    CHECK(ok(1, 1, -1).family() == ModelDivisor::Family::OneKink);
    CHECK(ModelDivisor::zero().family() == ModelDivisor::Family::Scaled);
    CHECK_THROWS_AS(ok(1, 1, -1).two_kink_params(), UnsupportedFamily);
    CHECK_THROWS_AS(ok(1, 1, -1).base(), UnsupportedFamily);

    const auto& p = ok(2, 3, -1).one_kink_params();
    CHECK(p.lambda == 2.0);
    CHECK(p.log_a == 3.0);
    CHECK(p.log_b == -1.0);
}

TEST_CASE("horizontal curve validation") {
    CHECK_THROWS_AS(HorizontalCurve::rational_point(2, 4), InvalidCurve);
    CHECK_THROWS_AS(HorizontalCurve::rational_point(1, 0), InvalidCurve);
    CHECK_THROWS_AS(HorizontalCurve::rational_point(1, -2), InvalidCurve);
    CHECK_THROWS_AS(HorizontalCurve::rational_point(0, 2), InvalidCurve);
    CHECK_NOTHROW(HorizontalCurve::rational_point(-3, 5));
    // (0 : 1) is the curve C0 itself.
    CHECK(HorizontalCurve::rational_point(0, 1).kind() == HorizontalCurve::Kind::C0);
    CHECK(HorizontalCurve::rational_point(7, 1).m() == 7);
}

TEST_CASE("lowered radial profiles and green values") {
    SUBCASE("one-kink closed form") {
        // g(t) = -2*lambda*t + 2*max(log a + lambda*t, log b)
        auto d = ok(2, 3, -1);
        RadialProfile p = lower(d);
        CHECK(p.c0 == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(p.cinf == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(p.a0 == doctest::Approx(-2.0).epsilon(1e-15));
        REQUIRE(p.kinks.size() == 1);
        CHECK(p.kinks[0].t == doctest::Approx(-2.0).epsilon(1e-15));
        CHECK(p.kinks[0].mass == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(green_value(d, -3.0) == doctest::Approx(10.0).epsilon(1e-14));
        CHECK(green_value(d, 0.0) == doctest::Approx(6.0).epsilon(1e-14));
        CHECK(green_value(d, -2.0) == doctest::Approx(6.0).epsilon(1e-14));  // kink value
    }
    SUBCASE("admissible closed form") {
        auto d = ModelDivisor::admissible(1.0);
        CHECK(green_value(d, 0.0) == doctest::Approx(kLog2).epsilon(1e-14));
        auto dh = ModelDivisor::admissible(0.5);
        CHECK(green_value(dh, 1.0) ==
              doctest::Approx(0.065476495119568162).epsilon(1e-13));
        RadialProfile p = lower(dh);
        CHECK(p.c0 == 1.0);
        CHECK(p.cinf == 0.0);
        CHECK(p.a0 == doctest::Approx(std::log(0.5)).epsilon(1e-15));
        CHECK(p.min_green() == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("two-kink plateau") {
        auto d = ModelDivisor::two_kink(0.0, 0.0, -kLog2, -kLog2);
        CHECK(green_value(d, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
        RadialProfile p = lower(d);
        CHECK(p.c0 == 1.0);
        CHECK(p.cinf == 1.0);
        REQUIRE(p.kinks.size() == 2);
        CHECK(p.kinks[0].t == doctest::Approx(-kLog2).epsilon(1e-15));
        CHECK(p.kinks[1].t == doctest::Approx(kLog2).epsilon(1e-15));
    }
    SUBCASE("scaled flattens to a one-kink profile") {
        auto d = ModelDivisor::scaled(ok(1, 1, -1), 3.0);
        RadialProfile p = lower(d);
        CHECK(p.c0 == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(green_value(d, -5.0) ==
              doctest::Approx(3.0 * green_value(ok(1, 1, -1), -5.0)).epsilon(1e-14));
        RadialProfile z = lower(ModelDivisor::zero());
        CHECK(z.kinks.empty());
        CHECK(z.c0 == 0.0);
        CHECK(z.green(0.7) == 0.0);
    }
    SUBCASE("principal shift tilts slope but not intercepts") {
        auto d = ModelDivisor::principal_shift(ok(1, 1, -1), 2.0);
        RadialProfile p = lower(d);
        CHECK(p.c0 == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(p.cinf == doctest::Approx(-2.0).epsilon(1e-15));
        CHECK(p.left_intercept() == doctest::Approx(-2.0).epsilon(1e-13));
        CHECK(p.right_intercept() ==
              doctest::Approx(lower(ok(1, 1, -1)).right_intercept()).epsilon(1e-13));
        CHECK(green_value(d, 1.5) ==
              doctest::Approx(green_value(ok(1, 1, -1), 1.5) - 2.0 * 2.0 * 1.5).epsilon(1e-13));
    }
}

TEST_CASE("degree on curves: frozen closed forms") {
    SUBCASE("one-kink") {
        auto d = ok(2, 2, 4);
        CHECK(deg(d, C0) == doctest::Approx(4.0).epsilon(1e-14));    // log b
        CHECK(deg(d, CINF) == doctest::Approx(2.0).epsilon(1e-14));  // log a
        // lambda * log max(a^{1/lambda} m, b^{1/lambda} n) at (3 : 5)
        CHECK(deg(d, HorizontalCurve::rational_point(3, 5)) ==
              doctest::Approx(7.2188758248682007).epsilon(1e-13));
        CHECK(deg(ok(1, 1, -1), HorizontalCurve::rational_point(1, 1)) ==
              doctest::Approx(1.0).epsilon(1e-13));  // max(log a, log b)
        // Sign of m is irrelevant.
        CHECK(deg(d, HorizontalCurve::rational_point(-3, 5)) ==
              doctest::Approx(deg(d, HorizontalCurve::rational_point(3, 5))).epsilon(1e-14));
    }
    SUBCASE("admissible") {
        auto d = ModelDivisor::admissible(0.5);
        CHECK(deg(d, C0) == doctest::Approx(-0.34657359027997265).epsilon(1e-14));
        CHECK(deg(d, CINF) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(deg(ModelDivisor::admissible(3.0), HorizontalCurve::rational_point(1, 1)) ==
              doctest::Approx(kLog2).epsilon(1e-13));  // (1/2) log(1 + 3)
        CHECK(deg(ModelDivisor::admissible(1.0), HorizontalCurve::rational_point(2, 3)) ==
              doctest::Approx(0.5 * std::log(13.0)).epsilon(1e-13));
    }
    SUBCASE("two-kink") {
        auto d = ModelDivisor::two_kink(1.0, 0.5, -1.0, -2.0);
        CHECK(deg(d, C0) == doctest::Approx(-0.5).epsilon(1e-14));   // log(alpha' beta)
        CHECK(deg(d, CINF) == doctest::Approx(-1.0).epsilon(1e-14)); // log(alpha beta')
    }
    SUBCASE("principal shift leaves every degree unchanged") {
        auto base = ok(1, 1, -1);
        auto d = ModelDivisor::principal_shift(base, 2.5);
        for (const auto& c : {C0, CINF, HorizontalCurve::rational_point(3, 5),
                              HorizontalCurve::rational_point(-7, 2)}) {
            CHECK(deg(d, c) == doctest::Approx(deg(base, c)).epsilon(1e-12));
        }
    }
    SUBCASE("scaling is linear on degrees") {
        auto base = ModelDivisor::admissible(2.0);
        auto d = ModelDivisor::scaled(base, 3.0);
        CHECK(deg(d, C0) == doctest::Approx(3.0 * deg(base, C0)).epsilon(1e-13));
        CHECK(deg(d, HorizontalCurve::rational_point(4, 7)) ==
              doctest::Approx(3.0 * deg(base, HorizontalCurve::rational_point(4, 7)))
                  .epsilon(1e-13));
    }
}

TEST_CASE("pairing: frozen closed forms and symmetry") {
    SUBCASE("one-kink self-pairing equals lambda (log a + log b)") {
        CHECK(pairing(ok(1, 1, -1), ok(1, 1, -1)) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(pairing(ok(1, 1, 1), ok(1, 1, 1)) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(pairing(ok(2, 3, -1), ok(2, 3, -1)) == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("admissible self-pairing equals (log lambda + 1)/2") {
        CHECK(pairing(ModelDivisor::admissible(0.25), ModelDivisor::admissible(0.25)) ==
              doctest::Approx(-0.19314718055994531).epsilon(1e-9));
        CHECK(pairing(ModelDivisor::admissible(0.5), ModelDivisor::admissible(0.5)) ==
              doctest::Approx(0.15342640972002735).epsilon(1e-9));
        CHECK(pairing(ModelDivisor::admissible(1.0), ModelDivisor::admissible(1.0)) ==
              doctest::Approx(0.5).epsilon(1e-9));
        CHECK(pairing(ModelDivisor::admissible(2.0), ModelDivisor::admissible(2.0)) ==
              doctest::Approx(0.84657359027997265).epsilon(1e-9));
    }
    SUBCASE("one-kink against admissible: log a + (1/2) log(e^{2(lb-la)} + lambda)") {
        CHECK(pairing(ok(1, 1, -1), ModelDivisor::admissible(1.0)) ==
              doctest::Approx(1.0090749639589049).epsilon(1e-9));
        CHECK(pairing(ModelDivisor::admissible(1.0), ok(1, 1, -1)) ==
              doctest::Approx(1.0090749639589049).epsilon(1e-9));
        CHECK(pairing(ok(1, 0.3, -0.2), ModelDivisor::admissible(0.8)) ==
              doctest::Approx(0.37759483045176894).epsilon(1e-9));
    }
    SUBCASE("two-kink self-pairing: 3(la + lap) + lb + lbp") {
        auto d = ModelDivisor::two_kink(1.0, 0.5, -1.0, -2.0);
        CHECK(pairing(d, d) == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("pairing with the zero divisor and with a principal divisor vanishes") {
        auto z = ModelDivisor::zero();
        auto hatz = ModelDivisor::principal_shift(ModelDivisor::zero(), 1.0);
        for (const auto& d : {ok(1, 1, -1), ModelDivisor::admissible(0.5),
                              ModelDivisor::two_kink(1.0, 0.5, -1.0, -2.0)}) {
            CHECK(pairing(d, z) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(pairing(z, d) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(pairing(d, hatz) == doctest::Approx(0.0).epsilon(1e-11));
            CHECK(pairing(hatz, d) == doctest::Approx(0.0).epsilon(1e-11));
        }
    }
    SUBCASE("symmetry across families") {
        std::vector<ModelDivisor> ds = {
            ok(1, 1, -1), ok(2, 3, -1), ModelDivisor::admissible(0.5),
            ModelDivisor::admissible(2.0), ModelDivisor::two_kink(1.0, 0.5, -1.0, -2.0),
            ModelDivisor::scaled(ModelDivisor::admissible(1.0), 2.0),
            ModelDivisor::principal_shift(ok(1, 1, -1), 1.5)};
        for (size_t i = 0; i < ds.size(); ++i) {
            for (size_t j = i + 1; j < ds.size(); ++j) {
                double p12 = pairing(ds[i], ds[j]);
                double p21 = pairing(ds[j], ds[i]);
                CHECK(std::abs(p12 - p21) <= 2e-8);
            }
        }
    }
    SUBCASE("bilinearity under scaling and shift invariance") {
        auto d1 = ok(1, 1, -1);
        auto d2 = ModelDivisor::admissible(1.0);
        CHECK(pairing(ModelDivisor::scaled(d1, 3.0), d2) ==
              doctest::Approx(3.0 * pairing(d1, d2)).epsilon(1e-9));
        CHECK(pairing(ModelDivisor::principal_shift(d1, 2.0), d2) ==
              doctest::Approx(pairing(d1, d2)).epsilon(1e-9));
        CHECK(pairing(d2, ModelDivisor::principal_shift(d1, 2.0)) ==
              doctest::Approx(pairing(d2, d1)).epsilon(1e-9));
    }
}

TEST_CASE("positivity predicates") {
    SUBCASE("effective") {
        CHECK(is_effective(ok(1, 1, -1)));          // a >= 1 suffices
        CHECK(!is_effective(ok(1, -1, 1)));         // a < 1: green dips negative
        CHECK(is_effective(ok(1, 0, -5)));          // boundary a = 1
        CHECK(is_effective(ModelDivisor::admissible(0.25)));
        CHECK(is_effective(ModelDivisor::admissible(4.0)));
        CHECK(is_effective(ModelDivisor::two_kink(1.0, 0.5, -1.0, -2.0)) ==
              (1.0 + 0.5 >= 0.0));
        CHECK(!is_effective(ModelDivisor::two_kink(-1.0, 0.5, -2.0, -1.0)));
        CHECK(is_effective(ModelDivisor::zero()));
        CHECK(!is_effective(ModelDivisor::principal_shift(ModelDivisor::zero(), 1.0)));
    }
    SUBCASE("nef") {
        CHECK(!is_nef_p1(ok(1, 1, -1)));
        CHECK(is_nef_p1(ok(1, 1, 1)));
        CHECK(is_nef_p1(ok(1, 0, 0)));
        CHECK(!is_nef_p1(ok(2, 0.5, -0.01)));
        CHECK(!is_nef_p1(ModelDivisor::admissible(0.5)));
        CHECK(is_nef_p1(ModelDivisor::admissible(1.0)));
        CHECK(is_nef_p1(ModelDivisor::admissible(2.5)));
        CHECK(!is_nef_p1(ModelDivisor::two_kink(0.0, 0.0, -kLog2, -kLog2)));
        CHECK(is_nef_p1(ModelDivisor::two_kink(1.0, 1.0, -0.5, -0.5)));
        CHECK(is_nef_p1(ModelDivisor::scaled(ModelDivisor::admissible(1.0), 2.0)));
        CHECK(is_nef_p1(ModelDivisor::zero()));
    }
    SUBCASE("big") {
        CHECK(is_big(ok(1, 1, -1)));
        CHECK(!is_big(ok(1, 0, 0)));      // nef with volume 0
        CHECK(!is_big(ok(1, -1, -1)));    // no sections at any multiple
        CHECK(is_big(ModelDivisor::admissible(0.5)));
        CHECK(is_big(ModelDivisor::admissible(1.0)));
        CHECK(is_big(ModelDivisor::two_kink(1.0, 0.5, -1.0, -2.0)));
        CHECK(!is_big(ModelDivisor::zero()));
        CHECK(is_big(ModelDivisor::scaled(ok(1, 1, -1), 2.0)));
        CHECK(!is_big(ModelDivisor::scaled(ok(1, 1, -1), 0.0)));
    }
    SUBCASE("adequacy sufficient criterion") {
        const double l3 = std::log(3.0) / 2.0;  // a^2 = 3
        const double l2 = std::log(2.0) / 2.0;  // a^2 = 2
        const double l5 = std::log(5.0) / 2.0;
        CHECK(is_adequate_sufficient(ok(1, l3, l3)));
        CHECK(!is_adequate_sufficient(ok(1, l2, l2)));      // boundary is strict
        CHECK(!is_adequate_sufficient(ok(2, l5, l3)));      // b^2 = 3 < 2^2
        CHECK(is_adequate_sufficient(ok(2, l5, std::log(5.0))));  // b^2 = 25 > 4
        CHECK(is_adequate_sufficient(
            ModelDivisor::scaled(ok(1, l3, l3), 2.0)));     // flattens to one-kink
        CHECK_THROWS_AS(is_adequate_sufficient(ModelDivisor::admissible(1.0)),
                        UnsupportedFamily);
        CHECK_THROWS_AS(
            is_adequate_sufficient(ModelDivisor::principal_shift(ok(1, l3, l3), 1.0)),
            UnsupportedFamily);
    }
}

TEST_CASE("zariski decomposition: one-kink cases") {
    SUBCASE("nef divisor is its own positive part") {
        auto d = ok(1, 1, 1);
        auto dec = zariski_decompose_p1(d);
        CHECK(dec.negative_c0 == 0.0);
        CHECK(dec.negative_cinf == 0.0);
        CHECK(green_value(dec.positive, 0.3) ==
              doctest::Approx(green_value(d, 0.3)).epsilon(1e-13));
        CHECK(volume_p1(d) == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("a >= 1 > b: frozen thetas and degrees") {
        auto d = ok(1, 1, -1);
        auto dec = zariski_decompose_p1(d);
        REQUIRE(dec.theta.has_value());
        CHECK(*dec.theta == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(dec.negative_c0 == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(dec.negative_cinf == 0.0);
        REQUIRE(dec.positive.family() == ModelDivisor::Family::OneKink);
        const auto& p = dec.positive.one_kink_params();
        CHECK(p.lambda == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(p.log_a == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(p.log_b == doctest::Approx(0.0).epsilon(1e-15));
        // Orthogonality: the positive part has degree zero along C0.
        CHECK(deg(dec.positive, C0) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(is_nef_p1(dec.positive));
        CHECK(volume_p1(d) == doctest::Approx(0.5).epsilon(1e-9));
        // The positive part is the largest nef minorant: g_P <= g_D everywhere,
        // with equality to the right of the kink (the negative part is
        // supported near C0 only).
        for (double t : {-3.0, -1.0, 0.0, 2.0}) {
            CHECK(green_value(dec.positive, t) <= green_value(d, t) + 1e-12);
        }
        CHECK(green_value(dec.positive, 0.0) ==
              doctest::Approx(green_value(d, 0.0)).epsilon(1e-13));
        CHECK(green_value(dec.positive, 2.0) ==
              doctest::Approx(green_value(d, 2.0)).epsilon(1e-13));
        // Left of the kink the gap grows linearly with slope 2 * negative_c0.
        double gap3 = green_value(d, -3.0) - green_value(dec.positive, -3.0);
        double gap4 = green_value(d, -4.0) - green_value(dec.positive, -4.0);
        CHECK(gap4 - gap3 == doctest::Approx(2.0 * dec.negative_c0).epsilon(1e-12));
    }
    SUBCASE("theta degenerates to zero when a = 1") {
        auto dec = zariski_decompose_p1(ok(1, 0, -0.25));
        REQUIRE(dec.theta.has_value());
        CHECK(*dec.theta == 0.0);
        CHECK(dec.negative_c0 == doctest::Approx(1.0).epsilon(1e-15));
        for (double t : {-2.0, 0.0, 1.0}) {
            CHECK(green_value(dec.positive, t) == doctest::Approx(0.0).epsilon(1e-14));
        }
        CHECK(volume_p1(ok(1, 0, -0.25)) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("b >= 1 > a: mirror case through a principal shift") {
        auto d = ok(1, -1, 1);
        auto dec = zariski_decompose_p1(d);
        REQUIRE(dec.theta.has_value());
        CHECK(*dec.theta == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(dec.negative_c0 == 0.0);
        CHECK(dec.negative_cinf == doctest::Approx(0.5).epsilon(1e-14));
        RadialProfile p = lower(dec.positive);
        CHECK(p.c0 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.cinf == doctest::Approx(-0.5).epsilon(1e-14));
        CHECK(deg(dec.positive, CINF) == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(is_nef_p1(dec.positive));
        CHECK(volume_p1(d) == doctest::Approx(0.5).epsilon(1e-9));
        // Mirror picture: equality left of the kink (t* = 2), linear gap right.
        for (double t : {-2.0, 0.5, 3.0}) {
            CHECK(green_value(dec.positive, t) <= green_value(d, t) + 1e-12);
        }
        CHECK(green_value(dec.positive, -2.0) ==
              doctest::Approx(green_value(d, -2.0)).epsilon(1e-13));
        CHECK(green_value(dec.positive, 0.5) ==
              doctest::Approx(green_value(d, 0.5)).epsilon(1e-13));
        double gap3 = green_value(d, 3.0) - green_value(dec.positive, 3.0);
        double gap4 = green_value(d, 4.0) - green_value(dec.positive, 4.0);
        CHECK(gap4 - gap3 == doctest::Approx(2.0 * dec.negative_cinf).epsilon(1e-12));
    }
    SUBCASE("a < 1 and b < 1: constructive non-existence witness") {
        auto d = ok(1, -kLog2, -kLog2);
        bool threw = false;
        try {
            zariski_decompose_p1(d);
        } catch (const NoDecomposition& e) {
            threw = true;
            CHECK(e.witness.log_t0 == doctest::Approx(2.0 * kLog2).epsilon(1e-13));
            CHECK(e.witness.epsilon == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
            CHECK(e.witness.check_log_alpha ==
                  doctest::Approx(-0.34657359027997265).epsilon(1e-12));
            CHECK(e.witness.check_log_beta ==
                  doctest::Approx(-0.34657359027997265).epsilon(1e-12));
            CHECK(e.witness.check_log_alpha < 0.0);
            CHECK(e.witness.check_log_beta < 0.0);
        }
        CHECK(threw);
        // Witness scales correctly for asymmetric parameters too.
        try {
            zariski_decompose_p1(ok(2, -1.0, -3.0));
            CHECK(false);
        } catch (const NoDecomposition& e) {
            CHECK(e.witness.check_log_alpha < 0.0);
            CHECK(e.witness.check_log_beta < 0.0);
            CHECK(e.witness.epsilon > 0.0);
        }
    }
}

TEST_CASE("zariski decomposition: two-kink and admissible") {
    SUBCASE("frozen two-kink instance") {
        auto d = ModelDivisor::two_kink(1.0, 0.5, -1.0, -2.0);
        auto dec = zariski_decompose_p1(d);
        REQUIRE(dec.theta.has_value());
        REQUIRE(dec.theta_p.has_value());
        CHECK(*dec.theta == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(*dec.theta_p == doctest::Approx(0.6).epsilon(1e-14));
        CHECK(dec.negative_c0 == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(dec.negative_cinf == doctest::Approx(0.4).epsilon(1e-14));
        CHECK(deg(dec.positive, C0) == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(deg(dec.positive, CINF) == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(is_nef_p1(dec.positive));
        CHECK(volume_p1(d) == doctest::Approx(2.025).epsilon(1e-9));
        CHECK(pairing(dec.positive, dec.positive) == doctest::Approx(2.025).epsilon(1e-11));
        // Minorant everywhere; equality on the plateau [t1, t2] = [-2, 2.5].
        for (double t : {-3.0, -0.5, 0.0, 1.7, 4.0}) {
            CHECK(green_value(dec.positive, t) <= green_value(d, t) + 1e-12);
        }
        for (double t : {-0.5, 0.0, 1.7}) {
            CHECK(green_value(dec.positive, t) ==
                  doctest::Approx(green_value(d, t)).epsilon(1e-13));
        }
    }
    SUBCASE("two-kink with alpha = alpha' = 1 has zero positive part") {
        auto d = ModelDivisor::two_kink(0.0, 0.0, -kLog2, -kLog2);
        auto dec = zariski_decompose_p1(d);
        CHECK(*dec.theta == 0.0);
        CHECK(*dec.theta_p == 0.0);
        CHECK(dec.negative_c0 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(dec.negative_cinf == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(green_value(dec.positive, 0.4) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(volume_p1(d) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("two-kink outside the treated hypotheses is flagged, not guessed") {
        // Nef two-kink decomposes trivially.
        auto nef = ModelDivisor::two_kink(1.0, 1.0, -0.5, -0.5);
        auto dec = zariski_decompose_p1(nef);
        CHECK(dec.negative_c0 == 0.0);
        CHECK(dec.negative_cinf == 0.0);
        CHECK(volume_p1(nef) == doctest::Approx(3.0 * 2.0 - 1.0).epsilon(1e-9));
        // Mixed case (one cross-product nonnegative, one negative): not treated.
        auto mixed = ModelDivisor::two_kink(2.0, 2.0, -1.0, -3.0);
        CHECK_THROWS_AS(zariski_decompose_p1(mixed), NotComputed);
        // alpha < 1: outside the hypotheses as well.
        auto neg = ModelDivisor::two_kink(-0.5, 1.0, -1.0, -2.0);
        CHECK_THROWS_AS(zariski_decompose_p1(neg), NotComputed);
    }
    SUBCASE("admissible: nef for lambda >= 1, open case reported for lambda < 1") {
        auto d1 = ModelDivisor::admissible(1.0);
        auto dec = zariski_decompose_p1(d1);
        CHECK(dec.negative_c0 == 0.0);
        CHECK(volume_p1(d1) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK_THROWS_AS(zariski_decompose_p1(ModelDivisor::admissible(0.7)), NotComputed);
        try {
            zariski_decompose_p1(ModelDivisor::admissible(0.7));
        } catch (const NotComputed& e) {
            CHECK(!e.reason.empty());
        }
    }
    SUBCASE("equivariance under scaling") {
        auto d = ok(1, 1, -1);
        auto dec1 = zariski_decompose_p1(d);
        auto dec3 = zariski_decompose_p1(ModelDivisor::scaled(d, 3.0));
        CHECK(dec3.negative_c0 == doctest::Approx(3.0 * dec1.negative_c0).epsilon(1e-13));
        CHECK(*dec3.theta == doctest::Approx(*dec1.theta).epsilon(1e-14));
        CHECK(volume_p1(ModelDivisor::scaled(d, 3.0)) == doctest::Approx(4.5).epsilon(1e-9));
        CHECK(volume_p1(ModelDivisor::scaled(ModelDivisor::admissible(1.0), 2.0)) ==
              doctest::Approx(2.0).epsilon(1e-8));
    }
    SUBCASE("equivariance under principal shift") {
        auto d = ok(1, 1, -1);
        auto dec1 = zariski_decompose_p1(d);
        auto shifted = ModelDivisor::principal_shift(d, 2.0);
        auto dec2 = zariski_decompose_p1(shifted);
        CHECK(dec2.negative_c0 == doctest::Approx(dec1.negative_c0).epsilon(1e-13));
        CHECK(dec2.negative_cinf == doctest::Approx(dec1.negative_cinf).epsilon(1e-13));
        CHECK(deg(dec2.positive, C0) == doctest::Approx(0.0).epsilon(1e-12));
        RadialProfile p = lower(dec2.positive);
        CHECK(p.c0 == doctest::Approx(0.5 + 2.0).epsilon(1e-13));
        CHECK(p.cinf == doctest::Approx(-2.0).epsilon(1e-13));
        CHECK(volume_p1(shifted) == doctest::Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("negative part matrix for the symmetric two-kink family") {
    auto d = ModelDivisor::two_kink(0.0, 0.0, -kLog2, -kLog2);
    auto m = negative_part_matrix(d);
    CHECK(m[0][0] == doctest::Approx(-kLog2).epsilon(1e-13));
    CHECK(m[0][1] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(m[1][0] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(m[1][1] == doctest::Approx(-kLog2).epsilon(1e-13));

    auto m2 = negative_part_matrix(ModelDivisor::two_kink(0.0, 0.0, -1.0, -2.5));
    CHECK(m2[0][0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(m2[1][1] == doctest::Approx(-2.5).epsilon(1e-13));

    CHECK_THROWS_AS(negative_part_matrix(ModelDivisor::two_kink(1.0, 0.5, -1.0, -2.0)),
                    UnsupportedConfiguration);
    CHECK_THROWS_AS(negative_part_matrix(ok(1, 1, -1)), UnsupportedConfiguration);
}

TEST_CASE("hodge index check") {
    SUBCASE("via decomposition") {
        auto r = hodge_index_check(ok(1, 1, 1));
        CHECK(r.method == "decomposition");
        CHECK(r.holds);
        CHECK(r.self_pairing == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(r.vol_estimate == doctest::Approx(2.0).epsilon(1e-9));

        auto rb = hodge_index_check(ok(1, 1, -1));
        CHECK(rb.holds);
        CHECK(rb.self_pairing == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(rb.vol_estimate == doctest::Approx(0.5).epsilon(1e-9));

        auto rz = hodge_index_check(ModelDivisor::zero());
        CHECK(rz.holds);
    }
    SUBCASE("admissible lambda < 1 falls back to a certified count bound") {
        auto r = hodge_index_check(ModelDivisor::admissible(0.5));
        CHECK(r.method == "count-lower-bound");
        CHECK(r.self_pairing == doctest::Approx(0.15342640972002735).epsilon(1e-9));
        CHECK(r.vol_estimate > r.self_pairing);
        CHECK(r.vol_estimate < 0.25);  // true volume is 1/2 * (best known); bound is partial
        CHECK(r.holds);
    }
}

TEST_CASE("monomial log norms and count bounds") {
    SUBCASE("one-kink sup norms: |z^{-i}| attains its sup at the kink circle") {
        // For D = one_kink(1, 1, -1):  log ||z^{-i}||_sup at level n is 2i - n.
        RadialProfile p = lower(ok(1, 1, -1));
        for (long n : {1L, 2L, 5L}) {
            for (long i = 0; i <= n; ++i) {
                CHECK(monomial_log_norm(p, n, i) ==
                      doctest::Approx(double(2 * i - n)).epsilon(1e-12));
            }
        }
        // Out-of-range exponents have infinite norm.
        CHECK(std::isinf(monomial_log_norm(p, 2, 3)));
        CHECK(std::isinf(monomial_log_norm(p, 2, -1)));
    }
    SUBCASE("admissible norms: entropy closed form") {
        RadialProfile p = lower(ModelDivisor::admissible(1.0));
        // ||z^{-i}|| = ((n-i)^{n-i} i^i / n^n)^{1/2}; log at n=2, i=1: (0+0-2log2)/2.
        CHECK(monomial_log_norm(p, 2, 1) == doctest::Approx(-kLog2).epsilon(1e-12));
        CHECK(monomial_log_norm(p, 2, 0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(monomial_log_norm(p, 2, 2) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(monomial_log_norm(p, 4, 1) ==
              doctest::Approx(0.5 * (3.0 * std::log(3.0) - 4.0 * std::log(4.0)))
                  .epsilon(1e-12));
        RadialProfile ph = lower(ModelDivisor::admissible(0.5));
        // ||z^{-i}|| picks up a factor lambda^{-i/2}.
        CHECK(monomial_log_norm(ph, 2, 1) ==
              doctest::Approx(-kLog2 - 0.5 * std::log(0.5)).epsilon(1e-12));
    }
    SUBCASE("count bounds: frozen values for small boxes") {
        // Radii (1, 1): the axis-union construction certifies five points.
        std::vector<double> ln = {0.0, 0.0};
        CHECK(log_count_upper_bound(ln) == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-13));
        CHECK(log_count_lower_bound(ln) == doctest::Approx(std::log(5.0)).epsilon(1e-13));
        // A coordinate with radius < 1 contributes nothing to the lower bound.
        std::vector<double> ln2 = {0.0, 0.5};
        CHECK(log_count_lower_bound(ln2) == doctest::Approx(std::log(3.0)).epsilon(1e-13));
        CHECK(log_count_upper_bound(ln2) >= log_count_lower_bound(ln2));
        // Radii (1.6, 1.6, 1.6): axis union gives 7 points, pooling only 3.
        std::vector<double> ln3 = {-std::log(1.6), -std::log(1.6), -std::log(1.6)};
        CHECK(log_count_lower_bound(ln3) == doctest::Approx(std::log(7.0)).epsilon(1e-12));
        CHECK(log_count_upper_bound(ln3) ==
              doctest::Approx(3.0 * std::log(2.0 * 1.6 + 1.0)).epsilon(1e-12));
        // Radii (4, 4, 4): pooling all three coordinates wins (3^3 = 27 > 25).
        std::vector<double> ln4 = {-std::log(4.0), -std::log(4.0), -std::log(4.0)};
        CHECK(log_count_lower_bound(ln4) == doctest::Approx(3.0 * std::log(3.0)).epsilon(1e-12));
    }
}
