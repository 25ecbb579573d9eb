#include <doctest.h>

#include <cmath>
#include <random>

#include "femtherm/models.hpp"
#include "femtherm/series.hpp"

using namespace femtherm;

TEST_CASE("ross prediction") {
    CHECK(predict_ross(1000.0, {0.035}) == doctest::Approx(35.0));  // 35 K over ambient
    CHECK(predict_ross(0.0, {0.035}) == 0.0);
    CHECK(predict_ross(800.0, {0.0312}) == doctest::Approx(0.0312 * 800.0).epsilon(1e-15));
}

TEST_CASE("sandia prediction") {
    CHECK(predict_sandia(1000.0, 5.0, {std::log(0.035), 0.0}) == doctest::Approx(35.0));
    CHECK(predict_sandia(0.0, 3.0, {-3.47, -0.0594}) == 0.0);
    const double expect = 1000.0 * std::exp(-3.47 - 0.0594 * 3.0);  // scalar oracle
    CHECK(expect == doctest::Approx(26.03).epsilon(1e-3));
    CHECK(predict_sandia(1000.0, 3.0, {-3.47, -0.0594}) ==
          doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("faiman prediction") {
    CHECK(predict_faiman(1000.0, 0.0, {25.0, 6.84}) == doctest::Approx(40.0));
    CHECK(predict_faiman(0.0, 2.0, {25.0, 6.84}) == 0.0);
    const double expect = 1000.0 / (25.0 + 6.84 * 5.0);  // scalar oracle
    CHECK(expect == doctest::Approx(16.89).epsilon(1e-3));
    CHECK(predict_faiman(1000.0, 5.0, {25.0, 6.84}) == doctest::Approx(expect));
    CHECK_THROWS(predict_faiman(500.0, 5.0, {1.0, -1.0}));
}

TEST_CASE("wm1 prediction") {
    CHECK(predict_wm1(1000.0, 0.0, {0.0348, 5.0}) == doctest::Approx(34.8));
    CHECK(predict_wm1(0.0, 3.0, {0.0348, 5.0}) == 0.0);
    const double expect = 0.0348 * 1000.0 * std::exp(-1.0);  // scalar oracle
    CHECK(expect == doctest::Approx(12.80).epsilon(1e-3));
    CHECK(predict_wm1(1000.0, 5.0, {0.0348, 5.0}) == doctest::Approx(expect));
}

TEST_CASE("wm2 prediction clips the wind speed") {
    const Wm2Coeffs c{0.0348, 0.002, 8.0};
    CHECK(predict_wm2(1000.0, 0.0, c) == doctest::Approx(34.8));
    CHECK(predict_wm2(1000.0, 4.0, c) == doctest::Approx(26.8));  // scalar oracle
    CHECK(predict_wm2(1000.0, 8.0, c) == predict_wm2(1000.0, 12.0, c));
}

TEST_CASE("missing inputs propagate as missing outputs") {
    ModelCoefficients wm1{Wm1Coeffs{0.03, 5.0}, {}};
    CHECK(is_missing(predict_point(wm1, missing(), 2.0)));
    CHECK(is_missing(predict_point(wm1, 500.0, missing())));
    ModelCoefficients ross{RossCoeffs{0.03}, {}};
    CHECK(!is_missing(predict_point(ross, 500.0, missing())));  // wind-free model
}

TEST_CASE("sandia/wm1 translation") {
    const auto w = sandia_to_wm1({std::log(0.035), -0.2});
    CHECK(w.k == doctest::Approx(0.035).epsilon(1e-12));
    CHECK(w.d == doctest::Approx(5.0).epsilon(1e-12));
    const auto back = wm1_to_sandia(w);
    CHECK(back.a == doctest::Approx(std::log(0.035)).epsilon(1e-12));
    CHECK(back.b == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK_THROWS(sandia_to_wm1({0.0, 0.1}));
}

TEST_CASE("translated pair predicts identically on random points") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ug(0.0, 1200.0), uw(0.0, 15.0),
        ua(-4.0, -3.0), ub(-0.3, -0.02);
    for (int i = 0; i < 10000; ++i) {
        const SandiaCoeffs sc{ua(rng), ub(rng)};
        const auto wc = sandia_to_wm1(sc);
        const double g = ug(rng), w = uw(rng);
        const double a = predict_sandia(g, w, sc);
        const double b = predict_wm1(g, w, wc);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("all models are homogeneous of degree one in G") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ug(1.0, 1000.0), uw(0.0, 12.0);
    const std::vector<ModelCoefficients> coeffs = {
        {RossCoeffs{0.033}, {}},
        {SandiaCoeffs{-3.4, -0.07}, {}},
        {FaimanCoeffs{27.0, 5.5}, {}},
        {Wm1Coeffs{0.034, 12.0}, {}},
        {Wm2Coeffs{0.034, 0.002, 8.0}, {}},
    };
    for (const auto& c : coeffs) {
        for (int i = 0; i < 1000; ++i) {
            const double g = ug(rng), w = uw(rng);
            const double one = predict_point(c, g, w);
            const double two = predict_point(c, 2.0 * g, w);
            CHECK(two == doctest::Approx(2.0 * one).epsilon(1e-12));
        }
    }
}

TEST_CASE("wind models do not increase with wind speed") {
    const std::vector<ModelCoefficients> coeffs = {
        {SandiaCoeffs{-3.4, -0.07}, {}},
        {FaimanCoeffs{27.0, 5.5}, {}},
        {Wm1Coeffs{0.034, 12.0}, {}},
        {Wm2Coeffs{0.034, 0.002, 8.0}, {}},
    };
    for (const auto& c : coeffs) {
        double prev = predict_point(c, 800.0, 0.0);
        for (double w = 0.5; w <= 14.0; w += 0.5) {
            const double cur = predict_point(c, 800.0, w);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("at zero wind every model reduces to Ross with the matching k") {
    const double k = 0.0348;
    const double g = 734.5;
    const double ross = predict_ross(g, {k});
    CHECK(predict_sandia(g, 0.0, {std::log(k), -0.05}) ==
          doctest::Approx(ross).epsilon(1e-12));
    CHECK(predict_faiman(g, 0.0, {1.0 / k, 3.0}) == doctest::Approx(ross).epsilon(1e-12));
    CHECK(predict_wm1(g, 0.0, {k, 9.0}) == doctest::Approx(ross).epsilon(1e-12));
    CHECK(predict_wm2(g, 0.0, {k, 0.002, 8.0}) == doctest::Approx(ross).epsilon(1e-12));
}

TEST_CASE("coefficient validation") {
    CHECK_THROWS(ModelCoefficients{RossCoeffs{-0.01}, {}}.validate());
    CHECK_THROWS(ModelCoefficients{Wm1Coeffs{0.03, 0.0}, {}}.validate());
    CHECK_THROWS(ModelCoefficients{FaimanCoeffs{0.0, 1.0}, {}}.validate());
    // WM2 fits that can go negative at the cap are rejected
    CHECK_THROWS(ModelCoefficients{Wm2Coeffs{0.01, 0.002, 8.0}, {}}.validate());
    CHECK_NOTHROW(ModelCoefficients{Wm2Coeffs{0.0348, 0.002, 8.0}, {}}.validate());
}

TEST_CASE("model tags round trip") {
    for (ModelKind k : all_models()) CHECK(model_from_string(to_string(k)) == k);
    CHECK_THROWS(model_from_string("pvsyst"));
}
