#include <doctest.h>

#include <cmath>
#include <random>

#include "femtherm/metrics.hpp"

using namespace femtherm;

TEST_CASE("kpis on simple error patterns") {
    SUBCASE("zero error") {
        std::vector<double> p{10.0, 11.0, 12.0};
        const auto r = kpis(p, p);
        CHECK(r.rmse == 0.0);
        CHECK(r.mae == 0.0);
        CHECK(r.mbe == 0.0);
        CHECK(r.n_rows == 3);
    }
    SUBCASE("symmetric +1/-1") {
        std::vector<double> p{1.0, -1.0}, m{0.0, 0.0};
        const auto r = kpis(p, m);
        CHECK(r.rmse == doctest::Approx(1.0));
        CHECK(r.mae == doctest::Approx(1.0));
        CHECK(r.mbe == doctest::Approx(0.0));
    }
    SUBCASE("single +3 row") {
        std::vector<double> p{3.0}, m{0.0};
        const auto r = kpis(p, m);
        CHECK(r.rmse == doctest::Approx(3.0));
        CHECK(r.mae == doctest::Approx(3.0));
        CHECK(r.mbe == doctest::Approx(3.0));
    }
    SUBCASE("constant +2 error") {
        std::vector<double> p{5.0, 6.0, 7.0}, m{3.0, 4.0, 5.0};
        const auto r = kpis(p, m);
        CHECK(r.rmse == doctest::Approx(2.0));
        CHECK(r.mae == doctest::Approx(2.0));
        CHECK(r.mbe == doctest::Approx(2.0));
    }
    SUBCASE("missing rows are skipped; no overlap is an error") {
        std::vector<double> p{1.0, missing(), 2.0}, m{1.0, 1.0, missing()};
        CHECK(kpis(p, m).n_rows == 1);
        std::vector<double> q{missing()}, n{missing()};
        CHECK_THROWS(kpis(q, n));
    }
}

TEST_CASE("kpi inequalities hold on random reports") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> e(0.3, 1.7);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> p(200), m(200, 0.0);
        for (auto& v : p) v = e(rng);
        const auto r = kpis(p, m);
        CHECK(r.rmse >= r.mae);
        CHECK(r.mae >= std::abs(r.mbe));
        CHECK(std::abs(r.mbe) >= 0.0);
    }
}

TEST_CASE("kpis_daytime masks dim rows") {
    std::vector<double> p{1.0, 2.0, 3.0}, m{0.0, 0.0, 0.0}, g{0.0, 500.0, 10.0};
    const auto r = kpis_daytime(p, m, g, 20.0);
    CHECK(r.n_rows == 1);
    CHECK(r.mbe == doctest::Approx(2.0));
}

TEST_CASE("energy error single-term hand case") {
    // +1 K error at G = 1000 W/m2 for one hour, gamma = -0.35 %/K
    std::vector<double> p(60, 11.0), m(60, 10.0), g(60, 1000.0);
    std::vector<std::int64_t> t(60);
    for (int i = 0; i < 60; ++i) t[i] = i * 60;
    const auto r = energy_error(p, m, g, t, -0.35, 60);
    CHECK(r.de_total == doctest::Approx(0.0035).epsilon(1e-12));
    CHECK(r.de_over == doctest::Approx(0.0));
    CHECK(r.de_under == doctest::Approx(-0.0035).epsilon(1e-12));
    CHECK(r.de_naive == doctest::Approx(-0.0035).epsilon(1e-12));
    CHECK(r.dpr_approx_pp == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("energy error directional identity on random data") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> ug(0.0, 1000.0);
    std::normal_distribution<double> e(0.0, 2.0);
    std::vector<double> p(500), m(500), g(500);
    std::vector<std::int64_t> t(500);
    for (int i = 0; i < 500; ++i) {
        m[i] = 10.0;
        p[i] = 10.0 + e(rng);
        g[i] = ug(rng);
        t[i] = i * 60;
    }
    const auto r = energy_error(p, m, g, t, -0.35, 60);
    CHECK(r.de_total ==
          doctest::Approx(r.de_over - r.de_under).epsilon(1e-9));
    CHECK(r.de_naive == doctest::Approx(r.de_over + r.de_under).epsilon(1e-9));
    CHECK(r.de_total >= std::abs(r.de_naive));
}

TEST_CASE("energy error with zero model error is all zeros") {
    std::vector<double> p(10, 5.0), g(10, 800.0);
    std::vector<std::int64_t> t(10);
    for (int i = 0; i < 10; ++i) t[i] = i * 60;
    const auto r = energy_error(p, p, g, t, -0.35, 60);
    CHECK(r.de_total == 0.0);
    CHECK(r.de_over == 0.0);
    CHECK(r.de_under == 0.0);
}

TEST_CASE("energy error integrates H_y only for year-long series") {
    std::vector<double> p(10, 5.0), g(10, 800.0);
    std::vector<std::int64_t> t(10);
    for (int i = 0; i < 10; ++i) t[i] = i * 60;
    CHECK(!energy_error(p, p, g, t, -0.35, 60).h_y_kwh_per_m2.has_value());
    const auto given = energy_error(p, p, g, t, -0.35, 60, 1050.0);
    REQUIRE(given.h_y_kwh_per_m2.has_value());
    CHECK(*given.h_y_kwh_per_m2 == doctest::Approx(1050.0));
}

TEST_CASE("H_y integration scales partial row coverage to the full span") {
    // Hourly constant 200 W/m2 across a year, but only every third row kept:
    // the estimate must still be mean irradiance times the span.
    std::vector<double> p, g;
    std::vector<std::int64_t> t;
    const std::int64_t dt = 3600;
    for (std::int64_t i = 0; i < 365 * 24; i += 3) {
        p.push_back(5.0);
        g.push_back(200.0);
        t.push_back(i * dt);
    }
    const auto r = energy_error(p, p, g, t, -0.35, dt);
    REQUIRE(r.h_y_kwh_per_m2.has_value());
    const double span_h = static_cast<double>(t.back() - t.front() + dt) / 3600.0;
    CHECK(*r.h_y_kwh_per_m2 == doctest::Approx(0.2 * span_h).epsilon(1e-9));
}

TEST_CASE("delayed sensor baseline") {
    OverTempSeries s;
    s.dt_seconds = 60;
    const double slope = 0.01;  // K/s ramp
    for (int i = 0; i < 300; ++i) {
        s.timestamps.push_back(i * 60);
        s.t_over.push_back(slope * i * 60);
        s.g_poa.push_back(500.0);
        s.ws.push_back(1.0);
    }
    SUBCASE("zero delay scores zero") {
        const auto r = delayed_sensor_baseline(s, std::vector<std::int64_t>{0});
        CHECK(r[0].rmse == 0.0);
    }
    SUBCASE("ramp gives MAE = slope * delay exactly") {
        const auto r = delayed_sensor_baseline(s, std::vector<std::int64_t>{120, 300});
        CHECK(r[0].mae == doctest::Approx(slope * 120.0).epsilon(1e-12));
        CHECK(r[1].mae == doctest::Approx(slope * 300.0).epsilon(1e-12));
    }
    SUBCASE("constant series scores zero at any delay") {
        OverTempSeries c = s;
        for (auto& v : c.t_over) v = 12.0;
        const auto r = delayed_sensor_baseline(c, std::vector<std::int64_t>{600});
        CHECK(r[0].rmse == 0.0);
    }
    SUBCASE("invalid delays are rejected") {
        CHECK_THROWS(delayed_sensor_baseline(s, std::vector<std::int64_t>{90}));
        CHECK_THROWS(delayed_sensor_baseline(s, std::vector<std::int64_t>{86400}));
    }
}

TEST_CASE("delayed sensor KPIs grow with delay on smooth data") {
    OverTempSeries s;
    s.dt_seconds = 60;
    for (int i = 0; i < 1440; ++i) {
        s.timestamps.push_back(i * 60);
        s.t_over.push_back(20.0 * std::sin(2.0 * M_PI * i / 1440.0));
        s.g_poa.push_back(500.0);
        s.ws.push_back(1.0);
    }
    const std::vector<std::int64_t> delays{60, 300, 600, 1800};
    const auto r = delayed_sensor_baseline(s, delays);
    for (std::size_t i = 1; i < r.size(); ++i) {
        CHECK(r[i].rmse >= r[i - 1].rmse);
        CHECK(r[i].mae >= r[i - 1].mae);
    }
}

TEST_CASE("backsheet-to-cell correction") {
    const auto params = ewm_params(360.0, 60.0);
    SUBCASE("zero coefficient is the identity") {
        std::vector<double> tb{20.0, 21.0}, g{500.0, 600.0};
        const auto out = backsheet_to_cell(tb, g, 0.0, params);
        CHECK(out == tb);
    }
    SUBCASE("night rows stay unchanged") {
        std::vector<double> tb(50, 15.0), g(50, 0.0);
        const auto out = backsheet_to_cell(tb, g, 0.003, params);
        for (double v : out) CHECK(v == doctest::Approx(15.0));
    }
    SUBCASE("steady kW-scale irradiance adds k_bsc * G") {
        std::vector<double> tb(3000, 40.0), g(3000, 1000.0);
        const auto out = backsheet_to_cell(tb, g, 0.003, params);
        CHECK(out.back() == doctest::Approx(43.0).epsilon(1e-9));
    }
    SUBCASE("negative coefficient is rejected") {
        std::vector<double> tb{1.0}, g{2.0};
        CHECK_THROWS(backsheet_to_cell(tb, g, -0.1, params));
    }
}
