#include <catch2/catch_amalgamated.hpp>

#include "sovdebt/calibrate.hpp"
#include "sovdebt/ingest.hpp"

using namespace sovdebt;
using Catch::Matchers::WithinAbs;

namespace {

CountrySeries load(const std::string& country) {
    std::string dir = SOVDEBT_DATA_DIR_PATH;
    auto cfg = FormatConfig::load(dir + "/" + country + ".cfg");
    return parse_series(dir + "/" + country + ".csv", cfg);
}

FitWindow window_for(const std::string& country) {
    if (country == "greece") return FitWindow({2001, 0}, {2011, 0});
    return FitWindow({2007, 0}, {2011, 0});
}

/// Noise-free series generated from known parameters.
CountrySeries synthetic(double r_c, double eta, double rho, double r,
                        const std::vector<double>& ratios) {
    CountrySeries s;
    s.country = "synthetic";
    int year = 2000;
    for (double ratio : ratios) {
        ModelParams params(r_c, eta);
        double p = model_default_prob(ratio, params, RecoveryAssumption(rho)).value();
        ObservationRow row;
        row.period = Period{year++, 0};
        row.debt_ratio = ratio;
        row.risk_free_rate = r;
        row.long_rate = rate_from_prob(DefaultProbability(p), r, RecoveryAssumption(rho));
        s.rows.push_back(row);
    }
    return s;
}

}  // namespace

TEST_CASE("linear fit on the bundled Greek series") {
    auto fit = fit_linear(load("greece"), window_for("greece"));
    CHECK_THAT(fit.params.r_c, WithinAbs(1.9199, 5e-4));
    CHECK_THAT(fit.params.eta, WithinAbs(0.1488, 5e-4));
    REQUIRE(fit.params.r_c_stderr);
    REQUIRE(fit.params.eta_stderr);
    CHECK_THAT(*fit.params.r_c_stderr, WithinAbs(0.0540, 2e-3));
    CHECK_THAT(*fit.params.eta_stderr, WithinAbs(0.0101, 1e-3));
    CHECK(fit.periods.size() == 11);
    CHECK(fit.r_squared > 0.9);
}

TEST_CASE("linear fit recovers an exact line") {
    // R = 1.8 - 0.12 X constructed directly
    CountrySeries s;
    int year = 2000;
    for (double x : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        ObservationRow row;
        row.period = Period{year++, 0};
        row.debt_ratio = 1.8 - 0.12 * x;
        row.risk_free_rate = 0.03;
        row.long_rate = 0.03 + 1.03 * std::exp(-x);  // inverts the distance
        s.rows.push_back(row);
    }
    auto fit = fit_linear(s, FitWindow({2000, 0}, {2004, 0}));
    CHECK_THAT(fit.params.r_c, WithinAbs(1.8, 1e-10));
    CHECK_THAT(fit.params.eta, WithinAbs(0.12, 1e-10));
    CHECK_THAT(fit.sse, WithinAbs(0.0, 1e-18));
}

TEST_CASE("linear fit degenerate inputs") {
    auto s = synthetic(2.0, 0.18, 0.5, 0.03, {1.0, 1.2, 1.4});
    CHECK_THROWS_AS(fit_linear(s, FitWindow({2000, 0}, {2002, 0})), UsageError);
    // constant spread -> zero variance in X
    CountrySeries flat;
    for (int k = 0; k < 5; ++k) {
        ObservationRow row;
        row.period = Period{2000 + k, 0};
        row.debt_ratio = 1.0 + 0.1 * k;
        row.long_rate = 0.05;
        row.risk_free_rate = 0.03;
        flat.rows.push_back(row);
    }
    CHECK_THROWS_AS(fit_linear(flat, FitWindow({2000, 0}, {2004, 0})), NumericError);
}

TEST_CASE("sigmoid fit on the bundled Greek series") {
    auto fit = fit_sigmoid(load("greece"), window_for("greece"), RecoveryAssumption(0.5));
    CHECK_THAT(fit.params.r_c, WithinAbs(2.0002, 2e-3));
    CHECK_THAT(fit.params.eta, WithinAbs(0.1808, 2e-3));
    REQUIRE(fit.params.r_c_stderr);
    CHECK_THAT(*fit.params.r_c_stderr, WithinAbs(0.0363, 5e-3));
    CHECK(!fit.boundary);
    CHECK(fit.method == FitMethod::sigmoid);
}

TEST_CASE("sigmoid fit recovers exact parameters from noiseless data") {
    auto s = synthetic(1.7, 0.12, 0.5, 0.03,
                       {0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6});
    auto fit = fit_sigmoid(s, FitWindow({2000, 0}, {2007, 0}), RecoveryAssumption(0.5));
    CHECK_THAT(fit.params.r_c, WithinAbs(1.7, 1e-6));
    CHECK_THAT(fit.params.eta, WithinAbs(0.12, 1e-6));
    CHECK(fit.sse < 1e-14);
}

TEST_CASE("grid oracle agrees with the sigmoid fit on bundled data") {
    struct Expect {
        const char* country;
        double r_c, eta;
    };
    for (auto e : {Expect{"greece", 2.000, 0.180}, Expect{"portugal", 1.340, 0.100},
                   Expect{"ireland", 1.630, 0.210}, Expect{"spain", 0.930, 0.070},
                   Expect{"italy", 1.440, 0.060}}) {
        auto series = load(e.country);
        auto window = window_for(e.country);
        RecoveryAssumption rho(0.5);
        auto grid = grid_oracle(series, window, rho);
        INFO(e.country);
        CHECK_THAT(grid.params.r_c, WithinAbs(e.r_c, 1e-12));
        CHECK_THAT(grid.params.eta, WithinAbs(e.eta, 1e-12));
        auto fit = fit_sigmoid(series, window, rho);
        CHECK_THAT(fit.params.r_c, WithinAbs(grid.params.r_c, 2.0 * 0.005));
        CHECK_THAT(fit.params.eta, WithinAbs(grid.params.eta, 2.0 * 0.005));
        CHECK(!grid.boundary);
    }
}

TEST_CASE("grid oracle tie-breaking is deterministic") {
    // two usable rows with identical probabilities leave the SSE flat in
    // directions the data cannot see; repeated runs pick the same cell
    auto s = synthetic(1.7, 0.12, 0.5, 0.03, {1.2, 1.3, 1.4, 1.5});
    GridSpec coarse;
    coarse.r_c_step = 0.1;
    coarse.eta_step = 0.1;
    auto a = grid_oracle(s, FitWindow({2000, 0}, {2003, 0}), RecoveryAssumption(0.5), coarse);
    auto b = grid_oracle(s, FitWindow({2000, 0}, {2003, 0}), RecoveryAssumption(0.5), coarse);
    CHECK(a.params.r_c == b.params.r_c);
    CHECK(a.params.eta == b.params.eta);
}

TEST_CASE("rows implying P > 1 are excluded from the sigmoid fit") {
    auto s = synthetic(1.7, 0.12, 0.5, 0.03, {0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6});
    // append a row whose spread implies an impossible probability
    ObservationRow row;
    row.period = Period{2010, 0};
    row.debt_ratio = 2.5;
    row.risk_free_rate = 0.03;
    row.long_rate = 3.0;
    s.rows.push_back(row);
    auto fit = fit_sigmoid(s, FitWindow({2000, 0}, {2010, 0}), RecoveryAssumption(0.5));
    CHECK(fit.periods.size() == 8);
    CHECK_THAT(fit.params.r_c, WithinAbs(1.7, 1e-6));
}

TEST_CASE("consistency diagnostic on the Greek series") {
    auto series = load("greece");
    auto fit = fit_linear(series, window_for("greece"));
    auto report = consistency_check(series, fit, 0.08);
    CHECK(report.consistent);
    CHECK_THAT(report.max_abs_residual, WithinAbs(0.0627, 2e-3));
    CHECK(report.periods.size() == 11);
    auto strict = consistency_check(series, fit, 0.01);
    CHECK(!strict.consistent);
}

TEST_CASE("fit window validation") {
    CHECK_THROWS_AS(FitWindow({2011, 0}, {2007, 0}), UsageError);
    auto w = FitWindow({2007, 0}, {2011, 0});
    CHECK(w.contains(Period{2007, 0}));
    CHECK(w.contains(Period{2011, 0}));
    CHECK(!w.contains(Period{2006, 0}));
}
