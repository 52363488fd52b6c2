#include <catch2/catch_amalgamated.hpp>

#include "sovdebt/microstructure.hpp"

using namespace sovdebt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exact demand intercept") {
    LenderPopulation pop(1000.0, 1.5, 0.3);
    CHECK_THAT(demand_intercept_exact(1.5, pop), WithinAbs(500.0, 1e-9));
    CHECK_THAT(demand_intercept_exact(1.5 + 0.3, pop),
               WithinAbs(158.65525393145708, 1e-9));
    CHECK_THAT(demand_intercept_exact(-50.0, pop), WithinAbs(1000.0, 1e-9));
    CHECK_THAT(demand_intercept_exact(50.0, pop), WithinAbs(0.0, 1e-9));
}

TEST_CASE("logistic demand intercept") {
    LenderPopulation pop(1000.0, 1.5, 0.3);
    CHECK(demand_intercept_logistic(1.5, pop) == 500.0);
    // eta relation is the slope-matching condition: slope at R_c is -N/(4 eta)
    double h = 1e-6;
    double slope = (demand_intercept_logistic(1.5 + h, pop) -
                    demand_intercept_logistic(1.5 - h, pop)) /
                   (2.0 * h);
    double phi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    CHECK_THAT(slope, WithinRel(-1000.0 * phi0 / 0.3, 1e-5));
    CHECK_THAT(slope, WithinRel(-1000.0 / (4.0 * pop.eta()), 1e-5));
    // stays within the approximation bound of the exact curve
    CHECK(std::abs(demand_intercept_logistic(1.8, pop) - demand_intercept_exact(1.8, pop)) /
              1000.0 <
          0.025);
}

TEST_CASE("monotonicity and bounds of both demand curves") {
    LenderPopulation pop(100.0, 2.0, 0.5);
    double prev_e = 101.0, prev_l = 101.0;
    for (double r = -2.0; r <= 6.0; r += 0.05) {
        double e = demand_intercept_exact(r, pop);
        double l = demand_intercept_logistic(r, pop);
        CHECK(e <= prev_e);
        CHECK(l <= prev_l);
        CHECK((e >= 0.0 && e <= 100.0));
        CHECK((l >= 0.0 && l <= 100.0));
        prev_e = e;
        prev_l = l;
    }
}

TEST_CASE("erf-logistic approximation error") {
    LenderPopulation pop(1000.0, 1.5, 0.3);
    double err = approximation_error(pop, 1.5 - 7 * 0.3, 1.5 + 7 * 0.3);
    CHECK(err < 0.025);
    CHECK_THAT(err, WithinAbs(0.01767118861702499, 1e-4));
    // scale invariance in (R - R_c)/sigma, three scales
    LenderPopulation a(10.0, 0.5, 0.05), b(10.0, 2.0, 0.2), c(10.0, 8.0, 0.8);
    double ea = approximation_error(a, 0.5 - 0.05 * 8, 0.5 + 0.05 * 8);
    double eb = approximation_error(b, 2.0 - 0.2 * 8, 2.0 + 0.2 * 8);
    double ec = approximation_error(c, 8.0 - 0.8 * 8, 8.0 + 0.8 * 8);
    CHECK_THAT(ea, WithinAbs(eb, 1e-12));
    CHECK_THAT(eb, WithinAbs(ec, 1e-12));
    // error vanishes at the midpoint
    LenderPopulation mid(1.0, 0.0, 1.0);
    CHECK(std::abs(demand_intercept_exact(0.0, mid) -
                   demand_intercept_logistic(0.0, mid)) < 1e-15);

    CHECK_THROWS_AS(approximation_error(pop, 1.4, 1.6), UsageError);
}

TEST_CASE("clearing price") {
    LenderPopulation pop(1000.0, 1.5, 0.3);
    SupplyDemandParams sd{0.0, 2.0, 8.0};
    auto mc = clearing_price(1.5, pop, sd);
    CHECK_THAT(mc.price, WithinAbs(50.0, 1e-12));
    // supply equals demand at the clearing point
    CHECK_THAT(sd.alpha_s + sd.beta_s * mc.price,
               WithinAbs(demand_intercept_logistic(1.5, pop) - sd.beta_d * mc.price, 1e-9));
    // degenerate clearing: intercepts equal -> zero price
    SupplyDemandParams deg{500.0, 1.0, 1.0};
    CHECK_THAT(clearing_price(1.5, pop, deg).price, WithinAbs(0.0, 1e-12));
    CHECK_THROWS_AS(clearing_price(1.5, pop, SupplyDemandParams{0.0, 0.0, 0.0}),
                    UsageError);
}

TEST_CASE("boundary-calibrated clearing curve matches the closed-form price") {
    LenderPopulation pop(1000.0, 1.5, 0.3);
    BondTerms terms(100.0, 0.05);
    double r = 0.03;
    auto sd = calibrated_supply_demand(pop, terms, r);
    CHECK(sd.alpha_s == 0.0);
    ModelParams params(1.5, pop.eta());
    double prev = 1e9;
    for (int k = 0; k <= 300; ++k) {
        double ratio = 3.0 * k / 300.0;
        double price = clearing_price(ratio, pop, sd).price;
        CHECK_THAT(price, WithinAbs(model_bond_price(ratio, params, r, terms), 1e-9));
        CHECK(price < prev);
        prev = price;
    }
}

TEST_CASE("consistency chain reproduces the sigmoid probability") {
    BondTerms terms(100.0, 0.05);
    double r = 0.03;
    RecoveryAssumption rho0(0.0);
    for (double ratio_over : {5.0, 8.0, 12.0}) {
        ModelParams params(2.0, 2.0 / ratio_over);
        double corr = std::exp(-params.r_c / params.eta);
        for (double ratio : {1.0, 2.0, 3.0}) {
            double price = model_bond_price(ratio, params, r, terms);
            double implied = prob_from_bond(price, terms, r, rho0).value();
            double direct = model_default_prob(ratio, params, rho0).value();
            CHECK(std::abs(implied - direct) <= corr + 1e-15);
        }
    }
}

TEST_CASE("step-function population limit") {
    LenderPopulation pop(1000.0, 1.5, 0.0);
    CHECK(demand_intercept_exact(1.0, pop) == 1000.0);
    CHECK(demand_intercept_exact(2.0, pop) == 0.0);
    CHECK(demand_intercept_exact(1.5, pop) == 500.0);
    CHECK(demand_intercept_logistic(1.0, pop) == 1000.0);
    CHECK(demand_intercept_logistic(2.0, pop) == 0.0);
    // bistable prices: risk-free level below R_c, zero above
    SupplyDemandParams sd{0.0, 0.0, 10.0};
    CHECK(clearing_price(1.0, pop, sd).price == 100.0);
    CHECK(clearing_price(2.0, pop, sd).price == 0.0);
}

TEST_CASE("population validation") {
    CHECK_THROWS_AS(LenderPopulation(0.0, 1.5, 0.3), UsageError);
    CHECK_THROWS_AS(LenderPopulation(10.0, 1.5, -0.1), UsageError);
    LenderPopulation pop(10.0, 1.5, 0.4);
    CHECK_THAT(pop.eta(), WithinRel(0.4 * std::sqrt(2.0 * std::numbers::pi) / 4.0, 1e-15));
}
