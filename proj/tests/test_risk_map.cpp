#include <catch2/catch_amalgamated.hpp>

#include "sovdebt/risk_map.hpp"

using namespace sovdebt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("implied default probability from spread") {
    RecoveryAssumption half(0.5);
    CHECK_THAT(implied_default_prob(0.05, 0.03, half).value(),
               WithinAbs(0.03809523809523818, 1e-15));
    CHECK(implied_default_prob(0.03, 0.03, half).value() == 0.0);
    CHECK_THROWS_AS(implied_default_prob(0.02, 0.03, half), NumericError);
    // spread so wide the implied probability would exceed one
    CHECK_THROWS_AS(implied_default_prob(5.0, 0.03, half), NumericError);
    CHECK_THROWS_AS(implied_default_prob(0.05, -1.5, half), UsageError);
}

TEST_CASE("rate/probability round trip") {
    RecoveryAssumption rho(0.4);
    for (double i : {0.031, 0.05, 0.12, 0.55}) {
        double p = implied_default_prob(i, 0.03, rho).value();
        CHECK_THAT(rate_from_prob(DefaultProbability(p), 0.03, rho), WithinRel(i, 1e-12));
    }
    for (double p : {0.0, 0.1, 0.5, 0.99}) {
        double i = rate_from_prob(DefaultProbability(p), 0.03, rho);
        CHECK_THAT(implied_default_prob(i, 0.03, rho).value(), WithinAbs(p, 1e-12));
    }
}

TEST_CASE("one-period bond price") {
    CHECK_THAT(bond_price(0.30, BondTerms(100.0, 0.04)), WithinAbs(80.0, 1e-12));
    CHECK_THAT(bond_price(0.04, BondTerms(100.0, 0.04)), WithinAbs(100.0, 1e-12));
    CHECK_THROWS_AS(BondTerms(0.0, 0.04), UsageError);
    CHECK_THROWS_AS(bond_price(-1.0, BondTerms(100.0, 0.04)), UsageError);
}

TEST_CASE("probability from bond price") {
    BondTerms terms(100.0, 0.05);
    RecoveryAssumption rho(0.5);
    for (double i : {0.04, 0.08, 0.20}) {
        double price = bond_price(i, terms);
        double via_price = prob_from_bond(price, terms, 0.03, rho).value();
        double via_rate = implied_default_prob(i, 0.03, rho).value();
        CHECK_THAT(via_price, WithinAbs(via_rate, 1e-12));
    }
    CHECK_THROWS_AS(prob_from_bond(200.0, terms, 0.03, rho), NumericError);
    CHECK_THROWS_AS(prob_from_bond(1.0, terms, 0.03, rho), NumericError);
    CHECK_THROWS_AS(prob_from_bond(-1.0, terms, 0.03, rho), UsageError);
}

TEST_CASE("default distance") {
    CHECK_THAT(default_distance(0.05, 0.03), WithinAbs(3.9415818076696905, 1e-15));
    // zero exactly at the critical rate i = 1 + 2r
    double r = 0.03;
    CHECK_THAT(default_distance(1.0 + 2.0 * r, r), WithinAbs(0.0, 1e-15));
    CHECK_THROWS_AS(default_distance(0.03, 0.03), NumericError);
}

TEST_CASE("sigmoid default probability") {
    ModelParams params(2.0, 0.18);
    RecoveryAssumption rho0(0.0);
    CHECK_THAT(model_default_prob(1.6, params, rho0).value(),
               WithinAbs(0.09777259985079945, 1e-15));
    CHECK_THAT(model_default_prob(2.0, params, rho0).value(), WithinAbs(0.5, 1e-15));
    // stable far in both tails (no overflow, no NaN)
    CHECK(model_default_prob(-100.0, params, rho0).value() < 1e-200);
    CHECK(model_default_prob(100.0, params, rho0).value() == 1.0);
    CHECK(model_default_prob(-1e6, params, rho0).value() == 0.0);
    // with recovery, ratios beyond R_d are outside the model
    CHECK_THROWS_AS(model_default_prob(100.0, params, RecoveryAssumption(0.5)),
                    NumericError);
}

TEST_CASE("certain-default ratio") {
    ModelParams params(2.0, 0.18);
    CHECK_THAT(certain_default_ratio(params, RecoveryAssumption(0.2)),
               WithinAbs(2.24953298500158, 1e-14));
    CHECK_THAT(certain_default_ratio(params, RecoveryAssumption(0.8)),
               WithinAbs(1.7504670149984196, 1e-14));
    CHECK_THAT(certain_default_ratio(params, RecoveryAssumption(0.5)),
               WithinAbs(2.0, 1e-14));
    CHECK_THROWS_AS(certain_default_ratio(params, RecoveryAssumption(0.0)), NumericError);
    // the model probability reaches exactly one at R_d
    RecoveryAssumption rho(0.3);
    double rd = certain_default_ratio(params, rho);
    CHECK_THAT(model_default_prob(rd, params, rho).value(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("sigmoid bond price") {
    ModelParams params(2.0, 0.18);
    BondTerms terms(100.0, 0.05);
    CHECK_THAT(model_bond_price(2.0, params, 0.03, terms),
               WithinAbs(50.97163556337141, 1e-12));
    // R -> 0 recovers the riskless price
    CHECK_THAT(model_bond_price(0.0, params, 0.03, terms),
               WithinRel(100.0 * 1.05 / 1.03, 1e-12));
    // monotone decreasing in the debt ratio
    double prev = model_bond_price(0.0, params, 0.03, terms);
    for (double r = 0.1; r <= 4.0; r += 0.1) {
        double b = model_bond_price(r, params, 0.03, terms);
        CHECK(b < prev);
        prev = b;
    }
}
