// Supply/demand derivation of the sigmoid price curve: heterogeneous lender
// thresholds, the erf -> logistic approximation, and market clearing.
#pragma once

#include <cmath>
#include <numbers>

#include "sovdebt/core.hpp"
#include "sovdebt/risk_map.hpp"

namespace sovdebt {

/// Lenders with normally distributed exit thresholds.
struct LenderPopulation {
    double count;           // N
    double mean_threshold;  // R_c
    double spread;          // sigma

    LenderPopulation(double n, double rc, double sigma)
        : count(n), mean_threshold(rc), spread(sigma) {
        if (count <= 0.0) throw UsageError("lender count must be positive");
        if (spread < 0.0) throw UsageError("spread must be non-negative");
    }

    /// Slope-matched logistic width: eta = sigma sqrt(2 pi) / 4.
    double eta() const { return spread * std::sqrt(2.0 * std::numbers::pi) / 4.0; }
};

struct SupplyDemandParams {
    double alpha_s = 0.0;  // supply intercept (constant-term expansion)
    double beta_s = 0.0;
    double beta_d = 0.0;

    void check() const {
        if (beta_s + beta_d <= 0.0) throw UsageError("beta_s + beta_d must be positive");
    }
};

struct MarketClearing {
    double price = 0.0;
    double quantity = 0.0;
};

/// Count of lenders whose threshold exceeds R:
/// alpha_d = (N/2)[1 - erf((R - R_c)/(sigma sqrt(2)))].
/// The sigma -> 0 limit is a step at R_c.
inline double demand_intercept_exact(double debt_ratio, const LenderPopulation& pop) {
    if (pop.spread < 1e-9) {
        if (debt_ratio < pop.mean_threshold) return pop.count;
        if (debt_ratio > pop.mean_threshold) return 0.0;
        return pop.count / 2.0;
    }
    double z = (debt_ratio - pop.mean_threshold) / (pop.spread * std::numbers::sqrt2);
    return pop.count / 2.0 * std::erfc(z);
}

/// Logistic approximation alpha_d ~ N / (1 + e^{(R - R_c)/eta}).
inline double demand_intercept_logistic(double debt_ratio, const LenderPopulation& pop) {
    if (pop.spread < 1e-9) {
        if (debt_ratio < pop.mean_threshold) return pop.count;
        if (debt_ratio > pop.mean_threshold) return 0.0;
        return pop.count / 2.0;
    }
    double x = (debt_ratio - pop.mean_threshold) / pop.eta();
    return pop.count / (1.0 + std::exp(x));
}

/// Sup over a uniform grid of |exact - logistic| / N. The grid must span at
/// least +-6 sigma around the mean threshold.
inline double approximation_error(const LenderPopulation& pop, double lo, double hi,
                                  int steps = 4800) {
    if (pop.spread < 1e-9) throw UsageError("spread must be positive");
    if (lo > pop.mean_threshold - 6.0 * pop.spread ||
        hi < pop.mean_threshold + 6.0 * pop.spread)
        throw UsageError("grid must span at least 6 sigma around the mean threshold");
    if (steps < 2) throw UsageError("grid needs at least 2 steps");
    double sup = 0.0;
    for (int k = 0; k <= steps; ++k) {
        double r = lo + (hi - lo) * k / steps;
        double d = std::abs(demand_intercept_exact(r, pop) -
                            demand_intercept_logistic(r, pop)) /
                   pop.count;
        sup = std::max(sup, d);
    }
    return sup;
}

/// Clearing price B = (alpha_d(R) - alpha_s)/(beta_d + beta_s), logistic demand.
inline MarketClearing clearing_price(double debt_ratio, const LenderPopulation& pop,
                                     const SupplyDemandParams& sd) {
    sd.check();
    double alpha_d = demand_intercept_logistic(debt_ratio, pop);
    MarketClearing mc;
    mc.price = (alpha_d - sd.alpha_s) / (sd.beta_d + sd.beta_s);
    mc.quantity = sd.alpha_s + sd.beta_s * mc.price;
    return mc;
}

/// Supply/demand constants that impose the boundary conditions: price -> 0
/// as R -> infinity forces alpha_s = 0, and the R -> 0 limit pins the scale
/// so the clearing curve coincides with model_bond_price.
inline SupplyDemandParams calibrated_supply_demand(const LenderPopulation& pop,
                                                   const BondTerms& terms,
                                                   double risk_free_rate) {
    if (pop.spread < 1e-9) throw UsageError("spread must be positive");
    double price_at_zero = model_bond_price(0.0, ModelParams(pop.mean_threshold, pop.eta()),
                                            risk_free_rate, terms);
    double demand_at_zero = demand_intercept_logistic(0.0, pop);
    SupplyDemandParams sd;
    sd.alpha_s = 0.0;
    sd.beta_d = demand_at_zero / price_at_zero;
    sd.beta_s = 0.0;
    sd.check();
    return sd;
}

}  // namespace sovdebt
