// Closed-form transforms among interest rates, bond prices, debt ratios and
// default probabilities.
#pragma once

#include <cmath>

#include "sovdebt/core.hpp"

namespace sovdebt {

/// Default probability implied by the spread of a long rate over the
/// risk-free rate: P = (1 - (1+r)/(1+i)) / (1-rho).
inline DefaultProbability implied_default_prob(double long_rate, double risk_free_rate,
                                               const RecoveryAssumption& recovery) {
    if (risk_free_rate <= -1.0 || long_rate <= -1.0)
        throw UsageError("rates must exceed -1");
    if (long_rate < risk_free_rate) throw NumericError("negative spread");
    double p = (1.0 - (1.0 + risk_free_rate) / (1.0 + long_rate)) / (1.0 - recovery.rho);
    if (p > 1.0)
        throw NumericError("rate implies probability above one");
    return DefaultProbability(p);
}

/// Analytic inverse of implied_default_prob at fixed r and rho.
inline double rate_from_prob(const DefaultProbability& p, double risk_free_rate,
                             const RecoveryAssumption& recovery) {
    double q = 1.0 - p.value() * (1.0 - recovery.rho);
    return (1.0 + risk_free_rate) / q - 1.0;
}

/// One-period bond price B = B_0 (1+i_0) / (1+i).
inline double bond_price(double current_rate, const BondTerms& terms) {
    if (current_rate <= -1.0) throw UsageError("rate must exceed -1");
    return terms.face_value * (1.0 + terms.issue_rate) / (1.0 + current_rate);
}

/// Default probability implied by an observed bond price:
/// P = (1 - (B/B_0)(1+r)/(1+i_0)) / (1-rho).
inline DefaultProbability prob_from_bond(double price, const BondTerms& terms,
                                         double risk_free_rate,
                                         const RecoveryAssumption& recovery) {
    if (price <= 0.0) throw UsageError("price must be positive");
    double p = (1.0 - (price / terms.face_value) * (1.0 + risk_free_rate) /
                          (1.0 + terms.issue_rate)) /
               (1.0 - recovery.rho);
    if (p < 0.0) throw NumericError("price too high for this recovery rate");
    if (p > 1.0) throw NumericError("price too low for this recovery rate");
    return DefaultProbability(p);
}

/// Default distance X_t = ln(1+r_t) - ln(i_t - r_t). Zero at the critical
/// rate i_c = 1 + 2 r_t, large when spreads are small.
inline double default_distance(double long_rate, double risk_free_rate) {
    if (long_rate <= risk_free_rate) throw NumericError("non-positive spread");
    return std::log1p(risk_free_rate) - std::log(long_rate - risk_free_rate);
}

/// Sigmoid default probability P = [1 - 1/(1+e^{(R-R_c)/eta})] / (1-rho).
inline DefaultProbability model_default_prob(double debt_ratio, const ModelParams& params,
                                             const RecoveryAssumption& recovery) {
    double x = (debt_ratio - params.r_c) / params.eta;
    // 1 - 1/(1+e^x) == 1/(1+e^-x), stable for large |x|
    double sig = 1.0 / (1.0 + std::exp(-x));
    double p = sig / (1.0 - recovery.rho);
    if (p > 1.0) {
        // exactly at R_d the division can land a few ulp above one
        if (p < 1.0 + 1e-9) return DefaultProbability(1.0);
        throw NumericError("beyond certain default");
    }
    return DefaultProbability(p);
}

/// Debt ratio at which the model probability reaches one:
/// R_d = R_c + eta ln(1/rho - 1). Undefined at rho = 0 (P approaches one
/// only asymptotically).
inline double certain_default_ratio(const ModelParams& params,
                                    const RecoveryAssumption& recovery) {
    if (recovery.rho == 0.0)
        throw NumericError("certain-default ratio is infinite at zero recovery");
    return params.r_c + params.eta * std::log(1.0 / recovery.rho - 1.0);
}

/// Exact sigmoid bond price, boundary-condition form:
/// B = B_0 ((1+i_0)/(1+r)) (1+e^{-R_c/eta}) / (1+e^{(R-R_c)/eta}).
inline double model_bond_price(double debt_ratio, const ModelParams& params,
                               double risk_free_rate, const BondTerms& terms) {
    double x = (debt_ratio - params.r_c) / params.eta;
    double corr = 1.0 + std::exp(-params.r_c / params.eta);
    return terms.face_value * (1.0 + terms.issue_rate) / (1.0 + risk_free_rate) * corr /
           (1.0 + std::exp(x));
}

}  // namespace sovdebt
