// Calibration of (R_c, eta): linear fit in default-distance space, nonlinear
// sigmoid fit in probability space, a brute-force grid oracle, and the
// market-consistency diagnostic.
#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <limits>

#include "sovdebt/core.hpp"
#include "sovdebt/risk_map.hpp"

namespace sovdebt {

struct FitWindow {
    Period start;
    Period end;

    FitWindow(Period s, Period e) : start(s), end(e) {
        if (end < start) throw UsageError("fit window end precedes start");
    }
    bool contains(Period p) const { return start <= p && p <= end; }
};

enum class FitMethod { linear, sigmoid };

struct FitResult {
    ModelParams params;
    FitMethod method = FitMethod::linear;
    FitWindow window;
    double sse = 0.0;
    double r_squared = 0.0;
    std::vector<Period> periods;     // usable rows, in order
    std::vector<double> residuals;   // same length as periods
    bool boundary = false;           // sigmoid optimum hit a search bound
};

struct ConsistencyReport {
    FitResult fit;
    double max_abs_residual = 0.0;
    bool consistent = false;
    std::vector<Period> periods;
    std::vector<int> deviation_signs;  // sign of R_t - (R_c - eta X_t) per year
};

namespace detail {

struct XYPoint {
    Period period;
    double debt_ratio;
    double x;  // default distance
};

inline std::vector<XYPoint> usable_points(const CountrySeries& series,
                                          const FitWindow& window) {
    std::vector<XYPoint> pts;
    for (const auto& row : series.rows) {
        if (!window.contains(row.period)) continue;
        if (row.long_rate <= row.risk_free_rate) continue;  // X_t undefined
        pts.push_back({row.period, row.debt_ratio,
                       default_distance(row.long_rate, row.risk_free_rate)});
    }
    return pts;
}

}  // namespace detail

/// Ordinary least squares of R_t on X_t. Intercept is R_c, negative slope
/// is eta; standard errors from the linear-model covariance.
inline FitResult fit_linear(const CountrySeries& series, const FitWindow& window) {
    auto pts = detail::usable_points(series, window);
    const size_t n = pts.size();
    if (n < 4) throw UsageError("fewer than 4 usable rows in fit window");

    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) {
        mx += p.x;
        my += p.debt_ratio;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : pts) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.debt_ratio - my);
        syy += (p.debt_ratio - my) * (p.debt_ratio - my);
    }
    if (sxx <= 1e-10 * n * std::max(1.0, mx * mx))
        throw NumericError("zero variance in default distance");
    double slope = sxy / sxx;
    double intercept = my - slope * mx;

    FitResult fit{ModelParams(intercept, -slope), FitMethod::linear, window};
    for (const auto& p : pts) {
        fit.periods.push_back(p.period);
        double resid = p.debt_ratio - (intercept + slope * p.x);
        fit.residuals.push_back(resid);
        fit.sse += resid * resid;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - fit.sse / syy;
    double s2 = fit.sse / static_cast<double>(n - 2);
    double sum_x2 = sxx + n * mx * mx;
    fit.params.eta_stderr = std::sqrt(s2 / sxx);
    fit.params.r_c_stderr = std::sqrt(s2 * sum_x2 / (n * sxx));
    return fit;
}

namespace detail {

struct ProbPoint {
    Period period;
    double debt_ratio;
    double p;  // observed implied default probability
};

/// Rows with observable P_t in [0,1]; rows implying P > 1 are outside the
/// equilibrium domain and are skipped.
inline std::vector<ProbPoint> prob_points(const CountrySeries& series,
                                          const FitWindow& window,
                                          const RecoveryAssumption& recovery,
                                          std::vector<Period>* excluded = nullptr) {
    std::vector<ProbPoint> pts;
    for (const auto& row : series.rows) {
        if (!window.contains(row.period)) continue;
        if (row.long_rate <= row.risk_free_rate) {
            if (excluded) excluded->push_back(row.period);
            continue;
        }
        double p = (1.0 - (1.0 + row.risk_free_rate) / (1.0 + row.long_rate)) /
                   (1.0 - recovery.rho);
        if (p > 1.0) {
            if (excluded) excluded->push_back(row.period);
            continue;
        }
        pts.push_back({row.period, row.debt_ratio, p});
    }
    return pts;
}

inline double sigmoid_prob(double debt_ratio, double r_c, double eta, double rho) {
    return 1.0 / (1.0 + std::exp(-(debt_ratio - r_c) / eta)) / (1.0 - rho);
}

inline double sigmoid_sse(const std::vector<ProbPoint>& pts, double r_c, double eta,
                          double rho) {
    double sse = 0.0;
    for (const auto& p : pts) {
        double d = sigmoid_prob(p.debt_ratio, r_c, eta, rho) - p.p;
        sse += d * d;
    }
    return sse;
}

/// Deterministic Nelder-Mead on a 2-d objective.
inline std::array<double, 2> nelder_mead(
    const std::function<double(const std::array<double, 2>&)>& f,
    std::array<double, 2> start, int max_iter, bool* converged) {
    using P = std::array<double, 2>;
    std::array<P, 3> v{P{start[0], start[1]},
                       P{start[0] * 1.05 + 1e-4, start[1]},
                       P{start[0], start[1] * 1.05 + 1e-4}};
    std::array<double, 3> fv{f(v[0]), f(v[1]), f(v[2])};
    auto order = [&] {
        // insertion sort of 3, stable
        for (int i = 1; i < 3; ++i)
            for (int j = i; j > 0 && fv[j] < fv[j - 1]; --j) {
                std::swap(fv[j], fv[j - 1]);
                std::swap(v[j], v[j - 1]);
            }
    };
    order();
    *converged = false;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fv[2] - fv[0]) <= 1e-16 + 1e-12 * std::abs(fv[0]) &&
            std::abs(v[2][0] - v[0][0]) + std::abs(v[2][1] - v[0][1]) < 1e-12) {
            *converged = true;
            break;
        }
        P centroid{(v[0][0] + v[1][0]) / 2.0, (v[0][1] + v[1][1]) / 2.0};
        auto blend = [&](double t) {
            return P{centroid[0] + t * (v[2][0] - centroid[0]),
                     centroid[1] + t * (v[2][1] - centroid[1])};
        };
        P xr = blend(-1.0);
        double fr = f(xr);
        if (fr < fv[0]) {
            P xe = blend(-2.0);
            double fe = f(xe);
            if (fe < fr) {
                v[2] = xe;
                fv[2] = fe;
            } else {
                v[2] = xr;
                fv[2] = fr;
            }
        } else if (fr < fv[1]) {
            v[2] = xr;
            fv[2] = fr;
        } else {
            P xc = blend(fr < fv[2] ? -0.5 : 0.5);
            double fc = f(xc);
            if (fc < std::min(fr, fv[2])) {
                v[2] = xc;
                fv[2] = fc;
            } else {
                for (int k = 1; k < 3; ++k) {
                    v[k] = {v[0][0] + 0.5 * (v[k][0] - v[0][0]),
                            v[0][1] + 0.5 * (v[k][1] - v[0][1])};
                    fv[k] = f(v[k]);
                }
            }
        }
        order();
    }
    return v[0];
}

}  // namespace detail

struct SigmoidFitOptions {
    double r_c_min = 0.3;
    double r_c_max = 3.5;
    double eta_min = 0.005;
    double eta_max = 0.6;
    int max_iterations = 4000;
};

/// Nonlinear least squares of observed P_t against the sigmoid model,
/// derivative-free simplex started from the linear estimate. Standard errors
/// come from the linearized (Jacobian) covariance at the optimum.
inline FitResult fit_sigmoid(const CountrySeries& series, const FitWindow& window,
                             const RecoveryAssumption& recovery,
                             const SigmoidFitOptions& opt = {}) {
    auto pts = detail::prob_points(series, window, recovery);
    const size_t n = pts.size();
    if (n < 4) throw UsageError("fewer than 4 usable rows in fit window");

    FitResult seed = fit_linear(series, window);
    auto clamp = [&](double v, double lo, double hi) { return std::min(std::max(v, lo), hi); };
    std::array<double, 2> start{clamp(seed.params.r_c, opt.r_c_min, opt.r_c_max),
                                clamp(seed.params.eta, opt.eta_min, opt.eta_max)};

    auto objective = [&](const std::array<double, 2>& q) {
        if (q[0] < opt.r_c_min || q[0] > opt.r_c_max || q[1] < opt.eta_min ||
            q[1] > opt.eta_max)
            return std::numeric_limits<double>::infinity();
        return detail::sigmoid_sse(pts, q[0], q[1], recovery.rho);
    };
    bool converged = false;
    auto best = detail::nelder_mead(objective, start, opt.max_iterations, &converged);
    if (!converged) throw NumericError("sigmoid fit did not converge");

    double r_c = best[0], eta = best[1];
    double edge = 1e-9;
    bool boundary = r_c <= opt.r_c_min + edge || r_c >= opt.r_c_max - edge ||
                    eta <= opt.eta_min + edge || eta >= opt.eta_max - edge;

    FitResult fit{ModelParams(r_c, eta), FitMethod::sigmoid, window};
    fit.boundary = boundary;
    double mean_p = 0.0;
    for (const auto& p : pts) mean_p += p.p;
    mean_p /= n;
    double syy = 0.0;
    // Jacobian of the model wrt (r_c, eta); J^T J for the covariance
    double j11 = 0.0, j12 = 0.0, j22 = 0.0;
    for (const auto& p : pts) {
        double model = detail::sigmoid_prob(p.debt_ratio, r_c, eta, recovery.rho);
        double resid = p.p - model;
        fit.periods.push_back(p.period);
        fit.residuals.push_back(resid);
        fit.sse += resid * resid;
        syy += (p.p - mean_p) * (p.p - mean_p);
        double x = (p.debt_ratio - r_c) / eta;
        double s = 1.0 / (1.0 + std::exp(-x));
        double core = s * (1.0 - s) / (1.0 - recovery.rho);
        double d_rc = -core / eta;
        double d_eta = -core * x / eta;
        j11 += d_rc * d_rc;
        j12 += d_rc * d_eta;
        j22 += d_eta * d_eta;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - fit.sse / syy;
    double s2 = fit.sse / static_cast<double>(n - 2);
    double det = j11 * j22 - j12 * j12;
    if (det > 0.0) {
        fit.params.r_c_stderr = std::sqrt(s2 * j22 / det);
        fit.params.eta_stderr = std::sqrt(s2 * j11 / det);
    }
    return fit;
}

struct GridSpec {
    double r_c_min = 0.5;
    double r_c_max = 3.0;
    double eta_min = 0.01;
    double eta_max = 0.5;
    double r_c_step = 0.005;
    double eta_step = 0.005;
};

/// Exhaustive SSE scan over a parameter grid; the independent oracle for
/// fit_sigmoid. Exact SSE ties break to the smallest R_c, then smallest eta.
inline FitResult grid_oracle(const CountrySeries& series, const FitWindow& window,
                             const RecoveryAssumption& recovery, const GridSpec& grid = {}) {
    auto pts = detail::prob_points(series, window, recovery);
    if (pts.size() < 4) throw UsageError("fewer than 4 usable rows in fit window");

    double best_sse = std::numeric_limits<double>::infinity();
    double best_rc = grid.r_c_min, best_eta = grid.eta_min;
    const long nr = std::lround((grid.r_c_max - grid.r_c_min) / grid.r_c_step);
    const long ne = std::lround((grid.eta_max - grid.eta_min) / grid.eta_step);
    bool flat_rc = true;
    double first_col_sse = -1.0;
    for (long a = 0; a <= nr; ++a) {
        double rc = grid.r_c_min + a * grid.r_c_step;
        for (long b = 0; b <= ne; ++b) {
            double eta = grid.eta_min + b * grid.eta_step;
            double sse = detail::sigmoid_sse(pts, rc, eta, recovery.rho);
            if (sse < best_sse) {
                best_sse = sse;
                best_rc = rc;
                best_eta = eta;
            }
            if (b == 0) {
                if (a == 0) first_col_sse = sse;
                else if (std::abs(sse - first_col_sse) > 1e-15) flat_rc = false;
            }
        }
    }
    FitResult fit{ModelParams(best_rc, best_eta), FitMethod::sigmoid, window};
    fit.boundary = flat_rc || best_rc == grid.r_c_min || best_rc == grid.r_c_max ||
                   best_eta == grid.eta_min || best_eta == grid.eta_max;
    for (const auto& p : pts) {
        double resid = p.p - detail::sigmoid_prob(p.debt_ratio, best_rc, best_eta,
                                                  recovery.rho);
        fit.periods.push_back(p.period);
        fit.residuals.push_back(resid);
        fit.sse += resid * resid;
    }
    return fit;
}

/// Market-consistency diagnostic: residuals of R_t against the fitted line
/// R_c - eta X_t, with per-year signs so over/under-priced years are visible.
inline ConsistencyReport consistency_check(const CountrySeries& series,
                                           const FitResult& fit, double tolerance) {
    ConsistencyReport report{fit};
    auto pts = detail::usable_points(series, fit.window);
    for (const auto& p : pts) {
        double resid = p.debt_ratio - (fit.params.r_c - fit.params.eta * p.x);
        report.periods.push_back(p.period);
        report.deviation_signs.push_back(resid > 0.0 ? 1 : (resid < 0.0 ? -1 : 0));
        report.max_abs_residual = std::max(report.max_abs_residual, std::abs(resid));
    }
    report.consistent = report.max_abs_residual <= tolerance;
    return report;
}

}  // namespace sovdebt
