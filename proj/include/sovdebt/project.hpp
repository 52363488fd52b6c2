// Debt-ratio projection: polynomial trend regression, the accumulation
// recursion, closed-form constant-parameter paths, and default dating.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "sovdebt/calibrate.hpp"
#include "sovdebt/core.hpp"

namespace sovdebt {

/// Polynomial trend in years since the window start.
struct TrendModel {
    std::vector<double> coefficients;  // ascending powers of (t - t0)
    int order = 1;
    FitWindow window;
    double t0 = 0.0;  // time coordinate of the window start

    double value(double t) const {
        double dt = t - t0;
        double acc = 0.0;
        for (size_t k = coefficients.size(); k-- > 0;) acc = acc * dt + coefficients[k];
        return acc;
    }
};

struct MacroPath {
    std::vector<double> budget_ratio;
    std::vector<double> long_rate;
    std::vector<double> gdp_growth;
    Frequency frequency = Frequency::annual;

    size_t size() const { return budget_ratio.size(); }
    void check() const {
        if (budget_ratio.size() != long_rate.size() ||
            budget_ratio.size() != gdp_growth.size())
            throw UsageError("macro path components differ in length");
        for (double y : gdp_growth)
            if (y <= -1.0) throw UsageError("growth rate must exceed -1");
        for (double i : long_rate)
            if (i <= -1.0) throw UsageError("interest rate must exceed -1");
    }
};

enum class TrajectorySource { trend, recursion, closed_form };

inline std::string to_string(TrajectorySource s) {
    switch (s) {
        case TrajectorySource::trend: return "trend";
        case TrajectorySource::recursion: return "recursion";
        default: return "closed_form";
    }
}

/// Dated projected debt ratios. Points carry fractional-year time
/// coordinates so sub-annual sampling is representable.
struct Trajectory {
    std::vector<std::pair<double, double>> points;  // (time, debt_ratio)
    TrajectorySource source = TrajectorySource::trend;
};

struct MonthDate {
    int year = 0;
    int month = 0;  // 1..12

    auto operator<=>(const MonthDate&) const = default;
    std::string str() const {
        static const char* names[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
        return std::string(names[month - 1]) + " " + std::to_string(year);
    }
    /// Signed distance in months.
    int months_until(const MonthDate& other) const {
        return (other.year - year) * 12 + (other.month - month);
    }
};

inline MonthDate month_of(double t) {
    int year = static_cast<int>(std::floor(t));
    int month = static_cast<int>(std::floor((t - year) * 12.0)) + 1;
    if (month > 12) month = 12;
    return {year, month};
}

struct DefaultEvent {
    MonthDate date;
    double threshold = 0.0;
    double rho = 0.0;
    bool already_beyond = false;  // trajectory starts at or above threshold
};

/// Least-squares polynomial in time. Solved on a centered basis for
/// conditioning, then shifted to powers of (t - window start) so the stored
/// coefficients are origin-anchored.
inline TrendModel fit_trend(const CountrySeries& series, const FitWindow& window,
                            int order) {
    if (order < 1 || order > 3) throw UsageError("trend order must be 1..3");
    std::vector<double> t, v;
    for (const auto& row : series.rows) {
        if (!window.contains(row.period)) continue;
        t.push_back(row.period.time());
        v.push_back(row.debt_ratio);
    }
    const size_t n = t.size();
    if (n < static_cast<size_t>(order) + 2)
        throw UsageError("underdetermined trend window");

    double tm = 0.0;
    for (double x : t) tm += x;
    tm /= n;

    const int m = order + 1;
    // normal equations on the centered basis, long double accumulation
    long double ata[4][4] = {};
    long double atv[4] = {};
    for (size_t k = 0; k < n; ++k) {
        long double basis[4];
        basis[0] = 1.0L;
        for (int j = 1; j < m; ++j) basis[j] = basis[j - 1] * (t[k] - tm);
        for (int a = 0; a < m; ++a) {
            atv[a] += basis[a] * v[k];
            for (int b = 0; b < m; ++b) ata[a][b] += basis[a] * basis[b];
        }
    }
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs((double)ata[r][col]) > std::abs((double)ata[piv][col])) piv = r;
        if (ata[piv][col] == 0.0L) throw NumericError("singular trend system");
        if (piv != col) {
            for (int c = 0; c < m; ++c) std::swap(ata[piv][c], ata[col][c]);
            std::swap(atv[piv], atv[col]);
        }
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            long double f = ata[r][col] / ata[col][col];
            for (int c = 0; c < m; ++c) ata[r][c] -= f * ata[col][c];
            atv[r] -= f * atv[col];
        }
    }
    long double centered[4] = {};
    for (int a = 0; a < m; ++a) centered[a] = atv[a] / ata[a][a];

    // shift from powers of (t - tm) to powers of (t - t0)
    double t0 = t.front();
    long double d = tm - t0;  // (t - tm) = (t - t0) - d
    long double shifted[4] = {};
    long double binom[4][4] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}};
    for (int j = 0; j < m; ++j) {
        long double p = 1.0L;  // (-d)^(j-k) built backwards
        for (int k = j; k >= 0; --k) {
            shifted[k] += centered[j] * binom[j][k] * p;
            p *= -d;
        }
    }
    TrendModel model{{}, order, window, t0};
    for (int a = 0; a < m; ++a) model.coefficients.push_back((double)shifted[a]);
    return model;
}

/// Sample a trend model from the window start out to a horizon.
inline Trajectory trend_trajectory(const TrendModel& model, double horizon_years,
                                   int steps_per_year = 12) {
    Trajectory traj;
    traj.source = TrajectorySource::trend;
    double t_end = model.t0 + horizon_years;
    for (double t = model.t0;; t += 1.0 / steps_per_year) {
        if (t > t_end + 1e-9) break;
        traj.points.emplace_back(t, model.value(t));
    }
    return traj;
}

/// One step of the accumulation equation
/// R_t = s_t + R_{t-1} ((i_t - y_t)/(1 + y_t) + 1).
/// This is the single authoritative implementation; recursion and scenario
/// projections both call it.
inline double step_accumulation(double prev_ratio, double s, double i, double y) {
    if (y <= -1.0) throw UsageError("growth rate must exceed -1");
    return s + prev_ratio * ((i - y) / (1.0 + y) + 1.0);
}

/// Iterate the accumulation equation over a macro path.
inline Trajectory project_recursion(double start_ratio, const MacroPath& path,
                                    double t_start = 0.0) {
    path.check();
    if (path.size() == 0) throw UsageError("empty macro path");
    Trajectory traj;
    traj.source = TrajectorySource::recursion;
    double dt = path.frequency == Frequency::annual ? 1.0 : 0.25;
    double r = start_ratio;
    for (size_t k = 0; k < path.size(); ++k) {
        r = step_accumulation(r, path.budget_ratio[k], path.long_rate[k],
                              path.gdp_growth[k]);
        traj.points.emplace_back(t_start + (k + 1) * dt, r);
    }
    return traj;
}

enum class ClosedFormKind { discrete, continuous };

/// Constant-parameter closed forms of the accumulation equation. The i = y
/// singularity switches to the analytic limit R_0 + s t.
inline double closed_form_path(double start_ratio, double i, double s, double y,
                               double t, ClosedFormKind kind) {
    if (y <= -1.0) throw UsageError("growth rate must exceed -1");
    if (std::abs(i - y) < 1e-12) return start_ratio + s * t;
    double growth;
    if (kind == ClosedFormKind::discrete)
        growth = std::pow((1.0 + i) / (1.0 + y), t);
    else
        growth = std::exp((i - y) / (1.0 + y) * t);
    return start_ratio * growth + s * (1.0 + y) / (i - y) * (growth - 1.0);
}

/// First point where the trajectory reaches the threshold; the month is
/// resolved by linear interpolation between the bracketing points and
/// reported as the month containing the crossing.
inline std::optional<DefaultEvent> default_date(const Trajectory& trajectory,
                                                double threshold,
                                                const RecoveryAssumption& recovery) {
    if (trajectory.points.empty()) throw UsageError("empty trajectory");
    const auto& first = trajectory.points.front();
    if (first.second >= threshold)
        return DefaultEvent{month_of(first.first), threshold, recovery.rho, true};
    for (size_t k = 1; k < trajectory.points.size(); ++k) {
        const auto& [t1, v1] = trajectory.points[k - 1];
        const auto& [t2, v2] = trajectory.points[k];
        if (v2 >= threshold) {
            double frac = v2 == v1 ? 1.0 : (threshold - v1) / (v2 - v1);
            double t_cross = t1 + frac * (t2 - t1);
            return DefaultEvent{month_of(t_cross), threshold, recovery.rho, false};
        }
    }
    return std::nullopt;
}

}  // namespace sovdebt
