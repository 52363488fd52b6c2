// Policy-path evaluation: projected debt ratios under budget/growth targets,
// compared against the certain-default threshold.
#pragma once

#include <fstream>

#include "sovdebt/core.hpp"
#include "sovdebt/project.hpp"
#include "sovdebt/risk_map.hpp"

namespace sovdebt {

enum class RateRule { hold_last, explicit_rates };

struct ScenarioTarget {
    Period period;
    double budget_ratio = 0.0;           // s_t, fraction; positive = deficit
    double gdp_growth = 0.0;             // y_t, fraction
    std::optional<double> long_rate;     // i_t, required under explicit_rates
};

/// A policy path. File values for budget_ratio, gdp_growth and long_rate are
/// percentages; haircut is a fraction. The haircut scope defaults to the
/// whole debt stock.
struct ScenarioSpec {
    std::string country;
    std::string label;
    bool bailout = false;
    double haircut = 0.0;
    RateRule rate_rule = RateRule::hold_last;
    std::vector<ScenarioTarget> targets;

    void check() const {
        if (targets.empty()) throw DataError("empty scenario");
        if (haircut < 0.0 || haircut >= 1.0)
            throw DataError("haircut must be in [0,1)");
        for (size_t k = 1; k < targets.size(); ++k)
            if (!(targets[k - 1].period < targets[k].period))
                throw DataError("scenario periods must be increasing");
        if (rate_rule == RateRule::explicit_rates)
            for (const auto& t : targets)
                if (!t.long_rate)
                    throw DataError("missing long_rate for period " + t.period.str() +
                                    " under explicit rate rule");
    }

    static ScenarioSpec load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot open scenario '" + path + "'");
        ScenarioSpec spec;
        std::string line;
        int lineno = 0;
        auto current = [&]() -> ScenarioTarget& {
            if (spec.targets.empty())
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": target key before any period");
            return spec.targets.back();
        };
        while (std::getline(in, line)) {
            ++lineno;
            std::string t = detail::trim(line);
            if (t.empty() || t[0] == '#') continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": expected key=value");
            std::string key = detail::trim(t.substr(0, eq));
            std::string val = detail::trim(t.substr(eq + 1));
            auto where = path + ":" + std::to_string(lineno);
            if (key == "country") spec.country = val;
            else if (key == "label") spec.label = val;
            else if (key == "bailout") {
                if (val == "yes") spec.bailout = true;
                else if (val == "no") spec.bailout = false;
                else throw DataError(where + ": bailout must be yes or no");
            } else if (key == "haircut") {
                spec.haircut = detail::parse_double(val, where);
            } else if (key == "rate_rule") {
                if (val == "hold_last") spec.rate_rule = RateRule::hold_last;
                else if (val == "explicit") spec.rate_rule = RateRule::explicit_rates;
                else throw DataError(where + ": unknown rate rule '" + val + "'");
            } else if (key == "period") {
                spec.targets.push_back({Period::parse(val)});
            } else if (key == "budget_ratio") {
                current().budget_ratio = detail::parse_double(val, where) / 100.0;
            } else if (key == "gdp_growth") {
                current().gdp_growth = detail::parse_double(val, where) / 100.0;
            } else if (key == "long_rate") {
                current().long_rate = detail::parse_double(val, where) / 100.0;
            } else {
                throw DataError(where + ": unknown scenario key '" + key + "'");
            }
        }
        spec.check();
        return spec;
    }
};

struct ScenarioOutcome {
    Trajectory trajectory;  // starting point (post-haircut) plus one per target
    bool crossed = false;
    std::optional<DefaultEvent> event;
    double margin = 0.0;  // min over horizon of threshold - R_t
    double threshold = 0.0;
};

/// Ratio after a write-down of the given share of the whole debt stock.
inline double apply_haircut(double end_ratio, double haircut) {
    if (haircut < 0.0 || haircut >= 1.0) throw UsageError("haircut must be in [0,1)");
    return end_ratio * (1.0 - haircut);
}

/// Iterate the accumulation step over the scenario targets from the series
/// end, then classify against R_d = certain_default_ratio(params, recovery).
inline ScenarioOutcome run_scenario(const CountrySeries& series, const ModelParams& params,
                                    const RecoveryAssumption& recovery,
                                    const ScenarioSpec& spec) {
    spec.check();
    if (series.rows.empty()) throw UsageError("empty series");
    const ObservationRow& last = series.rows.back();
    if (spec.targets.front().period != last.period.next(series.frequency))
        throw DataError("scenario starts at " + spec.targets.front().period.str() +
                        ", series ends at " + last.period.str());

    ScenarioOutcome out;
    out.threshold = certain_default_ratio(params, recovery);
    out.trajectory.source = TrajectorySource::recursion;

    double ratio = apply_haircut(last.debt_ratio, spec.haircut);
    double rate = last.long_rate;
    out.trajectory.points.emplace_back(last.period.time(), ratio);
    for (const auto& target : spec.targets) {
        if (spec.rate_rule == RateRule::explicit_rates) rate = *target.long_rate;
        ratio = step_accumulation(ratio, target.budget_ratio, rate, target.gdp_growth);
        out.trajectory.points.emplace_back(target.period.time(), ratio);
    }

    out.margin = std::numeric_limits<double>::infinity();
    for (const auto& [t, r] : out.trajectory.points)
        out.margin = std::min(out.margin, out.threshold - r);
    out.event = default_date(out.trajectory, out.threshold, recovery);
    out.crossed = out.event.has_value();
    return out;
}

}  // namespace sovdebt
