// Deterministic report documents and plot-data emitters.
#pragma once

#include <sstream>

#include "sovdebt/calibrate.hpp"
#include "sovdebt/core.hpp"
#include "sovdebt/microstructure.hpp"
#include "sovdebt/project.hpp"
#include "sovdebt/scenario.hpp"

namespace sovdebt {

namespace detail {

inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int k = 15; k >= 0; --k) {
        s[k] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace detail

inline std::string content_digest(std::string_view data) {
    return detail::hex64(detail::fnv1a(data));
}

/// Ordered key=value document. Insertion order is the serialization order,
/// so identical build sequences give byte-identical text.
struct ReportDocument {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, const std::string& value) {
        entries.emplace_back(key, value);
    }
    void add(const std::string& key, const char* value) {
        entries.emplace_back(key, value);
    }
    void add(const std::string& key, double value) {
        entries.emplace_back(key, detail::format_double(value));
    }
    void add(const std::string& key, bool value) {
        entries.emplace_back(key, value ? "yes" : "no");
    }

    std::string str() const {
        std::ostringstream out;
        for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
        return out.str();
    }
};

inline void add_fit(ReportDocument& doc, const std::string& prefix, const FitResult& fit) {
    doc.add(prefix + ".method", fit.method == FitMethod::linear ? "linear" : "sigmoid");
    doc.add(prefix + ".window", fit.window.start.str() + ":" + fit.window.end.str());
    doc.add(prefix + ".r_c", fit.params.r_c);
    if (fit.params.r_c_stderr) doc.add(prefix + ".r_c_stderr", *fit.params.r_c_stderr);
    doc.add(prefix + ".eta", fit.params.eta);
    if (fit.params.eta_stderr) doc.add(prefix + ".eta_stderr", *fit.params.eta_stderr);
    doc.add(prefix + ".sse", fit.sse);
    doc.add(prefix + ".r_squared", fit.r_squared);
    doc.add(prefix + ".points", detail::format_double((double)fit.periods.size()));
    doc.add(prefix + ".boundary", fit.boundary);
    for (size_t k = 0; k < fit.periods.size(); ++k)
        doc.add(prefix + ".residual." + fit.periods[k].str(), fit.residuals[k]);
}

inline void add_consistency(ReportDocument& doc, const std::string& prefix,
                            const ConsistencyReport& report) {
    doc.add(prefix + ".max_abs_residual", report.max_abs_residual);
    doc.add(prefix + ".consistent", report.consistent);
    for (size_t k = 0; k < report.periods.size(); ++k)
        doc.add(prefix + ".sign." + report.periods[k].str(),
                detail::format_double((double)report.deviation_signs[k]));
}

inline void add_event(ReportDocument& doc, const std::string& prefix,
                      const std::optional<DefaultEvent>& event) {
    if (!event) {
        doc.add(prefix, "none within horizon");
        return;
    }
    doc.add(prefix, event->date.str());
    if (event->already_beyond) doc.add(prefix + ".already_beyond", true);
}

inline void add_scenario(ReportDocument& doc, const std::string& prefix,
                         const ScenarioSpec& spec, const ScenarioOutcome& outcome) {
    doc.add(prefix + ".label", spec.label);
    doc.add(prefix + ".bailout", spec.bailout);
    doc.add(prefix + ".haircut", spec.haircut);
    doc.add(prefix + ".threshold", outcome.threshold);
    doc.add(prefix + ".crossed", outcome.crossed);
    doc.add(prefix + ".margin", outcome.margin);
    for (size_t k = 1; k < outcome.trajectory.points.size(); ++k)
        doc.add(prefix + ".ratio." + spec.targets[k - 1].period.str(),
                outcome.trajectory.points[k].second);
}

// ---- plot-data emitters (delimited text, one point per line) ----

/// (period, long_rate, risk_free_rate) time series.
inline std::string plot_rate_series(const CountrySeries& series) {
    std::ostringstream out;
    out << "period\tlong_rate\trisk_free_rate\n";
    for (const auto& r : series.rows)
        out << r.period.str() << '\t' << detail::format_double(r.long_rate) << '\t'
            << detail::format_double(r.risk_free_rate) << '\n';
    return out.str();
}

/// (period, debt_ratio) time series.
inline std::string plot_debt_series(const CountrySeries& series) {
    std::ostringstream out;
    out << "period\tdebt_ratio\n";
    for (const auto& r : series.rows)
        out << r.period.str() << '\t' << detail::format_double(r.debt_ratio) << '\n';
    return out.str();
}

/// (X_t, R_t) points with the fitted line R_c - eta X evaluated at each X.
inline std::string plot_linear_fit(const CountrySeries& series, const FitResult& fit) {
    std::ostringstream out;
    out << "period\tx\tdebt_ratio\tfitted\n";
    for (const auto& p : detail::usable_points(series, fit.window))
        out << p.period.str() << '\t' << detail::format_double(p.x) << '\t'
            << detail::format_double(p.debt_ratio) << '\t'
            << detail::format_double(fit.params.r_c - fit.params.eta * p.x) << '\n';
    return out.str();
}

/// (R_t, observed P_t, model P_t) points for the sigmoid fit.
inline std::string plot_sigmoid_fit(const CountrySeries& series, const FitResult& fit,
                                    const RecoveryAssumption& recovery) {
    std::ostringstream out;
    out << "period\tdebt_ratio\tprob_observed\tprob_model\n";
    for (const auto& p : detail::prob_points(series, fit.window, recovery))
        out << p.period.str() << '\t' << detail::format_double(p.debt_ratio) << '\t'
            << detail::format_double(p.p) << '\t'
            << detail::format_double(detail::sigmoid_prob(p.debt_ratio, fit.params.r_c,
                                                          fit.params.eta, recovery.rho))
            << '\n';
    return out.str();
}

/// (t, R_t, R_t/R_c) trajectory samples.
inline std::string plot_trajectory(const Trajectory& traj, double r_c) {
    std::ostringstream out;
    out << "time\tdebt_ratio\tnormalized\n";
    for (const auto& [t, r] : traj.points)
        out << detail::format_double(t) << '\t' << detail::format_double(r) << '\t'
            << detail::format_double(r / r_c) << '\n';
    return out.str();
}

/// Clearing-price sigmoid family: one column per eta value, R swept over
/// [0, 2 R_c].
inline std::string plot_price_family(const ModelParams& base, double risk_free_rate,
                                     const BondTerms& terms,
                                     const std::vector<double>& etas, int steps = 200) {
    std::ostringstream out;
    out << "debt_ratio";
    for (double eta : etas) out << "\tprice_eta_" << detail::format_double(eta);
    out << '\n';
    for (int k = 0; k <= steps; ++k) {
        double r = 2.0 * base.r_c * k / steps;
        out << detail::format_double(r);
        for (double eta : etas)
            out << '\t'
                << detail::format_double(model_bond_price(r, ModelParams(base.r_c, eta),
                                                          risk_free_rate, terms));
        out << '\n';
    }
    return out.str();
}

}  // namespace sovdebt
