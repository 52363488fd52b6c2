// Parsing, validation and alignment of country macro time series from
// delimited text files.
#pragma once

#include <fstream>
#include <map>
#include <sstream>

#include "sovdebt/core.hpp"

namespace sovdebt {

enum class Unit { fraction, percent };

/// Column map for one input file: which header names carry which fields and
/// what unit each column uses. Loaded from a key=value sidecar config.
struct FormatConfig {
    Frequency frequency = Frequency::annual;
    std::string country;
    // field -> header name; mandatory fields default to their own names
    std::map<std::string, std::string> columns = {
        {"period", "period"},         {"debt_ratio", "debt_ratio"},
        {"long_rate", "long_rate"},   {"risk_free_rate", "risk_free_rate"},
        {"budget_ratio", "budget_ratio"}, {"gdp_growth", "gdp_growth"},
        {"raw_debt", "raw_debt"},     {"raw_gdp", "raw_gdp"},
    };
    // field -> unit, default fraction
    std::map<std::string, Unit> units;

    Unit unit_of(const std::string& field) const {
        auto it = units.find(field);
        return it == units.end() ? Unit::fraction : it->second;
    }

    static FormatConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot open config '" + path + "'");
        FormatConfig cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string t = detail::trim(line);
            if (t.empty() || t[0] == '#') continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw DataError("config line " + std::to_string(lineno) + ": expected key=value");
            std::string key = detail::trim(t.substr(0, eq));
            std::string val = detail::trim(t.substr(eq + 1));
            if (key == "frequency") {
                if (val == "annual") cfg.frequency = Frequency::annual;
                else if (val == "quarterly") cfg.frequency = Frequency::quarterly;
                else throw DataError("unknown frequency '" + val + "'");
            } else if (key == "country") {
                cfg.country = val;
            } else if (key.starts_with("column.")) {
                cfg.columns[key.substr(7)] = val;
            } else if (key.starts_with("unit.")) {
                if (val == "percent") cfg.units[key.substr(5)] = Unit::percent;
                else if (val == "fraction") cfg.units[key.substr(5)] = Unit::fraction;
                else throw DataError("unknown unit '" + val + "'");
            } else {
                throw DataError("unknown config key '" + key + "'");
            }
        }
        return cfg;
    }
};

namespace detail {

inline char detect_delimiter(const std::string& header) {
    return header.find('\t') != std::string::npos ? '\t' : ',';
}

}  // namespace detail

namespace detail {

inline CountrySeries parse_series_stream(std::istream& in, const std::string& path,
                                         const FormatConfig& cfg) {
    std::string header;
    if (!std::getline(in, header)) throw DataError("empty file '" + path + "'");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    char sep = detail::detect_delimiter(header);
    auto names = detail::split(header, sep);
    for (auto& n : names) n = detail::trim(n);

    std::map<std::string, int> index;  // field -> column index
    for (const auto& [field, colname] : cfg.columns) {
        for (size_t k = 0; k < names.size(); ++k)
            if (names[k] == colname) index[field] = static_cast<int>(k);
    }
    for (const char* mandatory : {"period", "debt_ratio", "long_rate"})
        if (!index.count(mandatory))
            throw DataError("missing mandatory column '" + cfg.columns.at(mandatory) +
                            "' in '" + path + "'");

    CountrySeries series;
    series.country = cfg.country;
    series.frequency = cfg.frequency;

    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split(line, sep);
        auto cell = [&](const std::string& field) -> std::optional<std::string> {
            auto it = index.find(field);
            if (it == index.end() || it->second >= static_cast<int>(cells.size()))
                return std::nullopt;
            std::string v = detail::trim(cells[it->second]);
            if (v.empty()) return std::nullopt;
            return v;
        };
        auto where = [&](const std::string& field) {
            return path + ":" + std::to_string(lineno) + " column '" +
                   cfg.columns.at(field) + "'";
        };
        auto number = [&](const std::string& field) -> std::optional<double> {
            auto v = cell(field);
            if (!v) return std::nullopt;
            double x = detail::parse_double(*v, where(field));
            if (cfg.unit_of(field) == Unit::percent) x /= 100.0;
            return x;
        };

        ObservationRow row;
        auto ptext = cell("period");
        if (!ptext) throw DataError("missing period at " + path + ":" + std::to_string(lineno));
        row.period = Period::parse(*ptext);
        if ((cfg.frequency == Frequency::quarterly) != (row.period.quarter != 0))
            throw DataError("period '" + row.period.str() + "' does not match declared " +
                            to_string(cfg.frequency) + " frequency");
        auto dr = number("debt_ratio");
        auto lr = number("long_rate");
        if (!dr) throw DataError("missing debt_ratio at " + where("debt_ratio"));
        if (!lr) throw DataError("missing long_rate at " + where("long_rate"));
        row.debt_ratio = *dr;
        row.long_rate = *lr;
        row.risk_free_rate = number("risk_free_rate").value_or(0.0);
        row.budget_ratio = number("budget_ratio");
        row.gdp_growth = number("gdp_growth");
        row.raw_debt = number("raw_debt");
        row.raw_gdp = number("raw_gdp");

        if (!series.rows.empty()) {
            const Period& prev = series.rows.back().period;
            if (row.period == prev)
                throw DataError("duplicate period " + row.period.str() + " in '" + path + "'");
            if (row.period < prev)
                throw DataError("periods out of order at " + row.period.str() + " in '" +
                                path + "'");
        }
        series.rows.push_back(row);
    }
    return series;
}

}  // namespace detail

/// Parse a delimited file into a time-ordered CountrySeries. Values in
/// percent columns are divided by 100. Duplicate or out-of-order periods
/// are errors.
inline CountrySeries parse_series(const std::string& path, const FormatConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open data file '" + path + "'");
    return detail::parse_series_stream(in, path, cfg);
}

/// Pure validation: ObservationRow invariants plus the spread requirement
/// for calibration rows. Errors exclude a row downstream; warnings flag it
/// for exclusion from probability transforms only.
inline std::vector<ValidationIssue> validate_series(const CountrySeries& series) {
    std::vector<ValidationIssue> issues;
    for (const auto& row : series.rows) {
        auto err = [&](const std::string& m) {
            issues.push_back({Severity::error, row.period, m});
        };
        auto warn = [&](const std::string& m) {
            issues.push_back({Severity::warning, row.period, m});
        };
        if (!(row.debt_ratio > 0.0)) err("debt ratio must be positive");
        if (!(row.long_rate > -1.0)) err("long rate must exceed -1");
        if (!(row.risk_free_rate > -1.0)) err("risk-free rate must exceed -1");
        if (row.gdp_growth && !(*row.gdp_growth > -1.0)) err("GDP growth must exceed -1");
        if (row.raw_debt && row.raw_gdp &&
            std::abs(row.debt_ratio - *row.raw_debt / *row.raw_gdp) >= 1e-9)
            err("debt ratio inconsistent with raw debt/GDP");
        if (row.long_rate <= row.risk_free_rate) warn("spread non-positive");
    }
    return issues;
}

inline bool has_errors(const std::vector<ValidationIssue>& issues) {
    for (const auto& i : issues)
        if (i.severity == Severity::error) return true;
    return false;
}

/// Replace each row's risk-free rate with the reference country's long rate
/// for the same period. All other fields are untouched.
inline CountrySeries join_risk_free(const CountrySeries& series,
                                    const CountrySeries& reference) {
    CountrySeries out = series;
    std::string gaps;
    for (auto& row : out.rows) {
        const ObservationRow* ref = reference.find(row.period);
        if (!ref) {
            if (!gaps.empty()) gaps += ", ";
            gaps += row.period.str();
            continue;
        }
        row.risk_free_rate = ref->long_rate;
    }
    if (!gaps.empty()) throw DataError("no risk-free rate for " + gaps);
    return out;
}

/// Serialize with shortest round-trip number formatting, so that
/// parse(serialize(s)) == s exactly.
inline std::string serialize_series(const CountrySeries& series) {
    std::ostringstream out;
    out << "period,debt_ratio,long_rate,risk_free_rate,budget_ratio,gdp_growth,raw_debt,raw_gdp\n";
    auto opt = [](const std::optional<double>& v) {
        return v ? detail::format_double(*v) : std::string();
    };
    for (const auto& r : series.rows) {
        out << r.period.str() << ',' << detail::format_double(r.debt_ratio) << ','
            << detail::format_double(r.long_rate) << ','
            << detail::format_double(r.risk_free_rate) << ',' << opt(r.budget_ratio) << ','
            << opt(r.gdp_growth) << ',' << opt(r.raw_debt) << ',' << opt(r.raw_gdp) << '\n';
    }
    return out.str();
}

inline CountrySeries parse_series_text(const std::string& text, const FormatConfig& cfg) {
    std::istringstream in(text);
    return detail::parse_series_stream(in, "<memory>", cfg);
}

}  // namespace sovdebt
