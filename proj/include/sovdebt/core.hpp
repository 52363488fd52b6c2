// Core value types and error classes shared by all sovdebt modules.
#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sovdebt {

/// Raised for malformed or inconsistent input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for misuse of an interface (bad arguments, missing files).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a computation leaves the model's domain (e.g. an implied
/// probability above one) or an optimizer fails to converge.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Frequency { annual, quarterly };

inline std::string to_string(Frequency f) {
    return f == Frequency::annual ? "annual" : "quarterly";
}

/// Calendar period: a year, optionally with a quarter (1-4).
/// quarter == 0 means an annual observation.
struct Period {
    int year = 0;
    int quarter = 0;

    auto operator<=>(const Period&) const = default;

    /// Time coordinate in fractional years. End-of-year values are dated at
    /// the following January; end-of-quarter values at the quarter boundary.
    double time() const {
        return quarter == 0 ? year + 1.0 : year + quarter * 0.25;
    }

    Period next(Frequency f) const {
        if (f == Frequency::annual) return {year + 1, 0};
        return quarter == 4 ? Period{year + 1, 1} : Period{year, quarter + 1};
    }

    std::string str() const {
        std::string s = std::to_string(year);
        if (quarter != 0) {
            s += 'Q';
            s += std::to_string(quarter);
        }
        return s;
    }

    static Period parse(std::string_view text) {
        auto q = text.find_first_of("Qq");
        Period p;
        auto read_int = [&](std::string_view sv, int& out) {
            auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
            if (ec != std::errc{} || ptr != sv.data() + sv.size())
                throw DataError("bad period '" + std::string(text) + "'");
        };
        if (q == std::string_view::npos) {
            read_int(text, p.year);
        } else {
            read_int(text.substr(0, q), p.year);
            read_int(text.substr(q + 1), p.quarter);
            if (p.quarter < 1 || p.quarter > 4)
                throw DataError("bad quarter in period '" + std::string(text) + "'");
        }
        return p;
    }
};

/// One dated macro observation. Rates and ratios are plain fractions
/// (0.05 = 5%); unit conversion happens at parse time.
struct ObservationRow {
    Period period;
    double debt_ratio = 0.0;
    double long_rate = 0.0;
    double risk_free_rate = 0.0;
    std::optional<double> budget_ratio;
    std::optional<double> gdp_growth;
    std::optional<double> raw_debt;
    std::optional<double> raw_gdp;

    bool operator==(const ObservationRow&) const = default;
};

struct CountrySeries {
    std::string country;
    Frequency frequency = Frequency::annual;
    std::vector<ObservationRow> rows;

    bool operator==(const CountrySeries&) const = default;

    const ObservationRow* find(Period p) const {
        for (const auto& r : rows)
            if (r.period == p) return &r;
        return nullptr;
    }
};

enum class Severity { warning, error };

struct ValidationIssue {
    Severity severity = Severity::warning;
    Period period;
    std::string message;
};

/// Recovery rate rho: the share of face value repaid in default.
struct RecoveryAssumption {
    double rho;

    explicit RecoveryAssumption(double rho_) : rho(rho_) {
        if (rho < 0.0 || rho >= 1.0)
            throw UsageError("recovery rate must be in [0,1)");
    }
};

/// The calibrated model pair: critical debt ratio R_c and heterogeneity eta.
struct ModelParams {
    double r_c = 0.0;
    double eta = 0.0;
    std::optional<double> r_c_stderr;
    std::optional<double> eta_stderr;

    ModelParams() = default;
    ModelParams(double r_c_, double eta_) : r_c(r_c_), eta(eta_) {
        if (r_c <= 0.0) throw UsageError("r_c must be positive");
        if (eta <= 0.0) throw UsageError("eta must be positive");
    }
};

struct BondTerms {
    double face_value;
    double issue_rate;

    BondTerms(double face, double rate) : face_value(face), issue_rate(rate) {
        if (face_value <= 0.0) throw UsageError("face value must be positive");
        if (issue_rate <= -1.0) throw UsageError("issue rate must exceed -1");
    }
};

/// A probability constrained to [0,1]; out-of-range construction throws,
/// it is never clamped.
class DefaultProbability {
public:
    explicit DefaultProbability(double p) : p_(p) {
        if (!(p >= 0.0 && p <= 1.0))
            throw NumericError("probability outside [0,1]");
    }
    double value() const { return p_; }

private:
    double p_;
};

namespace detail {

inline std::string trim(std::string_view sv) {
    size_t a = sv.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return {};
    size_t b = sv.find_last_not_of(" \t\r\n");
    return std::string(sv.substr(a, b - a + 1));
}

inline std::vector<std::string> split(std::string_view sv, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = sv.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(sv.substr(start));
            break;
        }
        out.emplace_back(sv.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline double parse_double(std::string_view sv, const std::string& where) {
    std::string t = trim(sv);
    double v{};
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw DataError("non-numeric value '" + t + "' at " + where);
    return v;
}

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace detail

}  // namespace sovdebt
