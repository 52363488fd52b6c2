// sovdebt command-line tool: validate / fit / project / scenario / verify /
// report over the bundled (or user-supplied) country series.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sovdebt/calibrate.hpp"
#include "sovdebt/ingest.hpp"
#include "sovdebt/microstructure.hpp"
#include "sovdebt/project.hpp"
#include "sovdebt/report.hpp"
#include "sovdebt/risk_map.hpp"
#include "sovdebt/scenario.hpp"

namespace fs = std::filesystem;
using namespace sovdebt;

namespace {

constexpr const char* kVersion = "sovdebt 1.0.0";

struct CountryDefaults {
    FitWindow fit_window;
    FitWindow trend_window;
    int trend_order;
};

CountryDefaults defaults_for(const std::string& country) {
    auto w = [](int a, int b) { return FitWindow({a, 0}, {b, 0}); };
    if (country == "greece") return {w(2001, 2011), w(2001, 2011), 3};
    if (country == "portugal") return {w(2007, 2011), w(2003, 2011), 3};
    return {w(2007, 2011), w(2008, 2011), 1};
}

FitWindow parse_window(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("window must be start:end, e.g. 2007:2011");
    return FitWindow(Period::parse(detail::trim(text.substr(0, colon))),
                     Period::parse(detail::trim(text.substr(colon + 1))));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    out << content;
}

std::string resolve_data_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("SOVDEBT_DATA_DIR")) return env;
    return "data";
}

CountrySeries load_country(const std::string& data_dir, const std::string& country) {
    std::string base = data_dir + "/" + country;
    FormatConfig cfg = FormatConfig::load(base + ".cfg");
    CountrySeries series = parse_series(base + ".csv", cfg);
    auto issues = validate_series(series);
    if (has_errors(issues)) {
        std::string msg = "invalid data for " + country + ":";
        for (const auto& i : issues)
            if (i.severity == Severity::error)
                msg += "\n  " + i.period.str() + ": " + i.message;
        throw DataError(msg);
    }
    return series;
}

int cmd_validate(const std::string& data_path, const std::string& config_path) {
    FormatConfig cfg;
    CountrySeries series;
    try {
        cfg = FormatConfig::load(config_path);
        series = parse_series(data_path, cfg);
    } catch (const DataError& e) {
        // structural problems are usage/format errors, not data-value errors
        std::cerr << "format error: " << e.what() << "\n";
        return 2;
    }
    auto issues = validate_series(series);
    for (const auto& i : issues)
        std::cout << i.period.str() << ": "
                  << (i.severity == Severity::error ? "error" : "warning") << ": "
                  << i.message << "\n";
    return has_errors(issues) ? 1 : 0;
}

std::vector<double> parse_rho_band(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("rho band must be lo:hi, e.g. 0.2:0.8");
    double lo = detail::parse_double(text.substr(0, colon), "--rho-band");
    double hi = detail::parse_double(text.substr(colon + 1), "--rho-band");
    if (!(lo < hi)) throw UsageError("rho band must have lo < hi");
    return {lo, 0.5, hi};
}

int cmd_fit(const std::string& data_dir, const std::string& country,
            const std::string& window_text, const std::string& method, double rho,
            const std::string& out_dir) {
    CountrySeries series = load_country(data_dir, country);
    FitWindow window =
        window_text.empty() ? defaults_for(country).fit_window : parse_window(window_text);
    RecoveryAssumption recovery(rho);

    ReportDocument doc;
    doc.add("country", country);
    doc.add("rho", rho);
    if (method == "linear" || method == "both") {
        FitResult lin = fit_linear(series, window);
        add_fit(doc, "fit.linear", lin);
        write_file(fs::path(out_dir) / (country + "_linear_points.tsv"),
                   plot_linear_fit(series, lin));
    }
    if (method == "sigmoid" || method == "both") {
        FitResult sig = fit_sigmoid(series, window, recovery);
        add_fit(doc, "fit.sigmoid", sig);
        write_file(fs::path(out_dir) / (country + "_sigmoid_points.tsv"),
                   plot_sigmoid_fit(series, sig, recovery));
    }
    std::cout << doc.str();
    return 0;
}

int cmd_project(const std::string& data_dir, const std::string& country,
                const std::string& window_text, int order, double horizon,
                const std::string& band_text, const std::string& out_dir) {
    CountrySeries series = load_country(data_dir, country);
    CountryDefaults def = defaults_for(country);
    FitWindow trend_window =
        window_text.empty() ? def.trend_window : parse_window(window_text);
    if (order == 0) order = def.trend_order;
    std::vector<double> rhos =
        band_text.empty() ? std::vector<double>{0.2, 0.5, 0.8} : parse_rho_band(band_text);

    FitResult sig = fit_sigmoid(series, def.fit_window, RecoveryAssumption(0.5));
    TrendModel trend = fit_trend(series, trend_window, order);
    Trajectory traj = trend_trajectory(trend, horizon);

    ReportDocument doc;
    doc.add("country", country);
    doc.add("r_c", sig.params.r_c);
    doc.add("eta", sig.params.eta);
    doc.add("trend.window", trend_window.start.str() + ":" + trend_window.end.str());
    doc.add("trend.order", detail::format_double((double)order));
    doc.add("horizon_years", horizon);
    for (double rho : rhos) {
        RecoveryAssumption recovery(rho);
        double threshold = certain_default_ratio(sig.params, recovery);
        auto event = default_date(traj, threshold, recovery);
        add_event(doc, "default.rho_" + detail::format_double(rho), event);
    }
    write_file(fs::path(out_dir) / (country + "_trajectory.tsv"),
               plot_trajectory(traj, sig.params.r_c));
    std::cout << doc.str();
    return 0;
}

int cmd_scenario(const std::string& data_dir, const std::string& country,
                 const std::string& scenario_path, double rho) {
    std::string path = scenario_path.empty()
                           ? data_dir + "/scenarios/" + country + "_targets.scn"
                           : scenario_path;
    ScenarioSpec spec = ScenarioSpec::load(path);
    std::string c = country.empty() ? spec.country : country;
    CountrySeries series = load_country(data_dir, c);
    RecoveryAssumption recovery(rho);
    FitResult sig = fit_sigmoid(series, defaults_for(c).fit_window, recovery);
    ScenarioOutcome outcome = run_scenario(series, sig.params, recovery, spec);

    ReportDocument doc;
    doc.add("country", c);
    doc.add("rho", rho);
    add_scenario(doc, "scenario", spec, outcome);
    add_event(doc, "scenario.event", outcome.event);
    std::cout << doc.str();
    return 0;
}

int cmd_verify(double sigma, double rc_over_eta) {
    bool all_pass = true;
    auto check = [&](const std::string& name, bool ok, bool expected_fail = false) {
        if (expected_fail) {
            std::cout << (ok ? "FAIL " : "PASS ") << name << " (expected to exceed bound)\n";
            if (ok) all_pass = false;
            return;
        }
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) all_pass = false;
    };

    if (sigma < 1e-9) {
        // step-function limit
        LenderPopulation pop(1000.0, 1.5, sigma);
        bool ok = demand_intercept_exact(1.0, pop) == 1000.0 &&
                  demand_intercept_exact(2.0, pop) == 0.0 &&
                  demand_intercept_logistic(1.0, pop) == 1000.0 &&
                  demand_intercept_logistic(2.0, pop) == 0.0;
        check("step-limit demand at sigma=0", ok);
        std::cout << (all_pass ? "all checks passed\n" : "checks failed\n");
        return all_pass ? 0 : 1;
    }

    LenderPopulation pop(1000.0, 1.5, sigma);
    double err = approximation_error(pop, 1.5 - 7.0 * sigma, 1.5 + 7.0 * sigma);
    check("erf-logistic sup error < 0.025", err < 0.025);

    LenderPopulation pop2(1000.0, 3.0, 2.0 * sigma);
    double err2 = approximation_error(pop2, 3.0 - 14.0 * sigma, 3.0 + 14.0 * sigma);
    check("approximation error scale invariance", std::abs(err - err2) < 1e-12);

    // clearing curve vs the closed-form price
    BondTerms terms(100.0, 0.05);
    double r = 0.03;
    SupplyDemandParams sd = calibrated_supply_demand(pop, terms, r);
    bool price_ok = true;
    ModelParams params(pop.mean_threshold, pop.eta());
    for (int k = 0; k <= 200; ++k) {
        double ratio = 2.0 * pop.mean_threshold * k / 200.0;
        double diff = std::abs(clearing_price(ratio, pop, sd).price -
                               model_bond_price(ratio, params, r, terms));
        if (diff > 1e-9) price_ok = false;
    }
    check("clearing price matches closed form to 1e-9", price_ok);

    // consistency chain: price -> implied probability vs model probability,
    // gap bounded by the e^{-R_c/eta} correction
    double eta = params.r_c / rc_over_eta;
    ModelParams chain(params.r_c, eta);
    // tolerance: the e^{-R_c/eta} correction at the smallest supported ratio
    double bound = std::exp(-5.0);
    RecoveryAssumption rho0(0.0);
    bool chain_ok = true;
    for (double ratio : {0.5 * chain.r_c, chain.r_c, 1.5 * chain.r_c}) {
        double price = model_bond_price(ratio, chain, r, terms);
        double implied =
            prob_from_bond(price, terms, r, rho0).value();
        double model = model_default_prob(ratio, chain, rho0).value();
        if (std::abs(implied - model) > bound) chain_ok = false;
    }
    check("price-implied probability within e^{-R_c/eta} of the sigmoid", chain_ok,
          rc_over_eta < 5.0);

    std::cout << (all_pass ? "all checks passed\n" : "checks failed\n");
    return all_pass ? 0 : 1;
}

int cmd_report(const std::string& data_dir, const std::string& country, double rho,
               const std::string& out_dir) {
    CountrySeries series = load_country(data_dir, country);
    CountryDefaults def = defaults_for(country);
    RecoveryAssumption recovery(rho);

    ReportDocument doc;
    doc.add("tool", kVersion);
    doc.add("country", country);
    doc.add("rho", rho);
    doc.add("input.data", data_dir + "/" + country + ".csv");
    doc.add("input.data.digest", content_digest(read_file(data_dir + "/" + country + ".csv")));
    doc.add("input.config.digest",
            content_digest(read_file(data_dir + "/" + country + ".cfg")));
    doc.add("fit.window", def.fit_window.start.str() + ":" + def.fit_window.end.str());

    FitResult lin = fit_linear(series, def.fit_window);
    FitResult sig = fit_sigmoid(series, def.fit_window, recovery);
    add_fit(doc, "fit.linear", lin);
    add_fit(doc, "fit.sigmoid", sig);
    add_consistency(doc, "consistency", consistency_check(series, lin, 0.08));

    TrendModel trend = fit_trend(series, def.trend_window, def.trend_order);
    Trajectory traj = trend_trajectory(trend, 15.0);
    for (double band_rho : {0.2, 0.5, 0.8}) {
        RecoveryAssumption ra(band_rho);
        auto event = default_date(traj, certain_default_ratio(sig.params, ra), ra);
        add_event(doc, "default.rho_" + detail::format_double(band_rho), event);
    }

    std::string scn_path = data_dir + "/scenarios/" + country + "_targets.scn";
    if (fs::exists(scn_path)) {
        ScenarioSpec spec = ScenarioSpec::load(scn_path);
        doc.add("input.scenario.digest", content_digest(read_file(scn_path)));
        add_scenario(doc, "scenario", spec, run_scenario(series, sig.params, recovery, spec));
    }

    fs::path dir(out_dir);
    write_file(dir / (country + "_rates.tsv"), plot_rate_series(series));
    write_file(dir / (country + "_debt.tsv"), plot_debt_series(series));
    write_file(dir / (country + "_linear_points.tsv"), plot_linear_fit(series, lin));
    write_file(dir / (country + "_sigmoid_points.tsv"),
               plot_sigmoid_fit(series, sig, recovery));
    write_file(dir / (country + "_trajectory.tsv"), plot_trajectory(traj, sig.params.r_c));
    write_file(dir / (country + "_price_family.tsv"),
               plot_price_family(sig.params, 0.03, BondTerms(100.0, 0.05),
                                 {0.05, 0.1, 0.18, 0.3}));
    std::cout << doc.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-parameter sovereign default model: calibration and projection"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string data_dir_flag, country, window_text, scenario_path;
    std::string method = "both", band_text, out_dir = "out";
    double rho = 0.5, horizon = 15.0, sigma = 0.35, rc_over_eta = 10.0;
    int order = 0;
    std::string validate_data, validate_config;

    auto* validate = app.add_subcommand("validate", "check a data file against its config");
    validate->add_option("data", validate_data, "delimited data file")->required();
    validate->add_option("config", validate_config, "key=value format config")->required();

    auto add_common = [&](CLI::App* sub, bool need_country) {
        sub->add_option("--data-dir", data_dir_flag,
                        "data directory (default $SOVDEBT_DATA_DIR or ./data)");
        auto* opt = sub->add_option("--country", country, "country identifier");
        if (need_country) opt->required();
    };

    auto* fit = app.add_subcommand("fit", "calibrate (R_c, eta)");
    add_common(fit, true);
    fit->add_option("--window", window_text, "fit window start:end");
    fit->add_option("--method", method, "linear|sigmoid|both")
        ->check(CLI::IsMember({"linear", "sigmoid", "both"}));
    fit->add_option("--rho", rho, "recovery rate");
    fit->add_option("--out", out_dir, "plot-data output directory");

    auto* project = app.add_subcommand("project", "trend projection and default dates");
    add_common(project, true);
    project->add_option("--window", window_text, "trend window start:end");
    project->add_option("--order", order, "trend polynomial order (default per country)");
    project->add_option("--horizon", horizon, "projection horizon in years");
    project->add_option("--rho-band", band_text, "recovery band lo:hi");
    project->add_option("--out", out_dir, "plot-data output directory");

    auto* scenario = app.add_subcommand("scenario", "evaluate a policy path");
    add_common(scenario, false);
    scenario->add_option("--scenario", scenario_path, "scenario file");
    scenario->add_option("--rho", rho, "recovery rate");

    auto* verify = app.add_subcommand("verify", "microstructure identity checks");
    verify->add_option("--sigma", sigma, "lender threshold spread");
    verify->add_option("--rc-over-eta", rc_over_eta, "R_c/eta for the consistency chain");

    auto* report = app.add_subcommand("report", "full country report and plot data");
    add_common(report, true);
    report->add_option("--rho", rho, "recovery rate");
    report->add_option("--out", out_dir, "plot-data output directory");

    try {
        app.parse(argc, argv);
        std::string data_dir = resolve_data_dir(data_dir_flag);
        if (app.got_subcommand(validate)) return cmd_validate(validate_data, validate_config);
        if (app.got_subcommand(fit))
            return cmd_fit(data_dir, country, window_text, method, rho, out_dir);
        if (app.got_subcommand(project))
            return cmd_project(data_dir, country, window_text, order, horizon, band_text,
                               out_dir);
        if (app.got_subcommand(scenario))
            return cmd_scenario(data_dir, country, scenario_path, rho);
        if (app.got_subcommand(verify)) return cmd_verify(sigma, rc_over_eta);
        if (app.got_subcommand(report)) return cmd_report(data_dir, country, rho, out_dir);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}
