#include "tsecon/pipeline.hpp"

#include "tsecon/acf.hpp"
#include "tsecon/arima.hpp"
#include "tsecon/csv.hpp"
#include "tsecon/dcc.hpp"
#include "tsecon/descriptive.hpp"
#include "tsecon/errors.hpp"
#include "tsecon/hypothesis.hpp"
#include "tsecon/ks.hpp"
#include "tsecon/serialize.hpp"

#include "json_builders.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <utility>

namespace tsecon {

namespace {

using detail::ordered_json;

// Rethrow with a stage label so the CLI can report where a run failed.
template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const DataError& e) {
        throw DataError(std::string("[") + name + "] " + e.what());
    } catch (const EstimationError& e) {
        throw EstimationError(std::string("[") + name + "] " + e.what());
    }
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out.precision(17);
    return out;
}

void write_dated_csv(const std::filesystem::path& path, const std::vector<Date>& dates,
                     const std::vector<double>& values, const std::string& header) {
    auto out = open_csv(path);
    out << "date," << header << "\n";
    for (std::size_t t = 0; t < values.size(); ++t)
        out << dates[t].to_string() << "," << values[t] << "\n";
}

void write_acf_csv(const std::filesystem::path& path, const AcfResult& r) {
    auto out = open_csv(path);
    out << "lag,value,conf_bound\n";
    for (std::size_t i = 0; i < r.values.size(); ++i)
        out << r.lags[i] << "," << r.values[i] << "," << r.conf_bound << "\n";
}

void write_forecast_csv(const std::filesystem::path& path, const ForecastResult& f) {
    auto out = open_csv(path);
    out << "step,point,lower,upper\n";
    for (int k = 0; k < f.horizon; ++k)
        out << (k + 1) << "," << f.point[static_cast<std::size_t>(k)] << ","
            << f.lower[static_cast<std::size_t>(k)] << ","
            << f.upper[static_cast<std::size_t>(k)] << "\n";
}

void write_variance_forecast_csv(const std::filesystem::path& path, const VarianceForecast& f) {
    auto out = open_csv(path);
    out << "step,variance,band_lower,band_upper\n";
    for (std::size_t k = 0; k < f.variance.size(); ++k)
        out << (k + 1) << "," << f.variance[k] << "," << f.band_lower[k] << ","
            << f.band_upper[k] << "\n";
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
    auto out = open_csv(path);
    out << "bin_center,count,normal_overlay\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        out << h.bin_centers[b] << "," << h.counts[b] << "," << h.normal_overlay[b] << "\n";
}

void write_qq_csv(const std::filesystem::path& path, const QqData& q) {
    auto out = open_csv(path);
    out << "theoretical,sample\n";
    for (std::size_t i = 0; i < q.sample.size(); ++i)
        out << q.theoretical[i] << "," << q.sample[i] << "\n";
}

ordered_json config_json(const PipelineConfig& c) {
    ordered_json j;
    ordered_json inputs = ordered_json::array();
    for (const auto& p : c.inputs) inputs.push_back(p.string());
    j["inputs"] = inputs;
    j["date_column"] = c.date_column;
    j["value_column"] = c.value_column;
    j["arima"] = {{"p_max", c.arima_p_max}, {"q_max", c.arima_q_max}, {"d_set", c.arima_d_set}};
    ordered_json fams = ordered_json::array();
    for (auto f : c.garch_families) fams.push_back(to_string(f));
    j["garch"] = {{"families", fams},
                  {"innovation", to_string(c.innovation)},
                  {"p", c.garch_p},
                  {"q", c.garch_q},
                  {"arch_lag_search", c.arch_lag_search}};
    j["horizon_univariate"] = c.horizon_univariate;
    j["horizon_dcc"] = c.horizon_dcc;
    j["output_dir"] = c.output_dir.string();
    j["seed"] = c.seed;
    return j;
}

} // namespace

void PipelineConfig::validate() const {
    if (inputs.empty()) throw ConfigError("config: at least one input series is required");
    if (horizon_univariate < 1 || horizon_dcc < 1)
        throw ConfigError("config: forecast horizons must be >= 1");
    if (arima_p_max < 0 || arima_p_max > 5 || arima_q_max < 0 || arima_q_max > 5)
        throw ConfigError("config: ARIMA grid bounds must lie in [0, 5]");
    if (arima_d_set.empty()) throw ConfigError("config: ARIMA d set must not be empty");
    for (int d : arima_d_set)
        if (d < 0 || d > 2) throw ConfigError("config: ARIMA d must lie in [0, 2]");
    if (garch_families.empty()) throw ConfigError("config: GARCH family list must not be empty");
    if (garch_p < 1 || garch_p > 2 || garch_q < 1 || garch_q > 2)
        throw ConfigError("config: GARCH orders must lie in [1, 2]");
}

std::filesystem::path run_pipeline(const PipelineConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.output_dir);
    const auto& dir = config.output_dir;

    ordered_json report;
    report["config"] = config_json(config);

    // -------------------------------------------------------------- data --
    struct LoadedSeries {
        ObservationSeries levels;
        ReturnSeries returns;
    };
    std::vector<LoadedSeries> series = stage("data", [&] {
        std::vector<LoadedSeries> out;
        for (const auto& path : config.inputs) {
            auto levels = load_csv(path, config.date_column, config.value_column);
            auto returns = log_returns(levels);
            out.push_back(LoadedSeries{std::move(levels), std::move(returns)});
        }
        return out;
    });

    stage("data", [&] {
        ordered_json summary = ordered_json::array();
        for (const auto& s : series) {
            write_series_csv(dir / ("returns_" + s.returns.source_label + ".csv"), s.returns);
            ordered_json entry;
            entry["label"] = s.levels.label;
            entry["n_levels"] = s.levels.size();
            entry["first_date"] = s.levels.dates.front().to_string();
            entry["last_date"] = s.levels.dates.back().to_string();
            entry["returns"] = detail::json_of(descriptive_stats(s.returns.values));
            summary.push_back(entry);
        }
        report["data_summary"] = summary;

        const auto& primary = series.front().returns;
        write_histogram_csv(dir / "histogram_returns.csv", histogram_data(primary.values, 30));
        write_qq_csv(dir / "qq_returns.csv", qq_data(primary.values, Reference::normal()));
        return 0;
    });

    const ReturnSeries& returns = series.front().returns;

    // ------------------------------------------------------------- tests --
    stage("tests", [&] {
        ordered_json tests;
        tests["adf"] = detail::json_of(adf_test(returns.values, -1, AdfTrend::constant));
        tests["kpss"] = detail::json_of(kpss_test(returns.values));
        tests["ljung_box"] =
            detail::json_of(ljung_box(returns.values, default_ljung_box_lags(returns.size())));
        report["tests"] = tests;

        write_acf_csv(dir / "acf_returns.csv", acf(returns.values, 20));
        write_acf_csv(dir / "pacf_returns.csv", pacf(returns.values, 20));
        return 0;
    });

    // ------------------------------------------------------------- arima --
    ArimaFit arima_fit = stage("arima", [&] {
        auto table = select_arima(returns, config.arima_p_max, config.arima_d_set,
                                  config.arima_q_max);
        auto fit = fit_arima(returns, table.best_by_bic);

        ordered_json ja;
        ja["selection"] = detail::json_of(table);
        ja["fit"] = detail::json_of(fit);

        const int max_lag = fit.spec.p + fit.spec.q + 10;
        const auto diag = arima_diagnostics(fit, max_lag);
        ordered_json lb = ordered_json::array();
        for (std::size_t i = 0; i < diag.lb_lags.size(); ++i)
            lb.push_back({{"lag", diag.lb_lags[i]}, {"p_value", diag.lb_pvalues[i]}});
        ja["diagnostics"] = {{"ljung_box_pvalues", lb}};
        report["arima"] = ja;

        write_dated_csv(dir / "arima_std_residuals.csv", fit.dates, diag.std_residuals,
                        "std_residual");
        write_acf_csv(dir / "arima_residual_acf.csv", diag.residual_acf);
        {
            auto out = open_csv(dir / "arima_lb_pvalues.csv");
            out << "lag,p_value\n";
            for (std::size_t i = 0; i < diag.lb_lags.size(); ++i)
                out << diag.lb_lags[i] << "," << diag.lb_pvalues[i] << "\n";
        }
        std::vector<double> squared(fit.residuals.size());
        for (std::size_t t = 0; t < squared.size(); ++t)
            squared[t] = fit.residuals[t] * fit.residuals[t];
        write_dated_csv(dir / "arima_squared_residuals.csv", fit.dates, squared,
                        "squared_residual");
        write_acf_csv(dir / "squared_residual_acf.csv", acf(squared, 20));
        write_acf_csv(dir / "squared_residual_pacf.csv", pacf(squared, 20));
        return fit;
    });

    const std::vector<double>& resid = arima_fit.residuals;
    const long n_resid = static_cast<long>(resid.size());

    // ------------------------------------------------------------- garch --
    struct NamedFit {
        std::string name;
        GarchFit fit;
    };
    std::vector<NamedFit> garch_fits;
    std::size_t selected_garch_idx = 0;
    stage("garch", [&] {
        ordered_json jg;
        jg["arch_lm"] = detail::json_of(arch_lm_test(resid, 5));

        if (config.arch_lag_search) {
            ordered_json rows = ordered_json::array();
            for (int q = 1; q <= 4; ++q) {
                GarchSpec spec{GarchFamily::arch, 0, q, Innovation::normal};
                try {
                    const auto fit = fit_garch(resid, spec);
                    const auto crit = garch_criteria(fit, n_resid);
                    rows.push_back({{"spec", spec.name()},
                                    {"loglik", fit.loglik},
                                    {"aic", crit.aic},
                                    {"bic", crit.bic}});
                } catch (const std::exception& e) {
                    rows.push_back({{"spec", spec.name()}, {"error", e.what()}});
                }
            }
            jg["arch_search"] = rows;
        }

        // Comparison set: each family with Gaussian innovations plus the
        // configured innovation when it differs.
        for (auto family : config.garch_families) {
            std::vector<Innovation> innovations = {Innovation::normal};
            if (config.innovation != Innovation::normal)
                innovations.push_back(config.innovation);
            for (auto innovation : innovations) {
                GarchSpec spec{family, family == GarchFamily::arch ? 0 : config.garch_p,
                               config.garch_q, innovation};
                garch_fits.push_back(NamedFit{spec.name(), fit_garch(resid, spec)});
            }
        }

        ordered_json fits;
        ordered_json comparison = ordered_json::array();
        double best_aic = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < garch_fits.size(); ++i) {
            const auto& nf = garch_fits[i];
            fits[nf.name] = detail::json_of(nf.fit, n_resid);
            const auto crit = garch_criteria(nf.fit, n_resid);
            comparison.push_back({{"spec", nf.name},
                                  {"loglik", nf.fit.loglik},
                                  {"aic_per_obs", crit.aic_per_obs},
                                  {"bic_per_obs", crit.bic_per_obs}});
            if (crit.aic < best_aic) {
                best_aic = crit.aic;
                selected_garch_idx = i;
            }
        }
        const NamedFit* best = &garch_fits[selected_garch_idx];
        jg["fits"] = fits;
        jg["comparison"] = comparison;
        jg["selected"] = best->name;

        const auto diag = garch_diagnostics(best->fit, 20);
        jg["selected_diagnostics"] = {
            {"ljung_box_z", detail::json_of(diag.lb_resid)},
            {"ljung_box_z2", detail::json_of(diag.lb_resid2)},
            {"ks", {{"distance", diag.ks.distance}, {"p_value", diag.ks.p_value}}}};
        report["garch"] = jg;

        write_dated_csv(dir / "garch_variance.csv", arima_fit.dates, best->fit.cond_variance,
                        "sigma2");
        write_acf_csv(dir / "garch_resid_acf.csv", diag.resid_acf);
        write_acf_csv(dir / "garch_resid2_acf.csv", diag.resid2_acf);
        write_qq_csv(dir / "garch_qq.csv", diag.qq);
        return 0;
    });

    const NamedFit* selected_garch = &garch_fits[selected_garch_idx];

    // ------------------------------------------------------------ mgarch --
    if (series.size() >= 2) {
        stage("mgarch", [&] {
            std::vector<ReturnSeries> residual_series;
            for (const auto& s : series) {
                auto fit = fit_arima(s.returns, arima_fit.spec);
                residual_series.push_back(ReturnSeries{fit.dates, fit.residuals,
                                                       s.returns.source_label});
            }
            const auto panel = MultiSeries::align(residual_series);
            const auto ccc = fit_ccc(panel);
            const auto dcc = fit_dcc(panel);

            ordered_json jm;
            jm["ccc"] = {{"correlation", detail::json_of_matrix(ccc.correlation)},
                         {"loglik", ccc.loglik},
                         {"warnings", ccc.warnings}};
            jm["dcc"] = detail::json_of(dcc);

            const auto diag = dcc_diagnostics(dcc, 20);
            ordered_json jd = ordered_json::array();
            for (std::size_t j = 0; j < diag.series.size(); ++j) {
                jd.push_back({{"label", dcc.labels[j]},
                              {"ljung_box_squared_before", detail::json_of(diag.series[j].lb_before)},
                              {"ljung_box_squared_after", detail::json_of(diag.series[j].lb_after)}});
            }
            jm["diagnostics"] = jd;
            report["mgarch"] = jm;

            for (int j = 0; j < panel.dim(); ++j) {
                write_dated_csv(dir / ("dcc_volatility_" + dcc.labels[static_cast<std::size_t>(j)] +
                                       ".csv"),
                                dcc.dates,
                                dcc.univariate[static_cast<std::size_t>(j)].cond_variance,
                                "sigma2");
            }
            for (int i = 0; i < panel.dim(); ++i)
                for (int j = i + 1; j < panel.dim(); ++j)
                    write_dated_csv(dir / ("dcc_correlation_" +
                                           dcc.labels[static_cast<std::size_t>(i)] + "_" +
                                           dcc.labels[static_cast<std::size_t>(j)] + ".csv"),
                                    dcc.dates, dcc_correlations(dcc, i, j), "rho");

            const auto fc = dcc_forecast(dcc, config.horizon_dcc);
            auto out = open_csv(dir / "dcc_forecast.csv");
            out << "step,series_or_pair,value\n";
            for (int k = 0; k < config.horizon_dcc; ++k) {
                for (int j = 0; j < panel.dim(); ++j)
                    out << (k + 1) << ",sigma2_" << dcc.labels[static_cast<std::size_t>(j)] << ","
                        << fc.variances(k, j) << "\n";
                for (int i = 0; i < panel.dim(); ++i)
                    for (int j = i + 1; j < panel.dim(); ++j)
                        out << (k + 1) << ",rho_" << dcc.labels[static_cast<std::size_t>(i)] << "_"
                            << dcc.labels[static_cast<std::size_t>(j)] << ","
                            << fc.P[static_cast<std::size_t>(k)](i, j) << "\n";
            }
            return 0;
        });
    }

    // --------------------------------------------------------- forecasts --
    stage("forecasts", [&] {
        ordered_json jf;
        const auto arima_fc = forecast_arima(arima_fit, config.horizon_univariate);
        write_forecast_csv(dir / "forecast_returns.csv", arima_fc);
        jf["arima"] = {{"horizon", arima_fc.horizon},
                       {"band_rule", arima_fc.band_rule},
                       {"point", arima_fc.point},
                       {"lower", arima_fc.lower},
                       {"upper", arima_fc.upper}};

        const auto var_fc = forecast_variance(selected_garch->fit, config.horizon_univariate);
        write_variance_forecast_csv(dir / "forecast_variance.csv", var_fc);
        jf["garch_variance"] = {{"horizon", config.horizon_univariate},
                                {"model", selected_garch->name},
                                {"variance", var_fc.variance}};
        report["forecasts"] = jf;
        return 0;
    });

    report["versions"] = {{"tsecon", "0.1.0"}, {"report_schema", 1}};

    const auto report_path = dir / "report.json";
    std::ofstream out(report_path);
    if (!out) throw DataError("[report] cannot write " + report_path.string());
    out << report.dump(2) << "\n";
    return report_path;
}

} // namespace tsecon
