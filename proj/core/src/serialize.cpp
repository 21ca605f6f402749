#include "tsecon/serialize.hpp"

#include "json_builders.hpp"

#include <cmath>

namespace tsecon {

namespace detail {

namespace {

// JSON has no NaN; emit null instead.
ordered_json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

} // namespace

ordered_json json_of_matrix(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

ordered_json json_of(const TestResult& r) {
    ordered_json j;
    j["test"] = r.test_name;
    j["null_hypothesis"] = r.null_hypothesis;
    j["statistic"] = num(r.statistic);
    j["p_value"] = num(r.p_value);
    j["lags"] = r.lags;
    j["reject_at_5pct"] = r.reject_at(0.05);
    if (r.p_censored) {
        j["p_censored"] = true;
        j["p_floor"] = r.p_floor;
        j["p_ceiling"] = r.p_ceiling;
    }
    return j;
}

ordered_json json_of(const DescriptiveStats& s) {
    ordered_json j;
    j["n"] = s.n;
    j["mean"] = num(s.mean);
    j["sd"] = num(s.sd);
    j["skewness"] = num(s.skewness);
    j["excess_kurtosis"] = num(s.excess_kurtosis);
    j["min"] = num(s.min);
    j["max"] = num(s.max);
    return j;
}

ordered_json json_of(const ArimaFit& fit) {
    ordered_json j;
    j["spec"] = {{"p", fit.spec.p},
                 {"d", fit.spec.d},
                 {"q", fit.spec.q},
                 {"include_intercept", fit.spec.include_intercept}};
    ordered_json coefs = ordered_json::array();
    int c = 0;
    if (fit.spec.include_intercept) {
        coefs.push_back({{"name", "intercept"},
                         {"estimate", num(fit.intercept)},
                         {"se", num(fit.se.size() > c ? fit.se[c] : NAN)}});
        ++c;
    }
    for (int i = 0; i < fit.spec.p; ++i, ++c)
        coefs.push_back({{"name", "ar" + std::to_string(i + 1)},
                         {"estimate", num(fit.ar[i])},
                         {"se", num(fit.se.size() > c ? fit.se[c] : NAN)}});
    for (int i = 0; i < fit.spec.q; ++i, ++c)
        coefs.push_back({{"name", "ma" + std::to_string(i + 1)},
                         {"estimate", num(fit.ma[i])},
                         {"se", num(fit.se.size() > c ? fit.se[c] : NAN)}});
    j["coefficients"] = coefs;
    j["sigma2"] = num(fit.sigma2);
    j["loglik"] = num(fit.loglik);
    const auto [aic, bic] = information_criteria(fit);
    j["aic"] = num(aic);
    j["bic"] = num(bic);
    j["n_effective"] = fit.n_effective;
    j["converged"] = fit.converged;
    j["boundary_root"] = fit.boundary_root;
    j["warnings"] = fit.warnings;
    return j;
}

ordered_json json_of(const SelectionTable& table) {
    ordered_json j;
    ordered_json rows = ordered_json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"spec", r.spec.name()},
                        {"loglik", num(r.loglik)},
                        {"aic", num(r.aic)},
                        {"bic", num(r.bic)}});
    }
    j["rows"] = rows;
    j["best_by_aic"] = table.best_by_aic.name();
    j["best_by_bic"] = table.best_by_bic.name();
    j["warnings"] = table.warnings;
    return j;
}

ordered_json json_of(const GarchFit& fit, long n) {
    ordered_json j;
    j["spec"] = {{"family", to_string(fit.spec.family)},
                 {"p", fit.spec.p},
                 {"q", fit.spec.q},
                 {"innovation", to_string(fit.spec.innovation)}};
    ordered_json coefs = ordered_json::array();
    Eigen::VectorXd values(fit.n_params());
    int c = 0;
    values[c++] = fit.omega;
    for (int i = 0; i < fit.spec.q; ++i) values[c++] = fit.alpha[i];
    for (int i = 0; i < fit.spec.p; ++i) values[c++] = fit.beta[i];
    if (fit.spec.family == GarchFamily::egarch)
        for (int i = 0; i < fit.spec.q; ++i) values[c++] = fit.phi[i];
    if (fit.spec.innovation == Innovation::student_t) values[c++] = fit.shape;
    for (int i = 0; i < fit.n_params(); ++i) {
        coefs.push_back({{"name", fit.param_names[static_cast<std::size_t>(i)]},
                         {"estimate", num(values[i])},
                         {"se", num(fit.se.size() > i ? fit.se[i] : NAN)},
                         {"tstat", num(fit.tstats.size() > i ? fit.tstats[i] : NAN)}});
    }
    j["coefficients"] = coefs;
    j["loglik"] = num(fit.loglik);
    j["persistence"] = num(fit.persistence());
    j["unconditional_variance"] = num(fit.unconditional_variance());
    const auto crit = garch_criteria(fit, n);
    j["criteria"] = {{"aic", num(crit.aic)},
                     {"bic", num(crit.bic)},
                     {"aic_per_obs", num(crit.aic_per_obs)},
                     {"bic_per_obs", num(crit.bic_per_obs)}};
    j["converged"] = fit.converged;
    j["warnings"] = fit.warnings;
    return j;
}

ordered_json json_of(const DccFit& fit) {
    ordered_json j;
    ordered_json uni = ordered_json::array();
    for (std::size_t k = 0; k < fit.univariate.size(); ++k) {
        ordered_json u = json_of(fit.univariate[k], static_cast<long>(fit.dates.size()));
        u["label"] = fit.labels[k];
        // The heavy per-observation paths stay out of the summary.
        uni.push_back(u);
    }
    j["univariate"] = uni;
    j["a"] = num(fit.a);
    j["b"] = num(fit.b);
    j["se_a"] = num(fit.se_a);
    j["se_b"] = num(fit.se_b);
    j["a_plus_b"] = num(fit.a + fit.b);
    j["S"] = json_of_matrix(fit.S);
    j["loglik"] = num(fit.loglik);
    j["stage2_loglik"] = num(fit.stage2_loglik);
    j["warnings"] = fit.warnings;
    return j;
}

} // namespace detail

std::string to_json_string(const TestResult& result) { return detail::json_of(result).dump(2); }
std::string to_json_string(const DescriptiveStats& stats) { return detail::json_of(stats).dump(2); }
std::string to_json_string(const ArimaFit& fit) { return detail::json_of(fit).dump(2); }
std::string to_json_string(const SelectionTable& table) { return detail::json_of(table).dump(2); }
std::string to_json_string(const GarchFit& fit, long n) { return detail::json_of(fit, n).dump(2); }
std::string to_json_string(const DccFit& fit) { return detail::json_of(fit).dump(2); }

} // namespace tsecon
