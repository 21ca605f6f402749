#include <benchmark/benchmark.h>

#include "tsecon/acf.hpp"
#include "tsecon/arima.hpp"
#include "tsecon/dcc.hpp"
#include "tsecon/garch.hpp"
#include "tsecon/hypothesis.hpp"
#include "tsecon/ks.hpp"

#include <vector>

namespace {

using namespace tsecon;

ReturnSeries arma_data(int n) {
    Eigen::VectorXd ar(2), ma(2);
    ar << -0.6989, -0.7508;
    ma << 0.7024, 0.6426;
    return simulate_arima(ArimaSpec{2, 0, 2, true}, 0.0, ar, ma, 0.0325, n, 7);
}

std::vector<double> garch_data(int n) {
    GarchParams par;
    par.omega = 5.3e-5;
    par.alpha = Eigen::VectorXd::Constant(1, 0.12);
    par.beta = Eigen::VectorXd::Constant(1, 0.83);
    return simulate_garch(GarchSpec{}, par, n, 7);
}

void BM_AcfPacf(benchmark::State& state) {
    const auto data = arma_data(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(acf(data.values, 20));
        benchmark::DoNotOptimize(pacf(data.values, 20));
    }
}
BENCHMARK(BM_AcfPacf)->Arg(614)->Arg(5000);

void BM_LjungBox(benchmark::State& state) {
    const auto data = arma_data(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ljung_box(data.values, 10));
}
BENCHMARK(BM_LjungBox)->Arg(614);

void BM_KsTest(benchmark::State& state) {
    const auto data = arma_data(static_cast<int>(state.range(0)));
    const auto ref = Reference::normal(0.0, 0.12);
    for (auto _ : state) benchmark::DoNotOptimize(ks_test(data.values, ref));
}
BENCHMARK(BM_KsTest)->Arg(614)->Arg(5000);

void BM_FitArima(benchmark::State& state) {
    const auto data = arma_data(static_cast<int>(state.range(0)));
    const ArimaSpec spec{2, 0, 2, true};
    for (auto _ : state) benchmark::DoNotOptimize(fit_arima(data, spec));
}
BENCHMARK(BM_FitArima)->Arg(614)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_FitGarch(benchmark::State& state) {
    const auto eps = garch_data(static_cast<int>(state.range(0)));
    const GarchSpec spec{};
    for (auto _ : state) benchmark::DoNotOptimize(fit_garch(eps, spec));
}
BENCHMARK(BM_FitGarch)->Arg(614)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_FitDcc(benchmark::State& state) {
    GarchParams par;
    par.omega = 5.3e-5;
    par.alpha = Eigen::VectorXd::Constant(1, 0.12);
    par.beta = Eigen::VectorXd::Constant(1, 0.83);
    Eigen::MatrixXd S = Eigen::MatrixXd::Constant(3, 3, 0.9);
    S.diagonal().setOnes();
    const auto panel = simulate_dcc(3, {par}, 0.268, 0.571, S,
                                    static_cast<int>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(fit_dcc(panel));
}
BENCHMARK(BM_FitDcc)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
