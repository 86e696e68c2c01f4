#include <benchmark/benchmark.h>

#include <complex>

#include <cwl/delay.hpp>
#include <cwl/model.hpp>
#include <cwl/observability.hpp>
#include <cwl/transfer.hpp>
#include <cwl/transform.hpp>

namespace {

cwl::ModelConfig mixed_config(int N) {
    cwl::ModelConfig cfg;
    cfg.kind = cwl::ModelKind::NeumannDirichlet;
    cfg.beta = 0.4;
    cfg.xi = 0.21;
    cfg.N = N;
    return cfg;
}

void BM_AssembleModel(benchmark::State& state) {
    const cwl::ModelConfig cfg = mixed_config(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwl::assemble_model(cfg));
    }
}
BENCHMARK(BM_AssembleModel)->Arg(8)->Arg(32)->Arg(128);

void BM_ConjugationResidual(benchmark::State& state) {
    const cwl::ModalModel model =
        cwl::assemble_model(mixed_config(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwl::conjugation_residual(model.quad));
    }
}
BENCHMARK(BM_ConjugationResidual)->Arg(8)->Arg(16)->Arg(32);

void BM_SimulateStep(benchmark::State& state) {
    const cwl::ModalModel model =
        cwl::assemble_model(mixed_config(static_cast<int>(state.range(0))));
    cwl::DelayParams params;
    params.alpha1 = 0.4;
    params.alpha2 = 0.2;
    params.tau = 0.5;
    params.mu = 0.2;
    const int n = model.quad.dims.n1 + model.quad.dims.n2;
    cwl::SimInit init;
    init.w0 = Eigen::VectorXd::Zero(n);
    init.v0 = Eigen::VectorXd::Zero(n);
    init.w0(1) = 1.0;
    const double dt = 1.0 / 128.0;
    const double T = 1.0;  // 128 steps per iteration
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwl::simulate(model, params, init, dt, T));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(T / dt));
}
BENCHMARK(BM_SimulateStep)->Arg(8)->Arg(16)->Arg(32);

void BM_TransferClosedForm(benchmark::State& state) {
    const cwl::ModelConfig cfg = mixed_config(4);
    const std::complex<double> lambda(1.3, 27.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwl::transfer_closed_form(cfg, lambda));
    }
}
BENCHMARK(BM_TransferClosedForm);

void BM_TransferNumericBVP(benchmark::State& state) {
    const cwl::ModelConfig cfg = mixed_config(4);
    const std::complex<double> lambda(1.3, 27.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwl::transfer_numeric_bvp(cfg, lambda));
    }
}
BENCHMARK(BM_TransferNumericBVP);

void BM_VerticalLineScan(benchmark::State& state) {
    const cwl::ModelConfig cfg = mixed_config(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            cwl::vertical_line_sup(cfg, 1.0, 50.0, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_VerticalLineScan)->Arg(201)->Arg(2001);

void BM_InghamRatio(benchmark::State& state) {
    const cwl::ModelConfig cfg = mixed_config(static_cast<int>(state.range(0)));
    cwl::ModalState bundle = cwl::adjoint_frequencies(cfg);
    for (Eigen::Index i = 0; i < bundle.a.size(); ++i) {
        bundle.a(i) = std::complex<double>(1.0, -0.5);
    }
    const double T = 1.5 * cwl::ingham_threshold(cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwl::ingham_ratio(cfg, bundle, T));
    }
}
BENCHMARK(BM_InghamRatio)->Arg(8)->Arg(32);

void BM_StabilityCriterion(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwl::stability_criterion(0.3333333333));
    }
}
BENCHMARK(BM_StabilityCriterion);

}  // namespace

BENCHMARK_MAIN();
