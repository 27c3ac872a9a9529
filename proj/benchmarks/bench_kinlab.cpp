#include <benchmark/benchmark.h>

#include <cmath>

#include "kinlab/coefficients.hpp"
#include "kinlab/collision_mc.hpp"
#include "kinlab/fokker_planck.hpp"
#include "kinlab/momentum_grid.hpp"
#include "kinlab/wigner_spectral.hpp"

using namespace kinlab;

static void BM_FrictionQuadrature(benchmark::State& state) {
    const PhysicalParams pp;
    const auto xs = CrossSection::gaussian(1.0, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(friction_coefficient(pp, xs));
}
BENCHMARK(BM_FrictionQuadrature);

static void BM_TotalRate(benchmark::State& state) {
    const PhysicalParams pp;
    const auto xs = CrossSection::constant(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(mc::total_rate({0.3, -0.2, 1.1}, pp, xs));
}
BENCHMARK(BM_TotalRate);

static void BM_TransferSampler(benchmark::State& state) {
    const PhysicalParams pp;
    const mc::TransferSampler sampler(pp, CrossSection::constant(1.0), StructureFactorForm::maxwell_boltzmann, 8.0);
    auto rng = mc::make_stream(1, 0);
    mc::SamplerStats stats;
    const MomentumVector p{0.0, 0.0, 1.5};
    for (auto _ : state) benchmark::DoNotOptimize(sampler.sample_transfer(p, rng, stats));
    state.counters["acceptance"] = stats.acceptance_rate();
}
BENCHMARK(BM_TransferSampler);

static void BM_KramersStep(benchmark::State& state) {
    PhysicalParams pp;
    pp.density = 10.0;
    pp.hbar = 4.0;
    const auto n = static_cast<std::size_t>(state.range(0));
    const PhaseSpaceGrid grid{-30.0, 30.0, n, 6.0, n / 2};
    const auto maxwell = discrete_maxwell(grid, pp);
    auto f0 = PhaseSpaceField::from_function(grid, [](double, double) { return 0.0; });
    for (std::size_t j = 0; j < grid.n_p; ++j)
        for (std::size_t i = 0; i < grid.n_x; ++i) f0(i, j) = std::exp(-0.5 * grid.x(i) * grid.x(i)) * maxwell[j];
    f0.normalize();
    const double eta = friction_coefficient(pp, CrossSection::constant(1.0));
    const double dt = 0.9 * fp::kramers_stable_dt(grid, eta, position_diffusion_coefficient(eta, pp), pp);
    for (auto _ : state) benchmark::DoNotOptimize(fp::quantum_kramers_solve(f0, eta, dt, dt, pp));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * grid.size()));
}
BENCHMARK(BM_KramersStep)->Arg(64)->Arg(128)->Arg(256);

static void BM_LatticeGridStep(benchmark::State& state) {
    const PhysicalParams pp;
    const auto xs = CrossSection::constant(1.0);
    const auto n = static_cast<std::size_t>(state.range(0));
    const qm::MomentumLattice lat{n, 12.0 / static_cast<double>(n)};
    const auto rho0 = qm::MomentumGridDensityMatrix::thermal(lat, pp);
    const qm::NonAbelianGenerator gen(lat, pp, xs, StructureFactorForm::maxwell_boltzmann);
    const double dt = 0.5 / gen.max_loss_rate();
    for (auto _ : state) benchmark::DoNotOptimize(qm::nonabelian_grid_evolve(rho0, dt, dt, pp, xs));
}
BENCHMARK(BM_LatticeGridStep)->Arg(16)->Arg(32)->Arg(64);

static void BM_SpectralStep(benchmark::State& state) {
    const PhysicalParams pp;
    const auto xs = CrossSection::constant(1.0);
    qm::WignerSpectralField w(10.0, 8, 6.0, static_cast<std::size_t>(state.range(0)));
    for (std::size_t j = 0; j < w.n_p(); ++j) w(0, j) = std::exp(-0.5 * w.p(j) * w.p(j));
    const qm::WignerBoltzmannOperator op(w, pp, xs, qm::KernelMode::quantum);
    const double dt = 0.5 * op.stable_dt();
    for (auto _ : state) {
        op.step(w, dt);
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_SpectralStep)->Arg(48)->Arg(96);

BENCHMARK_MAIN();
