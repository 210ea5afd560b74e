#include <benchmark/benchmark.h>

#include <complex>

#include "slowlight/adiabatic.hpp"
#include "slowlight/bloch.hpp"
#include "slowlight/maxwell1d.hpp"
#include "slowlight/params.hpp"
#include "slowlight/probe_modes.hpp"
#include "slowlight/susceptibility.hpp"

using namespace slowlight;

namespace {

AtomParams bench_atom() {
    AtomParams atom;
    atom.gamma_aa = 2.0;
    atom.gamma_ab = 1.0;
    atom.gamma_ac = 1.0;
    atom.gamma_bc = 0.01;
    atom.omega_p = 2.0;
    atom.omega_ab = 2.0;
    atom.kappa = 1.0;
    atom.c = 1.0;
    return atom;
}

void bm_bloch_rhs(benchmark::State& state) {
    const auto atom = bench_atom();
    DensityMatrix3 rho = DensityMatrix3::dark_state();
    rho.ab = {0.01, 0.002};
    const cplx op(0.1, 0.0), oc(1.0, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bloch_rhs(rho, atom, op, oc));
    }
}
BENCHMARK(bm_bloch_rhs);

void bm_integrate_bloch(benchmark::State& state) {
    const auto atom = bench_atom();
    const double t_end = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto traj = integrate_bloch(
            DensityMatrix3::dark_state(), atom, [](double) { return cplx(0.1, 0.0); },
            [](double) { return cplx(1.0, 0.0); }, {0.0, t_end}, 1e-8);
        benchmark::DoNotOptimize(traj.states.back());
    }
}
BENCHMARK(bm_integrate_bloch)->Arg(20)->Arg(100);

void bm_chi_steady_sweep(benchmark::State& state) {
    const auto atom = bench_atom();
    const cplx oc(1.0, 0.0);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = atom.omega_ab - 10.0 + 20.0 * double(i) / double(n - 1);
            acc += chi_steady(w, atom, oc);
        }
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(bm_chi_steady_sweep)->Arg(401);

void bm_coherence_quadrature(benchmark::State& state) {
    const auto atom = bench_atom();
    FieldParams field;
    field.omega_c_rabi = {1.0, 0.0};
    const auto rates = derive_rates(atom, field);
    auto drive = [](double t) { return cplx(0.1 * std::exp(-0.01 * t), 0.0); };
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            rho_bc_quadrature(drive, rates, field.omega_c_rabi, 1.0, {0.0, 0.0}, 40.0));
    }
}
BENCHMARK(bm_coherence_quadrature);

void bm_chi_m_fixed_point(benchmark::State& state) {
    const auto atom = bench_atom();
    for (auto _ : state) {
        benchmark::DoNotOptimize(chi_m_fixed_point(atom, {1.0, 0.0}));
    }
}
BENCHMARK(bm_chi_m_fixed_point);

void bm_propagate(benchmark::State& state) {
    AtomParams atom = bench_atom();
    atom.gamma_bc = 0.0;
    atom.omega_p = 1e4;
    atom.kappa = 1.5e-4;
    const auto coupling = state.range(0) == 0 ? CouplingChoice::adiabatic_rho_ab
                                              : CouplingChoice::full_bloch;
    Grid1D grid;
    grid.length = 12.0;
    grid.n_cells = 241;
    grid.dt = grid.dz();
    auto inflow = [](double t) {
        const double u = (t - 30.0) / 10.0;
        return cplx(0.01 * std::exp(-0.5 * u * u), 0.0);
    };
    for (auto _ : state) {
        auto rec = propagate(grid, atom, {1.0, 0.0}, inflow, coupling, 80.0, 8);
        benchmark::DoNotOptimize(rec.peak_positions);
    }
}
BENCHMARK(bm_propagate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
