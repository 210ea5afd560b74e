#include "slowlight/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "slowlight/adiabatic.hpp"
#include "slowlight/bloch.hpp"
#include "slowlight/maxwell1d.hpp"
#include "slowlight/params.hpp"
#include "slowlight/probe_modes.hpp"
#include "slowlight/susceptibility.hpp"

namespace slowlight {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

double rel_diff(cplx a, cplx b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

CheckReport check_adiabatic_vs_numeric(bool negative_control) {
    const auto t0 = std::chrono::steady_clock::now();
    auto [atom, field] = canonical_dimensionless();
    const cplx omega_c = field.omega_c_rabi;
    const cplx omega_p = negative_control ? omega_c : 0.1 * omega_c;
    const auto rates = derive_rates(atom, field);
    const double lam = rates.lambda;

    std::vector<double> samples(200);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i] = 5.0 / lam + (45.0 / lam) * static_cast<double>(i) /
                                     static_cast<double>(samples.size() - 1);
    }

    const auto traj = integrate_bloch(
        DensityMatrix3::dark_state(), atom, [&](double) { return omega_p; },
        [&](double) { return omega_c; }, {0.0, 50.0 / lam}, 1e-10, samples);

    // Constant drive: the quadratures reduce to saturating exponentials.
    double err_bc = 0.0, err_ab = 0.0, amp_bc = 0.0, amp_ab = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const cplx relax = 1.0 - std::exp(-lam * t);
        const cplx bc_ad = -std::conj(omega_p) * omega_c / (4.0 * atom.gamma_ab * lam) * relax;
        const cplx ab_ad =
            cplx(0.0, 0.5) * atom.gamma_bc * omega_p / (atom.gamma_ab * lam) * relax;
        err_bc = std::max(err_bc, std::abs(traj.states[i].bc - bc_ad));
        err_ab = std::max(err_ab, std::abs(traj.states[i].ab - ab_ad));
        amp_bc = std::max(amp_bc, std::abs(traj.states[i].bc));
        amp_ab = std::max(amp_ab, std::abs(traj.states[i].ab));
    }
    const double res_bc = err_bc / std::max(amp_bc, 1e-300);
    const double res_ab = err_ab / std::max(amp_ab, 1e-300);

    CheckReport rep;
    rep.name = negative_control ? "adiabatic_vs_numeric_negative_control"
                                : "adiabatic_vs_numeric";
    rep.claim = negative_control
                    ? "with the probe as strong as the coupling the closed forms "
                      "must lose the full integration"
                    : "closed-form coherences track full integration at weak probe";
    rep.residual = std::max(res_bc, res_ab);
    rep.tolerance = 0.05;
    rep.negative_control = negative_control;
    rep.pass = negative_control ? rep.residual > rep.tolerance
                                : rep.residual <= rep.tolerance;
    rep.note = "rho_bc residual " + fmt(res_bc) + ", rho_ab residual " + fmt(res_ab);
    rep.runtime_s = seconds_since(t0);
    return rep;
}

CheckReport check_resonance_chain() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0xEA7C0FFEEull);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        AtomParams atom;
        atom.gamma_ab = std::pow(10.0, -1.0 + 2.0 * uni(rng)); // [0.1, 10]
        atom.gamma_ac = atom.gamma_ab;
        atom.gamma_aa = 2.0 * atom.gamma_ab;
        // Every tenth draw sits exactly on the lossless dark-state point.
        atom.gamma_bc = (draw % 10 == 0) ? 0.0 : 0.1 * atom.gamma_ab * uni(rng);
        atom.kappa = std::pow(10.0, -1.0 + 2.0 * uni(rng));
        atom.omega_ab = 100.0 * atom.gamma_ab;
        atom.omega_p = atom.omega_ab;
        atom.c = 1.0;

        const double mag = atom.gamma_ab * std::pow(10.0, -1.0 + 2.0 * uni(rng));
        const double phase = 2.0 * M_PI * uni(rng);
        const cplx omega_c = std::polar(mag, phase);

        FieldParams fieldp;
        fieldp.omega_c_rabi = omega_c;

        const cplx a = chi_resonant(atom, fieldp);
        const cplx b = chi_steady(atom.omega_ab, atom, omega_c);
        const cplx c = chi_e(atom, omega_c);
        worst = std::max({worst, rel_diff(a, b), rel_diff(b, c), rel_diff(a, c)});
    }

    CheckReport rep;
    rep.name = "resonance_chain";
    rep.claim = "resonant susceptibility agrees across the adiabatic, "
                "frequency-domain and two-coherence routes";
    rep.residual = worst;
    rep.tolerance = 1e-12;
    rep.pass = rep.residual <= rep.tolerance;
    rep.runtime_s = seconds_since(t0);
    return rep;
}

CheckReport check_vg_consistency() {
    const auto t0 = std::chrono::steady_clock::now();

    // The closed final form drops gamma_bc; its own validity needs
    // gamma_bc << lambda on top of the stated drive-dominance regime.
    auto run_point = [&](double two_wk_over_oc2, double gamma_bc_over_gamma_ab) {
        AtomParams atom;
        atom.gamma_ab = 1.0;
        atom.gamma_ac = 1.0;
        atom.gamma_aa = 2.0;
        atom.gamma_bc = gamma_bc_over_gamma_ab;
        atom.omega_ab = 5000.0;
        atom.omega_p = 5000.0;
        atom.kappa = two_wk_over_oc2 / (2.0 * atom.omega_p);
        atom.c = 1.0;
        const cplx omega_c(1.0, 0.0);

        FieldParams fieldp;
        fieldp.omega_c_rabi = omega_c;
        const auto rates = derive_rates(atom, fieldp);
        const auto approx = slow_light_vg(rates, atom, fieldp);
        const double d_omega =
            (atom.gamma_bc > 0.0) ? atom.gamma_bc / 100.0 : 1e-5;
        const auto [n, vg] =
            refractive_index_and_vg(atom.omega_ab, atom, omega_c, d_omega);
        (void)n;
        return std::abs(vg - approx.final_form) / approx.final_form;
    };

    double worst = 0.0;
    for (double ratio : {10.0, 30.0, 100.0}) {
        for (double gbc : {0.0, 1e-3}) {
            worst = std::max(worst, run_point(ratio, gbc));
        }
    }

    // Informational only: at the canonical dephasing gamma_bc = 0.01 gamma_ab
    // the final form's neglected gamma_bc costs about 2 gamma_bc/lambda.
    const double canonical_diff = run_point(100.0, 1e-2);
    const double marginal_diff = run_point(3.0, 0.0);

    CheckReport rep;
    rep.name = "vg_consistency";
    rep.claim = "slow-light closed form matches the dispersive group velocity "
                "c/(n + omega dn/domega) in its joint validity regime";
    rep.residual = worst;
    rep.tolerance = 0.05;
    rep.pass = rep.residual <= rep.tolerance;
    rep.note = "canonical-dephasing point off by " + fmt(canonical_diff) +
               " (not asserted); marginal 2wk=3|Oc|^2 point off by " +
               fmt(marginal_diff) + " (not asserted)";
    rep.runtime_s = seconds_since(t0);
    return rep;
}

CheckReport check_pulse_delay(bool vacuum_control) {
    const auto t0 = std::chrono::steady_clock::now();

    AtomParams atom;
    atom.gamma_ab = 1.0;
    atom.gamma_ac = 1.0;
    atom.gamma_aa = 2.0;
    atom.gamma_bc = 0.0;
    atom.omega_ab = 1e4;
    atom.omega_p = 1e4;
    // 2 omega_p kappa = 3 |Omega_c|^2 puts the slow-light value at c/4.
    atom.kappa = vacuum_control ? 0.0 : 1.5 / atom.omega_p;
    atom.c = 1.0;
    const cplx omega_c(1.0, 0.0);

    Grid1D grid;
    grid.length = 24.0;
    grid.n_cells = 481; // dz = 0.05
    grid.dt = grid.dz() / atom.c;

    const double tau = 25.0, t_peak = 80.0, amp = 0.01;
    auto inflow = [=](double t) {
        const double u = (t - t_peak) / tau;
        return cplx(amp * std::exp(-0.5 * u * u), 0.0);
    };

    const double t_end = vacuum_control ? 120.0 : 236.0;
    const auto record = propagate(grid, atom, omega_c, inflow,
                                  CouplingChoice::full_bloch, t_end);
    const auto fit = measure_group_velocity(record, {6.0, 18.0});

    FieldParams fieldp;
    fieldp.omega_c_rabi = omega_c;
    const double v_ref =
        vacuum_control ? atom.c
                       : slow_light_vg(derive_rates(atom, fieldp), atom, fieldp)
                             .final_form;

    CheckReport rep;
    rep.name = vacuum_control ? "pulse_delay_vacuum_control" : "pulse_delay";
    rep.claim = vacuum_control
                    ? "with no atoms the scheme transports the pulse at exactly c"
                    : "measured pulse transit velocity matches the analytic "
                      "slow-light value";
    rep.residual = std::abs(fit.v - v_ref) / v_ref;
    rep.tolerance = vacuum_control ? 1e-3 : 0.05;
    rep.pass = rep.residual <= rep.tolerance;
    rep.note = "v_fit = " + fmt(fit.v) + " +/- " + fmt(fit.stderr_v) +
               ", reference " + fmt(v_ref);
    rep.runtime_s = seconds_since(t0);
    return rep;
}

ValidationReport run_validation(unsigned threads) {
    (void)threads; // checks are few; one async task each is already bounded
    std::vector<std::future<CheckReport>> futures;
    futures.push_back(std::async(std::launch::async,
                                 [] { return check_adiabatic_vs_numeric(false); }));
    futures.push_back(std::async(std::launch::async,
                                 [] { return check_adiabatic_vs_numeric(true); }));
    futures.push_back(std::async(std::launch::async, [] { return check_pulse_delay(false); }));
    futures.push_back(std::async(std::launch::async, [] { return check_pulse_delay(true); }));
    futures.push_back(std::async(std::launch::async, check_resonance_chain));
    futures.push_back(std::async(std::launch::async, check_vg_consistency));

    ValidationReport report;
    for (auto& f : futures) report.checks.push_back(f.get());
    std::sort(report.checks.begin(), report.checks.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
    report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const CheckReport& c) { return c.pass; });
    return report;
}

} // namespace slowlight
