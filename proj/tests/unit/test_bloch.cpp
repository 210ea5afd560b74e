#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "slowlight/bloch.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/susceptibility.hpp"

using namespace slowlight;

namespace {

AtomParams dimensionless_atom() {
    AtomParams atom;
    atom.gamma_aa = 2.0;
    atom.gamma_bb = 0.0;
    atom.gamma_cc = 0.0;
    atom.gamma_ab = 1.0;
    atom.gamma_ac = 1.0;
    atom.gamma_bc = 0.01;
    atom.c = 1.0;
    return atom;
}

double max_abs_diff(const DensityMatrix3& a, const DensityMatrix3& b) {
    double m = std::abs(a.aa - b.aa);
    m = std::max(m, std::abs(a.bb - b.bb));
    m = std::max(m, std::abs(a.cc - b.cc));
    m = std::max(m, std::abs(a.ab - b.ab));
    m = std::max(m, std::abs(a.ac - b.ac));
    m = std::max(m, std::abs(a.bc - b.bc));
    return m;
}

DensityMatrix3 random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-0.3, 0.3);
    DensityMatrix3 rho;
    rho.aa = std::abs(uni(rng));
    rho.cc = std::abs(uni(rng));
    rho.bb = std::max(0.0, 1.0 - rho.aa - rho.cc);
    rho.ab = {uni(rng), uni(rng)};
    rho.ac = {uni(rng), uni(rng)};
    rho.bc = {uni(rng), uni(rng)};
    return rho;
}

} // namespace

TEST_CASE("tangent of the decay-only excited state") {
    AtomParams atom = dimensionless_atom();
    atom.gamma_aa = 1.0;
    DensityMatrix3 rho;
    rho.aa = 1.0;
    const auto d = bloch_rhs(rho, atom, 0.0, 0.0);
    CHECK(d.aa == doctest::Approx(-1.0));
    CHECK(std::abs(d.ab) == 0.0);
    CHECK(std::abs(d.ac) == 0.0);
    CHECK(std::abs(d.bc) == 0.0);
    CHECK(d.bb == 0.0);
    CHECK(d.cc == 0.0);
}

TEST_CASE("tangent of the probe-driven dark state without decay") {
    AtomParams atom;
    atom.c = 1.0;
    DensityMatrix3 rho = DensityMatrix3::dark_state();
    const auto d = bloch_rhs(rho, atom, cplx(0.1, 0.0), cplx(0.0, 0.0));
    CHECK(d.ab.real() == doctest::Approx(0.0));
    CHECK(d.ab.imag() == doctest::Approx(0.05));
    CHECK(d.bb == doctest::Approx(0.0));
}

TEST_CASE("tangent agrees with the generic commutator form") {
    AtomParams atom = dimensionless_atom();
    std::mt19937_64 rng(7);

    SUBCASE("reference point") {
        const auto d = bloch_rhs(DensityMatrix3::dark_state(), atom, cplx(0.1, 0.0),
                                 cplx(1.0, 0.0));
        const auto o = oracles::bloch_rhs_matrix_form(DensityMatrix3::dark_state(),
                                                      atom, cplx(0.1, 0.0),
                                                      cplx(1.0, 0.0));
        CHECK(max_abs_diff(d, o) < 1e-15);
    }

    SUBCASE("random states, fields and detunings") {
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            AtomParams a = atom;
            a.delta_ab = uni(rng);
            a.delta_ac = uni(rng);
            const DensityMatrix3 rho = random_state(rng);
            const cplx op(uni(rng), uni(rng));
            const cplx oc(uni(rng), uni(rng));
            const auto d = bloch_rhs(rho, a, op, oc);
            const auto o = oracles::bloch_rhs_matrix_form(rho, a, op, oc);
            CHECK(max_abs_diff(d, o) < 1e-14);
        }
    }
}

TEST_CASE("integration reproduces scalar exponential decay") {
    AtomParams atom;
    atom.gamma_aa = 1.0;
    atom.c = 1.0;
    DensityMatrix3 rho;
    rho.aa = 1.0;
    const double tol = 1e-9;
    const std::array samples{0.5, 1.0, 2.0, 4.0};
    const auto traj =
        integrate_bloch(rho, atom, [](double) { return cplx(0.0, 0.0); },
                        [](double) { return cplx(0.0, 0.0); }, {0.0, 4.0}, tol,
                        samples);
    REQUIRE(traj.times.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(traj.states[i].aa ==
              doctest::Approx(std::exp(-samples[i])).epsilon(1e-7));
    }
    CHECK(traj.accepted_steps > 0);
}

TEST_CASE("decay-free evolution conserves trace and matrix invariants") {
    AtomParams atom;
    atom.c = 1.0; // all gammas zero: purely Hamiltonian
    // A positive-semidefinite mixed state (coherence below sqrt(aa * bb)).
    DensityMatrix3 rho;
    rho.aa = 0.1;
    rho.bb = 0.9;
    rho.ab = {0.1, 0.05};

    const double tol = 1e-10;
    const auto traj = integrate_bloch(
        rho, atom, [](double t) { return cplx(0.4 * std::cos(0.3 * t), 0.1); },
        [](double) { return cplx(1.0, 0.2); }, {0.0, 30.0}, tol);

    const double tr2_0 = oracles::trace_rho2(rho);
    const double tr3_0 = oracles::trace_rho3(rho);
    for (const auto& s : traj.states) {
        CHECK(s.trace() == doctest::Approx(rho.trace()).epsilon(10 * tol));
        CHECK(oracles::trace_rho2(s) == doctest::Approx(tr2_0).epsilon(1e-8));
        CHECK(oracles::trace_rho3(s) == doctest::Approx(tr3_0).epsilon(1e-8));
    }
}

TEST_CASE("trace decays monotonically under population decay") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    for (int rep = 0; rep < 10; ++rep) {
        AtomParams atom = dimensionless_atom();
        atom.gamma_aa = uni(rng);
        atom.gamma_bb = uni(rng);
        atom.gamma_cc = uni(rng);
        // Coherence decays at the radiative minimum plus per-level dephasing,
        // which keeps the evolution completely positive, so the populations
        // stay inside [0, 1] and the integrator's physicality guard is quiet.
        const double d_a = 0.5 * uni(rng), d_b = 0.5 * uni(rng), d_c = 0.5 * uni(rng);
        atom.gamma_ab = 0.5 * (atom.gamma_aa + atom.gamma_bb) + 0.5 * (d_a + d_b);
        atom.gamma_ac = 0.5 * (atom.gamma_aa + atom.gamma_cc) + 0.5 * (d_a + d_c);
        atom.gamma_bc = 0.5 * (atom.gamma_bb + atom.gamma_cc) + 0.5 * (d_b + d_c);

        const double tol = 1e-9;
        const auto traj = integrate_bloch(
            DensityMatrix3::dark_state(), atom,
            [](double) { return cplx(0.3, 0.1); }, [](double) { return cplx(1.0, 0.0); },
            {0.0, 20.0}, tol);
        for (std::size_t i = 1; i < traj.states.size(); ++i) {
            CHECK(traj.states[i].trace() <=
                  traj.states[i - 1].trace() + 10 * tol);
        }
    }
}

TEST_CASE("long-run coherence approaches the steady two-coherence value") {
    AtomParams atom = dimensionless_atom();
    const cplx op(0.1, 0.0), oc(1.0, 0.0);
    const std::array samples{100.0};
    const auto traj = integrate_bloch(
        DensityMatrix3::dark_state(), atom, [&](double) { return op; },
        [&](double) { return oc; }, {0.0, 100.0}, 1e-11, samples);

    const auto steady = steady_two_coherence(atom, op, oc);
    CHECK(steady.rho_ab.imag() == doctest::Approx(1.9230769e-3).epsilon(1e-6));

    // The driven ground state slowly depletes (the decay model has no
    // repopulation), so the integrated value sits a few percent below the
    // fixed-population steady formula.
    const cplx ab = traj.states.back().ab;
    CHECK(std::abs(ab - steady.rho_ab) / std::abs(steady.rho_ab) < 0.06);
    CHECK(ab.imag() == doctest::Approx(1.8187e-3).epsilon(5e-3));
    CHECK(std::abs(ab.real()) < 1e-8);
}

TEST_CASE("halving the tolerance does not worsen accuracy") {
    AtomParams atom = dimensionless_atom();
    const cplx op(0.1, 0.0), oc(1.0, 0.0);
    const std::array samples{5.0, 10.0, 20.0};

    auto run = [&](double tol) {
        return integrate_bloch(DensityMatrix3::dark_state(), atom,
                               [&](double) { return op; }, [&](double) { return oc; },
                               {0.0, 20.0}, tol, samples);
    };
    const auto reference = run(1e-11);
    auto err = [&](const BlochTrajectory& t) {
        double m = 0.0;
        for (std::size_t i = 0; i < t.states.size(); ++i) {
            m = std::max(m, max_abs_diff(t.states[i], reference.states[i]));
        }
        return m;
    };
    const double e1 = err(run(1e-5));
    const double e2 = err(run(5e-6));
    const double e3 = err(run(2.5e-6));
    CHECK(e2 <= e1 * 1.05);
    CHECK(e3 <= e2 * 1.05);
}

TEST_CASE("dense output derivative matches the tangent") {
    AtomParams atom = dimensionless_atom();
    const cplx oc(1.0, 0.0);
    auto op = [](double t) { return cplx(0.1 * std::exp(-0.05 * t), 0.0); };

    std::vector<double> samples;
    const double h = 0.05;
    for (double t = 5.0; t <= 15.0; t += h) samples.push_back(t);
    const auto traj =
        integrate_bloch(DensityMatrix3::dark_state(), atom, op,
                        [&](double) { return oc; }, {0.0, 20.0}, 1e-10, samples);

    for (std::size_t i = 1; i + 1 < traj.times.size(); ++i) {
        const auto fd = (1.0 / (2.0 * h)) *
                        (traj.states[i + 1] + (-1.0) * traj.states[i - 1]);
        const auto an = bloch_rhs(traj.states[i], atom, op(traj.times[i]), oc);
        CHECK(max_abs_diff(fd, an) < 5.0 * h); // first-order bound, generous
    }
}

TEST_CASE("integration rejects bad spans, tolerances and samples") {
    AtomParams atom = dimensionless_atom();
    auto zero = [](double) { return cplx(0.0, 0.0); };
    CHECK_THROWS_AS(integrate_bloch(DensityMatrix3::dark_state(), atom, zero, zero,
                                    {1.0, 0.0}, 1e-8),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_bloch(DensityMatrix3::dark_state(), atom, zero, zero,
                                    {0.0, 1.0}, 1e-2),
                    std::invalid_argument);
    const std::array bad{0.5, 0.4};
    CHECK_THROWS_AS(integrate_bloch(DensityMatrix3::dark_state(), atom, zero, zero,
                                    {0.0, 1.0}, 1e-8, bad),
                    std::invalid_argument);
}

TEST_CASE("reduced resonant system accepts the embedded steady state") {
    AtomParams atom = dimensionless_atom();
    const cplx op(0.1, 0.0), oc(1.0, 0.0);
    const auto steady = steady_two_coherence(atom, op, oc);

    // Embed the two steady coherences into a full state with rho_bb = 1.
    // The excited population follows from the absorption balance, which in
    // turn rescales the inversion rho_bb - rho_aa and hence the coherences;
    // the joint fixed point is linear and solved in closed form. gamma_cc = 0
    // decouples the |c> population row and forces rho_ac = 0.
    const double k = std::imag(std::conj(op) * steady.rho_ab) / atom.gamma_aa;
    const double inversion = 1.0 / (1.0 + k);
    DensityMatrix3 rho;
    rho.bb = 1.0;
    rho.aa = k * inversion;
    rho.ab = steady.rho_ab * inversion;
    rho.bc = std::conj(steady.rho_cb) * inversion;
    rho.ac = {0.0, 0.0};
    rho.cc = rho.aa - std::real(op * rho.bc / oc);

    const auto res = reduced_resonant_rhs(rho, atom, op, oc);
    CHECK(res.max_relative_algebraic() < 1e-9);
    CHECK(std::abs(res.drho_bc) < 1e-12);
    // The ground-state population drains at the absorption rate; that row is
    // a derivative, not an algebraic constraint.
    CHECK(res.drho_bb == doctest::Approx(-std::imag(std::conj(op) * rho.ab)));
}

TEST_CASE("reduced resonant system: dark state with no probe is exact") {
    AtomParams atom = dimensionless_atom();
    const auto res = reduced_resonant_rhs(DensityMatrix3::dark_state(), atom,
                                          cplx(0.0, 0.0), cplx(1.0, 0.0));
    CHECK(res.max_relative_algebraic() == 0.0);
    CHECK(std::abs(res.drho_bc) == 0.0);
    CHECK(res.drho_bb == 0.0);
}

TEST_CASE("reduced resonant system flags a non-steady state") {
    AtomParams atom = dimensionless_atom();
    std::mt19937_64 rng(3);
    const DensityMatrix3 rho = random_state(rng);
    const auto res = reduced_resonant_rhs(rho, atom, cplx(0.1, 0.0), cplx(1.0, 0.0));
    CHECK(res.max_relative_algebraic() > 1e-3);
}

TEST_CASE("reduced resonant system requires zero detunings") {
    AtomParams atom = dimensionless_atom();
    atom.delta_ab = 0.1;
    CHECK_THROWS_AS(reduced_resonant_rhs(DensityMatrix3::dark_state(), atom,
                                         cplx(0.0, 0.0), cplx(1.0, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("population balance diagnostic") {
    AtomParams atom = dimensionless_atom();
    auto zero = [](double) { return cplx(0.0, 0.0); };
    auto oc = [](double) { return cplx(1.0, 0.0); };

    SUBCASE("no probe leaves the driven levels empty") {
        const auto traj = integrate_bloch(DensityMatrix3::dark_state(), atom, zero,
                                          oc, {0.0, 10.0}, 1e-9);
        CHECK(population_ratio_check(traj, atom) < 1e-12);
    }

    SUBCASE("driven run reports an order-one residual") {
        // Populations are non-negative, so the weighted sum cannot cancel;
        // the diagnostic honestly reports that and stays a report, not a gate.
        const auto traj = integrate_bloch(
            DensityMatrix3::dark_state(), atom, [](double) { return cplx(0.1, 0.0); },
            oc, {0.0, 100.0}, 1e-9);
        const double r = population_ratio_check(traj, atom);
        CHECK(r > 0.5);
        CHECK(r <= 1.0 + 1e-12);
    }
}

TEST_CASE("integrated states stay Hermitian by construction") {
    // Storage holds one triangle only; verify the reconstruction is used
    // consistently by checking a full matrix round trip.
    AtomParams atom = dimensionless_atom();
    const auto traj = integrate_bloch(
        DensityMatrix3::dark_state(), atom, [](double) { return cplx(0.2, 0.1); },
        [](double) { return cplx(1.0, -0.3); }, {0.0, 10.0}, 1e-9);
    for (const auto& s : traj.states) {
        const auto m = oracles::to_matrix(s);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                CHECK(std::abs(m[i][j] - std::conj(m[j][i])) == 0.0);
            }
        }
    }
}
