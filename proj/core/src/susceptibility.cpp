#include "slowlight/susceptibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "slowlight/errors.hpp"

namespace slowlight {

namespace {

cplx gamma_ab_complex(const AtomParams& atom) {
    return {atom.gamma_ab, atom.delta_ab};
}

cplx gamma_bc_complex(const AtomParams& atom) {
    return {atom.gamma_bc, atom.delta_ab - atom.delta_ac};
}

cplx steady_denominator(const AtomParams& atom, cplx omega_c) {
    return gamma_ab_complex(atom) * gamma_bc_complex(atom) +
           0.25 * std::norm(omega_c);
}

void require_denominator(cplx d, const char* where) {
    if (std::abs(d) < 1e-30) {
        throw numerical_error(std::string(where) +
                              ": steady-state denominator vanishes (pole)");
    }
}

} // namespace

cplx chi_steady(double omega, const AtomParams& atom, cplx omega_c) {
    const cplx u(omega - atom.omega_ab, atom.gamma_bc);
    const cplx w(omega - atom.omega_ab, atom.gamma_ab);
    const cplx denom = u * w - 0.25 * std::norm(omega_c);
    if (std::abs(denom) < 1e-30) {
        throw numerical_error("chi_steady: denominator vanishes at omega = " +
                              std::to_string(omega));
    }
    return -atom.kappa * u / denom;
}

std::pair<cplx, double> refractive_index_and_vg(double omega, const AtomParams& atom,
                                                cplx omega_c, double d_omega) {
    if (!(d_omega > 0.0)) {
        throw std::invalid_argument("refractive_index_and_vg: d_omega must be > 0");
    }
    auto n_of = [&](double w) { return std::sqrt(1.0 + chi_steady(w, atom, omega_c)); };

    cplx n, n_p1, n_p2, n_m1, n_m2;
    try {
        n = n_of(omega);
        n_p1 = n_of(omega + d_omega);
        n_p2 = n_of(omega + 2 * d_omega);
        n_m1 = n_of(omega - d_omega);
        n_m2 = n_of(omega - 2 * d_omega);
    } catch (const numerical_error&) {
        throw numerical_error(
            "refractive_index_and_vg: susceptibility pole inside the finite-"
            "difference stencil; retry with a smaller d_omega");
    }
    const cplx dn = (-n_p2 + 8.0 * n_p1 - 8.0 * n_m1 + n_m2) / (12.0 * d_omega);
    const double group_index = std::real(n + omega * dn);
    return {n, atom.c / group_index};
}

SteadyCoherences steady_two_coherence(const AtomParams& atom, cplx omega_p,
                                      cplx omega_c) {
    const cplx denom = steady_denominator(atom, omega_c);
    require_denominator(denom, "steady_two_coherence");
    SteadyCoherences out;
    out.rho_ab = cplx(0.0, 0.5) * omega_p * gamma_bc_complex(atom) / denom;
    out.rho_cb = -omega_p * std::conj(omega_c) / (4.0 * denom);
    return out;
}

cplx rho_cb_ab_relation(cplx rho_ab, const AtomParams& atom, cplx omega_c) {
    const cplx gbc = gamma_bc_complex(atom);
    if (std::abs(gbc) < 1e-30) {
        throw numerical_error(
            "rho_cb_ab_relation: gamma_bc + i(delta_ab - delta_ac) vanishes");
    }
    return cplx(0.0, 0.5) * (std::conj(omega_c) / gbc) * rho_ab;
}

cplx chi_e(const AtomParams& atom, cplx omega_c) {
    const cplx denom = steady_denominator(atom, omega_c);
    require_denominator(denom, "chi_e");
    return cplx(0.0, 1.0) * atom.kappa * gamma_bc_complex(atom) / denom;
}

ChiMResult chi_m_fixed_point(const AtomParams& atom, cplx omega_c, double tol,
                             int max_iter) {
    if (!(tol >= 1e-14 && tol <= 1e-6)) {
        throw std::invalid_argument("chi_m_fixed_point: tol must lie in [1e-14, 1e-6]");
    }
    const cplx xe = chi_e(atom, omega_c);
    // The Gamma_bc factor of chi_e cancels against the explicit 1/Gamma_bc,
    // so the drive stays finite in the gamma_bc -> 0 dark-state limit:
    //   (i/2) Omega_c^*/Gamma_bc * chi_e = -kappa Omega_c^*/(2 (Gamma_ab Gamma_bc + |Omega_c|^2/4)).
    const cplx denom = steady_denominator(atom, omega_c);
    require_denominator(denom, "chi_m_fixed_point");
    const cplx drive =
        -atom.dipole_ratio * 0.5 * atom.kappa * std::conj(omega_c) / denom;

    auto rhs = [&](cplx x) { return drive * std::sqrt((1.0 + x) / (1.0 + xe)); };

    ChiMResult out;
    cplx x(0.0, 0.0);
    double prev_update = std::numeric_limits<double>::infinity();
    for (int k = 0; k < max_iter; ++k) {
        const cplx next = rhs(x);
        const double update = std::abs(next - x);
        // Damp when the update grows; plain iteration converges geometrically
        // at physical parameter scales.
        const cplx x_new = (update > prev_update) ? 0.5 * (x + next) : next;
        prev_update = update;
        out.iterations = k + 1;
        out.residual = std::abs(x_new - rhs(x_new));
        x = x_new;
        if (out.residual <= tol) {
            out.chi_m = x;
            // A value near the negative real axis makes the square-root
            // branch choice unstable under parameter sweeps.
            const cplx one_plus = 1.0 + x;
            out.branch_cut_warning =
                one_plus.real() < 0.0 &&
                std::abs(one_plus.imag()) < 1e-9 * std::max(1.0, std::abs(one_plus));
            return out;
        }
    }
    throw numerical_error("chi_m_fixed_point: no convergence after " +
                          std::to_string(max_iter) + " iterations; last iterate (" +
                          std::to_string(x.real()) + ", " + std::to_string(x.imag()) +
                          "), residual " + std::to_string(out.residual));
}

SusceptibilityResult susceptibility_at(double omega, const AtomParams& atom,
                                       cplx omega_c, double d_omega) {
    SusceptibilityResult out;
    out.omega = omega;
    out.chi = chi_steady(omega, atom, omega_c);
    auto [n, vg] = refractive_index_and_vg(omega, atom, omega_c, d_omega);
    out.n = n;
    out.v_g_dispersive = vg;
    out.chi_e = chi_e(atom, omega_c);
    out.chi_m = chi_m_fixed_point(atom, omega_c).chi_m;
    out.eps_r = 1.0 + out.chi_e;
    out.mu_r = 1.0 + out.chi_m;
    return out;
}

} // namespace slowlight
