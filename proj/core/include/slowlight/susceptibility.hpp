#ifndef SLOWLIGHT_SUSCEPTIBILITY_HPP
#define SLOWLIGHT_SUSCEPTIBILITY_HPP

#include <utility>

#include "slowlight/params.hpp"

namespace slowlight {

// Electromagnetic response at one probe frequency.
struct SusceptibilityResult {
    double omega = 0.0;
    cplx chi{0.0, 0.0};   // electric susceptibility of the probe transition
    cplx n{1.0, 0.0};     // sqrt(1 + chi), Re n >= 0 branch
    cplx chi_e{0.0, 0.0};
    cplx chi_m{0.0, 0.0};
    cplx eps_r{1.0, 0.0}; // 1 + chi_e
    cplx mu_r{1.0, 0.0};  // 1 + chi_m
    double v_g_dispersive = 0.0; // c / Re(n + omega dn/domega)
};

// Steady-state susceptibility of the probe at mode frequency omega:
//   chi(omega) = -kappa (D + i gamma_bc) /
//                [(D + i gamma_bc)(D + i gamma_ab) - |Omega_c|^2/4],  D = omega - omega_ab.
// Throws numerical_error when the denominator magnitude drops below 1e-30.
cplx chi_steady(double omega, const AtomParams& atom, cplx omega_c);

// Refractive index n = sqrt(1 + chi) (principal branch) and the dispersive
// group velocity c / Re(n + omega dn/domega), with dn/domega from a 4th-order
// central difference at step d_omega (choose d_omega << gamma_bc to resolve
// the transparency window; gamma_bc/100 is a good default).
std::pair<cplx, double> refractive_index_and_vg(double omega, const AtomParams& atom,
                                                cplx omega_c, double d_omega);

struct SteadyCoherences {
    cplx rho_ab{0.0, 0.0};
    cplx rho_cb{0.0, 0.0};
};

// Steady solution of the two-coherence system with
// Gamma_ab = gamma_ab + i delta_ab and Gamma_bc = gamma_bc + i (delta_ab - delta_ac):
//   rho_ab = i Omega_p Gamma_bc / (2 (Gamma_ab Gamma_bc + |Omega_c|^2/4))
//   rho_cb = -Omega_p Omega_c^* / (4 (Gamma_ab Gamma_bc + |Omega_c|^2/4))
SteadyCoherences steady_two_coherence(const AtomParams& atom, cplx omega_p,
                                      cplx omega_c);

// rho_cb = (i/2) [Omega_c^* / (gamma_bc + i(delta_ab - delta_ac))] rho_ab.
cplx rho_cb_ab_relation(cplx rho_ab, const AtomParams& atom, cplx omega_c);

// Electric polarizability from the steady coherences:
//   chi_e = i kappa Gamma_bc / (Gamma_ab Gamma_bc + |Omega_c|^2/4).
cplx chi_e(const AtomParams& atom, cplx omega_c);

struct ChiMResult {
    cplx chi_m{0.0, 0.0};
    int iterations = 0;
    double residual = 0.0;
    bool branch_cut_warning = false; // 1 + chi_m within 1e-9 of the negative real axis
};

// The magnetic susceptibility is implicit:
//   chi_m = r sqrt((1 + chi_m)/(1 + chi_e)) [(i/2) Omega_c^* / Gamma_bc] chi_e,
// with r = dipole_ratio (real positive phase convention). Solved by damped
// fixed-point iteration from chi_m = 0; throws numerical_error carrying the
// last iterate and residual on non-convergence. tol in [1e-14, 1e-6].
ChiMResult chi_m_fixed_point(const AtomParams& atom, cplx omega_c,
                             double tol = 1e-12, int max_iter = 200);

// Full response record at one frequency. chi_e/chi_m are the zero-detuning
// line-center values of the atom's steady response; chi/n/v_g follow the
// frequency argument.
SusceptibilityResult susceptibility_at(double omega, const AtomParams& atom,
                                       cplx omega_c, double d_omega);

} // namespace slowlight

#endif
