#ifndef SLOWLIGHT_ADIABATIC_HPP
#define SLOWLIGHT_ADIABATIC_HPP

#include <span>
#include <vector>

#include "slowlight/bloch.hpp"
#include "slowlight/params.hpp"
#include "slowlight/probe_modes.hpp"

namespace slowlight {

// How a coherence time series was produced.
enum class CoherenceMethod { quadrature, closed_form, long_time_limit };

struct CoherenceSolution {
    std::vector<double> times;
    std::vector<cplx> rho_bc;
    std::vector<cplx> rho_ba;
    std::vector<cplx> rho_ab; // conj of rho_ba for consistent inputs
    CoherenceMethod method = CoherenceMethod::closed_form;
};

// Algebraic link between the two coherences driven by the probe:
//   rho_cb = -(Omega_p + 2i gamma_ab rho_ab) / Omega_c.
// Throws numerical_error when Omega_c = 0 (outside the EIT regime the
// relation has no meaning).
cplx rho_cb_from_rho_ab(cplx rho_ab, cplx omega_p, cplx omega_c, double gamma_ab);

// rho_ba from the ground-state coherence and its time derivative:
//   rho_ba = 2i (d rho_bc/dt + gamma_bc rho_bc) / Omega_c.
cplx rho_ba_from_rho_bc(cplx rho_bc, cplx rho_bc_dot, cplx omega_c, double gamma_bc);

// Quadrature solution of the driven ground-state coherence ODE
//   d rho_bc/dt + lambda rho_bc + Omega_p^* Omega_c / (4 gamma_ab) = 0,
// with Omega_c constant:
//   rho_bc(t) = int_0^t -Omega_p^*(t') Omega_c/(4 gamma_ab) e^{lambda (t'-t)} dt'
//               + rho_bc(0) e^{-lambda t}.
// The kernel is evaluated in the shifted form e^{lambda (t'-t)} so large
// lambda t cannot overflow. Adaptive Gauss-Kronrod at `rel_tol`.
cplx rho_bc_quadrature(const field_fn& omega_p, const DerivedRates& rates,
                       cplx omega_c, double gamma_ab, cplx rho_bc0, double t,
                       double rel_tol = 1e-10);

// Quadrature solution for rho_ba:
//   rho_ba(t) = int_0^t -i/(2 gamma_ab) [dOmega_p^*/dt' + gamma_bc Omega_p^*(t')]
//               e^{lambda (t'-t)} dt' + rho_ba(0) e^{-lambda t}.
// The probe derivative is required: pass an analytic `omega_p_dot`, or pass
// an empty function together with fd_step > 0 to use a 4th-order central
// difference of `omega_p` (differentiating samples is the dominant error
// source, so the step is the caller's explicit choice).
cplx rho_ba_quadrature(const field_fn& omega_p, const field_fn& omega_p_dot,
                       const DerivedRates& rates, double gamma_ab, double gamma_bc,
                       cplx rho_ba0, double t, double rel_tol = 1e-10,
                       double fd_step = 0.0);

// Conjugate-kernel form for rho_ab (same integral with conjugated inputs):
//   rho_ab(t) = int_0^t +i/(2 gamma_ab) [dOmega_p/dt' + gamma_bc Omega_p(t')]
//               e^{lambda (t'-t)} dt' + rho_ab(0) e^{-lambda t}.
cplx rho_ab_quadrature(const field_fn& omega_p, const field_fn& omega_p_dot,
                       const DerivedRates& rates, double gamma_ab, double gamma_bc,
                       cplx rho_ab0, double t, double rel_tol = 1e-10,
                       double fd_step = 0.0);

// Closed-form coherences driven by the two-mode envelope
//   Omega_p(r, t) = sum_pm amp_pm e^{sigma k.r} e^{eta_pm t}:
//
//   rho_bc(t) = -(Omega_c^*/4 gamma_ab) sum_pm (eta_pm + lambda)^{-1}
//               Omega_pm^*(r) (e^{eta_pm t} - e^{-lambda t}) + rho_bc(0) e^{-lambda t}
//   rho_ba(t) = (1/2i gamma_ab) sum_pm (eta_pm + gamma_bc)(eta_pm + lambda)^{-1}
//               Omega_pm^*(r) (e^{eta_pm t} - e^{-lambda t}) + rho_ba(0) e^{-lambda t}
//
// The (e^{eta t} - e^{-lambda t})/(eta + lambda) factor has a removable
// singularity at eta = -lambda; it is evaluated through expm1 so the
// degenerate case smoothly becomes t e^{-lambda t}.
CoherenceSolution explicit_coherences(const ProbeModeCoefficients& mode,
                                      cplx amp_plus, cplx amp_minus,
                                      const std::array<double, 3>& position,
                                      const DerivedRates& rates,
                                      const AtomParams& atom, cplx omega_c,
                                      cplx rho_bc0, cplx rho_ba0,
                                      std::span<const double> times);

// Long-time limit of rho_ba for the surviving (slow) mode:
//   rho_ba -> -(i/2) gamma_bc / (gamma_ab gamma_bc + |Omega_c|^2/4) Omega_plus^*.
// Valid for t >> 1/lambda with |eta_plus| << lambda; the caller owns the
// regime check.
cplx rho_ba_longtime(cplx omega_p_plus, const DerivedRates& rates, double gamma_ab,
                     double gamma_bc);

// Resonant electric susceptibility of the adiabatic steady state:
//   chi(omega_p) = kappa i gamma_bc / (gamma_ab gamma_bc + |Omega_c|^2/4).
cplx chi_resonant(const AtomParams& atom, const FieldParams& field);

// 4th-order central difference of a field envelope; helper for callers
// without an analytic derivative.
field_fn central_difference(field_fn f, double h);

} // namespace slowlight

#endif
