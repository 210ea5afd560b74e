// Independent reference implementations used only by the test suite.
// Deliberately naive: generic matrix algebra where the library uses
// element-wise forms, brute-force scans where it uses closed formulas,
// fixed-step integration where it uses adaptive methods.

#ifndef SLOWLIGHT_TEST_ORACLES_HPP
#define SLOWLIGHT_TEST_ORACLES_HPP

#include <array>
#include <complex>
#include <functional>
#include <utility>

#include "slowlight/bloch.hpp"
#include "slowlight/params.hpp"

namespace oracles {

using slowlight::AtomParams;
using slowlight::cplx;
using slowlight::DensityMatrix3;

using Matrix3 = std::array<std::array<cplx, 3>, 3>;

Matrix3 to_matrix(const DensityMatrix3& rho);

// Bloch tangent through the generic commutator route: build the 3x3
// Hamiltonian (diagonal detuning frame, off-diagonal -Omega/2), compute
// -i[H, rho] with full matrix products, then apply the element-wise decay.
DensityMatrix3 bloch_rhs_matrix_form(const DensityMatrix3& rho,
                                     const AtomParams& atom, cplx omega_p,
                                     cplx omega_c);

// Composite Simpson integration of a complex integrand at fixed step count.
cplx simpson(const std::function<cplx(double)>& f, double a, double b, int n);

// Ground-state coherence integral evaluated by brute-force Simpson at
// `n` panels, same shifted kernel as the library.
cplx rho_bc_simpson(const std::function<cplx(double)>& omega_p, double lambda,
                    cplx omega_c, double gamma_ab, cplx rho_bc0, double t, int n);

// All real roots of a monic quadratic x^2 + b x + c located by sign-change
// bisection over a bracketing scan; no closed formula.
std::pair<double, double> quadratic_roots_scan(double b, double c, double lo,
                                               double hi);

// Analytic frequency derivative of the steady susceptibility.
cplx dchi_domega_analytic(double omega, const AtomParams& atom, cplx omega_c);

// Undamped fixed-point iteration for the implicit magnetic susceptibility.
cplx chi_m_plain_iteration(const AtomParams& atom, cplx omega_c, int iters);

// tr(rho^2) and tr(rho^3) through full matrix products; conserved under
// unitary evolution together with the trace.
double trace_rho2(const DensityMatrix3& rho);
double trace_rho3(const DensityMatrix3& rho);

} // namespace oracles

#endif
