#ifndef SLOWLIGHT_DETAIL_QUADRATURE_HPP
#define SLOWLIGHT_DETAIL_QUADRATURE_HPP

#include <complex>
#include <functional>

namespace slowlight::detail {

using cplx = std::complex<double>;

// Adaptive Gauss-Kronrod 7(15) on [a, b] for a complex integrand.
// Bisects the worst interval until the accumulated error estimate drops
// below max(abs_tol, rel_tol * |I|). Throws numerical_error carrying the
// worst subinterval when the interval budget is exhausted.
cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                  double rel_tol = 1e-10, double abs_tol = 1e-300,
                  int max_intervals = 4000);

} // namespace slowlight::detail

#endif
