#include "slowlight/adiabatic.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "detail/quadrature.hpp"
#include "slowlight/errors.hpp"

namespace slowlight {

namespace {

void require_coupling(cplx omega_c, const char* where) {
    if (omega_c == cplx(0.0, 0.0)) {
        throw numerical_error(std::string(where) +
                              ": Omega_c = 0 (division by the coupling Rabi "
                              "frequency; the EIT regime requires Omega_c != 0)");
    }
}

// (e^x - 1)/x with the removable singularity at x = 0 filled in.
cplx phi1(cplx x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        return 1.0 + x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0)));
    }
    return (std::exp(x) - 1.0) / x;
}

// (e^{eta t} - e^{-lambda t}) / (eta + lambda), stable for eta -> -lambda.
cplx decay_difference(cplx eta, double lambda, double t) {
    return std::exp(-lambda * t) * t * phi1((eta + lambda) * t);
}

} // namespace

cplx rho_cb_from_rho_ab(cplx rho_ab, cplx omega_p, cplx omega_c, double gamma_ab) {
    require_coupling(omega_c, "rho_cb_from_rho_ab");
    return -(omega_p + cplx(0.0, 2.0 * gamma_ab) * rho_ab) / omega_c;
}

cplx rho_ba_from_rho_bc(cplx rho_bc, cplx rho_bc_dot, cplx omega_c, double gamma_bc) {
    require_coupling(omega_c, "rho_ba_from_rho_bc");
    return cplx(0.0, 2.0) * (rho_bc_dot + gamma_bc * rho_bc) / omega_c;
}

cplx rho_bc_quadrature(const field_fn& omega_p, const DerivedRates& rates,
                       cplx omega_c, double gamma_ab, cplx rho_bc0, double t,
                       double rel_tol) {
    if (t < 0.0) throw std::invalid_argument("rho_bc_quadrature: t must be >= 0");
    const double lambda = rates.lambda;
    const cplx homogeneous = rho_bc0 * std::exp(-lambda * t);
    if (t == 0.0) return rho_bc0;

    const cplx drive_scale = omega_c / (4.0 * gamma_ab);
    auto integrand = [&](double tp) {
        return -std::conj(omega_p(tp)) * drive_scale * std::exp(lambda * (tp - t));
    };
    return detail::integrate_gk(integrand, 0.0, t, rel_tol) + homogeneous;
}

namespace {

cplx driven_coherence_quadrature(const field_fn& omega_p, const field_fn& omega_p_dot,
                                 const DerivedRates& rates, double gamma_ab,
                                 double gamma_bc, cplx rho0, double t,
                                 double rel_tol, double fd_step, bool conjugated) {
    if (t < 0.0) throw std::invalid_argument("coherence quadrature: t must be >= 0");
    const double lambda = rates.lambda;
    if (t == 0.0) return rho0;

    field_fn dot = omega_p_dot;
    if (!dot) {
        if (!(fd_step > 0.0)) {
            throw std::invalid_argument(
                "coherence quadrature: no analytic probe derivative supplied and "
                "fd_step <= 0");
        }
        dot = central_difference(omega_p, fd_step);
    }

    // rho_ba uses [dOmega_p^*/dt + gamma_bc Omega_p^*] with prefactor -i/2;
    // rho_ab the conjugated bracket with prefactor +i/2.
    const cplx pref = conjugated ? cplx(0.0, 0.5 / gamma_ab) : cplx(0.0, -0.5 / gamma_ab);
    auto integrand = [&](double tp) {
        cplx bracket = dot(tp) + gamma_bc * omega_p(tp);
        if (!conjugated) bracket = std::conj(bracket);
        return pref * bracket * std::exp(lambda * (tp - t));
    };
    return detail::integrate_gk(integrand, 0.0, t, rel_tol) +
           rho0 * std::exp(-lambda * t);
}

} // namespace

cplx rho_ba_quadrature(const field_fn& omega_p, const field_fn& omega_p_dot,
                       const DerivedRates& rates, double gamma_ab, double gamma_bc,
                       cplx rho_ba0, double t, double rel_tol, double fd_step) {
    return driven_coherence_quadrature(omega_p, omega_p_dot, rates, gamma_ab,
                                       gamma_bc, rho_ba0, t, rel_tol, fd_step,
                                       /*conjugated=*/false);
}

cplx rho_ab_quadrature(const field_fn& omega_p, const field_fn& omega_p_dot,
                       const DerivedRates& rates, double gamma_ab, double gamma_bc,
                       cplx rho_ab0, double t, double rel_tol, double fd_step) {
    return driven_coherence_quadrature(omega_p, omega_p_dot, rates, gamma_ab,
                                       gamma_bc, rho_ab0, t, rel_tol, fd_step,
                                       /*conjugated=*/true);
}

CoherenceSolution explicit_coherences(const ProbeModeCoefficients& mode,
                                      cplx amp_plus, cplx amp_minus,
                                      const std::array<double, 3>& position,
                                      const DerivedRates& rates,
                                      const AtomParams& atom, cplx omega_c,
                                      cplx rho_bc0, cplx rho_ba0,
                                      std::span<const double> times) {
    const double lambda = rates.lambda;
    const double kr = mode.k_hat_p[0] * position[0] + mode.k_hat_p[1] * position[1] +
                      mode.k_hat_p[2] * position[2];
    const double shape = std::exp(mode.sigma * kr);
    const cplx amp_p = amp_plus * shape;  // Omega_p+(r)
    const cplx amp_m = amp_minus * shape; // Omega_p-(r)

    const cplx bc_pref = -std::conj(omega_c) / (4.0 * atom.gamma_ab);
    const cplx ba_pref = cplx(0.0, -0.5 / atom.gamma_ab); // 1/(2i gamma_ab)

    CoherenceSolution out;
    out.method = CoherenceMethod::closed_form;
    out.times.assign(times.begin(), times.end());
    out.rho_bc.reserve(times.size());
    out.rho_ba.reserve(times.size());
    out.rho_ab.reserve(times.size());

    for (double t : times) {
        const cplx kp = decay_difference(mode.eta_plus, lambda, t);
        const cplx km = decay_difference(mode.eta_minus, lambda, t);
        const double decay = std::exp(-lambda * t);

        const cplx bc = bc_pref * (std::conj(amp_p) * kp + std::conj(amp_m) * km) +
                        rho_bc0 * decay;
        const cplx ba = ba_pref * ((mode.eta_plus + atom.gamma_bc) * std::conj(amp_p) * kp +
                                   (mode.eta_minus + atom.gamma_bc) * std::conj(amp_m) * km) +
                        rho_ba0 * decay;
        out.rho_bc.push_back(bc);
        out.rho_ba.push_back(ba);
        out.rho_ab.push_back(std::conj(ba));
    }
    return out;
}

cplx rho_ba_longtime(cplx omega_p_plus, const DerivedRates& rates, double gamma_ab,
                     double gamma_bc) {
    // gamma_ab gamma_bc + |Omega_c|^2/4 == gamma_ab * lambda
    const double denom = gamma_ab * rates.lambda;
    return cplx(0.0, -0.5) * (gamma_bc / denom) * std::conj(omega_p_plus);
}

cplx chi_resonant(const AtomParams& atom, const FieldParams& field) {
    const double denom =
        atom.gamma_ab * atom.gamma_bc + 0.25 * std::norm(field.omega_c_rabi);
    return atom.kappa * cplx(0.0, atom.gamma_bc) / denom;
}

field_fn central_difference(field_fn f, double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("central_difference: step must be > 0");
    }
    return [f = std::move(f), h](double t) {
        return (-f(t + 2 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2 * h)) /
               (12.0 * h);
    };
}

} // namespace slowlight
