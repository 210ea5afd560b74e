#ifndef SLOWLIGHT_PROBE_MODES_HPP
#define SLOWLIGHT_PROBE_MODES_HPP

#include <array>
#include <functional>
#include <span>
#include <utility>

#include "slowlight/params.hpp"

namespace slowlight {

// Scalars defining the analytic two-mode probe solution
//   Omega_p(r, t) = sum_pm amp_pm exp(sigma k.(r - k v_pm t)),  v_pm = -eta_pm/sigma.
// zeta/varsigma are real for real inputs but stored complex so coupling-field
// phases can flow through unchanged in detuned extensions.
struct ProbeModeCoefficients {
    cplx zeta{0.0, 0.0};      // damping coefficient of the envelope ODE
    cplx varsigma{0.0, 0.0};  // restoring coefficient of the envelope ODE
    cplx eta_plus{0.0, 0.0};
    cplx eta_minus{0.0, 0.0};
    double sigma = 0.0;
    double v_g = 0.0;         // selected (slow, subluminal) group velocity
    cplx v_g_plus{0.0, 0.0};  // both quadratic roots, possibly complex
    cplx v_g_minus{0.0, 0.0};
    std::array<double, 3> k_hat_p{1.0, 0.0, 0.0};
    char vg_eta_branch = '?'; // which eta branch satisfies -eta/sigma = v_g
    bool growing_mode = false; // Re eta_plus > 0 (diagnostic, not an error)
};

// Envelope ODE coefficients at a prescribed constant group velocity:
//   zeta = lambda + beta / (1 - c/v_g),  varsigma = beta gamma_bc / (1 - c/v_g).
// v_g = c is a pole of the parametrization, v_g = 0 undefined.
std::pair<cplx, cplx> envelope_coefficients(const DerivedRates& rates,
                                            const AtomParams& atom, double v_g);

// Roots of x^2 + zeta x + varsigma = 0, stable quadratic evaluation
// (sign-matched branch for the large root, product identity for the other).
// eta_plus carries the +sqrt branch of the defining formula.
std::pair<cplx, cplx> characteristic_roots(cplx zeta, cplx varsigma);

struct GroupVelocityRoots {
    cplx v_plus{0.0, 0.0};
    cplx v_minus{0.0, 0.0};
    double discriminant = 0.0;
    bool real_roots = true; // false flags the complex-root regime warning
};

// Roots of the group-velocity quadratic
//   v^2 - ((beta + lambda + sigma c)/sigma) v + (lambda sigma c + beta gamma_bc)/sigma^2 = 0.
GroupVelocityRoots group_velocity_roots(const DerivedRates& rates,
                                        const AtomParams& atom, double sigma);

// Retains the smaller positive real root below c. Throws numerical_error
// when no real root lies strictly inside (0, c).
double select_group_velocity(cplx v_plus, cplx v_minus, double c);

struct SlowLightApprox {
    double intermediate = 0.0;    // (lambda sigma c + beta gamma_bc) / (sigma (beta + lambda + sigma c))
    double final_form = 0.0;      // |Omega_c|^2 c / (2 omega_p kappa + |Omega_c|^2)
    double dominance_ratio = 0.0; // (beta+lambda+sigma c)^2 / (4 (lambda sigma c + beta gamma_bc))
    bool regime_ok = false;       // dominance_ratio >= 25
};

// Slow-light asymptotics of the subluminal root. Never throws; the regime
// flag is the warning channel.
SlowLightApprox slow_light_vg(const DerivedRates& rates, const AtomParams& atom,
                              const FieldParams& field);

// Assembles the full mode description for given parameters: solves the
// quadratic, selects v_g, evaluates zeta/varsigma at it, takes the
// characteristic roots and records which branch reproduces v_g.
ProbeModeCoefficients solve_probe_mode(const DerivedRates& rates,
                                       const AtomParams& atom,
                                       const FieldParams& field);

// Two-mode envelope value at (r, t), evaluated through the factored
// travelling-wave form exp(sigma k.(r - k (-eta/sigma) t)).
cplx mode_envelope(const ProbeModeCoefficients& mode, cplx amp_plus, cplx amp_minus,
                   const std::array<double, 3>& r, double t);

// Complex scalar field over space-time, plus optional analytic derivatives.
using envelope_field = std::function<cplx(const std::array<double, 3>&, double)>;

struct SpaceTimePoint {
    std::array<double, 3> r{0.0, 0.0, 0.0};
    double t = 0.0;
};

// Residual of the transport identity k.grad(Omega) = -(1/v_g) dOmega/dt for
// an envelope of the form f(r - k v_g t): max over the sample points of
//   |k.grad + (1/v_g) d/dt| / max(|d/dt|/v_g, |k.grad|).
// Derivatives are 4th-order central differences with steps (dr, dt) unless
// analytic ones are supplied.
double transport_identity_check(const envelope_field& field, double v_g,
                                const std::array<double, 3>& k_hat,
                                std::span<const SpaceTimePoint> points,
                                double dr, double dt,
                                const envelope_field* grad_along_k = nullptr,
                                const envelope_field* time_derivative = nullptr);

} // namespace slowlight

#endif
