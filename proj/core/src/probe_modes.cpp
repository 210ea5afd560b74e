#include "slowlight/probe_modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

#include "slowlight/errors.hpp"

namespace slowlight {

namespace {

// Stable roots of x^2 + b x + c = 0: the larger-magnitude root through the
// sign-matched branch, the other via the product identity c = x1 x2.
std::pair<cplx, cplx> stable_quadratic(cplx b, cplx c) {
    const cplx sq = std::sqrt(b * b - 4.0 * c);
    // Add the square root constructively to b to avoid cancellation.
    const double align = b.real() * sq.real() + b.imag() * sq.imag();
    const cplx q = (align >= 0.0) ? -0.5 * (b + sq) : -0.5 * (b - sq);
    if (q == cplx(0.0, 0.0)) {
        return {cplx(0.0, 0.0), cplx(0.0, 0.0)}; // b = c = 0
    }
    return {q, c / q};
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

} // namespace

std::pair<cplx, cplx> envelope_coefficients(const DerivedRates& rates,
                                            const AtomParams& atom, double v_g) {
    if (v_g == 0.0) {
        throw numerical_error("envelope_coefficients: v_g = 0 is undefined");
    }
    if (v_g == atom.c) {
        throw numerical_error(
            "envelope_coefficients: v_g = c is a pole of the 1 - c/v_g factor");
    }
    const double f = 1.0 - atom.c / v_g;
    return {cplx(rates.lambda + rates.beta / f, 0.0),
            cplx(rates.beta * atom.gamma_bc / f, 0.0)};
}

std::pair<cplx, cplx> characteristic_roots(cplx zeta, cplx varsigma) {
    auto [r1, r2] = stable_quadratic(zeta, varsigma);
    // Label the branches by the defining formula: eta_plus carries +sqrt.
    // For real coefficients this makes eta_plus the larger root.
    const cplx sq = std::sqrt(zeta * zeta - 4.0 * varsigma);
    const cplx plus = 0.5 * (-zeta + sq);
    if (std::abs(r1 - plus) <= std::abs(r2 - plus)) return {r1, r2};
    return {r2, r1};
}

GroupVelocityRoots group_velocity_roots(const DerivedRates& rates,
                                        const AtomParams& atom, double sigma) {
    if (sigma == 0.0) {
        throw std::invalid_argument("group_velocity_roots: sigma must be nonzero");
    }
    const double b = -(rates.beta + rates.lambda + sigma * atom.c) / sigma;
    const double c = (rates.lambda * sigma * atom.c + rates.beta * atom.gamma_bc) /
                     (sigma * sigma);
    auto [r1, r2] = stable_quadratic(cplx(b, 0.0), cplx(c, 0.0));

    GroupVelocityRoots out;
    out.discriminant = b * b - 4.0 * c;
    out.real_roots = out.discriminant >= 0.0;
    if (out.real_roots) {
        if (r1.real() < r2.real()) std::swap(r1, r2);
        out.v_plus = r1;
        out.v_minus = r2;
    } else {
        // Complex-conjugate pair; keep +i branch in v_plus.
        out.v_plus = (r1.imag() >= 0.0) ? r1 : r2;
        out.v_minus = std::conj(out.v_plus);
    }
    return out;
}

double select_group_velocity(cplx v_plus, cplx v_minus, double c) {
    constexpr double imag_slack = 0.0; // complex roots are rejected outright
    auto physical = [&](cplx v) {
        return std::abs(v.imag()) <= imag_slack && v.real() > 0.0 && v.real() < c;
    };
    const bool plus_ok = physical(v_plus);
    const bool minus_ok = physical(v_minus);
    if (!plus_ok && !minus_ok) {
        throw numerical_error(
            "select_group_velocity: no real group-velocity root strictly inside "
            "(0, c); the parameters admit no physical slow mode");
    }
    if (plus_ok && minus_ok) return std::min(v_plus.real(), v_minus.real());
    return plus_ok ? v_plus.real() : v_minus.real();
}

SlowLightApprox slow_light_vg(const DerivedRates& rates, const AtomParams& atom,
                              const FieldParams& field) {
    const double sigma = field.sigma;
    const double sum = rates.beta + rates.lambda + sigma * atom.c;
    const double prod = rates.lambda * sigma * atom.c + rates.beta * atom.gamma_bc;

    SlowLightApprox out;
    out.intermediate = (sigma != 0.0 && sum != 0.0) ? prod / (sigma * sum) : 0.0;
    const double oc2 = std::norm(field.omega_c_rabi);
    const double denom = 2.0 * atom.omega_p * atom.kappa + oc2;
    out.final_form = (denom > 0.0) ? oc2 * atom.c / denom : atom.c;
    out.dominance_ratio = (prod > 0.0) ? sum * sum / (4.0 * prod)
                                       : std::numeric_limits<double>::infinity();
    out.regime_ok = out.dominance_ratio >= 25.0;
    return out;
}

ProbeModeCoefficients solve_probe_mode(const DerivedRates& rates,
                                       const AtomParams& atom,
                                       const FieldParams& field) {
    field.validate();
    const auto roots = group_velocity_roots(rates, atom, field.sigma);
    const double v_g = select_group_velocity(roots.v_plus, roots.v_minus, atom.c);

    ProbeModeCoefficients mode;
    mode.sigma = field.sigma;
    mode.k_hat_p = field.k_hat_p;
    mode.v_g = v_g;
    mode.v_g_plus = roots.v_plus;
    mode.v_g_minus = roots.v_minus;
    std::tie(mode.zeta, mode.varsigma) = envelope_coefficients(rates, atom, v_g);
    std::tie(mode.eta_plus, mode.eta_minus) =
        characteristic_roots(mode.zeta, mode.varsigma);

    // Measure which characteristic branch reproduces the selected velocity;
    // the labeling is not assumed.
    const double dp = std::abs(-mode.eta_plus / mode.sigma - v_g);
    const double dm = std::abs(-mode.eta_minus / mode.sigma - v_g);
    mode.vg_eta_branch = (dp <= dm) ? '+' : '-';
    mode.growing_mode = mode.eta_plus.real() > 0.0;
    return mode;
}

cplx mode_envelope(const ProbeModeCoefficients& mode, cplx amp_plus, cplx amp_minus,
                   const std::array<double, 3>& r, double t) {
    if (mode.sigma == 0.0) {
        throw std::invalid_argument("mode_envelope: sigma must be nonzero");
    }
    const double kr = dot3(mode.k_hat_p, r);
    // Factored travelling form: sigma k.(r - k (-eta/sigma) t), with k.k = 1.
    const cplx arg_p = mode.sigma * (kr - (-mode.eta_plus / mode.sigma) * t);
    const cplx arg_m = mode.sigma * (kr - (-mode.eta_minus / mode.sigma) * t);
    return amp_plus * std::exp(arg_p) + amp_minus * std::exp(arg_m);
}

double transport_identity_check(const envelope_field& field, double v_g,
                                const std::array<double, 3>& k_hat,
                                std::span<const SpaceTimePoint> points,
                                double dr, double dt,
                                const envelope_field* grad_along_k,
                                const envelope_field* time_derivative) {
    if (v_g == 0.0) {
        throw std::invalid_argument("transport_identity_check: v_g must be nonzero");
    }
    auto shift = [&](const std::array<double, 3>& r, double s) {
        return std::array<double, 3>{r[0] + s * k_hat[0], r[1] + s * k_hat[1],
                                     r[2] + s * k_hat[2]};
    };

    double worst = 0.0;
    for (const auto& p : points) {
        cplx ddir, ddt;
        if (grad_along_k) {
            ddir = (*grad_along_k)(p.r, p.t);
        } else {
            ddir = (-field(shift(p.r, 2 * dr), p.t) + 8.0 * field(shift(p.r, dr), p.t) -
                    8.0 * field(shift(p.r, -dr), p.t) + field(shift(p.r, -2 * dr), p.t)) /
                   (12.0 * dr);
        }
        if (time_derivative) {
            ddt = (*time_derivative)(p.r, p.t);
        } else {
            ddt = (-field(p.r, p.t + 2 * dt) + 8.0 * field(p.r, p.t + dt) -
                   8.0 * field(p.r, p.t - dt) + field(p.r, p.t - 2 * dt)) /
                  (12.0 * dt);
        }
        const double num = std::abs(ddir + ddt / v_g);
        const double scale =
            std::max(std::abs(ddt) / std::abs(v_g), std::abs(ddir)) + 1e-300;
        worst = std::max(worst, num / scale);
    }
    return worst;
}

} // namespace slowlight
