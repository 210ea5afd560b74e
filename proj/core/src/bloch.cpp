#include "slowlight/bloch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "slowlight/errors.hpp"

namespace slowlight {

bool DensityMatrix3::physical(double slack) const {
    auto in_range = [slack](double p) { return p >= -slack && p <= 1.0 + slack; };
    return in_range(aa) && in_range(bb) && in_range(cc) && trace() <= 1.0 + slack;
}

DensityMatrix3& DensityMatrix3::operator+=(const DensityMatrix3& o) {
    aa += o.aa;
    bb += o.bb;
    cc += o.cc;
    ab += o.ab;
    ac += o.ac;
    bc += o.bc;
    return *this;
}

DensityMatrix3 operator*(double s, const DensityMatrix3& m) {
    DensityMatrix3 r;
    r.aa = s * m.aa;
    r.bb = s * m.bb;
    r.cc = s * m.cc;
    r.ab = s * m.ab;
    r.ac = s * m.ac;
    r.bc = s * m.bc;
    return r;
}

DensityMatrix3 bloch_rhs(const DensityMatrix3& rho, const AtomParams& atom,
                         cplx omega_p, cplx omega_c) {
    const cplx i_half(0.0, 0.5);
    const cplx ba = std::conj(rho.ab);
    const cplx ca = std::conj(rho.ac);
    const cplx cb = std::conj(rho.bc);

    DensityMatrix3 d;
    d.aa = std::imag(std::conj(omega_p) * rho.ab + std::conj(omega_c) * rho.ac) -
           atom.gamma_aa * rho.aa;
    d.bb = std::imag(omega_p * ba) - atom.gamma_bb * rho.bb;
    d.cc = std::imag(omega_c * ca) - atom.gamma_cc * rho.cc;
    d.ab = cplx(0.0, -atom.delta_ab) * rho.ab +
           i_half * (omega_c * cb + omega_p * (rho.bb - rho.aa)) -
           atom.gamma_ab * rho.ab;
    d.ac = cplx(0.0, -atom.delta_ac) * rho.ac +
           i_half * (omega_p * rho.bc + omega_c * (rho.cc - rho.aa)) -
           atom.gamma_ac * rho.ac;
    d.bc = cplx(0.0, -(atom.delta_ac - atom.delta_ab)) * rho.bc +
           i_half * (std::conj(omega_p) * rho.ac - omega_c * ba) -
           atom.gamma_bc * rho.bc;
    return d;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat, the embedded error weights (e2 = 0).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

std::array<double, 9> flatten(const DensityMatrix3& m) {
    return {m.aa,           m.bb,           m.cc,
            m.ab.real(),    m.ab.imag(),    m.ac.real(),
            m.ac.imag(),    m.bc.real(),    m.bc.imag()};
}

double error_norm(const DensityMatrix3& err, const DensityMatrix3& y0,
                  const DensityMatrix3& y1, double tol) {
    const auto e = flatten(err);
    const auto u = flatten(y0);
    const auto v = flatten(y1);
    double m = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double scale = tol * (1.0 + std::max(std::abs(u[i]), std::abs(v[i])));
        m = std::max(m, std::abs(e[i]) / scale);
    }
    return m;
}

// Cubic Hermite interpolation on an accepted step.
DensityMatrix3 hermite(const DensityMatrix3& y0, const DensityMatrix3& f0,
                       const DensityMatrix3& y1, const DensityMatrix3& f1,
                       double h, double theta) {
    const double t = theta, t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    DensityMatrix3 r = h00 * y0;
    r += (h10 * h) * f0;
    r += h01 * y1;
    r += (h11 * h) * f1;
    return r;
}

} // namespace

BlochTrajectory integrate_bloch(const DensityMatrix3& rho0, const AtomParams& atom,
                                const field_fn& omega_p, const field_fn& omega_c,
                                std::pair<double, double> t_span, double tol,
                                std::span<const double> sample_times) {
    atom.validate();
    const auto [t0, t1] = t_span;
    if (!(t0 < t1)) {
        throw std::invalid_argument("integrate_bloch: t_span.start must be < t_span.end");
    }
    if (!(tol >= 1e-12 && tol <= 1e-3)) {
        throw std::invalid_argument("integrate_bloch: tol must lie in [1e-12, 1e-3]");
    }
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < t0 || sample_times[i] > t1 ||
            (i > 0 && sample_times[i] <= sample_times[i - 1])) {
            throw std::invalid_argument(
                "integrate_bloch: sample_times must be strictly increasing within t_span");
        }
    }

    BlochTrajectory traj;
    const bool record_steps = sample_times.empty();
    std::size_t next_sample = 0;

    auto rhs = [&](double t, const DensityMatrix3& y) {
        return bloch_rhs(y, atom, omega_p(t), omega_c(t));
    };

    double t = t0;
    DensityMatrix3 y = rho0;
    DensityMatrix3 k1 = rhs(t, y);
    const double trace0 = y.trace();

    if (record_steps) {
        traj.times.push_back(t);
        traj.states.push_back(y);
    } else if (sample_times[0] == t0) {
        traj.times.push_back(t0);
        traj.states.push_back(y);
        ++next_sample;
    }

    // Initial step from the magnitude of the state and its derivative.
    double h;
    {
        double d0 = 0.0, d1 = 0.0;
        for (double v : flatten(y)) d0 = std::max(d0, std::abs(v));
        for (double v : flatten(k1)) d1 = std::max(d1, std::abs(v));
        h = (d1 > 0.0) ? 0.01 * (d0 + 1.0) / d1 : (t1 - t0) / 100.0;
        h = std::min(h, (t1 - t0) / 10.0);
    }

    constexpr double safety = 0.9, min_factor = 0.2, max_factor = 6.0;
    constexpr double pi_alpha = 0.7 / 5.0, pi_beta = 0.4 / 5.0;
    double err_prev = 1.0;
    constexpr std::size_t max_steps = 50'000'000;

    for (std::size_t step = 0;; ++step) {
        if (step >= max_steps) {
            throw numerical_error("integrate_bloch: step budget exhausted at t = " +
                                  std::to_string(t));
        }
        if (t >= t1) break;
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            throw numerical_error(
                "integrate_bloch: step size underflow (stiffness?) at t = " +
                std::to_string(t));
        }
        const bool last = t + h >= t1;
        if (last) h = t1 - t;

        DensityMatrix3 s = y;
        s += (h * a21) * k1;
        const DensityMatrix3 k2 = rhs(t + c2 * h, s);

        s = y;
        s += (h * a31) * k1;
        s += (h * a32) * k2;
        const DensityMatrix3 k3 = rhs(t + c3 * h, s);

        s = y;
        s += (h * a41) * k1;
        s += (h * a42) * k2;
        s += (h * a43) * k3;
        const DensityMatrix3 k4 = rhs(t + c4 * h, s);

        s = y;
        s += (h * a51) * k1;
        s += (h * a52) * k2;
        s += (h * a53) * k3;
        s += (h * a54) * k4;
        const DensityMatrix3 k5 = rhs(t + c5 * h, s);

        s = y;
        s += (h * a61) * k1;
        s += (h * a62) * k2;
        s += (h * a63) * k3;
        s += (h * a64) * k4;
        s += (h * a65) * k5;
        const DensityMatrix3 k6 = rhs(t + h, s);

        DensityMatrix3 ynew = y;
        ynew += (h * b1) * k1;
        ynew += (h * b3) * k3;
        ynew += (h * b4) * k4;
        ynew += (h * b5) * k5;
        ynew += (h * b6) * k6;
        const DensityMatrix3 k7 = rhs(t + h, ynew); // FSAL

        DensityMatrix3 errv = (h * e1) * k1;
        errv += (h * e3) * k3;
        errv += (h * e4) * k4;
        errv += (h * e5) * k5;
        errv += (h * e6) * k6;
        errv += (h * e7) * k7;

        const double err = error_norm(errv, y, ynew, tol);
        if (err <= 1.0) {
            const double t_new = t + h;
            // Dense output for all requested samples inside this step.
            while (next_sample < sample_times.size() &&
                   sample_times[next_sample] <= t_new + 1e-15 * std::abs(t_new)) {
                const double ts = std::min(sample_times[next_sample], t_new);
                const double theta = (ts - t) / h;
                traj.times.push_back(sample_times[next_sample]);
                traj.states.push_back(hermite(y, k1, ynew, k7, h, theta));
                ++next_sample;
            }
            t = t_new;
            y = ynew;
            k1 = k7;
            ++traj.accepted_steps;
            if (record_steps) {
                traj.times.push_back(t);
                traj.states.push_back(y);
            }
            if (!y.physical(1e-6) || y.trace() > trace0 + 1e-6) {
                throw numerical_error(
                    "integrate_bloch: density-matrix invariant violated beyond 1e-6 "
                    "at t = " + std::to_string(t) + " (integrator bug)");
            }
            const double grow = safety * std::pow(std::max(err, 1e-10), -pi_alpha) *
                                std::pow(err_prev, pi_beta);
            h *= std::clamp(grow, min_factor, max_factor);
            err_prev = std::max(err, 1e-10);
        } else {
            ++traj.rejected_steps;
            h *= std::clamp(safety * std::pow(err, -0.2), min_factor, 1.0);
        }
    }

    return traj;
}

double ReducedResiduals::max_relative_algebraic() const {
    const double tiny = 1e-300;
    double m = std::abs(r_aa) / (s_aa + tiny);
    m = std::max(m, std::abs(r_ab) / (s_ab + tiny));
    m = std::max(m, std::abs(r_ac) / (s_ac + tiny));
    m = std::max(m, std::abs(r_cc) / (s_cc + tiny));
    return m;
}

ReducedResiduals reduced_resonant_rhs(const DensityMatrix3& rho,
                                      const AtomParams& atom, cplx omega_p,
                                      cplx omega_c) {
    if (atom.delta_ab != 0.0 || atom.delta_ac != 0.0) {
        throw std::invalid_argument(
            "reduced_resonant_rhs: requires zero detunings (resonant reduction)");
    }
    const cplx i_half(0.0, 0.5);
    const cplx ba = std::conj(rho.ab);
    const cplx ca = std::conj(rho.ac);
    const cplx cb = std::conj(rho.bc);

    ReducedResiduals r;
    r.r_aa = std::imag(std::conj(omega_p) * rho.ab + std::conj(omega_c) * rho.ac) -
             atom.gamma_aa * rho.aa;
    r.s_aa = std::abs(omega_p * rho.ab) + std::abs(omega_c * rho.ac) +
             std::abs(atom.gamma_aa * rho.aa);

    r.r_ab = i_half * (omega_c * cb + omega_p * (rho.bb - rho.aa)) -
             atom.gamma_ab * rho.ab;
    r.s_ab = 0.5 * std::abs(omega_c * cb) + 0.5 * std::abs(omega_p * (rho.bb - rho.aa)) +
             std::abs(atom.gamma_ab * rho.ab);

    r.r_ac = i_half * (omega_p * rho.bc + omega_c * (rho.cc - rho.aa)) -
             atom.gamma_ac * rho.ac;
    r.s_ac = 0.5 * std::abs(omega_p * rho.bc) + 0.5 * std::abs(omega_c * (rho.cc - rho.aa)) +
             std::abs(atom.gamma_ac * rho.ac);

    r.r_cc = std::imag(omega_c * ca) - atom.gamma_cc * rho.cc;
    r.s_cc = std::abs(omega_c * ca) + std::abs(atom.gamma_cc * rho.cc);

    r.drho_bb = std::imag(omega_p * ba) - atom.gamma_bb * rho.bb;
    r.drho_bc = i_half * (std::conj(omega_p) * rho.ac - omega_c * ba) -
                atom.gamma_bc * rho.bc;
    return r;
}

double population_ratio_check(const BlochTrajectory& traj, const AtomParams& atom) {
    if (traj.times.empty()) return 0.0;
    const double t_mid = 0.5 * (traj.times.front() + traj.times.back());
    const double eps = 1e-30;
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] < t_mid) continue;
        const auto& s = traj.states[i];
        const double num = std::abs(atom.gamma_aa * s.aa + atom.gamma_cc * s.cc);
        const double den =
            atom.gamma_aa * std::abs(s.aa) + atom.gamma_cc * std::abs(s.cc) + eps;
        worst = std::max(worst, num / den);
    }
    return worst;
}

} // namespace slowlight
