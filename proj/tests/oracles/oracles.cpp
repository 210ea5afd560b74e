#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "slowlight/susceptibility.hpp"

namespace oracles {

namespace {

Matrix3 matmul(const Matrix3& a, const Matrix3& b) {
    Matrix3 r{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            cplx s(0.0, 0.0);
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            r[i][j] = s;
        }
    }
    return r;
}

} // namespace

Matrix3 to_matrix(const DensityMatrix3& rho) {
    Matrix3 m{};
    m[0][0] = rho.aa;
    m[1][1] = rho.bb;
    m[2][2] = rho.cc;
    m[0][1] = rho.ab;
    m[0][2] = rho.ac;
    m[1][2] = rho.bc;
    m[1][0] = std::conj(rho.ab);
    m[2][0] = std::conj(rho.ac);
    m[2][1] = std::conj(rho.bc);
    return m;
}

DensityMatrix3 bloch_rhs_matrix_form(const DensityMatrix3& rho,
                                     const AtomParams& atom, cplx omega_p,
                                     cplx omega_c) {
    // Levels ordered (a, b, c). Diagonal entries chosen so the commutator
    // reproduces the rotating-frame detuning terms; probe couples a-b,
    // coupling field a-c.
    Matrix3 h{};
    h[0][0] = 0.0;
    h[1][1] = -atom.delta_ab;
    h[2][2] = -atom.delta_ac;
    h[0][1] = -0.5 * omega_p;
    h[1][0] = -0.5 * std::conj(omega_p);
    h[0][2] = -0.5 * omega_c;
    h[2][0] = -0.5 * std::conj(omega_c);

    const Matrix3 m = to_matrix(rho);
    const Matrix3 hm = matmul(h, m);
    const Matrix3 mh = matmul(m, h);

    Matrix3 d{};
    const cplx minus_i(0.0, -1.0);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) d[i][j] = minus_i * (hm[i][j] - mh[i][j]);
    }
    // Element-wise decay with the independent rates.
    d[0][0] -= atom.gamma_aa * m[0][0];
    d[1][1] -= atom.gamma_bb * m[1][1];
    d[2][2] -= atom.gamma_cc * m[2][2];
    d[0][1] -= atom.gamma_ab * m[0][1];
    d[0][2] -= atom.gamma_ac * m[0][2];
    d[1][2] -= atom.gamma_bc * m[1][2];

    DensityMatrix3 out;
    out.aa = d[0][0].real();
    out.bb = d[1][1].real();
    out.cc = d[2][2].real();
    out.ab = d[0][1];
    out.ac = d[0][2];
    out.bc = d[1][2];
    return out;
}

cplx simpson(const std::function<cplx(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    cplx s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
    }
    return s * (h / 3.0);
}

cplx rho_bc_simpson(const std::function<cplx(double)>& omega_p, double lambda,
                    cplx omega_c, double gamma_ab, cplx rho_bc0, double t, int n) {
    auto integrand = [&](double tp) {
        return -std::conj(omega_p(tp)) * omega_c / (4.0 * gamma_ab) *
               std::exp(lambda * (tp - t));
    };
    return simpson(integrand, 0.0, t, n) + rho_bc0 * std::exp(-lambda * t);
}

std::pair<double, double> quadratic_roots_scan(double b, double c, double lo,
                                               double hi) {
    auto f = [&](double x) { return x * x + b * x + c; };
    const int grid = 400000;
    double roots[2] = {0.0, 0.0};
    int found = 0;
    double prev_x = lo, prev_f = f(lo);
    for (int i = 1; i <= grid && found < 2; ++i) {
        const double x = lo + (hi - lo) * i / grid;
        const double fx = f(x);
        if (prev_f == 0.0) {
            roots[found++] = prev_x;
        } else if (prev_f * fx < 0.0) {
            double a0 = prev_x, b0 = x;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a0 + b0);
                if (f(a0) * f(mid) <= 0.0) {
                    b0 = mid;
                } else {
                    a0 = mid;
                }
            }
            roots[found++] = 0.5 * (a0 + b0);
        }
        prev_x = x;
        prev_f = fx;
    }
    if (found < 2) throw std::runtime_error("quadratic_roots_scan: roots not bracketed");
    return {roots[0], roots[1]};
}

cplx dchi_domega_analytic(double omega, const AtomParams& atom, cplx omega_c) {
    const cplx u(omega - atom.omega_ab, atom.gamma_bc);
    const cplx w(omega - atom.omega_ab, atom.gamma_ab);
    const double s = 0.25 * std::norm(omega_c);
    const cplx denom = u * w - s;
    return atom.kappa * (s + u * u) / (denom * denom);
}

cplx chi_m_plain_iteration(const AtomParams& atom, cplx omega_c, int iters) {
    const cplx xe = slowlight::chi_e(atom, omega_c);
    const cplx gbc(atom.gamma_bc, atom.delta_ab - atom.delta_ac);
    const cplx drive = atom.dipole_ratio * cplx(0.0, 0.5) * std::conj(omega_c) / gbc * xe;
    cplx x(0.0, 0.0);
    for (int i = 0; i < iters; ++i) {
        x = drive * std::sqrt((1.0 + x) / (1.0 + xe));
    }
    return x;
}

double trace_rho2(const DensityMatrix3& rho) {
    const Matrix3 m = to_matrix(rho);
    const Matrix3 m2 = matmul(m, m);
    return (m2[0][0] + m2[1][1] + m2[2][2]).real();
}

double trace_rho3(const DensityMatrix3& rho) {
    const Matrix3 m = to_matrix(rho);
    const Matrix3 m3 = matmul(matmul(m, m), m);
    return (m3[0][0] + m3[1][1] + m3[2][2]).real();
}

} // namespace oracles
