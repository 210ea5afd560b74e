#include "slowlight/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace slowlight {

namespace {

void require_nonneg(double v, const char* name) {
    if (!(v >= 0.0) || std::isnan(v)) {
        throw std::invalid_argument(std::string(name) + " must be >= 0, got " +
                                    std::to_string(v));
    }
}

} // namespace

void AtomParams::validate() const {
    require_nonneg(gamma_aa, "gamma_aa");
    require_nonneg(gamma_bb, "gamma_bb");
    require_nonneg(gamma_cc, "gamma_cc");
    require_nonneg(gamma_ab, "gamma_ab");
    require_nonneg(gamma_ac, "gamma_ac");
    require_nonneg(gamma_bc, "gamma_bc");
    require_nonneg(kappa, "kappa");
    require_nonneg(dipole_ratio, "dipole_ratio");
    if (!(c > 0.0)) {
        throw std::invalid_argument("c must be > 0, got " + std::to_string(c));
    }
}

bool FieldParams::eit_regime() const {
    return std::abs(omega_c_rabi) >= 10.0 * std::abs(omega_p_rabi);
}

void FieldParams::validate() const {
    const double n2 = k_hat_p[0] * k_hat_p[0] + k_hat_p[1] * k_hat_p[1] +
                      k_hat_p[2] * k_hat_p[2];
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) {
        throw std::invalid_argument("k_hat_p must be a unit vector (|k_hat_p| = 1 "
                                    "within 1e-12), got |k_hat_p| = " +
                                    std::to_string(std::sqrt(n2)));
    }
    if (std::isnan(sigma)) {
        throw std::invalid_argument("sigma must be finite");
    }
}

DerivedRates derive_rates(const AtomParams& atom, const FieldParams& field) {
    if (!(atom.gamma_ab > 0.0)) {
        throw std::invalid_argument(
            "derive_rates: gamma_ab must be > 0 (division by gamma_ab), got " +
            std::to_string(atom.gamma_ab));
    }
    DerivedRates r;
    r.lambda = atom.gamma_bc + std::norm(field.omega_c_rabi) / (4.0 * atom.gamma_ab);
    r.beta = atom.omega_p * atom.kappa / (2.0 * atom.gamma_ab);
    return r;
}

std::pair<AtomParams, FieldParams> canonical_params(double kappa) {
    AtomParams atom;
    atom.gamma_ab = 1e8;
    atom.gamma_ac = 1e8;
    atom.gamma_bc = 1e6;
    // Radiative convention: the excited-state population decay is twice the
    // optical coherence decay; the ground states do not decay.
    atom.gamma_aa = 2e8;
    atom.gamma_bb = 0.0;
    atom.gamma_cc = 0.0;
    atom.delta_ab = 0.0;
    atom.delta_ac = 0.0;
    atom.omega_p = 1e15;
    atom.omega_ab = 1e15;
    atom.kappa = kappa;
    atom.dipole_ratio = 1e-2;
    atom.c = speed_of_light_si;

    FieldParams field;
    field.omega_c_rabi = cplx(1e8, 0.0);
    field.omega_p_rabi = cplx(1e7, 0.0);
    field.sigma = 0.0; // no physical default; scenario configs choose it
    field.k_hat_p = {1.0, 0.0, 0.0};

    atom.validate();
    field.validate();
    return {atom, field};
}

std::pair<AtomParams, FieldParams> canonical_dimensionless() {
    AtomParams atom;
    atom.gamma_ab = 1.0;
    atom.gamma_ac = 1.0;
    atom.gamma_bc = 0.01;
    atom.gamma_aa = 2.0;
    atom.gamma_bb = 0.0;
    atom.gamma_cc = 0.0;
    atom.delta_ab = 0.0;
    atom.delta_ac = 0.0;
    atom.omega_p = 2.0; // with kappa = 1 this puts beta exactly at 1
    atom.omega_ab = 2.0;
    atom.kappa = 1.0;
    atom.dipole_ratio = 1e-2;
    atom.c = 1.0;

    FieldParams field;
    field.omega_c_rabi = cplx(1.0, 0.0);
    field.omega_p_rabi = cplx(0.1, 0.0);
    field.sigma = 1.0;
    field.k_hat_p = {1.0, 0.0, 0.0};

    atom.validate();
    field.validate();
    return {atom, field};
}

} // namespace slowlight
