#ifndef SLOWLIGHT_PARAMS_HPP
#define SLOWLIGHT_PARAMS_HPP

#include <array>
#include <complex>
#include <utility>

namespace slowlight {

using cplx = std::complex<double>;

inline constexpr double speed_of_light_si = 299792458.0; // m/s

// Physical parameters of the three-level Lambda atom. Levels: |a> excited,
// |b> and |c> ground. The probe couples a-b, the coupling field a-c.
// All rates and frequencies are angular (s^-1 / rad s^-1); any consistent
// unit system works since every formula is homogeneous in rates, so the
// test suite also runs a dimensionless mode with gamma_ab = c = 1.
struct AtomParams {
    double gamma_aa = 0.0;  // population decay rate of |a>
    double gamma_bb = 0.0;  // population decay rate of |b>
    double gamma_cc = 0.0;  // population decay rate of |c>
    double gamma_ab = 0.0;  // a-b coherence decay rate
    double gamma_ac = 0.0;  // a-c coherence decay rate
    double gamma_bc = 0.0;  // b-c ground-state dephasing rate
    double delta_ab = 0.0;  // probe detuning (transition minus carrier)
    double delta_ac = 0.0;  // coupling detuning
    double omega_ab = 0.0;  // a-b transition angular frequency
    double omega_p = 0.0;   // probe carrier angular frequency
    double kappa = 0.0;     // N |p_ab|^2 / (eps0 hbar), aggregated coupling constant
    double dipole_ratio = 1e-2; // |m_cb / (p_ab c)|
    double c = speed_of_light_si;

    // The b-c two-photon detuning is always derived, never stored.
    double delta_bc() const { return delta_ac - delta_ab; }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Laser field parameters seen by the medium.
struct FieldParams {
    cplx omega_c_rabi{0.0, 0.0}; // coupling Rabi frequency Omega_c
    cplx omega_p_rabi{0.0, 0.0}; // probe Rabi frequency amplitude Omega_p
    double sigma = 0.0;          // spatial shape parameter of the probe mode (1/m);
                                 // no physical default, roughly inverse pulse length
    std::array<double, 3> k_hat_p{1.0, 0.0, 0.0}; // probe propagation unit vector

    // |Omega_c| >= 10 |Omega_p|. The adiabatic formulas assume this; callers
    // should warn (not fail) when requesting them outside the regime.
    bool eit_regime() const;

    void validate() const;
};

// Composite rates that appear throughout the adiabatic and mode analysis.
struct DerivedRates {
    double lambda = 0.0; // gamma_bc + |Omega_c|^2 / (4 gamma_ab)
    double beta = 0.0;   // omega_p kappa / (2 gamma_ab)
};

// Pure function of the inputs. Requires gamma_ab > 0.
DerivedRates derive_rates(const AtomParams& atom, const FieldParams& field);

// Typical EIT experiment values: gamma_ab = Omega_c = 1e8 s^-1,
// gamma_bc = 1e6 s^-1, omega_p = 1e15 s^-1, resonant fields,
// dipole_ratio 1e-2. kappa has no experimental consensus value and is a
// required user choice; the default mirrors gamma_ab.
std::pair<AtomParams, FieldParams> canonical_params(double kappa = 1e8);

// Same ratios with gamma_ab = c = 1 and beta = 1, convenient on a desk:
// Omega_c = 1, Omega_p = 0.1, gamma_bc = 0.01, sigma = 1, omega_p = 2, kappa = 1.
std::pair<AtomParams, FieldParams> canonical_dimensionless();

} // namespace slowlight

#endif
