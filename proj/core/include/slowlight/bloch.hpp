#ifndef SLOWLIGHT_BLOCH_HPP
#define SLOWLIGHT_BLOCH_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "slowlight/params.hpp"

namespace slowlight {

// 3x3 Hermitian density matrix of the Lambda system. Only the six
// independent components are stored; the lower triangle is defined by
// conjugation, so Hermiticity holds structurally. The same type doubles
// as the tangent (d rho / dt) in the integrator.
struct DensityMatrix3 {
    double aa = 0.0;
    double bb = 0.0;
    double cc = 0.0;
    cplx ab{0.0, 0.0};
    cplx ac{0.0, 0.0};
    cplx bc{0.0, 0.0};

    static DensityMatrix3 dark_state() {
        DensityMatrix3 r;
        r.bb = 1.0;
        return r;
    }

    double trace() const { return aa + bb + cc; }

    // Populations within [-slack, 1+slack] and trace <= 1+slack.
    bool physical(double slack = 1e-9) const;

    DensityMatrix3& operator+=(const DensityMatrix3& o);
    friend DensityMatrix3 operator+(DensityMatrix3 a, const DensityMatrix3& b) {
        return a += b;
    }
    friend DensityMatrix3 operator*(double s, const DensityMatrix3& m);
};

// Time-dependent complex Rabi frequency.
using field_fn = std::function<cplx(double)>;

// Integration output. Sample times are strictly increasing.
struct BlochTrajectory {
    std::vector<double> times;
    std::vector<DensityMatrix3> states;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;

    const DensityMatrix3& back() const { return states.back(); }
};

// Full Bloch equations with decay and detunings, evaluated element-wise on
// the six stored components (the conjugates close the remaining three).
// Pure; the tangent is Hermitian by construction.
DensityMatrix3 bloch_rhs(const DensityMatrix3& rho, const AtomParams& atom,
                         cplx omega_p, cplx omega_c);

// Adaptive embedded Runge-Kutta 5(4) with PI step control and cubic-Hermite
// dense output at the requested sample times (accepted step points when
// `sample_times` is empty). `tol` bounds the local truncation error per
// step, tol in [1e-12, 1e-3].
//
// Throws numerical_error on step-size underflow (stiffness) carrying the
// failure time, and when an integrated state violates the density-matrix
// invariants by more than 1e-6 (integrator bug guard).
BlochTrajectory integrate_bloch(const DensityMatrix3& rho0, const AtomParams& atom,
                                const field_fn& omega_p, const field_fn& omega_c,
                                std::pair<double, double> t_span, double tol,
                                std::span<const double> sample_times = {});

// Residuals of the resonant reduced Bloch system: four rows are algebraic
// (zero left-hand side) and two are time derivatives. Used to check that a
// candidate adiabatic state solves the reduced system. Requires zero
// detunings.
struct ReducedResiduals {
    double r_aa = 0.0;  // population row of |a>
    cplx r_ab{0.0, 0.0};
    cplx r_ac{0.0, 0.0};
    double r_cc = 0.0;  // population row of |c>
    double drho_bb = 0.0;
    cplx drho_bc{0.0, 0.0};
    // Per-row normalization scales (sum of term magnitudes).
    double s_aa = 0.0, s_ab = 0.0, s_ac = 0.0, s_cc = 0.0;

    // Largest algebraic residual relative to its row scale.
    double max_relative_algebraic() const;
};

ReducedResiduals reduced_resonant_rhs(const DensityMatrix3& rho,
                                      const AtomParams& atom, cplx omega_p,
                                      cplx omega_c);

// Diagnostic for the adiabatic population balance between |a> and |c>:
// max over the late half of the trajectory of
//   |gamma_aa rho_aa + gamma_cc rho_cc| / (gamma_aa |rho_aa| + gamma_cc |rho_cc| + eps).
// Reported, not asserted: with non-negative populations the balance cannot
// cancel, so this measures how empty the driven levels stay.
double population_ratio_check(const BlochTrajectory& traj, const AtomParams& atom);

} // namespace slowlight

#endif
