#ifndef SLOWLIGHT_MAXWELL1D_HPP
#define SLOWLIGHT_MAXWELL1D_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "slowlight/bloch.hpp"
#include "slowlight/params.hpp"

namespace slowlight {

// Uniform 1-D grid along the probe propagation direction. Cell 0 sits at
// z = 0 and carries the prescribed inflow value; the advection leaves
// through z = length without a boundary condition (pure outflow).
struct Grid1D {
    double length = 0.0;    // m
    std::size_t n_cells = 0;
    double dt = 0.0;        // s

    double dz() const { return length / static_cast<double>(n_cells - 1); }
    double cfl(double c) const { return c * dt / dz(); }

    // n_cells >= 16 and c dt/dz <= 1 (equality gives the exact shift).
    void validate(double c) const;
};

// How the per-cell medium response is advanced.
enum class CouplingChoice {
    full_bloch,       // full three-level density matrix per cell
    adiabatic_rho_ab, // ground-state coherence ODE + algebraic rho_ab
};

struct PropagationRecord {
    Grid1D grid;
    CouplingChoice coupling = CouplingChoice::full_bloch;

    // Per-step peak trajectory (quadratic interpolation of |Omega_p|^2
    // around the grid maximum, interior cells only).
    std::vector<double> peak_times;
    std::vector<double> peak_positions;

    // Decimated field snapshots.
    std::vector<double> snapshot_times;
    std::vector<std::vector<double>> abs_envelope; // |Omega_p(z)| per snapshot
    std::vector<std::vector<cplx>> rho_ab_samples; // rho_ab(z) per snapshot

    // Time-integrated |Omega_p|^2 at the boundaries.
    double inflow_energy = 0.0;
    double outflow_energy = 0.0;

    // Extremes over the whole run (full-bloch runs track rho_ac).
    double max_abs_rho_ab = 0.0;
    double max_abs_rho_ac = 0.0;

    // Derivative-based estimate of the inflow bandwidth versus the carrier;
    // true when it exceeds 0.01 omega_p (envelope approximation strained).
    double inflow_bandwidth = 0.0;
    bool svea_warning = false;
};

// Advances the coupled envelope/medium system to t_end. Per step: half
// source update, exact characteristic shift of the envelope, half source
// update (Strang ordering; each source half-step advances the joint
// per-cell (Omega_p, medium) system with one RK4 stage). At CFL = 1 and
// kappa = 0 the scheme transports the inflow bit-exactly.
//
// Atoms start in the dark state everywhere; the interior field starts at
// zero; cell 0 is prescribed to inflow(t) throughout.
//
// Throws config/invalid_argument errors for bad grids and numerical_error
// (with the step index) if the field stops being finite.
PropagationRecord propagate(const Grid1D& grid, const AtomParams& atom,
                            cplx omega_c, const field_fn& inflow,
                            CouplingChoice coupling, double t_end,
                            std::size_t n_snapshots = 64);

struct VelocityFit {
    double v = 0.0;
    double stderr_v = 0.0;
    std::size_t n_samples = 0;
};

// Least-squares line through the peak trajectory restricted to
// z in [window.first, window.second]. Requires >= 10 samples inside.
VelocityFit measure_group_velocity(const PropagationRecord& record,
                                   std::pair<double, double> window);

struct CouplingFieldReport {
    double max_abs_rho_ac = 0.0;
    double max_abs_rho_ab = 0.0;
    double ratio = 0.0; // max|rho_ac| / max|rho_ab|
};

// Reports how empty the coupling-transition coherence stayed during a
// full-bloch run; small ratios justify dropping the coupling-field wave
// equation. Purely diagnostic.
CouplingFieldReport coupling_field_checker(const PropagationRecord& record);

} // namespace slowlight

#endif
