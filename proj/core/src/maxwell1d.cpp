#include "slowlight/maxwell1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "slowlight/errors.hpp"

namespace slowlight {

void Grid1D::validate(double c) const {
    if (n_cells < 16) {
        throw config_error("Grid1D: n_cells must be >= 16, got " +
                           std::to_string(n_cells));
    }
    if (!(length > 0.0) || !(dt > 0.0)) {
        throw config_error("Grid1D: length and dt must be > 0");
    }
    const double courant = cfl(c);
    if (courant > 1.0 + 1e-12) {
        throw config_error("Grid1D: CFL number c dt/dz = " + std::to_string(courant) +
                           " exceeds 1");
    }
}

namespace {

// Joint per-cell state for the source substep. The medium slot holds the
// full density matrix or just rho_bc depending on the coupling choice.
struct FullCellDeriv {
    cplx dfield;
    DensityMatrix3 drho;
};

struct AdiabaticCellDeriv {
    cplx dfield;
    cplx drho_bc;
};

cplx adiabatic_rho_ab(cplx field, cplx rho_bc, cplx omega_c, double gamma_ab) {
    // Algebraic coherence relation solved for rho_ab.
    return cplx(0.0, 0.5 / gamma_ab) * (omega_c * std::conj(rho_bc) + field);
}

} // namespace

PropagationRecord propagate(const Grid1D& grid, const AtomParams& atom,
                            cplx omega_c, const field_fn& inflow,
                            CouplingChoice coupling, double t_end,
                            std::size_t n_snapshots) {
    atom.validate();
    grid.validate(atom.c);
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("propagate: t_end must be > 0");
    }

    const std::size_t n = grid.n_cells;
    const double dt = grid.dt;
    const double dz = grid.dz();
    const double courant = grid.cfl(atom.c);
    const bool exact_shift = std::abs(courant - 1.0) <= 1e-12;
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(t_end / dt));
    const double source_coeff = atom.omega_p * atom.kappa;
    const double lambda =
        atom.gamma_bc + std::norm(omega_c) / (4.0 * atom.gamma_ab);

    PropagationRecord rec;
    rec.grid = grid;
    rec.coupling = coupling;

    // Inflow bandwidth estimate: RMS of the numerical derivative over the
    // run, relative to the RMS amplitude.
    {
        double num = 0.0, den = 0.0;
        cplx prev = inflow(0.0);
        for (std::size_t s = 1; s <= n_steps; ++s) {
            const cplx cur = inflow(static_cast<double>(s) * dt);
            num += std::norm((cur - prev) / dt);
            den += std::norm(cur);
            prev = cur;
        }
        rec.inflow_bandwidth = (den > 0.0) ? std::sqrt(num / den) : 0.0;
        rec.svea_warning =
            atom.omega_p > 0.0 && rec.inflow_bandwidth > 0.01 * atom.omega_p;
    }

    std::vector<cplx> field(n, cplx(0.0, 0.0));
    field[0] = inflow(0.0);
    std::vector<DensityMatrix3> rho;
    std::vector<cplx> rho_bc;
    if (coupling == CouplingChoice::full_bloch) {
        rho.assign(n, DensityMatrix3::dark_state());
    } else {
        rho_bc.assign(n, cplx(0.0, 0.0));
    }

    const std::size_t snapshot_stride =
        std::max<std::size_t>(1, n_steps / std::max<std::size_t>(1, n_snapshots));

    auto take_snapshot = [&](double t) {
        rec.snapshot_times.push_back(t);
        std::vector<double> env(n);
        std::vector<cplx> coh(n);
        for (std::size_t i = 0; i < n; ++i) {
            env[i] = std::abs(field[i]);
            coh[i] = (coupling == CouplingChoice::full_bloch)
                         ? rho[i].ab
                         : adiabatic_rho_ab(field[i], rho_bc[i], omega_c,
                                            atom.gamma_ab);
        }
        rec.abs_envelope.push_back(std::move(env));
        rec.rho_ab_samples.push_back(std::move(coh));
    };

    // One RK4 stage of length h on the joint (field, medium) system of every
    // cell. Cell 0's field is prescribed and receives no source.
    auto source_substep = [&](double h) {
        if (coupling == CouplingChoice::full_bloch) {
            for (std::size_t i = 0; i < n; ++i) {
                const bool drive_field = i != 0;
                auto deriv = [&](cplx f, const DensityMatrix3& r) {
                    FullCellDeriv d;
                    d.dfield = drive_field ? cplx(0.0, source_coeff) * r.ab
                                           : cplx(0.0, 0.0);
                    d.drho = bloch_rhs(r, atom, f, omega_c);
                    return d;
                };
                const cplx f0 = field[i];
                const DensityMatrix3 r0 = rho[i];
                const auto k1 = deriv(f0, r0);
                const auto k2 =
                    deriv(f0 + 0.5 * h * k1.dfield, r0 + (0.5 * h) * k1.drho);
                const auto k3 =
                    deriv(f0 + 0.5 * h * k2.dfield, r0 + (0.5 * h) * k2.drho);
                const auto k4 = deriv(f0 + h * k3.dfield, r0 + h * k3.drho);
                field[i] = f0 + (h / 6.0) * (k1.dfield + 2.0 * k2.dfield +
                                             2.0 * k3.dfield + k4.dfield);
                DensityMatrix3 acc = k1.drho;
                acc += 2.0 * k2.drho;
                acc += 2.0 * k3.drho;
                acc += k4.drho;
                rho[i] += (h / 6.0) * acc;
            }
        } else {
            const cplx coh_drive = -omega_c / (4.0 * atom.gamma_ab);
            for (std::size_t i = 0; i < n; ++i) {
                const bool drive_field = i != 0;
                auto deriv = [&](cplx f, cplx r) {
                    AdiabaticCellDeriv d;
                    d.dfield = drive_field
                                   ? cplx(0.0, source_coeff) *
                                         adiabatic_rho_ab(f, r, omega_c, atom.gamma_ab)
                                   : cplx(0.0, 0.0);
                    d.drho_bc = -lambda * r + coh_drive * std::conj(f);
                    return d;
                };
                const cplx f0 = field[i];
                const cplx r0 = rho_bc[i];
                const auto k1 = deriv(f0, r0);
                const auto k2 = deriv(f0 + 0.5 * h * k1.dfield, r0 + 0.5 * h * k1.drho_bc);
                const auto k3 = deriv(f0 + 0.5 * h * k2.dfield, r0 + 0.5 * h * k2.drho_bc);
                const auto k4 = deriv(f0 + h * k3.dfield, r0 + h * k3.drho_bc);
                field[i] = f0 + (h / 6.0) * (k1.dfield + 2.0 * k2.dfield +
                                             2.0 * k3.dfield + k4.dfield);
                rho_bc[i] = r0 + (h / 6.0) * (k1.drho_bc + 2.0 * k2.drho_bc +
                                              2.0 * k3.drho_bc + k4.drho_bc);
            }
        }
    };

    take_snapshot(0.0);

    double t = 0.0;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t_new = static_cast<double>(step + 1) * dt;
        source_substep(0.5 * dt);

        // Characteristic transport at speed c toward +z; the inflow boundary
        // prescribes cell 0 at the new time.
        if (exact_shift) {
            for (std::size_t i = n - 1; i >= 1; --i) field[i] = field[i - 1];
        } else {
            for (std::size_t i = n - 1; i >= 1; --i) {
                field[i] = field[i] + courant * (field[i - 1] - field[i]);
            }
        }
        field[0] = inflow(t_new);

        source_substep(0.5 * dt);
        t = t_new;

        rec.inflow_energy += std::norm(field[0]) * dt;
        rec.outflow_energy += std::norm(field[n - 1]) * dt;

        // Medium extremes.
        if (coupling == CouplingChoice::full_bloch) {
            for (std::size_t i = 0; i < n; ++i) {
                rec.max_abs_rho_ab = std::max(rec.max_abs_rho_ab, std::abs(rho[i].ab));
                rec.max_abs_rho_ac = std::max(rec.max_abs_rho_ac, std::abs(rho[i].ac));
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                rec.max_abs_rho_ab = std::max(
                    rec.max_abs_rho_ab,
                    std::abs(adiabatic_rho_ab(field[i], rho_bc[i], omega_c,
                                              atom.gamma_ab)));
            }
        }

        // Peak of |Omega_p|^2 with quadratic sub-cell interpolation.
        std::size_t m = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = std::norm(field[i]);
            if (y > best) {
                best = y;
                m = i;
            }
        }
        if (m >= 1 && m + 1 < n && best > 0.0) {
            const double ym = std::norm(field[m - 1]);
            const double yp = std::norm(field[m + 1]);
            const double curv = ym - 2.0 * best + yp;
            const double offset = (curv != 0.0) ? 0.5 * (ym - yp) / curv : 0.0;
            rec.peak_times.push_back(t);
            rec.peak_positions.push_back((static_cast<double>(m) + offset) * dz);
        }

        if (!std::isfinite(field[n / 2].real()) || !std::isfinite(best)) {
            throw numerical_error("propagate: field stopped being finite at step " +
                                  std::to_string(step));
        }
        if ((step + 1) % snapshot_stride == 0 || step + 1 == n_steps) {
            take_snapshot(t);
        }
    }

    return rec;
}

VelocityFit measure_group_velocity(const PropagationRecord& record,
                                   std::pair<double, double> window) {
    const auto& ts = record.peak_times;
    const auto& zs = record.peak_positions;
    std::vector<double> t, z;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (zs[i] >= window.first && zs[i] <= window.second) {
            t.push_back(ts[i]);
            z.push_back(zs[i]);
        }
    }
    if (t.size() < 10) {
        throw numerical_error(
            "measure_group_velocity: fewer than 10 peak samples inside the window (" +
            std::to_string(t.size()) + ")");
    }
    const double nd = static_cast<double>(t.size());
    double tb = 0.0, zb = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        tb += t[i];
        zb += z[i];
    }
    tb /= nd;
    zb /= nd;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxx += (t[i] - tb) * (t[i] - tb);
        sxy += (t[i] - tb) * (z[i] - zb);
    }
    const double v = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = z[i] - (zb + v * (t[i] - tb));
        ss_res += r * r;
    }
    VelocityFit fit;
    fit.v = v;
    fit.stderr_v = std::sqrt(ss_res / (nd - 2.0) / sxx);
    fit.n_samples = t.size();
    return fit;
}

CouplingFieldReport coupling_field_checker(const PropagationRecord& record) {
    if (record.coupling != CouplingChoice::full_bloch) {
        throw std::invalid_argument(
            "coupling_field_checker: requires a full-bloch propagation record");
    }
    CouplingFieldReport rep;
    rep.max_abs_rho_ac = record.max_abs_rho_ac;
    rep.max_abs_rho_ab = record.max_abs_rho_ab;
    rep.ratio = (record.max_abs_rho_ab > 0.0)
                    ? record.max_abs_rho_ac / record.max_abs_rho_ab
                    : 0.0;
    return rep;
}

} // namespace slowlight
