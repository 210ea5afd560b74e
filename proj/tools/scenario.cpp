#include "scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "slowlight/adiabatic.hpp"
#include "slowlight/bloch.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/probe_modes.hpp"
#include "slowlight/susceptibility.hpp"

namespace slowlight::tools {

namespace fs = std::filesystem;

ScenarioKind scenario_kind_from_string(const std::string& s) {
    if (s == "bloch") return ScenarioKind::bloch;
    if (s == "adiabatic") return ScenarioKind::adiabatic;
    if (s == "modes") return ScenarioKind::modes;
    if (s == "chi-sweep") return ScenarioKind::chi_sweep;
    if (s == "propagate") return ScenarioKind::propagate;
    if (s == "sweep") return ScenarioKind::sweep;
    throw config_error("unknown scenario kind '" + s +
                       "' (expected bloch | adiabatic | modes | chi-sweep | "
                       "propagate | sweep)");
}

std::string to_string(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::bloch: return "bloch";
    case ScenarioKind::adiabatic: return "adiabatic";
    case ScenarioKind::modes: return "modes";
    case ScenarioKind::chi_sweep: return "chi-sweep";
    case ScenarioKind::propagate: return "propagate";
    case ScenarioKind::sweep: return "sweep";
    }
    return "?";
}

namespace {

// ---- parsing helpers ------------------------------------------------------

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw config_error("unknown key '" + it.key() + "' in " + where);
        }
    }
}

double get_num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw config_error(std::string("key '") + key + "' must be a number");
    }
    return v.get<double>();
}

std::size_t get_size(const json& obj, const char* key, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) {
        return static_cast<std::size_t>(v.get<long long>());
    }
    throw config_error(std::string("key '") + key +
                       "' must be a non-negative integer");
}

cplx get_complex(const json& obj, const char* key, cplx fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw config_error(std::string("key '") + key +
                       "' must be a number or an [re, im] pair");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

// RFC-4180 CSV: header row, LF line endings, 17-significant-digit numbers.
class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw config_error("cannot open output file " + path.string());
        write_row_strings(header);
    }

    void write_row(const std::vector<double>& vals) {
        std::string line;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) line += ',';
            line += fmt17(vals[i]);
        }
        line += '\n';
        out_ << line;
    }

    void write_row_strings(const std::vector<std::string>& vals) {
        std::string line;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) line += ',';
            line += vals[i];
        }
        line += '\n';
        out_ << line;
    }

private:
    std::ofstream out_;
};

AtomParams parse_atom(const json& j) {
    check_keys(j,
               {"gamma_aa", "gamma_bb", "gamma_cc", "gamma_ab", "gamma_ac",
                "gamma_bc", "delta_ab", "delta_ac", "omega_ab", "omega_p", "kappa",
                "dipole_ratio", "c"},
               "atom");
    AtomParams a;
    a.gamma_aa = get_num(j, "gamma_aa", 0.0);
    a.gamma_bb = get_num(j, "gamma_bb", 0.0);
    a.gamma_cc = get_num(j, "gamma_cc", 0.0);
    a.gamma_ab = get_num(j, "gamma_ab", 0.0);
    a.gamma_ac = get_num(j, "gamma_ac", 0.0);
    a.gamma_bc = get_num(j, "gamma_bc", 0.0);
    a.delta_ab = get_num(j, "delta_ab", 0.0);
    a.delta_ac = get_num(j, "delta_ac", 0.0);
    a.omega_ab = get_num(j, "omega_ab", 0.0);
    a.omega_p = get_num(j, "omega_p", 0.0);
    a.kappa = get_num(j, "kappa", 0.0);
    a.dipole_ratio = get_num(j, "dipole_ratio", 1e-2);
    a.c = get_num(j, "c", speed_of_light_si);
    return a;
}

FieldParams parse_field(const json& j) {
    check_keys(j, {"omega_c_rabi", "omega_p_rabi", "sigma", "k_hat_p"}, "field");
    FieldParams f;
    f.omega_c_rabi = get_complex(j, "omega_c_rabi", {0.0, 0.0});
    f.omega_p_rabi = get_complex(j, "omega_p_rabi", {0.0, 0.0});
    f.sigma = get_num(j, "sigma", 0.0);
    if (j.contains("k_hat_p")) {
        const auto& k = j.at("k_hat_p");
        if (!k.is_array() || k.size() != 3) {
            throw config_error("field.k_hat_p must be a 3-vector");
        }
        f.k_hat_p = {k[0].get<double>(), k[1].get<double>(), k[2].get<double>()};
    }
    return f;
}

CouplingChoice parse_coupling(const json& j) {
    const std::string s = j.get<std::string>();
    if (s == "full-bloch") return CouplingChoice::full_bloch;
    if (s == "adiabatic-rho_ab") return CouplingChoice::adiabatic_rho_ab;
    throw config_error("numerics.coupling must be 'full-bloch' or 'adiabatic-rho_ab'");
}

Numerics parse_numerics(const json& j, ScenarioKind kind) {
    static const std::map<ScenarioKind, std::set<std::string>> allowed = {
        {ScenarioKind::bloch, {"t_end", "tol", "n_samples"}},
        {ScenarioKind::adiabatic, {"t_end", "n_samples", "quad_rel_tol"}},
        {ScenarioKind::modes, {}},
        {ScenarioKind::chi_sweep, {"omega_min", "omega_max", "n_points", "d_omega"}},
        {ScenarioKind::propagate,
         {"length", "n_cells", "cfl", "coupling", "t_end", "pulse_amplitude",
          "pulse_center", "pulse_width", "n_snapshots", "fit_z_lo", "fit_z_hi"}},
    };
    Numerics n;
    check_keys(j, allowed.at(kind), "numerics (scenario " + to_string(kind) + ")");
    n.t_end = get_num(j, "t_end", n.t_end);
    n.tol = get_num(j, "tol", n.tol);
    n.n_samples = get_size(j, "n_samples", n.n_samples);
    n.quad_rel_tol = get_num(j, "quad_rel_tol", n.quad_rel_tol);
    if (j.contains("omega_min")) n.omega_min = get_num(j, "omega_min", 0.0);
    if (j.contains("omega_max")) n.omega_max = get_num(j, "omega_max", 0.0);
    n.n_points = get_size(j, "n_points", n.n_points);
    if (j.contains("d_omega")) n.d_omega = get_num(j, "d_omega", 0.0);
    n.length = get_num(j, "length", n.length);
    n.n_cells = get_size(j, "n_cells", n.n_cells);
    n.cfl = get_num(j, "cfl", n.cfl);
    if (j.contains("coupling")) n.coupling = parse_coupling(j.at("coupling"));
    n.pulse_amplitude = get_num(j, "pulse_amplitude", n.pulse_amplitude);
    n.pulse_center = get_num(j, "pulse_center", n.pulse_center);
    n.pulse_width = get_num(j, "pulse_width", n.pulse_width);
    n.n_snapshots = get_size(j, "n_snapshots", n.n_snapshots);
    if (j.contains("fit_z_lo")) n.fit_z_lo = get_num(j, "fit_z_lo", 0.0);
    if (j.contains("fit_z_hi")) n.fit_z_hi = get_num(j, "fit_z_hi", 0.0);
    return n;
}

} // namespace

ScenarioConfig parse_config(const json& j) {
    if (!j.is_object()) throw config_error("config root must be a JSON object");
    check_keys(j, {"scenario", "atom", "field", "numerics", "output"}, "config root");
    if (!j.contains("scenario")) {
        throw config_error("config is missing the required 'scenario' key");
    }

    ScenarioConfig cfg;
    cfg.kind = scenario_kind_from_string(j.at("scenario").get<std::string>());
    if (cfg.kind == ScenarioKind::sweep) {
        throw config_error(
            "scenario 'sweep' is driven by the `sweep` subcommand over a base "
            "scenario config; pass that base config instead");
    }
    cfg.atom = parse_atom(j.value("atom", json::object()));
    cfg.field = parse_field(j.value("field", json::object()));
    cfg.numerics = parse_numerics(j.value("numerics", json::object()), cfg.kind);
    const json out = j.value("output", json::object());
    check_keys(out, {"basename"}, "output");
    cfg.output.basename =
        out.contains("basename") ? out.at("basename").get<std::string>() : to_string(cfg.kind);

    // Re-validate the physical invariants at load time.
    try {
        cfg.atom.validate();
        cfg.field.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("invalid physical parameters: ") + e.what());
    }
    return cfg;
}

ScenarioConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const ScenarioConfig& cfg) {
    json atom = {
        {"gamma_aa", cfg.atom.gamma_aa}, {"gamma_bb", cfg.atom.gamma_bb},
        {"gamma_cc", cfg.atom.gamma_cc}, {"gamma_ab", cfg.atom.gamma_ab},
        {"gamma_ac", cfg.atom.gamma_ac}, {"gamma_bc", cfg.atom.gamma_bc},
        {"delta_ab", cfg.atom.delta_ab}, {"delta_ac", cfg.atom.delta_ac},
        {"omega_ab", cfg.atom.omega_ab}, {"omega_p", cfg.atom.omega_p},
        {"kappa", cfg.atom.kappa},       {"dipole_ratio", cfg.atom.dipole_ratio},
        {"c", cfg.atom.c}};
    json field = {{"omega_c_rabi", complex_json(cfg.field.omega_c_rabi)},
                  {"omega_p_rabi", complex_json(cfg.field.omega_p_rabi)},
                  {"sigma", cfg.field.sigma},
                  {"k_hat_p", json::array({cfg.field.k_hat_p[0], cfg.field.k_hat_p[1],
                                           cfg.field.k_hat_p[2]})}};
    json numerics = json::object();
    const Numerics& n = cfg.numerics;
    switch (cfg.kind) {
    case ScenarioKind::bloch:
        numerics = {{"t_end", n.t_end}, {"tol", n.tol}, {"n_samples", n.n_samples}};
        break;
    case ScenarioKind::adiabatic:
        numerics = {{"t_end", n.t_end},
                    {"n_samples", n.n_samples},
                    {"quad_rel_tol", n.quad_rel_tol}};
        break;
    case ScenarioKind::modes:
        break;
    case ScenarioKind::chi_sweep:
        numerics = {{"n_points", n.n_points}};
        if (n.omega_min) numerics["omega_min"] = *n.omega_min;
        if (n.omega_max) numerics["omega_max"] = *n.omega_max;
        if (n.d_omega) numerics["d_omega"] = *n.d_omega;
        break;
    case ScenarioKind::propagate:
        numerics = {{"length", n.length},
                    {"n_cells", n.n_cells},
                    {"cfl", n.cfl},
                    {"coupling", n.coupling == CouplingChoice::full_bloch
                                     ? "full-bloch"
                                     : "adiabatic-rho_ab"},
                    {"t_end", n.t_end},
                    {"pulse_amplitude", n.pulse_amplitude},
                    {"pulse_center", n.pulse_center},
                    {"pulse_width", n.pulse_width},
                    {"n_snapshots", n.n_snapshots}};
        if (n.fit_z_lo) numerics["fit_z_lo"] = *n.fit_z_lo;
        if (n.fit_z_hi) numerics["fit_z_hi"] = *n.fit_z_hi;
        break;
    case ScenarioKind::sweep:
        break;
    }
    return {{"scenario", to_string(cfg.kind)},
            {"atom", atom},
            {"field", field},
            {"numerics", numerics},
            {"output", {{"basename", cfg.output.basename}}}};
}

namespace {

// Scalars derivable from the parameters alone; attached to every summary.
json derived_block(const ScenarioConfig& cfg) {
    json d = json::object();
    if (cfg.atom.gamma_ab <= 0.0) return d;
    const auto rates = derive_rates(cfg.atom, cfg.field);
    d["lambda"] = rates.lambda;
    d["beta"] = rates.beta;
    d["chi_resonant"] = complex_json(chi_resonant(cfg.atom, cfg.field));
    try {
        d["chi_steady_center"] = complex_json(
            chi_steady(cfg.atom.omega_ab, cfg.atom, cfg.field.omega_c_rabi));
        d["chi_e"] = complex_json(chi_e(cfg.atom, cfg.field.omega_c_rabi));
        const auto xm = chi_m_fixed_point(cfg.atom, cfg.field.omega_c_rabi);
        d["chi_m"] = complex_json(xm.chi_m);
    } catch (const numerical_error&) {
        // poles at degenerate parameters: leave the entries out
    }
    if (cfg.field.sigma != 0.0) {
        try {
            const auto mode = solve_probe_mode(rates, cfg.atom, cfg.field);
            d["zeta"] = complex_json(mode.zeta);
            d["varsigma"] = complex_json(mode.varsigma);
            d["eta_plus"] = complex_json(mode.eta_plus);
            d["eta_minus"] = complex_json(mode.eta_minus);
            d["v_g"] = mode.v_g;
            d["v_g_plus"] = mode.v_g_plus.real();
            d["v_g_plus_im"] = mode.v_g_plus.imag();
            d["v_g_minus"] = mode.v_g_minus.real();
            d["v_g_minus_im"] = mode.v_g_minus.imag();
        } catch (const numerical_error&) {
        }
    }
    return d;
}

json summary_skeleton(const ScenarioConfig& cfg) {
    return {{"config", to_json(cfg)}, {"derived", derived_block(cfg)},
            {"results", json::object()}};
}

void write_summary(const json& summary, const fs::path& out_dir) {
    std::ofstream out(out_dir / "summary.json", std::ios::binary);
    if (!out) {
        throw config_error("cannot open output file " +
                           (out_dir / "summary.json").string());
    }
    out << summary.dump(2) << '\n';
}

json run_bloch(const ScenarioConfig& cfg, const fs::path& out_dir) {
    const auto& n = cfg.numerics;
    const auto samples = linspace(0.0, n.t_end, n.n_samples);
    const cplx op = cfg.field.omega_p_rabi;
    const cplx oc = cfg.field.omega_c_rabi;
    const auto traj = integrate_bloch(
        DensityMatrix3::dark_state(), cfg.atom, [op](double) { return op; },
        [oc](double) { return oc; }, {0.0, n.t_end}, n.tol, samples);

    CsvWriter csv(out_dir / (cfg.output.basename + ".csv"),
                  {"t", "rho_aa", "rho_bb", "rho_cc", "re_rho_ab", "im_rho_ab",
                   "re_rho_ac", "im_rho_ac", "re_rho_bc", "im_rho_bc", "trace"});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& s = traj.states[i];
        csv.write_row({traj.times[i], s.aa, s.bb, s.cc, s.ab.real(), s.ab.imag(),
                       s.ac.real(), s.ac.imag(), s.bc.real(), s.bc.imag(),
                       s.trace()});
    }

    json summary = summary_skeleton(cfg);
    const auto& last = traj.states.back();
    summary["results"] = {{"t_final", traj.times.back()},
                          {"rho_aa_final", last.aa},
                          {"rho_bb_final", last.bb},
                          {"rho_cc_final", last.cc},
                          {"re_rho_ab_final", last.ab.real()},
                          {"im_rho_ab_final", last.ab.imag()},
                          {"re_rho_bc_final", last.bc.real()},
                          {"im_rho_bc_final", last.bc.imag()},
                          {"trace_final", last.trace()},
                          {"accepted_steps", traj.accepted_steps},
                          {"rejected_steps", traj.rejected_steps},
                          {"population_ratio_diag",
                           population_ratio_check(traj, cfg.atom)}};
    return summary;
}

json run_adiabatic(const ScenarioConfig& cfg, const fs::path& out_dir, bool quiet) {
    const auto& n = cfg.numerics;
    if (!cfg.field.eit_regime() && !quiet) {
        std::cerr << "warning: |Omega_c| < 10 |Omega_p|; the closed-form "
                     "coherences assume a much stronger coupling field\n";
    }
    const auto rates = derive_rates(cfg.atom, cfg.field);
    const cplx op = cfg.field.omega_p_rabi;
    const cplx oc = cfg.field.omega_c_rabi;
    const field_fn probe = [op](double) { return op; };
    const field_fn probe_dot = [](double) { return cplx(0.0, 0.0); };

    const auto times = linspace(0.0, n.t_end, n.n_samples);
    CsvWriter csv(out_dir / (cfg.output.basename + ".csv"),
                  {"t", "re_rho_bc", "im_rho_bc", "re_rho_ba", "im_rho_ba",
                   "re_rho_ab", "im_rho_ab"});
    cplx bc_end, ab_end;
    for (double t : times) {
        const cplx bc = rho_bc_quadrature(probe, rates, oc, cfg.atom.gamma_ab,
                                          {0.0, 0.0}, t, n.quad_rel_tol);
        const cplx ba = rho_ba_quadrature(probe, probe_dot, rates, cfg.atom.gamma_ab,
                                          cfg.atom.gamma_bc, {0.0, 0.0}, t,
                                          n.quad_rel_tol);
        const cplx ab = rho_ab_quadrature(probe, probe_dot, rates, cfg.atom.gamma_ab,
                                          cfg.atom.gamma_bc, {0.0, 0.0}, t,
                                          n.quad_rel_tol);
        csv.write_row({t, bc.real(), bc.imag(), ba.real(), ba.imag(), ab.real(),
                       ab.imag()});
        bc_end = bc;
        ab_end = ab;
    }

    // Constant-drive asymptotes for reference.
    const cplx bc_limit = -std::conj(op) * oc / (4.0 * cfg.atom.gamma_ab * rates.lambda);
    const cplx ab_limit = cplx(0.0, 0.5) * cfg.atom.gamma_bc * op /
                          (cfg.atom.gamma_ab * rates.lambda);

    json summary = summary_skeleton(cfg);
    summary["results"] = {{"re_rho_bc_final", bc_end.real()},
                          {"im_rho_bc_final", bc_end.imag()},
                          {"re_rho_ab_final", ab_end.real()},
                          {"im_rho_ab_final", ab_end.imag()},
                          {"re_rho_bc_limit", bc_limit.real()},
                          {"im_rho_bc_limit", bc_limit.imag()},
                          {"re_rho_ab_limit", ab_limit.real()},
                          {"im_rho_ab_limit", ab_limit.imag()},
                          {"eit_regime", cfg.field.eit_regime() ? 1 : 0}};
    return summary;
}

json run_modes(const ScenarioConfig& cfg, const fs::path& out_dir) {
    const auto rates = derive_rates(cfg.atom, cfg.field);
    const auto mode = solve_probe_mode(rates, cfg.atom, cfg.field);
    const auto approx = slow_light_vg(rates, cfg.atom, cfg.field);

    CsvWriter csv(out_dir / (cfg.output.basename + ".csv"), {"quantity", "value"});
    auto row = [&](const std::string& name, double v) {
        csv.write_row_strings({name, fmt17(v)});
    };
    row("lambda", rates.lambda);
    row("beta", rates.beta);
    row("zeta", mode.zeta.real());
    row("varsigma", mode.varsigma.real());
    row("eta_plus_re", mode.eta_plus.real());
    row("eta_plus_im", mode.eta_plus.imag());
    row("eta_minus_re", mode.eta_minus.real());
    row("eta_minus_im", mode.eta_minus.imag());
    row("v_g_plus", mode.v_g_plus.real());
    row("v_g_minus", mode.v_g_minus.real());
    row("v_g", mode.v_g);
    row("v_g_slow_light_intermediate", approx.intermediate);
    row("v_g_slow_light_final", approx.final_form);
    row("dominance_ratio", approx.dominance_ratio);

    json summary = summary_skeleton(cfg);
    summary["results"] = {
        {"v_g", mode.v_g},
        {"v_g_plus", mode.v_g_plus.real()},
        {"v_g_plus_im", mode.v_g_plus.imag()},
        {"v_g_minus", mode.v_g_minus.real()},
        {"v_g_minus_im", mode.v_g_minus.imag()},
        {"zeta", mode.zeta.real()},
        {"varsigma", mode.varsigma.real()},
        {"eta_plus", complex_json(mode.eta_plus)},
        {"eta_minus", complex_json(mode.eta_minus)},
        {"vg_eta_branch", std::string(1, mode.vg_eta_branch)},
        {"growing_mode", mode.growing_mode ? 1 : 0},
        {"slow_light_intermediate", approx.intermediate},
        {"slow_light_final", approx.final_form},
        {"dominance_ratio", approx.dominance_ratio},
        {"slow_light_regime_ok", approx.regime_ok ? 1 : 0}};
    return summary;
}

json run_chi_sweep(const ScenarioConfig& cfg, const fs::path& out_dir) {
    const auto& n = cfg.numerics;
    const double omega_lo =
        n.omega_min.value_or(cfg.atom.omega_ab - 10.0 * cfg.atom.gamma_ab);
    const double omega_hi =
        n.omega_max.value_or(cfg.atom.omega_ab + 10.0 * cfg.atom.gamma_ab);
    if (!(omega_lo < omega_hi)) {
        throw config_error("chi-sweep: omega_min must be below omega_max");
    }
    const cplx oc = cfg.field.omega_c_rabi;

    CsvWriter csv(out_dir / (cfg.output.basename + ".csv"),
                  {"omega", "re_chi", "im_chi", "re_n", "im_n"});
    for (double w : linspace(omega_lo, omega_hi, n.n_points)) {
        const cplx chi = chi_steady(w, cfg.atom, oc);
        const cplx nn = std::sqrt(1.0 + chi);
        csv.write_row({w, chi.real(), chi.imag(), nn.real(), nn.imag()});
    }

    const double d_omega = n.d_omega.value_or(
        cfg.atom.gamma_bc > 0.0 ? cfg.atom.gamma_bc / 100.0
                                : cfg.atom.gamma_ab / 1e6);
    const auto center = susceptibility_at(cfg.atom.omega_ab, cfg.atom, oc, d_omega);

    json summary = summary_skeleton(cfg);
    summary["results"] = {{"re_chi_center", center.chi.real()},
                          {"im_chi_center", center.chi.imag()},
                          {"re_n_center", center.n.real()},
                          {"im_n_center", center.n.imag()},
                          {"v_g_dispersive", center.v_g_dispersive},
                          {"re_eps_r", center.eps_r.real()},
                          {"im_eps_r", center.eps_r.imag()},
                          {"re_mu_r", center.mu_r.real()},
                          {"im_mu_r", center.mu_r.imag()},
                          {"negative_eps", center.eps_r.real() < 0.0 ? 1 : 0},
                          {"negative_mu", center.mu_r.real() < 0.0 ? 1 : 0},
                          {"omega_min", omega_lo},
                          {"omega_max", omega_hi}};
    return summary;
}

json run_propagate(const ScenarioConfig& cfg, const fs::path& out_dir) {
    const auto& n = cfg.numerics;
    Grid1D grid;
    grid.length = n.length;
    grid.n_cells = n.n_cells;
    grid.dt = n.cfl * (n.length / static_cast<double>(n.n_cells - 1)) / cfg.atom.c;

    const double amp = n.pulse_amplitude, t0 = n.pulse_center, tau = n.pulse_width;
    const field_fn inflow = [amp, t0, tau](double t) {
        const double u = (t - t0) / tau;
        return cplx(amp * std::exp(-0.5 * u * u), 0.0);
    };

    const auto record = propagate(grid, cfg.atom, cfg.field.omega_c_rabi, inflow,
                                  n.coupling, n.t_end, n.n_snapshots);

    CsvWriter snaps(out_dir / (cfg.output.basename + ".csv"),
                    {"t", "z", "abs_omega_p", "re_rho_ab", "im_rho_ab"});
    const double dz = grid.dz();
    for (std::size_t s = 0; s < record.snapshot_times.size(); ++s) {
        for (std::size_t i = 0; i < grid.n_cells; ++i) {
            snaps.write_row({record.snapshot_times[s], static_cast<double>(i) * dz,
                             record.abs_envelope[s][i],
                             record.rho_ab_samples[s][i].real(),
                             record.rho_ab_samples[s][i].imag()});
        }
    }
    CsvWriter peaks(out_dir / (cfg.output.basename + "_peaks.csv"), {"t", "z_peak"});
    for (std::size_t i = 0; i < record.peak_times.size(); ++i) {
        peaks.write_row({record.peak_times[i], record.peak_positions[i]});
    }

    const double z_lo = n.fit_z_lo.value_or(0.25 * n.length);
    const double z_hi = n.fit_z_hi.value_or(0.75 * n.length);
    const auto fit = measure_group_velocity(record, {z_lo, z_hi});

    const auto rates = derive_rates(cfg.atom, cfg.field);
    const auto approx = slow_light_vg(rates, cfg.atom, cfg.field);

    json summary = summary_skeleton(cfg);
    summary["results"] = {
        {"v_fit", fit.v},
        {"v_fit_stderr", fit.stderr_v},
        {"fit_samples", fit.n_samples},
        {"v_slow_light_final", approx.final_form},
        {"inflow_energy", record.inflow_energy},
        {"outflow_energy", record.outflow_energy},
        {"transmission", record.inflow_energy > 0.0
                             ? record.outflow_energy / record.inflow_energy
                             : 0.0},
        {"max_abs_rho_ab", record.max_abs_rho_ab},
        {"max_abs_rho_ac", record.max_abs_rho_ac},
        {"inflow_bandwidth", record.inflow_bandwidth},
        {"svea_warning", record.svea_warning ? 1 : 0}};
    return summary;
}

} // namespace

json run_scenario(const ScenarioConfig& cfg, const fs::path& out_dir, bool quiet) {
    fs::create_directories(out_dir);
    json summary;
    switch (cfg.kind) {
    case ScenarioKind::bloch: summary = run_bloch(cfg, out_dir); break;
    case ScenarioKind::adiabatic: summary = run_adiabatic(cfg, out_dir, quiet); break;
    case ScenarioKind::modes: summary = run_modes(cfg, out_dir); break;
    case ScenarioKind::chi_sweep: summary = run_chi_sweep(cfg, out_dir); break;
    case ScenarioKind::propagate: summary = run_propagate(cfg, out_dir); break;
    case ScenarioKind::sweep:
        throw config_error("scenario 'sweep' is driven by the `sweep` subcommand");
    }
    write_summary(summary, out_dir);
    if (!quiet) {
        std::cout << to_string(cfg.kind) << ": wrote " << out_dir.string() << "\n";
    }
    return summary;
}

SweepResult sweep(const json& base_config, const std::string& param_path,
                  const std::vector<double>& values, const fs::path& out_dir,
                  unsigned threads, bool quiet) {
    if (values.empty()) throw config_error("sweep: no values given");

    // Materialize defaults so the path can address any schema field.
    json base = to_json(parse_config(base_config));

    std::string pointer = "/" + param_path;
    for (auto& ch : pointer) {
        if (ch == '.') ch = '/';
    }
    const json::json_pointer ptr(pointer);
    if (!base.contains(ptr)) {
        throw config_error("sweep: parameter path '" + param_path +
                           "' does not resolve to a config field");
    }
    if (!base.at(ptr).is_number() &&
        !(base.at(ptr).is_array() && base.at(ptr).size() == 2)) {
        throw config_error("sweep: parameter path '" + param_path +
                           "' is not a scalar (or complex [re, im]) field");
    }

    fs::create_directories(out_dir);

    std::vector<json> configs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        json j = base;
        if (j.at(ptr).is_array()) {
            j[ptr] = json::array({values[i], 0.0});
        } else {
            j[ptr] = values[i];
        }
        configs[i] = j;
    }

    // Fan out with per-run isolation; aggregate after the barrier.
    std::vector<json> summaries(values.size());
    std::vector<std::string> errors(values.size());
    std::atomic<std::size_t> next{0};
    const unsigned n_workers = std::max(1u, threads == 0
                                                 ? std::thread::hardware_concurrency()
                                                 : threads);
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            char sub[32];
            std::snprintf(sub, sizeof sub, "value_%03zu", i);
            try {
                const ScenarioConfig cfg = parse_config(configs[i]);
                summaries[i] = run_scenario(cfg, out_dir / sub, /*quiet=*/true);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(n_workers, values.size()); ++w) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!errors[i].empty()) {
            throw numerical_error("sweep run " + std::to_string(i) + " (value " +
                                  fmt17(values[i]) + ") failed: " + errors[i]);
        }
    }

    // Union of numeric result keys, sorted for a stable column order.
    std::set<std::string> keys;
    for (const auto& s : summaries) {
        for (auto it = s.at("results").begin(); it != s.at("results").end(); ++it) {
            if (it.value().is_number()) keys.insert(it.key());
        }
    }

    std::vector<std::string> header{param_path};
    header.insert(header.end(), keys.begin(), keys.end());
    const fs::path csv_path = out_dir / "sweep.csv";
    CsvWriter csv(csv_path, header);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<std::string> row{fmt17(values[i])};
        for (const auto& k : keys) {
            const auto& res = summaries[i].at("results");
            row.push_back(res.contains(k) && res.at(k).is_number()
                              ? fmt17(res.at(k).get<double>())
                              : std::string());
        }
        csv.write_row_strings(row);
    }

    if (!quiet) {
        std::cout << "sweep over " << param_path << ": " << values.size()
                  << " runs -> " << csv_path.string() << "\n";
    }
    return {csv_path, std::move(summaries)};
}

json canonical_config_json() {
    auto [atom, field] = canonical_params();
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::chi_sweep;
    cfg.atom = atom;
    cfg.field = field;
    cfg.output.basename = "chi-sweep";
    return to_json(cfg);
}

} // namespace slowlight::tools
