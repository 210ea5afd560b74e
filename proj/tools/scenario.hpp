#ifndef SLOWLIGHT_TOOLS_SCENARIO_HPP
#define SLOWLIGHT_TOOLS_SCENARIO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slowlight/maxwell1d.hpp"
#include "slowlight/params.hpp"

namespace slowlight::tools {

using json = nlohmann::json;

enum class ScenarioKind { bloch, adiabatic, modes, chi_sweep, propagate, sweep };

ScenarioKind scenario_kind_from_string(const std::string& s);
std::string to_string(ScenarioKind k);

// Numeric controls. One struct holds the union of per-scenario knobs; the
// parser only accepts the keys the scenario understands.
struct Numerics {
    // bloch + adiabatic
    double t_end = 50.0;
    double tol = 1e-8;          // bloch integrator tolerance
    std::size_t n_samples = 200;
    double quad_rel_tol = 1e-10;
    // chi-sweep
    std::optional<double> omega_min; // default omega_ab - 10 gamma_ab
    std::optional<double> omega_max;
    std::size_t n_points = 401;
    std::optional<double> d_omega;   // default gamma_bc/100
    // propagate
    double length = 24.0;
    std::size_t n_cells = 481;
    double cfl = 1.0;
    CouplingChoice coupling = CouplingChoice::full_bloch;
    double pulse_amplitude = 0.01;
    double pulse_center = 80.0;
    double pulse_width = 25.0;
    std::size_t n_snapshots = 64;
    std::optional<double> fit_z_lo; // default length/4
    std::optional<double> fit_z_hi; // default 3 length/4
};

struct OutputControls {
    std::string basename; // defaults to the scenario name
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::modes;
    AtomParams atom;
    FieldParams field;
    Numerics numerics;
    OutputControls output;
};

// Strict parsing: unknown keys anywhere are rejected with a config_error;
// physical invariants are re-validated at load.
ScenarioConfig parse_config(const json& j);
ScenarioConfig load_config(const std::filesystem::path& path);

// Normalized echo; parse_config(to_json(cfg)) reproduces an equivalent config.
json to_json(const ScenarioConfig& cfg);

// Runs one scenario, writing its CSV artifact(s) plus summary.json under
// out_dir. Returns the summary document. Deterministic for a fixed config.
json run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                  bool quiet = false);

struct SweepResult {
    std::filesystem::path csv_path;
    std::vector<json> summaries;
};

// Runs the base scenario once per value of the dotted parameter path (for
// example "atom.gamma_bc"), each run isolated in its own subdirectory, fanned
// out over at most `threads` workers, then concatenates the summary scalars
// into one CSV keyed by the swept value.
SweepResult sweep(const json& base_config, const std::string& param_path,
                  const std::vector<double>& values,
                  const std::filesystem::path& out_dir, unsigned threads,
                  bool quiet = false);

// The canonical starting configuration emitted by `slowlight canonical`.
json canonical_config_json();

} // namespace slowlight::tools

#endif
