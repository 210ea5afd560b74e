// Command-line front end: scenario runner, parameter sweeps, canonical
// parameter emission and the cross-check validation table.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scenario.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/validation.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) {
            throw slowlight::config_error("--values: cannot parse '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw slowlight::config_error("--values: empty list");
    return out;
}

nlohmann::json report_to_json(const slowlight::ValidationReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"claim", c.claim},
                          {"residual", c.residual},
                          {"tolerance", c.tolerance},
                          {"negative_control", c.negative_control},
                          {"pass", c.pass},
                          {"note", c.note},
                          {"runtime_s", c.runtime_s}});
    }
    return {{"checks", checks}, {"all_pass", report.all_pass}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slowlight: three-level EIT medium simulator and analysis tool"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string param_path;
    std::string values_csv;
    std::string report_path;
    unsigned threads = 0;
    bool quiet = false;

    app.add_flag("--quiet", quiet, "suppress progress output");

    auto* run_cmd = app.add_subcommand("run", "run one scenario config");
    run_cmd->add_option("config", config_path, "JSON scenario config")->required();
    run_cmd->add_option("--out-dir", out_dir, "output directory (default: out)");
    run_cmd->add_option("--threads", threads, "worker threads (unused for single runs)");

    auto* sweep_cmd =
        app.add_subcommand("sweep", "run a scenario once per swept parameter value");
    sweep_cmd->add_option("config", config_path, "JSON base scenario config")->required();
    sweep_cmd->add_option("--param", param_path, "dotted parameter path, e.g. atom.gamma_bc")
        ->required();
    sweep_cmd->add_option("--values", values_csv, "comma-separated values")->required();
    sweep_cmd->add_option("--out-dir", out_dir, "output directory (default: out)");
    sweep_cmd->add_option("--threads", threads, "max concurrent runs (default: all cores)");

    auto* canonical_cmd = app.add_subcommand(
        "canonical", "print a canonical-parameter scenario config to stdout");

    auto* validate_cmd =
        app.add_subcommand("validate", "run the cross-check table and report");
    validate_cmd->add_option("--json", report_path, "also write the report as JSON");
    validate_cmd->add_option("--threads", threads, "unused; checks run concurrently");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto cfg = slowlight::tools::load_config(config_path);
            slowlight::tools::run_scenario(cfg, out_dir, quiet);
            return exit_ok;
        }
        if (sweep_cmd->parsed()) {
            std::ifstream in(config_path);
            if (!in) {
                throw slowlight::config_error("cannot open config file " + config_path);
            }
            nlohmann::json base;
            try {
                base = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw slowlight::config_error(std::string("config parse error: ") +
                                              e.what());
            }
            slowlight::tools::sweep(base, param_path, parse_values(values_csv),
                                    out_dir, threads, quiet);
            return exit_ok;
        }
        if (canonical_cmd->parsed()) {
            std::cout << slowlight::tools::canonical_config_json().dump(2) << "\n";
            return exit_ok;
        }
        if (validate_cmd->parsed()) {
            const auto report = slowlight::run_validation(threads);
            if (!quiet) {
                std::printf("%-42s %-12s %-12s %-8s %s\n", "check", "residual",
                            "tolerance", "result", "note");
                for (const auto& c : report.checks) {
                    std::printf("%-42s %-12.4g %-12.4g %-8s %s\n", c.name.c_str(),
                                c.residual, c.tolerance,
                                c.pass ? "pass" : "FAIL",
                                c.negative_control ? "(negative control)" : c.note.c_str());
                }
                std::printf("overall: %s\n", report.all_pass ? "pass" : "FAIL");
            }
            if (!report_path.empty()) {
                std::ofstream out(report_path, std::ios::binary);
                out << report_to_json(report).dump(2) << "\n";
            }
            return report.all_pass ? exit_ok : 1;
        }
    } catch (const slowlight::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        std::cerr << "usage: slowlight run <config.json> | sweep <config.json> "
                     "--param <path> --values <list> | canonical | validate\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const slowlight::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}
