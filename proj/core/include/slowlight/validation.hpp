#ifndef SLOWLIGHT_VALIDATION_HPP
#define SLOWLIGHT_VALIDATION_HPP

#include <string>
#include <vector>

namespace slowlight {

// Result of one cross-module consistency check.
struct CheckReport {
    std::string name;
    std::string claim;     // what internal consistency is being verified
    double residual = 0.0; // measured
    double tolerance = 0.0;
    bool negative_control = false; // pass means the residual EXCEEDS tolerance
    bool pass = false;
    std::string note;      // informational measurements, never asserted
    double runtime_s = 0.0;
};

// Cross-checks between the closed-form layer and the numerical layer.
// Each runs standalone on fixed deterministic inputs.
CheckReport check_adiabatic_vs_numeric(bool negative_control = false);
CheckReport check_resonance_chain();
CheckReport check_vg_consistency();
CheckReport check_pulse_delay(bool vacuum_control = false);

struct ValidationReport {
    std::vector<CheckReport> checks; // deterministic name order
    bool all_pass = false;
};

// Runs every check (including the negative controls) concurrently and
// aggregates in name order. A negative control that unexpectedly starts
// passing fails the report, so regressions are caught in both directions.
ValidationReport run_validation(unsigned threads = 0);

} // namespace slowlight

#endif
