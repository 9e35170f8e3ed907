#pragma once

#include "morawetz/estimate.hpp"
#include "morawetz/evolve.hpp"
#include "morawetz/grid.hpp"
#include "morawetz/vector_field.hpp"

#include <map>
#include <string>
#include <vector>

namespace morawetz {

// Flat key = value configuration: one pair per line, '#' starts a comment,
// dotted keys express nesting. Later assignments win.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);
// Applies "key=value" override strings (the --set flag payloads).
void apply_overrides(ConfigMap& config, const std::vector<std::string>& overrides);

struct Scenario {
    std::string name = "run";
    int dim = 2;
    double p = 3.0;
    double lambda = 1.0;
    int n_points = 64;
    double box_length = 16.0;
    double dt = 2e-3;
    double t_final = 1.0;
    int observer_stride = 10;

    // initial data
    std::string family = "gaussian";  // gaussian, plane-modulated-gaussian,
                                      // random-band-limited, zero
    double amplitude = 1.0;
    double width = 1.0;
    // Quadratic phase b|x - center|^2 on the gaussian family; b > 0 makes the
    // packet contract to a waist at t = b / (w^{-4} + 4 b^2) before spreading,
    // which keeps long runs localized inside the periodic box.
    double chirp = 0.0;
    Point center{0.0, 0.0, 0.0};
    Point velocity{0.0, 0.0, 0.0};
    Point wavevector{0.0, 0.0, 0.0};
    double mod_depth = 0.5;
    unsigned long long seed = 1;
    int band = 4;

    // weight geometry
    std::string weight_kind = "auto";  // auto picks by dim: 1->diag1d, 2->line, 3->pair
    double epsilon = -1.0;             // < 0 means the 2h default policy
    double line_angle = 0.0;
    std::array<double, 2> line_offset{0.0, 0.0};
    Point weight_center{0.0, 0.0, 0.0};
    int n_theta = 32;

    // checks and tolerances
    std::vector<std::string> checks;
    double tol_mass = 1e-8;
    double tol_momentum = 1e-8;
    double tol_rel = 0.02;       // relative slack on pointwise/FTC inequalities
    double tol_weighted = 0.01;  // angular average vs direct quadrature

    std::string out_dir = "out";

    double effective_epsilon() const;
    WeightKind resolved_weight_kind() const;
    // Throws std::invalid_argument naming the offending key or check.
    void validate() const;
};

// Builds a Scenario from the key-value map; unknown keys are rejected with
// the key named.
Scenario scenario_from_config(const ConfigMap& config);

ComplexField build_initial_data(const Scenario& s);

struct RunArtifacts {
    std::string directory;
    std::vector<std::string> channel_order;  // CSV column order after t
    DiagnosticTrace trace;
    std::vector<EstimateReport> reports;
    bool aborted = false;

    bool any_check_failed() const { return any_failed(reports); }
};

// Runs the scenario and writes trace.csv, reports.txt, summary.txt into
// out_dir (created if missing).
RunArtifacts run_scenario(const Scenario& scenario);

struct SweepResult {
    std::string axis;
    std::vector<double> values;
    std::vector<RunArtifacts> runs;
    // Convergence orders log2(lhs_i / lhs_{i+1}) per report name, for
    // reports whose lhs decreases along the sweep.
    std::map<std::string, std::vector<double>> orders;
    bool any_check_failed() const;
};

// One run per value of the overridden key; per-run artifacts go to
// <out_dir>/<axis>=<value>/. Per-run failures are recorded, not fatal.
SweepResult run_sweep(const Scenario& base, const std::string& axis,
                      const std::vector<double>& values);

// Writes the aggregated sweep table (sweep.csv plus a text summary).
void write_sweep_artifacts(const SweepResult& sweep, const std::string& out_dir);

}  // namespace morawetz
