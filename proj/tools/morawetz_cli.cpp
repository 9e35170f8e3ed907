#include "morawetz/evolve.hpp"
#include "morawetz/grid.hpp"
#include "morawetz/harness.hpp"
#include "morawetz/interaction.hpp"
#include "morawetz/local_laws.hpp"
#include "morawetz/morawetz_radial.hpp"
#include "morawetz/vector_field.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <random>

namespace {

using namespace morawetz;

int report_and_exit(const std::vector<EstimateReport>& reports) {
    for (const auto& r : reports) std::cout << format_report_line(r) << "\n";
    return any_failed(reports) ? 1 : 0;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_dir) {
    ConfigMap cfg = parse_config_file(config_path);
    apply_overrides(cfg, overrides);
    if (!out_dir.empty()) cfg["out"] = out_dir;
    Scenario scenario = scenario_from_config(cfg);
    RunArtifacts art = run_scenario(scenario);
    for (const auto& r : art.reports) std::cout << format_report_line(r) << "\n";
    std::cout << "artifacts: " << art.directory << "\n";
    return art.any_check_failed() ? 1 : 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& axis, const std::string& values_csv) {
    ConfigMap cfg = parse_config_file(config_path);
    apply_overrides(cfg, overrides);
    Scenario base = scenario_from_config(cfg);
    std::vector<double> values;
    std::stringstream ss(values_csv);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
    SweepResult sweep = run_sweep(base, axis, values);
    write_sweep_artifacts(sweep, base.out_dir);
    for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
        std::cout << axis << "=" << values[i] << "\n";
        for (const auto& r : sweep.runs[i].reports)
            std::cout << "  " << format_report_line(r) << "\n";
    }
    for (const auto& [name, orders] : sweep.orders) {
        std::cout << "order " << name << ":";
        for (double o : orders) std::cout << " " << o;
        std::cout << "\n";
    }
    std::cout << "artifacts: " << base.out_dir << "\n";
    return sweep.any_check_failed() ? 1 : 0;
}

std::vector<std::vector<double>> sample_points(int dim, int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
    for (auto& p : pts)
        for (auto& x : p) x = uni(rng);
    return pts;
}

int cmd_verify_fields() {
    std::vector<EstimateReport> reports;
    const double eps = 1e-2;
    const std::vector<VectorFieldSpec> specs = {
        radial_weight(3, eps),
        pair_weight_3d(eps),
        line_diagonal_weight_2d(Line2D{{0.3, -0.2}, 0.4}, eps),
        diag_1d_weight(eps),
    };
    for (const auto& spec : specs) {
        auto pts = sample_points(spec.ambient_dim, 1000, 42);
        FieldIdentityReport rep = verify_field_identities(spec, pts);
        std::string kind = to_string(spec.kind);
        reports.push_back(make_inequality_report(kind + "-jacobian-symmetry",
                                                 rep.max_symmetry_residual, 1e-12, 1.0, 0.0));
        reports.push_back(make_inequality_report(kind + "-trace-div",
                                                 rep.max_trace_div_residual, 1e-12, 1.0, 0.0));
        reports.push_back(make_inequality_report(kind + "-gradient-fd",
                                                 rep.max_gradient_fd_residual, 1e-6, 1.0, 0.0));
        reports.push_back(make_inequality_report(kind + "-jacobian-fd",
                                                 rep.max_jacobian_fd_residual, 1e-6, 1.0, 0.0));
        reports.push_back(make_inequality_report(kind + "-psd", -rep.min_eigenvalue, 1e-12, 1.0,
                                                 0.0));
        reports.push_back(make_inequality_report(kind + "-x-bound", rep.max_x_norm,
                                                 1.0 + 3.0 * eps, 1.0, 0.0));
        if (spec.delta_constant > 0) {
            std::vector<double> eps_list{1e-2, 3e-3, 1e-3};
            auto rows = delta_limit_check(spec, 1.0, eps_list);
            reports.push_back(make_inequality_report(kind + "-delta-limit",
                                                     rows.back().rel_error, 1e-3,
                                                     spec.delta_constant, 0.0));
        }
    }
    return report_and_exit(reports);
}

ComplexField random_field(int dim, int n, double length, unsigned long long seed) {
    Scenario s;
    s.dim = dim;
    s.n_points = n;
    s.box_length = length;
    s.family = "random-band-limited";
    s.seed = seed;
    s.band = n / 4;
    s.amplitude = 1.0;
    return build_initial_data(s);
}

int cmd_selftest() {
    std::vector<EstimateReport> reports;
    {
        ComplexField u = random_field(3, 8, 10.0, 7);
        double eps = 2.0 * u.grid.h;
        double fast = interaction_action_3d(u, eps);
        double slow = interaction_action_3d_direct(u, eps);
        double rel = std::abs(fast - slow) / std::max(std::abs(slow), 1e-300);
        reports.push_back(make_inequality_report("oracle-3d-pair", rel, 1e-10, 1.0, 0.0));
    }
    {
        ComplexField u = random_field(2, 12, 10.0, 11);
        Line2D line{{0.1, -0.3}, 0.7};
        double eps = 2.0 * u.grid.h;
        double fast = interaction_action_2d(u, line, eps);
        double slow = interaction_action_2d_direct(u, line, eps);
        double rel = std::abs(fast - slow) / std::max(std::abs(slow), 1e-300);
        reports.push_back(make_inequality_report("oracle-2d-line", rel, 1e-12, 1.0, 0.0));
    }
    {
        ComplexField u = random_field(1, 16, 10.0, 13);
        double eps = 2.0 * u.grid.h;
        double fast = interaction_action_1d(u, eps);
        double slow = interaction_action_1d_direct(u, eps);
        double rel = std::abs(fast - slow) / std::max(std::abs(slow), 1e-300);
        reports.push_back(make_inequality_report("oracle-1d-diag", rel, 1e-12, 1.0, 0.0));
    }
    {
        // Free (linear) Gaussian flow against the closed form.
        SpectralGrid g = make_grid(2, 64, 20.0);
        ComplexField u0 = free_gaussian_reference(g, 0.0, 1.0);
        SolverConfig cfg;
        cfg.lambda = 0.0;
        cfg.dt = 1e-2;
        cfg.t_final = 0.5;
        cfg.observer_stride = 50;
        DiagnosticTrace trace = evolve(u0, cfg, {});
        ComplexField ref = free_gaussian_reference(g, 0.5, 1.0);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err += std::norm(trace.final_state.values[i] - ref.values[i]);
        err = std::sqrt(err * g.cell_volume());
        reports.push_back(make_inequality_report("free-flow-closed-form", err, 1e-8, 1.0, 0.0));
    }
    {
        // Angular average vs direct quadrature for the weighted L4 integral.
        SpectralGrid g = make_grid(2, 32, 12.0);
        ComplexField u = free_gaussian_reference(g, 0.0, 1.0);
        Point c{0.0, 0.0, 0.0};
        double avg = angular_average_weighted_l4(u, c, 64, 2.0 * g.h);
        double ref = weighted_l4_direct_quadrature(u, c);
        double rel = std::abs(avg - ref) / std::abs(ref);
        reports.push_back(make_inequality_report("weighted-l4-quadrature", rel, 1e-2, 1.0, 0.0));
    }
    {
        // Sigma contraction, tensor route vs closed radial form.
        ComplexField u = random_field(3, 16, 10.0, 17);
        VectorFieldSpec spec = radial_weight(3, 0.5);
        VirialTerms vt = virial_rhs_terms(u, spec, 3.0);
        double scale = std::max(std::abs(vt.sigma_term), 1e-300);
        reports.push_back(make_inequality_report("virial-sigma-routes",
                                                 vt.sigma_discrepancy / scale, 1e-10, 1.0, 0.0));
    }
    return report_and_exit(reports);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"defocusing NLS Morawetz verification harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir, axis, values_csv;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "run one scenario from a config file");
    run->add_option("--config", config_path, "key = value config file")->required();
    run->add_option("--set", overrides, "override config entries (key=value)");
    run->add_option("--out", out_dir, "output directory (overrides config)");

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("--config", config_path, "key = value config file")->required();
    sweep->add_option("--set", overrides, "override config entries (key=value)");
    sweep->add_option("--axis", axis, "config key to sweep")->required();
    sweep->add_option("--values", values_csv, "comma-separated values")->required();

    app.add_subcommand("verify-fields", "weight-geometry identity and delta-limit suite");
    app.add_subcommand("selftest", "brute-force oracle comparisons");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("run")) return cmd_run(config_path, overrides, out_dir);
        if (app.got_subcommand("sweep")) return cmd_sweep(config_path, overrides, axis, values_csv);
        if (app.got_subcommand("verify-fields")) return cmd_verify_fields();
        if (app.got_subcommand("selftest")) return cmd_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
