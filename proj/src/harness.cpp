#include "morawetz/harness.hpp"

#include "morawetz/interaction.hpp"
#include "morawetz/local_laws.hpp"
#include "morawetz/morawetz_radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace morawetz {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': not a number: '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': not an integer: '" + value + "'");
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        cfg[key] = value;
    }
    return cfg;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_overrides(ConfigMap& config, const std::vector<std::string>& overrides) {
    for (const auto& ov : overrides) {
        std::size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override '" + ov + "': expected key=value");
        config[trim(ov.substr(0, eq))] = trim(ov.substr(eq + 1));
    }
}

double Scenario::effective_epsilon() const {
    if (epsilon >= 0.0) return epsilon;
    return 2.0 * box_length / n_points;
}

WeightKind Scenario::resolved_weight_kind() const {
    if (weight_kind == "radial") return WeightKind::radial;
    if (weight_kind == "pair3d") return WeightKind::pair3d;
    if (weight_kind == "line") return WeightKind::line_diag2d;
    if (weight_kind == "diag1d") return WeightKind::diag1d;
    if (weight_kind == "auto") {
        switch (dim) {
            case 1: return WeightKind::diag1d;
            case 2: return WeightKind::line_diag2d;
            default: return WeightKind::pair3d;
        }
    }
    throw std::invalid_argument("config key 'weight.kind': unknown kind '" + weight_kind + "'");
}

namespace {

// Which checks exist, and for which (dim, weight kind) each one is valid.
bool check_valid(const std::string& check, int dim, WeightKind kind, std::string& why) {
    if (check == "conservation" || check == "residuals") return true;
    if (check == "monotonicity" || check == "pointwise" || check == "ftc") {
        int need = kind == WeightKind::pair3d ? 3 : kind == WeightKind::line_diag2d ? 2 : 1;
        if (kind == WeightKind::radial) {
            why = "check '" + check + "' needs an interaction weight, not radial";
            return false;
        }
        if (dim != need) {
            why = "check '" + check + "' with weight " + to_string(kind) + " needs dim=" +
                  std::to_string(need) + ", got dim=" + std::to_string(dim);
            return false;
        }
        return true;
    }
    if (check == "theorem1-ratio" || check == "weighted-l4-compare") {
        if (dim != 2 || kind != WeightKind::line_diag2d) {
            why = "check '" + check + "' is 2D line-weight only";
            return false;
        }
        return true;
    }
    if (check == "lin-strauss") {
        if (kind != WeightKind::radial || dim < 2) {
            why = "check 'lin-strauss' needs weight.kind=radial and dim >= 2";
            return false;
        }
        return true;
    }
    if (check == "l8-ratio") {
        if (dim != 1) {
            why = "check 'l8-ratio' is 1D only";
            return false;
        }
        return true;
    }
    why = "unknown check '" + check + "'";
    return false;
}

}  // namespace

void Scenario::validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("config key 'dim': must be 1, 2 or 3");
    if (n_points < 4 || n_points % 2 != 0)
        throw std::invalid_argument("config key 'grid.n': need an even value >= 4");
    if (!(box_length > 0)) throw std::invalid_argument("config key 'grid.length': must be > 0");
    if (!(dt > 0)) throw std::invalid_argument("config key 'time.dt': must be > 0");
    if (!(t_final > 0)) throw std::invalid_argument("config key 'time.t_final': must be > 0");
    if (observer_stride < 1) throw std::invalid_argument("config key 'time.stride': must be >= 1");
    if (!(p > 1)) throw std::invalid_argument("config key 'p': must be > 1");
    if (family != "gaussian" && family != "plane-modulated-gaussian" &&
        family != "random-band-limited" && family != "zero")
        throw std::invalid_argument("config key 'init.family': unknown family '" + family + "'");
    WeightKind kind = resolved_weight_kind();  // validates weight.kind too
    bool interaction = false;
    std::set<std::string> seen;
    for (const auto& c : checks) {
        if (!seen.insert(c).second)
            throw std::invalid_argument("check '" + c + "' listed twice");
        std::string why;
        if (!check_valid(c, dim, kind, why)) throw std::invalid_argument(why);
        if (c == "monotonicity" || c == "pointwise" || c == "ftc") interaction = true;
    }
    if (interaction && dim <= 2 && n_points > 64)
        throw std::invalid_argument(
            "grid.n exceeds the pairwise budget (max 64) for the enabled interaction checks");
}

Scenario scenario_from_config(const ConfigMap& config) {
    Scenario s;
    for (const auto& [k, v] : config) {
        if (k == "name") s.name = v;
        else if (k == "dim") s.dim = static_cast<int>(parse_int(k, v));
        else if (k == "p") s.p = parse_double(k, v);
        else if (k == "lambda") s.lambda = parse_double(k, v);
        else if (k == "grid.n") s.n_points = static_cast<int>(parse_int(k, v));
        else if (k == "grid.length") s.box_length = parse_double(k, v);
        else if (k == "time.dt") s.dt = parse_double(k, v);
        else if (k == "time.t_final") s.t_final = parse_double(k, v);
        else if (k == "time.stride") s.observer_stride = static_cast<int>(parse_int(k, v));
        else if (k == "init.family") s.family = v;
        else if (k == "init.amplitude") s.amplitude = parse_double(k, v);
        else if (k == "init.width") s.width = parse_double(k, v);
        else if (k == "init.chirp") s.chirp = parse_double(k, v);
        else if (k == "init.center.x") s.center[0] = parse_double(k, v);
        else if (k == "init.center.y") s.center[1] = parse_double(k, v);
        else if (k == "init.center.z") s.center[2] = parse_double(k, v);
        else if (k == "init.velocity.x") s.velocity[0] = parse_double(k, v);
        else if (k == "init.velocity.y") s.velocity[1] = parse_double(k, v);
        else if (k == "init.velocity.z") s.velocity[2] = parse_double(k, v);
        else if (k == "init.wavevector.x") s.wavevector[0] = parse_double(k, v);
        else if (k == "init.wavevector.y") s.wavevector[1] = parse_double(k, v);
        else if (k == "init.wavevector.z") s.wavevector[2] = parse_double(k, v);
        else if (k == "init.mod_depth") s.mod_depth = parse_double(k, v);
        else if (k == "init.seed") s.seed = static_cast<unsigned long long>(parse_int(k, v));
        else if (k == "init.band") s.band = static_cast<int>(parse_int(k, v));
        else if (k == "weight.kind") s.weight_kind = v;
        else if (k == "weight.epsilon") s.epsilon = (v == "auto") ? -1.0 : parse_double(k, v);
        else if (k == "weight.line.angle") s.line_angle = parse_double(k, v);
        else if (k == "weight.line.offset.x") s.line_offset[0] = parse_double(k, v);
        else if (k == "weight.line.offset.y") s.line_offset[1] = parse_double(k, v);
        else if (k == "weight.center.x") s.weight_center[0] = parse_double(k, v);
        else if (k == "weight.center.y") s.weight_center[1] = parse_double(k, v);
        else if (k == "weight.center.z") s.weight_center[2] = parse_double(k, v);
        else if (k == "weight.n_theta") s.n_theta = static_cast<int>(parse_int(k, v));
        else if (k == "checks") s.checks = split_list(v);
        else if (k == "tol.mass") s.tol_mass = parse_double(k, v);
        else if (k == "tol.momentum") s.tol_momentum = parse_double(k, v);
        else if (k == "tol.rel") s.tol_rel = parse_double(k, v);
        else if (k == "tol.weighted") s.tol_weighted = parse_double(k, v);
        else if (k == "out") s.out_dir = v;
        else throw std::invalid_argument("unknown config key '" + k + "'");
    }
    s.validate();
    return s;
}

ComplexField build_initial_data(const Scenario& s) {
    SpectralGrid g = make_grid(s.dim, s.n_points, s.box_length);
    ComplexField u = make_field(g);
    if (s.family == "zero") return u;

    const std::size_t total = g.size();
    if (s.family == "random-band-limited") {
        std::mt19937_64 rng(s.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<cplx> spec(total, cplx{0.0, 0.0});
        int idx[3];
        for (std::size_t i = 0; i < total; ++i) {
            decode_index(g, i, idx);
            bool in_band = true;
            for (int d = 0; d < g.dim; ++d) {
                int m = (idx[d] < g.n / 2) ? idx[d] : idx[d] - g.n;
                if (std::abs(m) > s.band) in_band = false;
            }
            if (!in_band) continue;
            double re = normal(rng), im = normal(rng);
            spec[i] = cplx{re, im};
        }
        transform_in_place(spec, g, Direction::inverse);
        u.values = std::move(spec);
        double nrm = l2_norm(u);
        if (nrm > 0) {
            double scale = s.amplitude / nrm;
            for (auto& v : u.values) v *= scale;
        }
        return u;
    }

    int idx[3];
    for (std::size_t i = 0; i < total; ++i) {
        decode_index(g, i, idx);
        double r2 = 0.0, vx = 0.0, kx = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double x = g.coord(idx[d]);
            double y = x - s.center[d];
            r2 += y * y;
            vx += s.velocity[d] * x;
            kx += s.wavevector[d] * x;
        }
        double env = std::exp(-0.5 * r2 / (s.width * s.width));
        if (s.family == "gaussian") {
            u.values[i] = s.amplitude * env * std::polar(1.0, vx + s.chirp * r2);
        } else {  // plane-modulated-gaussian
            u.values[i] = s.amplitude * (1.0 + s.mod_depth * env) * std::polar(1.0, kx + vx);
        }
    }
    return u;
}

namespace {

struct ObserverPlan {
    std::vector<Observer> observers;
    std::vector<std::string> order;

    void add(std::string name, std::function<double(const StepWindow&)> fn) {
        order.push_back(name);
        observers.push_back({std::move(name), std::move(fn)});
    }
};

bool has_check(const Scenario& s, const std::string& name) {
    return std::find(s.checks.begin(), s.checks.end(), name) != s.checks.end();
}

ObserverPlan make_observers(const Scenario& s) {
    ObserverPlan plan;
    const double p = s.p, lambda = s.lambda;
    const int dim = s.dim;
    plan.add("mass", [p, lambda](const StepWindow& w) {
        return conserved_integrals(w.cur, p, lambda).mass;
    });
    plan.add("energy", [p, lambda](const StepWindow& w) {
        return conserved_integrals(w.cur, p, lambda).energy;
    });
    const char* pname[3] = {"px", "py", "pz"};
    for (int a = 0; a < dim; ++a)
        plan.add(pname[a], [p, lambda, a](const StepWindow& w) {
            return conserved_integrals(w.cur, p, lambda).momentum[a];
        });
    plan.add("hhalf_sq", [](const StepWindow& w) {
        double v = sobolev_seminorm(w.cur, 0.5);
        return v * v;
    });
    if (dim == 1)
        plan.add("hone", [](const StepWindow& w) { return sobolev_seminorm(w.cur, 1.0); });

    if (has_check(s, "residuals")) {
        plan.add("mass_residual", [p, lambda](const StepWindow& w) {
            if (!w.prev || !w.next) return 0.0;
            return conservation_residuals(*w.prev, w.cur, *w.next, w.dt, p, lambda).mass_residual;
        });
        plan.add("momentum_residual", [p, lambda](const StepWindow& w) {
            if (!w.prev || !w.next) return 0.0;
            return conservation_residuals(*w.prev, w.cur, *w.next, w.dt, p, lambda)
                .momentum_residual;
        });
    }

    const bool interaction =
        has_check(s, "monotonicity") || has_check(s, "pointwise") || has_check(s, "ftc");
    const double eps = s.effective_epsilon();
    WeightKind kind = s.resolved_weight_kind();

    if (interaction && kind == WeightKind::pair3d) {
        plan.add("M_pair",
                 [eps](const StepWindow& w) { return interaction_action_3d(w.cur, eps); });
        plan.add("quad_l4", [](const StepWindow& w) {
            double acc = 0.0;
            for (const auto& v : w.cur.values) {
                double m2 = std::norm(v);
                acc += m2 * m2;
            }
            return acc * w.cur.grid.cell_volume();
        });
    }
    if (kind == WeightKind::line_diag2d &&
        (interaction || has_check(s, "theorem1-ratio") || has_check(s, "weighted-l4-compare"))) {
        Line2D line{{s.line_offset[0], s.line_offset[1]}, s.line_angle};
        if (interaction) {
            plan.add("M_line", [eps, line](const StepWindow& w) {
                return interaction_action_2d(w.cur, line, eps);
            });
            plan.add("line_l4", [line](const StepWindow& w) {
                Curve2D c = make_line_curve(w.cur.grid, line, 4 * w.cur.grid.n);
                return line_restricted_l4(w.cur, c);
            });
        }
        if (has_check(s, "theorem1-ratio") || has_check(s, "weighted-l4-compare")) {
            Point c = s.weight_center;
            int n_theta = s.n_theta;
            plan.add("weighted_l4", [c, n_theta, eps](const StepWindow& w) {
                return angular_average_weighted_l4(w.cur, c, n_theta, eps);
            });
        }
    }
    if (interaction && kind == WeightKind::diag1d) {
        plan.add("M_diag",
                 [eps](const StepWindow& w) { return interaction_action_1d(w.cur, eps); });
        plan.add("oct_l8", [](const StepWindow& w) {
            double acc = 0.0;
            for (const auto& v : w.cur.values) {
                double m2 = std::norm(v);
                acc += m2 * m2 * m2 * m2;
            }
            return acc * w.cur.grid.cell_volume();
        });
    }
    if (has_check(s, "lin-strauss")) {
        Point c = s.weight_center;
        double pp1 = s.p + 1.0;
        plan.add("center_density", [c, eps](const StepWindow& w) {
            return smoothed_center_density(w.cur, c, eps);
        });
        plan.add("weighted_pp1", [c, pp1, eps](const StepWindow& w) {
            return weighted_lp_integral(w.cur, c, pp1, eps);
        });
    }
    return plan;
}

void write_trace_csv(const std::string& path, const DiagnosticTrace& trace,
                     const std::vector<std::string>& order) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t";
    for (const auto& name : order) out << "," << name;
    out << "\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out << fmt(trace.times[i]);
        for (const auto& name : order) out << "," << fmt(trace.channel(name)[i]);
        out << "\n";
    }
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        acc += 0.5 * (v[i] + v[i + 1]) * (t[i + 1] - t[i]);
    return acc;
}

std::vector<EstimateReport> compute_reports(const Scenario& s, const DiagnosticTrace& trace,
                                            const ComplexField& final_state) {
    std::vector<EstimateReport> reports;
    WeightKind kind = s.resolved_weight_kind();

    std::vector<EstimateReport> bundle;
    const bool interaction =
        has_check(s, "monotonicity") || has_check(s, "pointwise") || has_check(s, "ftc") ||
        has_check(s, "l8-ratio");
    if (interaction && kind != WeightKind::radial)
        bundle = monotonicity_and_ftc_check(trace, kind, s.tol_rel);
    auto from_bundle = [&](auto pred) {
        for (const auto& r : bundle)
            if (pred(r.name)) reports.push_back(r);
    };

    for (const auto& check : s.checks) {
        if (check == "conservation") {
            const auto& mass = trace.channel("mass");
            const auto& energy = trace.channel("energy");
            double m0 = mass.front(), e0 = energy.front();
            double mdrift = 0.0, edrift = 0.0;
            for (std::size_t i = 0; i < mass.size(); ++i) {
                mdrift = std::max(mdrift, std::abs(mass[i] - m0));
                edrift = std::max(edrift, std::abs(energy[i] - e0));
            }
            if (m0 > 0) mdrift /= m0;
            if (std::abs(e0) > 0) edrift /= std::abs(e0);
            reports.push_back(
                make_inequality_report("mass-drift", mdrift, s.tol_mass, 1.0, 0.0));
            double pdrift = 0.0;
            const char* pname[3] = {"px", "py", "pz"};
            for (int a = 0; a < s.dim; ++a) {
                const auto& pa = trace.channel(pname[a]);
                for (std::size_t i = 0; i < pa.size(); ++i)
                    pdrift = std::max(pdrift, std::abs(pa[i] - pa.front()));
            }
            reports.push_back(
                make_inequality_report("momentum-drift", pdrift, s.tol_momentum, 1.0, 0.0));
            reports.push_back(
                make_inequality_report("energy-drift", edrift, 0.0, 1.0, 0.0, true));
        } else if (check == "residuals") {
            const auto& mr = trace.channel("mass_residual");
            const auto& pr = trace.channel("momentum_residual");
            double m = *std::max_element(mr.begin(), mr.end());
            double p = *std::max_element(pr.begin(), pr.end());
            reports.push_back(make_inequality_report("residual-mass", m, 0.0, 1.0, 0.0, true));
            reports.push_back(make_inequality_report("residual-momentum", p, 0.0, 1.0, 0.0, true));
        } else if (check == "monotonicity") {
            from_bundle([](const std::string& n) { return n == "monotonicity"; });
        } else if (check == "pointwise") {
            from_bundle([](const std::string& n) { return n.rfind("pointwise", 0) == 0; });
        } else if (check == "ftc") {
            from_bundle([](const std::string& n) {
                return n == "ftc" || n == "ftc-gap" || n == "action-bound";
            });
        } else if (check == "l8-ratio") {
            from_bundle([](const std::string& n) { return n == "l8-ratio"; });
        } else if (check == "theorem1-ratio") {
            double lhs = trapezoid(trace.times, trace.channel("weighted_l4"));
            const auto& mass = trace.channel("mass");
            const auto& hh = trace.channel("hhalf_sq");
            double rhs = 0.0;
            for (std::size_t i = 0; i < mass.size(); ++i)
                rhs = std::max(rhs, mass[i] * hh[i]);
            reports.push_back(
                make_inequality_report("theorem1-ratio", lhs, rhs, 1.0, 0.0, true));
        } else if (check == "weighted-l4-compare") {
            double avg = angular_average_weighted_l4(final_state, s.weight_center, s.n_theta,
                                                     s.effective_epsilon());
            double ref = weighted_l4_direct_quadrature(final_state, s.weight_center);
            double rel = std::abs(avg - ref) / std::max(std::abs(ref), 1e-300);
            if (ref == 0.0 && avg == 0.0) rel = 0.0;
            reports.push_back(make_inequality_report("weighted-l4-compare", rel, s.tol_weighted,
                                                     1.0, 0.0, false,
                                                     "avg=" + fmt(avg) + " direct=" + fmt(ref)));
        } else if (check == "lin-strauss") {
            reports.push_back(lin_strauss_check(trace, s.p));
        }
    }
    return reports;
}

}  // namespace

RunArtifacts run_scenario(const Scenario& scenario) {
    scenario.validate();
    ComplexField initial = build_initial_data(scenario);
    ObserverPlan plan = make_observers(scenario);

    SolverConfig cfg;
    cfg.p = scenario.p;
    cfg.lambda = scenario.lambda;
    cfg.dt = scenario.dt;
    cfg.t_final = scenario.t_final;
    cfg.observer_stride = scenario.observer_stride;
    cfg.validate();

    RunArtifacts art;
    art.directory = scenario.out_dir;
    art.channel_order = plan.order;
    art.trace = evolve(initial, cfg, plan.observers);
    art.aborted = art.trace.aborted;

    if (!art.trace.aborted) {
        art.reports = compute_reports(scenario, art.trace, art.trace.final_state);
    } else {
        EstimateReport r;
        r.name = "run-aborted";
        r.lhs = art.trace.abort_time;
        r.rhs = scenario.t_final;
        r.verdict = EstimateReport::Verdict::fail;
        r.context = "state stopped being finite";
        art.reports.push_back(r);
    }

    namespace fs = std::filesystem;
    fs::create_directories(art.directory);
    write_trace_csv(art.directory + "/trace.csv", art.trace, art.channel_order);
    {
        std::ofstream out(art.directory + "/reports.txt");
        for (const auto& r : art.reports) out << format_report_line(r) << "\n";
    }
    {
        std::ofstream out(art.directory + "/summary.txt");
        int pass = 0, fail = 0, info = 0;
        for (const auto& r : art.reports) {
            if (r.verdict == EstimateReport::Verdict::pass) ++pass;
            else if (r.verdict == EstimateReport::Verdict::fail) ++fail;
            else ++info;
        }
        out << "scenario: " << scenario.name << "\n";
        out << "dim=" << scenario.dim << " n=" << scenario.n_points
            << " L=" << fmt(scenario.box_length) << " dt=" << fmt(scenario.dt)
            << " T=" << fmt(scenario.t_final) << " p=" << fmt(scenario.p)
            << " lambda=" << fmt(scenario.lambda) << "\n";
        if (art.trace.aborted)
            out << "run aborted at t=" << fmt(art.trace.abort_time) << "\n";
        out << "checks: " << pass << " pass, " << fail << " fail, " << info << " info\n";
        for (const auto& r : art.reports) out << "  " << format_report_line(r) << "\n";
    }
    return art;
}

namespace {

void set_axis_value(Scenario& s, const std::string& axis, double value) {
    if (axis == "time.dt") s.dt = value;
    else if (axis == "time.t_final") s.t_final = value;
    else if (axis == "grid.n") s.n_points = static_cast<int>(std::llround(value));
    else if (axis == "grid.length") s.box_length = value;
    else if (axis == "weight.epsilon") s.epsilon = value;
    else if (axis == "weight.n_theta") s.n_theta = static_cast<int>(std::llround(value));
    else if (axis == "init.amplitude") s.amplitude = value;
    else if (axis == "init.width") s.width = value;
    else if (axis == "init.chirp") s.chirp = value;
    else if (axis == "time.stride") s.observer_stride = static_cast<int>(std::llround(value));
    else throw std::invalid_argument("axis '" + axis + "' is not sweepable");
}

}  // namespace

bool SweepResult::any_check_failed() const {
    for (const auto& r : runs)
        if (r.any_check_failed()) return true;
    return false;
}

SweepResult run_sweep(const Scenario& base, const std::string& axis,
                      const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("sweep: empty value list");
    SweepResult out;
    out.axis = axis;
    out.values = values;
    for (double v : values) {
        Scenario s = base;
        set_axis_value(s, axis, v);
        s.name = base.name + "[" + axis + "=" + fmt(v) + "]";
        s.out_dir = base.out_dir + "/" + axis + "=" + fmt(v);
        try {
            out.runs.push_back(run_scenario(s));
        } catch (const std::exception& e) {
            RunArtifacts art;
            art.directory = s.out_dir;
            EstimateReport r;
            r.name = "run-error";
            r.verdict = EstimateReport::Verdict::fail;
            r.context = e.what();
            art.reports.push_back(r);
            art.aborted = true;
            out.runs.push_back(std::move(art));
        }
    }
    // Convergence orders from reports whose lhs stays positive.
    if (out.runs.size() >= 2) {
        for (const auto& r0 : out.runs.front().reports) {
            std::vector<double> lhs;
            bool complete = true;
            for (const auto& run : out.runs) {
                bool found = false;
                for (const auto& r : run.reports)
                    if (r.name == r0.name) {
                        lhs.push_back(r.lhs);
                        found = true;
                        break;
                    }
                if (!found) complete = false;
            }
            if (!complete) continue;
            bool positive = true;
            for (double v : lhs)
                if (!(v > 0)) positive = false;
            if (!positive) continue;
            std::vector<double> orders;
            for (std::size_t i = 0; i + 1 < lhs.size(); ++i)
                orders.push_back(std::log2(lhs[i] / lhs[i + 1]));
            out.orders[r0.name] = std::move(orders);
        }
    }
    return out;
}

void write_sweep_artifacts(const SweepResult& sweep, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    // Column set: union of report names in first-run order, then extras.
    std::vector<std::string> names;
    for (const auto& run : sweep.runs)
        for (const auto& r : run.reports)
            if (std::find(names.begin(), names.end(), r.name) == names.end())
                names.push_back(r.name);
    {
        std::ofstream out(out_dir + "/sweep.csv");
        out << sweep.axis;
        for (const auto& n : names) out << "," << n << ".lhs," << n << ".ratio";
        out << "\n";
        for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
            out << fmt(sweep.values[i]);
            for (const auto& n : names) {
                const EstimateReport* found = nullptr;
                for (const auto& r : sweep.runs[i].reports)
                    if (r.name == n) {
                        found = &r;
                        break;
                    }
                if (found)
                    out << "," << fmt(found->lhs) << "," << fmt(found->ratio);
                else
                    out << ",nan,nan";
            }
            out << "\n";
        }
    }
    {
        std::ofstream out(out_dir + "/sweep.txt");
        out << "axis: " << sweep.axis << "\n";
        for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
            out << sweep.axis << "=" << fmt(sweep.values[i])
                << (sweep.runs[i].any_check_failed() ? "  [FAILED]" : "") << "\n";
            for (const auto& r : sweep.runs[i].reports)
                out << "  " << format_report_line(r) << "\n";
        }
        if (!sweep.orders.empty()) {
            out << "convergence orders (log2 of successive lhs ratios):\n";
            for (const auto& [name, ords] : sweep.orders) {
                out << "  " << name << ":";
                for (double o : ords) out << " " << fmt(o);
                out << "\n";
            }
        }
    }
}

}  // namespace morawetz
