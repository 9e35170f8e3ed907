#include "morawetz/evolve.hpp"

#include "morawetz/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace morawetz {

void SolverConfig::validate() const {
    if (!(p >= 1.0)) throw std::invalid_argument("SolverConfig: p must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(t_final > 0.0) || dt > t_final)
        throw std::invalid_argument("SolverConfig: need 0 < dt <= t_final");
    if (observer_stride < 1) throw std::invalid_argument("SolverConfig: observer_stride >= 1");
}

const std::vector<double>& DiagnosticTrace::channel(const std::string& name) const {
    auto it = channels.find(name);
    if (it == channels.end()) throw std::out_of_range("DiagnosticTrace: missing channel " + name);
    return it->second;
}

namespace {

void nonlinear_half_step(ComplexField& f, double half_dt, double p, double lambda) {
    if (lambda == 0.0) return;
    const bool cubic = (p == 3.0);
    parallel_for(f.values.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double m2 = std::norm(f.values[i]);
            double amp = cubic ? m2 : (m2 > 0 ? std::pow(m2, 0.5 * (p - 1.0)) : 0.0);
            double phase = lambda * amp * half_dt;
            f.values[i] *= cplx{std::cos(phase), std::sin(phase)};
        }
    });
}

void linear_step(ComplexField& f, double dt) {
    const SpectralGrid& g = f.grid;
    transform_in_place(f.values, g, Direction::forward);
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double k2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double k = g.wavenumbers[idx[d]];
            k2 += k * k;
        }
        double phase = k2 * dt;
        f.values[i] *= cplx{std::cos(phase), std::sin(phase)};
    }
    transform_in_place(f.values, g, Direction::inverse);
}

}  // namespace

ComplexField strang_step(const ComplexField& state, double dt, double p, double lambda) {
    if (dt == 0.0) throw std::invalid_argument("strang_step: dt must be nonzero");
    ComplexField u = state;
    nonlinear_half_step(u, 0.5 * dt, p, lambda);
    linear_step(u, dt);
    nonlinear_half_step(u, 0.5 * dt, p, lambda);
    if (!all_finite(u)) throw std::runtime_error("strang_step: state became non-finite");
    return u;
}

DiagnosticTrace evolve(const ComplexField& initial, const SolverConfig& config,
                       const std::vector<Observer>& observers) {
    config.validate();
    if (!all_finite(initial)) throw std::invalid_argument("evolve: initial state not finite");

    const long n_steps = std::lround(config.t_final / config.dt);
    DiagnosticTrace trace;
    for (const auto& ob : observers) trace.channels[ob.name] = {};

    // Rolling window of three consecutive states so observers can form
    // centered time differences.
    ComplexField prev = initial, cur = initial;
    bool have_prev = false;

    auto record = [&](long step, const ComplexField* next_state) {
        StepWindow w{have_prev ? &prev : nullptr, cur, next_state, step * config.dt, config.dt};
        trace.times.push_back(w.t);
        for (const auto& ob : observers) trace.channels[ob.name].push_back(ob.fn(w));
        if (config.store_snapshots) trace.snapshots.push_back(cur);
    };

    for (long step = 0; step <= n_steps; ++step) {
        bool observe = (step % config.observer_stride == 0) || step == n_steps;
        if (step == n_steps) {
            if (observe) record(step, nullptr);
            break;
        }
        ComplexField next;
        try {
            next = strang_step(cur, config.dt, config.p, config.lambda);
        } catch (const std::runtime_error&) {
            trace.aborted = true;
            trace.abort_time = (step + 1) * config.dt;
            if (observe) record(step, nullptr);
            break;
        }
        if (observe) record(step, &next);
        prev = std::move(cur);
        have_prev = true;
        cur = std::move(next);
    }
    trace.final_state = cur;
    return trace;
}

ComplexField free_gaussian_reference(const SpectralGrid& grid, double t, double width) {
    if (!(width > 0)) throw std::invalid_argument("free_gaussian_reference: width must be positive");
    // u(x,t) = prod_d [w / sqrt(w^2 - 2 i t)] * exp(-|x|^2 / (2 (w^2 - 2 i t)))
    // solves i u_t - Lap u = 0 with u(x,0) = exp(-|x|^2 / (2 w^2)).
    const cplx denom{width * width, -2.0 * t};
    const cplx factor1 = width / std::sqrt(denom);
    cplx factor = 1.0;
    for (int d = 0; d < grid.dim; ++d) factor *= factor1;
    ComplexField f = make_field(grid);
    int idx[3];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        decode_index(grid, i, idx);
        double r2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
            double x = grid.coord(idx[d]);
            r2 += x * x;
        }
        f.values[i] = factor * std::exp(-r2 / (2.0 * denom));
    }
    return f;
}

}  // namespace morawetz
