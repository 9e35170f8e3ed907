#pragma once

#include "morawetz/grid.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace morawetz {

// PDE convention throughout: i u_t - Lap u + lambda |u|^{p-1} u = 0.
// lambda = +1 defocusing (the regime under study), 0 linear, -1 the
// focusing negative-control flag. The split sub-flows below are exact for
// this sign convention; do not flip them to the other common one.
struct SolverConfig {
    double p = 3.0;
    double lambda = 1.0;
    double dt = 1e-3;
    double t_final = 1.0;
    int observer_stride = 1;
    bool store_snapshots = false;  // keep the field at every observed time

    void validate() const;
};

struct DiagnosticTrace {
    std::vector<double> times;
    std::map<std::string, std::vector<double>> channels;
    std::vector<ComplexField> snapshots;  // aligned with times when stored
    ComplexField final_state;
    bool aborted = false;
    double abort_time = 0.0;

    const std::vector<double>& channel(const std::string& name) const;
};

// Observation window around an observed step: cur is the state at time t;
// prev/next (one dt away) are null at the trajectory endpoints.
struct StepWindow {
    const ComplexField* prev = nullptr;
    const ComplexField& cur;
    const ComplexField* next = nullptr;
    double t = 0.0;
    double dt = 0.0;
};

struct Observer {
    std::string name;
    std::function<double(const StepWindow&)> fn;
};

// One Strang step: exact nonlinear half-phase e^{i lambda |u|^{p-1} dt/2},
// exact linear spectral flow u_hat *= e^{i |k|^2 dt}, second half-phase.
ComplexField strang_step(const ComplexField& state, double dt, double p, double lambda = 1.0);

// Fixed-step integration from t=0 to t_final, recording every observer
// each observer_stride steps (plus t=0 and the final time). Aborts with a
// partial trace if the state stops being finite.
DiagnosticTrace evolve(const ComplexField& initial, const SolverConfig& config,
                       const std::vector<Observer>& observers);

// Closed-form free evolution (lambda = 0) of exp(-|x|^2 / (2 width^2)),
// evaluated on the grid.
ComplexField free_gaussian_reference(const SpectralGrid& grid, double t, double width);

}  // namespace morawetz
