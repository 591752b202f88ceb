#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mdsc/code_model.hpp"
#include "mdsc/flcount.hpp"
#include "mdsc/polyalg.hpp"
#include "mdsc/rng.hpp"

namespace mdsc {

// Per-kind weights applied to survivor counts.
using ObjectiveWeights = std::array<double, kObjectKinds>;

// Concat mode: (w66, w68, w88) on the cfg kinds.
ObjectiveWeights concat_weights(double w66 = 1.0, double w68 = 1e-2, double w88 = 1e-4);
// Cycle mode: cycle-6 (and cycle-4) survivors outrank every cycle-8 survivor.
ObjectiveWeights cycle_weights(const ObjectList& objs);

double objective(const std::vector<int>& x, const ObjectList& objs, const ObjectiveWeights& w);

struct McmcConfig {
    int delta = 2;
    std::optional<double> beta_init;  // default 5 / initial objective
    double beta_growth = 1.02;
    double beta_cap = 1e6;
    long long max_updates = 10000;
    std::optional<int> l1_bound;    // default gamma*kappa/4
    std::optional<int> linf_bound;  // default M-1
    double density_cap = 0.35;
    std::optional<int> depth;
    bool stop_at_zero = true;
    // Once no cycle-6 survives, forbid candidates that reactivate one.
    bool lock_cycle6 = true;
    std::uint64_t seed = 1;
};

// Generic block-Gibbs problem over integer vectors with entries in [0, values).
struct GibbsProblem {
    int n = 0;
    int values = 2;
    std::function<double(const std::vector<int>&)> objective;
    std::function<bool(const std::vector<int>&)> feasible;
};

struct TracePoint {
    long long update = 0;
    double current = 0.0;
    double best = 0.0;
    double beta = 0.0;
};

struct McmcResult {
    std::vector<int> best_x;
    double best_value = 0.0;
    std::vector<TracePoint> trace;
    long long updates = 0;
    long long stalled = 0;  // block updates with no feasible candidate
};

// Conditional probabilities proportional to exp(-beta * C) over feasible
// candidates; infeasible ones get zero.
std::vector<double> gibbs_probabilities(const std::vector<double>& values, const std::vector<char>& feasible,
                                        double beta);

struct McmcState {
    std::vector<int> x;
    double value = 0.0;
    double beta = 1.0;
    std::vector<int> best_x;
    double best_value = 0.0;
    long long iteration = 0;
};

// Resamples the block from its exact conditional; returns false when every
// candidate is infeasible.
bool gibbs_step(McmcState& state, const std::vector<int>& index_set, const GibbsProblem& problem, CounterRng& rng);

McmcResult run_gibbs(const GibbsProblem& problem, const std::vector<int>& init,
                     const std::vector<std::vector<int>>& index_sets, const McmcConfig& cfg,
                     const std::function<void(const McmcState&)>& on_step = {});

// Each position plus its delta-1 most correlated partners (shared objects).
std::vector<std::vector<int>> build_index_sets(const ObjectList& objs, int delta);

// Circulant involvement in listed objects, per base entry.
std::vector<double> entry_involvement(const ObjectList& objs);

IntGrid quantize_init(const ProbabilityMatrix& P, const IntGrid& K, const ObjectList& objs, const McmcConfig& cfg,
                      int M);

bool relocation_feasible(const std::vector<int>& x, const std::vector<int>& x0, int M, const McmcConfig& cfg);

McmcResult run_mcmc(const IntGrid& init, const ObjectList& objs, const ObjectiveWeights& w, const McmcConfig& cfg);

}  // namespace mdsc
