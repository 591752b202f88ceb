#include "mdsc/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mdsc {

ObjectiveWeights concat_weights(double w66, double w68, double w88) {
    ObjectiveWeights w{};
    w[int(ObjectKind::cfg66)] = w66;
    w[int(ObjectKind::cfg68)] = w68;
    w[int(ObjectKind::cfg88)] = w88;
    return w;
}

ObjectiveWeights cycle_weights(const ObjectList& objs) {
    const double big = double(objs.total(ObjectKind::cycle8)) + 1.0;
    ObjectiveWeights w{};
    w[int(ObjectKind::cycle8)] = 1.0;
    w[int(ObjectKind::cycle6)] = big;
    w[int(ObjectKind::cycle4)] = big * (double(objs.total(ObjectKind::cycle6)) + 1.0);
    return w;
}

namespace {

double weighted(const std::array<double, kObjectKinds>& s, const ObjectiveWeights& w) {
    double v = 0.0;
    for (int k = 0; k < kObjectKinds; ++k)
        if (w[k] != 0.0) v += w[k] * s[k];
    return v;
}

}  // namespace

double objective(const std::vector<int>& x, const ObjectList& objs, const ObjectiveWeights& w) {
    return weighted(surviving_objects(objs, x, objs.params.M), w);
}

std::vector<double> gibbs_probabilities(const std::vector<double>& values, const std::vector<char>& feasible,
                                        double beta) {
    if (values.size() != feasible.size()) throw std::invalid_argument("values and feasibility sizes differ");
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (feasible[i] && std::isfinite(values[i])) lo = std::min(lo, values[i]);
    std::vector<double> p(values.size(), 0.0);
    if (!std::isfinite(lo)) return p;
    double z = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (feasible[i] && std::isfinite(values[i])) z += p[i] = std::exp(-beta * (values[i] - lo));
    for (double& x : p) x /= z;
    return p;
}

bool gibbs_step(McmcState& state, const std::vector<int>& index_set, const GibbsProblem& problem, CounterRng& rng) {
    const int d = int(index_set.size());
    long long ncand = 1;
    for (int t = 0; t < d; ++t) {
        ncand *= problem.values;
        if (ncand > 4096) throw std::invalid_argument("block too large to enumerate");
    }
    std::vector<double> values(ncand, 0.0);
    std::vector<char> ok(ncand, 0);
    auto assign = [&](std::vector<int>& x, long long c) {
        for (int t = 0; t < d; ++t) {
            x[index_set[t]] = int(c % problem.values);
            c /= problem.values;
        }
    };
#pragma omp parallel for schedule(dynamic, 1)
    for (long long c = 0; c < ncand; ++c) {
        std::vector<int> x = state.x;
        assign(x, c);
        if (problem.feasible && !problem.feasible(x)) continue;
        double v = problem.objective(x);
        if (!std::isfinite(v)) continue;
        values[c] = v;
        ok[c] = 1;
    }
    auto p = gibbs_probabilities(values, ok, state.beta);
    long long best_c = -1;
    for (long long c = 0; c < ncand; ++c)
        if (ok[c] && (best_c < 0 || values[c] < values[best_c])) best_c = c;
    ++state.iteration;
    if (best_c < 0) return false;
    if (values[best_c] < state.best_value) {
        state.best_x = state.x;
        assign(state.best_x, best_c);
        state.best_value = values[best_c];
    }
    long long pick = -1;
    if (values[best_c] == 0.0) {
        pick = best_c;
    } else {
        double u = rng.uniform(), acc = 0.0;
        for (long long c = 0; c < ncand; ++c) {
            if (!ok[c]) continue;
            acc += p[c];
            pick = c;
            if (u < acc) break;
        }
    }
    assign(state.x, pick);
    state.value = values[pick];
    return true;
}

McmcResult run_gibbs(const GibbsProblem& problem, const std::vector<int>& init,
                     const std::vector<std::vector<int>>& index_sets, const McmcConfig& cfg,
                     const std::function<void(const McmcState&)>& on_step) {
    if (int(init.size()) != problem.n) throw std::invalid_argument("initial vector has wrong size");
    if (problem.feasible && !problem.feasible(init)) throw std::invalid_argument("initial vector is infeasible");
    McmcResult res;
    McmcState st;
    st.x = init;
    st.value = problem.objective(init);
    st.best_x = init;
    st.best_value = st.value;
    st.beta = cfg.beta_init ? *cfg.beta_init : (st.value > 0 ? 5.0 / st.value : 1.0);
    CounterRng rng(cfg.seed, 0x6d636d63ULL);
    res.trace.push_back({0, st.value, st.best_value, st.beta});
    if (on_step) on_step(st);
    std::vector<int> order(index_sets.size());
    std::iota(order.begin(), order.end(), 0);
    bool done = index_sets.empty() || (cfg.stop_at_zero && st.best_value == 0.0);
    while (!done) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        for (int s : order) {
            if (!gibbs_step(st, index_sets[s], problem, rng)) ++res.stalled;
            ++res.updates;
            if (on_step) on_step(st);
            res.trace.push_back({res.updates, st.value, st.best_value, st.beta});
            if ((cfg.stop_at_zero && st.best_value == 0.0) || res.updates >= cfg.max_updates) {
                done = true;
                break;
            }
        }
        st.beta = std::min(st.beta * cfg.beta_growth, cfg.beta_cap);
    }
    res.best_x = st.best_x;
    res.best_value = st.best_value;
    return res;
}

namespace {

std::vector<std::vector<int>> object_entries(const ObjectList& objs, std::vector<long long>& mult) {
    std::vector<std::vector<int>> out;
    for (const auto& g : objs.groups) {
        std::set<int> s;
        for (auto [e, c] : objs.patterns[g.a]) s.insert(e);
        if (g.b >= 0)
            for (auto [e, c] : objs.patterns[g.b]) s.insert(e);
        out.emplace_back(s.begin(), s.end());
        mult.push_back(g.mult);
    }
    return out;
}

}  // namespace

std::vector<double> entry_involvement(const ObjectList& objs) {
    std::vector<long long> mult;
    auto ent = object_entries(objs, mult);
    std::vector<double> inv(objs.entries, 0.0);
    for (std::size_t g = 0; g < ent.size(); ++g)
        for (int e : ent[g]) inv[e] += double(mult[g]);
    return inv;
}

std::vector<std::vector<int>> build_index_sets(const ObjectList& objs, int delta) {
    if (delta < 1) throw std::invalid_argument("delta must be at least 1");
    const int n = objs.entries;
    std::vector<long long> mult;
    auto ent = object_entries(objs, mult);
    std::vector<double> corr(std::size_t(n) * n, 0.0);
    for (std::size_t g = 0; g < ent.size(); ++g)
        for (int a : ent[g])
            for (int b : ent[g])
                if (a != b) corr[std::size_t(a) * n + b] += double(mult[g]);
    std::vector<std::vector<int>> sets;
    for (int a = 0; a < n; ++a) {
        std::vector<int> others;
        for (int b = 0; b < n; ++b)
            if (b != a) others.push_back(b);
        std::stable_sort(others.begin(), others.end(), [&](int x, int y) {
            return corr[std::size_t(a) * n + x] > corr[std::size_t(a) * n + y];
        });
        std::vector<int> s = {a};
        for (int t = 0; t < delta - 1 && t < int(others.size()); ++t) s.push_back(others[t]);
        sets.push_back(s);
    }
    return sets;
}

bool relocation_feasible(const std::vector<int>& x, const std::vector<int>& x0, int M, const McmcConfig& cfg) {
    const int hi = cfg.depth ? *cfg.depth : M;
    const int n = int(x.size());
    const int l1 = cfg.l1_bound ? *cfg.l1_bound : n / 4;
    const int linf = cfg.linf_bound ? *cfg.linf_bound : M - 1;
    int moved = 0, dist1 = 0;
    for (int i = 0; i < n; ++i) {
        if (x[i] < 0 || x[i] >= hi) return false;
        moved += x[i] != 0;
        int dd = std::abs(x[i] - x0[i]);
        if (dd > linf) return false;
        dist1 += dd;
    }
    return dist1 <= l1 && moved <= cfg.density_cap * n + 1e-9;
}

IntGrid quantize_init(const ProbabilityMatrix& P, const IntGrid& K, const ObjectList& objs, const McmcConfig& cfg,
                      int M) {
    const int n = K.size(), m = P.rows - 1;
    if (P.cols != M) throw std::invalid_argument("P must have M columns");
    if (!objs.patterns.empty() && objs.entries != n) throw std::invalid_argument("object list does not match K");
    const int cols = cfg.depth ? std::min(*cfg.depth, M) : M;
    std::vector<double> inv = objs.patterns.empty() ? std::vector<double>(n, 0.0) : entry_involvement(objs);
    CounterRng rng(cfg.seed, 0x696e6974ULL);
    IntGrid Mr(K.rows, K.cols, 0);
    std::vector<double> weight(n, 0.0);
    for (int i = 0; i <= m; ++i) {
        std::vector<int> members;
        for (int e = 0; e < n; ++e)
            if (K.v[e] == i) members.push_back(e);
        const int pop = int(members.size());
        if (pop == 0) continue;
        std::vector<double> t(cols);
        double rs = 0.0;
        for (int j = 0; j < cols; ++j) rs += t[j] = n * P(i, j);
        // Largest-remainder rounding of the row to the component population.
        std::vector<int> q(cols, 0);
        if (rs <= 0) {
            q[0] = pop;
        } else {
            int used = 0;
            std::vector<std::pair<double, int>> rem;
            for (int j = 0; j < cols; ++j) {
                double s = t[j] * pop / rs;
                q[j] = int(std::floor(s));
                used += q[j];
                rem.push_back({-(s - q[j]), j});
            }
            std::sort(rem.begin(), rem.end());
            for (int r = 0; used < pop; ++r, ++used) ++q[rem[r % cols].second];
        }
        std::vector<int> pool = members;
        for (int j = 1; j < cols; ++j)
            for (int c = 0; c < q[j] && !pool.empty(); ++c) {
                double tot = 0.0;
                for (int e : pool) tot += 1.0 + inv[e];
                double u = rng.uniform() * tot, acc = 0.0;
                std::size_t k = 0;
                for (; k + 1 < pool.size(); ++k) {
                    acc += 1.0 + inv[pool[k]];
                    if (u < acc) break;
                }
                Mr.v[pool[k]] = j;
                weight[pool[k]] = 1.0 + inv[pool[k]];
                pool.erase(pool.begin() + std::ptrdiff_t(k));
            }
    }
    // Density repair: return the least involved relocations to X_0.
    int moved = 0;
    for (int x : Mr.v) moved += x != 0;
    while (moved > cfg.density_cap * n + 1e-9) {
        int worst = -1;
        for (int e = 0; e < n; ++e)
            if (Mr.v[e] != 0 && (worst < 0 || weight[e] < weight[worst])) worst = e;
        Mr.v[worst] = 0;
        --moved;
    }
    return Mr;
}

McmcResult run_mcmc(const IntGrid& init, const ObjectList& objs, const ObjectiveWeights& w, const McmcConfig& cfg) {
    const int M = objs.params.M;
    const int n = init.size();
    if (objs.groups.empty()) {
        McmcResult r;
        r.best_x = init.v;
        r.trace.push_back({0, 0.0, 0.0, 0.0});
        return r;
    }
    if (objs.entries != n) throw std::invalid_argument("relocation matrix does not match object list");
    bool locked = false;
    GibbsProblem prob;
    prob.n = n;
    prob.values = cfg.depth ? std::min(*cfg.depth, M) : M;
    prob.feasible = [&](const std::vector<int>& x) { return relocation_feasible(x, init.v, M, cfg); };
    prob.objective = [&](const std::vector<int>& x) {
        auto s = surviving_objects(objs, x, M);
        if (locked && (s[int(ObjectKind::cycle6)] > 0 || s[int(ObjectKind::cycle4)] > 0))
            return std::numeric_limits<double>::infinity();
        return weighted(s, w);
    };
    std::function<void(const McmcState&)> on_step;
    if (cfg.lock_cycle6 && w[int(ObjectKind::cycle6)] > 0) {
        on_step = [&](const McmcState& st) {
            if (locked) return;
            auto s = surviving_objects(objs, st.x, M);
            locked = s[int(ObjectKind::cycle6)] == 0 && s[int(ObjectKind::cycle4)] == 0;
        };
    }
    return run_gibbs(prob, init.v, build_index_sets(objs, cfg.delta), cfg, on_step);
}

}  // namespace mdsc
