#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "mdsc/mcmc.hpp"
#include "random_instance.hpp"
#include "test_util.hpp"

using namespace mdsc;

TEST_CASE("counter generator is reproducible and stream separated") {
    CounterRng a(42, 1), b(42, 1), c(42, 2);
    for (int i = 0; i < 100; ++i) {
        auto x = a();
        CHECK(x == b());
        CHECK(x != c());
    }
    CounterRng d(9);
    for (int i = 0; i < 1000; ++i) {
        CHECK(d.below(7) < 7);
        double u = d.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("conditional probabilities") {
    auto p = gibbs_probabilities({0.0, std::log(4.0)}, {1, 1}, 1.0);
    CHECK(p[0] == doctest::Approx(0.8));
    CHECK(p[1] == doctest::Approx(0.2));
    auto q = gibbs_probabilities({0.0, 5.0}, {1, 1}, 1e6);
    CHECK(q[0] == doctest::Approx(1.0));
    auto r = gibbs_probabilities({3.0, 1.0, 2.0}, {0, 1, 0}, 1.0);
    CHECK(r == std::vector<double>{0.0, 1.0, 0.0});
    auto none = gibbs_probabilities({1.0}, {0}, 1.0);
    CHECK(none[0] == 0.0);
}

TEST_CASE("block sampling is stationary for the target distribution") {
    GibbsProblem prob;
    prob.n = 3;
    prob.values = 2;
    auto C = [](const std::vector<int>& x) { return 1.0 + 0.7 * x[0] + 0.4 * x[1] - 0.9 * x[0] * x[2] + 0.5 * x[2]; };
    prob.objective = C;
    McmcConfig cfg;
    cfg.beta_init = 1.0;
    cfg.beta_growth = 1.0;
    cfg.stop_at_zero = false;
    cfg.max_updates = 300000;
    cfg.seed = 3;
    std::map<int, long long> freq;
    long long total = 0;
    run_gibbs(prob, {0, 0, 0}, {{0}, {1}, {2}}, cfg, [&](const McmcState& st) {
        ++freq[st.x[0] + 2 * st.x[1] + 4 * st.x[2]];
        ++total;
    });
    double z = 0.0;
    std::vector<double> target(8);
    for (int s = 0; s < 8; ++s) z += target[s] = std::exp(-C({s & 1, (s >> 1) & 1, (s >> 2) & 1}));
    double tv = 0.0;
    for (int s = 0; s < 8; ++s) tv += std::abs(target[s] / z - double(freq[s]) / double(total));
    CHECK(tv / 2 < 0.01);
}

TEST_CASE("infeasible candidates are never visited") {
    GibbsProblem prob;
    prob.n = 4;
    prob.values = 3;
    prob.objective = [](const std::vector<int>& x) { return 1.0 + x[0] + x[1] + x[2] + x[3]; };
    prob.feasible = [](const std::vector<int>& x) { return x[0] + x[1] + x[2] + x[3] <= 3 && x[3] != 1; };
    McmcConfig cfg;
    cfg.beta_init = 0.1;
    cfg.stop_at_zero = false;
    cfg.max_updates = 2000;
    bool ok = true;
    auto res = run_gibbs(prob, {0, 0, 0, 0}, {{0, 1}, {2, 3}, {1, 3}}, cfg,
                         [&](const McmcState& st) { ok &= prob.feasible(st.x); });
    CHECK(ok);
    CHECK(res.updates == 2000);
    for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i].best <= res.trace[i - 1].best);
}

TEST_CASE("a zero-valued candidate ends the chain") {
    GibbsProblem prob;
    prob.n = 2;
    prob.values = 2;
    prob.objective = [](const std::vector<int>& x) { return x[0] == 1 && x[1] == 0 ? 0.0 : 5.0; };
    McmcConfig cfg;
    auto res = run_gibbs(prob, {0, 0}, {{0, 1}}, cfg);
    CHECK(res.best_value == 0.0);
    CHECK(res.best_x == std::vector<int>{1, 0});
    CHECK(res.updates == 1);
}

TEST_CASE("index sets") {
    std::mt19937 rng(8);
    auto [p, t] = testutil::random_instance(rng, 500);
    p.M = 2;
    auto objs = list_active_objects(t.K, t.Lf, p, {ObjectKind::cycle6, ObjectKind::cycle8});
    auto singles = build_index_sets(objs, 1);
    CHECK(singles.size() == std::size_t(p.gamma * p.kappa));
    for (std::size_t i = 0; i < singles.size(); ++i) CHECK(singles[i] == std::vector<int>{int(i)});
    for (const auto& s : build_index_sets(objs, 3)) {
        CHECK(s.size() == 3);
        CHECK(std::set<int>(s.begin(), s.end()).size() == 3);
    }
    CHECK_THROWS(build_index_sets(objs, 0));

    ObjectList pair;
    pair.entries = 4;
    pair.patterns = {{{0, 1}, {3, -1}}};
    pair.groups = {{ObjectKind::cycle4, 0, -1, 5}};
    auto sets = build_index_sets(pair, 2);
    CHECK(sets[0] == std::vector<int>{0, 3});
    CHECK(sets[3] == std::vector<int>{3, 0});
}

TEST_CASE("objective matches survivor counts") {
    std::mt19937 rng(19);
    const std::vector<ObjectKind> kinds = {ObjectKind::cycle6, ObjectKind::cycle8, ObjectKind::cfg66,
                                           ObjectKind::cfg68, ObjectKind::cfg88};
    for (int trial = 0; trial < 4; ++trial) {
        auto [p, t] = testutil::random_instance(rng, 500);
        auto objs = list_active_objects(t.K, t.Lf, p, kinds);
        auto md = count_objects_md(objs, t.Mr, p.M);
        ObjectiveWeights w{};
        for (auto k : kinds) w[int(k)] = 1.0;
        long long total = 0;
        for (auto k : kinds) total += md[k];
        CHECK(objective(t.Mr.v, objs, w) * p.M == doctest::Approx(double(total)));
        ObjectiveWeights sc{};
        sc[int(ObjectKind::cfg88)] = 1.0;
        CHECK(objective(std::vector<int>(t.Mr.size(), 0), objs, sc) == double(objs.total(ObjectKind::cfg88)));
    }
}

TEST_CASE("cycle mode weights rank cycle-6 above every cycle-8") {
    ObjectList objs;
    objs.totals[int(ObjectKind::cycle8)] = 40;
    objs.totals[int(ObjectKind::cycle6)] = 3;
    auto w = cycle_weights(objs);
    CHECK(w[int(ObjectKind::cycle6)] > 40 * w[int(ObjectKind::cycle8)]);
    CHECK(w[int(ObjectKind::cycle4)] > 3 * w[int(ObjectKind::cycle6)] + 40);
}

TEST_CASE("initialization") {
    CodeParams p{3, 5, 7, 4, 1, 3, {}};
    IntGrid K(3, 5, 0);
    for (int e = 0; e < 15; ++e) K.v[e] = e % 2;
    McmcConfig cfg;
    ProbabilityMatrix single(2, 3, 0.0);
    single(0, 0) = 0.5;
    single(1, 0) = 0.5;
    auto z = quantize_init(single, K, ObjectList{}, cfg, 3);
    for (int x : z.v) CHECK(x == 0);

    auto d = testutil::load_code("md6");
    auto Mr = quantize_init(*d.P, *d.K, ObjectList{}, cfg, d.params.M);
    int moved = 0;
    for (int x : Mr.v) moved += x != 0;
    const int n = Mr.size();
    CHECK(std::abs(moved - 0.35 * n) <= 1.0 + 1e-9);
    CHECK(moved <= 0.35 * n + 1e-9);
}

TEST_CASE("empty object list returns the initial matrix") {
    IntGrid init(3, 4, 1);
    auto r = run_mcmc(init, ObjectList{}, concat_weights(), McmcConfig{});
    CHECK(r.best_x == init.v);
    CHECK(r.best_value == 0.0);
    CHECK(r.updates == 0);
}

TEST_CASE("relocation search is reproducible and never worsens the best value") {
    std::mt19937 rng(41);
    auto [p, t] = testutil::random_instance(rng, 500);
    p.M = 3;
    auto objs = list_active_objects(t.K, t.Lf, p, {ObjectKind::cycle6, ObjectKind::cycle8});
    McmcConfig cfg;
    cfg.max_updates = 300;
    cfg.seed = 77;
    IntGrid init(p.gamma, p.kappa, 0);
    auto w = cycle_weights(objs);
    auto a = run_mcmc(init, objs, w, cfg), b = run_mcmc(init, objs, w, cfg);
    CHECK(a.best_x == b.best_x);
    CHECK(a.trace.size() == b.trace.size());
    CHECK(a.best_value <= objective(init.v, objs, w));
    for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i].best <= a.trace[i - 1].best);
    CHECK(relocation_feasible(a.best_x, init.v, p.M, cfg));
}
