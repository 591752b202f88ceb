#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mc_oracle.hpp"
#include "mdsc/flcount.hpp"
#include "mdsc/grade.hpp"
#include "mdsc/io.hpp"
#include "mdsc/mcmc.hpp"
#include "mdsc/patterns.hpp"
#include "mdsc/simchan.hpp"
#include "random_instance.hpp"
#include "table_rows.hpp"
#include "test_util.hpp"

using namespace mdsc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Log {
public:
    void check(bool ok, const std::string& what) {
        pass_ &= ok;
        lines_ << (ok ? "    ok   " : "    MISS ") << what << '\n';
    }
    void note(const std::string& what) { lines_ << "    " << what << '\n'; }
    Outcome done() const { return {pass_, lines_.str()}; }

private:
    bool pass_ = true;
    std::ostringstream lines_;
};

std::string fmt(const char* f, auto... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ProbabilityMatrix random_P(std::mt19937& rng, int rows, int cols) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    ProbabilityMatrix P(rows, cols);
    double s = 0;
    for (double& x : P.v) s += x = u(rng);
    for (double& x : P.v) x /= s;
    return P;
}

Outcome golden_counts() {
    Log log;
    auto timed = [&](const char* name, double limit, const std::function<void()>& body) {
        auto t0 = std::chrono::steady_clock::now();
        body();
        double t = seconds_since(t0);
        log.check(t < limit, fmt("%s counted in %.1f s (limit %.0f s)", name, t, limit));
    };
    auto eq = [&](const char* what, long long got, long long want) {
        log.check(got == want, fmt("%s = %lld (expected %lld)", what, got, want));
    };

    timed("code 1", 120, [&] {
        auto d = testutil::load_code("md1");
        auto t = testutil::triple_of(d);
        eq("code 1 cycle-6", count_cycles_md(t, d.params, {6})[ObjectKind::cycle6], 3366);
        eq("code 1 SC cycle-6", count_cycles_sc(t, d.params, {6})[ObjectKind::cycle6], 25211);
    });
    timed("code 2", 600, [&] {
        auto d = testutil::load_code("md2");
        auto t = testutil::triple_of(d);
        auto md = count_cycles_md(t, d.params, {4, 6, 8});
        eq("code 2 cycle-4", md[ObjectKind::cycle4], 0);
        eq("code 2 cycle-6", md[ObjectKind::cycle6], 0);
        eq("code 2 cycle-8", md[ObjectKind::cycle8], 206356);
        eq("code 2 SC cycle-8", count_cycles_sc(t, d.params, {8})[ObjectKind::cycle8], 282693);
    });
    const std::vector<ObjectKind> cfg = {ObjectKind::cfg66, ObjectKind::cfg68, ObjectKind::cfg88};
    timed("code 6", 1800, [&] {
        auto d = testutil::load_code("md6");
        auto objs = list_active_objects(*d.K, *d.Lf, d.params, cfg);
        auto md = count_objects_md(objs, *d.Mr, d.params.M);
        eq("code 6 cfg66", md[ObjectKind::cfg66], 0);
        eq("code 6 cfg68", md[ObjectKind::cfg68], 0);
        eq("code 6 cfg88", md[ObjectKind::cfg88], 112931);
        eq("code 6 SC cfg88", objs.total(ObjectKind::cfg88), 2001493);
    });
    timed("code 7", 600, [&] {
        auto d = testutil::load_code("md7");
        auto objs = list_active_objects(*d.K, *d.Lf, d.params, cfg);
        auto md = count_objects_md(objs, *d.Mr, d.params.M);
        eq("code 7 cfg66", md[ObjectKind::cfg66], 0);
        eq("code 7 cfg68", md[ObjectKind::cfg68], 11775);
        eq("code 7 cfg88", md[ObjectKind::cfg88], 980750);
        eq("code 7 SC cfg66", objs.total(ObjectKind::cfg66), 4305);
        eq("code 7 SC cfg68", objs.total(ObjectKind::cfg68), 261280);
        eq("code 7 SC cfg88", objs.total(ObjectKind::cfg88), 5984110);
    });
    return log.done();
}

Outcome census_rows() {
    Log log;
    auto t0 = std::chrono::steady_clock::now();
    const auto table = testutil::census_table();
    for (auto kind : {ConcatKind::c66, ConcatKind::c68, ConcatKind::c88}) {
        std::vector<PatternCensusRow> want;
        for (const auto& r : table)
            if (r.config == kind) want.push_back(r);
        auto got = census(kind);
        bool same = got.size() == want.size();
        for (std::size_t i = 0; same && i < got.size(); ++i)
            same = got[i].E == want[i].E && got[i].V == want[i].V && got[i].C == want[i].C &&
                   got[i].multiplier == want[i].multiplier;
        log.check(same, fmt("%s: %zu rows generated, %zu expected", to_string(kind).c_str(), got.size(), want.size()));
        if (!same)
            for (const auto& r : got) log.note(fmt("(%d,%d,%d) -> %lld", r.E, r.V, r.C, r.multiplier));
    }
    double t = seconds_since(t0);
    log.check(t < 60, fmt("census in %.1f s", t));
    return log.done();
}

Outcome forecasts() {
    Log log;
    auto near = [&](const char* what, double got, double want) {
        double rel = std::abs(got - want) / want;
        log.check(rel <= 0.01, fmt("%s %.1f vs %.0f (%.2f%% off)", what, got, want, 100 * rel));
    };
    auto d1 = testutil::load_code("md1");
    auto f1 = forecast(n6(*d1.P, d1.params.gamma, d1.params.kappa), ForecastKind::cycle6, d1.params);
    near("code 1 estimate", f1.estimate, 49782);
    near("code 1 lower", f1.lower, 47162);
    near("code 1 upper", f1.upper, 52402);

    auto d2 = testutil::load_code("md2");
    auto w = w_coeffs(d2.params.gamma, d2.params.kappa);
    w[0] = 0.0;  // prime lifting size
    double N8 = n8(*d2.P, w);
    log.note(fmt("code 2 N8 = %.2f with w = (0, %.0f, %.0f, %.0f)", N8, w[1], w[2], w[3]));
    auto f2 = forecast(N8, ForecastKind::cycle8, d2.params);
    near("code 2 estimate", f2.estimate, 226650);
    near("code 2 lower", f2.lower, 169990);
    near("code 2 upper", f2.upper, 283310);
    return log.done();
}

Outcome grade_runs() {
    Log log;
    {
        auto d = testutil::load_code("md1");
        auto t0 = std::chrono::steady_clock::now();
        auto r = run_md_grade(d.params, {0.5, 0.5}, GradeConfig{});
        double t = seconds_since(t0), worst = 0.0;
        for (std::size_t i = 0; i < r.P.v.size(); ++i) worst = std::max(worst, std::abs(r.P.v[i] - d.P->v[i]));
        log.check(worst <= 0.02, fmt("code 1 largest entry deviation %.4f", worst));
        log.check(t < 300, fmt("code 1 in %.1f s", t));
    }
    {
        auto d = testutil::load_code("md6");
        GradeConfig cfg;
        cfg.target = GradeTarget::concat;
        auto ps = edge_distribution(*d.K, d.params.m);
        auto t0 = std::chrono::steady_clock::now();
        auto r = run_md_grade(d.params, ps, cfg);
        double t = seconds_since(t0);
        const std::vector<double> want{25.90, 65.24, 63.78, 45.65, 28.58};
        std::string got;
        bool ok = int(want.size()) == r.P.rows;
        for (int i = 0; i < r.P.rows; ++i) {
            double moved = 0.0;
            for (int k = 1; k < r.P.cols; ++k) moved += r.P(i, k);
            double pct = 100.0 * moved / ps[i];
            got += fmt("%s%.2f", i ? " " : "", pct);
            if (i < int(want.size())) ok &= std::abs(pct - want[i]) <= 3.0;
        }
        log.check(ok, "code 6 relocation percentages " + got);
        log.check(t < 300, fmt("code 6 in %.1f s", t));
    }
    return log.done();
}

Outcome oracle_equivalence() {
    Log log;
    const std::vector<ObjectKind> kinds = {ObjectKind::cycle6, ObjectKind::cycle8, ObjectKind::cfg66,
                                           ObjectKind::cfg68, ObjectKind::cfg88};
    const std::vector<ObjectKind> cfg = {ObjectKind::cfg66, ObjectKind::cfg68, ObjectKind::cfg88};
    std::mt19937 rng(2718);
    int agree = 0;
    for (int trial = 0; trial < 50; ++trial) {
        auto [p, t] = testutil::random_instance(rng, 500);
        auto H = build_md_matrix(t, p);
        auto brute = brute_force_count(H, kinds);
        auto cyc = count_cycles_md(t, p, {6, 8});
        auto objs = list_active_objects(t.K, t.Lf, p, cfg);
        auto md = count_objects_md(objs, t.Mr, p.M);
        bool ok = cyc[ObjectKind::cycle6] == brute[ObjectKind::cycle6] &&
                  cyc[ObjectKind::cycle8] == brute[ObjectKind::cycle8];
        for (auto k : cfg) ok &= md[k] == brute[k];
        agree += ok;
        if (!ok)
            log.check(false, fmt("instance %d (gamma %d kappa %d z %d L %d m %d M %d) disagrees", trial, p.gamma,
                                 p.kappa, p.z, p.L, p.m, p.M));
    }
    log.check(agree == 50, fmt("%d of 50 instances agree on every kind", agree));
    return log.done();
}

Outcome gradient_checks() {
    Log log;
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(31415);
    const double h = 1e-6;
    auto fd_error = [&](const std::function<double(const ProbabilityMatrix&)>& f, const ProbabilityMatrix& P,
                        const ProbabilityMatrix& g) {
        double scale = 0.0, worst = 0.0;
        for (double x : g.v) scale = std::max(scale, std::abs(x));
        for (std::size_t i = 0; i < P.v.size(); ++i) {
            auto a = P, b = P;
            a.v[i] += h;
            b.v[i] -= h;
            worst = std::max(worst, std::abs((f(a) - f(b)) / (2 * h) - g.v[i]) / std::max(scale, 1e-300));
        }
        return worst;
    };
    double w6 = 0, w8 = 0, wc = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int gamma = 3 + trial % 2, kappa = 6 + trial % 7, m = 1 + trial % 3, M = 1 + (trial / 3) % 4;
        auto P = random_P(rng, m + 1, M);
        w6 = std::max(w6, fd_error([&](const ProbabilityMatrix& Q) { return n6(Q, gamma, kappa); }, P,
                                   grad_n6(P, gamma, kappa)));
        auto w = w_coeffs(gamma, kappa);
        if (trial % 2) w[0] = 0.0;
        w8 = std::max(w8, fd_error([&](const ProbabilityMatrix& Q) { return n8(Q, w); }, P, grad_n8(P, w)));
        ConcatWeights cw;
        wc = std::max(wc, fd_error([&](const ProbabilityMatrix& Q) { return n_concat(Q, cw, gamma, kappa); }, P,
                                   grad_n_concat(P, cw, gamma, kappa)));
    }
    log.check(w6 < 1e-6, fmt("cycle-6 objective: worst relative deviation %.2e", w6));
    log.check(w8 < 1e-6, fmt("cycle-8 objective: worst relative deviation %.2e", w8));
    log.check(wc < 1e-6, fmt("concat objective: worst relative deviation %.2e", wc));
    double t = seconds_since(t0);
    log.check(t < 300, fmt("50 matrices per target in %.1f s", t));
    return log.done();
}

Outcome monte_carlo() {
    Log log;
    std::mt19937 rng(1618);
    const long long samples = 1000000;
    for (int c = 0; c < 10; ++c) {
        const int rows = 2 + c % 2, M = 1 + c % 3;
        auto P = random_P(rng, rows, M);
        auto p6 = testutil::sample_cycle6_probability(P, samples, 100 + c);
        double exact6 = n6(P, 3, 3) / 6.0;
        double z6 = std::abs(p6.mean - exact6) / p6.stderr_;
        log.check(z6 <= 3.0, fmt("config %d cycle-6 probability %.6f vs sampled %.6f (%.2f SE)", c, exact6, p6.mean, z6));

        const int g = 2 + c % 2;
        const int gamma = g == 2 ? 2 + c % 2 : 3, kappa = 3;
        auto obj = cycle_object(g);
        auto est = testutil::sample_active_patterns(obj, gamma, kappa, P, samples, 200 + c);
        double exact = expected_active_patterns(obj, gamma, kappa, P);
        double z = std::abs(est.mean - exact) / est.stderr_;
        log.check(z <= 3.0, fmt("config %d cycle-%d patterns on %dx%d: %.5f vs sampled %.5f (%.2f SE)", c, 2 * g,
                                gamma, kappa, exact, est.mean, z));
    }
    return log.done();
}

Outcome mcmc_toy() {
    Log log;
    CodeParams p{3, 4, 7, 3, 1, 2, {}};
    IntGrid K(3, 4), Lf(3, 4);
    K.v = {1, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1};
    Lf.v = {6, 2, 6, 5, 5, 4, 0, 1, 6, 1, 5, 0};
    auto objs = list_active_objects(K, Lf, p, {ObjectKind::cycle6, ObjectKind::cycle8});
    auto w = cycle_weights(objs);
    McmcConfig cfg;
    cfg.max_updates = 10000;
    const std::vector<int> x0(12, 0);
    int feasible = 0, zeros = 0;
    double lowest = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 1 << 12; ++s) {
        std::vector<int> x(12);
        for (int e = 0; e < 12; ++e) x[e] = (s >> e) & 1;
        if (!relocation_feasible(x, x0, p.M, cfg)) continue;
        ++feasible;
        double v = objective(x, objs, w);
        lowest = std::min(lowest, v);
        zeros += v == 0.0;
    }
    double start = objective(x0, objs, w);
    log.check(start > 0 && lowest == 0.0,
              fmt("exhaustive search: start %.0f, %d of %d feasible relocations reach 0", start, zeros, feasible));
    int hits = 0;
    bool monotone = true;
    for (int r = 0; r < 10; ++r) {
        cfg.seed = 1000 + r;
        auto res = run_mcmc(IntGrid(3, 4, 0), objs, w, cfg);
        hits += res.best_value == 0.0;
        for (std::size_t i = 1; i < res.trace.size(); ++i) monotone &= res.trace[i].best <= res.trace[i - 1].best;
        log.note(fmt("seed %d: best %.0f after %lld updates", 1000 + r, res.best_value, res.updates));
    }
    log.check(hits >= 9, fmt("%d of 10 runs reach 0 within 10^4 updates", hits));
    log.check(monotone, "best-value traces never increase");
    return log.done();
}

Outcome decoder_checks() {
    Log log;
    auto t0 = std::chrono::steady_clock::now();
    auto d = testutil::load_code("md7");
    auto H = build_md_matrix(testutil::triple_of(d), d.params);
    const double rate = design_rate(d.params).value();
    const double sigma = awgn_sigma(3.0, rate);
    std::vector<std::uint8_t> zero(H.cols, 0);
    std::vector<double> clean(H.cols, 2.0 / (sigma * sigma));
    auto r0 = spa_decode(H, clean);
    log.check(r0.converged && r0.hard == zero, "noiseless all-zero frame decodes");
    bool flips = true;
    for (int pos : {0, H.cols / 2, H.cols - 1}) {
        auto llr = clean;
        llr[pos] = -llr[pos];
        auto r = spa_decode(H, llr);
        flips &= r.converged && r.hard == zero;
    }
    log.check(flips, "single flipped bits at three positions are corrected");
    auto sweep = fer_sweep(H, rate, {1.5, 2.5}, 200, DecoderConfig{}, 7);
    const auto &lo = sweep[0], &hi = sweep[1];
    log.check(hi.fer < lo.fer && hi.ci_high < lo.ci_low,
              fmt("FER %.3f [%.3f, %.3f] at 1.5 dB, %.3f [%.3f, %.3f] at 2.5 dB", lo.fer, lo.ci_low, lo.ci_high,
                  hi.fer, hi.ci_low, hi.ci_high));
    double t = seconds_since(t0);
    log.check(t < 1200, fmt("decoder checks in %.1f s", t));
    return log.done();
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"golden short-cycle and configuration counts", golden_counts},
        {"pattern census table", census_rows},
        {"finite-length forecasts", forecasts},
        {"gradient-descent distributions", grade_runs},
        {"structured counting equals brute force", oracle_equivalence},
        {"analytic gradients equal finite differences", gradient_checks},
        {"closed forms equal Monte-Carlo estimates", monte_carlo},
        {"relocation search on an exhaustive toy", mcmc_toy},
        {"belief-propagation decoder on code 7", decoder_checks},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("    exception: ") + e.what() + '\n'};
        }
        std::printf("criterion %zu %s: %s (%.1f s)\n%s", i + 1, out.pass ? "PASS" : "FAIL", criteria[i].first,
                    seconds_since(t0), out.detail.c_str());
        std::fflush(stdout);
        failed += !out.pass;
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
