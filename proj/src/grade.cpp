#include "mdsc/grade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mdsc/patterns.hpp"

namespace mdsc {

GradeTarget parse_grade_target(const std::string& s) {
    if (s == "cycle6") return GradeTarget::cycle6;
    if (s == "cycle8") return GradeTarget::cycle8;
    if (s == "concat") return GradeTarget::concat;
    throw std::invalid_argument("unknown grade target '" + s + "'");
}

std::string to_string(GradeTarget t) {
    switch (t) {
        case GradeTarget::cycle6: return "cycle6";
        case GradeTarget::cycle8: return "cycle8";
        case GradeTarget::concat: return "concat";
    }
    return "?";
}

long long binom(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::array<double, 4> w_coeffs(int g, int k) {
    if (k < 4) throw std::invalid_argument("cycle-8 weights need kappa >= 4");
    if (g < 3) throw std::invalid_argument("cycle-8 weights need gamma >= 3");
    auto C = [](int n, int r) { return double(binom(n, r)); };
    std::array<double, 4> w{};
    w[0] = C(g, 2) * C(k, 2);
    w[1] = 3 * C(g, 2) * C(k, 3) + 3 * C(g, 3) * C(k, 2);
    w[2] = 18 * C(g, 3) * C(k, 3);
    w[3] = 6 * C(g, 2) * C(k, 4) + 36 * C(g, 3) * C(k, 4);
    if (g >= 4) w[3] += 6 * C(g, 4) * C(k, 2) + 36 * C(g, 4) * C(k, 3) + 72 * C(g, 4) * C(k, 4);
    return w;
}

LambdaCoeffs lambda_coeffs(int g, int k) {
    if (g != 3 && g != 4) throw std::invalid_argument("dominant concat coefficients are tabulated for gamma in {3,4}");
    auto C = [](int n, int r) { return double(binom(n, r)); };
    LambdaCoeffs l;
    l.l66 = 36 * C(k, 4) * C(g, 3);
    l.l68 = 360 * C(k, 5) * C(g, 3);
    l.l88 = 5400 * C(k, 6) * C(g, 3);
    if (g == 4) {
        l.l66 += 288 * C(k, 4) * C(g, 4);
        l.l68 += 1152 * C(k, 4) * C(g, 4) + 11520 * C(k, 5) * C(g, 4);
        l.l88 += 864 * C(k, 4) * C(g, 4) + 17280 * C(k, 5) * C(g, 4) + 120960 * C(k, 6) * C(g, 4);
    }
    return l;
}

FactorProduct n6_term(int gamma, int kappa) {
    FactorProduct t;
    t.weight = 6.0 * double(binom(gamma, 3)) * double(binom(kappa, 3));
    t.factors = {{{1}, 3}, {{-1}, 3}};
    return t;
}

std::vector<FactorProduct> n8_terms(const std::array<double, 4>& w) {
    std::vector<FactorProduct> terms;
    if (w[0] != 0.0) terms.push_back({w[0], {{{2}, 2}, {{-2}, 2}}});
    if (w[1] != 0.0) terms.push_back({w[1], {{{2}, 1}, {{-2}, 1}, {{1}, 2}, {{-1}, 2}}});
    if (w[2] != 0.0) terms.push_back({w[2], {{{2}, 1}, {{1}, 2}, {{-1}, 4}}});
    if (w[3] != 0.0) terms.push_back({w[3], {{{1}, 4}, {{-1}, 4}}});
    return terms;
}

FactorProduct concat_term(int k, int l, double weight) {
    FactorProduct t;
    t.weight = weight;
    t.factors = {{{1, 1}, 1}, {{-1, -1}, 1}};
    if (k > 1) {
        t.factors.push_back({{1, 0}, k - 1});
        t.factors.push_back({{-1, 0}, k - 1});
    }
    if (l > 1) {
        t.factors.push_back({{0, 1}, l - 1});
        t.factors.push_back({{0, -1}, l - 1});
    }
    return t;
}

namespace {

ValueGrad sum_terms(const std::vector<FactorProduct>& terms, const ProbabilityMatrix& P, bool with_grad) {
    ValueGrad acc;
    acc.grad = ProbabilityMatrix(P.rows, P.cols, 0.0);
    for (const auto& t : terms) {
        auto r = evaluate_product(t, P, with_grad);
        acc.value += r.value;
        if (with_grad)
            for (std::size_t i = 0; i < acc.grad.v.size(); ++i) acc.grad.v[i] += r.grad.v[i];
    }
    return acc;
}

std::vector<FactorProduct> concat_terms(const ConcatWeights& w, int gamma, int kappa) {
    auto lam = lambda_coeffs(gamma, kappa);
    std::vector<FactorProduct> terms;
    if (w.w66 != 0.0) terms.push_back(concat_term(3, 3, w.w66 * lam.l66));
    if (w.w68 != 0.0) terms.push_back(concat_term(3, 4, w.w68 * lam.l68));
    if (w.w88 != 0.0) terms.push_back(concat_term(4, 4, w.w88 * lam.l88));
    return terms;
}

bool is_prime(int z) {
    if (z < 2) return false;
    for (int d = 2; d * d <= z; ++d)
        if (z % d == 0) return false;
    return true;
}

}  // namespace

double n6(const ProbabilityMatrix& P, int gamma, int kappa) {
    return evaluate_product(n6_term(gamma, kappa), P, false).value;
}

ProbabilityMatrix grad_n6(const ProbabilityMatrix& P, int gamma, int kappa) {
    return evaluate_product(n6_term(gamma, kappa), P, true).grad;
}

double n8(const ProbabilityMatrix& P, const std::array<double, 4>& w) { return sum_terms(n8_terms(w), P, false).value; }

ProbabilityMatrix grad_n8(const ProbabilityMatrix& P, const std::array<double, 4>& w) {
    return sum_terms(n8_terms(w), P, true).grad;
}

double n_concat(const ProbabilityMatrix& P, const ConcatWeights& w, int gamma, int kappa) {
    return sum_terms(concat_terms(w, gamma, kappa), P, false).value;
}

ProbabilityMatrix grad_n_concat(const ProbabilityMatrix& P, const ConcatWeights& w, int gamma, int kappa) {
    return sum_terms(concat_terms(w, gamma, kappa), P, true).grad;
}

std::array<double, 3> concat_breakdown(const ProbabilityMatrix& P, int gamma, int kappa) {
    auto lam = lambda_coeffs(gamma, kappa);
    return {evaluate_product(concat_term(3, 3, lam.l66), P, false).value,
            evaluate_product(concat_term(3, 4, lam.l68), P, false).value,
            evaluate_product(concat_term(4, 4, lam.l88), P, false).value};
}

ProbabilityMatrix force(const ProbabilityMatrix& P, const std::vector<double>& pstar) {
    if (int(pstar.size()) != P.rows) throw std::invalid_argument("p* length must equal m+1");
    ProbabilityMatrix Q = P;
    const int M = P.cols;
    for (int i = 0; i < P.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < M; ++j) s += Q(i, j);
        const double shift = (pstar[i] - s) / M;
        double pos = 0.0;
        for (int j = 0; j < M; ++j) {
            Q(i, j) = std::max(0.0, Q(i, j) + shift);
            pos += Q(i, j);
        }
        if (pstar[i] <= 0.0) {
            for (int j = 0; j < M; ++j) Q(i, j) = 0.0;
        } else if (pos <= 0.0) {
            for (int j = 0; j < M; ++j) Q(i, j) = pstar[i] / M;
        } else {
            const double scale = pstar[i] / pos;
            for (int j = 0; j < M; ++j) Q(i, j) *= scale;
        }
    }
    return Q;
}

double relocation_density(const ProbabilityMatrix& P) {
    double stay = 0.0;
    for (int i = 0; i < P.rows; ++i) stay += P(i, 0);
    return 1.0 - stay;
}

ValueGrad grade_objective(const ProbabilityMatrix& P, const CodeParams& params, const GradeConfig& cfg, bool with_grad) {
    switch (cfg.target) {
        case GradeTarget::cycle6: return evaluate_product(n6_term(params.gamma, params.kappa), P, with_grad);
        case GradeTarget::cycle8: {
            auto w = w_coeffs(params.gamma, params.kappa);
            if (cfg.zero_w1.value_or(is_prime(params.z))) w[0] = 0.0;
            return sum_terms(n8_terms(w), P, with_grad);
        }
        case GradeTarget::concat: {
            auto terms = concat_terms(cfg.weights, params.gamma, params.kappa);
            if (cfg.exact66 && cfg.weights.w66 != 0.0) {
                terms.erase(terms.begin());
                for (auto t : concat_class_terms(ConcatKind::c66, params.gamma, params.kappa)) {
                    t.weight *= cfg.weights.w66;
                    terms.push_back(std::move(t));
                }
            }
            return sum_terms(terms, P, with_grad);
        }
    }
    throw std::logic_error("unhandled grade target");
}

GradeResult run_md_grade(const CodeParams& params, const std::vector<double>& pstar, const GradeConfig& cfg) {
    params.validate();
    if (int(pstar.size()) != params.m + 1) throw std::invalid_argument("p* length must equal m+1");
    if (!(cfg.alpha > 0.0)) throw std::invalid_argument("step size must be positive");
    if (!(cfg.T_max >= 0.0 && cfg.T_max <= 1.0)) throw std::invalid_argument("T_max must lie in [0,1]");
    if (cfg.epsilon && !(*cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

    const int cols = params.depth ? *params.depth : params.M;
    GradeResult res;
    ProbabilityMatrix P(params.m + 1, params.M, 0.0);
    for (int i = 0; i <= params.m; ++i) P(i, 0) = pstar[i];

    auto restrict_depth = [&](ProbabilityMatrix& Q) {
        for (int i = 0; i < Q.rows; ++i)
            for (int j = cols; j < Q.cols; ++j) Q(i, j) = 0.0;
    };

    double F_prev = 0.0;
    double eps = cfg.epsilon.value_or(0.0);
    bool eps_set = cfg.epsilon.has_value();
    if (params.M > 1 && cfg.T_max > 0.0) {
        while (res.iterations < cfg.max_iters) {
            auto vg = grade_objective(P, params, cfg, true);
            if (!std::isfinite(vg.value)) throw std::runtime_error("non-finite objective during gradient descent");
            const double F_cur = vg.value;
            if (!eps_set) {
                eps = 1e-8 * F_cur;
                eps_set = true;
            }
            res.objective_trace.push_back(F_cur);
            restrict_depth(vg.grad);
            double norm = 0.0;
            for (double g : vg.grad.v) norm += g * g;
            norm = std::sqrt(norm);
            if (norm == 0.0) break;
            for (std::size_t t = 0; t < P.v.size(); ++t) P.v[t] -= cfg.alpha * vg.grad.v[t] / norm;
            P = force(P, pstar);
            restrict_depth(P);
            P = force(P, pstar);
            ++res.iterations;
            const double T_cur = relocation_density(P);
            res.density_trace.push_back(T_cur);
            if (!(T_cur < cfg.T_max && std::abs(F_cur - F_prev) > eps)) break;
            F_prev = F_cur;
        }
    }
    res.P = P;
    res.objective = grade_objective(P, params, cfg, false).value;
    if (cfg.target == GradeTarget::cycle6)
        res.expected_fl = forecast(res.objective, ForecastKind::cycle6, params).estimate;
    else if (cfg.target == GradeTarget::cycle8)
        res.expected_fl = forecast(res.objective, ForecastKind::cycle8, params).estimate;
    return res;
}

Forecast forecast(double N, ForecastKind kind, const CodeParams& p) {
    Forecast f;
    const double M = p.M, L = p.L, m = p.m;
    if (kind == ForecastKind::cycle6) {
        f.estimate = N * (2 * L - m) / 2.0 * M;
        f.lower = N * (L - m) * M;
        f.span_ok = p.L > p.m + 1;
    } else {
        f.estimate = N * (L - m) * M;
        f.lower = N * (L - 2 * m) * M;
        f.span_ok = p.L > 2 * p.m + 1;
    }
    f.upper = N * L * M;
    return f;
}

std::vector<double> kkt_residual(const ProbabilityMatrix& P, const ProbabilityMatrix& grad) {
    std::vector<double> spread(P.rows, 0.0);
    for (int i = 0; i < P.rows; ++i) {
        double lo = 0.0, hi = 0.0;
        int count = 0;
        for (int j = 0; j < P.cols; ++j) {
            if (P(i, j) <= 1e-6) continue;
            double g = grad(i, j);
            if (count == 0) lo = hi = g;
            lo = std::min(lo, g);
            hi = std::max(hi, g);
            ++count;
        }
        spread[i] = count <= 1 ? 0.0 : hi - lo;
    }
    return spread;
}

}  // namespace mdsc
