#include "mdsc/patterns.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "mdsc/grade.hpp"

namespace mdsc {

int BipartiteObject::edge_index(int cn, int vn) const {
    for (int e = 0; e < int(edges.size()); ++e)
        if (edges[e].first == cn && edges[e].second == vn) return e;
    return -1;
}

void BipartiteObject::validate() const {
    std::set<std::pair<int, int>> seen;
    for (auto [c, v] : edges) {
        if (c < 0 || c >= cn_count || v < 0 || v >= vn_count) throw std::invalid_argument("edge endpoint out of range");
        if (!seen.insert({c, v}).second) throw std::invalid_argument("duplicate edge");
    }
    for (const auto& cyc : cycle_basis) {
        if (cyc.size() < 4 || cyc.size() % 2) throw std::invalid_argument("basis cycle must alternate VN/CN");
        const int g = int(cyc.size()) / 2;
        for (int i = 0; i < g; ++i) {
            int v = cyc[2 * i], c = cyc[2 * i + 1], vn = cyc[(2 * i + 2) % cyc.size()];
            if (edge_index(c, v) < 0 || edge_index(c, vn) < 0) throw std::invalid_argument("basis cycle uses a non-edge");
        }
    }
}

BipartiteObject cycle_object(int g) {
    if (g < 2) throw std::invalid_argument("cycle needs at least two VNs");
    BipartiteObject o;
    o.vn_count = g;
    o.cn_count = g;
    std::vector<int> walk;
    for (int i = 0; i < g; ++i) {
        o.edges.push_back({i, i});
        o.edges.push_back({i, (i + 1) % g});
        walk.push_back(i);
        walk.push_back(i);
    }
    o.cycle_basis.push_back(walk);
    return o;
}

BipartiteObject concat_object(int k, int l) {
    if (k < 2 || l < 2) throw std::invalid_argument("cycle lengths too short");
    BipartiteObject o;
    o.vn_count = 2;
    o.cn_count = 1;
    o.edges = {{0, 0}, {0, 1}};
    for (int g : {k, l}) {
        std::vector<int> walk = {0, 0, 1};
        int prev = 1;
        for (int t = 0; t < g - 1; ++t) {
            int cn = o.cn_count++;
            o.edges.push_back({cn, prev});
            walk.push_back(cn);
            if (t < g - 2) {
                int vn = o.vn_count++;
                o.edges.push_back({cn, vn});
                walk.push_back(vn);
                prev = vn;
            } else {
                o.edges.push_back({cn, 0});
            }
        }
        o.cycle_basis.push_back(walk);
    }
    return o;
}

BipartiteObject single_edge_object() {
    BipartiteObject o;
    o.vn_count = 1;
    o.cn_count = 1;
    o.edges = {{0, 0}};
    return o;
}

std::vector<std::vector<int>> fundamental_cycles(int nv, int nc, const std::vector<std::pair<int, int>>& edges) {
    // Nodes: VN v -> v, CN c -> nv + c.
    const int n = nv + nc;
    std::vector<std::vector<int>> adj(n);
    for (auto [c, v] : edges) {
        adj[v].push_back(nv + c);
        adj[nv + c].push_back(v);
    }
    std::vector<int> parent(n, -2), depth(n, 0);
    for (int s = 0; s < n; ++s) {
        if (parent[s] != -2) continue;
        parent[s] = -1;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int y : adj[x])
                if (parent[y] == -2) {
                    parent[y] = x;
                    depth[y] = depth[x] + 1;
                    q.push(y);
                }
        }
    }
    std::vector<std::vector<int>> basis;
    for (auto [c, v] : edges) {
        int cn = nv + c;
        if (parent[cn] == v || parent[v] == cn) continue;
        // Tree path from cn up/down to v.
        std::vector<int> a = {cn}, b = {v};
        int x = cn, y = v;
        while (depth[x] > depth[y]) a.push_back(x = parent[x]);
        while (depth[y] > depth[x]) b.push_back(y = parent[y]);
        while (x != y) {
            a.push_back(x = parent[x]);
            b.push_back(y = parent[y]);
        }
        b.pop_back();
        std::reverse(b.begin(), b.end());
        a.insert(a.end(), b.begin(), b.end());  // cn ... v
        std::vector<int> walk = {v};
        for (std::size_t i = 0; i + 1 < a.size(); ++i) walk.push_back(a[i]);
        for (int& w : walk)
            if (w >= nv) w -= nv;
        basis.push_back(walk);
    }
    return basis;
}

namespace {

std::vector<int> normalize_labels(const std::vector<int>& lab) {
    std::unordered_map<int, int> re;
    std::vector<int> out(lab.size());
    for (std::size_t i = 0; i < lab.size(); ++i) {
        auto it = re.find(lab[i]);
        if (it == re.end()) it = re.emplace(lab[i], int(re.size())).first;
        out[i] = it->second;
    }
    return out;
}

int count_labels(const std::vector<int>& lab) {
    return lab.empty() ? 0 : *std::max_element(lab.begin(), lab.end()) + 1;
}

long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Restricted-growth strings over n items where forbid[i] lists earlier items
// that must receive a different label.
void enumerate_rgs(int n, const std::vector<std::vector<int>>& forbid, int max_labels,
                   const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int i, int used) {
        if (i == n) {
            visit(cur);
            return;
        }
        for (int x = 0; x <= used && x < max_labels; ++x) {
            bool ok = true;
            for (int j : forbid[i])
                if (j < i && cur[j] == x) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            cur.push_back(x);
            rec(i + 1, std::max(used, x + 1));
            cur.pop_back();
        }
    };
    rec(0, 0);
}

std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>> conflicts(const BipartiteObject& obj) {
    std::vector<std::vector<int>> vf(obj.vn_count), cf(obj.cn_count), vn_of(obj.cn_count), cn_of(obj.vn_count);
    for (auto [c, v] : obj.edges) {
        vn_of[c].push_back(v);
        cn_of[v].push_back(c);
    }
    for (const auto& vs : vn_of)
        for (int a : vs)
            for (int b : vs)
                if (a != b) vf[a].push_back(b);
    for (const auto& cs : cn_of)
        for (int a : cs)
            for (int b : cs)
                if (a != b) cf[a].push_back(b);
    return {vf, cf};
}

}  // namespace

bool valid_partition(const BipartiteObject& obj, const std::vector<int>& vn_class, const std::vector<int>& cn_class) {
    if (int(vn_class.size()) != obj.vn_count || int(cn_class.size()) != obj.cn_count) return false;
    auto [vf, cf] = conflicts(obj);
    for (int v = 0; v < obj.vn_count; ++v)
        for (int w : vf[v])
            if (vn_class[v] == vn_class[w]) return false;
    for (int c = 0; c < obj.cn_count; ++c)
        for (int d : cf[c])
            if (cn_class[c] == cn_class[d]) return false;
    return true;
}

ObjectPatternClass make_class(const BipartiteObject& obj, const std::vector<int>& vn_class,
                              const std::vector<int>& cn_class) {
    if (!valid_partition(obj, vn_class, cn_class)) throw std::invalid_argument("invalid object pattern partition");
    ObjectPatternClass cls;
    cls.vn_class = normalize_labels(vn_class);
    cls.cn_class = normalize_labels(cn_class);
    cls.n_vclasses = count_labels(cls.vn_class);
    cls.n_cclasses = count_labels(cls.cn_class);
    std::map<std::pair<int, int>, int> ids;
    for (auto [c, v] : obj.edges) {
        auto key = std::make_pair(cls.cn_class[c], cls.vn_class[v]);
        auto it = ids.find(key);
        if (it == ids.end()) it = ids.emplace(key, int(ids.size())).first;
        cls.edge_class.push_back(it->second);
    }
    cls.n_eclasses = int(ids.size());
    const int S = int(obj.cycle_basis.size());
    cls.delta.assign(obj.edges.size(), std::vector<int>(S, 0));
    for (int s = 0; s < S; ++s) {
        const auto& w = obj.cycle_basis[s];
        const int g = int(w.size()) / 2;
        for (int i = 0; i < g; ++i) {
            int v = w[2 * i], c = w[2 * i + 1], vn = w[(2 * i + 2) % w.size()];
            int e1 = obj.edge_index(c, v), e2 = obj.edge_index(c, vn);
            if (e1 < 0 || e2 < 0) throw std::invalid_argument("basis cycle uses a non-edge");
            if (cls.delta[e1][s] != 0 || cls.delta[e2][s] != 0)
                throw std::invalid_argument("basis cycle repeats an edge");
            cls.delta[e1][s] = 1;
            cls.delta[e2][s] = -1;
        }
    }
    cls.exponents.assign(cls.n_eclasses, std::vector<int>(S, 0));
    for (std::size_t e = 0; e < obj.edges.size(); ++e)
        for (int s = 0; s < S; ++s) cls.exponents[cls.edge_class[e]][s] += cls.delta[e][s];
    return cls;
}

std::vector<Automorphism> automorphisms(const BipartiteObject& obj) {
    const int nv = obj.vn_count, nc = obj.cn_count, n = nv + nc;
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto [c, v] : obj.edges) adj[v][nv + c] = adj[nv + c][v] = 1;
    std::vector<int> deg(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) deg[i] += adj[i][j];
    std::vector<int> img(n, -1);
    std::vector<char> used(n, 0);
    std::vector<Automorphism> out;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            Automorphism a;
            a.vn.assign(img.begin(), img.begin() + nv);
            for (int c = 0; c < nc; ++c) a.cn.push_back(img[nv + c] - nv);
            out.push_back(std::move(a));
            return;
        }
        const int lo = i < nv ? 0 : nv, hi = i < nv ? nv : n;
        for (int t = lo; t < hi; ++t) {
            if (used[t] || deg[t] != deg[i]) continue;
            bool ok = true;
            for (int j = 0; j < i && ok; ++j)
                if (adj[i][j] != adj[t][img[j]]) ok = false;
            if (!ok) continue;
            used[t] = 1;
            img[i] = t;
            rec(i + 1);
            used[t] = 0;
        }
        img[i] = -1;
    };
    rec(0);
    return out;
}

long long induced_class_symmetries(const BipartiteObject& obj, const ObjectPatternClass& cls,
                                   const std::vector<Automorphism>& aut) {
    std::set<std::vector<int>> induced;
    for (const auto& a : aut) {
        std::vector<int> sigma(cls.n_vclasses + cls.n_cclasses, -1);
        bool ok = true;
        for (int v = 0; v < obj.vn_count && ok; ++v) {
            int from = cls.vn_class[v], to = cls.vn_class[a.vn[v]];
            if (sigma[from] == -1)
                sigma[from] = to;
            else if (sigma[from] != to)
                ok = false;
        }
        for (int c = 0; c < obj.cn_count && ok; ++c) {
            int from = cls.n_vclasses + cls.cn_class[c], to = cls.n_vclasses + cls.cn_class[a.cn[c]];
            if (sigma[from] == -1)
                sigma[from] = to;
            else if (sigma[from] != to)
                ok = false;
        }
        if (ok) induced.insert(sigma);
    }
    return (long long)induced.size();
}

long long class_cardinality(const BipartiteObject& obj, const ObjectPatternClass& cls, int gamma, int kappa) {
    auto aut = automorphisms(obj);
    long long sym = induced_class_symmetries(obj, cls, aut);
    long long labelings = factorial(cls.n_vclasses) * factorial(cls.n_cclasses);
    if (labelings % sym) throw std::logic_error("class symmetry does not divide labelings");
    return labelings / sym * binom(kappa, cls.n_vclasses) * binom(gamma, cls.n_cclasses);
}

std::vector<ObjectPatternClass> enumerate_classes(const BipartiteObject& obj, int max_v, int max_c) {
    auto [vf, cf] = conflicts(obj);
    auto aut = automorphisms(obj);
    std::vector<std::vector<int>> vparts, cparts;
    enumerate_rgs(obj.vn_count, vf, max_v, [&](const std::vector<int>& p) { vparts.push_back(p); });
    enumerate_rgs(obj.cn_count, cf, max_c, [&](const std::vector<int>& p) { cparts.push_back(p); });
    std::vector<ObjectPatternClass> out;
    std::vector<int> tv(obj.vn_count), tc(obj.cn_count);
    for (const auto& pv : vparts)
        for (const auto& pc : cparts) {
            bool canonical = true;
            for (const auto& a : aut) {
                for (int v = 0; v < obj.vn_count; ++v) tv[v] = pv[a.vn[v]];
                for (int c = 0; c < obj.cn_count; ++c) tc[c] = pc[a.cn[c]];
                auto nv = normalize_labels(tv), nc = normalize_labels(tc);
                if (std::tie(nv, nc) < std::tie(pv, pc)) {
                    canonical = false;
                    break;
                }
            }
            if (canonical) out.push_back(make_class(obj, pv, pc));
        }
    return out;
}

FactorProduct class_factor_product(const ObjectPatternClass& cls, double weight) {
    FactorProduct fp;
    fp.weight = weight;
    std::map<std::vector<int>, int> mult;
    for (const auto& e : cls.exponents)
        if (std::any_of(e.begin(), e.end(), [](int x) { return x != 0; })) ++mult[e];
    for (const auto& [power, k] : mult) fp.factors.push_back({power, k});
    return fp;
}

namespace {

CoefficientArray unit_array(int dims) {
    CoefficientArray one(std::vector<int>(dims, 0), std::vector<int>(dims, 1));
    one.values[0] = 1.0;
    return one;
}

void add_scaled(CoefficientArray& acc, const CoefficientArray& a, double w) {
    if (acc.values.empty()) {
        acc = a;
        for (double& x : acc.values) x *= w;
        return;
    }
    const int n = a.dims();
    std::vector<int> off(n), shp(n);
    for (int d = 0; d < n; ++d) {
        off[d] = std::min(acc.offset[d], a.offset[d]);
        shp[d] = std::max(acc.offset[d] + acc.shape[d], a.offset[d] + a.shape[d]) - off[d];
    }
    CoefficientArray out(off, shp);
    auto copy_in = [&](const CoefficientArray& src, double scale) {
        std::vector<int> idx(n, 0), e(n);
        for (std::size_t lin = 0; lin < src.values.size(); ++lin) {
            for (int d = 0; d < n; ++d) e[d] = src.offset[d] + idx[d];
            out.ref(e) += scale * src.values[lin];
            for (int d = n - 1; d >= 0; --d) {
                if (++idx[d] < src.shape[d]) break;
                idx[d] = 0;
            }
        }
    };
    copy_in(acc, 1.0);
    copy_in(a, w);
    acc = std::move(out);
}

double product_probability(const FactorProduct& fp, const ProbabilityMatrix& P) {
    if (fp.factors.empty()) return fp.weight;
    return evaluate_product(fp, P, false).value;
}

}  // namespace

CoefficientArray char_poly_class(const ObjectPatternClass& cls, const ProbabilityMatrix& P) {
    const int S = cls.exponents.empty() ? 0 : int(cls.exponents.front().size());
    auto fp = class_factor_product(cls);
    if (fp.factors.empty()) return unit_array(2 * S);
    std::vector<CoefficientArray> list;
    for (const auto& f : fp.factors) {
        auto F = coupling_array(P, f.power);
        for (int t = 0; t < f.mult; ++t) list.push_back(F);
    }
    return conv(list);
}

std::vector<WeightedClass> object_classes(const BipartiteObject& obj, int gamma, int kappa) {
    obj.validate();
    auto aut = automorphisms(obj);
    std::vector<WeightedClass> out;
    for (auto& cls : enumerate_classes(obj, kappa, gamma)) {
        long long sym = induced_class_symmetries(obj, cls, aut);
        long long lab = factorial(cls.n_vclasses) * factorial(cls.n_cclasses);
        long long card = lab / sym * binom(kappa, cls.n_vclasses) * binom(gamma, cls.n_cclasses);
        if (card > 0) out.push_back({std::move(cls), card});
    }
    return out;
}

CoefficientArray char_poly_object(const BipartiteObject& obj, int gamma, int kappa, const ProbabilityMatrix& P) {
    if (obj.vn_count + obj.cn_count > 16) throw std::length_error("object too large for exhaustive class enumeration");
    CoefficientArray acc;
    for (const auto& wc : object_classes(obj, gamma, kappa)) add_scaled(acc, char_poly_class(wc.cls, P), double(wc.cardinality));
    if (acc.values.empty()) acc = CoefficientArray(std::vector<int>(2 * obj.cycle_basis.size(), 0),
                                                   std::vector<int>(2 * obj.cycle_basis.size(), 1));
    return acc;
}

double expected_active_patterns(const BipartiteObject& obj, int gamma, int kappa, const ProbabilityMatrix& P) {
    if (obj.vn_count + obj.cn_count > 16) throw std::length_error("object too large for exhaustive class enumeration");
    double total = 0.0;
    for (const auto& wc : object_classes(obj, gamma, kappa))
        total += product_probability(class_factor_product(wc.cls, double(wc.cardinality)), P);
    return total;
}

std::pair<int, int> concat_lengths(ConcatKind k) {
    switch (k) {
        case ConcatKind::c66: return {3, 3};
        case ConcatKind::c68: return {3, 4};
        case ConcatKind::c88: return {4, 4};
    }
    return {0, 0};
}

ConcatKind parse_concat_kind(const std::string& s) {
    if (s == "6-6" || s == "66" || s == "cfg66") return ConcatKind::c66;
    if (s == "6-8" || s == "68" || s == "cfg68") return ConcatKind::c68;
    if (s == "8-8" || s == "88" || s == "cfg88") return ConcatKind::c88;
    throw std::invalid_argument("unknown configuration '" + s + "'");
}

std::string to_string(ConcatKind k) {
    switch (k) {
        case ConcatKind::c66: return "6-6";
        case ConcatKind::c68: return "6-8";
        case ConcatKind::c88: return "8-8";
    }
    return "?";
}

std::vector<FactorProduct> concat_class_terms(ConcatKind kind, int gamma, int kappa) {
    auto [k, l] = concat_lengths(kind);
    std::vector<FactorProduct> terms;
    for (const auto& wc : object_classes(concat_object(k, l), gamma, kappa))
        terms.push_back(class_factor_product(wc.cls, double(wc.cardinality)));
    return terms;
}

namespace {

using Walk = std::vector<int>;  // cyclic sequence of entries r*cols + c

std::vector<Walk> grid_cycles(int R, int Cn, int g) {
    std::set<Walk> out;
    std::vector<int> rows(g, 0), cols(g, 0);
    const int n = 2 * g;
    std::function<void(int)> pick_cols;
    std::function<void(int)> pick_rows = [&](int t) {
        if (t == g) {
            if (rows[g - 1] == rows[0]) return;
            pick_cols(0);
            return;
        }
        for (int r = 0; r < R; ++r) {
            if (t > 0 && rows[t - 1] == r) continue;
            rows[t] = r;
            pick_rows(t + 1);
        }
    };
    pick_cols = [&](int t) {
        if (t == g) {
            if (cols[g - 1] == cols[0]) return;
            Walk w(n);
            for (int i = 0; i < g; ++i) {
                w[2 * i] = rows[i] * Cn + cols[i];
                w[2 * i + 1] = rows[i] * Cn + cols[(i + 1) % g];
            }
            Walk s = w;
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) return;
            Walk best;
            for (int r = 0; r < n; ++r)
                for (int dir = 0; dir < 2; ++dir) {
                    Walk c(n);
                    for (int i = 0; i < n; ++i) c[i] = dir == 0 ? w[(r + i) % n] : w[((r - i) % n + n) % n];
                    if (best.empty() || c < best) best = c;
                }
            out.insert(best);
            return;
        }
        for (int c = 0; c < Cn; ++c) {
            if (t > 0 && cols[t - 1] == c) continue;
            cols[t] = c;
            pick_cols(t + 1);
        }
    };
    pick_rows(0);
    return {out.begin(), out.end()};
}

struct ChainRef {
    int walk;
    int before;  // entry preceding the chain in the walk
    int after;   // entry following the chain
};

// Chains: consecutive same-row entry pairs; key is the ordered pair (min,max).
std::vector<std::pair<std::pair<int, int>, ChainRef>> walk_chains(const Walk& w, int id, int Cn) {
    std::vector<std::pair<std::pair<int, int>, ChainRef>> out;
    const int n = int(w.size());
    for (int t = 0; t < n; ++t) {
        int x = w[t], y = w[(t + 1) % n];
        if (x / Cn != y / Cn) continue;
        int before = w[(t - 1 + n) % n], after = w[(t + 2) % n];
        if (x > y) {
            std::swap(x, y);
            std::swap(before, after);
        }
        out.push_back({{x, y}, {id, before, after}});
    }
    return out;
}

}  // namespace

std::vector<PatternCensusRow> census(ConcatKind kind, int gamma_max, bool all_strata) {
    auto [k, l] = concat_lengths(kind);
    const int nv_obj = k + l - 2, nc_obj = k + l - 1;
    std::map<std::tuple<int, int, int>, long long> tally;  // (E, V, C)
    for (int R = 2; R <= std::min(gamma_max, nc_obj); ++R)
        for (int Cn = 2; Cn <= nv_obj; ++Cn) {
            auto A = grid_cycles(R, Cn, k);
            auto B = k == l ? A : grid_cycles(R, Cn, l);
            std::map<std::pair<int, int>, std::vector<ChainRef>> index;
            for (int b = 0; b < int(B.size()); ++b)
                for (auto& [key, ref] : walk_chains(B[b], b, Cn)) index[key].push_back(ref);
            for (int a = 0; a < int(A.size()); ++a) {
                std::set<int> aset(A[a].begin(), A[a].end());
                std::set<int> matched;
                for (auto& [key, ra] : walk_chains(A[a], a, Cn)) {
                    auto it = index.find(key);
                    if (it == index.end()) continue;
                    for (const auto& rb : it->second) {
                        if (k == l && rb.walk <= a) continue;
                        if (matched.count(rb.walk)) continue;
                        const Walk& bw = B[rb.walk];
                        std::set<int> bset(bw.begin(), bw.end());
                        if (bset.count(ra.before) || bset.count(ra.after) || aset.count(rb.before) ||
                            aset.count(rb.after))
                            continue;
                        std::set<int> u = aset;
                        u.insert(bset.begin(), bset.end());
                        std::set<int> rows, cols;
                        for (int e : u) {
                            rows.insert(e / Cn);
                            cols.insert(e % Cn);
                        }
                        if (int(rows.size()) != R || int(cols.size()) != Cn) continue;
                        matched.insert(rb.walk);
                        ++tally[{int(u.size()), Cn, R}];
                    }
                }
            }
        }
    std::set<int> strata;
    for (const auto& [key, cnt] : tally) strata.insert(std::get<0>(key));
    std::set<int> keep;
    for (auto it = strata.rbegin(); it != strata.rend() && (all_strata || keep.size() < 3); ++it) keep.insert(*it);
    std::vector<PatternCensusRow> rows;
    for (const auto& [key, cnt] : tally) {
        auto [E, V, C] = key;
        if (!keep.count(E)) continue;
        rows.push_back({kind, E, V, C, cnt});
    }
    return rows;
}

}  // namespace mdsc
