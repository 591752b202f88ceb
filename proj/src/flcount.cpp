#include "mdsc/flcount.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include <omp.h>

namespace mdsc {

CycleCandidate make_candidate(const std::vector<int>& rows, const std::vector<int>& cols) {
    if (rows.size() != cols.size() || rows.size() < 2) throw std::invalid_argument("candidate needs matching rows/cols");
    const int g = int(rows.size());
    CycleCandidate c;
    for (int k = 0; k < g; ++k) {
        c.entries.push_back({rows[k], cols[k]});
        c.entries.push_back({rows[k], cols[(k + 1) % g]});
    }
    return c;
}

int alternating_sum(const CycleCandidate& c, const IntGrid& X) {
    int s = 0;
    for (int t = 0; t < c.length(); ++t) {
        auto [i, j] = c.entries[t];
        if (i < 0 || i >= X.rows || j < 0 || j >= X.cols) throw std::out_of_range("candidate entry outside matrix");
        s += (t % 2 == 0 ? 1 : -1) * X(i, j);
    }
    return s;
}

namespace {
int mod(long long a, int n) { return int(((a % n) + n) % n); }
}  // namespace

bool partition_active(const CycleCandidate& c, const IntGrid& K) { return alternating_sum(c, K) == 0; }

bool relocation_active(const CycleCandidate& c, const IntGrid& Mr, int M) { return mod(alternating_sum(c, Mr), M) == 0; }

bool lifting_survives(const CycleCandidate& c, const IntGrid& Lf, int z) { return mod(alternating_sum(c, Lf), z) == 0; }

ObjectKind parse_object_kind(const std::string& s) {
    if (s == "cycle4") return ObjectKind::cycle4;
    if (s == "cycle6") return ObjectKind::cycle6;
    if (s == "cycle8") return ObjectKind::cycle8;
    if (s == "cfg66") return ObjectKind::cfg66;
    if (s == "cfg68") return ObjectKind::cfg68;
    if (s == "cfg88") return ObjectKind::cfg88;
    throw std::invalid_argument("unknown object kind '" + s + "'");
}

std::string to_string(ObjectKind k) {
    static const char* names[] = {"cycle4", "cycle6", "cycle8", "cfg66", "cfg68", "cfg88"};
    return names[int(k)];
}

bool is_cfg(ObjectKind k) { return k == ObjectKind::cfg66 || k == ObjectKind::cfg68 || k == ObjectKind::cfg88; }

namespace {

struct Graph {
    std::vector<std::vector<int>> vadj;  // VN -> CNs
    const std::vector<std::vector<int>>* cadj = nullptr;  // CN -> VNs, sorted

    explicit Graph(const SparseBinaryMatrix& H) : vadj(H.column_adjacency()), cadj(&H.adj) {}
    bool has(int c, int v) const {
        const auto& r = (*cadj)[c];
        return std::binary_search(r.begin(), r.end(), v);
    }
};

// Every cycle through root v1 whose other VNs pass accept() is visited once.
template <class Accept, class Visit>
void cycles_at_root(const Graph& G, int v1, int length, Accept accept, Visit visit) {
    const auto& cadj = *G.cadj;
    if (length == 4) {
        for (int c1 : G.vadj[v1])
            for (int v2 : cadj[c1]) {
                if (v2 == v1 || !accept(v2)) continue;
                for (int c2 : G.vadj[v2])
                    if (c2 > c1 && G.has(c2, v1)) {
                        GraphCycle cy;
                        cy.length = 4;
                        cy.nodes = {v1, c1, v2, c2, -1, -1, -1, -1};
                        visit(cy);
                    }
            }
        return;
    }
    struct Path {
        int c1, v2, c2, v3;
    };
    std::vector<Path> ps;
    for (int c1 : G.vadj[v1])
        for (int v2 : cadj[c1]) {
            if (v2 == v1 || !accept(v2)) continue;
            for (int c2 : G.vadj[v2]) {
                if (c2 == c1) continue;
                for (int v3 : cadj[c2]) {
                    if (v3 == v1 || v3 == v2 || !accept(v3)) continue;
                    ps.push_back({c1, v2, c2, v3});
                }
            }
        }
    if (length == 6) {
        for (const auto& p : ps) {
            if (p.v2 > p.v3) continue;
            for (int c3 : G.vadj[p.v3]) {
                if (c3 == p.c1 || c3 == p.c2 || !G.has(c3, v1)) continue;
                GraphCycle cy;
                cy.length = 6;
                cy.nodes = {v1, p.c1, p.v2, p.c2, p.v3, c3, -1, -1};
                visit(cy);
            }
        }
        return;
    }
    if (length != 8) throw std::invalid_argument("cycle length must be 4, 6 or 8");
    std::sort(ps.begin(), ps.end(), [](const Path& a, const Path& b) { return a.v3 < b.v3; });
    for (std::size_t a = 0; a < ps.size();) {
        std::size_t b = a;
        while (b < ps.size() && ps[b].v3 == ps[a].v3) ++b;
        for (std::size_t x = a; x < b; ++x)
            for (std::size_t y = x + 1; y < b; ++y) {
                const Path &p = ps[x], &q = ps[y];
                if (p.c1 == q.c1 || p.v2 == q.v2 || p.c2 == q.c2 || p.c1 == q.c2 || p.c2 == q.c1) continue;
                GraphCycle cy;
                cy.length = 8;
                cy.nodes = {v1, p.c1, p.v2, p.c2, p.v3, q.c2, q.v2, q.c1};
                visit(cy);
            }
        a = b;
    }
}

int thread_count(const CountOptions& opt) { return opt.parallel ? omp_get_max_threads() : 1; }

}  // namespace

std::vector<GraphCycle> enumerate_cycles(const SparseBinaryMatrix& H, int length, const CountOptions& opt) {
    Graph G(H);
    const int nv = H.cols;
    const int chunk = 64;
    const int nchunks = (nv + chunk - 1) / chunk;
    std::vector<std::vector<GraphCycle>> parts(nchunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(opt))
    for (int ch = 0; ch < nchunks; ++ch) {
        for (int v1 = ch * chunk; v1 < std::min(nv, (ch + 1) * chunk); ++v1)
            cycles_at_root(G, v1, length, [v1](int v) { return v > v1; },
                           [&](const GraphCycle& c) { parts[ch].push_back(c); });
    }
    std::vector<GraphCycle> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

KindCounts count_cycles(const LabeledProtograph& P, const std::vector<int>& lengths, const CountOptions& opt) {
    const SparseBinaryMatrix H = P.lifted();
    Graph G(H);
    const int z = P.z;
    KindCounts out;
    for (int len : lengths) {
        if (len != 4 && len != 6 && len != 8) throw std::invalid_argument("cycle length must be 4, 6 or 8");
        // A lifted cycle through k copies of its smallest protograph VN is met
        // k times per orbit at offset 0; weights are scaled by lcm(1..4).
        long long scaled = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : scaled) num_threads(thread_count(opt))
        for (int pv = 0; pv < P.n_vn; ++pv) {
            const int v1 = pv * z;
            cycles_at_root(G, v1, len, [pv, z](int v) { return v / z >= pv; },
                           [&](const GraphCycle& c) {
                               int k = 0;
                               for (int t = 0; t < c.length; t += 2) k += c.nodes[t] / z == pv;
                               scaled += 12 / k;
                           });
        }
        if ((scaled * z) % 12) throw std::logic_error("cycle orbit weights are not integral");
        out[len == 4 ? ObjectKind::cycle4 : len == 6 ? ObjectKind::cycle6 : ObjectKind::cycle8] = scaled * z / 12;
    }
    return out;
}

KindCounts count_cycles_md(const DesignTriple& t, const CodeParams& p, const std::vector<int>& lengths,
                           const CountOptions& opt) {
    return count_cycles(build_labeled_protograph(t, p, true), lengths, opt);
}

KindCounts count_cycles_sc(const DesignTriple& t, const CodeParams& p, const std::vector<int>& lengths,
                           const CountOptions& opt) {
    return count_cycles(build_labeled_protograph(t, p, false), lengths, opt);
}

namespace {

struct ChainKey {
    int c, va, vb, id;
    bool operator<(const ChainKey& o) const { return std::tie(c, va, vb, id) < std::tie(o.c, o.va, o.vb, o.id); }
    bool same_key(const ChainKey& o) const { return c == o.c && va == o.va && vb == o.vb; }
};

std::vector<ChainKey> chain_keys(const std::vector<GraphCycle>& cs) {
    std::vector<ChainKey> out;
    for (int id = 0; id < int(cs.size()); ++id) {
        const auto& cy = cs[id];
        const int g = cy.length / 2;
        for (int p = 0; p < g; ++p) {
            int va = cy.nodes[2 * p], c = cy.nodes[2 * p + 1], vb = cy.nodes[(2 * p + 2) % cy.length];
            out.push_back({c, std::min(va, vb), std::max(va, vb), id});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Sorted node list with CNs encoded negative.
std::array<long long, 8> node_set(const GraphCycle& cy) {
    std::array<long long, 8> s;
    s.fill(std::numeric_limits<long long>::max());
    for (int i = 0; i < cy.length; ++i) s[i] = i % 2 == 0 ? cy.nodes[i] : -1 - (long long)cy.nodes[i];
    std::sort(s.begin(), s.begin() + cy.length);
    return s;
}

int intersection_size(const std::array<long long, 8>& a, int na, const std::array<long long, 8>& b, int nb) {
    int i = 0, j = 0, n = 0;
    while (i < na && j < nb) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

}  // namespace

namespace {

std::vector<CycleConcat> join_impl(const std::vector<GraphCycle>& A, const std::vector<GraphCycle>& B, bool same,
                                   const CountOptions& opt, bool overlaps) {
    auto ka = chain_keys(A);
    auto kb = same ? ka : chain_keys(B);
    std::vector<std::array<long long, 8>> na(A.size()), nb;
    for (std::size_t i = 0; i < A.size(); ++i) na[i] = node_set(A[i]);
    if (!same) {
        nb.resize(B.size());
        for (std::size_t i = 0; i < B.size(); ++i) nb[i] = node_set(B[i]);
    }
    const auto& NB = same ? na : nb;
    // Group starts in ka.
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < ka.size(); ++i)
        if (i == 0 || !ka[i].same_key(ka[i - 1])) starts.push_back(i);
    starts.push_back(ka.size());
    const int ng = int(starts.size()) - 1;
    const int nthreads = thread_count(opt);
    std::vector<std::vector<CycleConcat>> parts(nthreads);
#pragma omp parallel num_threads(nthreads)
    {
        auto& local = parts[omp_get_thread_num()];
#pragma omp for schedule(dynamic, 256)
        for (int gi = 0; gi < ng; ++gi) {
            const auto& key = ka[starts[gi]];
            auto lo = std::lower_bound(kb.begin(), kb.end(), ChainKey{key.c, key.va, key.vb, -1});
            auto hi = lo;
            while (hi != kb.end() && hi->same_key(key)) ++hi;
            for (std::size_t x = starts[gi]; x < starts[gi + 1]; ++x)
                for (auto y = lo; y != hi; ++y) {
                    int ia = ka[x].id, ib = y->id;
                    if (same && ib <= ia) continue;
                    int k = intersection_size(na[ia], A[ia].length, NB[ib], B[ib].length);
                    if (overlaps ? k > 3 : k == 3) local.push_back({ia, ib});
                }
        }
    }
    std::vector<CycleConcat> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end(), [](const CycleConcat& x, const CycleConcat& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    if (overlaps)
        out.erase(std::unique(out.begin(), out.end(),
                              [](const CycleConcat& x, const CycleConcat& y) { return x.a == y.a && x.b == y.b; }),
                  out.end());
    return out;
}

}  // namespace

std::vector<CycleConcat> join_concats(const std::vector<GraphCycle>& A, const std::vector<GraphCycle>& B, bool same,
                                      const CountOptions& opt) {
    return join_impl(A, B, same, opt, false);
}

std::vector<CycleConcat> join_overlaps(const std::vector<GraphCycle>& A, const std::vector<GraphCycle>& B, bool same,
                                       const CountOptions& opt) {
    return join_impl(A, B, same, opt, true);
}

KindCounts count_objects_graph(const SparseBinaryMatrix& H, const std::vector<ObjectKind>& kinds,
                               const CountOptions& opt) {
    std::map<int, std::vector<GraphCycle>> cycles;
    auto need = [&](int len) -> const std::vector<GraphCycle>& {
        auto it = cycles.find(len);
        if (it == cycles.end()) it = cycles.emplace(len, enumerate_cycles(H, len, opt)).first;
        return it->second;
    };
    KindCounts out;
    for (auto k : kinds) {
        switch (k) {
            case ObjectKind::cycle4: out[k] = (long long)need(4).size(); break;
            case ObjectKind::cycle6: out[k] = (long long)need(6).size(); break;
            case ObjectKind::cycle8: out[k] = (long long)need(8).size(); break;
            case ObjectKind::cfg66: out[k] = (long long)join_concats(need(6), need(6), true, opt).size(); break;
            case ObjectKind::cfg68: out[k] = (long long)join_concats(need(6), need(8), false, opt).size(); break;
            case ObjectKind::cfg88: out[k] = (long long)join_concats(need(8), need(8), true, opt).size(); break;
        }
    }
    return out;
}

KindCounts brute_force_count(const SparseBinaryMatrix& H, const std::vector<ObjectKind>& kinds) {
    const int nv = H.cols, n = H.rows + H.cols;
    if (n > 500) throw std::length_error("brute-force search limited to 500 Tanner nodes");
    std::vector<std::vector<int>> adj(n);
    auto cols = H.column_adjacency();
    for (int v = 0; v < nv; ++v)
        for (int c : cols[v]) {
            adj[v].push_back(nv + c);
            adj[nv + c].push_back(v);
        }
    int maxlen = 0;
    for (auto k : kinds) maxlen = std::max(maxlen, k == ObjectKind::cycle4 ? 4 : (k == ObjectKind::cycle6 || k == ObjectKind::cfg66) ? 6 : 8);
    std::map<int, std::set<std::vector<int>>> found;
    std::vector<int> path;
    std::vector<char> on(n, 0);
    auto canonical = [](const std::vector<int>& cyc) {
        const int L = int(cyc.size());
        std::vector<int> best;
        for (int r = 0; r < L; ++r)
            for (int d = 0; d < 2; ++d) {
                std::vector<int> c(L);
                for (int i = 0; i < L; ++i) c[i] = d == 0 ? cyc[(r + i) % L] : cyc[((r - i) % L + L) % L];
                if (best.empty() || c < best) best = c;
            }
        return best;
    };
    std::function<void(int)> dfs = [&](int x) {
        for (int y : adj[x]) {
            if (y == path[0] && path.size() >= 4 && path.size() % 2 == 0) {
                found[int(path.size())].insert(canonical(path));
                continue;
            }
            if (on[y] || int(path.size()) >= maxlen) continue;
            on[y] = 1;
            path.push_back(y);
            dfs(y);
            path.pop_back();
            on[y] = 0;
        }
    };
    for (int s = 0; s < nv; ++s) {
        path = {s};
        on[s] = 1;
        dfs(s);
        on[s] = 0;
    }
    auto list = [&](int len) { return std::vector<std::vector<int>>(found[len].begin(), found[len].end()); };
    auto pairs = [&](const std::vector<std::vector<int>>& A, const std::vector<std::vector<int>>& B, bool same) {
        long long count = 0;
        for (std::size_t i = 0; i < A.size(); ++i)
            for (std::size_t j = same ? i + 1 : 0; j < B.size(); ++j) {
                std::vector<int> sa(A[i]), sb(B[j]), in;
                std::sort(sa.begin(), sa.end());
                std::sort(sb.begin(), sb.end());
                std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(in));
                if (in.size() != 3) continue;
                int cn = -1, vns = 0;
                for (int x : in) (x >= nv ? cn = x : ++vns);
                if (cn < 0 || vns != 2) continue;
                auto chain_ok = [&](const std::vector<int>& cyc) {
                    const int L = int(cyc.size());
                    int pos = int(std::find(cyc.begin(), cyc.end(), cn) - cyc.begin());
                    int a = cyc[(pos + 1) % L], b = cyc[(pos + L - 1) % L];
                    return std::binary_search(in.begin(), in.end(), a) && std::binary_search(in.begin(), in.end(), b);
                };
                if (chain_ok(A[i]) && chain_ok(B[j])) ++count;
            }
        return count;
    };
    KindCounts out;
    for (auto k : kinds) {
        switch (k) {
            case ObjectKind::cycle4: out[k] = (long long)found[4].size(); break;
            case ObjectKind::cycle6: out[k] = (long long)found[6].size(); break;
            case ObjectKind::cycle8: out[k] = (long long)found[8].size(); break;
            case ObjectKind::cfg66: out[k] = pairs(list(6), list(6), true); break;
            case ObjectKind::cfg68: out[k] = pairs(list(6), list(8), false); break;
            case ObjectKind::cfg88: out[k] = pairs(list(8), list(8), true); break;
        }
    }
    return out;
}

}  // namespace mdsc
