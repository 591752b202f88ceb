#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <ostream>
#include <string>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "mdsc/flcount.hpp"

namespace mdsc {

bool pattern_active(const EntryPattern& pat, const std::vector<int>& x, int M) {
    long long s = 0;
    for (auto [e, c] : pat) s += 1LL * c * x[e];
    return ((s % M) + M) % M == 0;
}

bool pattern_valid(const ObjectList& objs, int id, const std::vector<int>& x, int M) {
    if (!pattern_active(objs.patterns[id], x, M)) return false;
    if (std::size_t(id) < objs.separations.size())
        for (const auto& sep : objs.separations[id])
            if (pattern_active(sep, x, M)) return false;
    return true;
}

namespace {

EntryPattern cycle_pattern(const GraphCycle& cy, const CodeParams& p) {
    std::map<int, int> coef;
    auto entry = [&](int c, int v) { return ((c / p.z) % p.gamma) * p.kappa + (v / p.z) % p.kappa; };
    const int g = cy.length / 2;
    for (int i = 0; i < g; ++i) {
        int v = cy.nodes[2 * i], c = cy.nodes[2 * i + 1], vn = cy.nodes[(2 * i + 2) % cy.length];
        coef[entry(c, v)] += 1;
        coef[entry(c, vn)] -= 1;
    }
    EntryPattern out;
    for (auto [e, k] : coef)
        if (k) out.push_back({e, k});
    return out;
}

int cycle_length(ObjectKind k) { return k == ObjectKind::cycle4 ? 4 : k == ObjectKind::cycle6 ? 6 : 8; }

long long node_code(const GraphCycle& cy, int pos) {
    return pos % 2 == 0 ? cy.nodes[pos] : -1 - (long long)cy.nodes[pos];
}

// Copy offset of every walk position relative to position `anchor`, as a
// signed entry pattern: VN -> CN adds the relocation of the edge, CN -> VN
// subtracts it.
std::vector<std::map<int, int>> walk_offsets(const GraphCycle& cy, int anchor, const CodeParams& p) {
    auto entry = [&](int c, int v) { return ((c / p.z) % p.gamma) * p.kappa + (v / p.z) % p.kappa; };
    const int L = cy.length;
    std::vector<std::map<int, int>> off(L);
    std::map<int, int> cur;
    for (int s = 0; s < L; ++s) {
        int i = (anchor + s) % L, j = (i + 1) % L;
        off[i] = cur;
        if (i % 2 == 0)
            cur[entry(cy.nodes[j], cy.nodes[i])] += 1;
        else
            cur[entry(cy.nodes[i], cy.nodes[j])] -= 1;
    }
    return off;
}

// Empty result: no shared CN has the same two shared neighbours along both
// cycles, so no alignment can ever meet in exactly a chain.
std::optional<ObjectList::Overlap> make_overlap(ObjectKind kind, int pa, int pb, const GraphCycle& A,
                                                const GraphCycle& B, const CodeParams& p) {
    std::map<long long, int> posA, posB;
    for (int i = 0; i < A.length; ++i) posA[node_code(A, i)] = i;
    for (int i = 0; i < B.length; ++i) posB[node_code(B, i)] = i;
    std::vector<long long> shared;
    for (auto [code, i] : posA)
        if (posB.count(code)) shared.push_back(code);
    const long long anchor = shared.front();  // a CN, encoded negative
    auto offA = walk_offsets(A, posA[anchor], p), offB = walk_offsets(B, posB[anchor], p);
    std::map<long long, int> index;
    for (std::size_t t = 0; t < shared.size(); ++t) index[shared[t]] = int(t);
    auto idx = [&](long long code) {
        auto it = index.find(code);
        return it == index.end() ? -1 : it->second;
    };
    bool possible = false;
    for (long long code : shared) {
        if (code >= 0) continue;
        int ia = posA[code], ib = posB[code];
        long long a0 = node_code(A, (ia + 1) % A.length), a1 = node_code(A, (ia + A.length - 1) % A.length);
        long long b0 = node_code(B, (ib + 1) % B.length), b1 = node_code(B, (ib + B.length - 1) % B.length);
        if (std::minmax(a0, a1) == std::minmax(b0, b1)) possible = true;
    }
    if (!possible) return std::nullopt;
    // Lifting shifts act on the pair; keep one member per orbit, the one with
    // the smallest shared-node list, weighted by the orbit size.
    const int z = p.z;
    auto shifted = [&](int t) {
        std::vector<long long> out;
        for (long long code : shared) {
            long long id = code >= 0 ? code : -1 - code;
            long long moved = (id / z) * z + (id % z + t) % z;
            out.push_back(code >= 0 ? moved : -1 - moved);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    int fixed = 0;
    for (int t = 0; t < z; ++t) {
        auto v = shifted(t);
        if (v < shared) return std::nullopt;
        fixed += v == shared;
    }
    ObjectList::Overlap o;
    o.kind = kind;
    o.a = pa;
    o.b = pb;
    o.mult = z / fixed;
    for (long long code : shared) {
        ObjectList::SharedNode nd;
        nd.cn = code < 0;
        std::map<int, int> d = offA[posA[code]];
        for (auto [e, c] : offB[posB[code]]) d[e] -= c;
        for (auto [e, c] : d)
            if (c) nd.diff.push_back({e, c});
        if (nd.cn) {
            int ia = posA[code], ib = posB[code];
            nd.a_nb = {idx(node_code(A, (ia + 1) % A.length)), idx(node_code(A, (ia + A.length - 1) % A.length))};
            nd.b_nb = {idx(node_code(B, (ib + 1) % B.length)), idx(node_code(B, (ib + B.length - 1) % B.length))};
        }
        o.nodes.push_back(std::move(nd));
    }
    return o;
}

struct Walk {
    GraphCycle cy;
    int sym = 1;
};

// Closed non-backtracking 8-walks that revisit a node. Each is two 4-cycles
// glued at a common node, possibly the same 4-cycle twice.
std::vector<Walk> revisiting_walks(const std::vector<GraphCycle>& c4) {
    std::map<long long, std::vector<std::array<long long, 4>>> at;
    for (const auto& cy : c4)
        for (int st = 0; st < 4; ++st)
            for (int dir : {1, -1}) {
                std::array<long long, 4> w;
                for (int k = 0; k < 4; ++k) w[k] = node_code(cy, ((st + dir * k) % 4 + 4) % 4);
                at[w[0]].push_back(w);
            }
    std::set<std::array<long long, 8>> seen;
    std::vector<Walk> out;
    for (const auto& [x, ws] : at)
        for (const auto& w1 : ws)
            for (const auto& w2 : ws) {
                if (w1[3] == w2[1] || w2[3] == w1[1]) continue;
                std::array<long long, 8> S;
                for (int k = 0; k < 4; ++k) {
                    S[k] = w1[k];
                    S[k + 4] = w2[k];
                }
                std::array<long long, 8> best;
                bool have = false;
                for (int r = 0; r < 8; ++r)
                    for (int dir : {1, -1}) {
                        std::array<long long, 8> T;
                        for (int i = 0; i < 8; ++i) T[i] = S[((r + dir * i) % 8 + 8) % 8];
                        if (T[0] < 0) continue;
                        if (!have || T < best) best = T;
                        have = true;
                    }
                if (!seen.insert(best).second) continue;
                Walk w;
                w.cy.length = 8;
                for (int i = 0; i < 8; ++i) w.cy.nodes[i] = int(best[i] >= 0 ? best[i] : -1 - best[i]);
                bool periodic = true;
                for (int i = 0; i < 4; ++i) periodic &= best[i] == best[i + 4];
                w.sym = periodic ? 2 : 1;
                out.push_back(w);
            }
    return out;
}

EntryPattern offset_diff(const std::map<int, int>& a, const std::map<int, int>& b) {
    std::map<int, int> d = a;
    for (auto [e, c] : b) d[e] -= c;
    EntryPattern out;
    for (auto [e, c] : d)
        if (c) out.push_back({e, c});
    return out;
}

ObjectList::WalkOverlap make_walk_overlap(ObjectKind kind, int ia, int ib, const Walk& A, const Walk& B, bool self,
                                          const CodeParams& p) {
    ObjectList::WalkOverlap o;
    o.kind = kind;
    o.a = ia;
    o.b = ib;
    o.a_len = A.cy.length;
    o.b_len = B.cy.length;
    o.div = A.sym * B.sym * (self ? 2 : 1);
    auto offA = walk_offsets(A.cy, 0, p), offB = walk_offsets(B.cy, 0, p);
    for (int i = 0; i < A.cy.length; ++i)
        for (int j = 0; j < B.cy.length; ++j)
            if (node_code(A.cy, i) == node_code(B.cy, j))
                o.pairs.push_back({i, j, i % 2 == 1, offset_diff(offA[i], offB[j])});
    return o;
}

std::string walk_overlap_key(const ObjectList::WalkOverlap& o) {
    std::string k;
    auto add = [&](int v) { k.append(reinterpret_cast<const char*>(&v), sizeof v); };
    for (int v : {int(o.kind), o.a, o.b, o.a_len, o.b_len, o.div}) add(v);
    for (const auto& pr : o.pairs) {
        add(pr.ia);
        add(pr.ib);
        add(int(pr.diff.size()));
        for (auto [e, c] : pr.diff) {
            add(e);
            add(c);
        }
    }
    return k;
}

std::string overlap_key(const ObjectList::Overlap& o) {
    std::string k;
    auto add = [&](int v) { k.append(reinterpret_cast<const char*>(&v), sizeof v); };
    add(int(o.kind));
    add(o.a);
    add(o.b);
    for (const auto& nd : o.nodes) {
        add(nd.cn);
        for (int v : {nd.a_nb[0], nd.a_nb[1], nd.b_nb[0], nd.b_nb[1]}) add(v);
        add(int(nd.diff.size()));
        for (auto [e, c] : nd.diff) {
            add(e);
            add(c);
        }
    }
    return k;
}

}  // namespace

ObjectList list_active_objects(const IntGrid& K, const IntGrid& Lf, const CodeParams& p,
                               const std::vector<ObjectKind>& kinds, const CountOptions& opt) {
    DesignTriple t{K, Lf, IntGrid(p.gamma, p.kappa, 0)};
    const SparseBinaryMatrix H = build_labeled_protograph(t, p, false).lifted();
    ObjectList objs;
    objs.params = p;
    objs.entries = p.gamma * p.kappa;
    std::map<std::pair<EntryPattern, std::vector<EntryPattern>>, int> intern;
    auto intern_id = [&](const EntryPattern& pat, const std::vector<EntryPattern>& seps) {
        auto f = intern.find({pat, seps});
        if (f == intern.end()) {
            f = intern.emplace(std::pair{pat, seps}, int(objs.patterns.size())).first;
            objs.patterns.push_back(pat);
            objs.separations.push_back(seps);
        }
        return f->second;
    };
    std::map<int, std::vector<GraphCycle>> cycles;
    std::map<int, std::vector<int>> pid;
    auto need = [&](int len) -> const std::vector<GraphCycle>& {
        auto it = cycles.find(len);
        if (it == cycles.end()) {
            it = cycles.emplace(len, enumerate_cycles(H, len, opt)).first;
            auto& ids = pid[len];
            for (const auto& cy : it->second) ids.push_back(intern_id(cycle_pattern(cy, p), {}));
        }
        return it->second;
    };
    // Revisiting 8-walks, present only when the SC graph has 4-cycles.
    std::optional<std::vector<Walk>> walks;
    std::vector<int> wid;
    auto need_walks = [&]() -> const std::vector<Walk>& {
        if (!walks) {
            walks.emplace();
            for (auto& w : revisiting_walks(enumerate_cycles(H, 4, opt))) {
                auto off = walk_offsets(w.cy, 0, p);
                std::set<EntryPattern> seps;
                bool never = false;
                for (int i = 0; i < 8; ++i)
                    for (int j = i + 1; j < 8; ++j)
                        if (node_code(w.cy, i) == node_code(w.cy, j)) {
                            auto d = offset_diff(off[j], off[i]);
                            never |= d.empty();
                            seps.insert(d);
                        }
                if (never) continue;
                wid.push_back(intern_id(cycle_pattern(w.cy, p), {seps.begin(), seps.end()}));
                walks->push_back(std::move(w));
            }
        }
        return *walks;
    };
    for (auto kind : kinds) {
        if (std::find(objs.kinds.begin(), objs.kinds.end(), kind) != objs.kinds.end()) continue;
        objs.kinds.push_back(kind);
        std::map<std::tuple<int, int, int>, long long> agg;
        if (!is_cfg(kind)) {
            const int len = cycle_length(kind);
            const auto& cs = need(len);
            for (std::size_t i = 0; i < cs.size(); ++i) ++agg[{pid[len][i], -1, 1}];
            if (len == 8) {
                const auto& ws = need_walks();
                for (std::size_t i = 0; i < ws.size(); ++i) ++agg[{wid[i], -1, ws[i].sym}];
            }
            objs.totals[int(kind)] = (long long)cs.size();
        } else {
            const int la = kind == ObjectKind::cfg88 ? 8 : 6, lb = kind == ObjectKind::cfg66 ? 6 : 8;
            const auto& A = need(la);
            const auto& B = need(lb);
            auto pairs = join_concats(A, B, la == lb, opt);
            for (const auto& pr : pairs) {
                int a = pid[la][pr.a], b = pid[lb][pr.b];
                if (la == lb && b < a) std::swap(a, b);
                ++agg[{a, b, 1}];
            }
            objs.totals[int(kind)] = (long long)pairs.size();
            std::unordered_map<std::string, std::size_t> seen, seen_walk;
            for (const auto& pr : join_overlaps(A, B, la == lb, opt)) {
                auto o = make_overlap(kind, pid[la][pr.a], pid[lb][pr.b], A[pr.a], B[pr.b], p);
                if (!o) continue;
                auto key = overlap_key(*o);
                auto it = seen.find(key);
                if (it != seen.end()) {
                    objs.overlaps[it->second].mult += o->mult;
                } else {
                    seen.emplace(std::move(key), objs.overlaps.size());
                    objs.overlaps.push_back(std::move(*o));
                }
            }
            if (lb == 8 && !need_walks().empty()) {
                // Side A: every walk of length la; side B: the revisiting
                // walks, joined on shared (CN, {VN, VN}) chains.
                const auto& ws = need_walks();
                std::vector<Walk> side;
                std::vector<int> side_id;
                for (std::size_t i = 0; i < A.size(); ++i) {
                    side.push_back({A[i], 1});
                    side_id.push_back(pid[la][i]);
                }
                const int n_simple = int(side.size());
                if (la == 8)
                    for (std::size_t i = 0; i < ws.size(); ++i) {
                        side.push_back(ws[i]);
                        side_id.push_back(wid[i]);
                    }
                auto keys = [](const GraphCycle& cy) {
                    std::vector<std::tuple<int, int, int>> k;
                    for (int q = 0; q < cy.length / 2; ++q) {
                        int va = cy.nodes[2 * q], c = cy.nodes[2 * q + 1], vb = cy.nodes[(2 * q + 2) % cy.length];
                        k.push_back({c, std::min(va, vb), std::max(va, vb)});
                    }
                    return k;
                };
                std::map<std::tuple<int, int, int>, std::vector<int>> by_key;
                for (std::size_t j = 0; j < ws.size(); ++j)
                    for (const auto& k : keys(ws[j].cy)) by_key[k].push_back(int(j));
                std::set<std::pair<int, int>> cand;
                for (int i = 0; i < int(side.size()); ++i)
                    for (const auto& k : keys(side[i].cy)) {
                        auto f = by_key.find(k);
                        if (f == by_key.end()) continue;
                        for (int j : f->second) {
                            if (la == 8 && i >= n_simple && i - n_simple > j) continue;
                            cand.insert({i, j});
                        }
                    }
                for (auto [i, j] : cand) {
                    const bool self = la == 8 && i - n_simple == j;
                    auto o = make_walk_overlap(kind, side_id[i], wid[j], side[i], ws[j], self, p);
                    auto key = walk_overlap_key(o);
                    auto it = seen_walk.find(key);
                    if (it != seen_walk.end()) {
                        objs.walk_overlaps[it->second].mult += 1;
                    } else {
                        seen_walk.emplace(std::move(key), objs.walk_overlaps.size());
                        objs.walk_overlaps.push_back(std::move(o));
                    }
                }
            }
        }
        for (auto [k, mult] : agg) {
            ObjectList::Group g;
            g.kind = kind;
            g.a = std::get<0>(k);
            g.b = std::get<1>(k);
            g.div = std::get<2>(k);
            g.mult = mult;
            objs.groups.push_back(g);
        }
    }
    return objs;
}

int overlap_alignments(const ObjectList::Overlap& o, const std::vector<int>& x, int M) {
    std::vector<int> val(o.nodes.size());
    for (std::size_t i = 0; i < o.nodes.size(); ++i) {
        long long s = 0;
        for (auto [e, c] : o.nodes[i].diff) s += 1LL * c * x[e];
        val[i] = int(((s % M) + M) % M);
    }
    int count = 0;
    for (std::size_t i = 0; i < o.nodes.size(); ++i) {
        const auto& nd = o.nodes[i];
        if (!nd.cn) continue;
        auto [a0, a1] = nd.a_nb;
        auto [b0, b1] = nd.b_nb;
        if (a0 < 0 || a1 < 0 || std::min(a0, a1) != std::min(b0, b1) || std::max(a0, a1) != std::max(b0, b1)) continue;
        if (val[a0] != val[i] || val[a1] != val[i]) continue;
        int members = 0;
        for (int v : val) members += v == val[i];
        count += members == 3;
    }
    return count;
}

namespace {

int walk_alignments(const ObjectList::WalkOverlap& o, const std::vector<int>& x, int M) {
    std::vector<int> val(o.pairs.size());
    for (std::size_t k = 0; k < o.pairs.size(); ++k) {
        long long s = 0;
        for (auto [e, c] : o.pairs[k].diff) s += 1LL * c * x[e];
        val[k] = int(((s % M) + M) % M);
    }
    auto step = [](int i, int d, int len) { return (i + d + len) % len; };
    int count = 0;
    for (std::size_t k = 0; k < o.pairs.size(); ++k) {
        const auto& c = o.pairs[k];
        if (!c.cn) continue;
        const ObjectList::PositionPair *up = nullptr, *dn = nullptr;
        int members = 0;
        for (std::size_t q = 0; q < o.pairs.size(); ++q) {
            if (val[q] != val[k]) continue;
            ++members;
            if (o.pairs[q].ia == step(c.ia, 1, o.a_len)) up = &o.pairs[q];
            if (o.pairs[q].ia == step(c.ia, -1, o.a_len)) dn = &o.pairs[q];
        }
        if (members != 3 || !up || !dn) continue;
        const int bu = step(c.ib, 1, o.b_len), bd = step(c.ib, -1, o.b_len);
        count += (up->ib == bu && dn->ib == bd) || (up->ib == bd && dn->ib == bu);
    }
    return count;
}

}  // namespace

std::array<double, kObjectKinds> surviving_objects(const ObjectList& objs, const std::vector<int>& x, int M) {
    if (int(x.size()) != objs.entries) throw std::invalid_argument("relocation vector size does not match object list");
    std::vector<char> valid(objs.patterns.size());
    for (std::size_t i = 0; i < objs.patterns.size(); ++i) valid[i] = pattern_valid(objs, int(i), x, M);
    std::array<double, kObjectKinds> out{};
    for (const auto& g : objs.groups)
        if (valid[g.a] && (g.b < 0 || valid[g.b])) out[int(g.kind)] += double(g.mult) / g.div;
    for (const auto& o : objs.overlaps)
        if (valid[o.a] && valid[o.b]) out[int(o.kind)] += double(o.mult * overlap_alignments(o, x, M));
    for (const auto& o : objs.walk_overlaps)
        if (valid[o.a] && valid[o.b]) out[int(o.kind)] += double(o.mult * walk_alignments(o, x, M)) / o.div;
    return out;
}

KindCounts count_objects_md(const ObjectList& objs, const IntGrid& Mr, int M) {
    if (Mr.rows != objs.params.gamma || Mr.cols != objs.params.kappa)
        throw std::invalid_argument("relocation matrix does not match object list");
    auto s = surviving_objects(objs, Mr.v, M);
    KindCounts out;
    for (auto k : objs.kinds) out[k] = std::llround(s[int(k)] * M);
    return out;
}

std::uint64_t params_hash(const CodeParams& p, const IntGrid& K, const IntGrid& Lf) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](long long v) {
        for (int b = 0; b < 8; ++b) {
            h ^= std::uint64_t(v >> (8 * b)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    for (long long v : {p.gamma, p.kappa, p.z, p.L, p.m}) mix(v);
    for (int v : K.v) mix(v);
    for (int v : Lf.v) mix(v);
    return h;
}

namespace {

constexpr char kMagic[8] = {'M', 'D', 'S', 'C', 'O', 'B', 'J', '\0'};
constexpr std::uint32_t kVersion = 3;

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("object cache truncated");
    return v;
}

}  // namespace

void write_object_cache(std::ostream& out, const ObjectList& objs, std::uint64_t hash) {
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kVersion);
    put<std::uint64_t>(out, hash);
    const auto& p = objs.params;
    for (int v : {p.gamma, p.kappa, p.z, p.L, p.m, p.M}) put<std::int32_t>(out, v);
    put<std::int32_t>(out, objs.entries);
    for (long long t : objs.totals) put<std::int64_t>(out, t);
    put<std::uint32_t>(out, std::uint32_t(objs.kinds.size()));
    for (auto k : objs.kinds) put<std::int32_t>(out, int(k));
    put<std::uint64_t>(out, objs.patterns.size());
    auto put_pattern = [&](const EntryPattern& pat) {
        put<std::uint32_t>(out, std::uint32_t(pat.size()));
        for (auto [e, c] : pat) {
            put<std::int32_t>(out, e);
            put<std::int32_t>(out, c);
        }
    };
    for (std::size_t i = 0; i < objs.patterns.size(); ++i) {
        put_pattern(objs.patterns[i]);
        const auto& seps = i < objs.separations.size() ? objs.separations[i] : std::vector<EntryPattern>{};
        put<std::uint32_t>(out, std::uint32_t(seps.size()));
        for (const auto& sep : seps) put_pattern(sep);
    }
    put<std::uint64_t>(out, objs.groups.size());
    for (const auto& g : objs.groups) {
        put<std::int32_t>(out, int(g.kind));
        put<std::int32_t>(out, g.a);
        put<std::int32_t>(out, g.b);
        put<std::int64_t>(out, g.mult);
        put<std::int32_t>(out, g.div);
    }
    put<std::uint64_t>(out, objs.overlaps.size());
    for (const auto& o : objs.overlaps) {
        put<std::int32_t>(out, int(o.kind));
        put<std::int32_t>(out, o.a);
        put<std::int32_t>(out, o.b);
        put<std::int64_t>(out, o.mult);
        put<std::uint32_t>(out, std::uint32_t(o.nodes.size()));
        for (const auto& nd : o.nodes) {
            put<std::uint8_t>(out, nd.cn);
            for (int v : {nd.a_nb[0], nd.a_nb[1], nd.b_nb[0], nd.b_nb[1]}) put<std::int32_t>(out, v);
            put<std::uint32_t>(out, std::uint32_t(nd.diff.size()));
            for (auto [e, c] : nd.diff) {
                put<std::int32_t>(out, e);
                put<std::int32_t>(out, c);
            }
        }
    }
    put<std::uint64_t>(out, objs.walk_overlaps.size());
    for (const auto& o : objs.walk_overlaps) {
        for (int v : {int(o.kind), o.a, o.b, o.a_len, o.b_len, o.div}) put<std::int32_t>(out, v);
        put<std::int64_t>(out, o.mult);
        put<std::uint32_t>(out, std::uint32_t(o.pairs.size()));
        for (const auto& pr : o.pairs) {
            put<std::int32_t>(out, pr.ia);
            put<std::int32_t>(out, pr.ib);
            put<std::uint8_t>(out, pr.cn);
            put_pattern(pr.diff);
        }
    }
    if (!out) throw std::runtime_error("failed writing object cache");
}

ObjectList read_object_cache(std::istream& in, std::uint64_t expected_hash) {
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw std::runtime_error("not an object cache");
    if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("unsupported object cache version");
    if (get<std::uint64_t>(in) != expected_hash) throw std::runtime_error("object cache belongs to another code");
    ObjectList objs;
    auto& p = objs.params;
    p.gamma = get<std::int32_t>(in);
    p.kappa = get<std::int32_t>(in);
    p.z = get<std::int32_t>(in);
    p.L = get<std::int32_t>(in);
    p.m = get<std::int32_t>(in);
    p.M = get<std::int32_t>(in);
    objs.entries = get<std::int32_t>(in);
    for (auto& t : objs.totals) t = get<std::int64_t>(in);
    objs.kinds.resize(get<std::uint32_t>(in));
    for (auto& k : objs.kinds) {
        int v = get<std::int32_t>(in);
        if (v < 0 || v >= kObjectKinds) throw std::runtime_error("object cache kind out of range");
        k = ObjectKind(v);
    }
    auto get_pattern = [&](EntryPattern& pat) {
        pat.resize(get<std::uint32_t>(in));
        for (auto& [e, c] : pat) {
            e = get<std::int32_t>(in);
            c = get<std::int32_t>(in);
            if (e < 0 || e >= objs.entries) throw std::runtime_error("object cache entry out of range");
        }
    };
    objs.patterns.resize(get<std::uint64_t>(in));
    objs.separations.resize(objs.patterns.size());
    for (std::size_t i = 0; i < objs.patterns.size(); ++i) {
        get_pattern(objs.patterns[i]);
        objs.separations[i].resize(get<std::uint32_t>(in));
        for (auto& sep : objs.separations[i]) get_pattern(sep);
    }
    objs.groups.resize(get<std::uint64_t>(in));
    for (auto& g : objs.groups) {
        int k = get<std::int32_t>(in);
        if (k < 0 || k >= kObjectKinds) throw std::runtime_error("object cache kind out of range");
        g.kind = ObjectKind(k);
        g.a = get<std::int32_t>(in);
        g.b = get<std::int32_t>(in);
        g.mult = get<std::int64_t>(in);
        g.div = get<std::int32_t>(in);
        if (g.div < 1) throw std::runtime_error("object cache divisor out of range");
        const int np = int(objs.patterns.size());
        if (g.a < 0 || g.a >= np || g.b < -1 || g.b >= np) throw std::runtime_error("object cache pattern index out of range");
    }
    objs.overlaps.resize(get<std::uint64_t>(in));
    for (auto& o : objs.overlaps) {
        int k = get<std::int32_t>(in);
        if (k < 0 || k >= kObjectKinds) throw std::runtime_error("object cache kind out of range");
        o.kind = ObjectKind(k);
        o.a = get<std::int32_t>(in);
        o.b = get<std::int32_t>(in);
        o.mult = get<std::int64_t>(in);
        const int np = int(objs.patterns.size());
        if (o.a < 0 || o.a >= np || o.b < 0 || o.b >= np) throw std::runtime_error("object cache pattern index out of range");
        o.nodes.resize(get<std::uint32_t>(in));
        const int nn = int(o.nodes.size());
        for (auto& nd : o.nodes) {
            nd.cn = get<std::uint8_t>(in) != 0;
            for (int* v : {&nd.a_nb[0], &nd.a_nb[1], &nd.b_nb[0], &nd.b_nb[1]}) {
                *v = get<std::int32_t>(in);
                if (*v < -1 || *v >= nn) throw std::runtime_error("object cache node index out of range");
            }
            nd.diff.resize(get<std::uint32_t>(in));
            for (auto& [e, c] : nd.diff) {
                e = get<std::int32_t>(in);
                c = get<std::int32_t>(in);
                if (e < 0 || e >= objs.entries) throw std::runtime_error("object cache entry out of range");
            }
        }
    }
    objs.walk_overlaps.resize(get<std::uint64_t>(in));
    for (auto& o : objs.walk_overlaps) {
        int k = get<std::int32_t>(in);
        if (k < 0 || k >= kObjectKinds) throw std::runtime_error("object cache kind out of range");
        o.kind = ObjectKind(k);
        o.a = get<std::int32_t>(in);
        o.b = get<std::int32_t>(in);
        o.a_len = get<std::int32_t>(in);
        o.b_len = get<std::int32_t>(in);
        o.div = get<std::int32_t>(in);
        o.mult = get<std::int64_t>(in);
        const int np = int(objs.patterns.size());
        if (o.a < 0 || o.a >= np || o.b < 0 || o.b >= np || o.div < 1 || o.a_len < 1 || o.b_len < 1)
            throw std::runtime_error("object cache walk record out of range");
        o.pairs.resize(get<std::uint32_t>(in));
        for (auto& pr : o.pairs) {
            pr.ia = get<std::int32_t>(in);
            pr.ib = get<std::int32_t>(in);
            pr.cn = get<std::uint8_t>(in) != 0;
            if (pr.ia < 0 || pr.ia >= o.a_len || pr.ib < 0 || pr.ib >= o.b_len)
                throw std::runtime_error("object cache position out of range");
            get_pattern(pr.diff);
        }
    }
    return objs;
}

}  // namespace mdsc
