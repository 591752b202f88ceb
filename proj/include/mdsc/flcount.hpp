#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mdsc/code_model.hpp"

namespace mdsc {

// Closed alternating walk over base entries: (i_k, j_k), (i_k, j_{k+1}) for
// k = 0..g-1. Even positions carry sign +1, odd positions -1.
struct CycleCandidate {
    std::vector<std::pair<int, int>> entries;
    int length() const { return int(entries.size()); }
};

CycleCandidate make_candidate(const std::vector<int>& rows, const std::vector<int>& cols);

int alternating_sum(const CycleCandidate& c, const IntGrid& X);
bool partition_active(const CycleCandidate& c, const IntGrid& K);
bool relocation_active(const CycleCandidate& c, const IntGrid& Mr, int M);
bool lifting_survives(const CycleCandidate& c, const IntGrid& Lf, int z);

enum class ObjectKind { cycle4, cycle6, cycle8, cfg66, cfg68, cfg88 };
inline constexpr int kObjectKinds = 6;

ObjectKind parse_object_kind(const std::string& s);
std::string to_string(ObjectKind k);
bool is_cfg(ObjectKind k);

// Lifted Tanner-graph cycle as node walk v0 c0 v1 c1 ... (unused tail = -1).
struct GraphCycle {
    std::array<int, 8> nodes{-1, -1, -1, -1, -1, -1, -1, -1};
    int length = 0;
};

struct CountOptions {
    bool parallel = true;
};

// Cycles of one length (4, 6 or 8) in a bipartite graph given as CN rows.
std::vector<GraphCycle> enumerate_cycles(const SparseBinaryMatrix& H, int length, const CountOptions& opt = {});

using KindCounts = std::map<ObjectKind, long long>;

// Exact counts on the lifted graph of a labeled protograph, exploiting the
// circulant symmetry: only cycles through lifted offset 0 of their smallest
// protograph VN are walked.
KindCounts count_cycles(const LabeledProtograph& G, const std::vector<int>& lengths, const CountOptions& opt = {});
KindCounts count_cycles_md(const DesignTriple& t, const CodeParams& p, const std::vector<int>& lengths,
                           const CountOptions& opt = {});
KindCounts count_cycles_sc(const DesignTriple& t, const CodeParams& p, const std::vector<int>& lengths,
                           const CountOptions& opt = {});

// Pairs of cycles meeting in exactly one CN and its two neighbouring VNs
// along both cycles, found by joining on (CN, {VN, VN}) keys.
struct CycleConcat {
    int a = 0;
    int b = 0;
};
std::vector<CycleConcat> join_concats(const std::vector<GraphCycle>& A, const std::vector<GraphCycle>& B, bool same,
                                      const CountOptions& opt = {});
// Pairs sharing a chain key whose node sets meet in more than three nodes.
std::vector<CycleConcat> join_overlaps(const std::vector<GraphCycle>& A, const std::vector<GraphCycle>& B, bool same,
                                       const CountOptions& opt = {});

KindCounts count_objects_graph(const SparseBinaryMatrix& H, const std::vector<ObjectKind>& kinds,
                               const CountOptions& opt = {});

// Exhaustive path search with canonical deduplication; cfg kinds test every
// pair of cycles.
KindCounts brute_force_count(const SparseBinaryMatrix& H, const std::vector<ObjectKind>& kinds);

// Signed base-entry footprint of a cycle: sorted (entry, coefficient),
// zero coefficients dropped.
using EntryPattern = std::vector<std::pair<int, int>>;

bool pattern_active(const EntryPattern& pat, const std::vector<int>& x, int M);

struct ObjectList {
    CodeParams params;
    int entries = 0;
    std::vector<ObjectKind> kinds;
    std::vector<EntryPattern> patterns;
    // Per pattern, differences that must stay nonzero mod M: walks that
    // revisit an SC node lift to simple cycles only when the revisits land
    // in different copies. Empty for simple SC cycles.
    std::vector<std::vector<EntryPattern>> separations;
    struct Group {
        ObjectKind kind = ObjectKind::cycle6;
        int a = 0;
        int b = -1;
        long long mult = 0;
        int div = 1;  // lifts of a walk with rotational symmetry coincide in pairs
    };
    std::vector<Group> groups;
    // Cycle pairs that meet in more than a chain in the SC graph. Their MD
    // lifts meet in exactly a chain for some relative copy shifts; each shared
    // node carries its copy-offset difference as a signed entry pattern.
    struct SharedNode {
        bool cn = false;
        EntryPattern diff;
        std::array<int, 2> a_nb{-1, -1};  // neighbours along each cycle, as
        std::array<int, 2> b_nb{-1, -1};  // indices into nodes (-1: unshared)
    };
    struct Overlap {
        ObjectKind kind = ObjectKind::cfg66;
        int a = 0;
        int b = 0;
        long long mult = 1;
        std::vector<SharedNode> nodes;
    };
    std::vector<Overlap> overlaps;
    // Pairs involving a revisiting walk, resolved per pair of walk positions
    // that hold the same SC node.
    struct PositionPair {
        int ia = 0;
        int ib = 0;
        bool cn = false;
        EntryPattern diff;
    };
    struct WalkOverlap {
        ObjectKind kind = ObjectKind::cfg88;
        int a = 0;
        int b = 0;
        int a_len = 8;
        int b_len = 8;
        int div = 1;
        long long mult = 1;
        std::vector<PositionPair> pairs;
    };
    std::vector<WalkOverlap> walk_overlaps;
    std::array<long long, kObjectKinds> totals{};

    long long total(ObjectKind k) const { return totals[int(k)]; }
};

// Closure pattern active and every separation inactive.
bool pattern_valid(const ObjectList& objs, int id, const std::vector<int>& x, int M);

// Objects of the requested kinds in the lifted SC graph of (K, Lf),
// aggregated by their base-entry patterns.
ObjectList list_active_objects(const IntGrid& K, const IntGrid& Lf, const CodeParams& p,
                               const std::vector<ObjectKind>& kinds, const CountOptions& opt = {});

// Relative copy shifts at which the lifts of an overlap pair meet in exactly
// one chain.
int overlap_alignments(const ObjectList::Overlap& o, const std::vector<int>& x, int M);

// Survivors of relocation per kind: SC objects whose every cycle stays
// active, plus chain-aligned lifts of active overlap pairs. Times M this is
// the MD count.
std::array<double, kObjectKinds> surviving_objects(const ObjectList& objs, const std::vector<int>& x, int M);
KindCounts count_objects_md(const ObjectList& objs, const IntGrid& Mr, int M);

std::uint64_t params_hash(const CodeParams& p, const IntGrid& K, const IntGrid& Lf);
void write_object_cache(std::ostream& out, const ObjectList& objs, std::uint64_t hash);
ObjectList read_object_cache(std::istream& in, std::uint64_t expected_hash);

}  // namespace mdsc
