#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mdsc/polyalg.hpp"

namespace mdsc {

// Small bipartite graph. Basis cycles are closed node walks
// v_0, c_0, v_1, c_1, ..., v_{g-1}, c_{g-1} where c_i joins v_i and v_{i+1}.
struct BipartiteObject {
    int vn_count = 0;
    int cn_count = 0;
    std::vector<std::pair<int, int>> edges;  // (cn, vn)
    std::vector<std::vector<int>> cycle_basis;

    int edge_index(int cn, int vn) const;
    void validate() const;
};

BipartiteObject cycle_object(int g);
// Cycle-2k and cycle-2l joined through the chain v0 - c0 - v1.
BipartiteObject concat_object(int k, int l);
BipartiteObject single_edge_object();

// Fundamental cycles of a spanning forest, as closed node walks.
std::vector<std::vector<int>> fundamental_cycles(int vn_count, int cn_count,
                                                 const std::vector<std::pair<int, int>>& edges);

struct ObjectPatternClass {
    std::vector<int> vn_class;
    std::vector<int> cn_class;
    int n_vclasses = 0;
    int n_cclasses = 0;
    std::vector<int> edge_class;                // per object edge
    int n_eclasses = 0;
    std::vector<std::vector<int>> delta;        // per edge: sign on each basis cycle
    std::vector<std::vector<int>> exponents;    // per edge class: summed sign per basis cycle
};

bool valid_partition(const BipartiteObject& obj, const std::vector<int>& vn_class, const std::vector<int>& cn_class);
ObjectPatternClass make_class(const BipartiteObject& obj, const std::vector<int>& vn_class,
                              const std::vector<int>& cn_class);

// Node permutations (VNs then CNs) preserving adjacency.
struct Automorphism {
    std::vector<int> vn;
    std::vector<int> cn;
};
std::vector<Automorphism> automorphisms(const BipartiteObject& obj);

// Number of distinct permutations of the classes induced by automorphisms
// that map the partition onto itself.
long long induced_class_symmetries(const BipartiteObject& obj, const ObjectPatternClass& cls,
                                   const std::vector<Automorphism>& aut);

long long class_cardinality(const BipartiteObject& obj, const ObjectPatternClass& cls, int gamma, int kappa);

// One representative per automorphism orbit of valid partitions with at
// most max_v VN classes and max_c CN classes.
std::vector<ObjectPatternClass> enumerate_classes(const BipartiteObject& obj, int max_v, int max_c);

FactorProduct class_factor_product(const ObjectPatternClass& cls, double weight = 1.0);
CoefficientArray char_poly_class(const ObjectPatternClass& cls, const ProbabilityMatrix& P);

struct WeightedClass {
    ObjectPatternClass cls;
    long long cardinality = 0;
};

std::vector<WeightedClass> object_classes(const BipartiteObject& obj, int gamma, int kappa);
CoefficientArray char_poly_object(const BipartiteObject& obj, int gamma, int kappa, const ProbabilityMatrix& P);
double expected_active_patterns(const BipartiteObject& obj, int gamma, int kappa, const ProbabilityMatrix& P);

enum class ConcatKind { c66, c68, c88 };
std::pair<int, int> concat_lengths(ConcatKind k);
ConcatKind parse_concat_kind(const std::string& s);
std::string to_string(ConcatKind k);

// One weighted factor product per pattern class of the concat object.
std::vector<FactorProduct> concat_class_terms(ConcatKind kind, int gamma, int kappa);

struct PatternCensusRow {
    ConcatKind config = ConcatKind::c66;
    int E = 0;
    int V = 0;
    int C = 0;
    long long multiplier = 0;
};

// Counts distinct pairs of entry-distinct cycle candidates in every all-one
// |C| x |V| submatrix that share a same-row adjacent entry pair, share no
// other entry adjacent to it, and together span every row and column.
std::vector<PatternCensusRow> census(ConcatKind kind, int gamma_max = 4, bool all_strata = false);

}  // namespace mdsc
