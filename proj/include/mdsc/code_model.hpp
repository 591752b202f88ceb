#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mdsc {

struct CodeParams {
    int gamma = 3;
    int kappa = 4;
    int z = 2;
    int L = 1;
    int m = 0;
    int M = 1;
    std::optional<int> depth;

    void validate() const;
    long long length() const { return 1LL * M * L * kappa * z; }
    long long check_count() const { return 1LL * M * (L + m) * gamma * z; }
};

// Small dense integer matrix (gamma x kappa design matrices).
struct IntGrid {
    int rows = 0;
    int cols = 0;
    std::vector<int> v;

    IntGrid() = default;
    IntGrid(int r, int c, int fill = 0) : rows(r), cols(c), v(std::size_t(r) * c, fill) {}

    int& operator()(int r, int c) { return v[std::size_t(r) * cols + c]; }
    int operator()(int r, int c) const { return v[std::size_t(r) * cols + c]; }
    int size() const { return rows * cols; }
    bool operator==(const IntGrid&) const = default;
};

enum class GridKind { partition, lifting, relocation };

struct DesignTriple {
    IntGrid K;
    IntGrid Lf;
    IntGrid Mr;
};

void validate_grid(const IntGrid& g, GridKind kind, const CodeParams& p);
void validate_triple(const DesignTriple& t, const CodeParams& p);

struct SparseBinaryMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<int>> adj;  // per row, strictly increasing column indices

    SparseBinaryMatrix() = default;
    SparseBinaryMatrix(int r, int c) : rows(r), cols(c), adj(std::size_t(r)) {}

    long long nnz() const;
    bool contains(int r, int c) const;
    std::vector<int> column_weights() const;
    std::vector<std::vector<int>> column_adjacency() const;
    void sort_rows();
    bool operator==(const SparseBinaryMatrix&) const = default;
};

std::vector<std::vector<std::uint8_t>> to_dense(const SparseBinaryMatrix& H, long long max_cols = 1000000);

std::vector<double> edge_distribution(const IntGrid& K, int m);

SparseBinaryMatrix build_sc_protograph(const IntGrid& K, const CodeParams& p);

// Protograph of the MD-SC code (one node per circulant), M(L+m)gamma x ML kappa.
SparseBinaryMatrix build_md_protograph(const IntGrid& K, const IntGrid& Mr, const CodeParams& p);

SparseBinaryMatrix build_md_matrix(const DesignTriple& t, const CodeParams& p);

struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return double(num) / double(den); }
};

Rational design_rate(const CodeParams& p);

struct MdDensity {
    double total = 0.0;
    std::vector<std::optional<double>> per_component;
};

MdDensity md_density(const IntGrid& Mr, const IntGrid* K = nullptr, int m = 0);

struct BasePosition {
    int row = 0;
    int col = 0;
    int component = 0;
};

BasePosition base_position(int block_row, int block_col, const CodeParams& p);

// Protograph edge annotated with its base entry and circulant power. Node ids
// follow the layout of build_md_protograph: VN (u*L + i)*kappa + j and CN
// (w*(L+m) + R)*gamma + r.
struct LabeledEdge {
    int cn = 0;
    int vn = 0;
    int entry = 0;  // r*kappa + j
    int power = 0;
};

struct LabeledProtograph {
    int n_cn = 0;
    int n_vn = 0;
    int z = 1;
    int entries = 0;
    std::vector<LabeledEdge> edges;
    std::vector<std::vector<int>> vn_edges;
    std::vector<std::vector<int>> cn_edges;

    long long lifted_vn_count() const { return 1LL * n_vn * z; }
    long long lifted_cn_count() const { return 1LL * n_cn * z; }
    SparseBinaryMatrix lifted() const;
};

// md=false builds the single-copy SC protograph (Mr ignored).
LabeledProtograph build_labeled_protograph(const DesignTriple& t, const CodeParams& p, bool md);

}  // namespace mdsc
