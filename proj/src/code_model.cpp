#include "mdsc/code_model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mdsc {

void CodeParams::validate() const {
    if (gamma < 1 || kappa < 1) throw std::invalid_argument("gamma and kappa must be positive");
    if (z < 1) throw std::invalid_argument("circulant size z must be positive");
    if (L < 1) throw std::invalid_argument("coupling length L must be at least 1");
    if (m < 0) throw std::invalid_argument("memory m must be nonnegative");
    if (M < 1) throw std::invalid_argument("M must be at least 1");
    if (depth && (*depth < 1 || *depth > M)) throw std::invalid_argument("depth must lie in [1, M]");
}

void validate_grid(const IntGrid& g, GridKind kind, const CodeParams& p) {
    if (g.rows != p.gamma || g.cols != p.kappa)
        throw std::invalid_argument("design matrix must be gamma x kappa");
    int hi = 0;
    const char* name = "";
    switch (kind) {
        case GridKind::partition: hi = p.m; name = "partition"; break;
        case GridKind::lifting: hi = p.z - 1; name = "lifting"; break;
        case GridKind::relocation: hi = (p.depth ? *p.depth : p.M) - 1; name = "relocation"; break;
    }
    for (int x : g.v)
        if (x < 0 || x > hi)
            throw std::invalid_argument(std::string(name) + " entry " + std::to_string(x) + " out of range [0," +
                                        std::to_string(hi) + "]");
}

void validate_triple(const DesignTriple& t, const CodeParams& p) {
    p.validate();
    validate_grid(t.K, GridKind::partition, p);
    validate_grid(t.Lf, GridKind::lifting, p);
    validate_grid(t.Mr, GridKind::relocation, p);
}

long long SparseBinaryMatrix::nnz() const {
    long long n = 0;
    for (const auto& r : adj) n += r.size();
    return n;
}

bool SparseBinaryMatrix::contains(int r, int c) const {
    const auto& row = adj[r];
    return std::binary_search(row.begin(), row.end(), c);
}

std::vector<int> SparseBinaryMatrix::column_weights() const {
    std::vector<int> w(cols, 0);
    for (const auto& r : adj)
        for (int c : r) ++w[c];
    return w;
}

std::vector<std::vector<int>> SparseBinaryMatrix::column_adjacency() const {
    std::vector<std::vector<int>> out(cols);
    for (int r = 0; r < rows; ++r)
        for (int c : adj[r]) out[c].push_back(r);
    return out;
}

void SparseBinaryMatrix::sort_rows() {
    for (auto& r : adj) {
        std::sort(r.begin(), r.end());
        if (std::adjacent_find(r.begin(), r.end()) != r.end())
            throw std::logic_error("duplicate nonzero in sparse row");
    }
}

std::vector<std::vector<std::uint8_t>> to_dense(const SparseBinaryMatrix& H, long long max_cols) {
    if (H.cols > max_cols) throw std::length_error("matrix too wide for dense export");
    std::vector<std::vector<std::uint8_t>> d(H.rows, std::vector<std::uint8_t>(H.cols, 0));
    for (int r = 0; r < H.rows; ++r)
        for (int c : H.adj[r]) d[r][c] = 1;
    return d;
}

std::vector<double> edge_distribution(const IntGrid& K, int m) {
    if (K.size() == 0) throw std::invalid_argument("empty partition matrix");
    std::vector<long long> counts(m + 1, 0);
    for (int x : K.v) {
        if (x < 0 || x > m) throw std::invalid_argument("partition entry exceeds memory");
        ++counts[x];
    }
    std::vector<double> p(m + 1);
    for (int i = 0; i <= m; ++i) p[i] = double(counts[i]) / K.size();
    return p;
}

SparseBinaryMatrix build_sc_protograph(const IntGrid& K, const CodeParams& p) {
    CodeParams q = p;
    q.M = 1;
    q.depth.reset();
    return build_md_protograph(K, IntGrid(p.gamma, p.kappa, 0), q);
}

SparseBinaryMatrix build_md_protograph(const IntGrid& K, const IntGrid& Mr, const CodeParams& p) {
    p.validate();
    validate_grid(K, GridKind::partition, p);
    validate_grid(Mr, GridKind::relocation, p);
    const int g = p.gamma, k = p.kappa;
    SparseBinaryMatrix H(p.M * (p.L + p.m) * g, p.M * p.L * k);
    for (int u = 0; u < p.M; ++u)
        for (int i = 0; i < p.L; ++i)
            for (int r = 0; r < g; ++r)
                for (int j = 0; j < k; ++j) {
                    int w = (u + Mr(r, j)) % p.M;
                    int row = (w * (p.L + p.m) + i + K(r, j)) * g + r;
                    H.adj[row].push_back((u * p.L + i) * k + j);
                }
    H.sort_rows();
    return H;
}

LabeledProtograph build_labeled_protograph(const DesignTriple& t, const CodeParams& p, bool md) {
    CodeParams q = p;
    if (!md) {
        q.M = 1;
        q.depth.reset();
    }
    q.validate();
    validate_grid(t.K, GridKind::partition, q);
    validate_grid(t.Lf, GridKind::lifting, q);
    if (md) validate_grid(t.Mr, GridKind::relocation, q);
    const int g = q.gamma, k = q.kappa;
    LabeledProtograph P;
    P.n_cn = q.M * (q.L + q.m) * g;
    P.n_vn = q.M * q.L * k;
    P.z = q.z;
    P.entries = g * k;
    P.vn_edges.assign(P.n_vn, {});
    P.cn_edges.assign(P.n_cn, {});
    for (int u = 0; u < q.M; ++u)
        for (int i = 0; i < q.L; ++i)
            for (int r = 0; r < g; ++r)
                for (int j = 0; j < k; ++j) {
                    int w = md ? (u + t.Mr(r, j)) % q.M : 0;
                    LabeledEdge e;
                    e.cn = (w * (q.L + q.m) + i + t.K(r, j)) * g + r;
                    e.vn = (u * q.L + i) * k + j;
                    e.entry = r * k + j;
                    e.power = t.Lf(r, j);
                    int id = int(P.edges.size());
                    P.edges.push_back(e);
                    P.vn_edges[e.vn].push_back(id);
                    P.cn_edges[e.cn].push_back(id);
                }
    return P;
}

// Circulant sigma^f: lifted VN t of a protograph column meets lifted CN (t + f) mod z.
SparseBinaryMatrix LabeledProtograph::lifted() const {
    SparseBinaryMatrix H(n_cn * z, n_vn * z);
    for (const auto& e : edges)
        for (int t = 0; t < z; ++t) H.adj[e.cn * z + (t + e.power) % z].push_back(e.vn * z + t);
    H.sort_rows();
    return H;
}

SparseBinaryMatrix build_md_matrix(const DesignTriple& t, const CodeParams& p) {
    validate_triple(t, p);
    return build_labeled_protograph(t, p, true).lifted();
}

Rational design_rate(const CodeParams& p) {
    long long num = 1LL * p.L * p.kappa - 1LL * (p.L + p.m) * p.gamma;
    long long den = 1LL * p.L * p.kappa;
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    return {num / g, den / g};
}

MdDensity md_density(const IntGrid& Mr, const IntGrid* K, int m) {
    MdDensity d;
    if (Mr.size() == 0) return d;
    int moved = 0;
    for (int x : Mr.v) moved += x != 0;
    d.total = 100.0 * moved / Mr.size();
    if (K) {
        if (K->rows != Mr.rows || K->cols != Mr.cols) throw std::invalid_argument("K and Mr dimensions differ");
        std::vector<int> pop(m + 1, 0), rel(m + 1, 0);
        for (int e = 0; e < Mr.size(); ++e) {
            int c = K->v[e];
            if (c < 0 || c > m) throw std::invalid_argument("partition entry exceeds memory");
            ++pop[c];
            rel[c] += Mr.v[e] != 0;
        }
        for (int c = 0; c <= m; ++c) {
            if (pop[c] == 0)
                d.per_component.emplace_back(std::nullopt);
            else
                d.per_component.emplace_back(100.0 * rel[c] / pop[c]);
        }
    }
    return d;
}

BasePosition base_position(int block_row, int block_col, const CodeParams& p) {
    return {block_row % p.gamma, block_col % p.kappa, block_row / p.gamma - block_col / p.kappa};
}

}  // namespace mdsc
