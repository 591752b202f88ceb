#include "mdsc/io.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mdsc {

GridFile read_grid(std::istream& in) {
    GridFile f;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("matrix file: missing header");
    std::istringstream hs(line);
    if (!(hs >> f.header[0] >> f.header[1] >> f.header[2])) throw std::runtime_error("matrix file: bad header");
    const int rows = f.header[0], cols = f.header[1];
    if (rows <= 0 || cols <= 0) throw std::runtime_error("matrix file: bad dimensions");
    f.grid = IntGrid(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (!(in >> f.grid(r, c)))
                throw std::runtime_error("matrix file: expected " + std::to_string(rows * cols) + " entries");
    std::string extra;
    if (in >> extra) throw std::runtime_error("matrix file: trailing data");
    return f;
}

GridFile read_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_grid(in);
}

void write_grid(std::ostream& out, const IntGrid& g, int third) {
    out << g.rows << ' ' << g.cols << ' ' << third << '\n';
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) out << (c ? " " : "") << g(r, c);
        out << '\n';
    }
}

void write_grid_file(const std::string& path, const IntGrid& g, int third) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_grid(out, g, third);
}

CodeDescriptor load_descriptor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    const auto base = std::filesystem::path(path).parent_path();
    CodeDescriptor d;
    const auto& p = j.at("params");
    d.params.gamma = p.at("gamma").get<int>();
    d.params.kappa = p.at("kappa").get<int>();
    d.params.z = p.at("z").get<int>();
    d.params.L = p.at("L").get<int>();
    d.params.m = p.at("m").get<int>();
    d.params.M = p.at("M").get<int>();
    if (p.contains("depth") && !p["depth"].is_null()) d.params.depth = p["depth"].get<int>();
    d.params.validate();
    auto grid = [&](const char* key, GridKind kind) -> std::optional<IntGrid> {
        if (!j.contains(key) || j[key].is_null()) return std::nullopt;
        auto rel = std::filesystem::path(j[key].get<std::string>());
        auto full = rel.is_absolute() ? rel : base / rel;
        auto g = read_grid_file(full.string()).grid;
        validate_grid(g, kind, d.params);
        return g;
    };
    d.K = grid("K", GridKind::partition);
    d.Lf = grid("Lf", GridKind::lifting);
    d.Mr = grid("Mr", GridKind::relocation);
    if (j.contains("P") && !j["P"].is_null()) {
        d.P = ProbabilityMatrix::from_rows(j["P"].get<std::vector<std::vector<double>>>());
        if (d.P->rows != d.params.m + 1 || d.P->cols != d.params.M)
            throw std::runtime_error(path + ": P must be (m+1) x M");
    }
    return d;
}

void write_alist(std::ostream& out, const SparseBinaryMatrix& H) {
    auto cols = H.column_adjacency();
    std::size_t max_col = 0, max_row = 0;
    for (const auto& c : cols) max_col = std::max(max_col, c.size());
    for (const auto& r : H.adj) max_row = std::max(max_row, r.size());
    out << H.cols << ' ' << H.rows << '\n' << max_col << ' ' << max_row << '\n';
    for (int c = 0; c < H.cols; ++c) out << (c ? " " : "") << cols[c].size();
    out << '\n';
    for (int r = 0; r < H.rows; ++r) out << (r ? " " : "") << H.adj[r].size();
    out << '\n';
    for (const auto& c : cols) {
        for (std::size_t t = 0; t < max_col; ++t) out << (t ? " " : "") << (t < c.size() ? c[t] + 1 : 0);
        out << '\n';
    }
    for (const auto& r : H.adj) {
        for (std::size_t t = 0; t < max_row; ++t) out << (t ? " " : "") << (t < r.size() ? r[t] + 1 : 0);
        out << '\n';
    }
}

SparseBinaryMatrix read_alist(std::istream& in) {
    int n = 0, mrows = 0, dc = 0, dr = 0;
    if (!(in >> n >> mrows >> dc >> dr) || n <= 0 || mrows <= 0) throw std::runtime_error("alist: bad header");
    std::vector<int> cdeg(n), rdeg(mrows);
    for (int& x : cdeg) in >> x;
    for (int& x : rdeg) in >> x;
    SparseBinaryMatrix H(mrows, n);
    for (int c = 0; c < n; ++c)
        for (int t = 0; t < dc; ++t) {
            int r = 0;
            if (!(in >> r)) throw std::runtime_error("alist: truncated column lists");
            if (t < cdeg[c]) {
                if (r < 1 || r > mrows) throw std::runtime_error("alist: row index out of range");
                H.adj[r - 1].push_back(c);
            }
        }
    for (int r = 0; r < mrows; ++r)
        for (int t = 0; t < dr; ++t) {
            int c = 0;
            if (!(in >> c)) break;
        }
    H.sort_rows();
    for (int r = 0; r < mrows; ++r)
        if (int(H.adj[r].size()) != rdeg[r]) throw std::runtime_error("alist: row degree mismatch");
    return H;
}

}  // namespace mdsc
