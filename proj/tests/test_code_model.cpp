#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "mdsc/code_model.hpp"
#include "mdsc/io.hpp"
#include "test_util.hpp"

using namespace mdsc;

namespace {

IntGrid grid(std::vector<std::vector<int>> rows) {
    IntGrid g(int(rows.size()), int(rows[0].size()));
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) g(r, c) = rows[r][c];
    return g;
}

DesignTriple random_triple(const CodeParams& p, std::mt19937& rng) {
    DesignTriple t{IntGrid(p.gamma, p.kappa), IntGrid(p.gamma, p.kappa), IntGrid(p.gamma, p.kappa)};
    for (int e = 0; e < t.K.size(); ++e) {
        t.K.v[e] = int(rng() % (p.m + 1));
        t.Lf.v[e] = int(rng() % p.z);
        t.Mr.v[e] = int(rng() % p.M);
    }
    return t;
}

}  // namespace

TEST_CASE("edge distribution") {
    auto p = edge_distribution(grid({{0, 1}, {1, 0}}), 1);
    CHECK(p == std::vector<double>{0.5, 0.5});
    CHECK(edge_distribution(grid({{0, 0, 0}}), 2) == std::vector<double>{1.0, 0.0, 0.0});
    auto d = testutil::load_code("md1");
    CHECK(edge_distribution(*d.K, d.params.m) == std::vector<double>{0.5, 0.5});
}

TEST_CASE("SC protograph shape and column weights") {
    CodeParams p{1, 1, 2, 2, 0, 1, {}};
    auto H = build_sc_protograph(grid({{0}}), p);
    CHECK(H.rows == 2);
    CHECK(H.cols == 2);
    CHECK(H.contains(0, 0));
    CHECK(H.contains(1, 1));
    CHECK(H.nnz() == 2);

    CodeParams q{3, 4, 2, 3, 1, 1, {}};
    auto K = grid({{0, 1, 0, 1}, {1, 0, 1, 0}, {0, 0, 1, 1}});
    auto H2 = build_sc_protograph(K, q);
    CHECK(H2.rows == 12);
    CHECK(H2.cols == 12);
    for (int w : H2.column_weights()) CHECK(w == 3);

    auto d = testutil::load_code("md1");
    auto H3 = build_sc_protograph(*d.K, d.params);
    CHECK(H3.rows == 44);
    CHECK(H3.cols == 170);
    CHECK(H3.nnz() == 680);
}

TEST_CASE("block position to base entry mapping") {
    CodeParams p{3, 4, 2, 3, 2, 1, {}};
    auto b = base_position(7, 5, p);
    CHECK(b.row == 1);
    CHECK(b.col == 1);
    CHECK(b.component == 1);
    auto K = grid({{0, 1, 2, 0}, {2, 0, 1, 1}, {1, 2, 0, 0}});
    auto H = build_sc_protograph(K, p);
    for (int r = 0; r < H.rows; ++r)
        for (int c : H.adj[r]) {
            auto bp = base_position(r, c, p);
            CHECK(K(bp.row, bp.col) == bp.component);
        }
}

TEST_CASE("MD matrix of code 1") {
    auto d = testutil::load_code("md1");
    auto t = testutil::triple_of(d);
    auto H = build_md_matrix(t, d.params);
    CHECK(H.rows == 2244);
    CHECK(H.cols == 8670);
    CHECK(H.nnz() == d.params.M * d.params.L * d.params.gamma * d.params.kappa * d.params.z);
    for (int w : H.column_weights()) CHECK(w == d.params.gamma);
    CHECK(design_rate(d.params).value() == doctest::Approx(0.74).epsilon(1e-3));
    CHECK(md_density(*d.Mr).total == doctest::Approx(33.82).epsilon(1e-3));
}

TEST_CASE("design rates and densities of the shipped codes") {
    auto d7 = testutil::load_code("md7");
    CHECK(design_rate(d7.params).value() == doctest::Approx(0.60));
    auto d6 = testutil::load_code("md6");
    auto dens = md_density(*d6.Mr, &*d6.K, d6.params.m);
    CHECK(dens.total == doctest::Approx(35.0));
    std::vector<double> expect{21.74, 80.0, 75.0, 50.0, 25.0};
    REQUIRE(dens.per_component.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(*dens.per_component[i] == doctest::Approx(expect[i]).epsilon(1e-3));
    CHECK(md_density(IntGrid(3, 5, 0)).total == 0.0);
    CodeParams big{3, 10, 7, 100000, 2, 1, {}};
    CHECK(design_rate(big).value() == doctest::Approx(1.0 - 0.3).epsilon(1e-4));
}

TEST_CASE("absent component density is reported as absent") {
    auto K = grid({{0, 0}, {0, 2}});
    auto Mr = grid({{1, 0}, {0, 1}});
    auto d = md_density(Mr, &K, 2);
    CHECK(d.per_component[0].has_value());
    CHECK_FALSE(d.per_component[1].has_value());
    CHECK(*d.per_component[2] == 100.0);
}

TEST_CASE("relocation structure of the MD matrix") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        CodeParams p{3, 5, 5, 3, 2, 3, {}};
        auto t = random_triple(p, rng);
        auto Hmd = build_md_matrix(t, p);
        auto sc = build_labeled_protograph(t, p, false).lifted();
        const int sc_rows = sc.rows, sc_cols = sc.cols;
        CHECK(Hmd.rows == p.M * sc_rows);
        // Folding the copies of each row block recovers the SC matrix.
        for (int r = 0; r < Hmd.rows; ++r) {
            std::vector<int> folded;
            for (int c : Hmd.adj[r]) folded.push_back(c % sc_cols);
            std::sort(folded.begin(), folded.end());
            CHECK(folded == sc.adj[r % sc_rows]);
        }
        for (const auto& row : Hmd.adj) CHECK(int(row.size()) <= p.kappa);

        DesignTriple zero = t;
        std::fill(zero.Mr.v.begin(), zero.Mr.v.end(), 0);
        auto Hz = build_md_matrix(zero, p);
        for (int r = 0; r < Hz.rows; ++r)
            for (int c : Hz.adj[r]) CHECK(r / sc_rows == c / sc_cols);

        CodeParams p1 = p;
        p1.M = 1;
        DesignTriple t1 = t;
        std::fill(t1.Mr.v.begin(), t1.Mr.v.end(), 0);
        CHECK(build_md_matrix(t1, p1) == sc);
    }
}

TEST_CASE("grid validation") {
    CodeParams p{3, 4, 5, 2, 1, 2, {}};
    CHECK_THROWS(validate_grid(IntGrid(3, 3), GridKind::partition, p));
    CHECK_THROWS(validate_grid(IntGrid(3, 4, 2), GridKind::partition, p));
    CHECK_THROWS(validate_grid(IntGrid(3, 4, 5), GridKind::lifting, p));
    CHECK_NOTHROW(validate_grid(IntGrid(3, 4, 4), GridKind::lifting, p));
    p.depth = 1;
    CHECK_THROWS(validate_grid(IntGrid(3, 4, 1), GridKind::relocation, p));
    CHECK_THROWS((CodeParams{3, 4, 5, 2, 1, 2, 3}.validate()));
}

TEST_CASE("matrix text and descriptor round trip") {
    std::mt19937 rng(3);
    CodeParams p{3, 7, 11, 4, 2, 3, {}};
    auto t = random_triple(p, rng);
    for (auto [g, third] : {std::pair{&t.K, p.m}, {&t.Lf, p.z}, {&t.Mr, p.M}}) {
        std::stringstream ss;
        write_grid(ss, *g, third);
        auto back = read_grid(ss);
        CHECK(back.grid == *g);
        CHECK(back.header[2] == third);
    }
    std::stringstream bad("2 2 1\n0 1\n1\n");
    CHECK_THROWS(read_grid(bad));
    std::stringstream extra("1 2 1\n0 1 5\n");
    CHECK_THROWS(read_grid(extra));
}

TEST_CASE("alist round trip") {
    std::mt19937 rng(11);
    CodeParams p{3, 5, 7, 3, 1, 2, {}};
    auto H = build_md_matrix(random_triple(p, rng), p);
    std::stringstream ss;
    write_alist(ss, H);
    int n, m;
    ss >> n >> m;
    CHECK(n == H.cols);
    CHECK(m == H.rows);
    ss.seekg(0);
    CHECK(read_alist(ss) == H);
}

TEST_CASE("dense export guard") {
    SparseBinaryMatrix H(2, 3);
    H.adj[0] = {0, 2};
    H.adj[1] = {1};
    auto d = to_dense(H);
    CHECK(d[0] == std::vector<std::uint8_t>{1, 0, 1});
    CHECK_THROWS(to_dense(H, 2));
}
