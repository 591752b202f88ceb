#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "mc_oracle.hpp"
#include "mdsc/grade.hpp"
#include "mdsc/patterns.hpp"
#include "table_rows.hpp"

using namespace mdsc;

namespace {

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

ProbabilityMatrix random_P(std::mt19937& rng, int rows, int cols) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    ProbabilityMatrix P(rows, cols);
    double s = 0;
    for (double& x : P.v) s += x = u(rng);
    for (double& x : P.v) x /= s;
    return P;
}

std::map<std::vector<int>, int> factor_multiset(const FactorProduct& f) {
    std::map<std::vector<int>, int> m;
    for (const auto& x : f.factors) m[x.power] += x.mult;
    return m;
}

}  // namespace

TEST_CASE("object construction") {
    auto c6 = cycle_object(3);
    CHECK(c6.vn_count == 3);
    CHECK(c6.cn_count == 3);
    CHECK(c6.edges.size() == 6);
    CHECK_NOTHROW(c6.validate());
    auto c68 = concat_object(3, 4);
    CHECK(c68.vn_count == 5);
    CHECK(c68.cn_count == 6);
    CHECK(c68.edges.size() == 12);
    CHECK(c68.cycle_basis.size() == 2);
    auto basis = fundamental_cycles(c68.vn_count, c68.cn_count, c68.edges);
    CHECK(basis.size() == c68.edges.size() - c68.vn_count - c68.cn_count + 1);
}

TEST_CASE("class cardinalities") {
    auto c6 = cycle_object(3);
    auto all = make_class(c6, iota_vec(3), iota_vec(3));
    CHECK(class_cardinality(c6, all, 3, 3) == 6);
    CHECK(automorphisms(c6).size() == 6);
    long long edge_total = 0;
    for (const auto& wc : object_classes(single_edge_object(), 4, 9)) edge_total += wc.cardinality;
    CHECK(edge_total == 36);
    CHECK_FALSE(valid_partition(c6, {0, 0, 1}, iota_vec(3)));
}

TEST_CASE("cycle-8 class cardinalities reproduce the candidate weights") {
    for (auto [g, k] : {std::pair{3, 5}, {4, 6}, {3, 8}}) {
        long long total = 0;
        for (const auto& wc : object_classes(cycle_object(4), g, k)) total += wc.cardinality;
        auto w = w_coeffs(g, k);
        CHECK(double(total) == w[0] + w[1] + w[2] + w[3]);
    }
}

TEST_CASE("cycle-6 object polynomial equals the cycle-6 objective") {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        auto P = random_P(rng, 2 + trial % 2, 1 + trial % 3);
        CHECK(expected_active_patterns(cycle_object(3), 4, 7, P) == doctest::Approx(n6(P, 4, 7)).epsilon(1e-10));
    }
}

TEST_CASE("dominant 6-8 class polynomial") {
    auto obj = concat_object(4, 3);
    auto cls = make_class(obj, iota_vec(obj.vn_count), iota_vec(obj.cn_count));
    CHECK(cls.n_eclasses == 12);
    auto fp = class_factor_product(cls);
    std::map<std::vector<int>, int> expect{{{1, 1}, 1}, {{-1, -1}, 1}, {{1, 0}, 3},
                                           {{-1, 0}, 3}, {{0, 1}, 2},   {{0, -1}, 2}};
    CHECK(factor_multiset(fp) == expect);
    auto P = ProbabilityMatrix::from_rows({{0.3, 0.1}, {0.2, 0.1}, {0.2, 0.1}});
    CHECK(evaluate_product(fp, P, false).value ==
          doctest::Approx(evaluate_product(concat_term(4, 3, 1.0), P, false).value).epsilon(1e-12));
}

TEST_CASE("class polynomials are mass one and symmetric under negation") {
    std::mt19937 rng(6);
    auto P = random_P(rng, 3, 2);
    auto obj = concat_object(3, 3);
    auto classes = enumerate_classes(obj, 6, 4);
    REQUIRE(!classes.empty());
    for (std::size_t c = 0; c < classes.size(); c += 7) {
        auto h = char_poly_class(classes[c], P);
        CHECK(h.total() == doctest::Approx(1.0));
        auto st = h.strides();
        for (std::size_t lin = 0; lin < h.size(); ++lin) {
            std::vector<int> e(h.dims()), ne(h.dims());
            std::size_t rem = lin;
            for (int d = 0; d < h.dims(); ++d) {
                e[d] = int(rem / st[d]) + h.offset[d];
                rem %= st[d];
                ne[d] = -e[d];
            }
            CHECK(h.at(e) == doctest::Approx(h.at(ne)).epsilon(1e-12));
        }
    }
}

TEST_CASE("6-6 census matches the reference strata") {
    std::vector<PatternCensusRow> expect;
    for (const auto& r : testutil::census_table())
        if (r.config == ConcatKind::c66) expect.push_back(r);
    auto got = census(ConcatKind::c66);
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].E == expect[i].E);
        CHECK(got[i].V == expect[i].V);
        CHECK(got[i].C == expect[i].C);
        CHECK(got[i].multiplier == expect[i].multiplier);
    }
}

TEST_CASE("dominant census strata sum to the concat coefficients") {
    for (int kappa : {8, 12}) {
        for (int gamma : {3, 4}) {
            auto lam = lambda_coeffs(gamma, kappa);
            for (auto [kind, want] : {std::pair{ConcatKind::c66, lam.l66}, {ConcatKind::c68, lam.l68}}) {
                auto rows = census(kind, gamma);
                int top = 0;
                for (const auto& r : rows) top = std::max(top, r.E);
                double total = 0.0;
                for (const auto& r : rows)
                    if (r.E == top) total += double(r.multiplier) * binom(kappa, r.V) * binom(gamma, r.C);
                CHECK(total == doctest::Approx(want));
            }
        }
    }
}

TEST_CASE("concat kind parsing") {
    CHECK(parse_concat_kind("6-8") == ConcatKind::c68);
    CHECK(parse_concat_kind("cfg88") == ConcatKind::c88);
    CHECK(to_string(ConcatKind::c66) == "6-6");
    CHECK_THROWS(parse_concat_kind("6-10"));
}

TEST_CASE("object polynomial agrees with sampled pattern counts") {
    std::mt19937 rng(12);
    auto P = random_P(rng, 2, 2);
    auto obj = cycle_object(2);
    auto est = testutil::sample_active_patterns(obj, 2, 3, P, 100000, 5);
    double exact = expected_active_patterns(obj, 2, 3, P);
    CHECK(std::abs(est.mean - exact) <= 4 * est.stderr_);
    auto p6 = testutil::sample_cycle6_probability(P, 100000, 6);
    double exact6 = n6(P, 3, 3) / 6.0;
    CHECK(std::abs(p6.mean - exact6) <= 4 * p6.stderr_);
}
