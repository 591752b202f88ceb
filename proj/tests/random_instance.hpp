#pragma once

#include <random>

#include "mdsc/code_model.hpp"

namespace testutil {

struct Instance {
    mdsc::CodeParams p;
    mdsc::DesignTriple t;
};

inline long long tanner_nodes(const mdsc::CodeParams& p) { return p.check_count() + p.length(); }

// Small random MD-SC code whose lifted Tanner graph has at most max_nodes nodes.
inline Instance random_instance(std::mt19937& rng, long long max_nodes = 500) {
    std::uniform_int_distribution<int> g(3, 4), dk(1, 2), zz(2, 5), LL(2, 4), mm(1, 2), MM(1, 3);
    while (true) {
        mdsc::CodeParams p;
        p.gamma = g(rng);
        p.kappa = p.gamma + dk(rng);
        p.z = zz(rng);
        p.L = LL(rng);
        p.m = mm(rng);
        p.M = MM(rng);
        if (tanner_nodes(p) > max_nodes) continue;
        mdsc::DesignTriple t{mdsc::IntGrid(p.gamma, p.kappa), mdsc::IntGrid(p.gamma, p.kappa),
                             mdsc::IntGrid(p.gamma, p.kappa)};
        for (int e = 0; e < t.K.size(); ++e) {
            t.K.v[e] = int(rng() % (p.m + 1));
            t.Lf.v[e] = int(rng() % p.z);
            t.Mr.v[e] = int(rng() % p.M);
        }
        return {p, t};
    }
}

}  // namespace testutil
