#include <omp.h>

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mdsc/code_model.hpp"
#include "mdsc/flcount.hpp"
#include "mdsc/grade.hpp"
#include "mdsc/io.hpp"
#include "mdsc/mcmc.hpp"
#include "mdsc/patterns.hpp"
#include "mdsc/simchan.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mdsc;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out = ".";
    std::vector<std::string> argv;
};

struct RunContext {
    const Globals* g = nullptr;
    std::string command;
    std::uint64_t seed = 0;
    fs::path out;
    std::vector<std::string> outputs;

    fs::path file(const std::string& name) {
        outputs.push_back(name);
        return out / name;
    }
};

RunContext start(const Globals& g, const std::string& command) {
    RunContext ctx;
    ctx.g = &g;
    ctx.command = command;
    if (g.seed) {
        ctx.seed = *g.seed;
    } else {
        std::random_device rd;
        ctx.seed = (std::uint64_t(rd()) << 32) ^ rd();
    }
    ctx.out = g.out;
    fs::create_directories(ctx.out);
    if (g.threads > 0) omp_set_num_threads(g.threads);
    return ctx;
}

void finish(RunContext& ctx, const CLI::App& sub, json extra = json::object()) {
    json m;
    m["command"] = ctx.command;
    m["argv"] = ctx.g->argv;
    m["seed"] = ctx.seed;
    m["config"] = sub.config_to_str(true, false);
    m["outputs"] = ctx.outputs;
    if (!extra.empty()) m["summary"] = extra;
    std::ofstream(ctx.out / "manifest.json") << m.dump(2) << '\n';
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

struct Design {
    CodeParams params;
    DesignTriple t;
    std::optional<ProbabilityMatrix> P;
    bool has_K = false, has_Lf = false, has_Mr = false;
};

Design load_design(const std::string& params_path, const std::vector<std::string>& triple) {
    if (params_path.empty()) throw UsageError("--params is required");
    auto d = load_descriptor(params_path);
    Design out;
    out.params = d.params;
    out.P = d.P;
    if (d.K) out.t.K = *d.K, out.has_K = true;
    if (d.Lf) out.t.Lf = *d.Lf, out.has_Lf = true;
    if (d.Mr) out.t.Mr = *d.Mr, out.has_Mr = true;
    if (!triple.empty()) {
        if (triple.size() != 3) throw UsageError("--triple takes three files: K, L, M");
        out.t.K = read_grid_file(triple[0]).grid;
        out.t.Lf = read_grid_file(triple[1]).grid;
        out.t.Mr = read_grid_file(triple[2]).grid;
        out.has_K = out.has_Lf = out.has_Mr = true;
    }
    if (out.has_K) validate_grid(out.t.K, GridKind::partition, out.params);
    if (out.has_Lf) validate_grid(out.t.Lf, GridKind::lifting, out.params);
    if (out.has_Mr) validate_grid(out.t.Mr, GridKind::relocation, out.params);
    return out;
}

void require_triple(const Design& d) {
    if (!d.has_K || !d.has_Lf || !d.has_Mr) throw UsageError("K, Lf and Mr are required (descriptor or --triple)");
}

std::vector<ObjectKind> parse_kinds(const std::string& s) {
    std::vector<ObjectKind> kinds;
    for (const auto& item : split_list(s)) kinds.push_back(parse_object_kind(item));
    if (kinds.empty()) throw UsageError("--kinds must name at least one object kind");
    return kinds;
}

ProbabilityMatrix read_P_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j = json::parse(in);
    return ProbabilityMatrix::from_rows(j.at("P").get<std::vector<std::vector<double>>>());
}

json P_to_json(const ProbabilityMatrix& P) { return P.to_rows(); }

// grade -------------------------------------------------------------------

struct GradeArgs {
    std::string target = "cycle6";
    std::string params;
    std::vector<double> pstar;
    std::string K;
    double tmax = 0.35;
    double alpha = 0.02;
    std::optional<double> epsilon;
    int max_iters = 5000;
    double w66 = 1.0, w68 = 1e-2, w88 = 1e-4;
    bool exact66 = false;
    bool keep_w1 = false;
};

void cmd_grade(const Globals& g, const GradeArgs& a, const CLI::App& sub) {
    auto ctx = start(g, "grade");
    auto d = load_design(a.params, {});
    std::vector<double> pstar;
    if (!a.pstar.empty() && !a.K.empty()) throw UsageError("--pstar and --K are mutually exclusive");
    if (!a.pstar.empty()) {
        pstar = a.pstar;
    } else if (!a.K.empty()) {
        auto K = read_grid_file(a.K).grid;
        validate_grid(K, GridKind::partition, d.params);
        pstar = edge_distribution(K, d.params.m);
    } else if (d.has_K) {
        pstar = edge_distribution(d.t.K, d.params.m);
    } else {
        throw UsageError("one of --pstar or --K is required (or a descriptor carrying K)");
    }
    if (int(pstar.size()) != d.params.m + 1) throw UsageError("p* must have m+1 entries");
    GradeConfig cfg;
    cfg.target = parse_grade_target(a.target);
    cfg.T_max = a.tmax;
    cfg.alpha = a.alpha;
    cfg.epsilon = a.epsilon;
    cfg.max_iters = a.max_iters;
    cfg.weights = {a.w66, a.w68, a.w88};
    cfg.exact66 = a.exact66;
    if (a.keep_w1) cfg.zero_w1 = false;
    auto res = run_md_grade(d.params, pstar, cfg);

    json j;
    j["target"] = to_string(cfg.target);
    j["pstar"] = pstar;
    j["P"] = P_to_json(res.P);
    j["objective"] = res.objective;
    j["iterations"] = res.iterations;
    j["density"] = relocation_density(res.P);
    if (res.expected_fl) {
        auto f = forecast(res.objective, cfg.target == GradeTarget::cycle6 ? ForecastKind::cycle6 : ForecastKind::cycle8,
                          d.params);
        j["expected_fl"] = *res.expected_fl;
        j["forecast"] = {{"estimate", f.estimate}, {"lower", f.lower}, {"upper", f.upper}};
    }
    std::vector<double> reloc;
    for (int i = 0; i < res.P.rows; ++i) reloc.push_back(pstar[i] > 0 ? 100.0 * (1.0 - res.P(i, 0) / pstar[i]) : 0.0);
    j["relocation_percent"] = reloc;
    std::ofstream(ctx.file("P.json")) << j.dump(2) << '\n';

    std::ofstream tr(ctx.file("trace.csv"));
    tr << std::setprecision(12) << "iteration,objective,density\n";
    for (std::size_t i = 0; i < res.objective_trace.size(); ++i)
        tr << i << ',' << res.objective_trace[i] << ','
           << (i < res.density_trace.size() ? res.density_trace[i] : relocation_density(res.P)) << '\n';

    std::cout << "objective " << res.objective << " after " << res.iterations << " iterations, density "
              << relocation_density(res.P) << '\n';
    for (int i = 0; i < res.P.rows; ++i) {
        for (int k = 0; k < res.P.cols; ++k) std::cout << (k ? " " : "") << std::fixed << std::setprecision(4) << res.P(i, k);
        std::cout << '\n';
    }
    finish(ctx, sub, {{"objective", res.objective}, {"iterations", res.iterations}});
}

// count / list-objects -----------------------------------------------------

struct CountArgs {
    std::string params;
    std::vector<std::string> triple;
    std::string kinds;
    bool sc = false;
    std::string cache;
};

std::uint64_t design_hash(const Design& d) { return params_hash(d.params, d.t.K, d.t.Lf); }

ObjectList obtain_objects(const Design& d, const std::vector<ObjectKind>& kinds, const std::string& cache,
                          bool* loaded = nullptr) {
    const auto h = design_hash(d);
    if (!cache.empty() && fs::exists(cache)) {
        try {
            std::ifstream in(cache, std::ios::binary);
            auto objs = read_object_cache(in, h);
            bool covers = true;
            for (auto k : kinds)
                if (std::find(objs.kinds.begin(), objs.kinds.end(), k) == objs.kinds.end()) covers = false;
            if (covers) {
                if (loaded) *loaded = true;
                return objs;
            }
        } catch (const std::exception& e) {
            std::cerr << "ignoring object cache: " << e.what() << '\n';
        }
    }
    auto objs = list_active_objects(d.t.K, d.t.Lf, d.params, kinds);
    if (!cache.empty()) {
        std::ofstream out(cache, std::ios::binary);
        write_object_cache(out, objs, h);
    }
    if (loaded) *loaded = false;
    return objs;
}

void cmd_count(const Globals& g, const CountArgs& a, const CLI::App& sub) {
    auto kinds = parse_kinds(a.kinds);
    auto ctx = start(g, "count");
    auto d = load_design(a.params, a.triple);
    require_triple(d);
    std::vector<int> lengths;
    std::vector<ObjectKind> cfgs;
    for (auto k : kinds) {
        if (is_cfg(k))
            cfgs.push_back(k);
        else
            lengths.push_back(k == ObjectKind::cycle4 ? 4 : k == ObjectKind::cycle6 ? 6 : 8);
    }
    KindCounts md, sc;
    if (!lengths.empty()) {
        md = count_cycles_md(d.t, d.params, lengths);
        if (a.sc) sc = count_cycles_sc(d.t, d.params, lengths);
    }
    if (!cfgs.empty()) {
        auto objs = obtain_objects(d, cfgs, a.cache);
        for (auto [k, v] : count_objects_md(objs, d.t.Mr, d.params.M))
            if (std::find(cfgs.begin(), cfgs.end(), k) != cfgs.end()) md[k] = v;
        if (a.sc)
            for (auto k : cfgs) sc[k] = objs.total(k);
    }
    std::ofstream csv(ctx.file("count.csv"));
    csv << "kind,md" << (a.sc ? ",sc" : "") << '\n';
    json summary;
    for (auto k : kinds) {
        csv << to_string(k) << ',' << md[k];
        std::cout << to_string(k) << ' ' << md[k];
        if (a.sc) csv << ',' << sc[k], std::cout << " (sc " << sc[k] << ')';
        csv << '\n';
        std::cout << '\n';
        summary[to_string(k)] = md[k];
    }
    finish(ctx, sub, summary);
}

void cmd_list_objects(const Globals& g, const CountArgs& a, const CLI::App& sub) {
    auto kinds = parse_kinds(a.kinds);
    auto ctx = start(g, "list-objects");
    auto d = load_design(a.params, a.triple);
    if (!d.has_K || !d.has_Lf) throw UsageError("K and Lf are required");
    auto objs = list_active_objects(d.t.K, d.t.Lf, d.params, kinds);
    {
        std::ofstream out(ctx.file("objects.bin"), std::ios::binary);
        write_object_cache(out, objs, design_hash(d));
    }
    std::array<long long, kObjectKinds> groups{}, overlaps{};
    for (const auto& gr : objs.groups) ++groups[int(gr.kind)];
    for (const auto& o : objs.overlaps) ++overlaps[int(o.kind)];
    for (const auto& o : objs.walk_overlaps) ++overlaps[int(o.kind)];
    std::ofstream csv(ctx.file("objects.csv"));
    csv << "kind,sc_count,groups,overlaps\n";
    json summary;
    for (auto k : kinds) {
        csv << to_string(k) << ',' << objs.total(k) << ',' << groups[int(k)] << ',' << overlaps[int(k)] << '\n';
        std::cout << to_string(k) << ' ' << objs.total(k) << " objects in " << groups[int(k)] << " groups\n";
        summary[to_string(k)] = objs.total(k);
    }
    finish(ctx, sub, summary);
}

// mcmc ----------------------------------------------------------------------

struct McmcArgs {
    std::string params;
    std::vector<std::string> triple;
    std::string mode = "concat";
    std::string P;
    std::string init;
    std::string cache;
    double w66 = 1.0, w68 = 1e-2, w88 = 1e-4;
    int delta = 2;
    long long max_updates = 10000;
    std::optional<double> beta_init;
    std::optional<int> l1, linf, depth;
    double density_cap = 0.35;
};

void cmd_mcmc(const Globals& g, const McmcArgs& a, const CLI::App& sub) {
    auto ctx = start(g, "mcmc");
    auto d = load_design(a.params, a.triple);
    if (!d.has_K || !d.has_Lf) throw UsageError("K and Lf are required");
    std::vector<ObjectKind> kinds;
    if (a.mode == "cycle")
        kinds = {ObjectKind::cycle4, ObjectKind::cycle6, ObjectKind::cycle8};
    else if (a.mode == "concat")
        kinds = {ObjectKind::cfg66, ObjectKind::cfg68, ObjectKind::cfg88};
    else
        throw UsageError("--mode must be cycle or concat");
    const std::string cache = a.cache.empty() ? (ctx.out / ("objects_" + a.mode + ".bin")).string() : a.cache;
    bool loaded = false;
    auto objs = obtain_objects(d, kinds, cache, &loaded);
    std::cout << (loaded ? "loaded object list from " : "enumerated object list into ") << cache << '\n';

    McmcConfig cfg;
    cfg.delta = a.delta;
    cfg.max_updates = a.max_updates;
    cfg.beta_init = a.beta_init;
    cfg.l1_bound = a.l1;
    cfg.linf_bound = a.linf;
    cfg.density_cap = a.density_cap;
    cfg.depth = a.depth;
    cfg.seed = ctx.seed;

    IntGrid init;
    if (!a.init.empty()) {
        init = read_grid_file(a.init).grid;
        validate_grid(init, GridKind::relocation, d.params);
    } else {
        std::optional<ProbabilityMatrix> P = d.P;
        if (!a.P.empty()) P = read_P_json(a.P);
        if (!P) throw UsageError("an initial relocation needs --init or a probability matrix (--P or descriptor)");
        init = quantize_init(*P, d.t.K, objs, cfg, d.params.M);
    }
    auto w = a.mode == "cycle" ? cycle_weights(objs) : concat_weights(a.w66, a.w68, a.w88);
    const double start_value = objective(init.v, objs, w);
    auto res = run_mcmc(init, objs, w, cfg);
    IntGrid best(init.rows, init.cols);
    best.v = res.best_x;
    write_grid_file(ctx.file("Mr.txt").string(), best, d.params.M);
    {
        std::ofstream tr(ctx.file("trace.csv"));
        tr << std::setprecision(12) << "update,current,best,beta\n";
        for (const auto& t : res.trace) tr << t.update << ',' << t.current << ',' << t.best << ',' << t.beta << '\n';
    }
    auto counts = count_objects_md(objs, best, d.params.M);
    json summary = {{"initial_objective", start_value},
                    {"best_objective", res.best_value},
                    {"updates", res.updates},
                    {"density", md_density(best).total}};
    std::cout << "objective " << start_value << " -> " << res.best_value << " in " << res.updates << " block updates\n";
    for (auto k : kinds) {
        summary["md_" + to_string(k)] = counts[k];
        std::cout << to_string(k) << ' ' << counts[k] << '\n';
    }
    std::ofstream(ctx.file("result.json")) << summary.dump(2) << '\n';
    finish(ctx, sub, summary);
}

// forecast --------------------------------------------------------------------

struct ForecastArgs {
    std::string params;
    std::string P;
    std::string kind = "cycle6";
    std::optional<double> N;
    bool keep_w1 = false;
};

void cmd_forecast(const Globals& g, const ForecastArgs& a, const CLI::App& sub) {
    auto ctx = start(g, "forecast");
    auto d = load_design(a.params, {});
    ForecastKind kind;
    if (a.kind == "cycle6")
        kind = ForecastKind::cycle6;
    else if (a.kind == "cycle8")
        kind = ForecastKind::cycle8;
    else
        throw UsageError("--kind must be cycle6 or cycle8");
    double N;
    if (a.N) {
        N = *a.N;
    } else {
        std::optional<ProbabilityMatrix> P = d.P;
        if (!a.P.empty()) P = read_P_json(a.P);
        if (!P) throw UsageError("need --N, --P or a descriptor carrying P");
        if (kind == ForecastKind::cycle6) {
            N = n6(*P, d.params.gamma, d.params.kappa);
        } else {
            auto w = w_coeffs(d.params.gamma, d.params.kappa);
            if (!a.keep_w1) w[0] = 0.0;
            N = n8(*P, w);
        }
    }
    auto f = forecast(N, kind, d.params);
    json j = {{"kind", a.kind}, {"N", N}, {"estimate", f.estimate}, {"lower", f.lower}, {"upper", f.upper},
              {"span_ok", f.span_ok}};
    std::ofstream(ctx.file("forecast.json")) << j.dump(2) << '\n';
    std::cout << std::fixed << std::setprecision(0) << a.kind << " N=" << std::setprecision(3) << N << " estimate "
              << std::setprecision(0) << f.estimate << " bounds (" << f.lower << ", " << f.upper << ")\n";
    if (!f.span_ok) std::cout << "warning: L <= 2m+1, bounds are not valid for these parameters\n";
    finish(ctx, sub, j);
}

// build -----------------------------------------------------------------------

struct BuildArgs {
    std::string params;
    std::vector<std::string> triple;
    std::string format = "alist";
    bool sc = false;
};

void cmd_build(const Globals& g, const BuildArgs& a, const CLI::App& sub) {
    auto ctx = start(g, "build");
    auto d = load_design(a.params, a.triple);
    require_triple(d);
    SparseBinaryMatrix H;
    if (a.sc) {
        H = build_labeled_protograph(d.t, d.params, false).lifted();
    } else {
        H = build_md_matrix(d.t, d.params);
    }
    if (a.format == "alist") {
        std::ofstream out(ctx.file("H.alist"));
        write_alist(out, H);
    } else if (a.format == "dense") {
        std::ofstream out(ctx.file("H.txt"));
        for (const auto& row : to_dense(H)) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? " " : "") << int(row[c]);
            out << '\n';
        }
    } else {
        throw UsageError("--export must be alist or dense");
    }
    std::cout << H.rows << " x " << H.cols << " with " << H.nnz() << " ones\n";
    finish(ctx, sub, {{"rows", H.rows}, {"cols", H.cols}, {"nnz", H.nnz()}});
}

// census ------------------------------------------------------------------------

struct CensusArgs {
    std::string config = "all";
    int gamma_max = 4;
    bool all_strata = false;
};

void cmd_census(const Globals& g, const CensusArgs& a, const CLI::App& sub) {
    auto ctx = start(g, "census");
    std::vector<ConcatKind> configs;
    if (a.config == "all")
        configs = {ConcatKind::c66, ConcatKind::c68, ConcatKind::c88};
    else
        configs = {parse_concat_kind(a.config)};
    std::ofstream csv(ctx.file("census.csv"));
    csv << "config,E,V,C,multiplier\n";
    for (auto k : configs)
        for (const auto& r : census(k, a.gamma_max, a.all_strata)) {
            csv << to_string(r.config) << ',' << r.E << ',' << r.V << ',' << r.C << ',' << r.multiplier << '\n';
            std::cout << to_string(r.config) << " (" << r.E << ',' << r.V << ',' << r.C << ") " << r.multiplier << '\n';
        }
    finish(ctx, sub);
}

// fer -----------------------------------------------------------------------------

struct FerArgs {
    std::string params;
    std::vector<std::string> triple;
    std::vector<double> snr;
    long long frames = 1000;
    int iters = 50;
};

void cmd_fer(const Globals& g, const FerArgs& a, const CLI::App& sub) {
    auto ctx = start(g, "fer");
    auto d = load_design(a.params, a.triple);
    require_triple(d);
    if (a.snr.empty()) throw UsageError("--snr needs at least one value");
    auto H = build_md_matrix(d.t, d.params);
    DecoderConfig dc;
    dc.max_iters = a.iters;
    const double rate = design_rate(d.params).value();
    auto table = fer_sweep(H, rate, a.snr, a.frames, dc, ctx.seed);
    std::ofstream csv(ctx.file("fer.csv"));
    csv << std::setprecision(10);
    write_fer_csv(csv, table);
    write_fer_csv(std::cout, table);
    finish(ctx, sub, {{"rate", rate}});
}

}  // namespace

int main(int argc, char** argv) {
    Globals g;
    std::vector<std::string> args(argv + 1, argv + argc);

    // --from-manifest FILE replays a recorded run; later flags override it.
    if (args.size() >= 2 && args[0] == "--from-manifest") {
        std::ifstream in(args[1]);
        if (!in) {
            std::cerr << "cannot open " << args[1] << '\n';
            return 2;
        }
        json m = json::parse(in);
        std::vector<std::string> replay = m.at("argv").get<std::vector<std::string>>();
        replay.push_back("--seed");
        replay.push_back(std::to_string(m.at("seed").get<std::uint64_t>()));
        replay.insert(replay.end(), args.begin() + 2, args.end());
        args = std::move(replay);
    }
    g.argv = args;

    CLI::App app{"MD-SC LDPC design toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--seed", g.seed, "master seed (generated and recorded when absent)");
    app.add_option("--threads", g.threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", g.out, "output directory");

    GradeArgs ga;
    auto* grade = app.add_subcommand("grade", "optimize the relocation distribution P");
    grade->add_option("--target", ga.target, "cycle6 | cycle8 | concat");
    grade->add_option("--params", ga.params, "code descriptor (JSON)")->required();
    auto* pstar_opt = grade->add_option("--pstar", ga.pstar, "component distribution p*")->delimiter(',');
    auto* K_opt = grade->add_option("--K", ga.K, "partition matrix file giving p*");
    pstar_opt->excludes(K_opt);
    grade->add_option("--tmax", ga.tmax, "maximum MD density");
    grade->add_option("--alpha", ga.alpha, "step size");
    grade->add_option("--epsilon", ga.epsilon, "objective change tolerance");
    grade->add_option("--max-iters", ga.max_iters);
    grade->add_option("--w66", ga.w66);
    grade->add_option("--w68", ga.w68);
    grade->add_option("--w88", ga.w88);
    grade->add_flag("--exact66", ga.exact66, "use every 6-6 pattern class");
    grade->add_flag("--keep-w1", ga.keep_w1, "keep doubled cycle-4 candidates in the cycle-8 objective");

    CountArgs ca;
    auto* count = app.add_subcommand("count", "exact finite-length counts");
    count->add_option("--params", ca.params, "code descriptor (JSON)")->required();
    count->add_option("--triple", ca.triple, "K, L, M matrix files")->expected(3)->delimiter(',');
    count->add_option("--kinds", ca.kinds, "cycle4,cycle6,cycle8,cfg66,cfg68,cfg88")->required();
    count->add_flag("--sc", ca.sc, "also count the underlying SC code");
    count->add_option("--cache", ca.cache, "object-list cache for cfg kinds");

    CountArgs la;
    auto* listo = app.add_subcommand("list-objects", "enumerate SC objects and write the object cache");
    listo->add_option("--params", la.params, "code descriptor (JSON)")->required();
    listo->add_option("--triple", la.triple, "K, L, M matrix files")->expected(3)->delimiter(',');
    listo->add_option("--kinds", la.kinds, "object kinds")->required();

    McmcArgs ma;
    auto* mcmc = app.add_subcommand("mcmc", "finite-length relocation search");
    mcmc->add_option("--params", ma.params, "code descriptor (JSON)")->required();
    mcmc->add_option("--triple", ma.triple, "K, L, M matrix files")->expected(3)->delimiter(',');
    mcmc->add_option("--mode", ma.mode, "cycle | concat");
    mcmc->add_option("--P", ma.P, "P.json from grade");
    mcmc->add_option("--init", ma.init, "initial relocation matrix file");
    mcmc->add_option("--cache", ma.cache, "object-list cache (enumerated when missing)");
    mcmc->add_option("--w66", ma.w66);
    mcmc->add_option("--w68", ma.w68);
    mcmc->add_option("--w88", ma.w88);
    mcmc->add_option("--delta", ma.delta, "block size");
    mcmc->add_option("--max-updates", ma.max_updates);
    mcmc->add_option("--beta-init", ma.beta_init);
    mcmc->add_option("--l1", ma.l1, "max relocations changed from the initial matrix");
    mcmc->add_option("--linf", ma.linf, "max change of one entry");
    mcmc->add_option("--density-cap", ma.density_cap);
    mcmc->add_option("--depth", ma.depth);

    ForecastArgs fa;
    auto* fc = app.add_subcommand("forecast", "expected finite-length cycle counts");
    fc->add_option("--params", fa.params, "code descriptor (JSON)")->required();
    fc->add_option("--P", fa.P, "P.json from grade");
    fc->add_option("--kind", fa.kind, "cycle6 | cycle8");
    fc->add_option("--N", fa.N, "expected protograph candidate count");
    fc->add_flag("--keep-w1", fa.keep_w1);

    BuildArgs ba;
    auto* build = app.add_subcommand("build", "construct the parity-check matrix");
    build->add_option("--params", ba.params, "code descriptor (JSON)")->required();
    build->add_option("--triple", ba.triple, "K, L, M matrix files")->expected(3)->delimiter(',');
    build->add_option("--export", ba.format, "alist | dense");
    build->add_flag("--sc", ba.sc, "underlying SC code instead");

    CensusArgs cna;
    auto* cen = app.add_subcommand("census", "dominant pattern census of cycle concatenations");
    cen->add_option("--config", cna.config, "6-6 | 6-8 | 8-8 | all");
    cen->add_option("--gamma-max", cna.gamma_max);
    cen->add_flag("--all-strata", cna.all_strata);

    FerArgs fra;
    auto* fer = app.add_subcommand("fer", "AWGN frame error rate");
    fer->add_option("--params", fra.params, "code descriptor (JSON)")->required();
    fer->add_option("--triple", fra.triple, "K, L, M matrix files")->expected(3)->delimiter(',');
    fer->add_option("--snr", fra.snr, "Eb/N0 points in dB")->delimiter(',')->required();
    fer->add_option("--frames", fra.frames);
    fer->add_option("--iters", fra.iters);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*grade) cmd_grade(g, ga, *grade);
        if (*count) cmd_count(g, ca, *count);
        if (*listo) cmd_list_objects(g, la, *listo);
        if (*mcmc) cmd_mcmc(g, ma, *mcmc);
        if (*fc) cmd_forecast(g, fa, *fc);
        if (*build) cmd_build(g, ba, *build);
        if (*cen) cmd_census(g, cna, *cen);
        if (*fer) cmd_fer(g, fra, *fer);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
