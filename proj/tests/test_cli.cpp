#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>

#include "test_util.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("mdsc_cli_" + tag + "_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run(const std::string& args, const fs::path& log) {
    std::string cmd = std::string(MDSC_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string code(const std::string& name) { return testutil::data_path(name + ".json"); }

}  // namespace

TEST_CASE("grade with zero density budget") {
    TempDir d("grade");
    REQUIRE(run("--out " + d.path.string() + " grade --target cycle6 --params " + code("md1") + " --tmax 0",
                d.path / "log") == 0);
    json j = json::parse(slurp(d.path / "P.json"));
    CHECK(j["P"][0][0].get<double>() == doctest::Approx(0.5));
    CHECK(j["P"][0][1].get<double>() == 0.0);
    CHECK(j["iterations"].get<int>() == 0);
    CHECK(fs::exists(d.path / "trace.csv"));
    json m = json::parse(slurp(d.path / "manifest.json"));
    CHECK(m["command"] == "grade");
    CHECK(m.contains("seed"));
}

TEST_CASE("grade needs a component distribution") {
    TempDir d("usage");
    std::ofstream(d.path / "bare.json") << R"({"params":{"gamma":3,"kappa":5,"z":7,"L":4,"m":1,"M":2}})";
    CHECK(run("--out " + d.path.string() + " grade --params " + (d.path / "bare.json").string(), d.path / "log") != 0);
    CHECK(slurp(d.path / "log").find("usage") != std::string::npos);
    CHECK(run("--out " + d.path.string() + " grade --params " + (d.path / "bare.json").string() + " --pstar 0.6,0.4 --tmax 0",
              d.path / "log2") == 0);
}

TEST_CASE("count") {
    TempDir d("count");
    REQUIRE(run("--out " + d.path.string() + " count --params " + code("md1") + " --kinds cycle4,cycle6", d.path / "log") ==
            0);
    auto csv = slurp(d.path / "count.csv");
    CHECK(csv == "kind,md\ncycle4,0\ncycle6,3366\n");
    CHECK(run("--out " + d.path.string() + " count --params " + code("md1") + " --kinds ''", d.path / "log2") != 0);
    CHECK(run("--out " + d.path.string() + " count --params " + code("md1") + " --kinds cycle12", d.path / "log3") != 0);
}

TEST_CASE("forecast") {
    TempDir d("forecast");
    REQUIRE(run("--out " + d.path.string() + " forecast --params " + code("md1"), d.path / "log") == 0);
    json j = json::parse(slurp(d.path / "forecast.json"));
    CHECK(j["estimate"].get<double>() == doctest::Approx(49782).epsilon(0.01));
    CHECK(j["lower"].get<double>() == doctest::Approx(47162).epsilon(0.01));
    CHECK(j["upper"].get<double>() == doctest::Approx(52402).epsilon(0.01));
}

TEST_CASE("build exports an alist with matching dimensions") {
    TempDir d("build");
    REQUIRE(run("--out " + d.path.string() + " build --params " + code("md1") + " --export alist", d.path / "log") == 0);
    std::ifstream in(d.path / "H.alist");
    int n = 0, m = 0;
    in >> n >> m;
    CHECK(n == 8670);
    CHECK(m == 2244);
}

TEST_CASE("mcmc enumerates a missing object cache and replays from its manifest") {
    TempDir d("mcmc");
    std::ofstream(d.path / "K.txt") << "3 5 1\n0 1 0 1 0\n1 0 1 0 1\n0 0 1 1 0\n";
    std::ofstream(d.path / "L.txt") << "3 5 3\n0 1 2 0 1\n2 0 1 1 0\n1 2 0 2 2\n";
    std::ofstream(d.path / "toy.json")
        << R"({"params":{"gamma":3,"kappa":5,"z":3,"L":3,"m":1,"M":2},"K":"K.txt","Lf":"L.txt",)"
        << R"("P":[[0.35,0.15],[0.35,0.15]]})";
    const auto out1 = d.path / "a", out2 = d.path / "b";
    const std::string args = " mcmc --params " + (d.path / "toy.json").string() + " --mode cycle --max-updates 200";
    REQUIRE(run("--seed 11 --out " + out1.string() + args, d.path / "log") == 0);
    CHECK(fs::exists(out1 / "objects_cycle.bin"));
    CHECK(slurp(d.path / "log").find("enumerated") != std::string::npos);
    REQUIRE(run("--from-manifest " + (out1 / "manifest.json").string() + " --out " + out2.string(), d.path / "log2") == 0);
    CHECK(slurp(out1 / "Mr.txt") == slurp(out2 / "Mr.txt"));
    CHECK(slurp(out1 / "trace.csv") == slurp(out2 / "trace.csv"));
    REQUIRE(run("--seed 11 --out " + out1.string() + args, d.path / "log3") == 0);
    CHECK(slurp(d.path / "log3").find("loaded") != std::string::npos);
}

TEST_CASE("census and fer write CSV") {
    TempDir d("misc");
    REQUIRE(run("--out " + d.path.string() + " census --config 6-6", d.path / "log") == 0);
    auto csv = slurp(d.path / "census.csv");
    CHECK(csv.find("6-6,10,4,4,288") != std::string::npos);
    REQUIRE(run("--seed 3 --out " + d.path.string() + " fer --params " + code("md1") + " --snr 8 --frames 4",
                d.path / "log2") == 0);
    auto fer = slurp(d.path / "fer.csv");
    CHECK(fer.rfind("snr_db,frames,errors,fer,ci_low,ci_high\n8,4,0,", 0) == 0);
}
