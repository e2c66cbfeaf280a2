#include "doctest.h"
#include "spinsq/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace spinsq;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "spinsq");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("spinsq_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("no arguments prints usage and exits 2") {
    const Result r = call({});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("variance at the mirrored decomposition point") {
    const fs::path dir = scratch("variance");
    const Result r = call({"variance", "--Ctilde", "100", "--delta-tilde", "12", "--delta-c", "0.2", "--I2", "40",
                           "--rho", "0.0005", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "variance.csv"));
    const std::string csv = slurp(dir / "variance.csv");
    CHECK(csv.rfind("# spinsq", 0) == 0);
    CHECK(csv.find("# manifest ") != std::string::npos);
    CHECK(csv.find("0.71") != std::string::npos);
    CHECK(csv.find(",ok\n") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical output") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::vector<std::string> args{"spectrum", "--Ctilde", "100", "--delta-tilde", "10", "--I2", "25.2",
                                        "--n-omega", "41"};
    auto with = [&](const fs::path& d) {
        auto v = args;
        v.push_back("--out");
        v.push_back(d.string());
        return v;
    };
    REQUIRE(call(with(a)).code == 0);
    REQUIRE(call(with(b)).code == 0);
    CHECK(slurp(a / "spectrum.csv") == slurp(b / "spectrum.csv"));
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
    CHECK(fs::exists(a / "spectrum_s_min.dat"));
}

TEST_CASE("error categories") {
    CHECK(call({"variance", "--model", "nonsense"}).code == 2);
    CHECK(call({"fly"}).code == 2);
    CHECK(call({"variance", "--rho", "-1"}).code == 2);
    // unstable operating point
    const Result u = call({"spectrum", "--Ctilde", "100", "--delta-tilde", "12", "--delta-c", "-0.2", "--I2", "40",
                           "--out", scratch("unstable").string()});
    CHECK(u.code == 3);
    CHECK(u.err.find("error[numerical]") != std::string::npos);
}

TEST_CASE("regime warning escalates only with --strict") {
    const std::vector<std::string> base{"variance", "--model", "adiabatic", "--rho", "0.5", "--out",
                                        scratch("strict").string()};
    const Result soft = call(base);
    CHECK(soft.code == 0);
    CHECK(soft.err.find("warning") != std::string::npos);
    auto strict = base;
    strict.push_back("--strict");
    CHECK(call(strict).code == 4);
}

TEST_CASE("config file") {
    const fs::path dir = scratch("config");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "run.ini");
        f << "[run]\nstudy=optimize\n\n[effective]\nCtilde=100\ndelta_tilde=0\n";
    }
    const Result r = call({"--config", (dir / "run.ini").string(), "--out", (dir / "out").string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "out" / "optimize_trace.csv"));
    {
        std::ofstream f(dir / "both.ini");
        f << "[run]\nstudy=variance\n[effective]\nCtilde=1\n[three_level]\nC=1\n";
    }
    CHECK(call({"--config", (dir / "both.ini").string()}).code == 2);
}

TEST_CASE("default output root from the environment") {
    const fs::path root = scratch("envroot");
    setenv("SPINSQ_OUT_ROOT", root.string().c_str(), 1);
    CHECK(default_output_root() == root);
    const Result r = call({"transfer", "--r", "1"});
    unsetenv("SPINSQ_OUT_ROOT");
    REQUIRE(r.code == 0);
    CHECK(fs::exists(root / "transfer" / "transfer.csv"));
}

TEST_CASE("reproduce") {
    const fs::path dir = scratch("fig6");
    REQUIRE(call({"reproduce", "fig6", "--out", dir.string()}).code == 0);
    CHECK(fs::exists(dir / "fig6.csv"));
    CHECK(call({"reproduce", "fig99"}).code == 2);
    const Artifacts t = reproduce("table2");
    REQUIRE(t.tables.size() == 1);
    CHECK(t.tables[0].rows[0].back() == "unstable");
    CHECK(t.tables[0].rows[1].back() == "mirror");
}
