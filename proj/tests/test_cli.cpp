#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bergman/cli/commands.hpp"
#include "bergman/errors.hpp"
#include "bergman/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace bergman;
using namespace bergman::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("bergman-test-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    out << s;
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "bergman-dpp");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_CASE("csv quoting") {
    CHECK(io::csv_field("plain") == "plain");
    CHECK(io::csv_field("a,b") == "\"a,b\"");
    CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(io::csv_field("two\nlines") == "\"two\nlines\"");
    CHECK(io::csv_row({"x", "y,z"}) == "x,\"y,z\"\r\n");
    CHECK(io::fmt(0.1) == "0.1");
    CHECK(std::stod(io::fmt(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("json output has sorted keys") {
    const io::Json j{{"zeta", 1}, {"alpha", 2}, {"mid", 3}};
    const std::string s = io::dump(j);
    CHECK(s.find("alpha") < s.find("mid"));
    CHECK(s.find("mid") < s.find("zeta"));
}

TEST_CASE("atomic write leaves no temporary behind") {
    TempDir t("atomic");
    io::write_file_atomic(t.path / "sub" / "f.txt", "hello");
    CHECK(slurp(t.path / "sub" / "f.txt") == "hello");
    CHECK_FALSE(fs::exists(t.path / "sub" / "f.txt.tmp"));
    io::write_file_atomic(t.path / "sub" / "f.txt", "again");
    CHECK(slurp(t.path / "sub" / "f.txt") == "again");
}

TEST_CASE("svg scatter") {
    const std::string svg = io::scatter_svg({cplx{0.5, 0.5}, cplx{9.0, 0.0}}, 1.0, "a < b");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("version=\"1.1\"") != std::string::npos);
    CHECK(svg.find("a &lt; b") != std::string::npos);
    // The out-of-range point is dropped: one data circle plus the unit circle.
    std::size_t circles = 0;
    for (std::size_t p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) ++circles;
    CHECK(circles == 2);
}

TEST_CASE("config parsing") {
    const ExperimentConfig c = ExperimentConfig::parse("# comment\n\ndomain.kind = annulus\ndomain.rho=0.4\nprobe.palm = 1, 3-5\n");
    CHECK(c.get("domain.kind") == "annulus");
    CHECK(std::get<Annulus>(c.domain()).rho == 0.4);
    CHECK(c.index_list("probe.palm") == std::vector<std::size_t>{1, 3, 4, 5});
    CHECK(c.resolved().find("domain.rho = 0.4\n") != std::string::npos);

    try {
        ExperimentConfig::parse("domain.kind = disk\nbogus.key = 1\n", "x.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("x.cfg:2") != std::string::npos);
        CHECK(std::string(e.what()).find("bogus.key") != std::string::npos);
    }
    CHECK_THROWS_AS(ExperimentConfig::parse("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("grid.resolution = ten\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("domain.alpha = -2\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("kernel.mode = magic\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("probe.window = 3-1\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("subset rules") {
    const ExperimentConfig c = ExperimentConfig::parse("grid.resolution = 8\nprobe.subset = disk_radius < 0.3\n");
    const Experiment ex = build_experiment(c);
    const auto b = select_subset(c, ex);
    CHECK(!b.empty());
    for (std::size_t i : b) CHECK(std::abs(ex.grid->points[i].coords[0]) < 0.3);
    const ExperimentConfig d = ExperimentConfig::parse("kernel.mode = random\nkernel.sites = 5\nprobe.subset = 0, 4\n");
    CHECK(select_subset(d, build_experiment(d)) == std::vector<std::size_t>{0, 4});
    const ExperimentConfig e = ExperimentConfig::parse("kernel.mode = random\nprobe.subset = disk_radius < 0.3\n");
    CHECK_THROWS_AS(select_subset(e, build_experiment(e)), ConfigError);
}

TEST_CASE("report over an empty directory") {
    TempDir t("empty");
    CHECK(cmd_report(t.path) == kExitPass);
    const std::string md = slurp(t.path / "summary.md");
    CHECK(md.find("| report | probe | seed | verdict |") != std::string::npos);
    CHECK(md.find("PASS") == std::string::npos);
}

TEST_CASE("report with one pass and one fail") {
    TempDir t("mixed");
    fs::create_directories(t.path / "a");
    fs::create_directories(t.path / "b");
    fs::create_directories(t.path / "c");
    spit(t.path / "a" / "report.json", R"({"pass": true, "probe": "deletion", "seed": {"seed": 3, "stream": 0}})");
    spit(t.path / "b" / "report.json", R"({"pass": false, "probe": "insertion", "seed": {"seed": 4, "stream": 0}})");
    spit(t.path / "c" / "report.json", "{not json");
    CHECK(cmd_report(t.path) == kExitProbeFail);
    const std::string md = slurp(t.path / "summary.md");
    CHECK(md.find("| a/report.json | deletion | 3 | PASS |") != std::string::npos);
    CHECK(md.find("| b/report.json | insertion | 4 | FAIL |") != std::string::npos);
    CHECK(md.find("- c/report.json") != std::string::npos);
    const std::string first = md;
    CHECK(cmd_report(t.path) == kExitProbeFail);
    CHECK(slurp(t.path / "summary.md") == first);
}

TEST_CASE("sampling the zero kernel gives empty configurations") {
    TempDir t("zero");
    const ExperimentConfig c = ExperimentConfig::parse("kernel.mode = zero\nkernel.sites = 4\nsample.count = 5\n");
    CHECK(cmd_sample(c, t.path) == kExitPass);
    const auto j = io::Json::parse(slurp(t.path / "configurations.json"));
    REQUIRE(j.size() == 5);
    for (const auto& cfg : j) CHECK(cfg.empty());
    CHECK(fs::exists(t.path / "config.resolved"));
    CHECK(fs::exists(t.path / "manifest.json"));
    CHECK(slurp(t.path / "points.csv") == "sample,index\r\n");
}

TEST_CASE("outputs are byte-identical across runs") {
    TempDir t("repro");
    const fs::path cfg = t.path / "run.cfg";
    spit(cfg, "grid.resolution = 8\nprobe.samples = 20\nsample.count = 4\n");
    for (const char* dir : {"r1", "r2"}) {
        CHECK(run({"sample", "--config", cfg.string(), "--out", (t.path / dir / "s").string(), "--seed", "9"}) == 0);
        CHECK(run({"probe", "deletion", "--config", cfg.string(), "--out", (t.path / dir / "p").string(), "--seed", "9",
                   "--threads", dir[1] == '1' ? "1" : "3"}) == 0);
    }
    for (const char* f : {"s/configurations.json", "s/points.csv", "s/scatter.svg", "s/manifest.json", "p/report.json"})
        CHECK(slurp(t.path / "r1" / f) == slurp(t.path / "r2" / f));
    // Rerunning from the resolved config reproduces the outputs.
    CHECK(run({"probe", "deletion", "--config", (t.path / "r1" / "p" / "config.resolved").string(), "--out",
               (t.path / "r3").string()}) == 0);
    CHECK(slurp(t.path / "r3" / "report.json") == slurp(t.path / "r1" / "p" / "report.json"));
}

TEST_CASE("exit codes") {
    TempDir t("exit");
    spit(t.path / "bad.cfg", "domain.kind = disk\nwhat = 1\n");
    CHECK(run({"sample", "--config", (t.path / "bad.cfg").string(), "--out", (t.path / "o").string()}) == kExitConfig);
    CHECK(run({"sample", "--config", (t.path / "missing.cfg").string()}) == kExitConfig);
    CHECK(run({"probe", "nonsense", "--config", (t.path / "bad.cfg").string()}) == kExitConfig);

    spit(t.path / "big.cfg", "kernel.mode = random\nkernel.sites = 11\n");
    CHECK(run({"probe", "palm-oracle", "--config", (t.path / "big.cfg").string(), "--out", (t.path / "big").string()}) ==
          kExitNumeric);

    spit(t.path / "bz.cfg", "kernel.mode = block_zero\ngrid.resolution = 8\nprobe.samples = 5\n");
    CHECK(run({"probe", "insertion", "--config", (t.path / "bz.cfg").string(), "--out", (t.path / "bz").string()}) ==
          kExitProbeFail);
    const auto rep = io::Json::parse(slurp(t.path / "bz" / "report.json"));
    CHECK(rep["pass"] == false);

    spit(t.path / "small.cfg", "kernel.mode = random\nkernel.sites = 5\nprobe.palm = 1\nprobe.samples = 5\n");
    for (const char* p : {"palm-oracle", "conditional-oracle", "coupling", "domination", "trace-bound"})
        CHECK(run({"probe", p, "--config", (t.path / "small.cfg").string(), "--out", (t.path / p).string()}) ==
              kExitPass);
    CHECK(fs::exists(t.path / "coupling" / "coupling.json"));
}
