#include "bergman/cli/commands.hpp"

#include "bergman/conditional.hpp"
#include "bergman/coupling.hpp"
#include "bergman/errors.hpp"
#include "bergman/gaf.hpp"
#include "bergman/io.hpp"
#include "bergman/palm.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace bergman::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;

constexpr std::size_t kMaxOracleSites = 10;
constexpr double kOracleTolerance = 1e-8;

// Seed stream reserved for kernel construction, so the random kernel does not
// share draws with the sampler.
constexpr std::uint64_t kKernelStream = 0x6b65726e656cULL;

void write_common(const ExperimentConfig& cfg, const fs::path& out, const std::string& command) {
    io::write_file_atomic(out / "config.resolved", cfg.resolved());
    const Json manifest{{"command", command}, {"seed", cfg.u64("run.seed")}, {"version", kVersion}};
    io::write_file_atomic(out / "manifest.json", io::dump(manifest));
}

void require_oracle_size(const DppKernel& k, std::size_t limit) {
    if (k.size() > limit)
        throw ContractViolation("oracle probes need at most " + std::to_string(limit) + " sites, kernel has " +
                                std::to_string(k.size()));
}

std::vector<std::size_t> checked_indices(const std::vector<std::size_t>& idx, std::size_t m, const char* key) {
    for (std::size_t i : idx)
        if (i >= m)
            throw ConfigError(std::string(key) + ": index " + std::to_string(i) + " out of range for " +
                              std::to_string(m) + " sites");
    std::vector<std::size_t> s = idx;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw ConfigError(std::string(key) + ": repeated index");
    return idx;
}

Json probe_envelope(const std::string& probe, bool pass, const RngSeed& seed) {
    return Json{{"probe", probe}, {"pass", pass}, {"seed", io::to_json(seed)}};
}

int finish(const fs::path& out, const Json& report) {
    io::write_file_atomic(out / "report.json", io::dump(report));
    return report.at("pass").get<bool>() ? kExitPass : kExitProbeFail;
}

Json run_coupling(const DppKernel& k, const PalmTuple& p, bool with_bound, const fs::path& out) {
    require_oracle_size(k, kMaxCouplingSites);
    const DppKernel kp = palm_kernel(k, p);
    const ConfigPmf upper = exact_distribution(k);
    const ConfigPmf lower = exact_distribution(kp);
    Json r;
    try {
        const CouplingTable table = monotone_coupling(upper, lower);
        const double defect = coupling_defect(table, upper, lower);
        io::write_file_atomic(out / "coupling.json", io::dump(io::to_json(table)));
        r["feasible"] = true;
        r["defect"] = defect;
        r["entries"] = table.entries.size();
        bool pass = defect <= 1e-9;
        if (with_bound) {
            const TraceBoundReport tb = difference_trace_bound(k, p, table);
            r["trace_bound"] = io::to_json(tb);
            pass = pass && tb.pass;
        }
        r["pass"] = pass;
    } catch (const DominationViolated& e) {
        r["feasible"] = false;
        r["up_set"] = e.up_set();
        r["excess"] = e.excess();
        r["pass"] = false;
    }
    return r;
}

} // namespace

Experiment build_experiment(const ExperimentConfig& cfg) {
    const std::string& mode = cfg.get("kernel.mode");
    const RngSeed kseed{cfg.u64("run.seed"), kKernelStream};
    if (mode == "random") return {random_contraction(cfg.count("kernel.sites"), kseed), std::nullopt};
    if (mode == "projection") {
        const std::size_t m = cfg.count("kernel.sites");
        const std::size_t r = cfg.count("kernel.rank");
        if (r > m) throw ConfigError("kernel.rank exceeds kernel.sites");
        return {random_projection(m, r, kseed), std::nullopt};
    }
    if (mode == "zero") {
        const std::size_t m = cfg.count("kernel.sites");
        return {make_kernel(ComplexMatrix(m, m), false), std::nullopt};
    }

    const DomainSpec spec = cfg.domain();
    const std::size_t res = cfg.count("grid.resolution");
    if (res == 0) throw ConfigError("grid.resolution must be positive");
    const double inset = cfg.real("grid.inset");
    if (!(inset > 0.0 && inset < 1.0)) throw ConfigError("grid.inset must lie in (0, 1)");
    Grid grid = build_grid(spec, res, inset);

    if (mode == "basis") {
        const auto* disk = std::get_if<Disk>(&spec);
        if (!disk) throw ConfigError("kernel.mode = basis needs domain.kind = disk");
        DppKernel k = basis_projection_kernel(disk->alpha, cfg.count("kernel.basis_rank"), grid);
        return {std::move(k), std::move(grid)};
    }

    Experiment ex{kernel_matrix(spec, grid, cfg.real("kernel.clamp_delta")), std::move(grid)};
    if (mode == "block_zero") {
        // Block-diagonal with a zero block on the probe subset: no point can
        // ever appear there.
        const std::vector<std::size_t> b = select_subset(cfg, ex);
        ComplexMatrix& m = ex.kernel.matrix;
        for (std::size_t i : b)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                m(i, j) = 0.0;
                m(j, i) = 0.0;
            }
    }
    return ex;
}

std::vector<std::size_t> select_subset(const ExperimentConfig& cfg, const Experiment& ex) {
    const std::string& rule = cfg.get("probe.subset");
    const std::string prefix = "disk_radius";
    if (rule.rfind(prefix, 0) == 0) {
        std::string rest = rule.substr(prefix.size());
        const auto lt = rest.find('<');
        if (lt == std::string::npos) throw ConfigError("probe.subset: expected 'disk_radius < r'");
        std::istringstream in(rest.substr(lt + 1));
        double r = 0.0;
        std::string trailing;
        if (!(in >> r) || (in >> trailing)) throw ConfigError("probe.subset: bad radius in '" + rule + "'");
        if (!ex.grid) throw ConfigError("probe.subset: radius rules need a grid-based kernel.mode");
        std::vector<std::size_t> out;
        for (std::size_t s = 0; s < ex.kernel.size(); ++s) {
            const std::size_t node = ex.kernel.labels ? (*ex.kernel.labels)[s] : s;
            double n2 = 0.0;
            for (const auto& c : ex.grid->points[node].coords) n2 += std::norm(c);
            if (std::sqrt(n2) < r) out.push_back(s);
        }
        if (out.empty()) throw ConfigError("probe.subset: '" + rule + "' selects no sites");
        return out;
    }
    return checked_indices(cfg.index_list("probe.subset"), ex.kernel.size(), "probe.subset");
}

int cmd_sample(const ExperimentConfig& cfg, const fs::path& out) {
    const Experiment ex = build_experiment(cfg);
    const Sampler sampler(ex.kernel);
    const RngSeed seed = cfg.seed();
    std::vector<Configuration> configs;
    const std::size_t n = cfg.count("sample.count");
    configs.reserve(n);
    for (std::size_t s = 0; s < n; ++s) configs.push_back(sampler.sample(seed.split(s)));

    write_common(cfg, out, "sample");
    io::write_file_atomic(out / "configurations.json", io::dump(io::to_json(configs)));
    io::write_file_atomic(out / "points.csv", io::points_csv(configs, ex.grid ? &*ex.grid : nullptr));
    if (cfg.flag("output.svg") && ex.grid && dimension(ex.grid->spec) == 1 && !configs.empty()) {
        std::vector<cplx> pts;
        for (std::size_t i : configs.front().indices) pts.push_back(ex.grid->points[i].coords[0]);
        io::write_file_atomic(out / "scatter.svg", io::scatter_svg(pts, 1.05, "sample 0"));
    }
    return kExitPass;
}

int cmd_probe(const ExperimentConfig& cfg, const std::string& probe, const fs::path& out) {
    const auto& names = probe_names();
    if (std::find(names.begin(), names.end(), probe) == names.end()) throw ConfigError("unknown probe '" + probe + "'");
    const RngSeed seed = cfg.seed();
    const std::size_t threads = std::max<std::size_t>(1, cfg.threads());
    write_common(cfg, out, "probe " + probe);

    if (probe == "gaf") {
        const gaf::IntensityReport r = gaf::intensity_compare(cfg.count("gaf.terms"), cfg.real("gaf.radius"),
                                                              cfg.count("gaf.bins"), cfg.count("gaf.trials"), seed,
                                                              threads);
        Json j = io::to_json(r);
        j["probe"] = probe;
        io::write_file_atomic(out / "intensity.csv", io::intensity_csv(r));
        if (cfg.flag("output.svg"))
            io::write_file_atomic(out / "zeros.svg", io::scatter_svg(r.example_zeros, 1.5, "GAF zeros, trial 0"));
        return finish(out, j);
    }
    if (probe == "annulus-check") {
        const AnnulusCheck r = annulus_cross_check(cfg.real("domain.rho"), cfg.count("annulus.pairs"), seed);
        Json j = probe_envelope(probe, r.pass, seed);
        j["rho"] = r.rho;
        j["pairs"] = r.pairs;
        j["max_rel_error"] = r.max_rel_error;
        j["max_pointwise_rel_error"] = r.max_pointwise_rel_error;
        j["max_tail_bound"] = r.max_tail_bound;
        j["tolerance"] = kAnnulusTolerance;
        return finish(out, j);
    }

    const Experiment ex = build_experiment(cfg);
    const DppKernel& k = ex.kernel;

    if (probe == "deletion" || probe == "insertion") {
        const std::vector<std::size_t> b = select_subset(cfg, ex);
        const std::size_t samples = cfg.count("probe.samples");
        const ProbeReport r = probe == "deletion" ? deletion_tolerance_probe(k, b, samples, seed, threads)
                                                  : number_insertion_probe(k, b, samples, seed, threads);
        Json j = io::to_json(r);
        j["probe"] = probe;
        j["subset_size"] = b.size();
        j["sites"] = k.size();
        return finish(out, j);
    }

    const PalmTuple p{checked_indices(cfg.index_list("probe.palm"), k.size(), "probe.palm")};

    if (probe == "palm-oracle") {
        require_oracle_size(k, kMaxOracleSites);
        const double tv = total_variation(palm_distribution_oracle(k, p), exact_distribution(palm_kernel(k, p)));
        Json j = probe_envelope(probe, tv <= kOracleTolerance, seed);
        j["palm"] = p.indices;
        j["tv"] = tv;
        j["tolerance"] = kOracleTolerance;
        return finish(out, j);
    }
    if (probe == "conditional-oracle") {
        require_oracle_size(k, kMaxOracleSites);
        const std::vector<std::size_t> w = checked_indices(cfg.index_list("probe.window"), k.size(), "probe.window");
        const Sampler sampler(k);
        const std::size_t instances = cfg.count("probe.samples");
        double worst = 0.0;
        std::size_t degenerate = 0;
        for (std::size_t s = 0; s < instances; ++s) {
            const Configuration x = sampler.sample(seed.split(s));
            std::vector<std::size_t> ext;
            for (std::size_t i : x.indices)
                if (std::find(w.begin(), w.end(), i) == w.end()) ext.push_back(i);
            const Configuration exterior = make_configuration(ext, k.size());
            try {
                const ConfigPmf local = exact_distribution(conditional_kernel(k, w, exterior));
                const double tv = total_variation(embed(local, w, k.size()), conditional_oracle(k, w, exterior));
                worst = std::max(worst, tv);
            } catch (const DegenerateGeometryError&) {
                ++degenerate;
            }
        }
        Json j = probe_envelope(probe, worst <= kOracleTolerance && degenerate == 0, seed);
        j["window"] = w;
        j["instances"] = instances;
        j["max_tv"] = worst;
        j["degenerate_events"] = degenerate;
        j["tolerance"] = kOracleTolerance;
        return finish(out, j);
    }
    if (probe == "coupling" || probe == "trace-bound") {
        Json j = run_coupling(k, p, probe == "trace-bound", out);
        j["probe"] = probe;
        j["seed"] = io::to_json(seed);
        j["palm"] = p.indices;
        return finish(out, j);
    }
    // domination
    const DominationReport r = domination_check(k, palm_kernel(k, p), cfg.count("probe.samples"), seed);
    Json j = io::to_json(r);
    j["probe"] = probe;
    j["palm"] = p.indices;
    return finish(out, j);
}

int cmd_report(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw ConfigError("report: '" + dir.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().filename() == "report.json") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    std::string table = "| report | probe | seed | verdict |\n|---|---|---|---|\n";
    std::vector<std::string> broken;
    bool any_fail = false;
    for (const auto& f : files) {
        const std::string rel = fs::relative(f, dir).generic_string();
        try {
            std::ifstream in(f, std::ios::binary);
            const Json j = Json::parse(in);
            const bool pass = j.at("pass").get<bool>();
            const std::string probe = j.value("probe", std::string("?"));
            std::string seed = "-";
            if (j.contains("seed") && j["seed"].is_object())
                seed = std::to_string(j["seed"].value("seed", std::uint64_t{0}));
            any_fail = any_fail || !pass;
            table += "| " + rel + " | " + probe + " | " + seed + " | " + (pass ? "PASS" : "FAIL") + " |\n";
        } catch (const std::exception&) {
            broken.push_back(rel);
        }
    }
    std::string md = "# Probe summary\n\n" + table;
    if (!broken.empty()) {
        md += "\nUnreadable reports:\n\n";
        for (const auto& b : broken) md += "- " + b + "\n";
    }
    io::write_file_atomic(dir / "summary.md", md);
    return any_fail ? kExitProbeFail : kExitPass;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Determinantal point processes from weighted Bergman kernels"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::string out = "out";
    std::string probe;
    std::string report_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value config file")->required();
        sub->add_option("--seed", seed, "override run.seed");
        sub->add_option("--threads", threads, "override run.threads");
        sub->add_option("--out", out, "output directory");
    };
    CLI::App* sample_cmd = app.add_subcommand("sample", "draw configurations");
    add_common(sample_cmd);
    CLI::App* probe_cmd = app.add_subcommand("probe", "run one probe and write report.json");
    add_common(probe_cmd);
    probe_cmd->add_option("--probe,probe", probe, "probe name")->required()->check(CLI::IsMember(probe_names()));
    CLI::App* report_cmd = app.add_subcommand("report", "summarise report.json files under a directory");
    report_cmd->add_option("dir", report_dir, "directory to scan")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (report_cmd->parsed()) return cmd_report(report_dir);
        ExperimentConfig cfg = ExperimentConfig::load(config_path);
        if (seed) cfg.set("run.seed", std::to_string(*seed));
        if (threads) cfg.set("run.threads", std::to_string(*threads));
        if (sample_cmd->parsed()) return cmd_sample(cfg, out);
        const int rc = cmd_probe(cfg, probe, out);
        std::cout << probe << ": " << (rc == kExitPass ? "PASS" : "FAIL") << "\n";
        return rc;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitNumeric;
    }
}

} // namespace bergman::cli
