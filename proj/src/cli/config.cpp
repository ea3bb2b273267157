#include "bergman/cli/config.hpp"

#include "bergman/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bergman::cli {
namespace {

const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> d{
        {"domain.kind", "disk"},
        {"domain.alpha", "0"},
        {"domain.rho", "0.5"},
        {"domain.d", "2"},
        {"grid.resolution", "16"},
        {"grid.inset", "0.15"},
        // quadrature | basis | random | projection | zero | block_zero
        {"kernel.mode", "quadrature"},
        {"kernel.basis_rank", "8"},
        {"kernel.clamp_delta", "1e-6"},
        {"kernel.sites", "6"},
        {"kernel.rank", "2"},
        // "disk_radius < r" or an index list
        {"probe.subset", "disk_radius < 0.3"},
        {"probe.palm", "0"},
        {"probe.window", "0,1"},
        {"probe.samples", "200"},
        {"sample.count", "10"},
        {"gaf.terms", "120"},
        {"gaf.radius", "0.8"},
        {"gaf.bins", "8"},
        {"gaf.trials", "10000"},
        {"annulus.pairs", "50"},
        {"run.seed", "1"},
        {"run.threads", "1"},
        {"output.svg", "true"},
    };
    return d;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
bool parse_number(const std::string& s, T& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

} // namespace

ExperimentConfig::ExperimentConfig() : values_(defaults()) {}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (!values_.contains(key)) throw ConfigError("unknown key '" + key + "'");
    values_[key] = value;
}

const std::string& ExperimentConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
    return it->second;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& source) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "empty key");
        try {
            cfg.set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    // Surface malformed values now rather than mid-run.
    try {
        cfg.domain();
        for (const char* k : {"grid.inset", "kernel.clamp_delta", "gaf.radius"}) cfg.real(k);
        for (const char* k : {"grid.resolution", "kernel.basis_rank", "kernel.sites", "kernel.rank", "probe.samples",
                              "sample.count", "gaf.terms", "gaf.bins", "gaf.trials", "annulus.pairs", "run.threads"})
            cfg.count(k);
        cfg.u64("run.seed");
        cfg.flag("output.svg");
        cfg.index_list("probe.palm");
        cfg.index_list("probe.window");
        const std::string& mode = cfg.get("kernel.mode");
        static const std::vector<std::string> modes{"quadrature", "basis", "random", "projection", "zero", "block_zero"};
        if (std::find(modes.begin(), modes.end(), mode) == modes.end())
            throw ConfigError("kernel.mode: unknown mode '" + mode + "'");
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    } catch (const ContractViolation& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

double ExperimentConfig::real(const std::string& key) const {
    const std::string& s = get(key);
    double v = 0.0;
    if (!parse_number(s, v)) throw ConfigError(key + ": expected a number, got '" + s + "'");
    return v;
}

std::size_t ExperimentConfig::count(const std::string& key) const {
    const std::string& s = get(key);
    std::size_t v = 0;
    if (!parse_number(s, v)) throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'");
    return v;
}

std::uint64_t ExperimentConfig::u64(const std::string& key) const {
    const std::string& s = get(key);
    std::uint64_t v = 0;
    if (!parse_number(s, v)) throw ConfigError(key + ": expected an unsigned integer, got '" + s + "'");
    return v;
}

bool ExperimentConfig::flag(const std::string& key) const {
    const std::string& s = get(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

std::vector<std::size_t> ExperimentConfig::index_list(const std::string& key) const {
    try {
        return parse_index_list(get(key));
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

DomainSpec ExperimentConfig::domain() const {
    const std::string& kind = get("domain.kind");
    DomainSpec spec;
    if (kind == "disk") spec = Disk{real("domain.alpha")};
    else if (kind == "annulus") spec = Annulus{real("domain.rho")};
    else if (kind == "polydisk") spec = Polydisk{count("domain.d")};
    else if (kind == "ball") spec = Ball{count("domain.d")};
    else throw ConfigError("domain.kind: expected disk, annulus, polydisk or ball, got '" + kind + "'");
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
    return spec;
}

std::string ExperimentConfig::resolved() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        const auto dash = tok.find('-');
        std::size_t a = 0;
        std::size_t b = 0;
        if (dash == std::string::npos) {
            if (!parse_number(tok, a)) throw ConfigError("bad index '" + tok + "'");
            b = a;
        } else if (!parse_number(trim(tok.substr(0, dash)), a) || !parse_number(trim(tok.substr(dash + 1)), b) || b < a) {
            throw ConfigError("bad index range '" + tok + "'");
        }
        for (std::size_t i = a; i <= b; ++i) out.push_back(i);
    }
    return out;
}

} // namespace bergman::cli
