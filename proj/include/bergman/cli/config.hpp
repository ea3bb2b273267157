#pragma once

#include "bergman/kernels.hpp"
#include "bergman/rng.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace bergman::cli {

// Flat `key = value` settings with dotted sections. Lines starting with '#'
// and blank lines are ignored. Every key has a default; unknown keys and
// malformed values raise ConfigError naming the line.
class ExperimentConfig {
public:
    ExperimentConfig();

    static ExperimentConfig parse(const std::string& text, const std::string& source = "<config>");
    static ExperimentConfig load(const std::filesystem::path& path);

    // Throws ConfigError for unknown keys.
    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;

    double real(const std::string& key) const;
    std::size_t count(const std::string& key) const;
    std::uint64_t u64(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<std::size_t> index_list(const std::string& key) const;

    DomainSpec domain() const;
    RngSeed seed() const { return RngSeed{u64("run.seed"), 0}; }
    std::size_t threads() const { return count("run.threads"); }

    // All keys in sorted order, one `key = value` per line.
    std::string resolved() const;

private:
    std::map<std::string, std::string> values_;
};

// Parses "0, 3, 5" or "0-4" style lists (ranges inclusive).
std::vector<std::size_t> parse_index_list(const std::string& text);

} // namespace bergman::cli
