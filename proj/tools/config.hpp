#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamlu/gallery.hpp"

namespace beamlu::cli {

class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct MatrixEntry {
    std::string label;
    bool is_mm = false;
    std::string mm_path;
    MatrixFamily family = MatrixFamily::zielke;
    std::size_t n = 0;
    double delta = 0.0;
    double cond = 0.0;
    std::size_t block = 0; // generator blocking (uniform) for block families
    bool has_seed = false;
    std::uint64_t seed = 0;

    bool seeded_family() const;
    MatrixSpec to_spec(std::uint64_t seed_value) const;
};

struct BlockingEntry {
    bool uniform = true;
    std::size_t size = 0;
    std::vector<std::size_t> starts; // explicit form, without the n+1 marker
    std::string label;
};

/// Flat key-value configuration with sections; no environment overrides.
struct ExperimentConfig {
    std::string output = "out";
    std::string format = "both"; // json | csv | both
    std::size_t jobs = 1;
    std::vector<std::uint64_t> seeds = {1};
    bool trace_spectral = true;

    std::vector<MatrixEntry> matrices;
    std::vector<BlockingEntry> blockings;
    std::vector<std::string> methods;
    std::vector<double> tau_hats;
    bool woodbury = true;
    std::size_t refine_max_iters = 0;
    double refine_target = 0.0;
    std::vector<std::string> check_suites; // subset of growth, factor, psi, det
};

/// Parses and validates a config file. Throws config_error naming the
/// offending field or path.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

} // namespace beamlu::cli
