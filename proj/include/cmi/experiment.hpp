// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cmi/codegen.hpp"
#include "cmi/geometry.hpp"
#include "cmi/imaging.hpp"
#include "cmi/oracle.hpp"
#include "cmi/rfchain.hpp"
#include "cmi/scene.hpp"
#include "cmi/visibility.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmi {

enum class Acquisition { sequential, concurrent };

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error("config field '" + field + "': " + what), field(field) {}
    std::string field;
};

struct ExperimentConfig {
    std::string name = "custom";
    std::string geometry = "min-redundancy-4"; // builtin name or geometry file
    std::string scene_file;                    // optional, merged with `scene`
    Scene scene;
    SimParams sim;
    std::string code_family = "bocp"; // bocp | rademacher
    std::size_t code_count = 0;       // 0 -> exactly what the acquisition needs
    Acquisition acquisition = Acquisition::sequential;
    bool calibrate_zero_baseline = false;
    bool oracle = false;
    std::filesystem::path out_dir = "out";

    std::size_t codes_needed(std::size_t n_elements) const;
    // Structural checks that do not touch the filesystem.
    void validate() const;
};

// INI text: [experiment] [geometry] [scene] [sim] [codes] [acquisition].
// Relative file paths resolve against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
// Canonical form; parse_config(to_ini(c)) == c for inline scenes.
std::string to_ini(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

bool is_builtin_geometry(const std::string& name);
ArrayGeometry resolve_geometry(const std::string& name_or_path);
Scene resolve_scene(const ExperimentConfig& config);

struct CodeAssignment {
    std::vector<Code> i_codes;
    std::vector<Code> q_codes; // concurrent only
    std::vector<std::size_t> walsh_indices;
};

CodeAssignment assign_codes(const ExperimentConfig& config, std::size_t n_elements);

struct ExperimentResult {
    explicit ExperimentResult(ArrayGeometry g) : geometry(std::move(g)) {}

    ArrayGeometry geometry;
    Scene scene;
    CodeAssignment codes;
    std::size_t runs_used = 0;
    VisibilityFunction measured;               // as demodulated
    VisibilityFunction imaged;                 // after optional calibration
    std::optional<VisibilityFunction> reference; // correlator bank, run 0 streams
    std::optional<ComparisonReport> comparison;
    BrightnessMap image{1, 1, 1.0, 1.0};
    DiftOptions dift_options;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Writes to a temporary sibling and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// visibility.txt, image.csv, image.pgm, image_axes.txt, config.ini,
// manifest.txt (and reference.txt with the oracle) under `dir`.
std::vector<std::filesystem::path> write_bundle(const ExperimentResult& result, const ExperimentConfig& config,
                                                const std::filesystem::path& dir);

std::string visibility_dump_text(const ExperimentResult& result, const ExperimentConfig& config);

} // namespace cmi
