#pragma once

// Run configuration: a flat `key = value` file merged with command-line
// overrides, then parsed into typed settings.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vestokes/constitutive.hpp"
#include "vestokes/field.hpp"

namespace vestokes::cli {

using KeyValues = std::map<std::string, std::string>;

/// `key = value` per line; `#` starts a comment; blank lines are ignored.
/// Underscores in keys are read as hyphens. ConfigError on malformed lines
/// and repeated keys.
KeyValues parse_config(std::istream& in, const std::string& origin = "config");
KeyValues read_config_file(const std::filesystem::path& path);

/// Keys accepted by each subcommand.
const std::vector<std::string>& allowed_keys(const std::string& command);

struct RunConfig {
    std::string command;

    MuFields mu = MuFields::constant(1, 0, 0);
    /// Set when all three parameters are constants.
    std::optional<MuTriple> mu_const = MuTriple{1, 0, 0};
    bool mu_given = false;

    std::optional<TensorField> b;
    std::string b_source = "identity";
    /// Node positions when B comes from a grid file.
    std::vector<Vec3> b_nodes;

    std::array<ScalarField, 3> f;
    std::string f_source = "0,0,0";

    std::array<int, 3> mesh{4, 4, 4};
    bool mesh_given = false;
    Vec3 lengths{1.0, 1.0, 1.0};
    int quad_points = 3;
    /// Load-vector rule; 0 follows quad_points.
    int load_quad_points = 0;
    int samples = 16;
    std::optional<double> epsilon;

    std::string solver = "direct";
    double tol = 1e-10;

    std::string mms_case = "classical";
    std::vector<int> meshes{2, 4, 8};

    std::uint64_t seed = 0;
    int threads = 1;

    std::filesystem::path output_dir = ".";
    std::optional<std::filesystem::path> json, vtk, csv;

    /// Output path resolved against output_dir.
    std::filesystem::path output(const std::filesystem::path& name) const;
};

/// Environment variable that sets the output directory when no flag or
/// config key does.
inline constexpr const char* kOutputDirEnv = "VESTOKES_OUTPUT_DIR";

/// Typed settings from merged key-values. Checks key names, value syntax,
/// positivity of tolerances and that input files exist; creates the output
/// directory. Throws ConfigError.
RunConfig make_run_config(const std::string& command, const KeyValues& kv);

double parse_number(const std::string& text, const std::string& key);
int parse_int(const std::string& text, const std::string& key);
std::vector<std::string> split_list(const std::string& text);

}  // namespace vestokes::cli
