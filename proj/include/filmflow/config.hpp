#ifndef FILMFLOW_CONFIG_HPP
#define FILMFLOW_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "filmflow/coupled.hpp"
#include "filmflow/grid.hpp"
#include "filmflow/height.hpp"
#include "filmflow/params.hpp"

namespace filmflow {

enum class Command { Solve, Evolve, Mms, Verify };

enum class HeightSource { Constant, Cosine, File };

struct GridSpec {
    int nx = 32;
    int nz = 8;
    double L = 1.0;
    LateralMode lateral = LateralMode::Periodic;
    double h_min = -1.0;  ///< < 0: default precursor floor
    HeightSource h_source = HeightSource::Constant;
    double h_const = 0.25;
    double h_cos_base = 0.2;
    double h_cos_amp = 0.05;
    std::string h_file;

    std::vector<double> make_profile() const;
    Grid build() const;

    bool operator==(const GridSpec&) const = default;
};

struct VerifySpec {
    int samples = 50;
    bool inject_sign_violation = false;
    bool operator==(const VerifySpec&) const = default;
};

/// Full run description parsed from a config file.
struct RunSpec {
    Command command = Command::Solve;
    std::uint64_t seed = 42;
    std::string out_dir = "out";
    bool format_csv = true;
    bool format_vtk = false;

    GridSpec grid;
    ModelParams params;
    CoupledConfig coupled;
    EvolutionConfig evolve;
    VerifySpec verify;

    bool operator==(const RunSpec& o) const;
};

/// Parses and validates a config file. Throws ConfigError with the offending
/// line number or field name.
RunSpec load_config(const std::string& path);

/// Writes every key of the spec in canonical form; load_config on the result
/// reproduces the spec exactly.
void write_config(const RunSpec& spec, const std::string& path);

}  // namespace filmflow

#endif
