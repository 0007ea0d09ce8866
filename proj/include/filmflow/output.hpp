#ifndef FILMFLOW_OUTPUT_HPP
#define FILMFLOW_OUTPUT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "filmflow/coupled.hpp"

namespace filmflow {

struct ManifestEntry {
    std::string name;
    std::uint64_t bytes = 0;
    std::uint64_t hash = 0;  ///< FNV-1a 64 of the file contents
};

struct Manifest {
    std::vector<ManifestEntry> files;
    /// Combined hash over all entries; stable across identical runs.
    std::uint64_t combined_hash() const;
};

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 1469598103934665603ull);
std::uint64_t hash_file(const std::string& path);

/// Writes the solution fields under dir and returns the file manifest.
/// CSV: header x,z,phi_l,phi_b,p,c,vbx,vbz,vlx,vlz with 17 significant digits.
/// VTK: legacy ASCII structured grid with the same fields as point data.
/// A diagnostics CSV carries the iteration history. The manifest itself is
/// written to dir/manifest.txt as the last step.
Manifest write_fields(const SolutionState& state, const std::string& dir,
                      bool csv, bool vtk, const std::string& stem = "fields");

void write_manifest(const Manifest& m, const std::string& path);

void ensure_dir(const std::string& dir);

}  // namespace filmflow

#endif
