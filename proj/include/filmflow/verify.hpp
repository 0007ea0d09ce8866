#ifndef FILMFLOW_VERIFY_HPP
#define FILMFLOW_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "filmflow/field.hpp"
#include "filmflow/grid.hpp"

namespace filmflow {

struct PropertyResult {
    std::string name;
    bool passed = false;
    std::string details;
};

struct VerifyReport {
    std::vector<PropertyResult> properties;
    double min_phi_l = 0.0;  ///< extrema across the transport family
    double max_phi_l = 0.0;
    double min_c = 0.0;      ///< minimum across the nutrient family

    bool all_passed() const {
        for (const auto& p : properties)
            if (!p.passed) return false;
        return true;
    }
};

/// Deterministic 53-bit uniform in [0,1) from a raw 64-bit draw, so seeded
/// families do not depend on the standard library's distribution details.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    double next() {
        // splitmix64 step
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z ^= z >> 31;
        return double(z >> 11) * 0x1.0p-53;
    }
    double range(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::uint64_t state_;
};

/// Seeded admissible velocity field: gradient of a concave quadratic
/// potential, satisfying div(v) <= 0 and v.n <= 0 on a flat-top grid.
VectorField admissible_gradient_field(const Grid& grid, SeededUniform& rng);

/// Runs the seeded property families: transport maximum principle and
/// non-vanishing, nutrient nonnegativity, equilibrium fixed point, height
/// mass conservation, and the sign policy (optionally fed a violating field).
VerifyReport run_verify(std::uint64_t seed, int samples, bool inject_sign_violation);

std::string verify_text(const VerifyReport& rep);

}  // namespace filmflow

#endif
