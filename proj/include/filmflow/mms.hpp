#ifndef FILMFLOW_MMS_HPP
#define FILMFLOW_MMS_HPP

#include <string>
#include <vector>

namespace filmflow {

struct MmsRow {
    int level = 0;
    double h = 0.0;
    double error = 0.0;
    double order = 0.0;  ///< log2 ratio to the previous level (0 on the first)
};

struct MmsStudy {
    std::string name;
    std::vector<MmsRow> rows;
    double floor = 0.0;      ///< required observed order on the finest pair
    bool passed = false;

    double observed_order() const { return rows.empty() ? 0.0 : rows.back().order; }
};

struct MmsReport {
    std::vector<MmsStudy> studies;
    bool all_passed() const {
        for (const auto& s : studies)
            if (!s.passed) return false;
        return true;
    }
};

/// Upwind transport against phi*(z) = 0.8 + 0.1 cos(pi z / H) with the
/// admissible field v = (-g x, -g z). Expected order about 1.
MmsStudy mms_transport_study(int levels = 3);

/// Velocity-pressure system against trigonometric (v*, p*, phi_b*) with
/// analytic forcings and boundary data. Returns {velocity, pressure}.
std::pair<MmsStudy, MmsStudy> mms_stokes_study(int levels = 3);

/// Linear convection-reaction-diffusion with frozen coefficient and v = 0
/// (the diffusion-dominated regime); expected order about 2.
MmsStudy mms_nutrient_study(int levels = 3);

/// Residual of (4mu/3) Lap(div v) - Pi Lap(phi_b) - Lap(p) at nodal samples
/// of a potential-flow family that satisfies the momentum balance exactly.
double mms_divergence_identity_residual(int nx, int nz);

/// All studies at the pinned order floors (transport 0.9, stokes v 1.0,
/// stokes p 1.8, nutrient 1.8).
MmsReport run_mms(int levels = 3);

/// Renders one study as CSV with columns level,h,error,order.
std::string mms_csv(const MmsStudy& study);

}  // namespace filmflow

#endif
