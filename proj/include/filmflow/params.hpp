#ifndef FILMFLOW_PARAMS_HPP
#define FILMFLOW_PARAMS_HPP

#include <array>
#include <string>

namespace filmflow {

struct Vec2 {
    double x = 0.0;
    double z = 0.0;
};

/// How the traction vector on a free-surface side is specified.
enum class TractionKind {
    ConstantVector,     ///< t_ext = value + normal_offset * n
    EquilibriumNormal,  ///< t_ext = -(p_b0 + Pi*phi_b) n + normal_offset * n + value,
                        ///< re-evaluated from the current phi_b
};

struct TractionSpec {
    TractionKind kind = TractionKind::ConstantVector;
    Vec2 value{};
    double normal_offset = 0.0;  ///< outward tension (> 0) or compression (< 0)
};

/// Dimensionless model constants and boundary data shared by all solvers.
struct ModelParams {
    double k_b = 1.0;      ///< biomass growth rate
    double K_b = 1.0;      ///< growth half-saturation
    double k_c = 1.0;      ///< nutrient intake rate
    double K_c = 1.0;      ///< consumption half-saturation
    double d = 5.0;        ///< nutrient diffusivity (large in the regime of interest)
    double mu_b = 1.0;     ///< biomass shear viscosity
    double Pi = 0.1;       ///< chemical potential coefficient, pi(phi_b) = Pi*phi_b
    double xi_inf = 0.5;   ///< Darcy mobility
    double phi_inf = 0.9;  ///< reference liquid fraction, in (0,1)
    double g_inf = 0.5;    ///< frozen growth factor, in (0,1]
    double c0 = 1.0;       ///< bottom nutrient concentration
    double p_b0 = 0.0;     ///< boundary pressure (p_ext - pi_ext), constant on the boundary

    TractionSpec traction_top{};
    TractionSpec traction_left{};
    TractionSpec traction_right{};

    /// Throws ConfigError naming the first offending field.
    void validate() const;
};

/// Saturating rate factor c/(c+K). Requires c >= 0, K > 0; result lies in [0,1).
double monod(double c, double K);

}  // namespace filmflow

#endif
