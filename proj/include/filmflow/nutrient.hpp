#ifndef FILMFLOW_NUTRIENT_HPP
#define FILMFLOW_NUTRIENT_HPP

#include <vector>

#include "filmflow/field.hpp"
#include "filmflow/grid.hpp"
#include "filmflow/sparse.hpp"

namespace filmflow {

/// Convection-reaction-diffusion problem
///   -d Lap(c) + div(v_l c) = -k_c phi_b c/(c + K_c)
/// with c = c0 on the bottom and zero diffusive flux on the free surface,
/// solved by Picard iteration with the Monod denominator frozen at the
/// previous iterate.
struct NutrientProblem {
    const Grid* grid = nullptr;
    VectorField v_l;
    ScalarField phi_b;
    double d = 1.0;
    double k_c = 1.0;
    double K_c = 1.0;
    double c0 = 1.0;
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    double lin_tol = 1e-12;

    void validate() const;
};

struct NutrientResult {
    ScalarField c;
    std::vector<double> picard_history;  ///< successive-difference norms
    int picard_iterations = 0;
    bool converged = false;
    double min_c = 0.0;
    double max_c = 0.0;
};

NutrientResult solve_nutrient(const NutrientProblem& p);

/// One linear CRD solve -d Lap(c) + div(v_l c) + coeff c = rhs with the
/// production boundary conditions. Shared by the Picard step and the
/// manufactured-solution study.
ScalarField solve_linear_crd(const Grid& grid, const VectorField& v_l,
                             const ScalarField& coeff, const ScalarField& rhs,
                             double d, double c0_bottom, double lin_tol,
                             const ScalarField* dirichlet_bottom = nullptr);

struct LowerBoundCertificate {
    double bound = 0.0;
    bool applicable = false;
};

/// Certified lower bound c >= -k_c c_max M / (2 d K_c) + c0, applicable
/// when M < 2 d K_c c0 / (k_c c_max).
LowerBoundCertificate lower_bound_certificate(double d, double k_c, double K_c,
                                              double c0, double M, double c_max);

}  // namespace filmflow

#endif
