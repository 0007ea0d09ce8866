#ifndef FILMFLOW_TRANSPORT_HPP
#define FILMFLOW_TRANSPORT_HPP

#include "filmflow/field.hpp"
#include "filmflow/grid.hpp"
#include "filmflow/sparse.hpp"

namespace filmflow {

/// Stationary transport problem div(-v_l phi) + a phi = a on the grid,
/// regularized by an optional artificial viscosity -eps * Lap(phi) with
/// homogeneous Neumann closure. Requires a >= a_min > 0.
struct TransportProblem {
    const Grid* grid = nullptr;
    VectorField v_l;
    ScalarField a;
    double epsilon = 0.0;

    void validate() const;
};

/// Admissibility report for the sign conditions div(v_l) <= 0 in the
/// interior and v_l . n <= 0 on the boundary.
struct SignReport {
    double max_interior_div = 0.0;
    double max_boundary_vn = 0.0;
    bool admissible = false;
};

SignReport check_sign_conditions(const Grid& grid, const VectorField& v_l, double tol);

/// Discrete operator: eps-scaled diffusion + conservative upwind convection
/// of -v_l + diagonal reaction a. rhs installs g (pass a for the model form).
SparseSystem assemble_transport(const TransportProblem& p, const ScalarField& rhs);

struct TransportResult {
    ScalarField phi_l;
    SolveReport report;
    double min_phi = 0.0;
    double max_phi = 0.0;
    bool bounds_ok = false;  ///< phi in [-1e-8, 1+1e-8] nodewise
};

/// Solves div(-v_l phi) + a phi = a.
TransportResult solve_phi(const TransportProblem& p, double tol);

/// Solves with a custom right-hand side (manufactured-solution studies).
TransportResult solve_transport_with_rhs(const TransportProblem& p,
                                         const ScalarField& rhs, double tol);

/// Pointwise complement phi_b = 1 - phi_l.
ScalarField phi_b_from_phi_l(const ScalarField& phi_l);

}  // namespace filmflow

#endif
