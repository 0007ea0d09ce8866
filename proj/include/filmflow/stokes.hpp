#ifndef FILMFLOW_STOKES_HPP
#define FILMFLOW_STOKES_HPP

#include <optional>

#include "filmflow/field.hpp"
#include "filmflow/grid.hpp"
#include "filmflow/params.hpp"
#include "filmflow/sparse.hpp"

namespace filmflow {

/// Coupled velocity-pressure elliptic problem
///   mu_b Lap(v_b) + (mu_b/3) grad(div v_b) - grad p = grad(Pi phi_b)
///   div(xi grad p) = div(v_b)
/// with no-slip on the bottom, traction on the free surface, and Dirichlet
/// pressure on the whole boundary. The optional fields support manufactured
/// solutions; production runs leave them empty.
struct StokesProblem {
    const Grid* grid = nullptr;
    ScalarField phi_b;
    double mu_b = 1.0;
    double Pi = 1.0;
    double xi_inf = 1.0;
    double p_b0 = 0.0;

    TractionSpec traction_top{};
    TractionSpec traction_left{};
    TractionSpec traction_right{};

    std::optional<ScalarField> xi_field;          ///< variable xi(phi_b) coefficient
    std::optional<VectorField> dirichlet_v;       ///< bottom velocity data (default 0)
    std::optional<ScalarField> dirichlet_p;       ///< boundary pressure data (default p_b0)
    std::optional<VectorField> traction_data;     ///< nodal traction override
    std::optional<VectorField> body_force;        ///< momentum forcing
    std::optional<ScalarField> pressure_rhs;      ///< pressure-equation forcing

    void validate() const;
};

struct StokesDiagnostics {
    double momentum_residual = 0.0;
    double pressure_residual = 0.0;
    double traction_residual = 0.0;
    double divergence_identity = 0.0;
};

struct StokesSolution {
    VectorField v_b;
    ScalarField p;
    SolveReport report;
    StokesDiagnostics diag;
};

/// Unknown ordering: (v_x, v_z, p) interleaved per unknown node.
SparseSystem assemble_stokes(const StokesProblem& p);

StokesSolution solve_stokes(const StokesProblem& p, double tol);

/// Darcy closure v_l = v_b - (xi_inf/phi_inf) grad p.
VectorField liquid_velocity(const VectorField& v_b, const ScalarField& p,
                            double xi_inf, double phi_inf);

/// L2 norm over deep-interior nodes of
///   (4 mu_b/3) Lap(div v_b) - Pi Lap(phi_b) - Lap(p).
/// Requires nx, nz >= 6 for the composite stencil footprint.
double divergence_identity_residual(const VectorField& v_b, const ScalarField& p,
                                    const ScalarField& phi_b, double mu_b, double Pi);

}  // namespace filmflow

#endif
