#ifndef FILMFLOW_OPERATORS_HPP
#define FILMFLOW_OPERATORS_HPP

#include <functional>
#include <vector>

#include "filmflow/field.hpp"
#include "filmflow/grid.hpp"

namespace filmflow {

/// One coefficient of a nodal stencil (node-space index).
struct StencilEntry {
    int node;
    double c;
};
using Stencil = std::vector<StencilEntry>;

/// Second-order first derivatives in computational coordinates (x, s).
/// Centered in the interior, one-sided 3-point at non-periodic edges,
/// wrapping in Periodic mode.
Stencil stencil_dx(const Grid& g, int i, int j);
Stencil stencil_ds(const Grid& g, int i, int j);

/// Physical derivatives under the terrain-following map z = s h(x):
///   d/dx|_z = d/dx|_s - (s h'/h) d/ds,   d/dz = (1/h) d/ds.
Stencil stencil_phys_dx(const Grid& g, int i, int j);
Stencil stencil_phys_dz(const Grid& g, int i, int j);

double eval_stencil(const Stencil& st, const ScalarField& f);

double phys_dx_at(const Grid& g, const ScalarField& f, int i, int j);
double phys_dz_at(const Grid& g, const ScalarField& f, int i, int j);

/// div(v) at a node from the physical derivative stencils.
double divergence_at(const Grid& g, const VectorField& v, int i, int j);
ScalarField divergence(const Grid& g, const VectorField& v);

/// Gradient field with centered interior / one-sided boundary derivatives.
VectorField gradient(const Grid& g, const ScalarField& f);

/// Sink for matrix rows: (node, coefficient) pairs in node space.
using RowSink = std::function<void(int node, double coef)>;

/// Control-volume geometry helpers (computational-space extents).
double face_len_s(const Grid& g, int j);  // span of x-faces of CV row j
double face_len_x(const Grid& g, int i);  // span of s-faces of CV column i

/// Emits the finite-volume row of div(kappa grad .) at node (i,j), scaled.
/// kappa == nullptr means unit coefficient. Physical-boundary faces carry
/// zero flux (natural Neumann closure).
void emit_laplacian_row(const Grid& g, int i, int j, const ScalarField* kappa,
                        double scale, const RowSink& sink);

/// Emits the conservative first-order upwind row of div(w phi) at node (i,j),
/// scaled. Boundary faces use the node's own trace value.
void emit_upwind_row(const Grid& g, int i, int j, const VectorField& w,
                     double scale, const RowSink& sink);

/// Matrix-free div(grad f) at an interior node (compact FV stencil).
double laplacian_at(const Grid& g, const ScalarField& f, int i, int j);

}  // namespace filmflow

#endif
