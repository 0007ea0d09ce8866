#ifndef FILMFLOW_HEIGHT_HPP
#define FILMFLOW_HEIGHT_HPP

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "filmflow/coupled.hpp"
#include "filmflow/field.hpp"
#include "filmflow/grid.hpp"

namespace filmflow {

/// Per-column film heights on the horizontal grid (nx+1 values).
struct HeightProfile {
    std::vector<double> h;
    double time = 0.0;
};

enum class HeightClosure { Periodic, NeumannZero };

struct EvolutionConfig {
    double dt = 1e-3;
    double t_final = 1e-2;
    double cfl = 0.9;
    HeightClosure closure = HeightClosure::Periodic;
    double h_min = -1.0;  ///< < 0: inherit the grid's precursor floor

    void validate() const;
};

/// Per-column flux F_i = integral of v_x over the column, by trapezoid
/// along the mapped grid. Exact for integrands linear in z.
std::vector<double> column_flux(const Grid& grid, const VectorField& v);

/// dh/dt per column in flux-divergence form: -d/dx [int v_x dz] + v_z(x,0).
/// This is the form the update integrates (conservative).
std::vector<double> height_tendency_flux_form(const Grid& grid, const VectorField& v,
                                              const HeightProfile& h);

/// dh/dt per column in chain-rule form:
///   -v_x(x,h) dh/dx - int_0^h dv_x/dx dz + v_z(x,0).
/// Cross-check evaluator only; agrees with the flux form to truncation order.
std::vector<double> height_tendency_chain_rule(const Grid& grid, const VectorField& v,
                                               const HeightProfile& h);

struct HeightStep {
    HeightProfile profile;
    double clipped_mass = 0.0;     ///< mass added by the precursor floor
    double boundary_flux = 0.0;    ///< net outflow at the lateral edges (0 if periodic)
    double bottom_source = 0.0;    ///< dt * sum_i v3(x_i,0) dx
};

/// Explicit conservative update
///   h_i^{n+1} = h_i^n - dt (F_{i+1/2} - F_{i-1/2})/dx + dt v3(x_i, 0)
/// with upwinded face fluxes. v is the composite velocity on the grid
/// matching h. Throws on CFL violation or non-finite velocities.
HeightStep advance_height(const Grid& grid, const HeightProfile& h,
                          const VectorField& v, double dt, const EvolutionConfig& cfg);

struct EvolveHooks {
    /// Replaces the coupled solve: produces the composite velocity directly.
    std::function<VectorField(const Grid&)> velocity_override;
};

struct EvolveResult {
    std::vector<HeightProfile> series;       ///< h at t0, t1, ...
    std::vector<SolutionState> states;       ///< one per step (empty with override)
    /// Backing grids for states: states[k] lives on *grids[k].
    std::vector<std::shared_ptr<const Grid>> grids;
    std::vector<double> clipped_mass;        ///< per step
    bool completed = false;
    std::string error;
    int failed_step = -1;
};

/// Quasi-static time loop: rebuild the grid under h, solve the coupled
/// system, advect h with the composite velocity.
EvolveResult evolve(const ModelParams& params, const CoupledConfig& coupled_cfg,
                    const EvolutionConfig& evo_cfg, double L, int nx, int nz,
                    LateralMode lateral, const std::vector<double>& h0,
                    const EvolveHooks& hooks = {});

}  // namespace filmflow

#endif
