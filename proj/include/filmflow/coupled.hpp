#ifndef FILMFLOW_COUPLED_HPP
#define FILMFLOW_COUPLED_HPP

#include <optional>
#include <string>
#include <vector>

#include "filmflow/field.hpp"
#include "filmflow/grid.hpp"
#include "filmflow/params.hpp"
#include "filmflow/transport.hpp"

namespace filmflow {

enum class GrowthMode {
    FrozenG,  ///< transport reaction a = k_b g_inf (constant growth factor)
    MonodG,   ///< a = k_b c/(c+K_b) with c from the previous outer iterate
};

enum class SignAction { Proceed, Flag, Abort };

struct CoupledConfig {
    GrowthMode mode = GrowthMode::FrozenG;
    double outer_tol = 1e-10;   ///< on successive liquid-velocity differences
    int outer_max_iter = 50;
    double omega = 1.0;         ///< under-relaxation on phi_b, in (0,1]
    double initial_phi_inf = 0.9;  ///< phi_l^(0), in (0,1)
    double lin_tol = 1e-12;
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    double sign_tol = 1e-6;
    double sign_abort_factor = 100.0;

    /// Test hook: replaces the Monod growth factor field in MonodG mode.
    std::optional<ScalarField> injected_growth;

    void validate() const;
};

struct IterationRecord {
    int iteration = 0;
    double dv_l = 0.0;
    double dphi_l = 0.0;
    double dp = 0.0;
    double max_interior_div = 0.0;
    double max_boundary_vn = 0.0;
    double min_phi_l = 0.0;
    double max_phi_l = 0.0;
    double min_c = 0.0;
    double max_c = 0.0;
    double incompressibility = 0.0;  ///< ||div(phi_l v_l + phi_b v_b)||_L2
    int picard_iterations = 0;
};

enum class RunStatus { Converged, MaxIterations, SignAbort, InnerError };

/// One converged (or partial) quasi-stationary snapshot plus its history.
struct SolutionState {
    VectorField v_b, v_l;
    ScalarField p, phi_l, phi_b, c;
    std::vector<IterationRecord> history;
    bool converged = false;
    RunStatus status = RunStatus::MaxIterations;
    std::string error;
    double aspect_ratio = 0.0;           ///< max h / L, logged only
    double grad_vl_over_amin = 0.0;      ///< ||grad v_l||_inf / a_min, logged only
};

struct MonitorReport {
    double incompressibility = 0.0;
    double max_interior_div = 0.0;
    double max_boundary_vn = 0.0;
    double stability_ratio = 0.0;  ///< (|v_b|_H1 + |p - p_b0|_H1) / data norm
};

/// Outer iteration: Stokes(phi_b) -> (v_b, p) -> v_l -> transport -> phi_l,
/// phi_b -> nutrient -> c, gated on ||v_l - v_l_prev||.
SolutionState run_fixed_point(const Grid& grid, const ModelParams& params,
                              const CoupledConfig& config);

MonitorReport iteration_diagnostics(const SolutionState& state, const ModelParams& params);

SignAction sign_policy(const SignReport& report, double tol, double abort_factor);

/// Composite velocity phi_l v_l + phi_b v_b.
VectorField composite_velocity(const SolutionState& state);

}  // namespace filmflow

#endif
