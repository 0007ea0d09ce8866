#include "filmflow/coupled.hpp"

#include <cmath>
#include <stdexcept>

#include "filmflow/nutrient.hpp"
#include "filmflow/operators.hpp"
#include "filmflow/stokes.hpp"
#include "filmflow/util.hpp"

namespace filmflow {

void CoupledConfig::validate() const {
    if (!(omega > 0.0 && omega <= 1.0)) {
        throw ConfigError("omega: must be in (0,1]");
    }
    if (!(outer_tol > 0.0) || !(lin_tol > 0.0) || !(picard_tol > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }
    if (outer_max_iter < 1) throw ConfigError("outer_max_iter: must be >= 1");
    if (!(initial_phi_inf > 0.0 && initial_phi_inf < 1.0)) {
        throw ConfigError("initial_phi_inf: must be in (0,1)");
    }
}

SignAction sign_policy(const SignReport& rep, double tol, double abort_factor) {
    double worst = std::max(rep.max_interior_div, rep.max_boundary_vn);
    if (worst <= tol) return SignAction::Proceed;
    if (worst <= abort_factor * tol) return SignAction::Flag;
    return SignAction::Abort;
}

VectorField composite_velocity(const SolutionState& st) {
    const Grid& g = st.v_l.grid();
    VectorField v(g);
    for (int k = 0; k < g.n_nodes(); ++k) {
        v.x[k] = st.phi_l[k] * st.v_l.x[k] + st.phi_b[k] * st.v_b.x[k];
        v.z[k] = st.phi_l[k] * st.v_l.z[k] + st.phi_b[k] * st.v_b.z[k];
    }
    return v;
}

namespace {

double incompressibility_residual(const Grid& g, const SolutionState& st) {
    VectorField v = composite_velocity(st);
    ScalarField div_v = divergence(g, v);
    return l2_norm(div_v);
}

double max_grad_inf(const Grid& g, const VectorField& v) {
    double m = 0.0;
    for (int i = 0; i <= g.nx(); ++i) {
        for (int j = 0; j <= g.nz(); ++j) {
            m = std::max({m, std::abs(phys_dx_at(g, v.x, i, j)),
                          std::abs(phys_dz_at(g, v.x, i, j)),
                          std::abs(phys_dx_at(g, v.z, i, j)),
                          std::abs(phys_dz_at(g, v.z, i, j))});
        }
    }
    return m;
}

}  // namespace

SolutionState run_fixed_point(const Grid& g, const ModelParams& params,
                              const CoupledConfig& cfg) {
    params.validate();
    cfg.validate();

    SolutionState st;
    st.phi_l = ScalarField(g, cfg.initial_phi_inf);
    st.phi_b = ScalarField(g, 1.0 - cfg.initial_phi_inf);
    st.c = ScalarField(g, params.c0);  // c^(0) = c0 for the Monod-coupled scheme
    st.v_b = VectorField(g);
    st.v_l = VectorField(g);
    st.p = ScalarField(g, params.p_b0);
    st.aspect_ratio = g.max_height() / g.length();

    VectorField v_l_prev(g);
    ScalarField phi_l_prev = st.phi_l;
    ScalarField p_prev = st.p;

    for (int ell = 1; ell <= cfg.outer_max_iter; ++ell) {
        IterationRecord rec;
        rec.iteration = ell;
        try {
            StokesProblem sp;
            sp.grid = &g;
            sp.phi_b = st.phi_b;
            sp.mu_b = params.mu_b;
            sp.Pi = params.Pi;
            sp.xi_inf = params.xi_inf;
            sp.p_b0 = params.p_b0;
            sp.traction_top = params.traction_top;
            sp.traction_left = params.traction_left;
            sp.traction_right = params.traction_right;
            StokesSolution ss = solve_stokes(sp, cfg.lin_tol);
            st.v_b = std::move(ss.v_b);
            st.p = std::move(ss.p);

            st.v_l = liquid_velocity(st.v_b, st.p, params.xi_inf, params.phi_inf);
            st.v_l.sync_periodic();

            SignReport sign = check_sign_conditions(g, st.v_l, cfg.sign_tol);
            rec.max_interior_div = sign.max_interior_div;
            rec.max_boundary_vn = sign.max_boundary_vn;
            SignAction action = sign_policy(sign, cfg.sign_tol, cfg.sign_abort_factor);
            if (action == SignAction::Abort) {
                st.status = RunStatus::SignAbort;
                st.error = "sign conditions violated beyond abort threshold at iteration " +
                           std::to_string(ell) + " (div " + format_g17(sign.max_interior_div) +
                           ", v.n " + format_g17(sign.max_boundary_vn) + ")";
                st.history.push_back(rec);
                return st;
            }
            if (action == SignAction::Flag) {
                log_warn("iteration %d: sign conditions flagged (div %.3e, v.n %.3e)",
                         ell, sign.max_interior_div, sign.max_boundary_vn);
            }

            // Growth factor field for the transport reaction.
            ScalarField growth(g, params.g_inf);
            if (cfg.mode == GrowthMode::MonodG) {
                if (cfg.injected_growth) {
                    growth = *cfg.injected_growth;
                } else {
                    for (int k = 0; k < g.n_nodes(); ++k) {
                        growth[k] = monod(std::max(st.c[k], 0.0), params.K_b);
                    }
                }
            }

            TransportProblem tp;
            tp.grid = &g;
            tp.v_l = st.v_l;
            tp.a = ScalarField(g);
            for (int k = 0; k < g.n_nodes(); ++k) tp.a[k] = params.k_b * growth[k];
            TransportResult tr = solve_phi(tp, cfg.lin_tol);
            rec.min_phi_l = tr.min_phi;
            rec.max_phi_l = tr.max_phi;
            st.grad_vl_over_amin = max_grad_inf(g, st.v_l) / tp.a.min();

            // Under-relax the biomass fraction; keep the complement exact.
            ScalarField phi_b_new = phi_b_from_phi_l(tr.phi_l);
            for (int k = 0; k < g.n_nodes(); ++k) {
                st.phi_b[k] = cfg.omega * phi_b_new[k] + (1.0 - cfg.omega) * st.phi_b[k];
                st.phi_l[k] = 1.0 - st.phi_b[k];
            }

            NutrientProblem np;
            np.grid = &g;
            np.v_l = st.v_l;
            np.phi_b = st.phi_b;
            np.d = params.d;
            np.k_c = params.k_c;
            np.K_c = params.K_c;
            np.c0 = params.c0;
            np.picard_tol = cfg.picard_tol;
            np.picard_max_iter = cfg.picard_max_iter;
            np.lin_tol = cfg.lin_tol;
            NutrientResult nr = solve_nutrient(np);
            st.c = std::move(nr.c);
            rec.picard_iterations = nr.picard_iterations;
            rec.min_c = nr.min_c;
            rec.max_c = nr.max_c;
        } catch (const std::exception& e) {
            st.status = RunStatus::InnerError;
            st.error = "inner solver failed at iteration " + std::to_string(ell) + ": " + e.what();
            st.history.push_back(rec);
            return st;
        }

        rec.dv_l = l2_diff(st.v_l, v_l_prev);
        rec.dphi_l = l2_diff(st.phi_l, phi_l_prev);
        rec.dp = l2_diff(st.p, p_prev);
        rec.incompressibility = incompressibility_residual(g, st);
        st.history.push_back(rec);

        v_l_prev = st.v_l;
        phi_l_prev = st.phi_l;
        p_prev = st.p;

        // Two completed iterates are needed for a meaningful difference.
        if (ell >= 2 && rec.dv_l <= cfg.outer_tol) {
            st.converged = true;
            st.status = RunStatus::Converged;
            return st;
        }
    }
    st.status = RunStatus::MaxIterations;
    return st;
}

MonitorReport iteration_diagnostics(const SolutionState& st, const ModelParams& params) {
    if (st.history.empty()) {
        throw std::invalid_argument("iteration_diagnostics: no completed iteration");
    }
    const Grid& g = st.v_l.grid();
    MonitorReport rep;
    rep.incompressibility = st.history.back().incompressibility;
    rep.max_interior_div = st.history.back().max_interior_div;
    rep.max_boundary_vn = st.history.back().max_boundary_vn;

    // Discrete analogue of the stability estimate's left/right-hand sides.
    ScalarField p_tilde(g);
    for (int k = 0; k < g.n_nodes(); ++k) p_tilde[k] = st.p[k] - params.p_b0;
    VectorField gp = gradient(g, p_tilde);
    VectorField gvx = gradient(g, st.v_b.x);
    VectorField gvz = gradient(g, st.v_b.z);
    double h1_v = std::sqrt(l2_norm(st.v_b) * l2_norm(st.v_b) +
                            l2_norm(gvx) * l2_norm(gvx) + l2_norm(gvz) * l2_norm(gvz));
    double h1_p = std::sqrt(l2_norm(p_tilde) * l2_norm(p_tilde) + l2_norm(gp) * l2_norm(gp));
    double t_norm = 0.0;
    for (const TractionSpec* t : {&params.traction_top, &params.traction_left,
                                  &params.traction_right}) {
        t_norm += std::sqrt(t->value.x * t->value.x + t->value.z * t->value.z) +
                  std::abs(t->normal_offset);
        if (t->kind == TractionKind::EquilibriumNormal) {
            t_norm += std::abs(params.p_b0) + params.Pi;
        }
    }
    double data = params.Pi * l2_norm(st.phi_b) + t_norm +
                  std::abs(params.p_b0) * std::sqrt(st.p.grid().total_area());
    rep.stability_ratio = data > 0.0 ? (h1_v + h1_p) / data : 0.0;
    return rep;
}

}  // namespace filmflow
