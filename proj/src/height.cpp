#include "filmflow/height.hpp"

#include <cmath>
#include <stdexcept>

#include "filmflow/operators.hpp"
#include "filmflow/util.hpp"

namespace filmflow {

void EvolutionConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt: must be positive");
    if (!(t_final > 0.0)) throw ConfigError("t_final: must be positive");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl: must be in (0,1]");
}

std::vector<double> column_flux(const Grid& g, const VectorField& v) {
    if (&v.grid() != &g) throw std::invalid_argument("column_flux: grid/field mismatch");
    std::vector<double> F(g.nx() + 1, 0.0);
    for (int i = 0; i <= g.nx(); ++i) {
        const double dz = g.h(i) * g.ds();
        double acc = 0.0;
        for (int j = 0; j < g.nz(); ++j) {
            acc += 0.5 * (v.x.at(i, j) + v.x.at(i, j + 1)) * dz;
        }
        F[i] = acc;
    }
    return F;
}

namespace {

// Centered/periodic second-order d/dx of a column array.
double column_dx(const Grid& g, const std::vector<double>& f, int i) {
    const int nx = g.nx();
    const double inv2 = 1.0 / (2.0 * g.dx());
    if (g.periodic()) {
        int im = (i - 1 + nx) % nx, ip = (i + 1) % nx;
        return (f[ip] - f[im]) * inv2;
    }
    if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
    if (i == nx) return (3.0 * f[nx] - 4.0 * f[nx - 1] + f[nx - 2]) * inv2;
    return (f[i + 1] - f[i - 1]) * inv2;
}

}  // namespace

std::vector<double> height_tendency_flux_form(const Grid& g, const VectorField& v,
                                              const HeightProfile& h) {
    std::vector<double> F = column_flux(g, v);
    std::vector<double> out(g.nx() + 1);
    for (int i = 0; i <= g.nx(); ++i) {
        out[i] = -column_dx(g, F, i) + v.z.at(i, 0);
    }
    (void)h;
    return out;
}

std::vector<double> height_tendency_chain_rule(const Grid& g, const VectorField& v,
                                               const HeightProfile& h) {
    std::vector<double> out(g.nx() + 1);
    for (int i = 0; i <= g.nx(); ++i) {
        double dhdx = column_dx(g, h.h, i);
        // Column integral of the physical dv_x/dx by trapezoid.
        double dz = g.h(i) * g.ds();
        double acc = 0.0;
        for (int j = 0; j < g.nz(); ++j) {
            acc += 0.5 * (phys_dx_at(g, v.x, i, j) + phys_dx_at(g, v.x, i, j + 1)) * dz;
        }
        out[i] = -v.x.at(i, g.nz()) * dhdx - acc + v.z.at(i, 0);
    }
    return out;
}

HeightStep advance_height(const Grid& g, const HeightProfile& hp,
                          const VectorField& v, double dt, const EvolutionConfig& cfg) {
    const int nx = g.nx();
    if (static_cast<int>(hp.h.size()) != nx + 1) {
        throw std::invalid_argument("advance_height: height/grid mismatch");
    }
    for (int k = 0; k < g.n_nodes(); ++k) {
        if (!std::isfinite(v.x[k]) || !std::isfinite(v.z[k])) {
            throw SolveError("advance_height: non-finite velocity");
        }
    }
    double vmax = 0.0;
    for (double val : v.x.values()) vmax = std::max(vmax, std::abs(val));
    const double dx = g.dx();
    if (dt * vmax / dx > cfg.cfl) {
        throw SolveError("advance_height: CFL violated, reduce dt to at most " +
                         format_g17(cfg.cfl * dx / vmax));
    }

    const std::vector<double> F = column_flux(g, v);
    const double h_floor = cfg.h_min >= 0.0 ? cfg.h_min : g.precursor_floor();
    const bool periodic = cfg.closure == HeightClosure::Periodic;

    // Column-averaged advection speed decides the upwind side of each face.
    auto col_speed = [&](int i) { return hp.h[i] > 0.0 ? F[i] / hp.h[i] : 0.0; };
    auto face_flux = [&](int il, int ir) {
        double u = 0.5 * (col_speed(il) + col_speed(ir));
        return u >= 0.0 ? F[il] : F[ir];
    };

    HeightStep step;
    step.profile.h.assign(nx + 1, 0.0);
    step.profile.time = hp.time + dt;

    const int icap = periodic ? nx - 1 : nx;
    for (int i = 0; i <= icap; ++i) {
        double f_right, f_left;
        if (periodic) {
            f_right = face_flux(i, (i + 1) % nx);
            f_left = face_flux((i - 1 + nx) % nx, i);
        } else {
            // Zero-gradient ghost columns at the film edges.
            f_right = i < nx ? face_flux(i, i + 1) : F[nx];
            f_left = i > 0 ? face_flux(i - 1, i) : F[0];
            if (i == nx) step.boundary_flux += f_right;
            if (i == 0) step.boundary_flux -= f_left;
        }
        const double v3_bottom = v.z.at(i, 0);
        double h_new = hp.h[i] - dt * (f_right - f_left) / dx + dt * v3_bottom;
        step.bottom_source += dt * v3_bottom * dx;
        if (h_new < h_floor) {
            step.clipped_mass += (h_floor - h_new) * dx;
            h_new = h_floor;
        }
        step.profile.h[i] = h_new;
    }
    if (periodic) step.profile.h[nx] = step.profile.h[0];
    return step;
}

EvolveResult evolve(const ModelParams& params, const CoupledConfig& coupled_cfg,
                    const EvolutionConfig& evo_cfg, double L, int nx, int nz,
                    LateralMode lateral, const std::vector<double>& h0,
                    const EvolveHooks& hooks) {
    evo_cfg.validate();
    EvolveResult out;
    HeightProfile hp{h0, 0.0};
    out.series.push_back(hp);

    const int n_steps = static_cast<int>(std::ceil(evo_cfg.t_final / evo_cfg.dt - 1e-12));
    for (int step = 0; step < n_steps; ++step) {
        try {
            // Shared ownership: stored states keep their grid alive.
            auto gp = std::make_shared<const Grid>(
                Grid::build(L, hp.h, nx, nz, lateral, evo_cfg.h_min));
            const Grid& g = *gp;
            VectorField v(g);
            if (hooks.velocity_override) {
                v = hooks.velocity_override(g);
            } else {
                SolutionState st = run_fixed_point(g, params, coupled_cfg);
                if (st.status == RunStatus::InnerError || st.status == RunStatus::SignAbort) {
                    out.error = "step " + std::to_string(step) + ": " + st.error;
                    out.failed_step = step;
                    return out;
                }
                if (!st.converged) {
                    out.error = "step " + std::to_string(step) +
                                ": coupled solve did not converge";
                    out.failed_step = step;
                    out.states.push_back(std::move(st));
                    out.grids.push_back(gp);
                    return out;
                }
                v = composite_velocity(st);
                out.states.push_back(std::move(st));
                out.grids.push_back(gp);
            }
            HeightStep hs = advance_height(g, hp, v, evo_cfg.dt, evo_cfg);
            hp = std::move(hs.profile);
            out.clipped_mass.push_back(hs.clipped_mass);
            out.series.push_back(hp);
        } catch (const std::exception& e) {
            out.error = "step " + std::to_string(step) + ": " + e.what();
            out.failed_step = step;
            return out;
        }
    }
    out.completed = true;
    return out;
}

}  // namespace filmflow
