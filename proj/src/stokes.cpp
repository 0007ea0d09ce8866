#include "filmflow/stokes.hpp"

#include <cmath>
#include <stdexcept>

#include "filmflow/operators.hpp"
#include "filmflow/util.hpp"

namespace filmflow {

void StokesProblem::validate() const {
    if (!grid) throw std::invalid_argument("stokes: missing grid");
    if (!phi_b.valid() || &phi_b.grid() != grid) {
        throw std::invalid_argument("stokes: phi_b not on the grid");
    }
    if (!(mu_b > 0.0)) throw std::invalid_argument("stokes: mu_b must be positive");
    if (Pi < 0.0) throw std::invalid_argument("stokes: Pi must be nonnegative");
    if (xi_field) {
        if (!(xi_field->min() > 0.0)) {
            throw std::invalid_argument("stokes: xi(phi_b) must be strictly positive");
        }
    } else if (!(xi_inf > 0.0)) {
        throw std::invalid_argument("stokes: xi_inf must be positive");
    }
    if (phi_b.min() < -1e-8 || phi_b.max() > 1.0 + 1e-8) {
        log_warn("stokes: phi_b outside [0,1]: min %.3e max %.3e", phi_b.min(), phi_b.max());
    }
}

namespace {

enum class RowClass : unsigned char { Dirichlet, Momentum, Pressure, Traction };

struct Assembled {
    SparseSystem sys;
    std::vector<RowClass> row_class;
};

Assembled assemble_impl(const StokesProblem& pb) {
    pb.validate();
    const Grid& g = *pb.grid;
    const int nu = g.n_unknowns();
    const double mu = pb.mu_b;

    ScalarField pi_phib(g);
    for (int k = 0; k < g.n_nodes(); ++k) pi_phib[k] = pb.Pi * pb.phi_b[k];

    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(nu) * 40);
    std::vector<double> rhs(3 * nu, 0.0);
    std::vector<RowClass> row_class(3 * nu, RowClass::Momentum);

    auto vx_dof = [&](int node) { return 3 * g.unknown_of_node(node); };
    auto vz_dof = [&](int node) { return 3 * g.unknown_of_node(node) + 1; };
    auto p_dof = [&](int node) { return 3 * g.unknown_of_node(node) + 2; };

    auto traction_at = [&](int i, int j, const Vec2& n) -> Vec2 {
        if (pb.traction_data) {
            return {pb.traction_data->x.at(i, j), pb.traction_data->z.at(i, j)};
        }
        const TractionSpec* spec = nullptr;
        switch (g.tag(i, j)) {
            case BoundaryTag::Top: spec = &pb.traction_top; break;
            case BoundaryTag::LateralLeft: spec = &pb.traction_left; break;
            case BoundaryTag::LateralRight: spec = &pb.traction_right; break;
            default: throw std::logic_error("traction on non-traction node");
        }
        double s = spec->normal_offset;
        if (spec->kind == TractionKind::EquilibriumNormal) {
            s -= pb.p_b0 + pi_phib.at(i, j);
        }
        return {spec->value.x + s * n.x, spec->value.z + s * n.z};
    };

    const int icap = g.periodic() ? g.nx() - 1 : g.nx();
    for (int i = 0; i <= icap; ++i) {
        for (int j = 0; j <= g.nz(); ++j) {
            const int node = g.node(i, j);
            const int rvx = 3 * g.unknown(i, j);
            const int rvz = rvx + 1;
            const int rp = rvx + 2;
            const BoundaryTag tag = g.tag(i, j);

            if (tag != BoundaryTag::None) {
                // Pressure Dirichlet on the whole physical boundary.
                trip.push_back({rp, p_dof(node), 1.0});
                rhs[rp] = pb.dirichlet_p ? (*pb.dirichlet_p)[node] : pb.p_b0;
                row_class[rp] = RowClass::Dirichlet;
            }

            if (tag == BoundaryTag::Bottom) {
                trip.push_back({rvx, vx_dof(node), 1.0});
                trip.push_back({rvz, vz_dof(node), 1.0});
                rhs[rvx] = pb.dirichlet_v ? pb.dirichlet_v->x[node] : 0.0;
                rhs[rvz] = pb.dirichlet_v ? pb.dirichlet_v->z[node] : 0.0;
                row_class[rvx] = row_class[rvz] = RowClass::Dirichlet;
                continue;
            }

            if (tag != BoundaryTag::None) {
                // Traction rows: [mu (grad v + grad v^T) - (2mu/3 div v + p + Pi phi_b) I] . n
                const Vec2 n = g.outward_normal(i, j);
                const Stencil ddx = stencil_phys_dx(g, i, j);
                const Stencil ddz = stencil_phys_dz(g, i, j);
                for (const StencilEntry& e : ddx) {
                    trip.push_back({rvx, vx_dof(e.node), 2.0 * mu * n.x * e.c});   // 2 dx(vx) nx
                    trip.push_back({rvx, vz_dof(e.node), mu * n.z * e.c});          // dx(vz) nz
                    trip.push_back({rvz, vz_dof(e.node), mu * n.x * e.c});          // dx(vz) nx
                    // -(2mu/3) div v terms, x part
                    trip.push_back({rvx, vx_dof(e.node), -(2.0 * mu / 3.0) * n.x * e.c});
                    trip.push_back({rvz, vx_dof(e.node), -(2.0 * mu / 3.0) * n.z * e.c});
                }
                for (const StencilEntry& e : ddz) {
                    trip.push_back({rvx, vx_dof(e.node), mu * n.z * e.c});          // dz(vx) nz
                    trip.push_back({rvz, vx_dof(e.node), mu * n.x * e.c});          // dz(vx) nx
                    trip.push_back({rvz, vz_dof(e.node), 2.0 * mu * n.z * e.c});    // 2 dz(vz) nz
                    trip.push_back({rvx, vz_dof(e.node), -(2.0 * mu / 3.0) * n.x * e.c});
                    trip.push_back({rvz, vz_dof(e.node), -(2.0 * mu / 3.0) * n.z * e.c});
                }
                trip.push_back({rvx, p_dof(node), -n.x});
                trip.push_back({rvz, p_dof(node), -n.z});
                Vec2 t = traction_at(i, j, n);
                rhs[rvx] = t.x + n.x * pi_phib.at(i, j);
                rhs[rvz] = t.z + n.z * pi_phib.at(i, j);
                row_class[rvx] = row_class[rvz] = RowClass::Traction;
                continue;
            }

            // Interior momentum rows.
            emit_laplacian_row(g, i, j, nullptr, mu,
                               [&](int nd, double c) { trip.push_back({rvx, vx_dof(nd), c}); });
            emit_laplacian_row(g, i, j, nullptr, mu,
                               [&](int nd, double c) { trip.push_back({rvz, vz_dof(nd), c}); });
            // (mu/3) grad(div v): composition of first-derivative stencils.
            const Stencil gx = stencil_phys_dx(g, i, j);
            const Stencil gz = stencil_phys_dz(g, i, j);
            auto add_grad_div = [&](int row, const Stencil& outer) {
                for (const StencilEntry& o : outer) {
                    const int qi = g.node_i(o.node), qj = g.node_j(o.node);
                    for (const StencilEntry& e : stencil_phys_dx(g, qi, qj)) {
                        trip.push_back({row, vx_dof(e.node), (mu / 3.0) * o.c * e.c});
                    }
                    for (const StencilEntry& e : stencil_phys_dz(g, qi, qj)) {
                        trip.push_back({row, vz_dof(e.node), (mu / 3.0) * o.c * e.c});
                    }
                }
            };
            add_grad_div(rvx, gx);
            add_grad_div(rvz, gz);
            // -grad p
            for (const StencilEntry& e : gx) trip.push_back({rvx, p_dof(e.node), -e.c});
            for (const StencilEntry& e : gz) trip.push_back({rvz, p_dof(e.node), -e.c});
            // rhs: grad(Pi phi_b) in divergence form plus optional body force.
            rhs[rvx] = eval_stencil(gx, pi_phib);
            rhs[rvz] = eval_stencil(gz, pi_phib);
            if (pb.body_force) {
                rhs[rvx] += pb.body_force->x[node];
                rhs[rvz] += pb.body_force->z[node];
            }

            // Pressure equation: div(xi grad p) - div(v) = g.
            const ScalarField* kappa = pb.xi_field ? &*pb.xi_field : nullptr;
            const double scale = pb.xi_field ? 1.0 : pb.xi_inf;
            emit_laplacian_row(g, i, j, kappa, scale,
                               [&](int nd, double c) { trip.push_back({rp, p_dof(nd), c}); });
            for (const StencilEntry& e : gx) trip.push_back({rp, vx_dof(e.node), -e.c});
            for (const StencilEntry& e : gz) trip.push_back({rp, vz_dof(e.node), -e.c});
            rhs[rp] = pb.pressure_rhs ? (*pb.pressure_rhs)[node] : 0.0;
            row_class[rp] = RowClass::Pressure;
        }
    }

    Assembled out{SparseSystem::assemble(trip, 3 * nu), std::move(row_class)};
    out.sys.set_rhs(std::move(rhs));
    return out;
}

}  // namespace

SparseSystem assemble_stokes(const StokesProblem& p) { return assemble_impl(p).sys; }

StokesSolution solve_stokes(const StokesProblem& pb, double tol) {
    const Grid& g = *pb.grid;
    Assembled as = assemble_impl(pb);
    SolveOptions opts;
    opts.tol = tol;
    StokesSolution sol;
    std::vector<double> u = solve(as.sys, opts, &sol.report);

    // Dirichlet values are imposed strongly: exact on the solution.
    for (int r = 0; r < as.sys.size(); ++r) {
        if (as.row_class[r] == RowClass::Dirichlet) u[r] = as.sys.rhs()[r];
    }

    sol.v_b = VectorField(g);
    sol.p = ScalarField(g);
    for (int i = 0; i <= g.nx(); ++i) {
        for (int j = 0; j <= g.nz(); ++j) {
            const int k = 3 * g.unknown(i, j);
            sol.v_b.x.at(i, j) = u[k];
            sol.v_b.z.at(i, j) = u[k + 1];
            sol.p.at(i, j) = u[k + 2];
        }
    }

    // Residual split by row class.
    std::vector<double> ax(as.sys.size());
    as.sys.apply(u, ax);
    double mom = 0.0, pres = 0.0, trac = 0.0;
    for (int r = 0; r < as.sys.size(); ++r) {
        double d = as.sys.rhs()[r] - ax[r];
        switch (as.row_class[r]) {
            case RowClass::Momentum: mom += d * d; break;
            case RowClass::Pressure: pres += d * d; break;
            case RowClass::Traction: trac += d * d; break;
            case RowClass::Dirichlet: break;
        }
    }
    sol.diag.momentum_residual = std::sqrt(mom);
    sol.diag.pressure_residual = std::sqrt(pres);
    sol.diag.traction_residual = std::sqrt(trac);
    if (g.nx() >= 6 && g.nz() >= 6) {
        sol.diag.divergence_identity =
            divergence_identity_residual(sol.v_b, sol.p, pb.phi_b, pb.mu_b, pb.Pi);
    }
    return sol;
}

VectorField liquid_velocity(const VectorField& v_b, const ScalarField& p,
                            double xi_inf, double phi_inf) {
    const Grid& g = v_b.grid();
    const double eta = xi_inf / phi_inf;
    VectorField grad_p = gradient(g, p);
    VectorField v_l(g);
    for (int k = 0; k < g.n_nodes(); ++k) {
        v_l.x[k] = v_b.x[k] - eta * grad_p.x[k];
        v_l.z[k] = v_b.z[k] - eta * grad_p.z[k];
    }
    return v_l;
}

double divergence_identity_residual(const VectorField& v_b, const ScalarField& p,
                                    const ScalarField& phi_b, double mu_b, double Pi) {
    const Grid& g = v_b.grid();
    if (g.nx() < 6 || g.nz() < 6) {
        throw std::invalid_argument("divergence_identity_residual: grid too coarse (needs nx, nz >= 6)");
    }
    ScalarField div_v = divergence(g, v_b);
    div_v.sync_periodic();
    const int ilo = g.periodic() ? 0 : 2;
    const int ihi = g.periodic() ? g.nx() - 1 : g.nx() - 2;
    double acc = 0.0;
    for (int i = ilo; i <= ihi; ++i) {
        for (int j = 2; j <= g.nz() - 2; ++j) {
            double r = (4.0 * mu_b / 3.0) * laplacian_at(g, div_v, i, j) -
                       Pi * laplacian_at(g, phi_b, i, j) - laplacian_at(g, p, i, j);
            acc += g.node_volume(i, j) * r * r;
        }
    }
    return std::sqrt(acc);
}

}  // namespace filmflow
