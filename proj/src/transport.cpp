#include "filmflow/transport.hpp"

#include <cmath>
#include <stdexcept>

#include "filmflow/operators.hpp"
#include "filmflow/util.hpp"

namespace filmflow {

namespace {
constexpr double kBoundTol = 1e-8;
}

void TransportProblem::validate() const {
    if (!grid) throw std::invalid_argument("transport: missing grid");
    if (!a.valid() || &a.grid() != grid) {
        throw std::invalid_argument("transport: reaction field not on the grid");
    }
    if (epsilon < 0.0) throw std::invalid_argument("transport: epsilon must be >= 0");
    if (!(a.min() > 0.0)) {
        throw std::invalid_argument("transport: reaction coefficient must satisfy a >= a_min > 0");
    }
}

SignReport check_sign_conditions(const Grid& g, const VectorField& v, double tol) {
    SignReport rep;
    double max_div = -1e300, max_vn = -1e300;
    const int icap = g.periodic() ? g.nx() - 1 : g.nx();
    for (int i = 0; i <= icap; ++i) {
        for (int j = 0; j <= g.nz(); ++j) {
            if (g.is_boundary(i, j)) {
                Vec2 n = g.outward_normal(i, j);
                double vn = v.x.at(i, j) * n.x + v.z.at(i, j) * n.z;
                max_vn = std::max(max_vn, vn);
            } else {
                max_div = std::max(max_div, divergence_at(g, v, i, j));
            }
        }
    }
    rep.max_interior_div = max_div;
    rep.max_boundary_vn = max_vn;
    rep.admissible = max_div <= tol && max_vn <= tol;
    return rep;
}

SparseSystem assemble_transport(const TransportProblem& p, const ScalarField& rhs) {
    p.validate();
    const Grid& g = *p.grid;

    // Advection field of the divergence-form operator is w = -v_l.
    VectorField w(g);
    for (int k = 0; k < g.n_nodes(); ++k) {
        w.x[k] = -p.v_l.x[k];
        w.z[k] = -p.v_l.z[k];
    }

    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(g.n_unknowns()) * 9);
    std::vector<double> b(g.n_unknowns(), 0.0);

    const int icap = g.periodic() ? g.nx() - 1 : g.nx();
    for (int i = 0; i <= icap; ++i) {
        for (int j = 0; j <= g.nz(); ++j) {
            const int row = g.unknown(i, j);
            RowSink sink = [&](int node, double c) {
                trip.push_back({row, g.unknown_of_node(node), c});
            };
            emit_upwind_row(g, i, j, w, 1.0, sink);
            if (p.epsilon > 0.0) {
                emit_laplacian_row(g, i, j, nullptr, -p.epsilon, sink);
            }
            trip.push_back({row, row, p.a.at(i, j)});
            b[row] = rhs.at(i, j);
        }
    }

    SparseSystem sys = SparseSystem::assemble(trip, g.n_unknowns());
    sys.set_rhs(std::move(b));
    return sys;
}

namespace {

TransportResult run_solve(const TransportProblem& p, const ScalarField& rhs, double tol) {
    const Grid& g = *p.grid;
    SparseSystem sys = assemble_transport(p, rhs);
    SolveOptions opts;
    opts.tol = tol;
    TransportResult res;
    std::vector<double> u = solve(sys, opts, &res.report);

    res.phi_l = ScalarField(g);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.nz(); ++j) res.phi_l.at(i, j) = u[g.unknown(i, j)];
    res.min_phi = res.phi_l.min();
    res.max_phi = res.phi_l.max();
    res.bounds_ok = res.min_phi >= -kBoundTol && res.max_phi <= 1.0 + kBoundTol;
    return res;
}

}  // namespace

TransportResult solve_phi(const TransportProblem& p, double tol) {
    TransportResult res = run_solve(p, p.a, tol);
    if (!res.bounds_ok) {
        log_warn("transport: phi_l out of [0,1] band: min %.3e max %.3e",
                 res.min_phi, res.max_phi);
    }
    return res;
}

TransportResult solve_transport_with_rhs(const TransportProblem& p,
                                         const ScalarField& rhs, double tol) {
    TransportResult res = run_solve(p, rhs, tol);
    res.bounds_ok = true;  // bounds only apply to the model right-hand side
    return res;
}

ScalarField phi_b_from_phi_l(const ScalarField& phi_l) {
    ScalarField out(phi_l.grid());
    for (size_t k = 0; k < phi_l.values().size(); ++k) out.values()[k] = 1.0 - phi_l.values()[k];
    return out;
}

}  // namespace filmflow
