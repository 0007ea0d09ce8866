#include "filmflow/nutrient.hpp"

#include <cmath>
#include <stdexcept>

#include "filmflow/operators.hpp"
#include "filmflow/util.hpp"

namespace filmflow {

void NutrientProblem::validate() const {
    if (!grid) throw std::invalid_argument("nutrient: missing grid");
    if (!(d > 0.0) || !(k_c > 0.0) || !(K_c > 0.0) || !(c0 > 0.0)) {
        throw std::invalid_argument("nutrient: d, k_c, K_c, c0 must be positive");
    }
    if (!phi_b.valid() || &phi_b.grid() != grid) {
        throw std::invalid_argument("nutrient: phi_b not on the grid");
    }
    if (phi_b.min() < -1e-8) {
        log_warn("nutrient: phi_b has negative values (min %.3e)", phi_b.min());
    }
}

ScalarField solve_linear_crd(const Grid& g, const VectorField& v_l,
                             const ScalarField& coeff, const ScalarField& rhs,
                             double d, double c0_bottom, double lin_tol,
                             const ScalarField* dirichlet_bottom) {
    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(g.n_unknowns()) * 12);
    std::vector<double> b(g.n_unknowns(), 0.0);

    const int icap = g.periodic() ? g.nx() - 1 : g.nx();
    for (int i = 0; i <= icap; ++i) {
        for (int j = 0; j <= g.nz(); ++j) {
            const int row = g.unknown(i, j);
            if (g.tag(i, j) == BoundaryTag::Bottom) {
                trip.push_back({row, row, 1.0});
                b[row] = dirichlet_bottom ? dirichlet_bottom->at(i, j) : c0_bottom;
                continue;
            }
            RowSink sink = [&](int node, double c) {
                trip.push_back({row, g.unknown_of_node(node), c});
            };
            emit_laplacian_row(g, i, j, nullptr, -d, sink);
            emit_upwind_row(g, i, j, v_l, 1.0, sink);
            trip.push_back({row, row, coeff.at(i, j)});
            b[row] = rhs.at(i, j);
        }
    }

    SparseSystem sys = SparseSystem::assemble(trip, g.n_unknowns());
    sys.set_rhs(std::move(b));
    SolveOptions opts;
    opts.tol = lin_tol;
    std::vector<double> u = solve(sys, opts);

    ScalarField c(g);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.nz(); ++j) {
            // Dirichlet bottom row is imposed strongly.
            if (g.tag(i, j) == BoundaryTag::Bottom) {
                c.at(i, j) = dirichlet_bottom ? dirichlet_bottom->at(i, j) : c0_bottom;
            } else {
                c.at(i, j) = u[g.unknown(i, j)];
            }
        }
    return c;
}

NutrientResult solve_nutrient(const NutrientProblem& p) {
    p.validate();
    const Grid& g = *p.grid;

    // The contraction argument wants d large and v_l small; the ratio is
    // logged, never enforced.
    double vmax = 0.0;
    for (double v : p.v_l.x.values()) vmax = std::max(vmax, std::abs(v));
    for (double v : p.v_l.z.values()) vmax = std::max(vmax, std::abs(v));
    log_msg(LogLevel::Debug, "nutrient: |v_l|_inf / d = %.3e", vmax / p.d);

    NutrientResult res;
    ScalarField c_prev(g, p.c0);
    ScalarField coeff(g);
    ScalarField zero_rhs(g, 0.0);

    for (int m = 0; m < p.picard_max_iter; ++m) {
        // Freeze only the Monod denominator; clip negatives there so the
        // denominator stays >= K_c while the solved field is never clipped.
        for (int k = 0; k < g.n_nodes(); ++k) {
            double cm = std::max(c_prev[k], 0.0);
            coeff[k] = p.k_c * p.phi_b[k] / (cm + p.K_c);
        }
        ScalarField c_next =
            solve_linear_crd(g, p.v_l, coeff, zero_rhs, p.d, p.c0, p.lin_tol);
        double diff = l2_diff(c_next, c_prev);
        res.picard_history.push_back(diff);
        c_prev = std::move(c_next);
        res.picard_iterations = m + 1;
        if (diff <= p.picard_tol) {
            res.converged = true;
            break;
        }
    }

    res.c = std::move(c_prev);
    res.min_c = res.c.min();
    res.max_c = res.c.max();
    if (!res.converged) {
        const size_t n = res.picard_history.size();
        std::string tail;
        if (n >= 2) {
            tail = " last diffs " + format_g17(res.picard_history[n - 2]) + ", " +
                   format_g17(res.picard_history[n - 1]);
        }
        throw SolveError("nutrient: Picard did not converge in " +
                         std::to_string(p.picard_max_iter) + " iterations;" + tail);
    }
    if (res.min_c < -1e-8) {
        throw InvariantBreach("nutrient: concentration negative beyond tolerance, min c = " +
                              format_g17(res.min_c));
    }
    return res;
}

LowerBoundCertificate lower_bound_certificate(double d, double k_c, double K_c,
                                              double c0, double M, double c_max) {
    if (!(c_max > 0.0)) {
        throw std::invalid_argument("lower_bound_certificate: c_max must be positive");
    }
    LowerBoundCertificate cert;
    cert.bound = -k_c * c_max * M / (2.0 * d * K_c) + c0;
    cert.applicable = M < 2.0 * d * K_c * c0 / (k_c * c_max);
    return cert;
}

}  // namespace filmflow
