#include "filmflow/mms.hpp"

#include <cmath>

#include "filmflow/nutrient.hpp"
#include "filmflow/stokes.hpp"
#include "filmflow/transport.hpp"
#include "filmflow/util.hpp"

namespace filmflow {

namespace {

constexpr double kL = 1.0;
constexpr double kH = 0.5;

std::vector<double> flat_profile(int nx, double H) {
    return std::vector<double>(nx + 1, H);
}

void fill_orders(MmsStudy& s) {
    for (size_t k = 1; k < s.rows.size(); ++k) {
        double ratio = s.rows[k - 1].error / s.rows[k].error;
        s.rows[k].order = std::log2(ratio);
    }
    s.passed = !s.rows.empty() && s.rows.back().order >= s.floor;
}

}  // namespace

MmsStudy mms_transport_study(int levels) {
    MmsStudy study;
    study.name = "transport";
    study.floor = 0.9;
    const double gamma = 0.8, a0 = 1.2;
    auto phi_star = [](double z) { return 0.8 + 0.1 * std::cos(M_PI * z / kH); };
    auto dphi_star = [](double z) { return -0.1 * (M_PI / kH) * std::sin(M_PI * z / kH); };

    int nx = 32, nz = 16;
    for (int lev = 0; lev < levels; ++lev, nx *= 2, nz *= 2) {
        Grid g = Grid::build(kL, flat_profile(nx, kH), nx, nz, LateralMode::Traction);
        TransportProblem p;
        p.grid = &g;
        p.v_l = VectorField(g);
        p.a = ScalarField(g, a0);
        ScalarField rhs(g);
        ScalarField exact(g);
        for (int i = 0; i <= nx; ++i) {
            for (int j = 0; j <= nz; ++j) {
                double x = g.x(i), z = g.z(i, j);
                p.v_l.x.at(i, j) = -gamma * x;
                p.v_l.z.at(i, j) = -gamma * z;
                // div(-v phi*) + a phi* with div(v) = -2 gamma.
                rhs.at(i, j) = 2.0 * gamma * phi_star(z) + gamma * z * dphi_star(z) +
                               a0 * phi_star(z);
                exact.at(i, j) = phi_star(z);
            }
        }
        TransportResult res = solve_transport_with_rhs(p, rhs, 1e-12);
        MmsRow row{lev, g.dx(), l2_diff(res.phi_l, exact), 0.0};
        study.rows.push_back(row);
    }
    fill_orders(study);
    return study;
}

namespace {

// Trigonometric Stokes solution with analytic first and second derivatives.
struct StokesExact {
    double kx = M_PI / kL;
    double kz = M_PI / kH;
    double mu = 1.0, Pi = 0.4, xi = 0.7;

    double vx(double x, double z) const { return 0.25 * std::sin(kx * x) * std::cos(kz * z); }
    double vx_x(double x, double z) const { return 0.25 * kx * std::cos(kx * x) * std::cos(kz * z); }
    double vx_z(double x, double z) const { return -0.25 * kz * std::sin(kx * x) * std::sin(kz * z); }
    double vx_xx(double x, double z) const { return -kx * kx * vx(x, z); }
    double vx_zz(double x, double z) const { return -kz * kz * vx(x, z); }
    double vx_xz(double x, double z) const { return -0.25 * kx * kz * std::cos(kx * x) * std::sin(kz * z); }

    double vz(double x, double z) const { return 0.2 * std::cos(kx * x) * std::sin(kz * z); }
    double vz_x(double x, double z) const { return -0.2 * kx * std::sin(kx * x) * std::sin(kz * z); }
    double vz_z(double x, double z) const { return 0.2 * kz * std::cos(kx * x) * std::cos(kz * z); }
    double vz_xx(double x, double z) const { return -kx * kx * vz(x, z); }
    double vz_zz(double x, double z) const { return -kz * kz * vz(x, z); }
    double vz_xz(double x, double z) const { return -0.2 * kx * kz * std::sin(kx * x) * std::cos(kz * z); }

    double p(double x, double z) const { return 0.1 + 0.3 * std::cos(kx * x) * std::cos(kz * z); }
    double p_x(double x, double z) const { return -0.3 * kx * std::sin(kx * x) * std::cos(kz * z); }
    double p_z(double x, double z) const { return -0.3 * kz * std::cos(kx * x) * std::sin(kz * z); }
    double p_lap(double x, double z) const { return -(kx * kx + kz * kz) * (p(x, z) - 0.1); }

    double phib(double x, double z) const { return 0.2 + 0.1 * std::cos(kx * x) * std::cos(kz * z); }
    double phib_x(double x, double z) const { return -0.1 * kx * std::sin(kx * x) * std::cos(kz * z); }
    double phib_z(double x, double z) const { return -0.1 * kz * std::cos(kx * x) * std::sin(kz * z); }

    double div_v(double x, double z) const { return vx_x(x, z) + vz_z(x, z); }
    double div_v_x(double x, double z) const { return vx_xx(x, z) + vz_xz(x, z); }
    double div_v_z(double x, double z) const { return vx_xz(x, z) + vz_zz(x, z); }

    Vec2 body_force(double x, double z) const {
        double fx = mu * (vx_xx(x, z) + vx_zz(x, z)) + (mu / 3.0) * div_v_x(x, z) -
                    p_x(x, z) - Pi * phib_x(x, z);
        double fz = mu * (vz_xx(x, z) + vz_zz(x, z)) + (mu / 3.0) * div_v_z(x, z) -
                    p_z(x, z) - Pi * phib_z(x, z);
        return {fx, fz};
    }
    double pressure_rhs(double x, double z) const { return xi * p_lap(x, z) - div_v(x, z); }

    Vec2 traction(double x, double z, Vec2 n) const {
        double iso = (2.0 * mu / 3.0) * div_v(x, z) + p(x, z) + Pi * phib(x, z);
        double sxx = 2.0 * mu * vx_x(x, z) - iso;
        double szz = 2.0 * mu * vz_z(x, z) - iso;
        double sxz = mu * (vx_z(x, z) + vz_x(x, z));
        return {sxx * n.x + sxz * n.z, sxz * n.x + szz * n.z};
    }
};

}  // namespace

std::pair<MmsStudy, MmsStudy> mms_stokes_study(int levels) {
    MmsStudy sv, sp;
    sv.name = "stokes_velocity";
    sv.floor = 1.0;
    sp.name = "stokes_pressure";
    sp.floor = 1.8;
    StokesExact ex;

    int nx = 16, nz = 8;
    for (int lev = 0; lev < levels; ++lev, nx *= 2, nz *= 2) {
        Grid g = Grid::build(kL, flat_profile(nx, kH), nx, nz, LateralMode::Traction);
        StokesProblem p;
        p.grid = &g;
        p.phi_b = ScalarField(g);
        p.mu_b = ex.mu;
        p.Pi = ex.Pi;
        p.xi_inf = ex.xi;
        p.p_b0 = 0.0;
        p.dirichlet_v = VectorField(g);
        p.dirichlet_p = ScalarField(g);
        p.traction_data = VectorField(g);
        p.body_force = VectorField(g);
        p.pressure_rhs = ScalarField(g);
        VectorField v_exact(g);
        ScalarField p_exact(g);
        for (int i = 0; i <= nx; ++i) {
            for (int j = 0; j <= nz; ++j) {
                double x = g.x(i), z = g.z(i, j);
                p.phi_b.at(i, j) = ex.phib(x, z);
                p.dirichlet_v->x.at(i, j) = ex.vx(x, z);
                p.dirichlet_v->z.at(i, j) = ex.vz(x, z);
                p.dirichlet_p->at(i, j) = ex.p(x, z);
                Vec2 f = ex.body_force(x, z);
                p.body_force->x.at(i, j) = f.x;
                p.body_force->z.at(i, j) = f.z;
                p.pressure_rhs->at(i, j) = ex.pressure_rhs(x, z);
                if (g.is_boundary(i, j) && g.tag(i, j) != BoundaryTag::Bottom) {
                    Vec2 t = ex.traction(x, z, g.outward_normal(i, j));
                    p.traction_data->x.at(i, j) = t.x;
                    p.traction_data->z.at(i, j) = t.z;
                }
                v_exact.x.at(i, j) = ex.vx(x, z);
                v_exact.z.at(i, j) = ex.vz(x, z);
                p_exact.at(i, j) = ex.p(x, z);
            }
        }
        StokesSolution sol = solve_stokes(p, 1e-12);
        sv.rows.push_back({lev, g.dx(), l2_diff(sol.v_b.x, v_exact.x) +
                                            l2_diff(sol.v_b.z, v_exact.z), 0.0});
        sp.rows.push_back({lev, g.dx(), l2_diff(sol.p, p_exact), 0.0});
    }
    fill_orders(sv);
    fill_orders(sp);
    return {sv, sp};
}

MmsStudy mms_nutrient_study(int levels) {
    MmsStudy study;
    study.name = "nutrient";
    study.floor = 1.8;
    const double c0 = 1.0, beta = 0.3, a0 = 0.8, d = 1.0;
    const double kx = 2.0 * M_PI / kL, kz = M_PI / kH;

    auto c_star = [&](double x, double z) {
        return c0 + beta * std::sin(kx * x) * (1.0 - std::cos(kz * z));
    };
    auto lap_c = [&](double x, double z) {
        return beta * std::sin(kx * x) *
               (-kx * kx * (1.0 - std::cos(kz * z)) + kz * kz * std::cos(kz * z));
    };
    auto coeff_star = [&](double x, double z) {
        return a0 * (1.0 + 0.5 * std::cos(kx * x) * std::cos(kz * z));
    };

    int nx = 16, nz = 8;
    for (int lev = 0; lev < levels; ++lev, nx *= 2, nz *= 2) {
        Grid g = Grid::build(kL, flat_profile(nx, kH), nx, nz, LateralMode::Periodic);
        VectorField v(g);  // diffusion-dominated regime: zero convection
        ScalarField coeff(g), rhs(g), exact(g);
        for (int i = 0; i <= nx; ++i) {
            for (int j = 0; j <= nz; ++j) {
                double x = g.x(i), z = g.z(i, j);
                coeff.at(i, j) = coeff_star(x, z);
                rhs.at(i, j) = -d * lap_c(x, z) + coeff_star(x, z) * c_star(x, z);
                exact.at(i, j) = c_star(x, z);
            }
        }
        ScalarField c = solve_linear_crd(g, v, coeff, rhs, d, c0, 1e-12);
        study.rows.push_back({lev, g.dx(), l2_diff(c, exact), 0.0});
    }
    fill_orders(study);
    return study;
}

double mms_divergence_identity_residual(int nx, int nz) {
    const double mu = 1.0, Pi = 0.4;
    const double kx = M_PI / kL, kz = M_PI / kH;
    Grid g = Grid::build(kL, flat_profile(nx, kH), nx, nz, LateralMode::Traction);
    // Potential flow v = grad(chi) satisfies the momentum balance exactly
    // against Pi phi_b + p = (4mu/3) Lap(chi) + const.
    auto chi = [&](double x, double z) { return 0.2 * std::sin(kx * x) * std::cos(kz * z); };
    VectorField v(g);
    ScalarField phib(g), p(g);
    for (int i = 0; i <= nx; ++i) {
        for (int j = 0; j <= nz; ++j) {
            double x = g.x(i), z = g.z(i, j);
            v.x.at(i, j) = 0.2 * kx * std::cos(kx * x) * std::cos(kz * z);
            v.z.at(i, j) = -0.2 * kz * std::sin(kx * x) * std::sin(kz * z);
            double psi = -(4.0 * mu / 3.0) * (kx * kx + kz * kz) * chi(x, z);
            phib.at(i, j) = 0.25 + 0.1 * chi(x, z);
            p.at(i, j) = psi - Pi * phib.at(i, j) + 0.3;
        }
    }
    return divergence_identity_residual(v, p, phib, mu, Pi);
}

MmsReport run_mms(int levels) {
    MmsReport rep;
    rep.studies.push_back(mms_transport_study(levels));
    auto [sv, sp] = mms_stokes_study(levels);
    rep.studies.push_back(std::move(sv));
    rep.studies.push_back(std::move(sp));
    rep.studies.push_back(mms_nutrient_study(levels));
    return rep;
}

std::string mms_csv(const MmsStudy& s) {
    std::string out = "level,h,error,order\n";
    for (const MmsRow& r : s.rows) {
        out += std::to_string(r.level) + "," + format_g17(r.h) + "," +
               format_g17(r.error) + "," + format_g17(r.order) + "\n";
    }
    return out;
}

}  // namespace filmflow
