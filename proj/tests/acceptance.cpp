// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "filmflow/coupled.hpp"
#include "filmflow/height.hpp"
#include "filmflow/mms.hpp"
#include "filmflow/nutrient.hpp"
#include "filmflow/operators.hpp"
#include "filmflow/output.hpp"
#include "filmflow/stokes.hpp"
#include "filmflow/transport.hpp"
#include "filmflow/util.hpp"
#include "filmflow/verify.hpp"

using namespace filmflow;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string g17(double v) { return format_g17(v); }

Grid flat_traction(int nx, int nz, double H) {
    return Grid::build(1.0, std::vector<double>(nx + 1, H), nx, nz, LateralMode::Traction);
}

// Reference seeded problem: periodic film over a cosine bump, equilibrium
// traction with outward tension 0.05 and tangential shear 0.01; the state
// is growth-driven and contracts at the documented reference Pi = 0.1.
ModelParams reference_params(double Pi, double Kb = 1.0, double kb = 1.0) {
    ModelParams params;
    params.Pi = Pi;
    params.k_b = kb;
    params.K_b = Kb;
    params.g_inf = 1.0 / (1.0 + Kb);
    params.d = 5.0;
    params.xi_inf = 0.5;
    params.phi_inf = 0.995;
    params.p_b0 = 0.1;
    params.traction_top.kind = TractionKind::EquilibriumNormal;
    params.traction_top.normal_offset = 0.05;
    params.traction_top.value = {0.01, 0.0};
    return params;
}

Grid reference_grid(int nx, int nz) {
    std::vector<double> h(nx + 1);
    for (int i = 0; i <= nx; ++i) h[i] = 0.22 + 0.05 * std::cos(2.0 * M_PI * i / nx);
    return Grid::build(1.0, h, nx, nz, LateralMode::Periodic);
}

CoupledConfig reference_config() {
    CoupledConfig cfg;
    cfg.initial_phi_inf = 0.995;
    cfg.sign_tol = 1e-2;
    cfg.sign_abort_factor = 1e4;
    return cfg;
}

void criterion_1_equilibrium() {
    Grid g = flat_traction(16, 8, 0.25);
    ModelParams params;
    params.Pi = 0.5;
    params.p_b0 = 0.2;
    params.traction_top.kind = TractionKind::EquilibriumNormal;
    params.traction_left.kind = TractionKind::EquilibriumNormal;
    params.traction_right.kind = TractionKind::EquilibriumNormal;
    CoupledConfig cfg;
    SolutionState st = run_fixed_point(g, params, cfg);
    double vmax = std::max({linf_norm(st.v_b.x), linf_norm(st.v_b.z),
                            linf_norm(st.v_l.x), linf_norm(st.v_l.z)});
    double perr = linf_diff(st.p, ScalarField(g, params.p_b0));
    double phierr = linf_diff(st.phi_l, ScalarField(g, 1.0));
    double cerr = linf_diff(st.c, ScalarField(g, params.c0));
    bool pass = st.converged && st.history.size() <= 3 &&
                st.history.back().dv_l <= 1e-10 && vmax <= 1e-10 && perr <= 1e-10 &&
                phierr <= 1e-10 && cerr <= 1e-10;
    report(1, "equilibrium exactness", pass,
           "iters " + std::to_string(st.history.size()) + ", dv " +
               g17(st.history.back().dv_l) + ", |v| " + g17(vmax) + ", |p-p0| " +
               g17(perr) + ", |phi-1| " + g17(phierr) + ", |c-c0| " + g17(cerr));
}

void criterion_2_max_principle() {
    Grid g = flat_traction(24, 10, 0.5);
    SeededUniform rng(42);
    int failures = 0;
    double lo = 1e300, hi = -1e300;
    const int samples = 50;
    for (int s = 0; s < samples; ++s) {
        TransportProblem p;
        p.grid = &g;
        p.v_l = admissible_gradient_field(g, rng);
        p.a = ScalarField(g, rng.range(0.3, 3.0));
        TransportResult tr = solve_phi(p, 1e-12);
        lo = std::min(lo, tr.min_phi);
        hi = std::max(hi, tr.max_phi);
        if (tr.min_phi < -1e-8 || tr.max_phi > 1.0 + 1e-8) ++failures;
    }
    report(2, "transport maximum principle (50 seeded fields)", failures == 0,
           "failures " + std::to_string(failures) + ", min " + g17(lo) + ", max " + g17(hi));
}

void criterion_3_constant_state() {
    Grid g = flat_traction(16, 8, 0.5);
    TransportProblem p;
    p.grid = &g;
    p.v_l = VectorField(g);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.nz(); ++j) {
            p.v_l.x.at(i, j) = -0.5 * g.x(i);
            p.v_l.z.at(i, j) = -0.5 * g.z(i, j);
        }
    p.a = ScalarField(g, 1.0);
    TransportResult res = solve_phi(p, 1e-13);
    double worst = 0.0;
    for (int i = 1; i < g.nx(); ++i)
        for (int j = 1; j < g.nz(); ++j)
            worst = std::max(worst, std::abs(res.phi_l.at(i, j) - 0.5));
    report(3, "transport constant-state oracle", worst <= 1e-9,
           "max interior deviation from 1/2: " + g17(worst));
}

void criterion_4_mms_orders() {
    MmsReport rep = run_mms(3);
    std::string detail;
    bool pass = true;
    for (const MmsStudy& s : rep.studies) {
        detail += s.name + " " + g17(s.observed_order()) + " (floor " + g17(s.floor) + "); ";
        pass = pass && s.passed;
    }
    report(4, "manufactured-solution orders", pass, detail);
}

void criterion_5_nutrient_bound() {
    Grid g = Grid::build(1.0, std::vector<double>(17, 0.5), 16, 32, LateralMode::Periodic);
    NutrientProblem p;
    p.grid = &g;
    p.v_l = VectorField(g);
    p.phi_b = ScalarField(g, 1.0);
    p.d = 1.0;
    p.k_c = 1.0;
    p.K_c = 1.0;
    p.c0 = 1.0;
    NutrientResult res = solve_nutrient(p);
    LowerBoundCertificate cert =
        lower_bound_certificate(p.d, p.k_c, p.K_c, p.c0, g.max_height(), res.max_c);
    bool pass = res.max_c <= p.c0 + 1e-12 && cert.applicable && res.min_c >= 0.75 - 1e-6;
    report(5, "nutrient positivity and certified bound", pass,
           "bound " + g17(cert.bound) + ", min c " + g17(res.min_c) + ", c_max " +
               g17(res.max_c));
}

// Independent fine-grid oracle for the 1D column problem (Newton on a
// second-order finite-difference discretization, tridiagonal solves).
std::vector<double> ode_oracle(int n, double H, double d, double k_c, double K_c,
                               double c0) {
    const double h = H / n;
    std::vector<double> c(n + 1, c0), a(n + 1), b(n + 1), cc(n + 1), r(n + 1);
    for (int newton = 0; newton < 60; ++newton) {
        double maxres = 0.0;
        for (int i = 0; i <= n; ++i) {
            double react = k_c * c[i] / (c[i] + K_c);
            double dreact = k_c * K_c / ((c[i] + K_c) * (c[i] + K_c));
            if (i == 0) {
                r[i] = c[0] - c0;
                a[i] = 0.0, b[i] = 1.0, cc[i] = 0.0;
            } else if (i == n) {
                r[i] = -d * (2.0 * c[n - 1] - 2.0 * c[n]) / (h * h) + react;
                a[i] = -2.0 * d / (h * h);
                b[i] = 2.0 * d / (h * h) + dreact;
                cc[i] = 0.0;
            } else {
                r[i] = -d * (c[i - 1] - 2.0 * c[i] + c[i + 1]) / (h * h) + react;
                a[i] = -d / (h * h);
                b[i] = 2.0 * d / (h * h) + dreact;
                cc[i] = -d / (h * h);
            }
            maxres = std::max(maxres, std::abs(r[i]));
        }
        if (maxres < 1e-14) break;
        std::vector<double> beta(n + 1), gamma(n + 1), delta(n + 1);
        beta[0] = b[0];
        gamma[0] = -r[0];
        for (int i = 1; i <= n; ++i) {
            double m = a[i] / beta[i - 1];
            beta[i] = b[i] - m * cc[i - 1];
            gamma[i] = -r[i] - m * gamma[i - 1];
        }
        delta[n] = gamma[n] / beta[n];
        for (int i = n - 1; i >= 0; --i) delta[i] = (gamma[i] - cc[i] * delta[i + 1]) / beta[i];
        for (int i = 0; i <= n; ++i) c[i] += delta[i];
    }
    return c;
}

void criterion_6_ode_oracle() {
    const double H = 0.5;
    std::vector<double> fine = ode_oracle(8192, H, 1.0, 1.0, 1.0, 1.0);
    Grid g = Grid::build(1.0, std::vector<double>(5, H), 4, 64, LateralMode::Periodic);
    NutrientProblem p;
    p.grid = &g;
    p.v_l = VectorField(g);
    p.phi_b = ScalarField(g, 1.0);
    p.d = 1.0;
    NutrientResult res = solve_nutrient(p);
    double worst = 0.0;
    for (int j = 0; j <= g.nz(); ++j) {
        int fi = static_cast<int>(std::lround(g.z(0, j) / (H / 8192)));
        for (int i = 0; i <= g.nx(); ++i)
            worst = std::max(worst, std::abs(res.c.at(i, j) - fine[fi]));
    }
    report(6, "1D nutrient column vs independent oracle", worst <= 1e-4,
           "max-norm difference " + g17(worst));
}

void criterion_7_incompressibility_refinement() {
    double inc[2];
    bool conv = true;
    for (int lev = 0; lev < 2; ++lev) {
        Grid g = reference_grid(32 << lev, 8 << lev);
        SolutionState st = run_fixed_point(g, reference_params(0.1), reference_config());
        conv = conv && st.converged;
        inc[lev] = st.history.back().incompressibility;
    }
    double factor = inc[0] / inc[1];
    report(7, "incompressibility residual refinement", conv && factor >= 1.5,
           "32x8: " + g17(inc[0]) + ", 64x16: " + g17(inc[1]) + ", factor " + g17(factor));
}

void criterion_8_divergence_identity() {
    Grid g = flat_traction(16, 8, 0.5);
    VectorField v0(g);
    ScalarField p0(g, 0.3), phib0(g, 0.25);
    double eq = divergence_identity_residual(v0, p0, phib0, 1.0, 0.5);
    double r1 = mms_divergence_identity_residual(24, 12);
    double r2 = mms_divergence_identity_residual(48, 24);
    double order = std::log2(r1 / r2);
    bool pass = eq <= 1e-10 && order >= 1.0;
    report(8, "divergence identity", pass,
           "equilibrium " + g17(eq) + ", manufactured order " + g17(order));
}

void criterion_9_height() {
    auto translation_error = [](int nx) {
        const double U = 0.5;
        std::vector<double> h0(nx + 1);
        for (int i = 0; i <= nx; ++i) h0[i] = 0.3 + 0.08 * std::cos(2.0 * M_PI * i / nx);
        EvolutionConfig cfg;
        cfg.cfl = 1.0;
        const double dx = 1.0 / nx;
        const double dt = 0.5 * dx / U;
        HeightProfile hp{h0, 0.0};
        for (int s = 0; s < nx; ++s) {
            Grid g = Grid::build(1.0, hp.h, nx, 6, LateralMode::Periodic);
            VectorField v(g, U, 0.0);
            hp = advance_height(g, hp, v, dt, cfg).profile;
        }
        const int shift = nx / 2;
        double err2 = 0.0;
        for (int i = 0; i < nx; ++i) {
            double exact = h0[((i - shift) % nx + nx) % nx];
            err2 += (hp.h[i] - exact) * (hp.h[i] - exact) * dx;
        }
        return std::sqrt(err2);
    };
    double e1 = translation_error(64);
    double e2 = translation_error(128);

    // Mass identity on a sheared bump.
    const int nx = 32, nz = 6;
    std::vector<double> h0(nx + 1);
    for (int i = 0; i <= nx; ++i) h0[i] = 0.3 + 0.1 * std::cos(2.0 * M_PI * i / nx);
    HeightProfile hp{h0, 0.0};
    EvolutionConfig cfg;
    double worst_identity = 0.0;
    for (int s = 0; s < 5; ++s) {
        Grid g = Grid::build(1.0, hp.h, nx, nz, LateralMode::Periodic);
        VectorField v(g);
        for (int i = 0; i <= nx; ++i)
            for (int j = 0; j <= nz; ++j) {
                v.x.at(i, j) = std::sin(2.0 * M_PI * g.x(i)) * (1.0 + 0.4 * g.s(j));
                v.z.at(i, j) = 0.08 * std::cos(2.0 * M_PI * g.x(i));
            }
        HeightStep hs = advance_height(g, hp, v, 1e-3, cfg);
        double lhs = 0.0;
        for (int i = 0; i < nx; ++i) lhs += (hs.profile.h[i] - hp.h[i]) * g.dx();
        worst_identity = std::max(worst_identity, std::abs(lhs - hs.bottom_source));
        hp = hs.profile;
    }
    bool pass = e1 / e2 >= 1.4 && e1 <= 0.02 && worst_identity <= 1e-12;
    report(9, "height equation: characteristics and mass identity", pass,
           "translation errors " + g17(e1) + " -> " + g17(e2) + ", identity defect " +
               g17(worst_identity));
}

void criterion_10_mode_agreement() {
    Grid g = reference_grid(32, 8);
    ModelParams params = reference_params(0.1, 1000.0, 1001.0);
    CoupledConfig fa = reference_config();
    fa.mode = GrowthMode::FrozenG;
    CoupledConfig fb = reference_config();
    fb.mode = GrowthMode::MonodG;
    SolutionState a = run_fixed_point(g, params, fa);
    SolutionState b = run_fixed_point(g, params, fb);
    double diff = linf_diff(a.phi_l, b.phi_l);
    report(10, "frozen vs Monod-coupled growth agreement", a.converged && b.converged &&
               diff <= 1e-3,
           "max |phi_l difference| " + g17(diff));
}

void criterion_11_determinism() {
    auto one_run = [](const std::string& dir) {
        Grid g = reference_grid(24, 6);
        SolutionState st = run_fixed_point(g, reference_params(0.1), reference_config());
        return write_fields(st, dir, true, true);
    };
    Manifest m1 = one_run("acc_det_a");
    Manifest m2 = one_run("acc_det_b");
    bool pass = m1.combined_hash() == m2.combined_hash() && !m1.files.empty();
    report(11, "seeded runs are byte-identical", pass,
           "manifest hashes " + std::to_string(m1.combined_hash()) + " / " +
               std::to_string(m2.combined_hash()));
    std::filesystem::remove_all("acc_det_a");
    std::filesystem::remove_all("acc_det_b");
}

void criterion_12_contraction() {
    // Contraction at the documented reference Pi.
    Grid g = reference_grid(32, 8);
    SolutionState st = run_fixed_point(g, reference_params(0.1), reference_config());
    bool contracts = st.converged;
    double rmax = 0.0;
    for (size_t l = 2; l < st.history.size(); ++l) {
        if (st.history[l - 1].dv_l <= 1e-13) break;
        double r = st.history[l].dv_l / st.history[l - 1].dv_l;
        rmax = std::max(rmax, r);
        contracts = contracts && r < 1.0;
    }
    // Regression-tracked threshold: first Pi in a doubling scan where the
    // measured ratio reaches 1 (recorded, not asserted against any constant).
    double pi_lost = -1.0;
    for (double Pi = 0.2; Pi <= 6.4; Pi *= 2.0) {
        CoupledConfig cfg = reference_config();
        cfg.outer_max_iter = 25;
        cfg.sign_abort_factor = 1e9;
        SolutionState s = run_fixed_point(g, reference_params(Pi), cfg);
        double r = 0.0;
        for (size_t l = 2; l < s.history.size(); ++l)
            if (s.history[l - 1].dv_l > 1e-13)
                r = std::max(r, s.history[l].dv_l / s.history[l - 1].dv_l);
        if (r >= 1.0 || s.status == RunStatus::InnerError) {
            pi_lost = Pi;
            break;
        }
    }
    report(12, "outer contraction at reference Pi", contracts,
           "max ratio " + g17(rmax) + " at Pi=0.1; contraction lost near Pi=" +
               g17(pi_lost) + " (recorded)");
}

}  // namespace

int main() {
    setenv("FILMFLOW_LOG", "quiet", 0);
    criterion_1_equilibrium();
    criterion_2_max_principle();
    criterion_3_constant_state();
    criterion_4_mms_orders();
    criterion_5_nutrient_bound();
    criterion_6_ode_oracle();
    criterion_7_incompressibility_refinement();
    criterion_8_divergence_identity();
    criterion_9_height();
    criterion_10_mode_agreement();
    criterion_11_determinism();
    criterion_12_contraction();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
