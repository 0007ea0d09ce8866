#include "filmflow/verify.hpp"

#include <cmath>

#include "filmflow/coupled.hpp"
#include "filmflow/height.hpp"
#include "filmflow/nutrient.hpp"
#include "filmflow/transport.hpp"
#include "filmflow/util.hpp"

namespace filmflow {

VectorField admissible_gradient_field(const Grid& g, SeededUniform& rng) {
    const double L = g.length();
    const double H = g.max_height();
    const double x0 = rng.range(0.0, L);
    const double z0 = rng.range(0.0, H);
    const double q1 = rng.range(0.0, 2.0);
    const double q2 = rng.range(0.0, 2.0);
    VectorField v(g);
    for (int i = 0; i <= g.nx(); ++i) {
        for (int j = 0; j <= g.nz(); ++j) {
            v.x.at(i, j) = -2.0 * q1 * (g.x(i) - x0);
            v.z.at(i, j) = -2.0 * q2 * (g.z(i, j) - z0);
        }
    }
    return v;
}

namespace {

PropertyResult transport_family(std::uint64_t seed, int samples, double* min_phi,
                                double* max_phi) {
    PropertyResult res;
    res.name = "transport_maximum_principle";
    SeededUniform rng(seed);
    Grid g = Grid::build(1.0, std::vector<double>(25, 0.5), 24, 10, LateralMode::Traction);
    double lo = 1e300, hi = -1e300;
    int vanish = 0;
    bool all_ok = true;
    for (int s = 0; s < samples; ++s) {
        TransportProblem p;
        p.grid = &g;
        p.v_l = admissible_gradient_field(g, rng);
        p.a = ScalarField(g, rng.range(0.3, 3.0));
        TransportResult tr = solve_phi(p, 1e-12);
        lo = std::min(lo, tr.min_phi);
        hi = std::max(hi, tr.max_phi);
        if (!tr.bounds_ok) all_ok = false;
        for (double v : tr.phi_l.values())
            if (v < 1e-6) ++vanish;
    }
    *min_phi = lo;
    *max_phi = hi;
    res.passed = all_ok && vanish == 0;
    res.details = "min phi_l " + format_g17(lo) + ", max phi_l " + format_g17(hi) +
                  ", nodes below 1e-6: " + std::to_string(vanish);
    return res;
}

PropertyResult nutrient_family(std::uint64_t seed, int samples, double* min_c_out) {
    PropertyResult res;
    res.name = "nutrient_nonnegativity";
    SeededUniform rng(seed ^ 0x6c62272e07bb0142ull);
    Grid g = Grid::build(1.0, std::vector<double>(17, 0.4), 16, 12, LateralMode::Traction);
    double min_c = 1e300;
    bool ok = true;
    std::string err;
    for (int s = 0; s < samples; ++s) {
        NutrientProblem p;
        p.grid = &g;
        p.phi_b = ScalarField(g);
        double a1 = rng.range(0.0, 1.0), a2 = rng.range(0.0, 1.0);
        for (int i = 0; i <= g.nx(); ++i) {
            for (int j = 0; j <= g.nz(); ++j) {
                double u = 0.5 + 0.5 * std::cos(2.0 * M_PI * (a1 * g.x(i) + a2 * g.s(j)));
                p.phi_b.at(i, j) = u;
            }
        }
        // Mild admissible convection on even samples, none on odd ones.
        p.v_l = VectorField(g);
        if (s % 2 == 0) {
            VectorField w = admissible_gradient_field(g, rng);
            for (int k = 0; k < g.n_nodes(); ++k) {
                p.v_l.x[k] = 0.1 * w.x[k];
                p.v_l.z[k] = 0.1 * w.z[k];
            }
        }
        p.d = rng.range(1.0, 5.0);
        p.k_c = rng.range(0.5, 2.0);
        p.K_c = rng.range(0.5, 2.0);
        p.c0 = rng.range(0.5, 2.0);
        try {
            NutrientResult nr = solve_nutrient(p);
            min_c = std::min(min_c, nr.min_c);
        } catch (const std::exception& e) {
            ok = false;
            err = e.what();
            break;
        }
    }
    *min_c_out = min_c;
    res.passed = ok && min_c >= -1e-8;
    res.details = ok ? "min c " + format_g17(min_c) : err;
    return res;
}

PropertyResult equilibrium_property() {
    PropertyResult res;
    res.name = "equilibrium_fixed_point";
    Grid g = Grid::build(1.0, std::vector<double>(17, 0.25), 16, 8, LateralMode::Traction);
    ModelParams params;
    params.Pi = 0.5;
    params.p_b0 = 0.2;
    params.traction_top.kind = TractionKind::EquilibriumNormal;
    params.traction_left.kind = TractionKind::EquilibriumNormal;
    params.traction_right.kind = TractionKind::EquilibriumNormal;
    CoupledConfig cfg;
    SolutionState st = run_fixed_point(g, params, cfg);
    double vmax = std::max(linf_norm(st.v_b.x), linf_norm(st.v_b.z));
    double vlmax = std::max(linf_norm(st.v_l.x), linf_norm(st.v_l.z));
    ScalarField pb0(g, params.p_b0), one(g, 1.0), c0f(g, params.c0);
    double perr = linf_diff(st.p, pb0);
    double phierr = linf_diff(st.phi_l, one);
    double cerr = linf_diff(st.c, c0f);
    res.passed = st.converged && static_cast<int>(st.history.size()) <= 3 &&
                 vmax <= 1e-10 && vlmax <= 1e-10 && perr <= 1e-9 && phierr <= 1e-10 &&
                 cerr <= 1e-9 && st.history.back().dv_l <= 1e-10;
    res.details = "iters " + std::to_string(st.history.size()) + ", |v_b| " +
                  format_g17(vmax) + ", |p-p0| " + format_g17(perr) + ", |phi_l-1| " +
                  format_g17(phierr) + ", |c-c0| " + format_g17(cerr);
    return res;
}

PropertyResult mass_conservation_property(std::uint64_t seed) {
    PropertyResult res;
    res.name = "height_mass_conservation";
    SeededUniform rng(seed ^ 0x27220a95fe8277b5ull);
    const int nx = 32, nz = 6;
    std::vector<double> h(nx + 1);
    for (int i = 0; i <= nx; ++i) {
        double x = double(i) / nx;
        h[i] = 0.3 + 0.1 * std::cos(2.0 * M_PI * x) + 0.03 * std::sin(4.0 * M_PI * x);
    }
    h[nx] = h[0];
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.cfl = 0.95;
    cfg.closure = HeightClosure::Periodic;
    double worst = 0.0;
    HeightProfile hp{h, 0.0};
    for (int step = 0; step < 5; ++step) {
        Grid g = Grid::build(1.0, hp.h, nx, nz, LateralMode::Periodic);
        VectorField v(g);
        double a = rng.range(0.5, 1.5), b = rng.range(0.0, 1.0);
        for (int i = 0; i <= nx; ++i)
            for (int j = 0; j <= nz; ++j) {
                v.x.at(i, j) = a * std::sin(2.0 * M_PI * (g.x(i) + b)) * (1.0 + 0.3 * g.s(j));
                v.z.at(i, j) = 0.05 * std::cos(2.0 * M_PI * g.x(i));
            }
        HeightStep hs = advance_height(g, hp, v, cfg.dt, cfg);
        double lhs = 0.0;
        for (int i = 0; i < nx; ++i) lhs += (hs.profile.h[i] - hp.h[i]) * g.dx();
        double identity = std::abs(lhs - hs.bottom_source) + hs.clipped_mass;
        worst = std::max(worst, identity);
        hp = hs.profile;
    }
    res.passed = worst <= 1e-12;
    res.details = "worst per-step identity defect " + format_g17(worst);
    return res;
}

PropertyResult sign_policy_property(bool inject_violation) {
    PropertyResult res;
    res.name = "sign_policy";
    Grid g = Grid::build(1.0, std::vector<double>(17, 0.5), 16, 8, LateralMode::Traction);
    VectorField v(g);
    if (inject_violation) {
        for (int i = 0; i <= g.nx(); ++i)
            for (int j = 0; j <= g.nz(); ++j) v.x.at(i, j) = g.x(i);  // div = +1
    } else {
        SeededUniform rng(7);
        v = admissible_gradient_field(g, rng);
    }
    SignReport rep = check_sign_conditions(g, v, 1e-6);
    SignAction action = sign_policy(rep, 1e-6, 100.0);
    res.passed = rep.admissible && action == SignAction::Proceed;
    res.details = "max div " + format_g17(rep.max_interior_div) + ", max v.n " +
                  format_g17(rep.max_boundary_vn) +
                  (inject_violation ? " (injected violation)" : "");
    return res;
}

}  // namespace

VerifyReport run_verify(std::uint64_t seed, int samples, bool inject_sign_violation) {
    VerifyReport rep;
    rep.properties.push_back(
        transport_family(seed, samples, &rep.min_phi_l, &rep.max_phi_l));
    rep.properties.push_back(nutrient_family(seed, std::max(4, samples / 2), &rep.min_c));
    rep.properties.push_back(equilibrium_property());
    rep.properties.push_back(mass_conservation_property(seed));
    rep.properties.push_back(sign_policy_property(inject_sign_violation));
    return rep;
}

std::string verify_text(const VerifyReport& rep) {
    std::string out;
    for (const PropertyResult& p : rep.properties) {
        out += std::string(p.passed ? "[PASS] " : "[FAIL] ") + p.name + ": " + p.details + "\n";
    }
    out += "family extrema: min phi_l " + format_g17(rep.min_phi_l) + ", max phi_l " +
           format_g17(rep.max_phi_l) + ", min c " + format_g17(rep.min_c) + "\n";
    return out;
}

}  // namespace filmflow
