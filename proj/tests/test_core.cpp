#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "filmflow/config.hpp"
#include "filmflow/field.hpp"
#include "filmflow/grid.hpp"
#include "filmflow/params.hpp"
#include "filmflow/sparse.hpp"
#include "filmflow/util.hpp"
#include "filmflow/verify.hpp"

using namespace filmflow;

namespace {
std::vector<double> flat(int nx, double H) { return std::vector<double>(nx + 1, H); }
}

TEST_CASE("monod rate factor") {
    CHECK(monod(0.0, 1.0) == 0.0);
    CHECK(monod(2.0, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(monod(3.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(monod(-1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(monod(1.0, 0.0), ConfigError);

    SeededUniform rng(11);
    for (int k = 0; k < 500; ++k) {
        double c = rng.range(0.0, 1e6);
        double K = rng.range(1e-6, 1e3);
        double m = monod(c, K);
        CHECK(m >= 0.0);
        CHECK(m < 1.0);
        CHECK(monod(c + 1.0, K) >= m);  // monotone in c
    }
}

TEST_CASE("grid construction, tags, counts") {
    Grid g = Grid::build(1.0, flat(8, 0.2), 8, 4, LateralMode::Traction);
    CHECK(g.n_nodes() == 45);
    int bottom = 0, top = 0, lat = 0, none = 0;
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 4; ++j) switch (g.tag(i, j)) {
                case BoundaryTag::Bottom: ++bottom; break;
                case BoundaryTag::Top: ++top; break;
                case BoundaryTag::None: ++none; break;
                default: ++lat;
            }
    CHECK(bottom == 9);
    CHECK(top == 9);
    CHECK(lat == 6);
    CHECK(none == 45 - 24);

    // Boundary/tag bijection by exhaustive scan.
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 4; ++j) {
            bool geo_boundary = j == 0 || j == 4 || i == 0 || i == 8;
            CHECK((g.tag(i, j) != BoundaryTag::None) == geo_boundary);
        }
}

TEST_CASE("periodic grid: matching lateral columns, no lateral tags") {
    int nx = 32;
    std::vector<double> h(nx + 1);
    for (int i = 0; i <= nx; ++i) h[i] = 0.1 + 0.05 * std::cos(2.0 * M_PI * i / nx);
    Grid g = Grid::build(1.0, h, nx, 8, LateralMode::Periodic);
    CHECK(g.h(0) == doctest::Approx(g.h(nx)).epsilon(1e-15));
    for (int j = 1; j < 8; ++j) {
        CHECK(g.tag(0, j) == BoundaryTag::None);
        CHECK(g.tag(nx, j) == BoundaryTag::None);
        CHECK(g.unknown(nx, j) == g.unknown(0, j));
    }
}

TEST_CASE("grid rejects bad input") {
    auto h = flat(8, 0.2);
    h[3] = 0.0;
    CHECK_THROWS_WITH_AS(static_cast<void>(Grid::build(1.0, h, 8, 4, LateralMode::Traction)),
                         doctest::Contains("non-positive height"), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(Grid::build(1.0, flat(3, 0.2), 3, 4, LateralMode::Traction)),
                    std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(Grid::build(1.0, flat(8, 0.2), 8, 3, LateralMode::Traction)),
                    std::invalid_argument);
}

TEST_CASE("metric consistency: cell areas sum to the trapezoid integral of h") {
    int nx = 24, nz = 6;
    std::vector<double> h(nx + 1);
    for (int i = 0; i <= nx; ++i) h[i] = 0.2 + 0.07 * std::cos(2.0 * M_PI * i / nx);
    for (LateralMode mode : {LateralMode::Traction, LateralMode::Periodic}) {
        Grid g = Grid::build(2.0, h, nx, nz, mode);
        double trap = 0.0;
        for (int i = 0; i < nx; ++i) trap += 0.5 * (h[i] + h[i + 1]) * g.dx();
        CHECK(g.total_area() == doctest::Approx(trap).epsilon(1e-12));
        // Corner-share volumes tile the domain.
        double volsum = 0.0;
        int icap = g.periodic() ? nx - 1 : nx;
        for (int i = 0; i <= icap; ++i)
            for (int j = 0; j <= nz; ++j) volsum += g.node_volume(i, j);
        CHECK(volsum == doctest::Approx(trap).epsilon(1e-12));
    }
}

TEST_CASE("sparse assembly: identity, duplicates, range check") {
    std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, 1.0}};
    SparseSystem s = SparseSystem::assemble(t, 2);
    CHECK(s.nnz() == 2);
    s.set_rhs({1.0, 2.0});
    SolveReport rep;
    auto x = solve(s, {}, &rep);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-14));

    std::vector<Triplet> dup{{0, 0, 1.0}, {0, 0, 2.0}, {1, 1, 1.0}};
    SparseSystem sd = SparseSystem::assemble(dup, 2);
    CHECK(sd.nnz() == 2);
    CHECK(sd.values()[0] == 3.0);

    std::vector<Triplet> bad{{0, 5, 1.0}};
    CHECK_THROWS_AS(static_cast<void>(SparseSystem::assemble(bad, 2)), std::out_of_range);
}

TEST_CASE("solve: 1D Poisson with linear data is exact") {
    // 5 nodes on [0,1], u(x)=x, Dirichlet ends; 3-point stencil is exact
    // for linear solutions.
    const int n = 5;
    const double dx = 0.25;
    std::vector<Triplet> t;
    std::vector<double> b(n, 0.0);
    t.push_back({0, 0, 1.0});
    b[0] = 0.0;
    t.push_back({n - 1, n - 1, 1.0});
    b[n - 1] = 1.0;
    for (int i = 1; i < n - 1; ++i) {
        t.push_back({i, i - 1, -1.0 / (dx * dx)});
        t.push_back({i, i, 2.0 / (dx * dx)});
        t.push_back({i, i + 1, -1.0 / (dx * dx)});
    }
    SparseSystem s = SparseSystem::assemble(t, n);
    s.set_rhs(b);
    auto x = solve(s, {});
    for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - 0.25 * i) <= 1e-12);
}

namespace {
SparseSystem random_spd(int n, std::uint64_t seed) {
    SeededUniform rng(seed);
    // A = D + B + B^T with strong diagonal: SPD and well conditioned.
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
        t.push_back({i, i, 10.0 + rng.range(0.0, 1.0)});
        for (int k = 0; k < 3; ++k) {
            int j = int(rng.range(0.0, double(n)));
            if (j == i || j >= n) continue;
            double v = rng.range(-0.5, 0.5);
            t.push_back({i, j, v});
            t.push_back({j, i, v});
        }
    }
    SparseSystem s = SparseSystem::assemble(t, n);
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = rng.range(-1.0, 1.0);
    s.set_rhs(b);
    return s;
}
}  // namespace

TEST_CASE("solve: seeded random SPD 50x50, residual recomputation is the oracle") {
    SparseSystem s = random_spd(50, 2024);
    SolveOptions opts;
    opts.tol = 1e-12;
    SolveReport rep;
    auto x = solve(s, opts, &rep);
    double recomputed = s.relative_residual(x);
    CHECK(recomputed <= 1e-10);
    CHECK(std::abs(recomputed - rep.rel_residual) <= 1e-13);
}

TEST_CASE("solve: direct and Krylov paths agree on seeded systems up to n=2000") {
    for (int n : {200, 2000}) {
        SparseSystem s = random_spd(n, 77 + n);
        SolveOptions ko;
        ko.try_direct = false;
        ko.tol = 1e-12;
        auto xk = solve(s, ko);
        SolveOptions dopt;
        dopt.try_krylov = false;
        SolveReport drep;
        auto xd = solve(s, dopt, &drep);
        CHECK(drep.method == SolveMethod::Direct);
        double diff = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i) {
            diff = std::max(diff, std::abs(xk[i] - xd[i]));
            scale = std::max(scale, std::abs(xd[i]));
        }
        CHECK(diff <= 1e-8 * std::max(1.0, scale));
    }
}

TEST_CASE("matrix market dump") {
    SparseSystem s = random_spd(6, 5);
    std::string path = "mm_dump_test.mtx";
    s.write_matrix_market(path);
    std::FILE* f = std::fopen(path.c_str(), "r");
    REQUIRE(f != nullptr);
    char line[128];
    REQUIRE(std::fgets(line, sizeof(line), f) != nullptr);
    CHECK(std::string(line).find("%%MatrixMarket matrix coordinate real general") == 0);
    std::fclose(f);
    std::remove(path.c_str());
}

TEST_CASE("params validation names the offending field") {
    ModelParams p;
    p.phi_inf = 1.5;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("phi_inf"), ConfigError);
    p = ModelParams{};
    p.d = -1.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("d:"), ConfigError);
}

TEST_CASE("config round trip reproduces the spec exactly") {
    RunSpec spec;
    spec.seed = 123;
    spec.grid.nx = 48;
    spec.grid.h_source = HeightSource::Cosine;
    spec.grid.h_cos_base = 0.22;
    spec.grid.h_cos_amp = 0.04;
    spec.params.Pi = 0.35;
    spec.params.traction_top = {TractionKind::ConstantVector, {0.02, -0.1}};
    spec.coupled.mode = GrowthMode::MonodG;
    spec.format_vtk = true;
    write_config(spec, "roundtrip_test.cfg");
    RunSpec back = load_config("roundtrip_test.cfg");
    CHECK(back == spec);
    std::remove("roundtrip_test.cfg");
}

TEST_CASE("config errors carry line numbers and field names") {
    {
        std::FILE* f = std::fopen("bad1.cfg", "w");
        std::fprintf(f, "[params]\nphi_inf = 1.5\n");
        std::fclose(f);
        CHECK_THROWS_WITH_AS(static_cast<void>(load_config("bad1.cfg")),
                             doctest::Contains("phi_inf"), ConfigError);
        std::remove("bad1.cfg");
    }
    {
        std::FILE* f = std::fopen("bad2.cfg", "w");
        std::fprintf(f, "[grid]\nnx = 8\nnx = 16\n");
        std::fclose(f);
        try {
            static_cast<void>(load_config("bad2.cfg"));
            CHECK(false);
        } catch (const ConfigError& e) {
            std::string msg = e.what();
            CHECK(msg.find("line 2") != std::string::npos);
            CHECK(msg.find("line 3") != std::string::npos);
        }
        std::remove("bad2.cfg");
    }
    {
        std::FILE* f = std::fopen("bad3.cfg", "w");
        std::fprintf(f, "[grid]\nnx = 8\nwhat_is_this = 1\n");
        std::fclose(f);
        try {
            static_cast<void>(load_config("bad3.cfg"));
            CHECK(false);
        } catch (const ConfigError& e) {
            std::string msg = e.what();
            CHECK(msg.find("line 3") != std::string::npos);
            CHECK(msg.find("what_is_this") != std::string::npos);
        }
        std::remove("bad3.cfg");
    }
}

TEST_CASE("assembly matches a dense accumulation on random triplets") {
    SeededUniform rng(314);
    const int n = 17;
    std::vector<Triplet> trip;
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (int k = 0; k < 400; ++k) {
        int r = int(rng.range(0.0, double(n)));
        int c = int(rng.range(0.0, double(n)));
        r = std::min(r, n - 1);
        c = std::min(c, n - 1);
        double v = rng.range(-2.0, 2.0);
        trip.push_back({r, c, v});
        dense[r][c] += v;
    }
    SparseSystem s = SparseSystem::assemble(trip, n);
    // Every stored entry matches the dense sum; no duplicates remain.
    for (int r = 0; r < n; ++r) {
        int prev = -1;
        for (int k = s.row_offsets()[r]; k < s.row_offsets()[r + 1]; ++k) {
            CHECK(s.cols()[k] > prev);
            prev = s.cols()[k];
            CHECK(s.values()[k] == doctest::Approx(dense[r][s.cols()[k]]).epsilon(1e-15));
        }
    }
    // Apply agrees with the dense product.
    std::vector<double> x(n), y(n), yd(n, 0.0);
    for (int i = 0; i < n; ++i) x[i] = rng.range(-1.0, 1.0);
    s.apply(x, y);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) yd[r] += dense[r][c] * x[c];
    for (int r = 0; r < n; ++r) CHECK(y[r] == doctest::Approx(yd[r]).epsilon(1e-13));
}
