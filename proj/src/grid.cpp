#include "filmflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "filmflow/util.hpp"

namespace filmflow {

Grid Grid::build(double L, std::vector<double> h_profile, int nx, int nz,
                 LateralMode mode, double h_min) {
    if (nx < 4 || nz < 4) {
        throw std::invalid_argument("build_grid: nx and nz must both be at least 4");
    }
    if (!(L > 0.0)) {
        throw std::invalid_argument("build_grid: L must be positive");
    }
    if (static_cast<int>(h_profile.size()) != nx + 1) {
        throw std::invalid_argument("build_grid: h_profile must have nx+1 entries");
    }
    double h_max = 0.0;
    for (double h : h_profile) {
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw std::invalid_argument("build_grid: non-positive height");
        }
        h_max = std::max(h_max, h);
    }
    if (h_min < 0.0) h_min = 1e-3 * h_max;
    for (double h : h_profile) {
        if (h < h_min) {
            throw std::invalid_argument("build_grid: height below precursor floor");
        }
    }
    if (mode == LateralMode::Periodic &&
        std::abs(h_profile.front() - h_profile.back()) > 1e-12 * h_max) {
        throw std::invalid_argument("build_grid: periodic profile requires h(0) == h(L)");
    }

    Grid g;
    g.nx_ = nx;
    g.nz_ = nz;
    g.L_ = L;
    g.dx_ = L / nx;
    g.ds_ = 1.0 / nz;
    g.h_min_ = h_min;
    g.mode_ = mode;
    g.h_ = std::move(h_profile);

    g.x_.resize(nx + 1);
    for (int i = 0; i <= nx; ++i) g.x_[i] = L * i / nx;
    g.s_.resize(nz + 1);
    for (int j = 0; j <= nz; ++j) g.s_[j] = double(j) / nz;

    // dh/dx per column, second order.
    g.hp_.resize(nx + 1);
    const double inv2dx = 1.0 / (2.0 * g.dx_);
    for (int i = 0; i <= nx; ++i) {
        if (mode == LateralMode::Periodic) {
            int im = (i - 1 + nx) % nx;
            int ip = (i + 1) % nx;
            g.hp_[i] = (g.h_[ip] - g.h_[im]) * inv2dx;
        } else if (i == 0) {
            g.hp_[i] = (-3.0 * g.h_[0] + 4.0 * g.h_[1] - g.h_[2]) * inv2dx;
        } else if (i == nx) {
            g.hp_[i] = (3.0 * g.h_[nx] - 4.0 * g.h_[nx - 1] + g.h_[nx - 2]) * inv2dx;
        } else {
            g.hp_[i] = (g.h_[i + 1] - g.h_[i - 1]) * inv2dx;
        }
    }

    g.tags_.assign(g.n_nodes(), BoundaryTag::None);
    for (int i = 0; i <= nx; ++i) {
        g.tags_[g.node(i, 0)] = BoundaryTag::Bottom;
        g.tags_[g.node(i, nz)] = BoundaryTag::Top;
    }
    if (mode == LateralMode::Traction) {
        for (int j = 1; j < nz; ++j) {
            g.tags_[g.node(0, j)] = BoundaryTag::LateralLeft;
            g.tags_[g.node(nx, j)] = BoundaryTag::LateralRight;
        }
    }

    // Mapped cells are quads with straight edges; their Jacobian is h > 0,
    // already guaranteed, but keep the area sanity check.
    for (int i = 0; i < nx; ++i) {
        if (!(g.cell_area(i, 0) > 0.0)) {
            throw std::invalid_argument("build_grid: degenerate cell");
        }
    }
    return g;
}

Vec2 Grid::outward_normal(int i, int j) const {
    switch (tag(i, j)) {
        case BoundaryTag::Bottom:
            return {0.0, -1.0};
        case BoundaryTag::Top: {
            double hp = dhdx(i);
            double n = std::sqrt(1.0 + hp * hp);
            return {-hp / n, 1.0 / n};
        }
        case BoundaryTag::LateralLeft:
            return {-1.0, 0.0};
        case BoundaryTag::LateralRight:
            return {1.0, 0.0};
        default:
            throw std::logic_error("outward_normal: interior node");
    }
}

double Grid::cell_area(int i, int j) const {
    (void)j;  // uniform in s
    return dx_ * ds_ * 0.5 * (h_[i] + h_[i + 1]);
}

double Grid::node_volume(int i, int j) const {
    double vol = 0.0;
    const bool per = periodic();
    // Cells left and right of column i (wrapping in periodic mode).
    for (int ci : {i - 1, i}) {
        int c = ci;
        if (per) {
            if (c < 0) c += nx_;
            if (c >= nx_) c -= nx_;
        } else if (c < 0 || c >= nx_) {
            continue;
        }
        for (int cj : {j - 1, j}) {
            if (cj < 0 || cj >= nz_) continue;
            vol += 0.25 * cell_area(c, cj);
        }
    }
    return vol;
}

double Grid::total_area() const {
    double a = 0.0;
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < nz_; ++j) a += cell_area(i, j);
    return a;
}

double Grid::max_height() const {
    return *std::max_element(h_.begin(), h_.end());
}

std::vector<BoundaryTag> classify_boundary(const Grid& grid) {
    return grid.tags();
}

}  // namespace filmflow
