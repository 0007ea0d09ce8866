#include "filmflow/field.hpp"

#include <algorithm>
#include <cmath>

namespace filmflow {

void ScalarField::sync_periodic() {
    if (!grid_->periodic()) return;
    const int nz = grid_->nz();
    for (int j = 0; j <= nz; ++j) {
        v_[grid_->node(grid_->nx(), j)] = v_[grid_->node(0, j)];
    }
}

double ScalarField::min() const { return *std::min_element(v_.begin(), v_.end()); }
double ScalarField::max() const { return *std::max_element(v_.begin(), v_.end()); }

namespace {
template <typename F>
double weighted_sum(const Grid& g, F&& node_sq) {
    const int icap = g.periodic() ? g.nx() - 1 : g.nx();
    double acc = 0.0;
    for (int i = 0; i <= icap; ++i)
        for (int j = 0; j <= g.nz(); ++j) acc += g.node_volume(i, j) * node_sq(i, j);
    return acc;
}
}  // namespace

double l2_norm(const ScalarField& f) {
    const Grid& g = f.grid();
    return std::sqrt(weighted_sum(g, [&](int i, int j) {
        double v = f.at(i, j);
        return v * v;
    }));
}

double l2_norm(const VectorField& f) {
    const Grid& g = f.grid();
    return std::sqrt(weighted_sum(g, [&](int i, int j) {
        double vx = f.x.at(i, j), vz = f.z.at(i, j);
        return vx * vx + vz * vz;
    }));
}

double l2_diff(const ScalarField& a, const ScalarField& b) {
    const Grid& g = a.grid();
    return std::sqrt(weighted_sum(g, [&](int i, int j) {
        double v = a.at(i, j) - b.at(i, j);
        return v * v;
    }));
}

double l2_diff(const VectorField& a, const VectorField& b) {
    const Grid& g = a.grid();
    return std::sqrt(weighted_sum(g, [&](int i, int j) {
        double vx = a.x.at(i, j) - b.x.at(i, j);
        double vz = a.z.at(i, j) - b.z.at(i, j);
        return vx * vx + vz * vz;
    }));
}

double linf_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double linf_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (size_t k = 0; k < a.values().size(); ++k)
        m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
    return m;
}

double vec2_norm(const ScalarField& f) {
    const Grid& g = f.grid();
    const int icap = g.periodic() ? g.nx() - 1 : g.nx();
    double acc = 0.0;
    for (int i = 0; i <= icap; ++i)
        for (int j = 0; j <= g.nz(); ++j) acc += f.at(i, j) * f.at(i, j);
    return std::sqrt(acc);
}

bool all_finite(const ScalarField& f) {
    for (double v : f.values())
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace filmflow
