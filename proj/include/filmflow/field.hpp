#ifndef FILMFLOW_FIELD_HPP
#define FILMFLOW_FIELD_HPP

#include <vector>

#include "filmflow/grid.hpp"

namespace filmflow {

/// One real value per grid node. The grid must outlive the field.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& grid, double fill = 0.0)
        : grid_(&grid), v_(grid.n_nodes(), fill) {}

    const Grid& grid() const { return *grid_; }
    bool valid() const { return grid_ != nullptr; }

    double& at(int i, int j) { return v_[grid_->node(i, j)]; }
    double at(int i, int j) const { return v_[grid_->node(i, j)]; }
    double& operator[](int node) { return v_[node]; }
    double operator[](int node) const { return v_[node]; }

    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    /// Copies column 0 into the mirror column nx (periodic grids).
    void sync_periodic();

    double min() const;
    double max() const;

private:
    const Grid* grid_ = nullptr;
    std::vector<double> v_;
};

struct VectorField {
    ScalarField x;
    ScalarField z;

    VectorField() = default;
    explicit VectorField(const Grid& grid, double fx = 0.0, double fz = 0.0)
        : x(grid, fx), z(grid, fz) {}
    const Grid& grid() const { return x.grid(); }
    void sync_periodic() {
        x.sync_periodic();
        z.sync_periodic();
    }
};

/// Area-weighted discrete L2 norm over unknown nodes (periodic mirror excluded).
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);
double l2_diff(const ScalarField& a, const ScalarField& b);
double l2_diff(const VectorField& a, const VectorField& b);
double linf_norm(const ScalarField& f);
double linf_diff(const ScalarField& a, const ScalarField& b);

/// Plain Euclidean norm of the nodal value vector (unknown nodes).
double vec2_norm(const ScalarField& f);

bool all_finite(const ScalarField& f);

}  // namespace filmflow

#endif
