#ifndef FILMFLOW_GRID_HPP
#define FILMFLOW_GRID_HPP

#include <vector>

#include "filmflow/params.hpp"

namespace filmflow {

enum class LateralMode { Periodic, Traction };

enum class BoundaryTag { None, Bottom, Top, LateralLeft, LateralRight };

/// Structured terrain-following grid under a height profile h(x).
///
/// Nodes sit at (x_i, s_j * h(x_i)) with x_i = i*dx (i = 0..nx) and
/// s_j = j/nz (j = 0..nz). Storage keeps all (nx+1)*(nz+1) nodes; in
/// Periodic mode column nx mirrors column 0 and the unknown space drops it.
/// Immutable after construction.
class Grid {
public:
    /// Builds the grid. h_profile must hold nx+1 per-column heights.
    /// h_min < 0 selects the default precursor floor 1e-3 * max(h).
    static Grid build(double L, std::vector<double> h_profile, int nx, int nz,
                      LateralMode mode, double h_min = -1.0);

    int nx() const { return nx_; }
    int nz() const { return nz_; }
    double length() const { return L_; }
    double dx() const { return dx_; }
    double ds() const { return ds_; }
    LateralMode lateral_mode() const { return mode_; }
    bool periodic() const { return mode_ == LateralMode::Periodic; }
    double precursor_floor() const { return h_min_; }

    int n_nodes() const { return (nx_ + 1) * (nz_ + 1); }
    int n_unknowns() const { return periodic() ? nx_ * (nz_ + 1) : n_nodes(); }

    int node(int i, int j) const { return i * (nz_ + 1) + j; }
    int node_i(int node) const { return node / (nz_ + 1); }
    int node_j(int node) const { return node % (nz_ + 1); }

    /// Wraps a column index into stored node columns (periodic only).
    int wrap_i(int i) const {
        if (!periodic()) return i;
        while (i < 0) i += nx_;
        while (i > nx_) i -= nx_;
        return i;
    }

    /// Unknown index of a node; column nx aliases column 0 in Periodic mode.
    int unknown(int i, int j) const {
        i = wrap_i(i);
        if (periodic() && i == nx_) i = 0;
        return i * (nz_ + 1) + j;
    }
    int unknown_of_node(int node) const { return unknown(node_i(node), node_j(node)); }
    /// Unknowns are laid out like nodes with the mirror column removed.
    int unknown_node(int u) const { return u; }

    double x(int i) const { return x_[i]; }
    double s(int j) const { return s_[j]; }
    double h(int i) const { return h_[wrap_i(i)]; }
    double dhdx(int i) const { return hp_[wrap_i(i)]; }
    double z(int i, int j) const { return s_[j] * h_[wrap_i(i)]; }

    BoundaryTag tag(int i, int j) const { return tags_[node(i, j)]; }
    BoundaryTag tag(int node) const { return tags_[node]; }
    const std::vector<BoundaryTag>& tags() const { return tags_; }

    /// Physical boundary (periodic lateral columns are interior).
    bool is_boundary(int i, int j) const { return tags_[node(i, j)] != BoundaryTag::None; }

    /// Outward unit normal; valid only at boundary nodes.
    Vec2 outward_normal(int i, int j) const;

    /// Area of mapped cell (i,j), i in [0,nx), j in [0,nz).
    double cell_area(int i, int j) const;
    /// Corner-share control volume of node (i,j); wraps in Periodic mode so
    /// that control volumes of unknown nodes tile the domain exactly.
    double node_volume(int i, int j) const;
    double total_area() const;

    /// Largest nodal height (the vertical diameter M of the domain).
    double max_height() const;

private:
    Grid() = default;

    int nx_ = 0, nz_ = 0;
    double L_ = 0.0, dx_ = 0.0, ds_ = 0.0, h_min_ = 0.0;
    LateralMode mode_ = LateralMode::Periodic;
    std::vector<double> x_, s_, h_, hp_;
    std::vector<BoundaryTag> tags_;
};

/// Per-node boundary tags (same vector the grid stores).
std::vector<BoundaryTag> classify_boundary(const Grid& grid);

}  // namespace filmflow

#endif
