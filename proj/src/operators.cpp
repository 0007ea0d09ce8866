#include "filmflow/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace filmflow {

namespace {

void push(Stencil& st, int node, double c) {
    if (c != 0.0) st.push_back({node, c});
}

}  // namespace

Stencil stencil_dx(const Grid& g, int i, int j) {
    Stencil st;
    const double inv2 = 1.0 / (2.0 * g.dx());
    const int nx = g.nx();
    if (g.periodic()) {
        int im = g.wrap_i(i - 1), ip = g.wrap_i(i + 1);
        push(st, g.node(im, j), -inv2);
        push(st, g.node(ip, j), inv2);
    } else if (i == 0) {
        push(st, g.node(0, j), -3.0 * inv2);
        push(st, g.node(1, j), 4.0 * inv2);
        push(st, g.node(2, j), -inv2);
    } else if (i == nx) {
        push(st, g.node(nx, j), 3.0 * inv2);
        push(st, g.node(nx - 1, j), -4.0 * inv2);
        push(st, g.node(nx - 2, j), inv2);
    } else {
        push(st, g.node(i - 1, j), -inv2);
        push(st, g.node(i + 1, j), inv2);
    }
    return st;
}

Stencil stencil_ds(const Grid& g, int i, int j) {
    Stencil st;
    const double inv2 = 1.0 / (2.0 * g.ds());
    const int nz = g.nz();
    if (j == 0) {
        push(st, g.node(i, 0), -3.0 * inv2);
        push(st, g.node(i, 1), 4.0 * inv2);
        push(st, g.node(i, 2), -inv2);
    } else if (j == nz) {
        push(st, g.node(i, nz), 3.0 * inv2);
        push(st, g.node(i, nz - 1), -4.0 * inv2);
        push(st, g.node(i, nz - 2), inv2);
    } else {
        push(st, g.node(i, j - 1), -inv2);
        push(st, g.node(i, j + 1), inv2);
    }
    return st;
}

Stencil stencil_phys_dx(const Grid& g, int i, int j) {
    Stencil st = stencil_dx(g, i, j);
    const double m = -g.s(j) * g.dhdx(i) / g.h(i);
    if (m != 0.0) {
        for (const StencilEntry& e : stencil_ds(g, i, j)) push(st, e.node, m * e.c);
    }
    return st;
}

Stencil stencil_phys_dz(const Grid& g, int i, int j) {
    Stencil st = stencil_ds(g, i, j);
    const double m = 1.0 / g.h(i);
    for (StencilEntry& e : st) e.c *= m;
    return st;
}

double eval_stencil(const Stencil& st, const ScalarField& f) {
    double acc = 0.0;
    for (const StencilEntry& e : st) acc += e.c * f[e.node];
    return acc;
}

double phys_dx_at(const Grid& g, const ScalarField& f, int i, int j) {
    return eval_stencil(stencil_phys_dx(g, i, j), f);
}

double phys_dz_at(const Grid& g, const ScalarField& f, int i, int j) {
    return eval_stencil(stencil_phys_dz(g, i, j), f);
}

double divergence_at(const Grid& g, const VectorField& v, int i, int j) {
    return phys_dx_at(g, v.x, i, j) + phys_dz_at(g, v.z, i, j);
}

ScalarField divergence(const Grid& g, const VectorField& v) {
    ScalarField out(g);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.nz(); ++j) out.at(i, j) = divergence_at(g, v, i, j);
    return out;
}

VectorField gradient(const Grid& g, const ScalarField& f) {
    VectorField out(g);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.nz(); ++j) {
            out.x.at(i, j) = phys_dx_at(g, f, i, j);
            out.z.at(i, j) = phys_dz_at(g, f, i, j);
        }
    return out;
}

double face_len_s(const Grid& g, int j) {
    double lo = std::max(0.0, g.s(j) - 0.5 * g.ds());
    double hi = std::min(1.0, g.s(j) + 0.5 * g.ds());
    return hi - lo;
}

double face_len_x(const Grid& g, int i) {
    if (g.periodic()) return g.dx();
    double lo = std::max(0.0, g.x(i) - 0.5 * g.dx());
    double hi = std::min(g.length(), g.x(i) + 0.5 * g.dx());
    return hi - lo;
}

namespace {

// Adds the diffusive flux through the x-face between columns ia and ib
// (ib = ia+1 side) at row j, oriented +x, into the row with weight w.
void x_face_diffusive(const Grid& g, int ia, int ib, int j, const ScalarField* kappa,
                      double w, const RowSink& sink) {
    const int a = g.wrap_i(ia), b = g.wrap_i(ib);
    const double kf =
        kappa ? 0.5 * ((*kappa)[g.node(a, j)] + (*kappa)[g.node(b, j)]) : 1.0;
    const double hf = 0.5 * (g.h(a) + g.h(b));
    const double hpf = 0.5 * (g.dhdx(a) + g.dhdx(b));
    const double sj = g.s(j);
    // h F_x at the face, compact two-point difference.
    const double cx = kf * hf / g.dx();
    sink(g.node(b, j), w * cx);
    sink(g.node(a, j), -w * cx);
    // Cross term -s h' F_s, face value from averaging nodal d/ds.
    const double cm = -kf * sj * hpf * 0.5;
    if (cm != 0.0) {
        for (const StencilEntry& e : stencil_ds(g, a, j)) sink(e.node, w * cm * e.c);
        for (const StencilEntry& e : stencil_ds(g, b, j)) sink(e.node, w * cm * e.c);
    }
}

// Adds the diffusive flux through the s-face between rows ja and jb = ja+1
// in column i, oriented +s.
void s_face_diffusive(const Grid& g, int i, int ja, int jb, const ScalarField* kappa,
                      double w, const RowSink& sink) {
    const int ii = g.wrap_i(i);
    const double kf =
        kappa ? 0.5 * ((*kappa)[g.node(ii, ja)] + (*kappa)[g.node(ii, jb)]) : 1.0;
    const double sf = 0.5 * (g.s(ja) + g.s(jb));
    const double hp = g.dhdx(ii);
    const double h = g.h(ii);
    // ((1 + s^2 h'^2)/h) F_s
    const double cs = kf * (1.0 + sf * sf * hp * hp) / h / g.ds();
    sink(g.node(ii, jb), w * cs);
    sink(g.node(ii, ja), -w * cs);
    // Cross term -s h' F_x
    const double cm = -kf * sf * hp * 0.5;
    if (cm != 0.0) {
        for (const StencilEntry& e : stencil_dx(g, ii, ja)) sink(e.node, w * cm * e.c);
        for (const StencilEntry& e : stencil_dx(g, ii, jb)) sink(e.node, w * cm * e.c);
    }
}

}  // namespace

void emit_laplacian_row(const Grid& g, int i, int j, const ScalarField* kappa,
                        double scale, const RowSink& sink) {
    const double vol = g.node_volume(i, j);
    const double lsj = face_len_s(g, j);
    const double lxi = face_len_x(g, i);
    const double w0 = scale / vol;
    const bool per = g.periodic();
    // Right x-face.
    if (per || i < g.nx()) x_face_diffusive(g, i, i + 1, j, kappa, w0 * lsj, sink);
    // Left x-face.
    if (per || i > 0) x_face_diffusive(g, i - 1, i, j, kappa, -w0 * lsj, sink);
    // Top s-face.
    if (j < g.nz()) s_face_diffusive(g, i, j, j + 1, kappa, w0 * lxi, sink);
    // Bottom s-face.
    if (j > 0) s_face_diffusive(g, i, j - 1, j, kappa, -w0 * lxi, sink);
}

void emit_upwind_row(const Grid& g, int i, int j, const VectorField& w,
                     double scale, const RowSink& sink) {
    const double vol = g.node_volume(i, j);
    const double lsj = face_len_s(g, j);
    const double lxi = face_len_x(g, i);
    const double w0 = scale / vol;
    const bool per = g.periodic();
    const int nx = g.nx(), nz = g.nz();

    auto hwx = [&](int ii, int jj) {
        ii = g.wrap_i(ii);
        return g.h(ii) * w.x[g.node(ii, jj)];
    };
    auto hws = [&](int ii, int jj) {
        ii = g.wrap_i(ii);
        return w.z[g.node(ii, jj)] - g.s(jj) * g.dhdx(ii) * w.x[g.node(ii, jj)];
    };

    // x-faces.
    if (per || i < nx) {
        double a = lsj * 0.5 * (hwx(i, j) + hwx(i + 1, j));
        int up = a >= 0.0 ? g.node(g.wrap_i(i), j) : g.node(g.wrap_i(i + 1), j);
        sink(up, w0 * a);
    } else {
        double a = lsj * hwx(i, j);  // boundary face, trace value
        sink(g.node(i, j), w0 * a);
    }
    if (per || i > 0) {
        double a = lsj * 0.5 * (hwx(i - 1, j) + hwx(i, j));
        int up = a >= 0.0 ? g.node(g.wrap_i(i - 1), j) : g.node(g.wrap_i(i), j);
        sink(up, -w0 * a);
    } else {
        double a = lsj * hwx(i, j);
        sink(g.node(i, j), -w0 * a);
    }
    // s-faces.
    if (j < nz) {
        double b = lxi * 0.5 * (hws(i, j) + hws(i, j + 1));
        int up = b >= 0.0 ? g.node(g.wrap_i(i), j) : g.node(g.wrap_i(i), j + 1);
        sink(up, w0 * b);
    } else {
        double b = lxi * hws(i, j);
        sink(g.node(i, j), w0 * b);
    }
    if (j > 0) {
        double b = lxi * 0.5 * (hws(i, j - 1) + hws(i, j));
        int up = b >= 0.0 ? g.node(g.wrap_i(i), j - 1) : g.node(g.wrap_i(i), j);
        sink(up, -w0 * b);
    } else {
        double b = lxi * hws(i, j);
        sink(g.node(i, j), -w0 * b);
    }
}

double laplacian_at(const Grid& g, const ScalarField& f, int i, int j) {
    double acc = 0.0;
    emit_laplacian_row(g, i, j, nullptr, 1.0,
                       [&](int node, double c) { acc += c * f[node]; });
    return acc;
}

}  // namespace filmflow
