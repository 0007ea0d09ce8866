#include "filmflow/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "filmflow/util.hpp"

namespace filmflow {

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t k = 0; k < len; ++k) {
        h ^= p[k];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("hash_file: cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        std::streamsize got = in.gcount();
        if (got > 0) h = fnv1a64(buf, static_cast<std::size_t>(got), h);
    }
    return h;
}

std::uint64_t Manifest::combined_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const ManifestEntry& e : files) {
        h = fnv1a64(e.name.data(), e.name.size(), h);
        h = fnv1a64(&e.bytes, sizeof(e.bytes), h);
        h = fnv1a64(&e.hash, sizeof(e.hash), h);
    }
    return h;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir + "'");
}

namespace {

ManifestEntry finish_file(const std::string& path, const std::string& name) {
    ManifestEntry e;
    e.name = name;
    e.bytes = std::filesystem::file_size(path);
    e.hash = hash_file(path);
    return e;
}

void write_csv(const SolutionState& st, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "x,z,phi_l,phi_b,p,c,vbx,vbz,vlx,vlz\n");
    const Grid& g = st.phi_l.grid();
    for (int j = 0; j <= g.nz(); ++j) {
        for (int i = 0; i <= g.nx(); ++i) {
            std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                         g.x(i), g.z(i, j), st.phi_l.at(i, j), st.phi_b.at(i, j),
                         st.p.at(i, j), st.c.at(i, j), st.v_b.x.at(i, j), st.v_b.z.at(i, j),
                         st.v_l.x.at(i, j), st.v_l.z.at(i, j));
        }
    }
    std::fclose(f);
}

void write_vtk(const SolutionState& st, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    const Grid& g = st.phi_l.grid();
    const int npts = g.n_nodes();
    std::fprintf(f, "# vtk DataFile Version 3.0\n");
    std::fprintf(f, "filmflow quasi-stationary fields\n");
    std::fprintf(f, "ASCII\n");
    std::fprintf(f, "DATASET STRUCTURED_GRID\n");
    std::fprintf(f, "DIMENSIONS %d %d 1\n", g.nx() + 1, g.nz() + 1);
    std::fprintf(f, "POINTS %d double\n", npts);
    for (int j = 0; j <= g.nz(); ++j)
        for (int i = 0; i <= g.nx(); ++i)
            std::fprintf(f, "%.17g %.17g 0\n", g.x(i), g.z(i, j));
    std::fprintf(f, "POINT_DATA %d\n", npts);
    auto scalar = [&](const char* name, const ScalarField& s) {
        std::fprintf(f, "SCALARS %s double 1\nLOOKUP_TABLE default\n", name);
        for (int j = 0; j <= g.nz(); ++j)
            for (int i = 0; i <= g.nx(); ++i) std::fprintf(f, "%.17g\n", s.at(i, j));
    };
    auto vector = [&](const char* name, const VectorField& v) {
        std::fprintf(f, "VECTORS %s double\n", name);
        for (int j = 0; j <= g.nz(); ++j)
            for (int i = 0; i <= g.nx(); ++i)
                std::fprintf(f, "%.17g %.17g 0\n", v.x.at(i, j), v.z.at(i, j));
    };
    scalar("phi_l", st.phi_l);
    scalar("phi_b", st.phi_b);
    scalar("p", st.p);
    scalar("c", st.c);
    vector("vb", st.v_b);
    vector("vl", st.v_l);
    std::fclose(f);
}

void write_diagnostics(const SolutionState& st, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "iteration,dv_l,dphi_l,dp,max_div,max_vn,min_phi_l,max_phi_l,"
                    "min_c,max_c,incompressibility,picard_iterations\n");
    for (const IterationRecord& r : st.history) {
        std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                     r.iteration, r.dv_l, r.dphi_l, r.dp, r.max_interior_div,
                     r.max_boundary_vn, r.min_phi_l, r.max_phi_l, r.min_c, r.max_c,
                     r.incompressibility, r.picard_iterations);
    }
    std::fprintf(f, "# status=%d converged=%d aspect_ratio=%.17g grad_vl_over_amin=%.17g\n",
                 static_cast<int>(st.status), st.converged ? 1 : 0, st.aspect_ratio,
                 st.grad_vl_over_amin);
    std::fclose(f);
}

}  // namespace

Manifest write_fields(const SolutionState& st, const std::string& dir, bool csv, bool vtk,
                      const std::string& stem) {
    ensure_dir(dir);
    Manifest m;
    if (csv) {
        std::string p = dir + "/" + stem + ".csv";
        write_csv(st, p);
        m.files.push_back(finish_file(p, stem + ".csv"));
    }
    if (vtk) {
        std::string p = dir + "/" + stem + ".vtk";
        write_vtk(st, p);
        m.files.push_back(finish_file(p, stem + ".vtk"));
    }
    {
        std::string p = dir + "/" + stem + "_diagnostics.csv";
        write_diagnostics(st, p);
        m.files.push_back(finish_file(p, stem + "_diagnostics.csv"));
    }
    write_manifest(m, dir + "/manifest.txt");
    return m;
}

void write_manifest(const Manifest& m, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    for (const ManifestEntry& e : m.files) {
        std::fprintf(f, "%s %llu %016llx\n", e.name.c_str(),
                     static_cast<unsigned long long>(e.bytes),
                     static_cast<unsigned long long>(e.hash));
    }
    std::fprintf(f, "combined %016llx\n",
                 static_cast<unsigned long long>(m.combined_hash()));
    std::fclose(f);
}

}  // namespace filmflow
