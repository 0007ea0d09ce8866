#include "filmflow/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "filmflow/util.hpp"

namespace filmflow {

std::vector<double> GridSpec::make_profile() const {
    std::vector<double> h(nx + 1);
    switch (h_source) {
        case HeightSource::Constant:
            for (double& v : h) v = h_const;
            break;
        case HeightSource::Cosine: {
            for (int i = 0; i <= nx; ++i) {
                double x = L * i / nx;
                h[i] = h_cos_base + h_cos_amp * std::cos(2.0 * M_PI * x / L);
            }
            break;
        }
        case HeightSource::File: {
            std::ifstream in(h_file);
            if (!in) throw ConfigError("h_file: cannot open '" + h_file + "'");
            h.clear();
            double v;
            while (in >> v) h.push_back(v);
            if (static_cast<int>(h.size()) != nx + 1) {
                throw ConfigError("h_file: expected " + std::to_string(nx + 1) +
                                  " heights, found " + std::to_string(h.size()));
            }
            break;
        }
    }
    return h;
}

Grid GridSpec::build() const {
    return Grid::build(L, make_profile(), nx, nz, lateral, h_min);
}

bool RunSpec::operator==(const RunSpec& o) const {
    auto tr_eq = [](const TractionSpec& a, const TractionSpec& b) {
        return a.kind == b.kind && a.value.x == b.value.x && a.value.z == b.value.z &&
               a.normal_offset == b.normal_offset;
    };
    return command == o.command && seed == o.seed && out_dir == o.out_dir &&
           format_csv == o.format_csv && format_vtk == o.format_vtk && grid == o.grid &&
           params.k_b == o.params.k_b && params.K_b == o.params.K_b &&
           params.k_c == o.params.k_c && params.K_c == o.params.K_c &&
           params.d == o.params.d && params.mu_b == o.params.mu_b &&
           params.Pi == o.params.Pi && params.xi_inf == o.params.xi_inf &&
           params.phi_inf == o.params.phi_inf && params.g_inf == o.params.g_inf &&
           params.c0 == o.params.c0 && params.p_b0 == o.params.p_b0 &&
           tr_eq(params.traction_top, o.params.traction_top) &&
           tr_eq(params.traction_left, o.params.traction_left) &&
           tr_eq(params.traction_right, o.params.traction_right) &&
           coupled.mode == o.coupled.mode && coupled.outer_tol == o.coupled.outer_tol &&
           coupled.outer_max_iter == o.coupled.outer_max_iter &&
           coupled.omega == o.coupled.omega &&
           coupled.initial_phi_inf == o.coupled.initial_phi_inf &&
           coupled.lin_tol == o.coupled.lin_tol &&
           coupled.picard_tol == o.coupled.picard_tol &&
           coupled.picard_max_iter == o.coupled.picard_max_iter &&
           coupled.sign_tol == o.coupled.sign_tol &&
           coupled.sign_abort_factor == o.coupled.sign_abort_factor &&
           evolve.dt == o.evolve.dt && evolve.t_final == o.evolve.t_final &&
           evolve.cfl == o.evolve.cfl && evolve.closure == o.evolve.closure &&
           evolve.h_min == o.evolve.h_min && verify == o.verify;
}

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
};

struct RawConfig {
    // key = "section.name"
    std::map<std::string, RawEntry> entries;

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    const RawEntry* find(const std::string& key) const {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

RawConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    RawConfig raw;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line;
        size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) {
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            }
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        if (section.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                              "' outside any [section]");
        }
        std::string full = section + "." + key;
        auto it = raw.entries.find(full);
        if (it != raw.entries.end()) {
            throw ConfigError("duplicate key '" + full + "' (first at line " +
                              std::to_string(it->second.line) + ", again at line " +
                              std::to_string(lineno) + ")");
        }
        raw.entries[full] = {value, lineno};
    }
    return raw;
}

double parse_double(const RawEntry& e, const std::string& key) {
    try {
        size_t pos = 0;
        double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(e.line) + ": " + key +
                          ": expected a number, got '" + e.value + "'");
    }
}

long parse_int(const RawEntry& e, const std::string& key) {
    try {
        size_t pos = 0;
        long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(e.line) + ": " + key +
                          ": expected an integer, got '" + e.value + "'");
    }
}

bool parse_bool(const RawEntry& e, const std::string& key) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    throw ConfigError("line " + std::to_string(e.line) + ": " + key +
                      ": expected true/false, got '" + e.value + "'");
}

Vec2 parse_vec2(const RawEntry& e, const std::string& key) {
    std::istringstream ss(e.value);
    Vec2 v;
    if (!(ss >> v.x >> v.z)) {
        throw ConfigError("line " + std::to_string(e.line) + ": " + key +
                          ": expected two numbers, got '" + e.value + "'");
    }
    std::string rest;
    if (ss >> rest) {
        throw ConfigError("line " + std::to_string(e.line) + ": " + key +
                          ": expected exactly two numbers");
    }
    return v;
}

const char* const kKnownKeys[] = {
    "run.command", "run.seed", "run.out_dir", "run.formats",
    "grid.nx", "grid.nz", "grid.L", "grid.lateral", "grid.h_min",
    "grid.h_const", "grid.h_cos_base", "grid.h_cos_amp", "grid.h_file",
    "params.k_b", "params.K_b", "params.k_c", "params.K_c", "params.d",
    "params.mu_b", "params.Pi", "params.xi_inf", "params.phi_inf",
    "params.g_inf", "params.c0", "params.p_b0", "params.t_ext_mode",
    "params.t_ext_top", "params.t_ext_left", "params.t_ext_right",
    "params.t_ext_normal_offset",
    "coupled.mode", "coupled.outer_tol", "coupled.outer_max_iter",
    "coupled.omega", "coupled.initial_phi_inf", "coupled.lin_tol",
    "coupled.picard_tol", "coupled.picard_max_iter", "coupled.sign_tol",
    "coupled.sign_abort_factor",
    "evolve.dt", "evolve.t_final", "evolve.cfl", "evolve.closure",
    "verify.samples", "verify.inject_sign_violation",
};

}  // namespace

RunSpec load_config(const std::string& path) {
    RawConfig raw = parse_file(path);

    for (const auto& [key, entry] : raw.entries) {
        bool known = false;
        for (const char* k : kKnownKeys) {
            if (key == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" +
                              key + "'");
        }
    }

    RunSpec spec;
    auto getd = [&](const char* key, double& dst) {
        if (const RawEntry* e = raw.find(key)) dst = parse_double(*e, key);
    };
    auto geti = [&](const char* key, int& dst) {
        if (const RawEntry* e = raw.find(key)) dst = static_cast<int>(parse_int(*e, key));
    };

    if (const RawEntry* e = raw.find("run.command")) {
        if (e->value == "solve") spec.command = Command::Solve;
        else if (e->value == "evolve") spec.command = Command::Evolve;
        else if (e->value == "mms") spec.command = Command::Mms;
        else if (e->value == "verify") spec.command = Command::Verify;
        else
            throw ConfigError("line " + std::to_string(e->line) +
                              ": run.command: expected solve|evolve|mms|verify");
    }
    if (const RawEntry* e = raw.find("run.seed")) {
        spec.seed = static_cast<std::uint64_t>(parse_int(*e, "run.seed"));
    }
    if (const RawEntry* e = raw.find("run.out_dir")) spec.out_dir = e->value;
    if (const RawEntry* e = raw.find("run.formats")) {
        spec.format_csv = spec.format_vtk = false;
        std::stringstream ss(e->value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item == "csv") spec.format_csv = true;
            else if (item == "vtk") spec.format_vtk = true;
            else
                throw ConfigError("line " + std::to_string(e->line) +
                                  ": run.formats: unknown format '" + item + "'");
        }
    }

    geti("grid.nx", spec.grid.nx);
    geti("grid.nz", spec.grid.nz);
    getd("grid.L", spec.grid.L);
    getd("grid.h_min", spec.grid.h_min);
    if (const RawEntry* e = raw.find("grid.lateral")) {
        if (e->value == "periodic") spec.grid.lateral = LateralMode::Periodic;
        else if (e->value == "traction") spec.grid.lateral = LateralMode::Traction;
        else
            throw ConfigError("line " + std::to_string(e->line) +
                              ": grid.lateral: expected periodic|traction");
    }
    {
        int sources = 0;
        if (const RawEntry* e = raw.find("grid.h_const")) {
            spec.grid.h_source = HeightSource::Constant;
            spec.grid.h_const = parse_double(*e, "grid.h_const");
            ++sources;
        }
        if (raw.has("grid.h_cos_base") || raw.has("grid.h_cos_amp")) {
            spec.grid.h_source = HeightSource::Cosine;
            getd("grid.h_cos_base", spec.grid.h_cos_base);
            getd("grid.h_cos_amp", spec.grid.h_cos_amp);
            ++sources;
        }
        if (const RawEntry* e = raw.find("grid.h_file")) {
            spec.grid.h_source = HeightSource::File;
            spec.grid.h_file = e->value;
            ++sources;
        }
        if (sources > 1) {
            throw ConfigError("grid: give exactly one of h_const, h_cos_*, h_file");
        }
    }

    getd("params.k_b", spec.params.k_b);
    getd("params.K_b", spec.params.K_b);
    getd("params.k_c", spec.params.k_c);
    getd("params.K_c", spec.params.K_c);
    getd("params.d", spec.params.d);
    getd("params.mu_b", spec.params.mu_b);
    getd("params.Pi", spec.params.Pi);
    getd("params.xi_inf", spec.params.xi_inf);
    getd("params.phi_inf", spec.params.phi_inf);
    getd("params.g_inf", spec.params.g_inf);
    getd("params.c0", spec.params.c0);
    getd("params.p_b0", spec.params.p_b0);
    if (const RawEntry* e = raw.find("params.t_ext_mode")) {
        TractionKind kind;
        if (e->value == "equilibrium") kind = TractionKind::EquilibriumNormal;
        else if (e->value == "constant") kind = TractionKind::ConstantVector;
        else
            throw ConfigError("line " + std::to_string(e->line) +
                              ": params.t_ext_mode: expected equilibrium|constant");
        spec.params.traction_top.kind = kind;
        spec.params.traction_left.kind = kind;
        spec.params.traction_right.kind = kind;
    }
    if (const RawEntry* e = raw.find("params.t_ext_top"))
        spec.params.traction_top.value = parse_vec2(*e, "params.t_ext_top");
    if (const RawEntry* e = raw.find("params.t_ext_left"))
        spec.params.traction_left.value = parse_vec2(*e, "params.t_ext_left");
    if (const RawEntry* e = raw.find("params.t_ext_right"))
        spec.params.traction_right.value = parse_vec2(*e, "params.t_ext_right");
    if (const RawEntry* e = raw.find("params.t_ext_normal_offset")) {
        double off = parse_double(*e, "params.t_ext_normal_offset");
        spec.params.traction_top.normal_offset = off;
        spec.params.traction_left.normal_offset = off;
        spec.params.traction_right.normal_offset = off;
    }

    if (const RawEntry* e = raw.find("coupled.mode")) {
        if (e->value == "frozen_g") spec.coupled.mode = GrowthMode::FrozenG;
        else if (e->value == "monod_g") spec.coupled.mode = GrowthMode::MonodG;
        else
            throw ConfigError("line " + std::to_string(e->line) +
                              ": coupled.mode: expected frozen_g|monod_g");
    }
    getd("coupled.outer_tol", spec.coupled.outer_tol);
    geti("coupled.outer_max_iter", spec.coupled.outer_max_iter);
    getd("coupled.omega", spec.coupled.omega);
    getd("coupled.initial_phi_inf", spec.coupled.initial_phi_inf);
    getd("coupled.lin_tol", spec.coupled.lin_tol);
    getd("coupled.picard_tol", spec.coupled.picard_tol);
    geti("coupled.picard_max_iter", spec.coupled.picard_max_iter);
    getd("coupled.sign_tol", spec.coupled.sign_tol);
    getd("coupled.sign_abort_factor", spec.coupled.sign_abort_factor);

    getd("evolve.dt", spec.evolve.dt);
    getd("evolve.t_final", spec.evolve.t_final);
    getd("evolve.cfl", spec.evolve.cfl);
    if (const RawEntry* e = raw.find("evolve.closure")) {
        if (e->value == "periodic") spec.evolve.closure = HeightClosure::Periodic;
        else if (e->value == "neumann_zero") spec.evolve.closure = HeightClosure::NeumannZero;
        else
            throw ConfigError("line " + std::to_string(e->line) +
                              ": evolve.closure: expected periodic|neumann_zero");
    }

    geti("verify.samples", spec.verify.samples);
    if (const RawEntry* e = raw.find("verify.inject_sign_violation")) {
        spec.verify.inject_sign_violation = parse_bool(*e, "verify.inject_sign_violation");
    }

    // Field-level constraints.
    if (spec.grid.nx < 4) throw ConfigError("grid.nx: must be at least 4");
    if (spec.grid.nz < 4) throw ConfigError("grid.nz: must be at least 4");
    if (!(spec.grid.L > 0.0)) throw ConfigError("grid.L: must be positive");
    spec.params.validate();
    spec.coupled.validate();
    spec.evolve.validate();
    if (spec.verify.samples < 1) throw ConfigError("verify.samples: must be >= 1");
    return spec;
}

void write_config(const RunSpec& spec, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ConfigError("cannot write config file '" + path + "'");
    auto g17 = [](double v) { return format_g17(v); };
    const char* cmd = spec.command == Command::Solve    ? "solve"
                      : spec.command == Command::Evolve ? "evolve"
                      : spec.command == Command::Mms    ? "mms"
                                                        : "verify";
    std::string formats;
    if (spec.format_csv) formats = "csv";
    if (spec.format_vtk) formats += formats.empty() ? "vtk" : ",vtk";

    std::fprintf(f, "[run]\ncommand = %s\nseed = %llu\nout_dir = %s\nformats = %s\n\n",
                 cmd, static_cast<unsigned long long>(spec.seed), spec.out_dir.c_str(),
                 formats.c_str());

    std::fprintf(f, "[grid]\nnx = %d\nnz = %d\nL = %s\nlateral = %s\nh_min = %s\n",
                 spec.grid.nx, spec.grid.nz, g17(spec.grid.L).c_str(),
                 spec.grid.lateral == LateralMode::Periodic ? "periodic" : "traction",
                 g17(spec.grid.h_min).c_str());
    switch (spec.grid.h_source) {
        case HeightSource::Constant:
            std::fprintf(f, "h_const = %s\n", g17(spec.grid.h_const).c_str());
            break;
        case HeightSource::Cosine:
            std::fprintf(f, "h_cos_base = %s\nh_cos_amp = %s\n",
                         g17(spec.grid.h_cos_base).c_str(), g17(spec.grid.h_cos_amp).c_str());
            break;
        case HeightSource::File:
            std::fprintf(f, "h_file = %s\n", spec.grid.h_file.c_str());
            break;
    }
    std::fprintf(f, "\n");

    std::fprintf(f, "[params]\n");
    std::fprintf(f, "k_b = %s\nK_b = %s\nk_c = %s\nK_c = %s\nd = %s\n",
                 g17(spec.params.k_b).c_str(), g17(spec.params.K_b).c_str(),
                 g17(spec.params.k_c).c_str(), g17(spec.params.K_c).c_str(),
                 g17(spec.params.d).c_str());
    std::fprintf(f, "mu_b = %s\nPi = %s\nxi_inf = %s\nphi_inf = %s\ng_inf = %s\n",
                 g17(spec.params.mu_b).c_str(), g17(spec.params.Pi).c_str(),
                 g17(spec.params.xi_inf).c_str(), g17(spec.params.phi_inf).c_str(),
                 g17(spec.params.g_inf).c_str());
    std::fprintf(f, "c0 = %s\np_b0 = %s\n", g17(spec.params.c0).c_str(),
                 g17(spec.params.p_b0).c_str());
    std::fprintf(f, "t_ext_mode = %s\n",
                 spec.params.traction_top.kind == TractionKind::EquilibriumNormal
                     ? "equilibrium"
                     : "constant");
    std::fprintf(f, "t_ext_normal_offset = %s\n",
                 g17(spec.params.traction_top.normal_offset).c_str());
    std::fprintf(f, "t_ext_top = %s %s\n", g17(spec.params.traction_top.value.x).c_str(),
                 g17(spec.params.traction_top.value.z).c_str());
    std::fprintf(f, "t_ext_left = %s %s\n", g17(spec.params.traction_left.value.x).c_str(),
                 g17(spec.params.traction_left.value.z).c_str());
    std::fprintf(f, "t_ext_right = %s %s\n\n", g17(spec.params.traction_right.value.x).c_str(),
                 g17(spec.params.traction_right.value.z).c_str());

    std::fprintf(f, "[coupled]\nmode = %s\n",
                 spec.coupled.mode == GrowthMode::FrozenG ? "frozen_g" : "monod_g");
    std::fprintf(f, "outer_tol = %s\nouter_max_iter = %d\nomega = %s\ninitial_phi_inf = %s\n",
                 g17(spec.coupled.outer_tol).c_str(), spec.coupled.outer_max_iter,
                 g17(spec.coupled.omega).c_str(), g17(spec.coupled.initial_phi_inf).c_str());
    std::fprintf(f, "lin_tol = %s\npicard_tol = %s\npicard_max_iter = %d\n",
                 g17(spec.coupled.lin_tol).c_str(), g17(spec.coupled.picard_tol).c_str(),
                 spec.coupled.picard_max_iter);
    std::fprintf(f, "sign_tol = %s\nsign_abort_factor = %s\n\n",
                 g17(spec.coupled.sign_tol).c_str(),
                 g17(spec.coupled.sign_abort_factor).c_str());

    std::fprintf(f, "[evolve]\ndt = %s\nt_final = %s\ncfl = %s\nclosure = %s\n\n",
                 g17(spec.evolve.dt).c_str(), g17(spec.evolve.t_final).c_str(),
                 g17(spec.evolve.cfl).c_str(),
                 spec.evolve.closure == HeightClosure::Periodic ? "periodic" : "neumann_zero");

    std::fprintf(f, "[verify]\nsamples = %d\ninject_sign_violation = %s\n",
                 spec.verify.samples, spec.verify.inject_sign_violation ? "true" : "false");
    std::fclose(f);
}

}  // namespace filmflow
