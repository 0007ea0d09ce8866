// Command-line front end: solve | evolve | mms | verify, driven by a flat
// key-value config file. Exit codes: 0 success, 2 config error, 3 solver
// non-convergence, 4 invariant breach.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "filmflow/config.hpp"
#include "filmflow/coupled.hpp"
#include "filmflow/height.hpp"
#include "filmflow/mms.hpp"
#include "filmflow/output.hpp"
#include "filmflow/util.hpp"
#include "filmflow/verify.hpp"

namespace ff = filmflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInvariant = 4;

int do_solve(const ff::RunSpec& spec) {
    ff::Grid grid = spec.grid.build();
    ff::SolutionState st = ff::run_fixed_point(grid, spec.params, spec.coupled);
    ff::Manifest m = ff::write_fields(st, spec.out_dir, spec.format_csv, spec.format_vtk);
    std::printf("solve: %s in %zu outer iterations; outputs in %s (manifest %016llx)\n",
                st.converged ? "converged" : "did not converge", st.history.size(),
                spec.out_dir.c_str(),
                static_cast<unsigned long long>(m.combined_hash()));
    if (st.status == ff::RunStatus::InnerError) {
        std::fprintf(stderr, "error: %s\n", st.error.c_str());
        return kExitSolver;
    }
    if (st.status == ff::RunStatus::SignAbort) {
        std::fprintf(stderr, "error: %s\n", st.error.c_str());
        return kExitInvariant;
    }
    if (!st.converged) return kExitSolver;
    return kExitOk;
}

int do_evolve(const ff::RunSpec& spec) {
    std::vector<double> h0 = spec.grid.make_profile();
    ff::EvolveResult res =
        ff::evolve(spec.params, spec.coupled, spec.evolve, spec.grid.L, spec.grid.nx,
                   spec.grid.nz, spec.grid.lateral, h0);
    ff::ensure_dir(spec.out_dir);

    ff::Manifest manifest;
    // One snapshot per step plus the height series.
    char stem[64];
    for (size_t k = 0; k < res.states.size(); ++k) {
        std::snprintf(stem, sizeof(stem), "step_%04zu", k);
        ff::Manifest m = ff::write_fields(res.states[k], spec.out_dir, spec.format_csv,
                                          spec.format_vtk, stem);
        for (auto& e : m.files) manifest.files.push_back(e);
    }
    {
        std::string path = spec.out_dir + "/heights.csv";
        std::FILE* f = std::fopen(path.c_str(), "w");
        if (!f) throw std::runtime_error("cannot write " + path);
        std::fprintf(f, "time");
        for (size_t i = 0; i < res.series.front().h.size(); ++i)
            std::fprintf(f, ",h%zu", i);
        std::fprintf(f, "\n");
        for (const ff::HeightProfile& hp : res.series) {
            std::fprintf(f, "%.17g", hp.time);
            for (double v : hp.h) std::fprintf(f, ",%.17g", v);
            std::fprintf(f, "\n");
        }
        std::fclose(f);
        ff::ManifestEntry e;
        e.name = "heights.csv";
        e.bytes = std::filesystem::file_size(path);
        e.hash = ff::hash_file(path);
        manifest.files.push_back(e);
    }
    ff::write_manifest(manifest, spec.out_dir + "/manifest.txt");
    std::printf("evolve: %zu steps, %s; outputs in %s (manifest %016llx)\n",
                res.series.size() - 1, res.completed ? "completed" : "aborted",
                spec.out_dir.c_str(),
                static_cast<unsigned long long>(manifest.combined_hash()));
    if (!res.completed) {
        std::fprintf(stderr, "error: %s\n", res.error.c_str());
        return kExitSolver;
    }
    return kExitOk;
}

int do_mms(const ff::RunSpec& spec) {
    ff::MmsReport rep = ff::run_mms();
    ff::ensure_dir(spec.out_dir);
    for (const ff::MmsStudy& s : rep.studies) {
        std::string csv = ff::mms_csv(s);
        std::ofstream out(spec.out_dir + "/mms_" + s.name + ".csv");
        out << csv;
        std::printf("-- %s (order floor %.2f): %s\n%s", s.name.c_str(), s.floor,
                    s.passed ? "pass" : "FAIL", csv.c_str());
    }
    return rep.all_passed() ? kExitOk : kExitInvariant;
}

int do_verify(const ff::RunSpec& spec) {
    ff::VerifyReport rep =
        ff::run_verify(spec.seed, spec.verify.samples, spec.verify.inject_sign_violation);
    std::string text = ff::verify_text(rep);
    std::printf("%s", text.c_str());
    ff::ensure_dir(spec.out_dir);
    std::ofstream out(spec.out_dir + "/verify_report.txt");
    out << text;
    return rep.all_passed() ? kExitOk : kExitInvariant;
}

int run(ff::Command cmd, const std::string& config_path, const std::string& out_override,
        long seed_override) {
    ff::RunSpec spec;
    try {
        spec = ff::load_config(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    }
    spec.command = cmd;
    if (!out_override.empty()) spec.out_dir = out_override;
    if (seed_override >= 0) spec.seed = static_cast<std::uint64_t>(seed_override);
    try {
        switch (spec.command) {
            case ff::Command::Solve: return do_solve(spec);
            case ff::Command::Evolve: return do_evolve(spec);
            case ff::Command::Mms: return do_mms(spec);
            case ff::Command::Verify: return do_verify(spec);
        }
    } catch (const ff::InvariantBreach& e) {
        std::fprintf(stderr, "invariant breach: %s\n", e.what());
        return kExitInvariant;
    } catch (const ff::SolveError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitSolver;
    } catch (const ff::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"filmflow: two-phase thin-film quasi-stationary solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long seed = -1;

    auto add_common = [&](CLI::App* sub, bool with_out, bool with_seed) {
        sub->add_option("--config", config_path, "config file")->required();
        if (with_out) sub->add_option("--out", out_dir, "output directory override");
        if (with_seed) sub->add_option("--seed", seed, "seed override");
    };
    CLI::App* solve = app.add_subcommand("solve", "one quasi-stationary solve");
    add_common(solve, true, false);
    CLI::App* evolve = app.add_subcommand("evolve", "free-boundary time evolution");
    add_common(evolve, true, false);
    CLI::App* mms = app.add_subcommand("mms", "manufactured-solution order study");
    add_common(mms, true, false);
    CLI::App* verify = app.add_subcommand("verify", "seeded invariant suite");
    add_common(verify, true, true);

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return run(ff::Command::Solve, config_path, out_dir, seed);
    if (evolve->parsed()) return run(ff::Command::Evolve, config_path, out_dir, seed);
    if (mms->parsed()) return run(ff::Command::Mms, config_path, out_dir, seed);
    return run(ff::Command::Verify, config_path, out_dir, seed);
}
