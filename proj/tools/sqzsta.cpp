#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sqz/errors.hpp"
#include "sqz/pipeline.hpp"
#include "sqz/types.hpp"

namespace {

constexpr const char* kTool = "sqzsta";
constexpr const char* kVersion = "0.1.0";

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("SQZ_STA_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

sqz::ArtifactWriter make_writer(const std::string& out_dir,
                                const std::string& hash, std::uint64_t seed) {
    sqz::ArtifactWriter w;
    w.dir = out_dir + "/" + hash.substr(0, 16);
    w.tool = kTool;
    w.version = kVersion;
    w.spec_hash = hash;
    w.seed = seed;
    return w;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    CLI::App app{
        "designs shortcut protocols that drive a thermal oscillator into a "
        "squeezed thermal state, and verifies them by forward simulation"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kTool) + " " + kVersion);

    std::string spec_path, controls_path, out_dir = "out";
    std::uint64_t seed = 0;
    int fock_dim = -1, grid_points = -1;
    bool quiet = false;
    auto* opt_spec =
        app.add_option("--spec", spec_path, "protocol spec JSON file");
    app.add_option("--out-dir", out_dir,
                   "artifact root; runs write into <out-dir>/<hash prefix>");
    auto* opt_seed = app.add_option("--seed", seed, "seed override");
    auto* opt_dim =
        app.add_option("--fock-dim", fock_dim, "ladder dimension override");
    auto* opt_grid = app.add_option("--grid-points", grid_points,
                                    "design grid override");
    app.add_flag("--quiet", quiet, "suppress status lines");

    auto* cmd_design =
        app.add_subcommand("design", "reverse-engineer the control curves");
    cmd_design->needs(opt_spec);

    auto* cmd_verify = app.add_subcommand(
        "verify", "simulate a controls file against the spec's target");
    cmd_verify->needs(opt_spec);
    cmd_verify->add_option("--controls", controls_path,
                           "controls CSV (default: the design artifact)");

    int map_points = 21;
    double map_lo = 0.5, map_hi = 3.0;
    auto* cmd_map = app.add_subcommand(
        "variance-map", "closed-form dB map over endpoint ratios");
    cmd_map->add_option("--points", map_points, "points per axis");
    cmd_map->add_option("--lo", map_lo, "smallest endpoint ratio");
    cmd_map->add_option("--hi", map_hi, "largest endpoint ratio");

    std::vector<double> times;
    int wigner_points = 81;
    auto* cmd_wigner = app.add_subcommand(
        "wigner", "phase-space snapshots along the designed protocol");
    cmd_wigner->needs(opt_spec);
    cmd_wigner->add_option("--times", times, "snapshot times within [0, tf]")
        ->required();
    cmd_wigner->add_option("--wigner-points", wigner_points,
                           "grid points per axis");

    double ion_rf = 0.35, ion_tf = 4.0 * sqz::kPi;
    std::vector<double> ion_deltas = {10.0, 20.0, 50.0, 100.0};
    auto* cmd_ion = app.add_subcommand(
        "full-ion-check",
        "two-level ion model vs the eliminated drive across detunings");
    cmd_ion->add_option("--r-f", ion_rf, "final squeezing of the test ramp");
    cmd_ion->add_option("--tf", ion_tf, "ramp time in 1/omega0 units");
    cmd_ion->add_option("--delta", ion_deltas, "detunings in omega0 units");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    const auto say = [&](const std::string& line) {
        if (!quiet) std::cout << line << "\n";
    };

    try {
        if (*cmd_map) {
            const std::string canon =
                "variance-map points=" + std::to_string(map_points) +
                " lo=" + sqz::format_double(map_lo) +
                " hi=" + sqz::format_double(map_hi);
            const auto w =
                make_writer(out_dir, sqz::sha256_hex(canon), seed);
            sqz::run_variance_map(map_points, map_lo, map_hi, w);
            say("variance-map: wrote " + w.path_of("variance_map.csv"));
            return 0;
        }
        if (*cmd_ion) {
            const int dim = fock_dim > 0 ? fock_dim : 16;
            std::string canon = "full-ion-check r_f=" +
                                sqz::format_double(ion_rf) +
                                " tf=" + sqz::format_double(ion_tf) +
                                " fock_dim=" + std::to_string(dim) + " deltas=";
            for (size_t i = 0; i < ion_deltas.size(); ++i)
                canon += (i ? "," : "") + sqz::format_double(ion_deltas[i]);
            const auto w =
                make_writer(out_dir, sqz::sha256_hex(canon), seed);
            const auto rows =
                sqz::run_ion_check(ion_deltas, ion_rf, ion_tf, dim, w);
            for (const auto& r : rows)
                say("full-ion-check: Delta=" + sqz::format_double(r.Delta) +
                    " fidelity=" + sqz::format_double(r.fidelity) +
                    " max_excited=" + sqz::format_double(r.max_excited));
            say("full-ion-check: wrote " + w.path_of("ion_check.csv"));
            return 0;
        }

        // the remaining subcommands run off a spec file
        const std::string spec_text = sqz::read_file(spec_path);
        sqz::ProtocolSpec spec = sqz::ProtocolSpec::from_json_text(spec_text);
        if (opt_seed->count()) spec.seed = seed;
        if (opt_dim->count()) {
            if (fock_dim < 0)
                throw sqz::InputError("--fock-dim must be >= 0");
            spec.fock_dim = fock_dim;
        }
        if (opt_grid->count()) spec.grid_points = grid_points;
        spec.validate();
        const auto w =
            make_writer(out_dir, sqz::sha256_hex(spec_text), spec.seed);

        if (*cmd_design) {
            const auto art = sqz::run_design(spec, w);
            for (const auto& f : art.files)
                say("design: wrote " + w.path_of(f));
            if (art.non_lindblad)
                say("design: note: the dissipation rate dips negative; the "
                    "drive is non-Lindblad on that segment");
            if (art.inverted_trap)
                say("design: note: the trap is transiently inverted "
                    "(omega_c^2 < 0)");
            return 0;
        }
        if (*cmd_wigner) {
            sqz::run_wigner(spec, times, wigner_points, w);
            say("wigner: wrote " + w.path_of("wigner.json"));
            return 0;
        }
        if (*cmd_verify) {
            const std::string cpath =
                controls_path.empty() ? w.path_of("controls.csv")
                                      : controls_path;
            const auto table = sqz::ControlTable::read_csv(cpath);
            const auto rep = sqz::run_verify(spec, table, w);
            say("verify: fidelity " + sqz::format_double(rep.final_fidelity) +
                " (bar " + sqz::format_double(rep.fidelity_min) + ")");
            say("verify: wrote " + w.path_of("verify.json"));
            if (!rep.pass) {
                std::cerr << "verify: FAIL: " << rep.failure_reason << "\n";
                return 3;
            }
            say("verify: PASS");
            return 0;
        }
        throw sqz::InternalConsistencyError("no subcommand dispatched");
    } catch (const sqz::InputError& e) {
        std::cerr << kTool << ": input error: " << e.what() << "\n";
        return 4;
    } catch (const sqz::DesignError& e) {
        std::cerr << kTool << ": design error: " << e.what() << "\n";
        return 2;
    } catch (const sqz::Error& e) {
        std::cerr << kTool << ": error: " << e.what() << "\n";
        return 1;
    }
}
