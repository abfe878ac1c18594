#include "gspde/cli_runner.hpp"

#include "gspde/report_io.hpp"
#include "gspde/snapshot.hpp"
#include "gspde/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace gspde {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kExperiments = {"uniform-bound", "cauchy",     "equicontinuity",
                                               "ladder",        "tau-infinity", "single-run"};

bool known_experiment(const std::string& name) {
    for (const auto& e : kExperiments)
        if (e == name) return true;
    return false;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("GSPDE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

struct SingleRunArtifacts {
    TrajectoryRecord record;
    FourierField initial;
};

ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& cfg,
                                SingleRunArtifacts* single) {
    if (name == "uniform-bound") return run_uniform_bound(cfg);
    if (name == "cauchy") return run_cauchy(cfg);
    if (name == "equicontinuity") return run_equicontinuity(cfg, cfg.theta, cfg.deltas);
    if (name == "ladder") return run_regularity_ladder(cfg);
    if (name == "tau-infinity") return estimate_tau_infinity(cfg, cfg.R);
    if (name == "single-run") {
        TrajectoryRecord rec;
        ExperimentReport rep = run_single(cfg, &rec);
        if (single) {
            single->initial = build_shared_initial(cfg, cfg.base.galerkin_cutoff);
            single->record = std::move(rec);
        }
        return rep;
    }
    throw ConfigError("experiment: unknown name \"" + name + "\" (expected one of uniform-bound, "
                      "cauchy, equicontinuity, ladder, tau-infinity, single-run)");
}

} // namespace

int dispatch(const std::string& experiment_name, const RunConfig& cfg) {
    const std::string started = timestamp_utc();
    if (!known_experiment(experiment_name)) {
        std::cerr << "error: unknown experiment \"" << experiment_name << "\"\n";
        return kExitConfig;
    }

    RunConfig resolved = cfg;
    resolved.experiment_name = experiment_name;
    std::string canonical, hash;
    fs::path out_dir;
    try {
        resolved.experiment.validate();
        canonical = canonical_toml(resolved);
        hash = config_hash_hex(canonical);
        out_dir = fs::path(resolved.experiment.output_dir) / experiment_name / hash;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    int exit_code = kExitRuntime;
    json outputs;
    try {
        SingleRunArtifacts single;
        ExperimentReport rep;
        try {
            rep = run_experiment(experiment_name, resolved.experiment,
                                 experiment_name == "single-run" ? &single : nullptr);
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfig;
        }
        rep.config_hash = hash;

        write_file_atomic((out_dir / "config.toml").string(), canonical);
        outputs["config"] = (out_dir / "config.toml").string();
        write_file_atomic((out_dir / "report.json").string(), report_json_text(rep));
        outputs["report"] = (out_dir / "report.json").string();
        write_file_atomic((out_dir / "tables.csv").string(), tables_csv_text(rep));
        outputs["tables"] = (out_dir / "tables.csv").string();
        if (experiment_name == "single-run") {
            write_file_atomic((out_dir / "norms.csv").string(), norms_csv_text(single.record));
            outputs["norms"] = (out_dir / "norms.csv").string();
            write_snapshot(single.initial, (out_dir / "state_initial.gspf").string());
            outputs["state_initial"] = (out_dir / "state_initial.gspf").string();
            if (field_is_finite(single.record.final_state)) {
                write_snapshot(single.record.final_state,
                               (out_dir / "state_final.gspf").string());
                outputs["state_final"] = (out_dir / "state_final.gspf").string();
            }
        }
        print_summary(std::cout, rep);
        exit_code = rep.pass ? kExitPass : kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        exit_code = kExitRuntime;
    }

    try {
        json manifest;
        manifest["config_hash"] = hash;
        manifest["tool_version"] = kVersion;
        manifest["experiment"] = experiment_name;
        manifest["started_at"] = started;
        manifest["finished_at"] = timestamp_utc();
        manifest["master_seed"] = resolved.experiment.base.seed;
        json seeds = json::array();
        for (int p = 0; p < resolved.experiment.n_paths; ++p)
            seeds.push_back(split_seed(resolved.experiment.base.seed, static_cast<std::uint64_t>(p)));
        manifest["path_seeds"] = seeds;
        manifest["outputs"] = outputs;
        manifest["exit_status"] = exit_code;
        write_file_atomic((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: manifest: " << e.what() << "\n";
        return kExitRuntime;
    }
    return exit_code;
}

int replay(const std::string& manifest_path) {
    json manifest;
    std::string stored_report;
    std::string config_path;
    try {
        manifest = json::parse(read_file(manifest_path));
        config_path = manifest.at("outputs").at("config").get<std::string>();
        stored_report = read_file(manifest.at("outputs").at("report").get<std::string>());
    } catch (const std::exception& e) {
        std::cerr << "config error: cannot load manifest: " << e.what() << "\n";
        return kExitConfig;
    }

    RunConfig rc;
    std::string hash;
    try {
        // The stored config is the canonical serialization; the manifest hash
        // covers it byte-for-byte, so any edit is a refusal.
        hash = config_hash_hex(read_file(config_path));
        rc = parse_config(config_path);
        rc.experiment_name = manifest.at("experiment").get<std::string>();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (hash != manifest.at("config_hash").get<std::string>()) {
        std::cerr << "config error: stored config hash " << hash
                  << " does not match manifest hash "
                  << manifest.at("config_hash").get<std::string>() << " (config edited?)\n";
        return kExitConfig;
    }

    try {
        ExperimentReport rep = run_experiment(rc.experiment_name, rc.experiment, nullptr);
        rep.config_hash = hash;
        const std::string recomputed = report_json_text(rep);
        if (recomputed == stored_report) {
            std::cout << "replay: identical report.json (" << hash << ")\n";
            return kExitPass;
        }
        const auto field = first_json_difference(stored_report, recomputed);
        std::cerr << "replay: drift detected, first differing field: "
                  << field.value_or("/(unknown)") << "\n";
        return kExitFail;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int run_cli(int argc, char** argv) {
    apply_thread_cap();

    CLI::App app{"gspde: spectral Galerkin simulator and experiment harness for stochastic "
                 "Navier-Stokes on the torus"};
    std::string config_path, experiment, out_dir, replay_path;
    std::uint64_t seed = 0;
    int paths = 0;
    bool have_seed = false;

    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--experiment", experiment,
                   "uniform-bound | cauchy | equicontinuity | ladder | tau-infinity | single-run");
    auto* seed_opt = app.add_option("--seed", seed, "master seed override");
    app.add_option("--paths", paths, "Monte-Carlo path count override");
    app.add_option("--out", out_dir, "output directory override");
    app.add_option("--replay", replay_path, "re-run from a manifest and compare reports");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitConfig;
    }
    have_seed = seed_opt->count() > 0;

    if (!replay_path.empty()) return replay(replay_path);

    if (config_path.empty()) {
        std::cerr << "config error: --config is required (or --replay)\n";
        return kExitConfig;
    }
    RunConfig rc;
    try {
        rc = parse_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (have_seed) rc.experiment.base.seed = seed;
    if (paths > 0) rc.experiment.n_paths = paths;
    if (!out_dir.empty()) rc.experiment.output_dir = out_dir;

    const std::string name = !experiment.empty() ? experiment : rc.experiment_name;
    if (name.empty()) {
        std::cerr << "config error: no experiment selected (use --experiment or "
                     "[experiment] name in the config)\n";
        return kExitConfig;
    }
    return dispatch(name, rc);
}

} // namespace gspde
