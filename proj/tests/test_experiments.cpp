#include <doctest.h>

#include "gspde/cli_runner.hpp"
#include "gspde/experiments.hpp"
#include "gspde/report_io.hpp"

#include <cmath>
#include <filesystem>

using namespace gspde;

namespace {

ExperimentConfig quick_config() {
    ExperimentConfig cfg;
    cfg.base.dim = 2;
    cfg.base.galerkin_cutoff = 8;
    cfg.base.dt = 2e-3;
    cfg.base.t_end = 0.2;
    cfg.base.nu = 0.1;
    cfg.base.m_max = 3;
    cfg.base.seed = 7;
    cfg.base.noise = NoiseModel::make(NoiseModel::Kind::linear_multiplicative, 8, 0.1, 1.0, 1);
    cfg.initial.type = "taylor_green";
    cfg.levels = {2, 4, 8};
    cfg.n_paths = 6;
    cfg.M = 8.0;
    cfg.t = 0.2;
    return cfg;
}

} // namespace

TEST_CASE("uniform bound: zero noise and zero data give all-zero estimates and PASS") {
    ExperimentConfig cfg = quick_config();
    cfg.base.noise = NoiseModel::make(NoiseModel::Kind::additive, 0, 0.0, 1.0, 0);
    cfg.initial.type = "zero";
    const ExperimentReport rep = run_uniform_bound(cfg);
    CHECK(rep.pass);
    for (const ReportCell& c : rep.cells) CHECK(c.mean == 0.0);
}

TEST_CASE("uniform bound: single level passes vacuously with a warning") {
    ExperimentConfig cfg = quick_config();
    cfg.levels = {4};
    const ExperimentReport rep = run_uniform_bound(cfg);
    CHECK(rep.pass);
    bool warned = false;
    for (const auto& n : rep.notes) warned = warned || n.find("vacuous") != std::string::npos;
    CHECK(warned);
}

TEST_CASE("cauchy requires at least 3 levels") {
    ExperimentConfig cfg = quick_config();
    cfg.levels = {4, 8};
    CHECK_THROWS_AS(run_cauchy(cfg), ConfigError);
}

TEST_CASE("cauchy: smooth data gives decaying level differences and PASS") {
    ExperimentConfig cfg = quick_config();
    cfg.initial.type = "spectrum";
    cfg.initial.alpha = 3.0;
    cfg.initial.kmax = 8;
    const ExperimentReport rep = run_cauchy(cfg);
    CHECK(rep.pass);
    const auto& sup = rep.series.at("sup_uh_difference");
    REQUIRE(sup.size() == 2);
    CHECK(sup[1] < sup[0]);
    // the (m,m) pair is excluded and every reported pair is nonnegative
    for (const ReportCell& c : rep.cells) CHECK(c.mean >= 0.0);
}

TEST_CASE("equicontinuity: delta list {0} gives all zeros and PASS") {
    ExperimentConfig cfg = quick_config();
    const ExperimentReport rep = run_equicontinuity(cfg, 0.05, {0.0});
    CHECK(rep.pass);
    for (const ReportCell& c : rep.cells) CHECK(c.mean == 0.0);
}

TEST_CASE("equicontinuity: sup over levels bounds every single level cell") {
    ExperimentConfig cfg = quick_config();
    cfg.base.noise = NoiseModel::make(NoiseModel::Kind::additive, 16, 0.3, 0.6, 0);
    cfg.initial.type = "zero";
    const std::vector<double> deltas = {0.1, 0.05};
    const ExperimentReport rep = run_equicontinuity(cfg, 0.0, deltas);
    const auto& sup = rep.series.at("sup_over_levels");
    for (const ReportCell& c : rep.cells) {
        const double delta = c.labels[1].second;
        for (std::size_t d = 0; d < deltas.size(); ++d)
            if (delta == deltas[d]) CHECK(c.mean <= sup[d] + 1e-15);
    }
}

TEST_CASE("tau-infinity: calm dynamics give frequency 1 at every M") {
    ExperimentConfig cfg = quick_config();
    cfg.initial.type = "zero";
    cfg.base.noise = NoiseModel::make(NoiseModel::Kind::additive, 8, 0.05, 1.0, 0);
    cfg.R = 5.0;
    cfg.m_sweep = {1.5, 2.0, 4.0};
    const ExperimentReport rep = estimate_tau_infinity(cfg, cfg.R);
    CHECK(rep.pass);
    for (double f : rep.series.at("frequency")) CHECK(f == 1.0);
}

TEST_CASE("regularity ladder: dissipative 2D run keeps all rungs finite") {
    ExperimentConfig cfg = quick_config();
    cfg.levels = {8};
    cfg.base.m_max = 5;
    cfg.ladder_rungs = {2, 3, 4};
    cfg.n_paths = 4;
    const ExperimentReport rep = run_regularity_ladder(cfg);
    CHECK(rep.pass);
    CHECK(rep.scalars.at("ladder_violations") == 0.0);
}

TEST_CASE("reports are reproducible bit-for-bit from (config, seed)") {
    ExperimentConfig cfg = quick_config();
    cfg.initial.type = "spectrum";
    const ExperimentReport a = run_uniform_bound(cfg);
    const ExperimentReport b = run_uniform_bound(cfg);
    CHECK(report_json_text(a) == report_json_text(b));
    // different master seed changes the sampled statistics
    ExperimentConfig cfg2 = cfg;
    cfg2.base.seed = 8;
    const ExperimentReport c = run_uniform_bound(cfg2);
    CHECK(report_json_text(a) != report_json_text(c));
}

TEST_CASE("dispatch: exit codes for config errors and passing runs") {
    namespace fs = std::filesystem;
    const fs::path out = fs::temp_directory_path() / "gspde_dispatch_test";
    fs::remove_all(out);

    RunConfig rc;
    rc.experiment = quick_config();
    rc.experiment.output_dir = out.string();

    SUBCASE("cauchy with 2 levels exits with the config code") {
        rc.experiment.levels = {4, 8};
        CHECK(dispatch("cauchy", rc) == kExitConfig);
    }
    SUBCASE("unknown experiment name exits with the config code") {
        CHECK(dispatch("does-not-exist", rc) == kExitConfig);
    }
    SUBCASE("single-run with zero noise and data exits 0 and writes a zero norm CSV") {
        rc.experiment.base.noise = NoiseModel::make(NoiseModel::Kind::additive, 0, 0.0, 1.0, 0);
        rc.experiment.initial.type = "zero";
        rc.experiment.base.galerkin_cutoff = 4;
        rc.experiment.levels = {4};
        CHECK(dispatch("single-run", rc) == kExitPass);
        bool found = false;
        for (const auto& entry : fs::recursive_directory_iterator(out)) {
            if (entry.path().filename() == "norms.csv") {
                found = true;
                const std::string csv = read_file(entry.path().string());
                CHECK(csv.find("t,m0,m1,m2,m3") == 0);
                // every norm column is exactly zero
                CHECK(csv.find("0,0,0,0\n") != std::string::npos);
            }
        }
        CHECK(found);
    }
    SUBCASE("replay of a run is bitwise identical; config edits are detected") {
        rc.experiment.n_paths = 3;
        REQUIRE(dispatch("uniform-bound", rc) == kExitPass);
        fs::path manifest;
        for (const auto& entry : fs::recursive_directory_iterator(out))
            if (entry.path().filename() == "manifest.json") manifest = entry.path();
        REQUIRE_FALSE(manifest.empty());
        CHECK(replay(manifest.string()) == kExitPass);

        // edit the stored config: replay must refuse with the config code
        const fs::path cfg_path = manifest.parent_path() / "config.toml";
        std::string text = read_file(cfg_path.string());
        text += "# edited\n";
        write_file_atomic(cfg_path.string(), text);
        CHECK(replay(manifest.string()) == kExitConfig);
    }
    fs::remove_all(out);
}
