// Kernel benchmark: serial reference convolution vs the OpenMP direct path
// vs the padded-FFT path, plus serial vs parallel Monte-Carlo batches.

#include "gspde/convolution.hpp"
#include "gspde/experiments.hpp"
#include "gspde/initial_fields.hpp"

#include <chrono>
#include <cstdio>
#include <string>

using namespace gspde;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_deviation(const FourierField& a, const FourierField& b) {
    const double ref = std::sqrt(sobolev_norm_sq(a, SobolevIndex{0}));
    const double d = std::sqrt(difference_norm_sq(a, b, SobolevIndex{0}));
    return ref > 0.0 ? d / ref : d;
}

void bench_convolution(int dim, int cutoff, int reps) {
    const FourierField u = random_spectrum_field(dim, cutoff, 2.0, cutoff, 1.0, 7u);

    // serial reference (truncated output + projection to match the kernels)
    auto t0 = std::chrono::steady_clock::now();
    FourierField ref;
    for (int r = 0; r < reps; ++r) {
        ref = leray_project(convolve_direct(u, u, cutoff));
    }
    const double t_ref = seconds_since(t0) / reps;

    NonlinearEvaluator direct(dim, cutoff, ConvolutionPath::direct);
    t0 = std::chrono::steady_clock::now();
    FourierField d;
    for (int r = 0; r < reps; ++r) d = direct.apply(u);
    const double t_direct = seconds_since(t0) / reps;

    NonlinearEvaluator fft(dim, cutoff, ConvolutionPath::fft);
    t0 = std::chrono::steady_clock::now();
    FourierField f;
    for (int r = 0; r < reps; ++r) f = fft.apply(u);
    const double t_fft = seconds_since(t0) / reps;

    std::printf("%dD cutoff %-3d  serial %10.4f ms  direct %10.4f ms (x%5.1f)  fft %10.4f ms "
                "(x%6.1f)  dev %.2e / %.2e\n",
                dim, cutoff, 1e3 * t_ref, 1e3 * t_direct, t_ref / t_direct, 1e3 * t_fft,
                t_ref / t_fft, rel_deviation(ref, d), rel_deviation(ref, f));
}

void bench_paths(int n_paths) {
    ExperimentConfig cfg;
    cfg.base.dim = 2;
    cfg.base.galerkin_cutoff = 16;
    cfg.base.dt = 1e-3;
    cfg.base.t_end = 0.05;
    cfg.base.nu = 0.05;
    cfg.base.m_max = 3;
    cfg.base.seed = 11;
    cfg.base.noise = NoiseModel::make(NoiseModel::Kind::linear_multiplicative, 16, 0.1, 1.0, 1);
    cfg.initial.type = "taylor_green";
    cfg.levels = {16};
    cfg.n_paths = n_paths;
    cfg.M = 8.0;
    cfg.t = cfg.base.t_end;

    const auto t0 = std::chrono::steady_clock::now();
    CoupledBatch batch = run_batch(cfg);
    const double elapsed = seconds_since(t0);
    std::printf("batch: %d paths x %zu steps at cutoff 16: %.3f s (%.2f ms/path-step)\n", n_paths,
                batch.paths[0].records[0].steps() - 1, elapsed,
                1e3 * elapsed / n_paths / double(batch.paths[0].records[0].steps() - 1));
}

} // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    std::printf("nonlinear-term kernels (per evaluation):\n");
    bench_convolution(2, 4, quick ? 3 : 10);
    bench_convolution(2, 8, quick ? 3 : 10);
    bench_convolution(2, 16, quick ? 2 : 5);
    if (!quick) {
        bench_convolution(2, 32, 2);
        bench_convolution(3, 4, 3);
        bench_convolution(3, 8, 2);
    }
    std::printf("\nMonte-Carlo batch (path-parallel):\n");
    bench_paths(quick ? 4 : 16);
    return 0;
}
