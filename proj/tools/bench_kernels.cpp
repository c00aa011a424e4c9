// Wall-clock comparison of the serial reference kernels against their OpenMP
// twins, plus the coarse-grained loops (forest fit, noise generation) under
// both execution modes. Also cross-checks that the outputs stay bitwise
// identical while timing.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "augdl/augment.hpp"
#include "augdl/datagen.hpp"
#include "augdl/forest.hpp"
#include "augdl/kernels.hpp"
#include "augdl/parallel.hpp"
#include "augdl/rng.hpp"

namespace {

using augdl::parallel::ExecMode;

double time_ms(const std::function<void()>& fn, int repeats) {
    fn();  // warm-up
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
    std::vector<double> values(n);
    augdl::Rng rng = augdl::make_rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (double& v : values) v = uniform(rng);
    return values;
}

void report(const std::string& name, double serial_ms, double omp_ms, bool identical) {
    std::printf("%-24s %10.2f ms %10.2f ms %8.2fx   %s\n", name.c_str(), serial_ms, omp_ms, serial_ms / omp_ms,
                identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("%-24s %13s %13s %9s   %s\n", "kernel", "serial", "openmp", "speedup", "outputs");
    std::printf("threads available: %d\n\n", augdl::parallel::max_threads());

    {
        const std::size_t m = 384, k = 384, n = 384;
        const std::vector<double> a = random_values(m * k, 1);
        const std::vector<double> b = random_values(k * n, 2);
        std::vector<double> c_serial(m * n), c_omp(m * n);
        const double t_serial =
            time_ms([&] { augdl::kernels::matmul_serial(a.data(), b.data(), c_serial.data(), m, k, n); }, 5);
        const double t_omp =
            time_ms([&] { augdl::kernels::matmul_omp(a.data(), b.data(), c_omp.data(), m, k, n); }, 5);
        report("matmul 384^3", t_serial, t_omp, c_serial == c_omp);
    }
    {
        const std::size_t m = 384, k = 384, n = 384;
        const std::vector<double> a = random_values(k * m, 3);
        const std::vector<double> b = random_values(k * n, 4);
        std::vector<double> c_serial(m * n), c_omp(m * n);
        const double t_serial =
            time_ms([&] { augdl::kernels::matmul_at_b_serial(a.data(), b.data(), c_serial.data(), m, k, n); }, 5);
        const double t_omp =
            time_ms([&] { augdl::kernels::matmul_at_b_omp(a.data(), b.data(), c_omp.data(), m, k, n); }, 5);
        report("matmul_at_b 384^3", t_serial, t_omp, c_serial == c_omp);
    }
    {
        const std::size_t m = 384, k = 384, n = 384;
        const std::vector<double> a = random_values(m * k, 5);
        const std::vector<double> b = random_values(n * k, 6);
        std::vector<double> c_serial(m * n), c_omp(m * n);
        const double t_serial =
            time_ms([&] { augdl::kernels::matmul_a_bt_serial(a.data(), b.data(), c_serial.data(), m, k, n); }, 5);
        const double t_omp =
            time_ms([&] { augdl::kernels::matmul_a_bt_omp(a.data(), b.data(), c_omp.data(), m, k, n); }, 5);
        report("matmul_a_bt 384^3", t_serial, t_omp, c_serial == c_omp);
    }
    {
        const std::size_t n_q = 2000, n_r = 2000, dim = 16;
        const std::vector<double> queries = random_values(n_q * dim, 7);
        const std::vector<double> refs = random_values(n_r * dim, 8);
        std::vector<double> d_serial(n_q * n_r), d_omp(n_q * n_r);
        const double t_serial = time_ms(
            [&] { augdl::kernels::pairwise_sqdist_serial(queries.data(), n_q, refs.data(), n_r, dim, d_serial.data()); },
            5);
        const double t_omp = time_ms(
            [&] { augdl::kernels::pairwise_sqdist_omp(queries.data(), n_q, refs.data(), n_r, dim, d_omp.data()); }, 5);
        report("pairwise 2000x2000x16", t_serial, t_omp, d_serial == d_omp);
    }

    augdl::GeneratorSpec gen;
    gen.kind = augdl::GeneratorSpec::Kind::friedman1;
    gen.n_rows = 4000;
    gen.noise_sd = 1.0;
    gen.seed = 99;
    const augdl::Dataset data = augdl::generate(gen);

    {
        augdl::ForestParams params;
        params.n_trees = 40;
        augdl::RegressionForest serial_forest, omp_forest;
        augdl::parallel::set_mode(ExecMode::serial);
        const double t_serial = time_ms([&] { serial_forest.fit(data.features, data.target, params, 7); }, 2);
        augdl::parallel::set_mode(ExecMode::openmp);
        const double t_omp = time_ms([&] { omp_forest.fit(data.features, data.target, params, 7); }, 2);
        const bool same = serial_forest.predict(data.features) == omp_forest.predict(data.features);
        report("forest fit 40x4000", t_serial, t_omp, same);
    }
    {
        const augdl::ColumnStats stats = augdl::compute_column_stats(data);
        augdl::AugmentationConfig config;
        config.strategy = augdl::Strategy::naive_noise;
        config.volume = 300000;
        config.noise_fraction = 0.05;
        config.seed = 11;
        augdl::SyntheticSet serial_set, omp_set;
        augdl::parallel::set_mode(ExecMode::serial);
        const double t_serial = time_ms([&] { serial_set = augdl::generate_naive_noise(data, stats, config); }, 3);
        augdl::parallel::set_mode(ExecMode::openmp);
        const double t_omp = time_ms([&] { omp_set = augdl::generate_naive_noise(data, stats, config); }, 3);
        report("noise gen 300k rows", t_serial, t_omp, serial_set.features == omp_set.features);
    }
    return 0;
}
