// Timing harness for the parallel kernels against the serial reference.
#include "sigver/features.hpp"
#include "sigver/raster.hpp"
#include "sigver/rng.hpp"
#include "sigver/wavelet.hpp"

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

sigver::Matrix random_band(sigver::Rng& rng, int rows, int cols) {
    sigver::Matrix m(rows, cols);
    for (double& v : m.data) v = rng.uniform() < 0.2 ? 1.0 : 0.0;
    return m;
}

sigver::BinaryRaster random_raster(sigver::Rng& rng) {
    sigver::BinaryRaster r;
    for (std::uint8_t& b : r.bits()) b = rng.uniform() < 0.15 ? 1 : 0;
    return r;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n");
#endif

    sigver::Rng rng(12345);

    // two-level transform on band-sized matrices
    {
        const int kBands = 120;
        std::vector<sigver::Matrix> bands;
        bands.reserve(kBands);
        for (int i = 0; i < kBands; ++i) bands.push_back(random_band(rng, 86, 512));

        auto t0 = Clock::now();
        double sink = 0.0;
        for (const auto& b : bands) sink += sigver::dwt2_two_level_serial(b).approx.at(0, 0);
        double serial_ms = ms_since(t0);

        t0 = Clock::now();
        for (const auto& b : bands) sink -= sigver::dwt2_two_level(b).approx.at(0, 0);
        double parallel_ms = ms_since(t0);
        report("dwt2 two-level (86x512)", serial_ms, parallel_ms);
        if (sink > 1e308) std::printf("?\n"); // keep the loops live
    }

    // batch featurization fan-out
    {
        const int kRasters = 40;
        std::vector<sigver::BinaryRaster> rasters;
        rasters.reserve(kRasters);
        for (int i = 0; i < kRasters; ++i) rasters.push_back(random_raster(rng));

        std::vector<sigver::FeatureRecord> out(kRasters);
        auto t0 = Clock::now();
        for (int i = 0; i < kRasters; ++i) out[static_cast<std::size_t>(i)] = sigver::extract_features(rasters[static_cast<std::size_t>(i)]);
        double serial_ms = ms_since(t0);

        t0 = Clock::now();
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < kRasters; ++i) out[static_cast<std::size_t>(i)] = sigver::extract_features(rasters[static_cast<std::size_t>(i)]);
        double parallel_ms = ms_since(t0);
        report("featurize batch (40 images)", serial_ms, parallel_ms);
    }
    return 0;
}
