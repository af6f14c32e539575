#pragma once

#include "sigver/raster.hpp"
#include "sigver/segmenter.hpp"
#include "sigver/wavelet.hpp"

#include <array>
#include <vector>

namespace sigver {

// Per-band description: second-level wavelet statistics plus ink mass.
struct SecondaryFeatures {
    double mean_approx = 0.0;
    double std_approx = 0.0;
    double std_h = 0.0;
    double std_v = 0.0;
    double std_d = 0.0;
    long long black_count = 0;

    std::array<double, 6> as_array() const {
        return {mean_approx, std_approx, std_h, std_v, std_d,
                static_cast<double>(black_count)};
    }
};

// Whole-signature attributes fed to the principal classifier.
struct GlobalAttributes {
    std::array<int, 3> max_vproj{};  // per band, max column ink count
    std::array<int, 3> heights{};    // band heights, rows
    double orientation_deg = 0.0;

    std::array<double, 7> as_array() const {
        return {static_cast<double>(heights[0]), static_cast<double>(heights[1]),
                static_cast<double>(heights[2]), static_cast<double>(max_vproj[0]),
                static_cast<double>(max_vproj[1]), static_cast<double>(max_vproj[2]),
                orientation_deg};
    }
};

struct OrientationResult {
    double degrees = 0.0;  // principal axis, (-90, 90]; positive tilts down-right
    bool degenerate = false;
};

// Wavelet statistics of one band sub-image (rows [row_begin, row_end)).
// Standard deviations are population (divisor N) over second-level
// subband entries.
SecondaryFeatures band_secondary_features(const BinaryRaster& r, int row_begin, int row_end,
                                          const FilterBank& fb = sym6_bank());

// Principal-axis angle of the ink from second-order central moments.
// Throws degenerate_cloud for fewer than 2 black pixels.
OrientationResult orientation(const BinaryRaster& r);

GlobalAttributes global_attributes(const BinaryRaster& r, const BandSplit& s);

struct FeatureRecord {
    std::array<SecondaryFeatures, 3> bands;
    GlobalAttributes global;
    bool fallback_segmentation = false;
};

// segment + per-band features + globals in one step
FeatureRecord extract_features(const BinaryRaster& r);

struct MeanStd {
    double mean = 0.0;
    double std = 1.0;
    bool zero_variance = false;
};

// Z-score statistics fitted on a training set; zero-variance features keep
// std 1 so they pass through centered.
struct NormStats {
    std::array<std::array<MeanStd, 6>, 3> band{};
    std::array<MeanStd, 7> global{};
};

struct NormalizedRecord {
    std::array<std::array<double, 6>, 3> bands{};
    std::array<double, 7> global{};
};

NormStats fit_norm(const std::vector<FeatureRecord>& train); // too_few_samples if < 2
NormalizedRecord apply_norm(const NormStats& stats, const FeatureRecord& rec);

} // namespace sigver
