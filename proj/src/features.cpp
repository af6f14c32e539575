#include "sigver/features.hpp"

#include "sigver/errors.hpp"

#include <cmath>

namespace sigver {

namespace {

struct MatStats {
    double mean = 0.0;
    double std = 0.0;
};

// population statistics, divisor N
MatStats mat_stats(const Matrix& m) {
    MatStats s;
    if (m.data.empty()) return s;
    double sum = 0.0;
    for (double v : m.data) sum += v;
    s.mean = sum / static_cast<double>(m.data.size());
    double ss = 0.0;
    for (double v : m.data) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(m.data.size()));
    return s;
}

} // namespace

SecondaryFeatures band_secondary_features(const BinaryRaster& r, int row_begin, int row_end,
                                          const FilterBank& fb) {
    int h = row_end - row_begin;
    if (h < 2) raise(Errc::input_too_short, "band height below 2 rows");

    Matrix band(h, BinaryRaster::kCols);
    long long black = 0;
    for (int row = 0; row < h; ++row)
        for (int col = 0; col < BinaryRaster::kCols; ++col)
            if (r.black(row_begin + row, col)) {
                band.at(row, col) = 1.0;
                ++black;
            }

    WaveletPyramid p = dwt2_two_level(band, fb);

    MatStats approx = mat_stats(p.approx);
    SecondaryFeatures f;
    f.mean_approx = approx.mean;
    f.std_approx = approx.std;
    f.std_h = mat_stats(p.levels[1].detail_h).std;
    f.std_v = mat_stats(p.levels[1].detail_v).std;
    f.std_d = mat_stats(p.levels[1].detail_d).std;
    f.black_count = black;
    return f;
}

OrientationResult orientation(const BinaryRaster& r) {
    long long n = 0;
    double sum_c = 0.0, sum_r = 0.0;
    for (int row = 0; row < BinaryRaster::kRows; ++row)
        for (int col = 0; col < BinaryRaster::kCols; ++col)
            if (r.black(row, col)) {
                ++n;
                sum_c += col;
                sum_r += row;
            }
    if (n < 2) raise(Errc::degenerate_cloud, "orientation needs at least 2 black pixels");

    double mc = sum_c / static_cast<double>(n);
    double mr = sum_r / static_cast<double>(n);
    double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
    for (int row = 0; row < BinaryRaster::kRows; ++row)
        for (int col = 0; col < BinaryRaster::kCols; ++col)
            if (r.black(row, col)) {
                double dc = col - mc;
                double dr = row - mr;
                mu20 += dc * dc;
                mu02 += dr * dr;
                mu11 += dc * dr;
            }

    OrientationResult res;
    res.degenerate = mu11 == 0.0 && mu20 == mu02;
    double theta = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02);
    double deg = theta * 180.0 / 3.14159265358979323846;
    if (deg <= -90.0) deg += 180.0;
    res.degrees = deg;
    return res;
}

GlobalAttributes global_attributes(const BinaryRaster& r, const BandSplit& s) {
    GlobalAttributes g;
    auto bands = s.bands();
    for (int b = 0; b < 3; ++b) {
        auto [lo, hi] = bands[static_cast<std::size_t>(b)];
        g.heights[static_cast<std::size_t>(b)] = hi - lo;
        int best = 0;
        for (int col = 0; col < BinaryRaster::kCols; ++col) {
            int cnt = 0;
            for (int row = lo; row < hi; ++row)
                if (r.black(row, col)) ++cnt;
            best = std::max(best, cnt);
        }
        g.max_vproj[static_cast<std::size_t>(b)] = best;
    }
    g.orientation_deg = orientation(r).degrees;
    return g;
}

FeatureRecord extract_features(const BinaryRaster& r) {
    FeatureRecord rec;
    BandSplit s = segment(r);
    rec.fallback_segmentation = s.fallback;
    auto bands = s.bands();
    for (int b = 0; b < 3; ++b) {
        auto [lo, hi] = bands[static_cast<std::size_t>(b)];
        rec.bands[static_cast<std::size_t>(b)] = band_secondary_features(r, lo, hi);
    }
    rec.global = global_attributes(r, s);
    return rec;
}

namespace {

MeanStd fit_one(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double var = ss / static_cast<double>(values.size());
    MeanStd ms;
    ms.mean = mean;
    if (var > 0.0) {
        ms.std = std::sqrt(var);
    } else {
        ms.std = 1.0;
        ms.zero_variance = true;
    }
    return ms;
}

} // namespace

NormStats fit_norm(const std::vector<FeatureRecord>& train) {
    if (train.size() < 2) raise(Errc::too_few_samples, "need at least 2 records to fit normalization");
    NormStats stats;
    std::vector<double> col(train.size());
    for (int b = 0; b < 3; ++b)
        for (int f = 0; f < 6; ++f) {
            for (std::size_t i = 0; i < train.size(); ++i)
                col[i] = train[i].bands[static_cast<std::size_t>(b)].as_array()[static_cast<std::size_t>(f)];
            stats.band[static_cast<std::size_t>(b)][static_cast<std::size_t>(f)] = fit_one(col);
        }
    for (int f = 0; f < 7; ++f) {
        for (std::size_t i = 0; i < train.size(); ++i)
            col[i] = train[i].global.as_array()[static_cast<std::size_t>(f)];
        stats.global[static_cast<std::size_t>(f)] = fit_one(col);
    }
    return stats;
}

NormalizedRecord apply_norm(const NormStats& stats, const FeatureRecord& rec) {
    NormalizedRecord out;
    for (int b = 0; b < 3; ++b) {
        auto raw = rec.bands[static_cast<std::size_t>(b)].as_array();
        for (int f = 0; f < 6; ++f) {
            const MeanStd& ms = stats.band[static_cast<std::size_t>(b)][static_cast<std::size_t>(f)];
            out.bands[static_cast<std::size_t>(b)][static_cast<std::size_t>(f)] =
                (raw[static_cast<std::size_t>(f)] - ms.mean) / ms.std;
        }
    }
    auto graw = rec.global.as_array();
    for (int f = 0; f < 7; ++f) {
        const MeanStd& ms = stats.global[static_cast<std::size_t>(f)];
        out.global[static_cast<std::size_t>(f)] = (graw[static_cast<std::size_t>(f)] - ms.mean) / ms.std;
    }
    return out;
}

} // namespace sigver
