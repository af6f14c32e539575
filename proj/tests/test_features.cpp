#include "sigver/features.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace sigver;

namespace {

FeatureRecord random_record(Rng& rng) {
    FeatureRecord rec;
    for (auto& b : rec.bands) {
        b.mean_approx = rng.uniform(0.0, 4.0);
        b.std_approx = rng.uniform(0.0, 2.0);
        b.std_h = rng.uniform(0.0, 1.0);
        b.std_v = rng.uniform(0.0, 1.0);
        b.std_d = rng.uniform(0.0, 1.0);
        b.black_count = static_cast<long long>(rng.below(20000));
    }
    rec.global.max_vproj = {static_cast<int>(rng.below(87)), static_cast<int>(rng.below(86)),
                            static_cast<int>(rng.below(86))};
    rec.global.heights = {86, 85, 85};
    rec.global.orientation_deg = rng.uniform(-90.0, 90.0);
    return rec;
}

} // namespace

TEST_SUITE("features") {

TEST_CASE("an all-white band yields the zero vector") {
    BinaryRaster r;
    SecondaryFeatures f = band_secondary_features(r, 0, 86);
    CHECK(f.mean_approx == 0.0);
    CHECK(f.std_approx == 0.0);
    CHECK(f.std_h == 0.0);
    CHECK(f.std_v == 0.0);
    CHECK(f.std_d == 0.0);
    CHECK(f.black_count == 0);
}

TEST_CASE("an all-black band approximates to 4.0 with tiny deviations") {
    BinaryRaster r;
    for (int row = 0; row < 40; ++row)
        for (int col = 0; col < 512; ++col) r.set(row, col, true);
    SecondaryFeatures f = band_secondary_features(r, 0, 40);
    CHECK(std::abs(f.mean_approx - 4.0) < 1e-6);
    CHECK(f.std_approx < 1e-6);
    CHECK(f.std_h < 1e-6);
    CHECK(f.std_v < 1e-6);
    CHECK(f.std_d < 1e-6);
    CHECK(f.black_count == 512LL * 40);
}

TEST_CASE("features match the straight-line reference on a pseudo-random band") {
    Rng rng(42);
    BinaryRaster r = testing::random_raster(rng, 0.25);
    SecondaryFeatures lib = band_secondary_features(r, 100, 140);
    oracle::RefBandFeatures ref = oracle::ref_band_features(r, 100, 140);
    CHECK(std::abs(lib.mean_approx - ref.mean_approx) < 1e-9);
    CHECK(std::abs(lib.std_approx - ref.std_approx) < 1e-9);
    CHECK(std::abs(lib.std_h - ref.std_h) < 1e-9);
    CHECK(std::abs(lib.std_v - ref.std_v) < 1e-9);
    CHECK(std::abs(lib.std_d - ref.std_d) < 1e-9);
    CHECK(lib.black_count == ref.black_count);
}

TEST_CASE("bands shorter than 2 rows are rejected") {
    BinaryRaster r;
    r.set(0, 0, true);
    CHECK_RAISES(Errc::input_too_short, band_secondary_features(r, 0, 1));
}

TEST_CASE("orientation of a horizontal line is 0 degrees") {
    BinaryRaster r;
    for (int col = 100; col <= 400; ++col) r.set(128, col, true);
    OrientationResult o = orientation(r);
    CHECK(std::abs(o.degrees) < 1e-9);
    CHECK_FALSE(o.degenerate);
}

TEST_CASE("orientation of the main diagonal is 45 degrees") {
    BinaryRaster r;
    for (int i = 0; i < 256; ++i) r.set(i, i, true);
    OrientationResult o = orientation(r);
    CHECK(std::abs(o.degrees - 45.0) < 1e-6);
}

TEST_CASE("orientation of a vertical stroke is 90 degrees") {
    BinaryRaster r;
    for (int row = 10; row < 200; ++row) r.set(row, 77, true);
    OrientationResult o = orientation(r);
    CHECK(o.degrees == doctest::Approx(90.0));
    CHECK(o.degrees <= 90.0);
    CHECK(o.degrees > -90.0);
}

TEST_CASE("a circularly symmetric disk reports the degenerate convention") {
    BinaryRaster r;
    for (int row = 0; row < 256; ++row)
        for (int col = 0; col < 512; ++col) {
            int dr = row - 128, dc = col - 256;
            if (dr * dr + dc * dc <= 40 * 40) r.set(row, col, true);
        }
    OrientationResult o = orientation(r);
    CHECK(o.degenerate);
    CHECK(o.degrees == 0.0);
}

TEST_CASE("orientation requires at least two black pixels") {
    BinaryRaster blank;
    CHECK_RAISES(Errc::degenerate_cloud, orientation(blank));
    BinaryRaster one;
    one.set(5, 5, true);
    CHECK_RAISES(Errc::degenerate_cloud, orientation(one));
}

TEST_CASE("orientation is translation invariant") {
    BinaryRaster a, b;
    for (int i = 0; i < 60; ++i) {
        a.set(40 + i, 60 + 2 * i, true);
        b.set(140 + i, 260 + 2 * i, true);
    }
    CHECK(orientation(a).degrees == doctest::Approx(orientation(b).degrees).epsilon(1e-9));
}

TEST_CASE("global attributes of an all-black raster under the fallback split") {
    BinaryRaster r;
    for (int row = 0; row < 256; ++row)
        for (int col = 0; col < 512; ++col) r.set(row, col, true);
    BandSplit s = segment(r); // constant histogram -> fallback
    REQUIRE(s.fallback);
    GlobalAttributes g = global_attributes(r, s);
    CHECK(g.max_vproj == std::array<int, 3>{86, 85, 85});
    CHECK(g.heights == std::array<int, 3>{86, 85, 85});
}

TEST_CASE("a single black column projects its band heights") {
    BinaryRaster r;
    for (int row = 0; row < 256; ++row) r.set(row, 300, true);
    BandSplit s = segment(r);
    REQUIRE(s.fallback);
    GlobalAttributes g = global_attributes(r, s);
    CHECK(g.max_vproj == std::array<int, 3>{86, 85, 85});
    CHECK(g.orientation_deg == doctest::Approx(90.0));
}

TEST_CASE("global attributes propagate the degenerate-cloud error") {
    BinaryRaster blank;
    BandSplit s;
    s.cut1 = 86;
    s.cut2 = 171;
    s.fallback = true;
    CHECK_RAISES(Errc::degenerate_cloud, global_attributes(blank, s));
}

TEST_CASE("band black counts add up to the raster total") {
    Rng rng(31);
    for (int it = 0; it < 25; ++it) {
        BinaryRaster r = testing::random_banded_raster(rng);
        if (r.black_count() < 2) continue;
        FeatureRecord rec = extract_features(r);
        long long sum = 0;
        for (const auto& b : rec.bands) sum += b.black_count;
        CHECK(sum == r.black_count());
        CHECK(rec.global.heights[0] + rec.global.heights[1] + rec.global.heights[2] == 256);
        for (int b = 0; b < 3; ++b)
            CHECK(rec.global.max_vproj[static_cast<std::size_t>(b)] <=
                  rec.global.heights[static_cast<std::size_t>(b)]);
        CHECK(rec.bands[0].as_array().size() == 6);
        CHECK(rec.global.as_array().size() == 7);
    }
}

TEST_CASE("feature extraction is deterministic") {
    Rng rng(77);
    BinaryRaster r = testing::random_banded_raster(rng);
    if (r.black_count() < 2) return;
    FeatureRecord a = extract_features(r);
    FeatureRecord b = extract_features(r);
    CHECK(a.bands[0].as_array() == b.bands[0].as_array());
    CHECK(a.bands[1].as_array() == b.bands[1].as_array());
    CHECK(a.bands[2].as_array() == b.bands[2].as_array());
    CHECK(a.global.as_array() == b.global.as_array());
}

TEST_CASE("fit_norm flags identical training sets and centers them") {
    Rng rng(3);
    FeatureRecord rec = random_record(rng);
    NormStats stats = fit_norm({rec, rec});
    for (const auto& band : stats.band)
        for (const MeanStd& ms : band) {
            CHECK(ms.zero_variance);
            CHECK(ms.std == 1.0);
        }
    NormalizedRecord z = apply_norm(stats, rec);
    for (const auto& band : z.bands)
        for (double v : band) CHECK(v == 0.0);
    for (double v : z.global) CHECK(v == 0.0);
}

TEST_CASE("a two-point feature z-scores to -1 and +1") {
    Rng rng(4);
    FeatureRecord lo = random_record(rng);
    FeatureRecord hi = lo;
    lo.bands[0].mean_approx = 0.0;
    hi.bands[0].mean_approx = 2.0;
    NormStats stats = fit_norm({lo, hi});
    CHECK(stats.band[0][0].mean == doctest::Approx(1.0));
    CHECK(stats.band[0][0].std == doctest::Approx(1.0));
    CHECK(apply_norm(stats, lo).bands[0][0] == doctest::Approx(-1.0));
    CHECK(apply_norm(stats, hi).bands[0][0] == doctest::Approx(1.0));
}

TEST_CASE("fit_norm needs two records") {
    Rng rng(5);
    CHECK_RAISES(Errc::too_few_samples, fit_norm({random_record(rng)}));
}

TEST_CASE("normalized features have zero mean and unit spread") {
    Rng rng(6);
    std::vector<FeatureRecord> train;
    for (int i = 0; i < 100; ++i) train.push_back(random_record(rng));
    NormStats stats = fit_norm(train);

    for (int b = 0; b < 3; ++b)
        for (int f = 0; f < 6; ++f) {
            double mean = 0.0;
            std::vector<double> vals;
            for (const FeatureRecord& rec : train) {
                double v = apply_norm(stats, rec).bands[static_cast<std::size_t>(b)][static_cast<std::size_t>(f)];
                vals.push_back(v);
                mean += v;
            }
            mean /= 100.0;
            double ss = 0.0;
            for (double v : vals) ss += (v - mean) * (v - mean);
            double sd = std::sqrt(ss / 100.0);
            CHECK(std::abs(mean) < 1e-9);
            CHECK(std::abs(sd - 1.0) < 1e-9);
        }
}

} // TEST_SUITE
