#include "sigver/segmenter.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <fstream>

using namespace sigver;

namespace {

// blobs at rows 10-80, 110-170, 200-250, 100 black pixels per inked row
BinaryRaster three_blob_raster() {
    std::array<int, 256> counts{};
    for (int r = 10; r <= 80; ++r) counts[static_cast<std::size_t>(r)] = 100;
    for (int r = 110; r <= 170; ++r) counts[static_cast<std::size_t>(r)] = 100;
    for (int r = 200; r <= 250; ++r) counts[static_cast<std::size_t>(r)] = 100;
    return testing::raster_from_profile(counts);
}

// profile with two sub-35 noise runs; the significant boundaries sit at
// rows 110 and 196
std::array<int, 256> fig6_profile() {
    std::array<int, 256> counts{};
    for (int r = 0; r < 100; ++r) counts[static_cast<std::size_t>(r)] = 300;
    for (int r = 100; r < 110; ++r) counts[static_cast<std::size_t>(r)] = 5;
    for (int r = 110; r < 190; ++r) counts[static_cast<std::size_t>(r)] = 290;
    for (int r = 190; r < 196; ++r) counts[static_cast<std::size_t>(r)] = 5;
    for (int r = 196; r < 256; ++r) counts[static_cast<std::size_t>(r)] = 310;
    return counts;
}

RowHistogram histogram_of(const std::array<int, 256>& counts) {
    RowHistogram h;
    long long total = 0;
    for (int r = 0; r < 256; ++r) {
        h.counts[static_cast<std::size_t>(r)] = counts[static_cast<std::size_t>(r)];
        total += counts[static_cast<std::size_t>(r)];
    }
    h.mean = static_cast<double>(total) / 256.0;
    return h;
}

bool runs_equal(const std::vector<Run>& a, const std::vector<Run>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].start != b[i].start || a[i].length != b[i].length || a[i].above != b[i].above ||
            a[i].mass != b[i].mass)
            return false;
    return true;
}

} // namespace

TEST_SUITE("segmenter") {

TEST_CASE("row histogram counts exactly") {
    BinaryRaster blank;
    RowHistogram h = row_histogram(blank);
    for (int c : h.counts) CHECK(c == 0);
    CHECK(h.mean == 0.0);

    BinaryRaster one_row;
    for (int c = 0; c < 512; ++c) one_row.set(37, c, true);
    h = row_histogram(one_row);
    CHECK(h.counts[37] == 512);
    CHECK(h.counts[36] == 0);
    CHECK(h.mean == doctest::Approx(2.0));

    BinaryRaster stripes;
    for (int r = 0; r < 256; ++r)
        for (int c = 0; c < 512; c += 2) stripes.set(r, c, true);
    h = row_histogram(stripes);
    for (int c : h.counts) CHECK(c == 256);
}

TEST_CASE("label_runs: constant histogram is a single above run") {
    std::array<int, 256> counts{};
    counts.fill(100);
    auto runs = label_runs(histogram_of(counts));
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].above);
    CHECK(runs[0].start == 0);
    CHECK(runs[0].length == 256);
}

TEST_CASE("label_runs: two-block histogram splits at the mean") {
    std::array<int, 256> counts{};
    for (int r = 100; r < 256; ++r) counts[static_cast<std::size_t>(r)] = 512;
    RowHistogram h = histogram_of(counts);
    CHECK(h.mean == doctest::Approx(312.0));
    auto runs = label_runs(h);
    REQUIRE(runs.size() == 2);
    CHECK_FALSE(runs[0].above);
    CHECK(runs[0].start == 0);
    CHECK(runs[0].length == 100);
    CHECK(runs[1].above);
    CHECK(runs[1].length == 156);
}

TEST_CASE("label_runs: alternating rows give 256 unit runs") {
    std::array<int, 256> counts{};
    for (int r = 0; r < 256; r += 2) counts[static_cast<std::size_t>(r)] = 512;
    auto runs = label_runs(histogram_of(counts));
    CHECK(runs.size() == 256);
    for (const Run& run : runs) CHECK(run.length == 1);
}

TEST_CASE("label_runs agrees with the brute-force oracle") {
    Rng rng(1234);
    for (int it = 0; it < 1000; ++it) {
        std::array<int, 256> counts{};
        for (int r = 0; r < 256; ++r) counts[static_cast<std::size_t>(r)] = static_cast<int>(rng.below(513));
        RowHistogram h = histogram_of(counts);
        CHECK(runs_equal(label_runs(h), oracle::label_runs_brute(h)));
    }
}

TEST_CASE("segment: the three-blob raster cuts at the gaps") {
    BandSplit s = segment(three_blob_raster());
    CHECK_FALSE(s.fallback);
    CHECK(s.cut1 == 110);
    CHECK(s.cut2 == 200);
}

TEST_CASE("segment: single-run rasters fall back to equal thirds") {
    BinaryRaster stripes;
    for (int r = 0; r < 256; ++r)
        for (int c = 0; c < 512; c += 2) stripes.set(r, c, true);
    BandSplit s = segment(stripes);
    CHECK(s.fallback);
    CHECK(s.cut1 == 86);
    CHECK(s.cut2 == 171);
    CHECK(s.heights() == std::array<int, 3>{86, 85, 85});
}

TEST_CASE("segment: noise runs dissolve and the significant cuts survive") {
    BinaryRaster r = testing::raster_from_profile(fig6_profile());
    BandSplit s = segment(r);
    CHECK_FALSE(s.fallback);
    CHECK(s.cut1 == 110);
    CHECK(s.cut2 == 196);
}

TEST_CASE("segment: reduction to three keeps the heavy regions") {
    // with min_height 5 every blob/gap run survives; the lightest adjacent
    // pairs merge until three remain
    BandSplit s = segment(three_blob_raster(), 5);
    CHECK_FALSE(s.fallback);
    CHECK(s.cut1 == 81);
    CHECK(s.cut2 == 171);
}

TEST_CASE("segment invariants on random rasters") {
    Rng rng(99);
    for (int it = 0; it < 200; ++it) {
        BinaryRaster r = it % 2 ? testing::random_raster(rng, rng.uniform() * 0.4)
                                : testing::random_banded_raster(rng);
        BandSplit s = segment(r);
        auto h = s.heights();
        CHECK(h[0] + h[1] + h[2] == 256);
        CHECK(h[0] >= 1);
        CHECK(0 < s.cut1);
        CHECK(s.cut1 < s.cut2);
        CHECK(s.cut2 < 256);
        if (!s.fallback) {
            CHECK(h[0] >= 35);
            CHECK(h[1] >= 35);
            CHECK(h[2] >= 35);
        }
        CHECK(segment(r) == s); // deterministic
    }
}

TEST_CASE("band masses sum to the total ink") {
    Rng rng(55);
    for (int it = 0; it < 25; ++it) {
        BinaryRaster r = testing::random_banded_raster(rng);
        BandSplit s = segment(r);
        RowHistogram h = row_histogram(r);
        long long total = 0;
        for (int c : h.counts) total += c;
        long long band_sum = 0;
        for (auto [lo, hi] : s.bands())
            for (int row = lo; row < hi; ++row) band_sum += h.counts[static_cast<std::size_t>(row)];
        CHECK(band_sum == total);
        CHECK(band_sum == r.black_count());
    }
}

TEST_CASE("segment ignores horizontal position of the ink") {
    std::array<int, 256> counts = fig6_profile();
    BinaryRaster left = testing::raster_from_profile(counts);
    BinaryRaster shifted;
    for (int r = 0; r < 256; ++r)
        for (int c = 0; c < counts[static_cast<std::size_t>(r)]; ++c)
            shifted.set(r, 150 + c, true); // max count 310 < 362 fits
    CHECK(segment(left) == segment(shifted));
}

TEST_CASE("render_overlay marks exactly the two cut rows") {
    BinaryRaster r = three_blob_raster();
    BandSplit s = segment(r);
    RgbImage img = render_overlay(r, s);
    REQUIRE(img.width == 512);
    REQUIRE(img.height == 256);
    int red_rows = 0;
    for (int row = 0; row < 256; ++row) {
        bool all_red = true;
        for (int col = 0; col < 512 && all_red; ++col) {
            std::size_t o = (static_cast<std::size_t>(row) * 512 + col) * 3;
            all_red = img.rgb[o] == 255 && img.rgb[o + 1] == 0 && img.rgb[o + 2] == 0;
        }
        if (all_red) {
            ++red_rows;
            CHECK((row == s.cut1 || row == s.cut2));
        }
    }
    CHECK(red_rows == 2);

    BinaryRaster stripes;
    for (int rr = 0; rr < 256; ++rr)
        for (int c = 0; c < 512; c += 2) stripes.set(rr, c, true);
    BandSplit fb = segment(stripes);
    RgbImage img2 = render_overlay(stripes, fb);
    auto red_at = [&](int row) {
        std::size_t o = static_cast<std::size_t>(row) * 512 * 3;
        return img2.rgb[o] == 255 && img2.rgb[o + 1] == 0 && img2.rgb[o + 2] == 0;
    };
    CHECK(red_at(86));
    CHECK(red_at(171));
}

TEST_CASE("write_ppm emits a P6 header") {
    testing::TempDir dir("ppm");
    BinaryRaster r = three_blob_raster();
    write_ppm(render_overlay(r, segment(r)), dir.file("o.ppm"));
    std::ifstream in(dir.file("o.ppm"), std::ios::binary);
    std::string magic;
    in >> magic;
    CHECK(magic == "P6");
}

} // TEST_SUITE
