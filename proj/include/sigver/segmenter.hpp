#pragma once

#include "sigver/raster.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sigver {

// Per-row black pixel counts over the 256 rows, plus their mean.
struct RowHistogram {
    std::array<int, 256> counts{};
    double mean = 0.0;
};

// Maximal group of consecutive rows on the same side of the histogram mean.
struct Run {
    int start = 0;
    int length = 0;
    bool above = false;       // counts >= mean
    long long mass = 0;       // black pixels inside the run

    int end() const { return start + length; }
};

// Three contiguous row ranges [0,cut1) [cut1,cut2) [cut2,256).
struct BandSplit {
    int cut1 = 0;
    int cut2 = 0;
    bool fallback = false;

    std::array<std::pair<int, int>, 3> bands() const {
        return {{{0, cut1}, {cut1, cut2}, {cut2, 256}}};
    }
    std::array<int, 3> heights() const {
        return {cut1, cut2 - cut1, 256 - cut2};
    }
    bool operator==(const BandSplit&) const = default;
};

RowHistogram row_histogram(const BinaryRaster& r);

// Rows tile [0,256); a row is "above" iff its count >= mean.
std::vector<Run> label_runs(const RowHistogram& h);

// Merge sub-min_height runs into their heavier neighbor, then reduce to
// exactly three bands; equal-thirds 86/85/85 fallback when fewer than
// three survive.
BandSplit segment(const BinaryRaster& r, int min_height = 35);

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb; // row-major, 3 bytes per pixel
};

// Copy of the raster with the two cut rows drawn in red.
RgbImage render_overlay(const BinaryRaster& r, const BandSplit& s);

void write_ppm(const RgbImage& img, const std::string& path);

} // namespace sigver
