#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sigver {

// Grayscale image as decoded from disk, intensities 0..255 row-major.
struct GrayRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples;

    std::uint8_t at(int r, int c) const { return samples[static_cast<std::size_t>(r) * width + c]; }
    std::uint8_t& at(int r, int c) { return samples[static_cast<std::size_t>(r) * width + c]; }
};

// Variable-size black/white grid, 1 = black (ink), 0 = white.
struct BwGrid {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    std::uint8_t at(int r, int c) const { return bits[static_cast<std::size_t>(r) * width + c]; }
    std::uint8_t& at(int r, int c) { return bits[static_cast<std::size_t>(r) * width + c]; }
};

// The normalized working geometry: every signature becomes 256 rows by
// 512 columns of black/white pixels before anything downstream sees it.
class BinaryRaster {
public:
    static constexpr int kRows = 256;
    static constexpr int kCols = 512;

    BinaryRaster() : bits_(static_cast<std::size_t>(kRows) * kCols, 0) {}

    bool black(int r, int c) const { return bits_[static_cast<std::size_t>(r) * kCols + c] != 0; }
    void set(int r, int c, bool black) { bits_[static_cast<std::size_t>(r) * kCols + c] = black ? 1 : 0; }

    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::vector<std::uint8_t>& bits() { return bits_; }

    long long black_count() const;

    bool operator==(const BinaryRaster&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

// Decodes PGM (P2/P5, maxval <= 255) or 8-bit grayscale PNG. Color inputs
// are rejected, never converted.
GrayRaster load_image(const std::string& path);

// Smallest threshold maximizing between-class variance; 128 when the image
// is uniform. A pixel is black iff intensity < threshold.
int otsu_threshold(const GrayRaster& g);

BwGrid binarize(const GrayRaster& g, std::optional<int> threshold = std::nullopt);

// Crop to the tight bounding box of black pixels, then nearest-neighbor
// resample onto the 256x512 frame. Throws blank_image when no ink exists.
BinaryRaster normalize(const BwGrid& bw);

// P5 output; ink is written as 0, background as 255.
void write_pgm(const BinaryRaster& r, const std::string& path);

} // namespace sigver
