#pragma once

#include "sigver/errors.hpp"
#include "sigver/raster.hpp"
#include "sigver/rng.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <unistd.h>

// expression must throw sigver::Error with the given code
#define CHECK_RAISES(code_, ...)                                                                   \
    do {                                                                                           \
        bool thrown_ = false;                                                                      \
        try {                                                                                      \
            (void)(__VA_ARGS__);                                                                   \
        } catch (const sigver::Error& e_) {                                                        \
            thrown_ = true;                                                                        \
            CHECK(e_.code() == (code_));                                                           \
        }                                                                                          \
        CHECK_MESSAGE(thrown_, "expected " #code_ " from " #__VA_ARGS__);                          \
    } while (0)

namespace testing {

// Scratch directory removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("sigver_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

// Raster whose row r holds exactly counts[r] black pixels (left-aligned).
inline sigver::BinaryRaster raster_from_profile(const std::array<int, 256>& counts) {
    sigver::BinaryRaster r;
    for (int row = 0; row < 256; ++row)
        for (int col = 0; col < counts[static_cast<std::size_t>(row)]; ++col)
            r.set(row, col, true);
    return r;
}

inline sigver::BinaryRaster random_raster(sigver::Rng& rng, double density = 0.15) {
    sigver::BinaryRaster r;
    for (std::uint8_t& b : r.bits()) b = rng.uniform() < density ? 1 : 0;
    return r;
}

// Band-structured random raster: a few horizontal zones of differing ink
// density, the shape segmentation actually sees in practice.
inline sigver::BinaryRaster random_banded_raster(sigver::Rng& rng) {
    sigver::BinaryRaster r;
    int zones = 2 + static_cast<int>(rng.below(5));
    int row = 0;
    for (int z = 0; z < zones && row < 256; ++z) {
        int zh = 10 + static_cast<int>(rng.below(80));
        double density = rng.uniform() * 0.5;
        for (int rr = row; rr < std::min(256, row + zh); ++rr)
            for (int c = 0; c < 512; ++c)
                if (rng.uniform() < density) r.set(rr, c, true);
        row += zh;
    }
    return r;
}

} // namespace testing
