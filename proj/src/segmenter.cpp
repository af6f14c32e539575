#include "sigver/segmenter.hpp"

#include "sigver/errors.hpp"

#include <algorithm>
#include <fstream>

namespace sigver {

RowHistogram row_histogram(const BinaryRaster& r) {
    RowHistogram h;
    long long total = 0;
    for (int row = 0; row < BinaryRaster::kRows; ++row) {
        int n = 0;
        for (int col = 0; col < BinaryRaster::kCols; ++col)
            if (r.black(row, col)) ++n;
        h.counts[row] = n;
        total += n;
    }
    h.mean = static_cast<double>(total) / BinaryRaster::kRows;
    return h;
}

std::vector<Run> label_runs(const RowHistogram& h) {
    std::vector<Run> runs;
    for (int row = 0; row < BinaryRaster::kRows; ++row) {
        bool above = h.counts[row] >= h.mean;
        if (runs.empty() || runs.back().above != above) {
            runs.push_back({row, 1, above, h.counts[row]});
        } else {
            runs.back().length += 1;
            runs.back().mass += h.counts[row];
        }
    }
    return runs;
}

namespace {

void merge_into(std::vector<Run>& runs, std::size_t victim, std::size_t target) {
    Run& t = runs[target];
    Run& v = runs[victim];
    t.start = std::min(t.start, v.start);
    t.length += v.length;
    t.mass += v.mass;
    runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(victim));
}

} // namespace

BandSplit segment(const BinaryRaster& r, int min_height) {
    RowHistogram h = row_histogram(r);
    std::vector<Run> runs = label_runs(h);

    // absorb short runs, shortest first (ties: topmost), into the
    // neighbor carrying more ink (ties: the preceding run)
    while (runs.size() > 1) {
        std::size_t victim = runs.size();
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (runs[i].length >= min_height) continue;
            if (victim == runs.size() || runs[i].length < runs[victim].length)
                victim = i;
        }
        if (victim == runs.size()) break;
        std::size_t target;
        if (victim == 0) {
            target = 1;
        } else if (victim + 1 == runs.size()) {
            target = victim - 1;
        } else {
            target = runs[victim + 1].mass > runs[victim - 1].mass ? victim + 1 : victim - 1;
        }
        merge_into(runs, victim, target);
    }

    // reduce to exactly three, removing the lightest adjacent pair first
    while (runs.size() > 3) {
        std::size_t best = 0;
        long long best_mass = runs[0].mass + runs[1].mass;
        for (std::size_t i = 1; i + 1 < runs.size(); ++i) {
            long long m = runs[i].mass + runs[i + 1].mass;
            if (m < best_mass) {
                best_mass = m;
                best = i;
            }
        }
        merge_into(runs, best + 1, best);
    }

    BandSplit split;
    if (runs.size() < 3) {
        split.cut1 = 86;
        split.cut2 = 171;
        split.fallback = true;
    } else {
        split.cut1 = runs[1].start;
        split.cut2 = runs[2].start;
        split.fallback = false;
    }
    return split;
}

RgbImage render_overlay(const BinaryRaster& r, const BandSplit& s) {
    RgbImage img;
    img.width = BinaryRaster::kCols;
    img.height = BinaryRaster::kRows;
    img.rgb.assign(static_cast<std::size_t>(img.width) * img.height * 3, 255);
    for (int row = 0; row < img.height; ++row) {
        for (int col = 0; col < img.width; ++col) {
            std::size_t o = (static_cast<std::size_t>(row) * img.width + col) * 3;
            if (row == s.cut1 || row == s.cut2) {
                img.rgb[o] = 255;
                img.rgb[o + 1] = 0;
                img.rgb[o + 2] = 0;
            } else if (r.black(row, col)) {
                img.rgb[o] = img.rgb[o + 1] = img.rgb[o + 2] = 0;
            }
        }
    }
    return img;
}

void write_ppm(const RgbImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, "cannot write " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
    if (!out) raise(Errc::io_error, "short write to " + path);
}

} // namespace sigver
