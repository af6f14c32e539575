#include "sigver/raster.hpp"

#include "sigver/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <png.h>

namespace sigver {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::file_not_found: return "FileNotFound";
    case Errc::unsupported_format: return "UnsupportedFormat";
    case Errc::corrupt_image: return "CorruptImage";
    case Errc::blank_image: return "BlankImage";
    case Errc::input_too_short: return "InputTooShort";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::degenerate_cloud: return "DegenerateCloud";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::non_finite_loss: return "NonFiniteLoss";
    case Errc::parse_error: return "ParseError";
    case Errc::unknown_kind: return "UnknownKind";
    case Errc::duplicate_path: return "DuplicatePath";
    case Errc::io_error: return "IoError";
    case Errc::schema_violation: return "SchemaViolation";
    case Errc::version_mismatch: return "VersionMismatch";
    case Errc::empty_category: return "EmptyCategory";
    }
    return "Error";
}

long long BinaryRaster::black_count() const {
    long long n = 0;
    for (std::uint8_t b : bits_) n += b;
    return n;
}

namespace {

// ---- PGM ------------------------------------------------------------

// next token skipping whitespace and '#' comments
bool pgm_token(std::istream& in, std::string& tok) {
    tok.clear();
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {}
            continue;
        }
        if (!std::isspace(ch)) break;
    }
    if (ch == EOF) return false;
    do {
        tok.push_back(static_cast<char>(ch));
        ch = in.get();
    } while (ch != EOF && !std::isspace(ch) && ch != '#');
    if (ch == '#') in.unget();
    return true;
}

int pgm_int(std::istream& in, const std::string& path) {
    std::string tok;
    if (!pgm_token(in, tok)) raise(Errc::corrupt_image, "truncated PGM header in " + path);
    int value = 0;
    for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            raise(Errc::corrupt_image, "bad PGM header token '" + tok + "' in " + path);
        value = value * 10 + (c - '0');
        if (value > 0x7fffff) raise(Errc::corrupt_image, "PGM header value out of range in " + path);
    }
    return value;
}

GrayRaster load_pgm(std::ifstream& in, bool ascii, const std::string& path) {
    GrayRaster g;
    g.width = pgm_int(in, path);
    g.height = pgm_int(in, path);
    int maxval = pgm_int(in, path);
    if (g.width < 1 || g.height < 1)
        raise(Errc::corrupt_image, "degenerate PGM dimensions in " + path);
    if (maxval < 1 || maxval > 255)
        raise(Errc::unsupported_format, "PGM maxval " + std::to_string(maxval) + " not supported: " + path);
    std::size_t n = static_cast<std::size_t>(g.width) * g.height;
    g.samples.resize(n);
    if (ascii) {
        for (std::size_t i = 0; i < n; ++i) {
            int v = pgm_int(in, path);
            if (v > maxval) raise(Errc::corrupt_image, "PGM sample above maxval in " + path);
            g.samples[i] = static_cast<std::uint8_t>(v);
        }
    } else {
        // exactly one whitespace byte separates header from raster data
        in.read(reinterpret_cast<char*>(g.samples.data()), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            raise(Errc::corrupt_image, "truncated PGM raster in " + path);
        for (std::size_t i = 0; i < n; ++i)
            if (g.samples[i] > maxval)
                raise(Errc::corrupt_image, "PGM sample above maxval in " + path);
    }
    return g;
}

// ---- PNG ------------------------------------------------------------

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

GrayRaster load_png(const std::string& path) {
    PngReader rd;
    rd.fp = std::fopen(path.c_str(), "rb");
    if (!rd.fp) raise(Errc::io_error, "cannot open " + path);
    rd.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!rd.png) raise(Errc::io_error, "libpng init failed");
    rd.info = png_create_info_struct(rd.png);
    if (!rd.info) raise(Errc::io_error, "libpng init failed");
    if (setjmp(png_jmpbuf(rd.png)))
        raise(Errc::corrupt_image, "invalid PNG stream: " + path);
    png_init_io(rd.png, rd.fp);
    png_read_info(rd.png, rd.info);

    png_uint_32 w = png_get_image_width(rd.png, rd.info);
    png_uint_32 h = png_get_image_height(rd.png, rd.info);
    int color = png_get_color_type(rd.png, rd.info);
    int depth = png_get_bit_depth(rd.png, rd.info);
    if (color != PNG_COLOR_TYPE_GRAY || depth != 8)
        raise(Errc::unsupported_format,
              "only 8-bit grayscale PNG is accepted (color inputs are rejected): " + path);
    if (w < 1 || h < 1 || w > 1u << 20 || h > 1u << 20)
        raise(Errc::corrupt_image, "degenerate PNG dimensions in " + path);

    GrayRaster g;
    g.width = static_cast<int>(w);
    g.height = static_cast<int>(h);
    g.samples.resize(static_cast<std::size_t>(w) * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 r = 0; r < h; ++r)
        rows[r] = g.samples.data() + static_cast<std::size_t>(r) * w;
    png_read_image(rd.png, rows.data());
    png_read_end(rd.png, nullptr);
    return g;
}

} // namespace

GrayRaster load_image(const std::string& path) {
    if (!std::filesystem::exists(path))
        raise(Errc::file_not_found, path);
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    std::array<char, 2> magic{};
    in.read(magic.data(), 2);
    if (in.gcount() != 2) raise(Errc::corrupt_image, "file too short: " + path);
    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5'))
        return load_pgm(in, magic[1] == '2', path);
    if (magic[0] == 'P' && (magic[1] >= '1' && magic[1] <= '6'))
        raise(Errc::unsupported_format, "PNM variant P" + std::string(1, magic[1]) +
                                            " not supported (PGM P2/P5 only): " + path);
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path);
    }
    raise(Errc::unsupported_format, "unrecognized image format: " + path);
}

int otsu_threshold(const GrayRaster& g) {
    std::array<long long, 256> hist{};
    for (std::uint8_t v : g.samples) ++hist[v];
    long long total = static_cast<long long>(g.samples.size());

    int nonzero = 0;
    for (long long h : hist)
        if (h > 0) ++nonzero;
    if (nonzero <= 1) return 128; // uniform image

    // Between-class variance compared exactly:
    //   score(t) = (s0*n1 - s1*n0)^2 / (n0*n1),  class 0 = {v < t}.
    // Cross-multiplied in 128-bit integers so ties resolve to the smallest t.
    long long sum_all = 0;
    for (int v = 0; v < 256; ++v) sum_all += hist[v] * v;

    int best_t = 128;
    unsigned __int128 best_num = 0, best_den = 1;
    bool have_best = false;
    long long n0 = 0, s0 = 0;
    for (int t = 1; t < 256; ++t) {
        n0 += hist[t - 1];
        s0 += hist[t - 1] * (t - 1);
        long long n1 = total - n0;
        if (n0 == 0 || n1 == 0) continue;
        long long s1 = sum_all - s0;
        __int128 d = static_cast<__int128>(s0) * n1 - static_cast<__int128>(s1) * n0;
        if (d < 0) d = -d;
        unsigned __int128 num = static_cast<unsigned __int128>(d) * static_cast<unsigned __int128>(d);
        unsigned __int128 den = static_cast<unsigned __int128>(n0) * static_cast<unsigned __int128>(n1);
        // num/den > best_num/best_den ?
        bool better;
        if (total <= (1 << 26)) {
            better = !have_best || num * best_den > best_num * den;
        } else {
            // very large images: exact cross product could overflow 128 bits
            long double lhs = static_cast<long double>(num) / static_cast<long double>(den);
            long double rhs = static_cast<long double>(best_num) / static_cast<long double>(best_den);
            better = !have_best || lhs > rhs;
        }
        if (better) {
            best_num = num;
            best_den = den;
            best_t = t;
            have_best = true;
        }
    }
    return best_t;
}

BwGrid binarize(const GrayRaster& g, std::optional<int> threshold) {
    int t = threshold ? *threshold : otsu_threshold(g);
    BwGrid bw;
    bw.width = g.width;
    bw.height = g.height;
    bw.bits.resize(g.samples.size());
    for (std::size_t i = 0; i < g.samples.size(); ++i)
        bw.bits[i] = g.samples[i] < t ? 1 : 0;
    return bw;
}

BinaryRaster normalize(const BwGrid& bw) {
    int r0 = bw.height, r1 = -1, c0 = bw.width, c1 = -1;
    for (int r = 0; r < bw.height; ++r)
        for (int c = 0; c < bw.width; ++c)
            if (bw.at(r, c)) {
                r0 = std::min(r0, r);
                r1 = std::max(r1, r);
                c0 = std::min(c0, c);
                c1 = std::max(c1, c);
            }
    if (r1 < 0) raise(Errc::blank_image, "no black pixels to normalize");

    int bh = r1 - r0 + 1;
    int bwth = c1 - c0 + 1;
    BinaryRaster out;
    for (int r = 0; r < BinaryRaster::kRows; ++r) {
        int sr = r0 + std::min(bh - 1, static_cast<int>((r + 0.5) * bh / BinaryRaster::kRows));
        for (int c = 0; c < BinaryRaster::kCols; ++c) {
            int sc = c0 + std::min(bwth - 1, static_cast<int>((c + 0.5) * bwth / BinaryRaster::kCols));
            out.set(r, c, bw.at(sr, sc) != 0);
        }
    }
    if (out.black_count() == 0) {
        // pathological downsampling can miss every ink pixel; stamp them
        // forward so the result is never blank for non-blank input
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c)
                if (bw.at(r, c)) {
                    int dr = std::min(BinaryRaster::kRows - 1,
                                      static_cast<int>((r - r0 + 0.5) * BinaryRaster::kRows / bh));
                    int dc = std::min(BinaryRaster::kCols - 1,
                                      static_cast<int>((c - c0 + 0.5) * BinaryRaster::kCols / bwth));
                    out.set(dr, dc, true);
                }
    }
    return out;
}

void write_pgm(const BinaryRaster& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, "cannot write " + path);
    out << "P5\n" << BinaryRaster::kCols << " " << BinaryRaster::kRows << "\n255\n";
    std::vector<std::uint8_t> row(BinaryRaster::kCols);
    for (int rr = 0; rr < BinaryRaster::kRows; ++rr) {
        for (int cc = 0; cc < BinaryRaster::kCols; ++cc)
            row[cc] = r.black(rr, cc) ? 0 : 255;
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) raise(Errc::io_error, "short write to " + path);
}

} // namespace sigver
