#include "sigver/datasets.hpp"

#include "sigver/errors.hpp"
#include "sigver/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

namespace sigver {

const char* kind_name(SampleKind k) {
    switch (k) {
    case SampleKind::genuine: return "genuine";
    case SampleKind::simple: return "simple";
    case SampleKind::skilled: return "skilled";
    }
    return "?";
}

SampleKind kind_from_string(const std::string& s) {
    if (s == "genuine") return SampleKind::genuine;
    if (s == "simple") return SampleKind::simple;
    if (s == "skilled") return SampleKind::skilled;
    raise(Errc::unknown_kind, "sample kind '" + s + "'");
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open manifest " + path);
    std::filesystem::path base = std::filesystem::path(path).parent_path();

    auto split3 = [&](const std::string& line, std::array<std::string, 3>& out) {
        std::size_t a = line.find(',');
        std::size_t b = a == std::string::npos ? std::string::npos : line.find(',', a + 1);
        if (a == std::string::npos || b == std::string::npos || line.find(',', b + 1) != std::string::npos)
            raise(Errc::parse_error, "manifest line needs exactly 3 fields: '" + line + "'");
        out[0] = line.substr(0, a);
        out[1] = line.substr(a + 1, b - a - 1);
        out[2] = line.substr(b + 1);
    };

    std::string line;
    if (!std::getline(in, line)) raise(Errc::parse_error, "manifest is empty: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "path,writer,kind")
        raise(Errc::parse_error, "manifest header must be 'path,writer,kind', got '" + line + "'");

    std::vector<ManifestEntry> entries;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<std::string, 3> f;
        split3(line, f);
        if (f[0].empty()) raise(Errc::parse_error, "empty path in manifest line '" + line + "'");
        if (f[1].empty()) raise(Errc::parse_error, "empty writer in manifest line '" + line + "'");
        if (!seen.insert(f[0]).second)
            raise(Errc::duplicate_path, f[0]);
        ManifestEntry e;
        e.path = (base / f[0]).lexically_normal().string();
        e.writer = f[1];
        e.kind = kind_from_string(f[2]);
        entries.push_back(std::move(e));
    }
    return entries;
}

ProtocolSplit make_split(const std::vector<ManifestEntry>& entries, double train_fraction,
                         std::uint64_t seed) {
    ProtocolSplit split;
    split.entries = entries;
    split.train_fraction = train_fraction;
    split.seed = seed;
    for (int r = 0; r < 4; ++r)
        split.repeat_seeds[static_cast<std::size_t>(r)] = derive_seed(seed, 1000 + static_cast<std::uint64_t>(r));

    std::map<std::string, WriterSplit> by_writer;
    for (int i = 0; i < static_cast<int>(entries.size()); ++i) {
        const ManifestEntry& e = entries[static_cast<std::size_t>(i)];
        WriterSplit& w = by_writer[e.writer];
        w.writer = e.writer;
        switch (e.kind) {
        case SampleKind::genuine: w.train_genuine.push_back(i); break; // shuffled below
        case SampleKind::simple: w.test_simple.push_back(i); break;
        case SampleKind::skilled: w.test_skilled.push_back(i); break;
        }
    }

    std::uint64_t ordinal = 0;
    for (auto& [id, w] : by_writer) {
        std::vector<int>& genuine = w.train_genuine;
        if (genuine.size() < 3)
            raise(Errc::too_few_samples, "writer '" + id + "' has " +
                                             std::to_string(genuine.size()) +
                                             " genuine samples, need at least 3");
        Rng rng(derive_seed(seed, ordinal++));
        rng.shuffle(genuine);
        std::size_t n_train =
            static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(genuine.size())));
        n_train = std::min(n_train, genuine.size());
        w.test_genuine.assign(genuine.begin() + static_cast<std::ptrdiff_t>(n_train), genuine.end());
        genuine.resize(n_train);
    }

    for (auto& [id, w] : by_writer) split.writers.push_back(std::move(w));
    for (WriterSplit& w : split.writers)
        for (const WriterSplit& other : split.writers)
            if (other.writer != w.writer)
                w.test_random.insert(w.test_random.end(), other.test_genuine.begin(),
                                     other.test_genuine.end());
    return split;
}

// ---- synthetic corpus --------------------------------------------------

namespace {

constexpr int kCanvasRows = 256;
constexpr int kCanvasCols = 512;

struct Point {
    double row;
    double col;
};

struct Stroke {
    Point p0, p1, p2;
    int thickness;
};

using Template = std::vector<Stroke>;

Template make_template(std::uint64_t seed) {
    Rng rng(seed);
    int n_strokes = rng.range(3, 6);
    Template t;
    t.reserve(static_cast<std::size_t>(n_strokes));
    for (int s = 0; s < n_strokes; ++s) {
        Stroke st;
        st.p0 = {rng.uniform(48, 208), rng.uniform(64, 448)};
        st.p1 = {rng.uniform(48, 208), rng.uniform(64, 448)};
        st.p2 = {rng.uniform(48, 208), rng.uniform(64, 448)};
        st.thickness = rng.range(2, 4);
        t.push_back(st);
    }
    return t;
}

struct Canvas {
    std::vector<std::uint8_t> gray;
    Canvas() : gray(static_cast<std::size_t>(kCanvasRows) * kCanvasCols, 255) {}

    void stamp(double row, double col, int radius) {
        int r0 = static_cast<int>(std::lround(row));
        int c0 = static_cast<int>(std::lround(col));
        for (int dr = -radius; dr <= radius; ++dr)
            for (int dc = -radius; dc <= radius; ++dc) {
                if (dr * dr + dc * dc > radius * radius) continue;
                int r = r0 + dr, c = c0 + dc;
                if (r < 0 || r >= kCanvasRows || c < 0 || c >= kCanvasCols) continue;
                gray[static_cast<std::size_t>(r) * kCanvasCols + c] = 0;
            }
    }
};

// jitter_scale 1 for genuine renders, 2 for skilled redraws
void render(Canvas& canvas, const Template& tmpl, Rng& rng, double jitter_scale) {
    constexpr double kJitterSigma = 4.0;
    constexpr double kMaxRotationDeg = 5.0;
    double angle = rng.uniform(-kMaxRotationDeg, kMaxRotationDeg) * 3.14159265358979323846 / 180.0;
    double ca = std::cos(angle), sa = std::sin(angle);
    auto place = [&](Point p) {
        p.row += rng.gaussian(0.0, kJitterSigma * jitter_scale);
        p.col += rng.gaussian(0.0, kJitterSigma * jitter_scale);
        double dr = p.row - kCanvasRows / 2.0;
        double dc = p.col - kCanvasCols / 2.0;
        return Point{kCanvasRows / 2.0 + ca * dr - sa * dc, kCanvasCols / 2.0 + sa * dr + ca * dc};
    };
    for (const Stroke& st : tmpl) {
        Point a = place(st.p0), b = place(st.p1), c = place(st.p2);
        int thickness = std::max(1, st.thickness + rng.range(-1, 1));
        double approx_len = std::hypot(b.row - a.row, b.col - a.col) +
                            std::hypot(c.row - b.row, c.col - b.col);
        int steps = std::clamp(static_cast<int>(2.0 * approx_len), 64, 2048);
        for (int i = 0; i <= steps; ++i) {
            double t = static_cast<double>(i) / steps;
            double u = 1.0 - t;
            double row = u * u * a.row + 2.0 * u * t * b.row + t * t * c.row;
            double col = u * u * a.col + 2.0 * u * t * b.col + t * t * c.col;
            canvas.stamp(row, col, thickness);
        }
    }
}

void write_canvas_pgm(const Canvas& canvas, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, "cannot write " + path.string());
    out << "P5\n" << kCanvasCols << " " << kCanvasRows << "\n255\n";
    out.write(reinterpret_cast<const char*>(canvas.gray.data()),
              static_cast<std::streamsize>(canvas.gray.size()));
    if (!out) raise(Errc::io_error, "short write to " + path.string());
}

std::uint64_t sample_stream(int writer, int kind_code, int index) {
    return (static_cast<std::uint64_t>(writer) << 32) |
           (static_cast<std::uint64_t>(kind_code) << 24) | static_cast<std::uint64_t>(index);
}

} // namespace

std::string synth_corpus(int n_writers, int per_writer, std::uint64_t seed,
                         const std::string& out_dir) {
    if (n_writers < 2) raise(Errc::too_few_samples, "need at least 2 synthetic writers");
    if (per_writer < 6) raise(Errc::too_few_samples, "need at least 6 samples per writer");

    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) raise(Errc::io_error, "cannot create " + out_dir + ": " + ec.message());

    std::vector<Template> templates;
    templates.reserve(static_cast<std::size_t>(n_writers));
    for (int w = 0; w < n_writers; ++w)
        templates.push_back(make_template(derive_seed(seed, static_cast<std::uint64_t>(w))));

    std::filesystem::path manifest_path = dir / "manifest.csv";
    std::ofstream manifest(manifest_path);
    if (!manifest) raise(Errc::io_error, "cannot write " + manifest_path.string());
    manifest << "path,writer,kind\n";

    char name[64];
    for (int w = 0; w < n_writers; ++w) {
        std::string writer_id = [&] {
            char buf[16];
            std::snprintf(buf, sizeof buf, "w%03d", w);
            return std::string(buf);
        }();
        for (int i = 0; i < per_writer; ++i) {
            // genuine
            {
                Rng rng(derive_seed(seed, sample_stream(w, 1, i)));
                Canvas canvas;
                render(canvas, templates[static_cast<std::size_t>(w)], rng, 1.0);
                std::snprintf(name, sizeof name, "%s_genuine_%03d.pgm", writer_id.c_str(), i);
                write_canvas_pgm(canvas, dir / name);
                manifest << name << "," << writer_id << ",genuine\n";
            }
            // skilled: forger redraws this writer's template, noisier
            {
                Rng rng(derive_seed(seed, sample_stream(w, 2, i)));
                Canvas canvas;
                render(canvas, templates[static_cast<std::size_t>(w)], rng, 2.0);
                std::snprintf(name, sizeof name, "%s_skilled_%03d.pgm", writer_id.c_str(), i);
                write_canvas_pgm(canvas, dir / name);
                manifest << name << "," << writer_id << ",skilled\n";
            }
            // simple: somebody else's shape offered under this writer's name
            {
                Rng rng(derive_seed(seed, sample_stream(w, 3, i)));
                int other = (w + 1 + static_cast<int>(rng.below(static_cast<std::size_t>(n_writers - 1)))) %
                            n_writers;
                Canvas canvas;
                render(canvas, templates[static_cast<std::size_t>(other)], rng, 1.0);
                std::snprintf(name, sizeof name, "%s_simple_%03d.pgm", writer_id.c_str(), i);
                write_canvas_pgm(canvas, dir / name);
                manifest << name << "," << writer_id << ",simple\n";
            }
        }
    }
    manifest.flush();
    if (!manifest) raise(Errc::io_error, "short write to " + manifest_path.string());
    return manifest_path.string();
}

} // namespace sigver
