#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sigver {

enum class SampleKind { genuine, simple, skilled };

const char* kind_name(SampleKind k);
SampleKind kind_from_string(const std::string& s); // throws unknown_kind

struct ManifestEntry {
    std::string path;   // resolved against the manifest directory
    std::string writer; // claimed writer
    SampleKind kind = SampleKind::genuine;
};

// CSV with header `path,writer,kind`.
std::vector<ManifestEntry> load_manifest(const std::string& path);

// Index lists point into ProtocolSplit::entries.
struct WriterSplit {
    std::string writer;
    std::vector<int> train_genuine;
    std::vector<int> test_genuine;
    std::vector<int> test_random;  // other writers' test genuine
    std::vector<int> test_simple;
    std::vector<int> test_skilled;
};

struct ProtocolSplit {
    std::vector<ManifestEntry> entries;
    std::vector<WriterSplit> writers; // sorted by writer id
    std::array<std::uint64_t, 4> repeat_seeds{};
    double train_fraction = 0.0;
    std::uint64_t seed = 0;
};

// Per writer: seeded shuffle, first ceil(fraction*n) genuine samples train,
// the rest test. Labeled forgeries pass through. Throws too_few_samples
// when any writer has fewer than 3 genuine samples.
ProtocolSplit make_split(const std::vector<ManifestEntry>& entries, double train_fraction,
                         std::uint64_t seed);

// Deterministic synthetic corpus: per writer a template of quadratic
// strokes; genuine samples jitter the control points, skilled forgeries
// redraw the template under a forger seed with doubled jitter, simple
// forgeries render a different writer's template. Writes PGM files plus
// manifest.csv into out_dir and returns the manifest path.
std::string synth_corpus(int n_writers, int per_writer, std::uint64_t seed,
                         const std::string& out_dir);

} // namespace sigver
