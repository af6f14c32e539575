#pragma once

#include "sigver/datasets.hpp"
#include "sigver/planar.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sigver {

struct TypeCounts {
    long long total = 0;
    long long accepted = 0;
    bool operator==(const TypeCounts&) const = default;
};

struct ConfusionCounts {
    long long genuine_total = 0;
    long long genuine_rejected = 0;
    TypeCounts random;
    TypeCounts simple;
    TypeCounts skilled;
    bool operator==(const ConfusionCounts&) const = default;
};

// Percentages for every category with samples; throws empty_category when
// no genuine samples were scored.
struct Rates {
    double frr = 0.0;
    std::map<std::string, double> far; // keyed random/simple/skilled
    bool operator==(const Rates&) const = default;
};

Rates rates(const ConfusionCounts& c);

// 100*num/den rounded half-up to 2 decimals, rendered exactly from the
// integer counts ("16.00", "0.00").
std::string render_rate(long long num, long long den);

struct WriterResult {
    std::string writer;
    ConfusionCounts counts;
    bool operator==(const WriterResult&) const = default;
};

struct RepeatResult {
    std::uint64_t seed = 0;
    ConfusionCounts totals;
    Rates rate;
    std::vector<WriterResult> per_writer;
    bool operator==(const RepeatResult&) const = default;
};

struct AggregateStat {
    double mean = 0.0;
    double std = 0.0;
    bool operator==(const AggregateStat&) const = default;
};

struct EvalReport {
    std::string corpus;
    double train_fraction = 0.0;
    std::uint64_t seed = 0;
    PlanarConfig config;
    std::vector<RepeatResult> repeats;
    std::map<std::string, AggregateStat> aggregate; // "frr", "far_random", ...
    bool operator==(const EvalReport& o) const;
};

struct EvalConfig {
    PlanarConfig planar;
    int repeats = 4;
    int threads = 0; // 0 = all available
    std::string corpus_id;
};

// Trains every writer's planar model per repeat (only the negative subset
// changes between repeats) and scores all test samples against the owning
// writer's model. Writers are evaluated in parallel; tallies are merged in
// writer order so the result is independent of scheduling.
EvalReport run_protocol(const ProtocolSplit& split, const EvalConfig& cfg);

enum class ReportFormat { json, csv };

std::string report_to_json_string(const EvalReport& r);
EvalReport report_from_json_string(const std::string& text);

void emit_report(const EvalReport& r, const std::string& path, ReportFormat format);

} // namespace sigver
