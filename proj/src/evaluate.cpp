#include "sigver/evaluate.hpp"

#include "sigver/errors.hpp"
#include "sigver/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sigver {

using nlohmann::json;

Rates rates(const ConfusionCounts& c) {
    if (c.genuine_total <= 0)
        raise(Errc::empty_category, "no genuine samples scored");
    Rates r;
    r.frr = 100.0 * static_cast<double>(c.genuine_rejected) / static_cast<double>(c.genuine_total);
    auto add = [&](const char* name, const TypeCounts& t) {
        if (t.total > 0)
            r.far[name] = 100.0 * static_cast<double>(t.accepted) / static_cast<double>(t.total);
    };
    add("random", c.random);
    add("simple", c.simple);
    add("skilled", c.skilled);
    return r;
}

std::string render_rate(long long num, long long den) {
    if (den <= 0) raise(Errc::empty_category, "rate over an empty category");
    // percent scaled to hundredths, rounded half up
    long long scaled = (num * 10000 + den / 2) / den;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%02lld", scaled / 100, scaled % 100);
    return buf;
}

bool EvalReport::operator==(const EvalReport& o) const {
    return corpus == o.corpus && train_fraction == o.train_fraction && seed == o.seed &&
           config.hidden_secondary == o.config.hidden_secondary &&
           config.hidden_principal == o.config.hidden_principal &&
           config.threshold == o.config.threshold && config.seed == o.config.seed &&
           config.train.learning_rate == o.config.train.learning_rate &&
           config.train.momentum == o.config.train.momentum &&
           config.train.max_epochs == o.config.train.max_epochs &&
           config.train.target_mse == o.config.train.target_mse && repeats == o.repeats &&
           aggregate == o.aggregate;
}

namespace {

struct FeatureCache {
    std::vector<FeatureRecord> records;
};

// deferred error slot for parallel loops; keeps the original error code
struct PendingError {
    Errc code = Errc::io_error;
    std::string message;
};

std::optional<PendingError> capture(const std::string& context) {
    try {
        throw;
    } catch (const Error& e) {
        return PendingError{e.code(), context + ": " + e.what()};
    } catch (const std::exception& e) {
        return PendingError{Errc::io_error, context + ": " + e.what()};
    }
}

void rethrow_first(const std::vector<std::optional<PendingError>>& errors) {
    for (const auto& err : errors)
        if (err) raise(err->code, err->message);
}

// Featurize every manifest entry once; models and verdicts reuse the
// cache across repeats.
FeatureCache featurize_entries(const ProtocolSplit& split, int threads) {
    FeatureCache cache;
    cache.records.resize(split.entries.size());
    std::vector<std::optional<PendingError>> errors(split.entries.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(split.entries.size()); ++i) {
        const ManifestEntry& e = split.entries[static_cast<std::size_t>(i)];
        try {
            GrayRaster g = load_image(e.path);
            BinaryRaster r = normalize(binarize(g));
            cache.records[static_cast<std::size_t>(i)] = extract_features(r);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] =
                capture("writer '" + e.writer + "', sample '" + e.path + "'");
        }
    }
    rethrow_first(errors);
    return cache;
}

void tally(const PlanarModel& model, const FeatureCache& cache, const std::vector<int>& idx,
           bool genuine, TypeCounts* far_slot, ConfusionCounts& counts) {
    for (int i : idx) {
        Verdict v = verify_features(model, cache.records[static_cast<std::size_t>(i)]);
        if (genuine) {
            counts.genuine_total += 1;
            if (!v.accepted) counts.genuine_rejected += 1;
        } else {
            far_slot->total += 1;
            if (v.accepted) far_slot->accepted += 1;
        }
    }
}

void accumulate(ConfusionCounts& into, const ConfusionCounts& from) {
    into.genuine_total += from.genuine_total;
    into.genuine_rejected += from.genuine_rejected;
    into.random.total += from.random.total;
    into.random.accepted += from.random.accepted;
    into.simple.total += from.simple.total;
    into.simple.accepted += from.simple.accepted;
    into.skilled.total += from.skilled.total;
    into.skilled.accepted += from.skilled.accepted;
}

} // namespace

EvalReport run_protocol(const ProtocolSplit& split, const EvalConfig& cfg) {
    int threads = cfg.threads;
#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#else
    threads = 1;
#endif

    FeatureCache cache = featurize_entries(split, threads);

    // negative training pool per writer: the other writers' train genuine
    std::vector<std::vector<FeatureRecord>> negative_pool(split.writers.size());
    std::vector<std::vector<FeatureRecord>> genuine_train(split.writers.size());
    for (std::size_t w = 0; w < split.writers.size(); ++w) {
        for (int i : split.writers[w].train_genuine)
            genuine_train[w].push_back(cache.records[static_cast<std::size_t>(i)]);
        for (std::size_t o = 0; o < split.writers.size(); ++o) {
            if (o == w) continue;
            for (int i : split.writers[o].train_genuine)
                negative_pool[w].push_back(cache.records[static_cast<std::size_t>(i)]);
        }
    }

    EvalReport report;
    report.corpus = cfg.corpus_id;
    report.train_fraction = split.train_fraction;
    report.seed = split.seed;
    report.config = cfg.planar;

    for (int rep = 0; rep < cfg.repeats; ++rep) {
        std::uint64_t rep_seed = derive_seed(split.seed, 1000 + static_cast<std::uint64_t>(rep));
        RepeatResult rr;
        rr.seed = rep_seed;
        rr.per_writer.resize(split.writers.size());

        std::vector<std::optional<PendingError>> errors(split.writers.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (long long w = 0; w < static_cast<long long>(split.writers.size()); ++w) {
            const WriterSplit& ws = split.writers[static_cast<std::size_t>(w)];
            try {
                // repeats change only the negative subsample; network
                // seeds stay fixed per writer
                PlanarConfig pc = cfg.planar;
                pc.seed = derive_seed(split.seed, static_cast<std::uint64_t>(w));
                TrainingSet ts = prepare_training_set(
                    genuine_train[static_cast<std::size_t>(w)],
                    negative_pool[static_cast<std::size_t>(w)],
                    derive_seed(rep_seed, static_cast<std::uint64_t>(w)));
                PlanarModel model = train_planar_set(ws.writer, ts, pc);

                WriterResult res;
                res.writer = ws.writer;
                tally(model, cache, ws.test_genuine, true, nullptr, res.counts);
                tally(model, cache, ws.test_random, false, &res.counts.random, res.counts);
                tally(model, cache, ws.test_simple, false, &res.counts.simple, res.counts);
                tally(model, cache, ws.test_skilled, false, &res.counts.skilled, res.counts);
                rr.per_writer[static_cast<std::size_t>(w)] = std::move(res);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = capture("writer '" + ws.writer + "'");
            }
        }
        rethrow_first(errors);

        for (const WriterResult& res : rr.per_writer) accumulate(rr.totals, res.counts);
        rr.rate = rates(rr.totals);
        report.repeats.push_back(std::move(rr));
    }

    // aggregate mean and population standard deviation over repeats
    auto aggregate_metric = [&](const std::string& key, auto getter) {
        std::vector<double> vals;
        for (const RepeatResult& rr : report.repeats) {
            std::optional<double> v = getter(rr);
            if (!v) return;
            vals.push_back(*v);
        }
        if (vals.empty()) return;
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        report.aggregate[key] = {mean, std::sqrt(ss / static_cast<double>(vals.size()))};
    };
    aggregate_metric("frr", [](const RepeatResult& rr) -> std::optional<double> { return rr.rate.frr; });
    for (const char* type : {"random", "simple", "skilled"})
        aggregate_metric(std::string("far_") + type,
                         [type](const RepeatResult& rr) -> std::optional<double> {
                             auto it = rr.rate.far.find(type);
                             if (it == rr.rate.far.end()) return std::nullopt;
                             return it->second;
                         });
    return report;
}

// ---- serialization -----------------------------------------------------

namespace {

json counts_to_json(const ConfusionCounts& c) {
    return json{{"genuine_total", c.genuine_total},
                {"genuine_rejected", c.genuine_rejected},
                {"random", {{"total", c.random.total}, {"accepted", c.random.accepted}}},
                {"simple", {{"total", c.simple.total}, {"accepted", c.simple.accepted}}},
                {"skilled", {{"total", c.skilled.total}, {"accepted", c.skilled.accepted}}}};
}

ConfusionCounts counts_from_json(const json& j) {
    ConfusionCounts c;
    c.genuine_total = j.at("genuine_total").get<long long>();
    c.genuine_rejected = j.at("genuine_rejected").get<long long>();
    auto get_type = [&](const char* k, TypeCounts& t) {
        t.total = j.at(k).at("total").get<long long>();
        t.accepted = j.at(k).at("accepted").get<long long>();
    };
    get_type("random", c.random);
    get_type("simple", c.simple);
    get_type("skilled", c.skilled);
    return c;
}

json rates_to_json(const Rates& r) {
    json far = json::object();
    for (const auto& [k, v] : r.far) far[k] = v;
    return json{{"frr", r.frr}, {"far", far}};
}

Rates rates_from_json(const json& j) {
    Rates r;
    r.frr = j.at("frr").get<double>();
    for (const auto& [k, v] : j.at("far").items()) r.far[k] = v.get<double>();
    return r;
}

json report_to_json(const EvalReport& r) {
    json reps = json::array();
    for (const RepeatResult& rr : r.repeats) {
        json per_writer = json::array();
        for (const WriterResult& wr : rr.per_writer)
            per_writer.push_back(json{{"writer", wr.writer}, {"counts", counts_to_json(wr.counts)}});
        reps.push_back(json{{"seed", rr.seed},
                            {"counts", counts_to_json(rr.totals)},
                            {"rates", rates_to_json(rr.rate)},
                            {"per_writer", per_writer}});
    }
    json agg = json::object();
    for (const auto& [k, v] : r.aggregate) agg[k] = json{{"mean", v.mean}, {"std", v.std}};
    return json{{"version", "1"},
                {"corpus", r.corpus},
                {"train_fraction", r.train_fraction},
                {"seed", r.seed},
                {"config",
                 {{"hidden_secondary", r.config.hidden_secondary},
                  {"hidden_principal", r.config.hidden_principal},
                  {"threshold", r.config.threshold},
                  {"learning_rate", r.config.train.learning_rate},
                  {"momentum", r.config.train.momentum},
                  {"max_epochs", r.config.train.max_epochs},
                  {"target_mse", r.config.train.target_mse}}},
                {"repeats", reps},
                {"aggregate", agg}};
}

EvalReport report_from_json(const json& doc) {
    try {
        if (doc.at("version").get<std::string>() != "1")
            raise(Errc::version_mismatch, "unknown report version");
        EvalReport r;
        r.corpus = doc.at("corpus").get<std::string>();
        r.train_fraction = doc.at("train_fraction").get<double>();
        r.seed = doc.at("seed").get<std::uint64_t>();
        const json& cfg = doc.at("config");
        r.config.hidden_secondary = cfg.at("hidden_secondary").get<int>();
        r.config.hidden_principal = cfg.at("hidden_principal").get<int>();
        r.config.threshold = cfg.at("threshold").get<double>();
        r.config.train.learning_rate = cfg.at("learning_rate").get<double>();
        r.config.train.momentum = cfg.at("momentum").get<double>();
        r.config.train.max_epochs = cfg.at("max_epochs").get<int>();
        r.config.train.target_mse = cfg.at("target_mse").get<double>();
        for (const json& jr : doc.at("repeats")) {
            RepeatResult rr;
            rr.seed = jr.at("seed").get<std::uint64_t>();
            rr.totals = counts_from_json(jr.at("counts"));
            rr.rate = rates_from_json(jr.at("rates"));
            for (const json& jw : jr.at("per_writer")) {
                WriterResult wr;
                wr.writer = jw.at("writer").get<std::string>();
                wr.counts = counts_from_json(jw.at("counts"));
                rr.per_writer.push_back(std::move(wr));
            }
            r.repeats.push_back(std::move(rr));
        }
        for (const auto& [k, v] : doc.at("aggregate").items())
            r.aggregate[k] = {v.at("mean").get<double>(), v.at("std").get<double>()};
        return r;
    } catch (const json::exception& e) {
        raise(Errc::schema_violation, "report missing or mistyped field: " + std::string(e.what()));
    }
}

void write_csv(const EvalReport& r, std::ostream& out) {
    out << "repeat,metric,type,value\n";
    for (std::size_t i = 0; i < r.repeats.size(); ++i) {
        const RepeatResult& rr = r.repeats[i];
        out << i << ",FRR,," << render_rate(rr.totals.genuine_rejected, rr.totals.genuine_total)
            << "\n";
        auto far_row = [&](const char* type, const TypeCounts& t) {
            if (t.total > 0)
                out << i << ",FAR," << type << "," << render_rate(t.accepted, t.total) << "\n";
        };
        far_row("random", rr.totals.random);
        far_row("simple", rr.totals.simple);
        far_row("skilled", rr.totals.skilled);
    }
    char buf[32];
    for (const char* stat : {"mean", "std"}) {
        for (const auto& [key, agg] : r.aggregate) {
            double v = stat == std::string("mean") ? agg.mean : agg.std;
            std::snprintf(buf, sizeof buf, "%.2f", v);
            std::string metric = key == "frr" ? "FRR" : "FAR";
            std::string type = key == "frr" ? "" : key.substr(4);
            out << stat << "," << metric << "," << type << "," << buf << "\n";
        }
    }
}

} // namespace

std::string report_to_json_string(const EvalReport& r) {
    return report_to_json(r).dump(2) + "\n";
}

EvalReport report_from_json_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        raise(Errc::schema_violation, "report is not valid JSON: " + std::string(e.what()));
    }
    return report_from_json(doc);
}

void emit_report(const EvalReport& r, const std::string& path, ReportFormat format) {
    std::ofstream out(path);
    if (!out) raise(Errc::io_error, "cannot write " + path);
    if (format == ReportFormat::json) {
        out << report_to_json_string(r);
    } else {
        write_csv(r, out);
    }
    if (!out) raise(Errc::io_error, "short write to " + path);
}

} // namespace sigver
