#include "sigver/planar.hpp"

#include "sigver/errors.hpp"
#include "sigver/rng.hpp"

#include <fstream>

#include <json.hpp>

namespace sigver {

namespace {

// sub-seed streams within one planar training
constexpr std::uint64_t kStreamNegatives = 100;
constexpr std::uint64_t kStreamSecondaryInit = 10; // +band
constexpr std::uint64_t kStreamSecondaryTrain = 20;
constexpr std::uint64_t kStreamPrincipalInit = 30;
constexpr std::uint64_t kStreamPrincipalTrain = 31;

std::vector<Sample> band_samples(const TrainingSet& ts, int band) {
    std::vector<Sample> out;
    out.reserve(ts.genuine.size() + ts.negatives.size());
    for (const FeatureRecord& rec : ts.genuine) {
        auto z = apply_norm(ts.norm, rec).bands[static_cast<std::size_t>(band)];
        out.push_back({{z.begin(), z.end()}, 1.0});
    }
    for (const FeatureRecord& rec : ts.negatives) {
        auto z = apply_norm(ts.norm, rec).bands[static_cast<std::size_t>(band)];
        out.push_back({{z.begin(), z.end()}, 0.0});
    }
    return out;
}

std::array<double, 3> secondary_scores(const std::array<Perceptron, 3>& secondary,
                                       const NormStats& norm, const FeatureRecord& rec) {
    NormalizedRecord z = apply_norm(norm, rec);
    std::array<double, 3> scores{};
    for (int b = 0; b < 3; ++b)
        scores[static_cast<std::size_t>(b)] =
            secondary[static_cast<std::size_t>(b)].forward(z.bands[static_cast<std::size_t>(b)]);
    return scores;
}

} // namespace

std::array<double, 10> assemble_principal_input(const std::array<double, 3>& secondary_scores,
                                                const GlobalAttributes& g,
                                                const NormStats& norm) {
    std::array<double, 10> v{};
    v[0] = secondary_scores[0];
    v[1] = secondary_scores[1];
    v[2] = secondary_scores[2];
    auto raw = g.as_array(); // h1 h2 h3 p1 p2 p3 theta
    for (int f = 0; f < 7; ++f) {
        const MeanStd& ms = norm.global[static_cast<std::size_t>(f)];
        v[static_cast<std::size_t>(3 + f)] = (raw[static_cast<std::size_t>(f)] - ms.mean) / ms.std;
    }
    return v;
}

TrainingSet prepare_training_set(const std::vector<FeatureRecord>& genuine,
                                 const std::vector<FeatureRecord>& negatives,
                                 std::uint64_t seed) {
    if (genuine.size() < 2)
        raise(Errc::too_few_samples, "need at least 2 genuine training samples");
    if (negatives.size() < genuine.size())
        raise(Errc::too_few_samples, "need at least as many negatives as genuine samples");

    TrainingSet ts;
    ts.genuine = genuine;
    ts.norm = fit_norm(genuine);

    // equal class counts: seeded subsample of the negative pool
    std::vector<std::size_t> order(negatives.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(derive_seed(seed, kStreamNegatives));
    rng.shuffle(order);
    ts.negatives.reserve(genuine.size());
    for (std::size_t i = 0; i < genuine.size(); ++i)
        ts.negatives.push_back(negatives[order[i]]);
    return ts;
}

std::array<Perceptron, 3> train_secondaries(const TrainingSet& ts, const PlanarConfig& cfg,
                                            std::array<TrainResult, 3>* results) {
    std::array<Perceptron, 3> nets;
    for (int b = 0; b < 3; ++b) {
        Perceptron net = Perceptron::init(6, cfg.hidden_secondary,
                                          derive_seed(cfg.seed, kStreamSecondaryInit + b));
        TrainConfig tc = cfg.train;
        tc.seed = derive_seed(cfg.seed, kStreamSecondaryTrain + b);
        TrainResult res = train(net, band_samples(ts, b), tc);
        if (results) (*results)[static_cast<std::size_t>(b)] = res;
        nets[static_cast<std::size_t>(b)] = std::move(net);
    }
    return nets;
}

Perceptron train_principal(const std::array<Perceptron, 3>& secondary, const TrainingSet& ts,
                           const PlanarConfig& cfg, TrainResult* result) {
    std::vector<Sample> samples;
    samples.reserve(ts.genuine.size() + ts.negatives.size());
    auto add = [&](const FeatureRecord& rec, double target) {
        auto scores = secondary_scores(secondary, ts.norm, rec);
        auto v = assemble_principal_input(scores, rec.global, ts.norm);
        samples.push_back({{v.begin(), v.end()}, target});
    };
    for (const FeatureRecord& rec : ts.genuine) add(rec, 1.0);
    for (const FeatureRecord& rec : ts.negatives) add(rec, 0.0);

    Perceptron net = Perceptron::init(10, cfg.hidden_principal,
                                      derive_seed(cfg.seed, kStreamPrincipalInit));
    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(cfg.seed, kStreamPrincipalTrain);
    TrainResult res = train(net, samples, tc);
    if (result) *result = res;
    return net;
}

PlanarModel train_planar_set(const std::string& writer_id, const TrainingSet& ts,
                             const PlanarConfig& cfg) {
    PlanarModel m;
    m.writer_id = writer_id;
    std::array<TrainResult, 3> sec_results{};
    TrainResult pri_result{};
    m.secondary = train_secondaries(ts, cfg, &sec_results);
    m.principal = train_principal(m.secondary, ts, cfg, &pri_result);
    for (int b = 0; b < 3; ++b)
        m.secondary_mse[static_cast<std::size_t>(b)] = sec_results[static_cast<std::size_t>(b)].final_mse;
    m.principal_mse = pri_result.final_mse;
    m.norm = ts.norm;
    m.threshold = cfg.threshold;
    m.seed = cfg.seed;
    m.config = cfg;

    long long fallbacks = 0;
    for (const FeatureRecord& rec : ts.genuine) fallbacks += rec.fallback_segmentation ? 1 : 0;
    for (const FeatureRecord& rec : ts.negatives) fallbacks += rec.fallback_segmentation ? 1 : 0;
    m.band_fallback_rate = static_cast<double>(fallbacks) /
                           static_cast<double>(ts.genuine.size() + ts.negatives.size());
    return m;
}

PlanarModel train_planar_features(const std::string& writer_id,
                                  const std::vector<FeatureRecord>& genuine,
                                  const std::vector<FeatureRecord>& negatives,
                                  const PlanarConfig& cfg) {
    return train_planar_set(writer_id, prepare_training_set(genuine, negatives, cfg.seed), cfg);
}

PlanarModel train_planar(const std::string& writer_id, const std::vector<BinaryRaster>& genuine,
                         const std::vector<BinaryRaster>& negatives, const PlanarConfig& cfg) {
    if (genuine.size() < 2)
        raise(Errc::too_few_samples, "need at least 2 genuine training samples");
    if (negatives.size() < genuine.size())
        raise(Errc::too_few_samples, "need at least as many negatives as genuine samples");

    std::vector<FeatureRecord> gfeat(genuine.size()), nfeat(negatives.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(genuine.size()); ++i)
        gfeat[static_cast<std::size_t>(i)] = extract_features(genuine[static_cast<std::size_t>(i)]);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(negatives.size()); ++i)
        nfeat[static_cast<std::size_t>(i)] = extract_features(negatives[static_cast<std::size_t>(i)]);
    return train_planar_features(writer_id, gfeat, nfeat, cfg);
}

Verdict verify_features(const PlanarModel& m, const FeatureRecord& rec) {
    Verdict v;
    v.secondary_scores = secondary_scores(m.secondary, m.norm, rec);
    auto input = assemble_principal_input(v.secondary_scores, rec.global, m.norm);
    v.principal_score = m.principal.forward(input);
    v.accepted = v.principal_score >= m.threshold;
    v.fallback_segmentation = rec.fallback_segmentation;
    return v;
}

Verdict verify(const PlanarModel& m, const BinaryRaster& r) {
    return verify_features(m, extract_features(r));
}

// ---- model file -------------------------------------------------------

namespace {

using nlohmann::json;

json net_to_json(const Perceptron& p) {
    return json{{"n_in", p.n_in()},
                {"n_hidden", p.n_hidden()},
                {"weights1", p.w1()},
                {"weights2", p.w2()}};
}

Perceptron net_from_json(const json& j) {
    Perceptron p(j.at("n_in").get<int>(), j.at("n_hidden").get<int>());
    auto w1 = j.at("weights1").get<std::vector<double>>();
    auto w2 = j.at("weights2").get<std::vector<double>>();
    if (w1.size() != p.w1().size() || w2.size() != p.w2().size())
        raise(Errc::schema_violation, "weight matrix size does not match layer sizes");
    p.w1() = std::move(w1);
    p.w2() = std::move(w2);
    return p;
}

json meanstd_to_json(const MeanStd& ms) {
    return json{{"mean", ms.mean}, {"std", ms.std}, {"zero_variance", ms.zero_variance}};
}

MeanStd meanstd_from_json(const json& j) {
    MeanStd ms;
    ms.mean = j.at("mean").get<double>();
    ms.std = j.at("std").get<double>();
    ms.zero_variance = j.at("zero_variance").get<bool>();
    return ms;
}

} // namespace

void save_model(const PlanarModel& m, const std::string& path) {
    json norm;
    for (int b = 0; b < 3; ++b) {
        json row = json::array();
        for (int f = 0; f < 6; ++f)
            row.push_back(meanstd_to_json(m.norm.band[static_cast<std::size_t>(b)][static_cast<std::size_t>(f)]));
        norm["band"].push_back(row);
    }
    norm["global"] = json::array();
    for (int f = 0; f < 7; ++f)
        norm["global"].push_back(meanstd_to_json(m.norm.global[static_cast<std::size_t>(f)]));

    json doc{
        {"version", "1"},
        {"writer_id", m.writer_id},
        {"threshold", m.threshold},
        {"norm", norm},
        {"secondary", json::array({net_to_json(m.secondary[0]), net_to_json(m.secondary[1]),
                                   net_to_json(m.secondary[2])})},
        {"principal", net_to_json(m.principal)},
        {"provenance",
         {{"seed", m.seed},
          {"band_fallback_rate", m.band_fallback_rate},
          {"training",
           {{"secondary_mse", {m.secondary_mse[0], m.secondary_mse[1], m.secondary_mse[2]}},
            {"principal_mse", m.principal_mse}}},
          {"config",
           {{"hidden_secondary", m.config.hidden_secondary},
            {"hidden_principal", m.config.hidden_principal},
            {"learning_rate", m.config.train.learning_rate},
            {"momentum", m.config.train.momentum},
            {"max_epochs", m.config.train.max_epochs},
            {"target_mse", m.config.train.target_mse}}}}},
    };

    std::ofstream out(path);
    if (!out) raise(Errc::io_error, "cannot write " + path);
    out << doc.dump(2) << "\n";
    if (!out) raise(Errc::io_error, "short write to " + path);
}

PlanarModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open model file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        raise(Errc::schema_violation, "model file is not valid JSON: " + std::string(e.what()));
    }
    try {
        std::string version = doc.at("version").get<std::string>();
        if (version != "1")
            raise(Errc::version_mismatch, "unknown model version '" + version + "'");

        PlanarModel m;
        m.writer_id = doc.at("writer_id").get<std::string>();
        m.threshold = doc.at("threshold").get<double>();

        const json& sec = doc.at("secondary");
        if (!sec.is_array() || sec.size() != 3)
            raise(Errc::schema_violation, "expected exactly 3 secondary models");
        for (int b = 0; b < 3; ++b) {
            m.secondary[static_cast<std::size_t>(b)] = net_from_json(sec[static_cast<std::size_t>(b)]);
            if (m.secondary[static_cast<std::size_t>(b)].n_in() != 6)
                raise(Errc::schema_violation, "secondary model must have 6 inputs");
        }
        m.principal = net_from_json(doc.at("principal"));
        if (m.principal.n_in() != 10)
            raise(Errc::schema_violation, "principal model must have 10 inputs");

        const json& norm = doc.at("norm");
        const json& band = norm.at("band");
        if (!band.is_array() || band.size() != 3)
            raise(Errc::schema_violation, "norm.band must have 3 rows");
        for (int b = 0; b < 3; ++b) {
            const json& row = band[static_cast<std::size_t>(b)];
            if (!row.is_array() || row.size() != 6)
                raise(Errc::schema_violation, "norm.band rows must have 6 entries");
            for (int f = 0; f < 6; ++f)
                m.norm.band[static_cast<std::size_t>(b)][static_cast<std::size_t>(f)] =
                    meanstd_from_json(row[static_cast<std::size_t>(f)]);
        }
        const json& global = norm.at("global");
        if (!global.is_array() || global.size() != 7)
            raise(Errc::schema_violation, "norm.global must have 7 entries");
        for (int f = 0; f < 7; ++f)
            m.norm.global[static_cast<std::size_t>(f)] = meanstd_from_json(global[static_cast<std::size_t>(f)]);

        const json& prov = doc.at("provenance");
        m.seed = prov.at("seed").get<std::uint64_t>();
        m.band_fallback_rate = prov.at("band_fallback_rate").get<double>();
        const json& training = prov.at("training");
        for (int b = 0; b < 3; ++b)
            m.secondary_mse[static_cast<std::size_t>(b)] =
                training.at("secondary_mse").at(static_cast<std::size_t>(b)).get<double>();
        m.principal_mse = training.at("principal_mse").get<double>();
        const json& cfg = prov.at("config");
        m.config.hidden_secondary = cfg.at("hidden_secondary").get<int>();
        m.config.hidden_principal = cfg.at("hidden_principal").get<int>();
        m.config.train.learning_rate = cfg.at("learning_rate").get<double>();
        m.config.train.momentum = cfg.at("momentum").get<double>();
        m.config.train.max_epochs = cfg.at("max_epochs").get<int>();
        m.config.train.target_mse = cfg.at("target_mse").get<double>();
        m.config.threshold = m.threshold;
        m.config.seed = m.seed;
        return m;
    } catch (const json::exception& e) {
        raise(Errc::schema_violation, "model file missing or mistyped field: " + std::string(e.what()));
    }
}

} // namespace sigver
