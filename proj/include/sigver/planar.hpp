#pragma once

#include "sigver/features.hpp"
#include "sigver/mlp.hpp"
#include "sigver/raster.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sigver {

struct PlanarConfig {
    int hidden_secondary = 10;
    int hidden_principal = 8;
    TrainConfig train;     // per-network seeds are derived from `seed` below
    double threshold = 0.5;
    std::uint64_t seed = 0;
};

// One enrolled writer: three per-band classifiers scored left-to-right by
// a principal classifier that sees their outputs plus the global
// attributes.
struct PlanarModel {
    std::string writer_id;
    std::array<Perceptron, 3> secondary; // top band first
    Perceptron principal;                // 10 inputs: 3 scores + 7 globals
    NormStats norm;
    double threshold = 0.5;

    // provenance
    std::uint64_t seed = 0;
    PlanarConfig config;
    double band_fallback_rate = 0.0;
    std::array<double, 3> secondary_mse{};
    double principal_mse = 0.0;
};

struct Verdict {
    bool accepted = false;
    double principal_score = 0.0;
    std::array<double, 3> secondary_scores{};
    bool fallback_segmentation = false;
};

// [s1 s2 s3, z(h1) z(h2) z(h3), z(p1) z(p2) z(p3), z(theta)]
std::array<double, 10> assemble_principal_input(const std::array<double, 3>& secondary_scores,
                                                const GlobalAttributes& g,
                                                const NormStats& norm);

// Feature-level training inputs after negative subsampling and
// normalization fitting.
struct TrainingSet {
    std::vector<FeatureRecord> genuine;
    std::vector<FeatureRecord> negatives; // same count as genuine
    NormStats norm;                       // fitted on genuine only
};

TrainingSet prepare_training_set(const std::vector<FeatureRecord>& genuine,
                                 const std::vector<FeatureRecord>& negatives,
                                 std::uint64_t seed);

// Stage one: each band classifier trained on its own features.
std::array<Perceptron, 3> train_secondaries(const TrainingSet& ts, const PlanarConfig& cfg,
                                            std::array<TrainResult, 3>* results = nullptr);

// Stage two: secondaries are frozen; the principal trains on their scores
// plus normalized globals.
Perceptron train_principal(const std::array<Perceptron, 3>& secondary, const TrainingSet& ts,
                           const PlanarConfig& cfg, TrainResult* result = nullptr);

// Both stages on an already-prepared training set.
PlanarModel train_planar_set(const std::string& writer_id, const TrainingSet& ts,
                             const PlanarConfig& cfg);

PlanarModel train_planar_features(const std::string& writer_id,
                                  const std::vector<FeatureRecord>& genuine,
                                  const std::vector<FeatureRecord>& negatives,
                                  const PlanarConfig& cfg);

// Raster-level entry point: segments and featurizes, then trains.
PlanarModel train_planar(const std::string& writer_id, const std::vector<BinaryRaster>& genuine,
                         const std::vector<BinaryRaster>& negatives, const PlanarConfig& cfg);

Verdict verify_features(const PlanarModel& m, const FeatureRecord& rec);
Verdict verify(const PlanarModel& m, const BinaryRaster& r);

// Versioned JSON; numeric fields round-trip exactly.
void save_model(const PlanarModel& m, const std::string& path);
PlanarModel load_model(const std::string& path);

} // namespace sigver
