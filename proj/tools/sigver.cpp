#include "sigver/datasets.hpp"
#include "sigver/errors.hpp"
#include "sigver/evaluate.hpp"
#include "sigver/features.hpp"
#include "sigver/planar.hpp"
#include "sigver/raster.hpp"
#include "sigver/segmenter.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;
using namespace sigver;

bool g_verbose = false;

void note(const std::string& msg) {
    if (g_verbose) std::cerr << "sigver: " << msg << "\n";
}

BinaryRaster preprocess_file(const std::string& path, std::optional<int> threshold = std::nullopt) {
    GrayRaster g = load_image(path);
    return normalize(binarize(g, threshold));
}

json split_to_json(const BandSplit& s) {
    auto h = s.heights();
    return json{{"cuts", {s.cut1, s.cut2}}, {"heights", {h[0], h[1], h[2]}}, {"fallback", s.fallback}};
}

json features_to_json(const FeatureRecord& rec) {
    json bands = json::array();
    for (const SecondaryFeatures& f : rec.bands)
        bands.push_back(json{{"mean_approx", f.mean_approx},
                             {"std_approx", f.std_approx},
                             {"std_h", f.std_h},
                             {"std_v", f.std_v},
                             {"std_d", f.std_d},
                             {"black_count", f.black_count}});
    const GlobalAttributes& g = rec.global;
    return json{{"bands", bands},
                {"global",
                 {{"max_vproj", {g.max_vproj[0], g.max_vproj[1], g.max_vproj[2]}},
                  {"heights", {g.heights[0], g.heights[1], g.heights[2]}},
                  {"orientation_deg", g.orientation_deg}}},
                {"fallback", rec.fallback_segmentation}};
}

void write_or_print(const json& doc, const std::string& path) {
    if (path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(path);
        if (!out) raise(Errc::io_error, "cannot write " + path);
        out << doc.dump(2) << "\n";
    }
}

json subband_stats_json(const BinaryRaster& r, const BandSplit& s) {
    json out = json::array();
    auto bands = s.bands();
    for (auto [lo, hi] : bands) {
        Matrix band(hi - lo, BinaryRaster::kCols);
        for (int row = lo; row < hi; ++row)
            for (int col = 0; col < BinaryRaster::kCols; ++col)
                band.at(row - lo, col) = r.black(row, col) ? 1.0 : 0.0;
        WaveletPyramid p = dwt2_two_level(band);
        auto mat_info = [](const Matrix& m) {
            double mn = 0.0;
            for (double v : m.data) mn += v;
            if (!m.data.empty()) mn /= static_cast<double>(m.data.size());
            return json{{"rows", m.rows}, {"cols", m.cols}, {"mean", mn}};
        };
        out.push_back(json{{"rows", hi - lo},
                           {"approx", mat_info(p.approx)},
                           {"level1",
                            {{"h", mat_info(p.levels[0].detail_h)},
                             {"v", mat_info(p.levels[0].detail_v)},
                             {"d", mat_info(p.levels[0].detail_d)}}},
                           {"level2",
                            {{"h", mat_info(p.levels[1].detail_h)},
                             {"v", mat_info(p.levels[1].detail_v)},
                             {"d", mat_info(p.levels[1].detail_d)}}}});
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"offline signature verification toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int threads = 0;
    app.add_option("--seed", seed, "master random seed");
    app.add_flag("--verbose", g_verbose, "progress notes on stderr");
    app.add_option("--threads", threads, "worker cap for parallel sections (0 = all cores)");

    // preprocess
    auto* cmd_pre = app.add_subcommand("preprocess", "binarize and normalize a signature image");
    std::string pre_in, pre_out;
    int pre_threshold = -1;
    cmd_pre->add_option("input", pre_in, "PGM or grayscale PNG")->required();
    cmd_pre->add_option("output", pre_out, "normalized PGM (P5)")->required();
    cmd_pre->add_option("--threshold", pre_threshold, "manual binarization threshold (default: Otsu)");

    // segment
    auto* cmd_seg = app.add_subcommand("segment", "split a signature into three bands");
    std::string seg_in, seg_overlay, seg_json;
    cmd_seg->add_option("input", seg_in)->required();
    cmd_seg->add_option("--overlay", seg_overlay, "write a PPM with the cut rows marked");
    cmd_seg->add_option("--json", seg_json, "write the split JSON here instead of stdout");

    // features
    auto* cmd_feat = app.add_subcommand("features", "extract band and global features");
    std::string feat_in, feat_json;
    bool feat_subbands = false;
    cmd_feat->add_option("input", feat_in)->required();
    cmd_feat->add_option("--json", feat_json, "write the feature JSON here instead of stdout");
    cmd_feat->add_flag("--subbands", feat_subbands, "include wavelet subband statistics");

    // synth
    auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic signature corpus");
    int synth_writers = 0, synth_per = 0;
    std::string synth_out;
    cmd_synth->add_option("--writers", synth_writers, "number of writers")->required();
    cmd_synth->add_option("--per-writer", synth_per, "samples per writer and kind")->required();
    cmd_synth->add_option("--out", synth_out, "output directory")->required();

    // train
    auto* cmd_train = app.add_subcommand("train", "enroll one writer");
    std::string train_manifest, train_writer, train_out;
    int train_hidden_sec = 10, train_hidden_pri = 8;
    double train_threshold = 0.5;
    cmd_train->add_option("--manifest", train_manifest)->required();
    cmd_train->add_option("--writer", train_writer)->required();
    cmd_train->add_option("--out", train_out, "model file")->required();
    cmd_train->add_option("--hidden-secondary", train_hidden_sec, "hidden units per band model");
    cmd_train->add_option("--hidden-principal", train_hidden_pri, "hidden units in the principal model");
    cmd_train->add_option("--threshold", train_threshold, "accept threshold");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "score a signature against a model");
    std::string verify_model, verify_in;
    cmd_verify->add_option("--model", verify_model)->required();
    cmd_verify->add_option("input", verify_in)->required();

    // evaluate
    auto* cmd_eval = app.add_subcommand("evaluate", "run the FRR/FAR protocol over a manifest");
    std::string eval_manifest, eval_out, eval_csv;
    double eval_fraction = 2.0 / 3.0;
    int eval_repeats = 4;
    cmd_eval->add_option("--manifest", eval_manifest)->required();
    cmd_eval->add_option("--train-fraction", eval_fraction, "genuine fraction used for training");
    cmd_eval->add_option("--out", eval_out, "report JSON")->required();
    cmd_eval->add_option("--csv", eval_csv, "also write a CSV rendering");
    cmd_eval->add_option("--repeats", eval_repeats, "protocol repetitions");

    for (CLI::App* sub : {cmd_pre, cmd_seg, cmd_feat, cmd_synth, cmd_train, cmd_verify, cmd_eval})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (cmd_pre->parsed()) {
            std::optional<int> thr;
            if (pre_threshold >= 0) thr = pre_threshold;
            BinaryRaster r = preprocess_file(pre_in, thr);
            write_pgm(r, pre_out);
            note("wrote " + pre_out);
        } else if (cmd_seg->parsed()) {
            BinaryRaster r = preprocess_file(seg_in);
            BandSplit s = segment(r);
            if (!seg_overlay.empty()) write_ppm(render_overlay(r, s), seg_overlay);
            write_or_print(split_to_json(s), seg_json);
        } else if (cmd_feat->parsed()) {
            BinaryRaster r = preprocess_file(feat_in);
            FeatureRecord rec = extract_features(r);
            json doc = features_to_json(rec);
            if (feat_subbands) doc["subbands"] = subband_stats_json(r, segment(r));
            write_or_print(doc, feat_json);
        } else if (cmd_synth->parsed()) {
            std::string manifest = synth_corpus(synth_writers, synth_per, seed, synth_out);
            std::cout << json{{"manifest", manifest},
                              {"files", synth_writers * synth_per * 3}}
                             .dump(2)
                      << "\n";
        } else if (cmd_train->parsed()) {
            auto entries = load_manifest(train_manifest);
            std::vector<BinaryRaster> genuine, negatives;
            for (const ManifestEntry& e : entries) {
                if (e.kind != SampleKind::genuine) continue;
                if (e.writer == train_writer)
                    genuine.push_back(preprocess_file(e.path));
                else
                    negatives.push_back(preprocess_file(e.path));
            }
            if (genuine.empty())
                raise(Errc::too_few_samples, "no genuine samples for writer '" + train_writer + "'");
            note("training on " + std::to_string(genuine.size()) + " genuine / " +
                 std::to_string(negatives.size()) + " negative candidates");
            PlanarConfig cfg;
            cfg.hidden_secondary = train_hidden_sec;
            cfg.hidden_principal = train_hidden_pri;
            cfg.threshold = train_threshold;
            cfg.seed = seed;
            PlanarModel model = train_planar(train_writer, genuine, negatives, cfg);
            save_model(model, train_out);
            note("wrote " + train_out);
        } else if (cmd_verify->parsed()) {
            PlanarModel model = load_model(verify_model);
            BinaryRaster r = preprocess_file(verify_in);
            Verdict v = verify(model, r);
            std::cout << json{{"accepted", v.accepted},
                              {"principal_score", v.principal_score},
                              {"secondary_scores",
                               {v.secondary_scores[0], v.secondary_scores[1], v.secondary_scores[2]}},
                              {"fallback_segmentation", v.fallback_segmentation},
                              {"writer_id", model.writer_id}}
                             .dump(2)
                      << "\n";
            return v.accepted ? 0 : 2;
        } else if (cmd_eval->parsed()) {
            auto entries = load_manifest(eval_manifest);
            ProtocolSplit split = make_split(entries, eval_fraction, seed);
            EvalConfig cfg;
            cfg.repeats = eval_repeats;
            cfg.threads = threads;
            cfg.corpus_id = eval_manifest;
            note("evaluating " + std::to_string(split.writers.size()) + " writers, " +
                 std::to_string(eval_repeats) + " repeats");
            EvalReport report = run_protocol(split, cfg);
            emit_report(report, eval_out, ReportFormat::json);
            if (!eval_csv.empty()) emit_report(report, eval_csv, ReportFormat::csv);
            note("wrote " + eval_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "sigver: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
