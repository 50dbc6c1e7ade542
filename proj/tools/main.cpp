// pitchml command-line front end: feature extraction, training, tracking,
// EGG ground truth, evaluation, NMI assessment, and synthetic corpora.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "pitchml/errors.hpp"
#include "pitchml/metrics.hpp"
#include "pitchml/pipeline.hpp"
#include "pitchml/synth.hpp"

namespace fs = std::filesystem;
using namespace pitchml;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<double> f0_min;
  std::optional<double> f0_max;

  Config resolve() const {
    Config c = config_path.empty() ? Config{} : load_config(config_path);
    if (seed) c.seed = *seed;
    if (f0_min) c.range.f0_min = *f0_min;
    if (f0_max) c.range.f0_max = *f0_max;
    c.validate();
    return c;
  }
};

// Locates the per-utterance track CSV for a manifest entry inside a
// directory: <stem>.csv, falling back to <stem>_ref.csv.
std::string locate_track(const std::string& dir, const std::string& speech_path) {
  const std::string stem = fs::path(speech_path).stem().string();
  for (const char* suffix : {".csv", "_ref.csv"}) {
    const std::string candidate = dir + "/" + stem + suffix;
    if (fs::exists(candidate)) return candidate;
  }
  throw ValidationError("no track CSV for " + stem + " under " + dir);
}

void run_eval(const GlobalOpts& global, const std::string& pred_arg,
              const std::string& ref_arg, const std::string& manifest_path,
              const std::string& out_path) {
  EvalReport report;
  if (manifest_path.empty()) {
    report = evaluate(load_track_csv(pred_arg), load_track_csv(ref_arg));
  } else {
    // per-speaker frame pooling, then equal-weight speaker averaging
    CorpusManifest manifest = load_manifest(manifest_path);
    std::map<std::string, PitchTrack> pred_by_speaker, ref_by_speaker;
    for (const ManifestEntry& e : manifest) {
      PitchTrack pred = load_track_csv(locate_track(pred_arg, e.speech_path));
      PitchTrack ref = load_track_csv(locate_track(ref_arg, e.speech_path));
      if (pred.n_frames() != ref.n_frames())
        throw ValidationError("grid mismatch for " + e.speech_path);
      auto& ps = pred_by_speaker[e.speaker];
      auto& rs = ref_by_speaker[e.speaker];
      ps.frames.insert(ps.frames.end(), pred.frames.begin(), pred.frames.end());
      rs.frames.insert(rs.frames.end(), ref.frames.begin(), ref.frames.end());
    }
    std::vector<EvalReport> reports;
    for (const auto& [speaker, pred] : pred_by_speaker) {
      reports.push_back(evaluate(pred, ref_by_speaker[speaker]));
    }
    report = average_reports(reports);
  }
  (void)global;
  std::cout << report_to_table(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw RuntimeError("cannot write report: " + out_path);
    out << report_to_json(report);
  }
}

void run_nmi(const GlobalOpts& global, const std::string& features_path,
             const std::string& ref_path) {
  const Config config = global.resolve();
  FeatureMatrix m = load_feature_csv(features_path);
  PitchTrack ref = load_track_csv(ref_path);
  if (ref.n_frames() != static_cast<int>(m.features.size()))
    throw ValidationError("feature CSV and reference track differ in frame count");
  std::vector<int> labels(m.features.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = ref.frames[i].voiced ? 1 : 0;

  std::printf("%-14s %8s\n", "feature", "NMI");
  for (int f = 0; f < kNumVoicingFeatures; ++f) {
    std::vector<double> column(m.features.size());
    for (std::size_t i = 0; i < column.size(); ++i) column[i] = m.features[i][f];
    std::printf("%-14s %8.4f\n", kFeatureNames[f], nmi(column, labels, config.nmi_bins));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"engineered-feature pitch detection toolkit"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--config", global.config_path, "JSON config file");
  app.add_option("--seed", global.seed, "override the RNG seed");
  app.add_option("--f0-min", global.f0_min, "F0 search range lower bound (Hz)");
  app.add_option("--f0-max", global.f0_max, "F0 search range upper bound (Hz)");

  // features
  auto* cmd_features = app.add_subcommand("features", "extract per-frame features to CSV");
  std::string in_wav, out_path;
  cmd_features->add_option("wav", in_wav, "input WAV")->required();
  cmd_features->add_option("-o,--output", out_path, "output CSV")->required();

  // train
  auto* cmd_train = app.add_subcommand("train", "train voicing model and F0 fuser");
  std::string manifest_path, voicing_name = "mlp", fuser_name = "median", model_path;
  cmd_train->add_option("--manifest", manifest_path, "TSV manifest")->required();
  cmd_train->add_option("--voicing", voicing_name, "kmeans|gmm|logreg|knn|mlp");
  cmd_train->add_option("--fuser", fuser_name, "median|linreg|knn|mlp-idx");
  cmd_train->add_option("-o,--output", model_path, "output model JSON")->required();

  // track
  auto* cmd_track = app.add_subcommand("track", "run pitch detection on a WAV");
  std::string track_wav, track_model, track_out;
  cmd_track->add_option("wav", track_wav, "input WAV")->required();
  cmd_track->add_option("--model", track_model, "trained model JSON")->required();
  cmd_track->add_option("-o,--output", track_out, "output track CSV")->required();

  // gt
  auto* cmd_gt = app.add_subcommand("gt", "derive reference track from an EGG WAV");
  std::string gt_egg, gt_grid_from, gt_out;
  cmd_gt->add_option("egg", gt_egg, "EGG WAV")->required();
  cmd_gt->add_option("--grid-from", gt_grid_from, "speech WAV defining the frame grid")
      ->required();
  cmd_gt->add_option("-o,--output", gt_out, "output reference CSV")->required();

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "VDE/GPE/FPE/FFE between tracks");
  std::string eval_pred, eval_ref, eval_manifest, eval_out;
  cmd_eval->add_option("--pred", eval_pred, "predicted track CSV (or directory)")
      ->required();
  cmd_eval->add_option("--ref", eval_ref, "reference track CSV (or directory)")
      ->required();
  cmd_eval->add_option("--manifest", eval_manifest,
                       "speaker manifest for equal-weight speaker averaging");
  cmd_eval->add_option("-o,--output", eval_out, "output report JSON");

  // nmi
  auto* cmd_nmi = app.add_subcommand("nmi", "per-feature NMI against reference voicing");
  std::string nmi_features, nmi_ref;
  cmd_nmi->add_option("--features", nmi_features, "feature CSV")->required();
  cmd_nmi->add_option("--ref", nmi_ref, "reference track CSV")->required();

  // synth
  auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic corpus");
  std::string synth_spec_path, synth_out;
  cmd_synth->add_option("--spec", synth_spec_path, "synthesis spec JSON");
  cmd_synth->add_option("-o,--output", synth_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*cmd_features) {
      const Config config = global.resolve();
      save_feature_csv(out_path, extract_all(load_waveform(in_wav), config.range));
    } else if (*cmd_train) {
      const Config config = global.resolve();
      ModelDocument doc =
          train_pipeline(load_manifest(manifest_path), config,
                         voicing_kind_from_string(voicing_name),
                         fuser_kind_from_string(fuser_name));
      save_model(model_path, doc);
    } else if (*cmd_track) {
      ModelDocument doc = load_model(track_model);
      save_track_csv(track_out, track_waveform(load_waveform(track_wav), doc));
    } else if (*cmd_gt) {
      const Config config = global.resolve();
      Waveform egg = load_waveform(gt_egg);
      Waveform speech = load_waveform(gt_grid_from);
      if (egg.sample_rate != speech.sample_rate)
        throw ValidationError("EGG and grid WAV sample rates differ");
      FrameGrid grid = make_frame_grid(speech.sample_rate, speech.samples.size());
      const int64_t diff = std::llabs(static_cast<int64_t>(egg.samples.size()) -
                                      static_cast<int64_t>(speech.samples.size()));
      if (diff > grid.hop)
        throw ValidationError("EGG and grid WAV durations differ by more than one hop");
      FrameGrid egg_grid = make_frame_grid(egg.sample_rate, egg.samples.size());
      grid.n_frames = std::min(grid.n_frames, egg_grid.n_frames);
      ReferenceTrack ref =
          gci_to_reference(degg_peaks(egg, config.range, config.gt), grid, config.range,
                           config.gt);
      save_track_csv(gt_out, ref.track);
    } else if (*cmd_eval) {
      run_eval(global, eval_pred, eval_ref, eval_manifest, eval_out);
    } else if (*cmd_nmi) {
      run_nmi(global, nmi_features, nmi_ref);
    } else if (*cmd_synth) {
      const Config config = global.resolve();
      SynthSpec spec;
      if (!synth_spec_path.empty()) {
        std::ifstream in(synth_spec_path);
        if (!in) throw ValidationError("cannot open synth spec: " + synth_spec_path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        spec = synth_spec_from_json(text);
      }
      SynthResult res = synth_corpus(spec, config.seed, synth_out, config.range);
      std::cout << res.manifest_path << "\n";
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
