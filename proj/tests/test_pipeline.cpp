#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>

#include "pitchml/config.hpp"
#include "pitchml/errors.hpp"
#include "pitchml/metrics.hpp"
#include "pitchml/model_json.hpp"
#include "pitchml/pipeline.hpp"
#include "pitchml/synth.hpp"
#include "test_util.hpp"

using namespace pitchml;
using namespace testutil;

namespace {

constexpr int kFs = 16000;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SynthSpec small_spec() {
  SynthSpec s;
  s.speakers = 2;
  s.utterances_per_speaker = 2;
  s.utterance_seconds = 4.0;
  return s;
}

}  // namespace

TEST_CASE("config") {
  SUBCASE("defaults are valid") {
    Config c;
    c.validate();
    CHECK(c.range.f0_min == 60.0);
    CHECK(c.range.f0_max == 400.0);
    CHECK(c.voicing_radius == 1);
    CHECK(c.fuser_radius == 2);
    CHECK(c.nmi_bins == 32);
  }
  SUBCASE("json overrides known keys") {
    Config c = config_from_json(
        R"({"f0_min": 70, "f0_max": 300, "voicing_radius": 2, "seed": 9,
            "candidates": ["f0_ac", "f0_cpp"]})");
    CHECK(c.range.f0_min == 70.0);
    CHECK(c.range.f0_max == 300.0);
    CHECK(c.voicing_radius == 2);
    CHECK(c.seed == 9);
    CHECK(c.candidate_subset == std::vector<int>{kF0Ac, kF0Cpp});
  }
  SUBCASE("unknown keys rejected") {
    CHECK_THROWS_AS(config_from_json(R"({"f0_minimum": 70})"), ValidationError);
  }
  SUBCASE("invalid ranges rejected") {
    CHECK_THROWS_AS(config_from_json(R"({"f0_min": 500, "f0_max": 300})"),
                    ValidationError);
    CHECK_THROWS_AS(config_from_json(R"({"nmi_bins": 1})"), ValidationError);
  }
  SUBCASE("bad candidate name rejected") {
    CHECK_THROWS_AS(config_from_json(R"({"candidates": ["f0_bogus"]})"),
                    ValidationError);
  }
}

TEST_CASE("manifest") {
  TempDir tmp("manifest");
  // create two dummy files the paths can point at
  save_waveform(tmp.file("a.wav"), {std::vector<double>(1600, 0.0), kFs});
  save_waveform(tmp.file("a_egg.wav"), {std::vector<double>(1600, 0.0), kFs});
  SUBCASE("round trip with and without egg") {
    CorpusManifest m = {{"spk0", tmp.file("a.wav"), tmp.file("a_egg.wav")},
                        {"spk1", tmp.file("a.wav"), ""}};
    save_manifest(tmp.file("m.tsv"), m);
    CorpusManifest r = load_manifest(tmp.file("m.tsv"));
    REQUIRE(r.size() == 2);
    CHECK(r[0].speaker == "spk0");
    CHECK(r[0].has_egg());
    CHECK_FALSE(r[1].has_egg());
  }
  SUBCASE("missing file rejected with the line number") {
    std::ofstream out(tmp.file("bad.tsv"));
    out << "spk0\t" << tmp.file("nope.wav") << "\n";
    out.close();
    CHECK_THROWS_WITH_AS(load_manifest(tmp.file("bad.tsv")),
                         doctest::Contains("line 1"), ValidationError);
  }
  SUBCASE("empty manifest rejected") {
    std::ofstream out(tmp.file("empty.tsv"));
    out << "# nothing but comments\n";
    out.close();
    CHECK_THROWS_AS(load_manifest(tmp.file("empty.tsv")), ValidationError);
  }
}

TEST_CASE("synthetic corpus generator") {
  TempDir tmp("synth");
  SUBCASE("fixed seed gives a bit-identical corpus") {
    SynthSpec spec = small_spec();
    SynthResult a = synth_corpus(spec, 5, tmp.file("a"), {});
    SynthResult b = synth_corpus(spec, 5, tmp.file("b"), {});
    REQUIRE(a.manifest.size() == b.manifest.size());
    for (std::size_t i = 0; i < a.manifest.size(); ++i) {
      CHECK(slurp(a.manifest[i].speech_path) == slurp(b.manifest[i].speech_path));
      CHECK(slurp(a.manifest[i].egg_path) == slurp(b.manifest[i].egg_path));
      CHECK(slurp(a.reference_paths[i]) == slurp(b.reference_paths[i]));
    }
  }
  SUBCASE("infinite snr means zero additive noise") {
    // same seed with snr = inf vs 0 dB: the clean corpus must be strictly
    // more periodic in its voiced frames (windowing caps the ac peak below
    // 1 even for a perfectly periodic signal, so compare rather than
    // demand an absolute ceiling)
    auto mean_voiced_ac = [&](double snr_db, const std::string& dir) {
      SynthSpec spec = small_spec();
      spec.snr_db = snr_db;
      SynthResult res = synth_corpus(spec, 6, tmp.file(dir), {});
      Waveform w = load_waveform(res.manifest[0].speech_path);
      PitchTrack ref = load_track_csv(res.reference_paths[0]);
      FeatureMatrix m = extract_all(w, {});
      double sum = 0.0, best = 0.0;
      int n = 0;
      for (int k = 0; k < m.grid.n_frames && k < ref.n_frames(); ++k) {
        if (!ref.frames[k].voiced) continue;
        sum += m.features[k][kAcPeak];
        best = std::max(best, m.features[k][kAcPeak]);
        ++n;
      }
      REQUIRE(n > 0);
      return std::pair<double, double>{sum / n, best};
    };
    auto [clean_mean, clean_best] =
        mean_voiced_ac(std::numeric_limits<double>::infinity(), "clean");
    auto [noisy_mean, noisy_best] = mean_voiced_ac(0.0, "noisy");
    CHECK(clean_mean > noisy_mean);
    CHECK(clean_best > 0.65);
  }
  SUBCASE("stored reference is recoverable from the pseudo egg (ffe < 0.5%)") {
    SynthSpec spec = small_spec();
    SynthResult res = synth_corpus(spec, 7, tmp.file("loop"), {});
    for (std::size_t i = 0; i < res.manifest.size(); ++i) {
      Waveform egg = load_waveform(res.manifest[i].egg_path);
      PitchTrack stored = load_track_csv(res.reference_paths[i]);
      FrameGrid grid = make_frame_grid(egg.sample_rate, egg.samples.size());
      ReferenceTrack rec = gci_to_reference(degg_peaks(egg, {}), grid, {});
      CHECK(ffe(rec.track, stored) < 0.5);
    }
  }
  SUBCASE("spec json parsing") {
    SynthSpec s = synth_spec_from_json(
        R"({"speakers": 3, "utterance_seconds": 2.5, "snr_db": "inf"})");
    CHECK(s.speakers == 3);
    CHECK(std::isinf(s.snr_db));
    CHECK_THROWS_AS(synth_spec_from_json(R"({"speakers": 0})"), ValidationError);
    CHECK_THROWS_AS(synth_spec_from_json("not json"), ValidationError);
  }
}

TEST_CASE("training pipeline") {
  TempDir tmp("train");
  SynthResult corpus = synth_corpus(small_spec(), 11, tmp.file("c"), {});
  Config config;

  SUBCASE("unsupervised kmeans with median fusion needs no labels") {
    CorpusManifest no_egg = corpus.manifest;
    for (auto& e : no_egg) e.egg_path.clear();
    ModelDocument doc =
        train_pipeline(no_egg, config, VoicingKind::kKMeans, FuserKind::kMedian);
    CHECK(doc.voicing.kind == VoicingKind::kKMeans);
    CHECK(doc.fuser.kind == FuserKind::kMedian);
  }
  SUBCASE("supervised kind without egg names the offending entries") {
    CorpusManifest no_egg = corpus.manifest;
    no_egg[1].egg_path.clear();
    CHECK_THROWS_WITH_AS(
        train_pipeline(no_egg, config, VoicingKind::kMlp, FuserKind::kMedian),
        doctest::Contains(no_egg[1].speech_path.c_str()), ValidationError);
  }
  SUBCASE("empty manifest rejected") {
    CHECK_THROWS_AS(train_pipeline({}, config, VoicingKind::kKMeans, FuserKind::kMedian),
                    ValidationError);
  }
  SUBCASE("supervised mlp reaches held-out ffe < 2%") {
    // longer utterances than the shared corpus so the classifier sees
    // enough frames; train on utterance 0 of each speaker, evaluate on 1
    SynthSpec spec = small_spec();
    spec.utterance_seconds = 10.0;
    SynthResult big = synth_corpus(spec, 11, tmp.file("big"), {});
    CorpusManifest train_set = {big.manifest[0], big.manifest[2]};
    ModelDocument doc =
        train_pipeline(train_set, config, VoicingKind::kMlp, FuserKind::kMedian);
    std::vector<EvalReport> reports;
    for (int i : {1, 3}) {
      Waveform w = load_waveform(big.manifest[i].speech_path);
      PitchTrack pred = track_waveform(w, doc);
      PitchTrack ref = load_track_csv(big.reference_paths[i]);
      reports.push_back(evaluate(pred, ref));
    }
    EvalReport avg = average_reports(reports);
    CHECK(avg.ffe < 2.0);
  }
  SUBCASE("model document round trips through json") {
    ModelDocument doc =
        train_pipeline(corpus.manifest, config, VoicingKind::kLogReg, FuserKind::kLinReg);
    save_model(tmp.file("m.json"), doc);
    ModelDocument r = load_model(tmp.file("m.json"));
    CHECK(r.version == 1);
    CHECK(r.voicing.kind == VoicingKind::kLogReg);
    CHECK(r.fuser.kind == FuserKind::kLinReg);
    // identical predictions from the reloaded model
    Waveform w = load_waveform(corpus.manifest[0].speech_path);
    PitchTrack a = track_waveform(w, doc);
    PitchTrack b = track_waveform(w, r);
    REQUIRE(a.n_frames() == b.n_frames());
    for (int i = 0; i < a.n_frames(); ++i) {
      CHECK(a.frames[i].voiced == b.frames[i].voiced);
      if (a.frames[i].f0) CHECK(*a.frames[i].f0 == *b.frames[i].f0);
    }
  }
  SUBCASE("unknown model version rejected") {
    ModelDocument doc =
        train_pipeline(corpus.manifest, config, VoicingKind::kKMeans, FuserKind::kMedian);
    std::string j = model_to_json(doc);
    const auto pos = j.find("\"version\"");
    REQUIRE(pos != std::string::npos);
    std::string bad = j;
    bad.replace(bad.find(':', pos) + 1, bad.find(',', pos) - bad.find(':', pos) - 1,
                " 999");
    CHECK_THROWS_AS(model_from_json(bad), ValidationError);
  }
}

TEST_CASE("tracking") {
  TempDir tmp("track");
  SynthResult corpus = synth_corpus(small_spec(), 13, tmp.file("c"), {});
  Config config;
  ModelDocument doc =
      train_pipeline(corpus.manifest, config, VoicingKind::kMlp, FuserKind::kMedian);

  SUBCASE("silence is fully unvoiced") {
    std::mt19937_64 rng(1);
    Waveform silence{white_noise(2 * kFs, rng, 1e-4), kFs};
    PitchTrack t = track_waveform(silence, doc);
    int voiced = 0;
    for (const auto& fr : t.frames) voiced += fr.voiced;
    CHECK(voiced <= t.n_frames() / 50);
  }
  SUBCASE("a clean 200 Hz pulse train tracks at 200 Hz") {
    std::vector<double> x = pulse_train(200.0, kFs, 2 * kFs, 1.0);
    double lp = 0.0, xin = 0.0, yout = 0.0;
    for (double& v : x) {
      lp = 0.96 * lp + 0.04 * v;
      const double y = lp - xin + 0.995 * yout;
      xin = lp;
      yout = y;
      v = 20.0 * y;
    }
    PitchTrack t = track_waveform({x, kFs}, doc);
    int voiced = 0, close = 0;
    for (const auto& fr : t.frames) {
      if (!fr.voiced) continue;
      ++voiced;
      if (std::abs(*fr.f0 - 200.0) <= 2.0) ++close;
    }
    CHECK(voiced > t.n_frames() / 2);
    CHECK(close >= voiced * 97 / 100);
  }
  SUBCASE("voiced island localized within 2 frames of the pulse segment") {
    std::mt19937_64 rng(3);
    const int seg = kFs;  // 1 s noise | 1 s pulses | 1 s noise
    std::vector<double> x(3 * seg);
    auto noise = white_noise(3 * seg, rng, 0.03);
    for (int i = 0; i < 3 * seg; ++i) x[i] = noise[i];
    auto pulses = pulse_train(180.0, kFs, seg, 1.0);
    double lp = 0.0, xin = 0.0, yout = 0.0;
    for (double& v : pulses) {
      lp = 0.96 * lp + 0.04 * v;
      const double y = lp - xin + 0.995 * yout;
      xin = lp;
      yout = y;
      v = 20.0 * y;
    }
    for (int i = 0; i < seg; ++i) x[seg + i] += pulses[i];
    PitchTrack t = track_waveform({x, kFs}, doc);
    const int frame_lo = seg / 80, frame_hi = 2 * seg / 80;  // hop = 80
    int wrong = 0;
    for (int k = 0; k < t.n_frames(); ++k) {
      const bool should = k >= frame_lo && k < frame_hi;
      if (k >= frame_lo - 2 && k < frame_lo + 2) continue;  // boundary slack
      if (k >= frame_hi - 2 && k < frame_hi + 2) continue;
      if (t.frames[k].voiced != should) ++wrong;
    }
    CHECK(wrong <= t.n_frames() / 50);
  }
  SUBCASE("grid length matches the input waveform") {
    std::mt19937_64 rng(5);
    Waveform w{white_noise(12345, rng, 0.05), kFs};
    PitchTrack t = track_waveform(w, doc);
    CHECK(t.n_frames() == make_frame_grid(kFs, w.samples.size()).n_frames);
  }
  SUBCASE("full pipeline is deterministic") {
    Waveform w = load_waveform(corpus.manifest[1].speech_path);
    PitchTrack a = track_waveform(w, doc);
    PitchTrack b = track_waveform(w, doc);
    for (int i = 0; i < a.n_frames(); ++i) {
      CHECK(a.frames[i].voiced == b.frames[i].voiced);
      if (a.frames[i].f0) CHECK(*a.frames[i].f0 == *b.frames[i].f0);
    }
  }
}

TEST_CASE("speaker exclusion audit for held-out evaluation") {
  TempDir tmp("loso");
  SynthSpec spec = small_spec();
  spec.utterance_seconds = 10.0;
  SynthResult corpus = synth_corpus(spec, 17, tmp.file("c"), {});
  // leave speaker spk1 out: the training manifest must contain no spk1 entry
  CorpusManifest train_set;
  for (const auto& e : corpus.manifest)
    if (e.speaker != "spk1") train_set.push_back(e);
  for (const auto& e : train_set) CHECK(e.speaker == "spk0");
  Config config;
  ModelDocument doc =
      train_pipeline(train_set, config, VoicingKind::kLogReg, FuserKind::kMedian);
  // the held-out speaker still tracks reasonably
  Waveform w = load_waveform(corpus.manifest[2].speech_path);
  PitchTrack pred = track_waveform(w, doc);
  PitchTrack ref = load_track_csv(corpus.reference_paths[2]);
  CHECK(ffe(pred, ref) < 10.0);
}
