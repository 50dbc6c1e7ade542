#include "pitchml/synth.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "json.hpp"
#include "pitchml/errors.hpp"
#include "pitchml/framing.hpp"
#include "pitchml/ground_truth.hpp"
#include "pitchml/waveform.hpp"

namespace pitchml {

namespace {

using nlohmann::json;

struct Resonator {
  double b1, b2;  // y[n] = x[n] + b1*y[n-1] + b2*y[n-2]
};

Resonator make_resonator(double freq, double bandwidth, int fs) {
  const double r = std::exp(-M_PI * bandwidth / fs);
  return {2.0 * r * std::cos(2.0 * M_PI * freq / fs), -r * r};
}

void apply_resonator(std::vector<double>& x, const Resonator& f) {
  double y1 = 0.0, y2 = 0.0;
  for (double& v : x) {
    const double y = v + f.b1 * y1 + f.b2 * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

struct Segment {
  int64_t start, stop;
  bool voiced;
};

}  // namespace

SynthSpec synth_spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("synth spec is not valid JSON: ") + e.what());
  }
  SynthSpec s;
  s.speakers = j.value("speakers", s.speakers);
  s.utterances_per_speaker = j.value("utterances_per_speaker", s.utterances_per_speaker);
  s.utterance_seconds = j.value("utterance_seconds", s.utterance_seconds);
  s.sample_rate = j.value("sample_rate", s.sample_rate);
  if (j.contains("snr_db")) {
    if (j.at("snr_db").is_string() && j.at("snr_db").get<std::string>() == "inf")
      s.snr_db = std::numeric_limits<double>::infinity();
    else
      s.snr_db = j.at("snr_db").get<double>();
  }
  if (j.contains("base_f0")) s.base_f0 = j.at("base_f0").get<std::vector<double>>();
  if (s.speakers <= 0 || s.utterances_per_speaker <= 0 || s.utterance_seconds <= 0.5 ||
      s.sample_rate < 8000 || s.base_f0.empty())
    throw ValidationError("synth spec out of range");
  return s;
}

SynthResult synth_corpus(const SynthSpec& spec, uint64_t seed,
                         const std::string& out_dir, const F0SearchRange& range) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SynthResult result;
  const int fs_hz = spec.sample_rate;
  const int64_t utt_len = static_cast<int64_t>(spec.utterance_seconds * fs_hz);

  for (int spk = 0; spk < spec.speakers; ++spk) {
    const double base_f0 = spec.base_f0[spk % spec.base_f0.size()];
    const Resonator formant1 =
        make_resonator(450.0 + 450.0 * unit(rng), 80.0 + 120.0 * unit(rng), fs_hz);
    const Resonator formant2 =
        make_resonator(1200.0 + 800.0 * unit(rng), 100.0 + 120.0 * unit(rng), fs_hz);

    for (int utt = 0; utt < spec.utterances_per_speaker; ++utt) {
      // alternating voiced/noise segments with random durations
      std::vector<Segment> segments;
      bool voiced = unit(rng) < 0.5;
      int64_t pos = 0;
      while (pos < utt_len) {
        // long sustained voiced stretches keep frame-level boundary effects
        // (windows straddling a voicing edge) a small fraction of the data
        const double dur_s = voiced ? 1.5 + 1.0 * unit(rng) : 0.3 + 0.3 * unit(rng);
        int64_t stop = std::min<int64_t>(utt_len, pos + static_cast<int64_t>(dur_s * fs_hz));
        segments.push_back({pos, stop, voiced});
        pos = stop;
        voiced = !voiced;
      }

      // excitation impulses + exact pulse positions
      std::vector<double> excitation(static_cast<std::size_t>(utt_len), 0.0);
      GciSequence gcis;
      for (const Segment& seg : segments) {
        if (!seg.voiced) continue;
        const double phase = 2.0 * M_PI * unit(rng);
        double t = static_cast<double>(seg.start);
        while (true) {
          const double f0 =
              base_f0 * (1.0 + 0.08 * std::sin(2.0 * M_PI * 0.6 * t / fs_hz + phase));
          const double period = fs_hz / f0;
          if (t + period >= static_cast<double>(seg.stop)) break;
          const int64_t g = static_cast<int64_t>(std::llround(t));
          if (g < utt_len) {
            excitation[g] = 1.0;
            gcis.push_back(g);
          }
          t += period;
        }
      }

      std::vector<double> speech = excitation;
      // glottal-like source shaping: -12 dB/oct rolloff above ~90 Hz plus a
      // DC blocker, so the voiced signal is zero-mean like AC-coupled speech
      {
        const double pole = std::exp(-2.0 * M_PI * 90.0 / fs_hz);
        double lp1 = 0.0, lp2 = 0.0;
        for (double& v : speech) {
          lp1 = pole * lp1 + (1.0 - pole) * v;
          lp2 = pole * lp2 + (1.0 - pole) * lp1;
          v = lp2;
        }
        double x1 = 0.0, y1 = 0.0;
        for (double& v : speech) {
          const double y = v - x1 + 0.995 * y1;
          x1 = v;
          y1 = y;
          v = y;
        }
      }
      apply_resonator(speech, formant1);
      apply_resonator(speech, formant2);

      // scale the voiced regions to a fixed RMS
      double energy = 0.0;
      int64_t voiced_samples = 0;
      for (const Segment& seg : segments) {
        if (!seg.voiced) continue;
        for (int64_t n = seg.start; n < seg.stop; ++n) energy += speech[n] * speech[n];
        voiced_samples += seg.stop - seg.start;
      }
      const double target_rms = 0.2;
      if (voiced_samples > 0 && energy > 0.0) {
        const double scale = target_rms / std::sqrt(energy / voiced_samples);
        for (double& v : speech) v *= scale;
      }

      // additive noise: SNR-controlled floor everywhere, plus unvoiced
      // segments of varied character so unvoiced frames are not one blob
      const double noise_sigma =
          std::isinf(spec.snr_db) ? 0.0 : target_rms * std::pow(10.0, -spec.snr_db / 20.0);
      if (noise_sigma > 0.0) {
        for (double& v : speech) v += noise_sigma * gauss(rng);
      }
      // unvoiced-segment noise fades in/out near the voiced boundaries, like
      // the energy dips around voicing onsets in natural speech
      const int64_t fade_len = static_cast<int64_t>(std::lround(0.06 * fs_hz));
      for (const Segment& seg : segments) {
        if (seg.voiced) continue;
        const auto fade = [&](int64_t n) {
          const int64_t from_edge = std::min(n - seg.start, seg.stop - 1 - n);
          if (from_edge >= fade_len) return 1.0;
          return 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(from_edge) /
                                      static_cast<double>(fade_len));
        };
        const int type = static_cast<int>(unit(rng) * 3.0);
        if (type == 0) {
          for (int64_t n = seg.start; n < seg.stop; ++n)
            speech[n] += fade(n) * 0.04 * gauss(rng);
        } else if (type == 1) {
          double state = 0.0;  // one-pole lowpass noise
          for (int64_t n = seg.start; n < seg.stop; ++n) {
            state = 0.98 * state + 0.02 * gauss(rng);
            speech[n] += fade(n) * 0.5 * state;
          }
        } else {
          for (int64_t n = seg.start; n < seg.stop; ++n)
            speech[n] += fade(n) * 0.004 * gauss(rng);
        }
      }

      // pseudo-EGG: unit sawtooth per period, sharp rise at each pulse
      std::vector<double> egg(static_cast<std::size_t>(utt_len), 0.0);
      const int64_t max_period = static_cast<int64_t>(fs_hz / range.f0_min);
      auto draw_period = [&](int64_t g0, int64_t g1) {
        for (int64_t n = g0; n < std::min(g1, utt_len); ++n) {
          egg[n] = 1.0 - static_cast<double>(n - g0) / static_cast<double>(g1 - g0);
        }
      };
      for (std::size_t i = 0; i < gcis.size(); ++i) {
        const int64_t g0 = gcis[i];
        const int64_t next = i + 1 < gcis.size() ? gcis[i + 1] : utt_len;
        if (next - g0 <= max_period) {
          draw_period(g0, next);
        } else if (i > 0 && g0 - gcis[i - 1] <= max_period) {
          // last pulse of a voiced run: close it with the previous period so
          // the ground-truth module can recover every excitation instant
          draw_period(g0, g0 + (g0 - gcis[i - 1]));
        }
      }

      const std::string stem = out_dir + "/spk" + std::to_string(spk) + "_utt" +
                               std::to_string(utt);
      Waveform speech_wave{std::move(speech), fs_hz};
      Waveform egg_wave{std::move(egg), fs_hz};
      save_waveform(stem + ".wav", speech_wave);
      save_waveform(stem + "_egg.wav", egg_wave);

      const FrameGrid grid = make_frame_grid(fs_hz, speech_wave.samples.size());
      ReferenceTrack ref = gci_to_reference(gcis, grid, range);
      save_track_csv(stem + "_ref.csv", ref.track);

      result.manifest.push_back(
          {"spk" + std::to_string(spk), stem + ".wav", stem + "_egg.wav"});
      result.reference_paths.push_back(stem + "_ref.csv");
    }
  }

  result.manifest_path = out_dir + "/manifest.tsv";
  save_manifest(result.manifest_path, result.manifest);
  return result;
}

}  // namespace pitchml
