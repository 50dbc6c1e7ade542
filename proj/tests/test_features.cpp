#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "pitchml/errors.hpp"
#include "pitchml/features.hpp"
#include "pitchml/fft.hpp"
#include "pitchml/framing.hpp"
#include "pitchml/lpc.hpp"
#include "test_util.hpp"

using namespace pitchml;
using namespace testutil;

namespace {
constexpr int kFs = 16000;
constexpr int kFrameLen = 480;
const F0SearchRange kRange{};  // [60, 400]

// Count strict sign changes directly — the independent zcr oracle.
double crossing_count_rate(const std::vector<double>& x) {
  int crossings = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const bool a = x[i - 1] >= 0.0, b = x[i] >= 0.0;
    if (a != b) ++crossings;
  }
  return static_cast<double>(crossings) / (x.size() - 1);
}
}  // namespace

TEST_CASE("zcr") {
  CHECK(zcr({1, -1, 1, -1}) == 1.0);
  CHECK(zcr(std::vector<double>(100, 0.7)) == 0.0);
  std::vector<double> s = sine(100.0, kFs, kFrameLen);
  CHECK(zcr(s) == doctest::Approx(0.0125).epsilon(0.16));  // within +-0.002
  CHECK(zcr(s) == doctest::Approx(crossing_count_rate(s)).epsilon(1e-12));
  CHECK_THROWS_AS(zcr({}), ValidationError);
}

TEST_CASE("ac peak and f0") {
  SUBCASE("200 Hz sine") {
    // raw sine: the per-lag energy normalization makes AC at the period
    // exactly 1 for any perfectly periodic frame
    auto r = ac_peak_and_f0(sine(200.0, kFs, kFrameLen), kRange, kFs);
    CHECK(r.peak >= 0.99);
    CHECK(r.f0 == doctest::Approx(200.0).epsilon(0.005));
  }
  SUBCASE("white noise keeps the peak low with probability > 0.99") {
    std::mt19937_64 rng(17);
    int high = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      auto r = ac_peak_and_f0(windowed(white_noise(kFrameLen, rng)), kRange, kFs);
      if (r.peak >= 0.5) ++high;
    }
    CHECK(high <= 5);  // 0.5% of 1000 trials, generous against the 1% bound
  }
  SUBCASE("zero frame convention") {
    auto r = ac_peak_and_f0(std::vector<double>(kFrameLen, 0.0), kRange, kFs);
    CHECK(r.peak == 0.0);
    CHECK(r.f0 == kRange.f0_min);
  }
  SUBCASE("empty lag range rejected") {
    // 400 Hz needs lag 20 at 8 kHz; a 16-sample frame has no valid lag left.
    CHECK_THROWS_AS(ac_peak_and_f0(std::vector<double>(16, 1.0), kRange, 8000),
                    ValidationError);
  }
}

TEST_CASE("clarity") {
  CHECK(clarity(sine(150.0, kFs, kFrameLen), kRange, kFs) >= 0.99);
  CHECK(clarity(std::vector<double>(kFrameLen, 0.0), kRange, kFs) == 0.0);

  SUBCASE("monotone in snr") {
    std::mt19937_64 rng(5);
    std::vector<double> snrs = {-10.0, 0.0, 10.0, 30.0};
    std::vector<double> values;
    for (double snr : snrs) {
      // average over draws to tame noise-realization variance
      double acc = 0.0;
      const int reps = 20;
      for (int r = 0; r < reps; ++r) {
        std::vector<double> x = sine(150.0, kFs, kFrameLen);
        std::vector<double> n = white_noise(kFrameLen, rng);
        const double sigma = std::sqrt(0.5) * std::pow(10.0, -snr / 20.0);
        for (int i = 0; i < kFrameLen; ++i) x[i] += sigma * n[i];
        acc += clarity(windowed(x), kRange, kFs);
      }
      values.push_back(acc / reps);
    }
    for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] > values[i - 1]);
    // strictly between noise-only and clean at 0 dB
    std::vector<double> noise_only = windowed(white_noise(kFrameLen, rng));
    const double lo = clarity(noise_only, kRange, kFs);
    const double hi = clarity(windowed(sine(150.0, kFs, kFrameLen)), kRange, kFs);
    CHECK(values[1] > lo);
    CHECK(values[1] < hi);
  }
}

TEST_CASE("spectral tilt") {
  const int fft_size = default_fft_size(kFrameLen);
  SUBCASE("impulse frame is flat") {
    std::vector<double> frame(kFrameLen, 0.0);
    frame[0] = 1.0;
    auto db = magnitude_spectrum_db(frame, fft_size);
    CHECK(spectral_tilt(db, fft_size, kFs) == doctest::Approx(0.0).scale(1.0).epsilon(0.01));
  }
  SUBCASE("exact -6 dB/kHz ramp") {
    std::vector<double> db(fft_size / 2 + 1);
    for (std::size_t k = 0; k < db.size(); ++k) {
      const double khz = k * static_cast<double>(kFs) / fft_size / 1000.0;
      db[k] = 10.0 - 6.0 * khz;
    }
    CHECK(spectral_tilt(db, fft_size, kFs) == doctest::Approx(-6.0).epsilon(0.002));
  }
  SUBCASE("lowpass noise tilts more negative than white noise") {
    std::mt19937_64 rng(23);
    std::vector<double> white = white_noise(kFrameLen, rng);
    std::vector<double> lowpassed(kFrameLen);
    double state = 0.0;
    for (int i = 0; i < kFrameLen; ++i) {
      state = 0.9 * state + 0.1 * white[i];
      lowpassed[i] = state;
    }
    const double tw =
        spectral_tilt(magnitude_spectrum_db(windowed(white), fft_size), fft_size, kFs);
    const double tl = spectral_tilt(magnitude_spectrum_db(windowed(lowpassed), fft_size),
                                    fft_size, kFs);
    CHECK(tl < tw);
  }
  SUBCASE("too few bins rejected") {
    std::vector<double> db(8, 0.0);
    CHECK_THROWS_AS(spectral_tilt(db, 14, kFs), ValidationError);
  }
}

TEST_CASE("harmonic summation (ssh)") {
  const int fft_size = default_fft_size(kFrameLen);
  SUBCASE("pulse train at 150 Hz") {
    std::vector<double> frame = windowed(pulse_train(150.0, kFs, kFrameLen));
    double rms = 0.0;
    for (double v : frame) rms += v * v;
    rms = std::sqrt(rms / frame.size());
    auto amp = amplitude_spectrum(frame, fft_size);
    auto r = harmonic_summation(amp, fft_size, kFs, kRange, rms);
    const double bin_hz = static_cast<double>(kFs) / fft_size;
    CHECK(std::abs(r.f0 - 150.0) <= bin_hz);
    // subharmonic penalized: evaluate the raw comb score at 150 vs 75 Hz
    auto score_at = [&](double f) {
      double s = 0.0;
      for (int k = 1; k <= 5; ++k) {
        const int bh = static_cast<int>(std::llround(k * f / bin_hz));
        const int bs = static_cast<int>(std::llround((k - 0.5) * f / bin_hz));
        if (bh < static_cast<int>(amp.size())) s += amp[bh];
        if (bs < static_cast<int>(amp.size())) s -= amp[bs];
      }
      return s;
    };
    CHECK(score_at(150.0) > score_at(75.0));
  }
  SUBCASE("white noise scores near zero relative to a pulse train") {
    // band-limited pulse train (first 5 harmonics, matching the summation
    // depth) over a long frame, so the pulse energy is concentrated in
    // exactly the bins the comb score samples
    const int n = 4096;
    const int big_fft = default_fft_size(n);
    std::mt19937_64 rng(31);
    std::vector<double> pulse(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int k = 1; k <= 5; ++k) pulse[i] += std::cos(2.0 * M_PI * 150.0 * k * i / kFs);
    }
    pulse = windowed(pulse);
    auto rms_of = [](const std::vector<double>& f) {
      double e = 0.0;
      for (double v : f) e += v * v;
      return std::sqrt(e / f.size());
    };
    auto pr = harmonic_summation(amplitude_spectrum(pulse, big_fft), big_fft, kFs,
                                 kRange, rms_of(pulse));
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      std::vector<double> noise = windowed(white_noise(n, rng));
      auto nr = harmonic_summation(amplitude_spectrum(noise, big_fft), big_fft, kFs,
                                   kRange, rms_of(noise));
      worst = std::max(worst, std::abs(nr.normalized));
    }
    CHECK(worst < 0.1 * pr.normalized);
  }
  SUBCASE("zero frame convention") {
    std::vector<double> amp(fft_size / 2 + 1, 0.0);
    auto r = harmonic_summation(amp, fft_size, kFs, kRange, 0.0);
    CHECK(r.normalized == 0.0);
    CHECK(r.unnormalized == 0.0);
    CHECK(r.f0 == kRange.f0_min);
  }
  SUBCASE("harmonics beyond nyquist rejected") {
    std::vector<double> amp(fft_size / 2 + 1, 1.0);
    // 5 * 900 Hz > 4 kHz Nyquist at 8 kHz
    CHECK_THROWS_AS(
        harmonic_summation(amp, fft_size, 8000, {900.0, 1000.0}, 1.0), ValidationError);
  }
}

TEST_CASE("lp residual") {
  std::mt19937_64 rng(41);
  SUBCASE("white noise passes through nearly unchanged spectrally") {
    Waveform w{white_noise(4096, rng, 0.3), kFs};
    LpResidual r = lp_residual(w);
    REQUIRE(r.samples.size() == w.samples.size());
    std::vector<double> in(w.samples.begin() + 512, w.samples.begin() + 1536);
    std::vector<double> out(r.samples.begin() + 512, r.samples.begin() + 1536);
    CHECK(std::abs(spectral_flatness_db(out) - spectral_flatness_db(in)) < 1.0);
  }
  SUBCASE("ar(2) colored noise comes out flatter") {
    std::vector<double> noise = white_noise(4096, rng, 0.3);
    std::vector<double> colored(noise.size(), 0.0);
    for (std::size_t i = 2; i < noise.size(); ++i) {
      colored[i] = noise[i] + 1.3 * colored[i - 1] - 0.7 * colored[i - 2];
    }
    Waveform w{colored, kFs};
    LpResidual r = lp_residual(w);
    std::vector<double> in(w.samples.begin() + 512, w.samples.begin() + 1536);
    std::vector<double> out(r.samples.begin() + 512, r.samples.begin() + 1536);
    CHECK(spectral_flatness_db(out) > spectral_flatness_db(in));
  }
  SUBCASE("zero signal gives zero residual") {
    Waveform w{std::vector<double>(2048, 0.0), kFs};
    LpResidual r = lp_residual(w);
    for (double v : r.samples) CHECK(v == 0.0);
  }
}

TEST_CASE("levinson-durbin solves the normal equations") {
  // AR(2) process autocorrelation satisfies the Yule-Walker recursion.
  const double a1 = 1.1, a2 = -0.5;
  std::vector<double> r(4);
  r[0] = 1.0;
  r[1] = a1 / (1.0 - a2);
  r[2] = a1 * r[1] + a2 * r[0];
  r[3] = a1 * r[2] + a2 * r[1];
  auto res = levinson_durbin(r, 2);
  REQUIRE(res.coeffs.size() == 3);  // coeffs[0] unused, predictor in [1..order]
  CHECK(res.coeffs[1] == doctest::Approx(a1).epsilon(1e-9));
  CHECK(res.coeffs[2] == doctest::Approx(a2).epsilon(1e-9));
  CHECK(res.stable);
}

TEST_CASE("cpp") {
  const int fft_size = default_fft_size(kFrameLen);
  SUBCASE("pulse train at 100 Hz") {
    // 128 ms frame: the Hann mainlobe (~2 bins) must be narrower than the
    // 100 Hz harmonic spacing for the log spectrum to show a deep comb
    const int n = 2048;
    auto r = cpp(windowed(pulse_train(100.0, kFs, n)), kRange, kFs, default_fft_size(n));
    CHECK(std::abs(r.f0 - 100.0) <= 2.0);
    CHECK(r.cpp_db > 10.0);
  }
  SUBCASE("white noise stays below 5 dB") {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 30; ++t) {
      auto r = cpp(windowed(white_noise(kFrameLen, rng)), kRange, kFs, fft_size);
      CHECK(r.cpp_db < 5.0);
    }
  }
  SUBCASE("zero frame convention") {
    auto r = cpp(std::vector<double>(kFrameLen, 0.0), kRange, kFs, fft_size);
    CHECK(r.cpp_db == 0.0);
    CHECK(r.f0 == kRange.f0_min);
  }
}

TEST_CASE("mean f0 estimate") {
  SUBCASE("uniform track") {
    std::vector<PeakF0> track(50, {0.99, 200.0});
    auto e = estimate_mean_f0(track);
    CHECK(e.mean_f0 == 200.0);
    CHECK_FALSE(e.fallback);
  }
  SUBCASE("noise frames below the gate are ignored") {
    std::vector<PeakF0> track;
    for (int i = 0; i < 20; ++i) track.push_back({0.2, 73.0 + i});  // spurious
    for (int i = 0; i < 20; ++i) track.push_back({0.9, 150.0});
    auto e = estimate_mean_f0(track);
    CHECK(e.mean_f0 == 150.0);
    CHECK_FALSE(e.fallback);
  }
  SUBCASE("fallback to the global median") {
    std::vector<PeakF0> track = {{0.3, 100.0}, {0.4, 120.0}, {0.2, 140.0}};
    auto e = estimate_mean_f0(track);
    CHECK(e.mean_f0 == 120.0);
    CHECK(e.fallback);
  }
}

TEST_CASE("mean-based signal") {
  SUBCASE("constant input preserved (unit dc gain)") {
    Waveform w{std::vector<double>(4000, 0.35), kFs};
    auto ms = mean_based_signal(w, 150.0);
    REQUIRE(ms.size() == w.samples.size());
    // interior samples (edges see zero padding)
    for (std::size_t i = 200; i + 200 < ms.size(); ++i) {
      CHECK(ms[i] == doctest::Approx(0.35).epsilon(1e-9));
    }
  }
  SUBCASE("200 Hz sine survives, harmonics above 400 Hz attenuated > 20 dB") {
    std::vector<double> x = sine(200.0, kFs, 8192);
    std::vector<double> h = sine(1000.0, kFs, 8192, 1.0);
    std::vector<double> mix(8192);
    for (int i = 0; i < 8192; ++i) mix[i] = x[i] + h[i];
    auto ms = mean_based_signal({mix, kFs}, 200.0);
    std::vector<double> mid(ms.begin() + 2048, ms.begin() + 2048 + 2048);
    auto spec = naive_dft(mid);
    auto bin = [&](double f) { return static_cast<int>(std::llround(f * 2048.0 / kFs)); };
    const double at200 = std::abs(spec[bin(200.0)]);
    const double at1000 = std::abs(spec[bin(1000.0)]);
    // input had equal amplitudes; require > 20 dB relative attenuation
    CHECK(20.0 * std::log10(at200 / at1000) > 20.0);
  }
  SUBCASE("white noise energy above 2x mean f0 drops > 10 dB") {
    std::mt19937_64 rng(61);
    std::vector<double> noise = white_noise(8192, rng);
    auto ms = mean_based_signal({noise, kFs}, 200.0);
    auto band_energy = [&](const std::vector<double>& x) {
      std::vector<double> mid(x.begin() + 2048, x.begin() + 4096);
      auto spec = naive_dft(mid);
      const int lo = static_cast<int>(400.0 * 2048.0 / kFs);
      double e = 0.0;
      for (int k = lo; k < 1024; ++k) e += std::norm(spec[k]);
      return e;
    };
    CHECK(10.0 * std::log10(band_energy(noise) / band_energy(ms)) > 10.0);
  }
  SUBCASE("window longer than the signal rejected") {
    Waveform w{std::vector<double>(50, 1.0), kFs};
    CHECK_THROWS_AS(mean_based_signal(w, 60.0), ValidationError);
  }
}

TEST_CASE("extract_all") {
  SUBCASE("one second gives 200 dense frames") {
    std::mt19937_64 rng(71);
    Waveform w{white_noise(16000, rng, 0.1), kFs};
    FeatureMatrix m = extract_all(w, kRange);
    CHECK(m.grid.n_frames == 200);
    CHECK(m.features.size() == 200);
    CHECK(m.candidates.size() == 200);
    for (const auto& row : m.features)
      for (double v : row) CHECK(std::isfinite(v));
  }
  SUBCASE("periodic signal lights up the periodicity features") {
    std::vector<double> x = pulse_train(200.0, kFs, 16000, 0.5);
    // glottal-ish shaping so the signal is zero-mean like real speech
    double lp = 0.0, prev_in = 0.0, prev_out = 0.0;
    for (double& v : x) {
      lp = 0.96 * lp + 0.04 * v;
      const double y = lp - prev_in + 0.995 * prev_out;
      prev_in = lp;
      prev_out = y;
      v = y;
    }
    FeatureMatrix m = extract_all({x, kFs}, kRange);
    const int mid = m.grid.n_frames / 2;
    // Hann windowing caps the per-lag-normalized AC of even a perfectly
    // periodic frame around 0.84
    CHECK(m.features[mid][kAcPeak] > 0.8);
    CHECK(m.features[mid][kClarity] > 0.8);
    CHECK(m.features[mid][kZcr] < 0.2);
    CHECK(m.candidates[mid][kF0Ac] == doctest::Approx(200.0).epsilon(0.01));
    CHECK(m.mean_f0 == doctest::Approx(200.0).epsilon(0.02));
  }
  SUBCASE("white noise keeps harmonic scores near the noise floor") {
    std::mt19937_64 rng(81);
    Waveform w{white_noise(16000, rng, 0.1), kFs};
    FeatureMatrix m = extract_all(w, kRange);
    const int mid = m.grid.n_frames / 2;
    // far below the several-hundred range of strongly voiced frames
    CHECK(std::abs(m.features[mid][kSsh]) < 150.0);
    CHECK(m.features[mid][kCpp] < 5.0);
    CHECK(m.features[mid][kAcPeak] < 0.6);
  }
  SUBCASE("candidates always live inside the search range") {
    std::mt19937_64 rng(91);
    for (int t = 0; t < 5; ++t) {
      std::vector<double> x = white_noise(8000, rng, 0.2);
      if (t % 2 == 1) {
        auto p = pulse_train(90.0 + 40.0 * t, kFs, 8000, 0.5);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.2 * x[i] + p[i];
      }
      FeatureMatrix m = extract_all({x, kFs}, kRange);
      for (const auto& c : m.candidates) {
        for (double f0 : c) {
          CHECK(f0 >= kRange.f0_min - 1e-9);
          CHECK(f0 <= kRange.f0_max + 1e-9);
        }
      }
    }
  }
  SUBCASE("amplitude scaling moves only the unnormalized scores") {
    std::mt19937_64 rng(101);
    std::vector<double> x = white_noise(8000, rng, 0.1);
    auto p = pulse_train(140.0, kFs, 8000, 0.4);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.1 * x[i] + p[i];
    std::vector<double> scaled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = 3.0 * x[i];
    FeatureMatrix a = extract_all({x, kFs}, kRange);
    FeatureMatrix b = extract_all({scaled, kFs}, kRange);
    for (int k = 0; k < a.grid.n_frames; ++k) {
      for (int f = 0; f < kNumVoicingFeatures; ++f) {
        if (f == kSshStar || f == kSrhStar || f == kSshStarMs) continue;
        const double ref = std::max(1.0, std::abs(a.features[k][f]));
        CHECK(std::abs(a.features[k][f] - b.features[k][f]) / ref < 1e-6);
      }
      // the star features scale with the amplitude
      if (a.features[k][kSshStar] > 1.0) {
        CHECK(b.features[k][kSshStar] ==
              doctest::Approx(3.0 * a.features[k][kSshStar]).epsilon(1e-6));
      }
    }
  }
  SUBCASE("determinism: identical input gives a bit-identical matrix") {
    std::mt19937_64 rng(111);
    Waveform w{white_noise(8000, rng, 0.1), kFs};
    FeatureMatrix a = extract_all(w, kRange);
    FeatureMatrix b = extract_all(w, kRange);
    REQUIRE(a.features.size() == b.features.size());
    for (std::size_t k = 0; k < a.features.size(); ++k) {
      for (int f = 0; f < kNumVoicingFeatures; ++f)
        CHECK(a.features[k][f] == b.features[k][f]);
      for (int c = 0; c < kNumF0Candidates; ++c)
        CHECK(a.candidates[k][c] == b.candidates[k][c]);
    }
  }
}

TEST_CASE("feature csv round trip is bit exact") {
  std::mt19937_64 rng(121);
  Waveform w{white_noise(4000, rng, 0.1), kFs};
  FeatureMatrix m = extract_all(w, kRange);
  TempDir tmp("featcsv");
  save_feature_csv(tmp.file("f.csv"), m);
  FeatureMatrix r = load_feature_csv(tmp.file("f.csv"));
  REQUIRE(r.features.size() == m.features.size());
  for (std::size_t k = 0; k < m.features.size(); ++k) {
    for (int f = 0; f < kNumVoicingFeatures; ++f)
      CHECK(r.features[k][f] == m.features[k][f]);
    for (int c = 0; c < kNumF0Candidates; ++c)
      CHECK(r.candidates[k][c] == m.candidates[k][c]);
  }
}
