#pragma once

#include <array>
#include <string>
#include <vector>

#include "pitchml/correlation.hpp"
#include "pitchml/framing.hpp"
#include "pitchml/waveform.hpp"

namespace pitchml {

struct F0SearchRange {
  double f0_min = 60.0;
  double f0_max = 400.0;

  void validate(int sample_rate) const;
  // [fs/f0_max, fs/f0_min] clipped to valid lags for the frame length.
  LagRange lag_range(int sample_rate, int frame_length) const;
};

inline constexpr int kNumVoicingFeatures = 16;
inline constexpr int kNumF0Candidates = 7;

// Column order is fixed; voicing models and CSV export depend on it.
inline constexpr std::array<const char*, kNumVoicingFeatures> kFeatureNames = {
    "zcr",    "ac_peak", "clarity", "ssh",    "ssh_star",    "srh",     "srh_star", "tilt",
    "cpp",    "zcr_ms",  "ac_ms",   "clarity_ms", "ssh_ms", "ssh_star_ms", "tilt_ms", "cpp_ms"};

inline constexpr std::array<const char*, kNumF0Candidates> kCandidateNames = {
    "f0_ac", "f0_ssh", "f0_srh", "f0_cpp", "f0_ac_ms", "f0_ssh_ms", "f0_cpp_ms"};

enum FeatureIndex {
  kZcr = 0, kAcPeak, kClarity, kSsh, kSshStar, kSrh, kSrhStar, kTilt,
  kCpp, kZcrMs, kAcMs, kClarityMs, kSshMs, kSshStarMs, kTiltMs, kCppMs
};

enum CandidateIndex {
  kF0Ac = 0, kF0Ssh, kF0Srh, kF0Cpp, kF0AcMs, kF0SshMs, kF0CppMs
};

struct FeatureMatrix {
  FrameGrid grid;
  std::vector<std::array<double, kNumVoicingFeatures>> features;
  std::vector<std::array<double, kNumF0Candidates>> candidates;
  double mean_f0 = 0.0;
  bool mean_f0_fallback = false;  // no frame passed the AC-peak gate
  int lpc_unstable_frames = 0;
};

// --- per-frame primitives ---

// Fraction of adjacent sample pairs with a strict sign change (zero counts
// as nonnegative). Value in [0, 1].
double zcr(const std::vector<double>& frame);

struct PeakF0 {
  double peak = 0.0;
  double f0 = 0.0;
};

// Peak of the normalized autocorrelation over the F0 lag range, with
// parabolic refinement of the lag. Zero frame -> peak 0, f0 = f0_min.
PeakF0 ac_peak_and_f0(const std::vector<double>& frame, const F0SearchRange& range,
                      int sample_rate);

// Height of the first key maximum of the NSDF curve over the lag range
// (first local maximum >= 0.8 * global maximum, else the global maximum).
double clarity(const std::vector<double>& frame, const F0SearchRange& range,
               int sample_rate);

// Least-squares slope of dB magnitude vs frequency in kHz over
// [1 kHz, min(7 kHz, 0.95 * Nyquist)]. Throws if fewer than 8 bins qualify.
double spectral_tilt(const std::vector<double>& spectrum_db, int fft_size,
                     int sample_rate);

struct HarmonicScore {
  double unnormalized = 0.0;  // SSH* / SRH*
  double normalized = 0.0;    // SSH / SRH (spectrum divided by frame RMS)
  double f0 = 0.0;
};

// Harmonic comb score with subharmonic penalty:
//   score(f) = sum_{k=1..H} [ E(k f) - E((k-1/2) f) ]
// evaluated at bin granularity over the search range, parabolic-refined.
// frame_rms normalizes the SSH variant; rms == 0 gives the zero-frame
// convention (scores 0, f0 = f0_min).
HarmonicScore harmonic_summation(const std::vector<double>& amplitude, int fft_size,
                                 int sample_rate, const F0SearchRange& range,
                                 double frame_rms, int n_harmonics = 5);

struct CppResult {
  double cpp_db = 0.0;
  double f0 = 0.0;
};

// Cepstral peak prominence: peak of the real cepstrum in the quefrency band
// [fs/f0_max, fs/f0_min] minus a least-squares trend line at the peak, in dB.
CppResult cpp(const std::vector<double>& frame, const F0SearchRange& range,
              int sample_rate, int fft_size);

// --- two-pass machinery ---

struct MeanF0Estimate {
  double mean_f0 = 0.0;
  bool fallback = false;
};

// Median f0_ac over frames with ac_peak >= 0.6; global median if none qualify.
MeanF0Estimate estimate_mean_f0(const std::vector<PeakF0>& ac_track);

// Blackman moving average with unit DC gain, window length
// round(1.75 * sample_rate / mean_f0) forced odd, edges zero-padded.
std::vector<double> mean_based_signal(const Waveform& w, double mean_f0);

// Full two-pass extraction: 9 speech-domain features + 7 mean-based-signal
// features, and the 7 F0 candidates.
FeatureMatrix extract_all(const Waveform& w, const F0SearchRange& range);

// CSV export/import, 24 columns:
// frame_time_s, 16 features, 7 candidates. Values round-trip bit-exactly.
void save_feature_csv(const std::string& path, const FeatureMatrix& m);
FeatureMatrix load_feature_csv(const std::string& path);

}  // namespace pitchml
