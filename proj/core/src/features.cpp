#include "pitchml/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pitchml/errors.hpp"
#include "pitchml/fft.hpp"
#include "pitchml/lpc.hpp"

namespace pitchml {

void F0SearchRange::validate(int sample_rate) const {
  if (!(f0_min > 0.0 && f0_min < f0_max))
    throw ValidationError("F0 search range requires 0 < f0_min < f0_max");
  if (!(f0_max < sample_rate / 4.0))
    throw ValidationError("f0_max must be below sample_rate / 4");
}

LagRange F0SearchRange::lag_range(int sample_rate, int frame_length) const {
  LagRange lags;
  lags.lag_min = std::max(1, static_cast<int>(std::lround(sample_rate / f0_max)));
  lags.lag_max = std::min(frame_length - 1,
                          static_cast<int>(std::lround(sample_rate / f0_min)));
  if (lags.lag_min > lags.lag_max)
    throw ValidationError("F0 lag range is empty after clipping to the frame length");
  return lags;
}

double zcr(const std::vector<double>& frame) {
  if (frame.empty()) throw ValidationError("zcr of an empty frame");
  if (frame.size() == 1) return 0.0;
  int changes = 0;
  bool prev_neg = frame[0] < 0.0;
  for (std::size_t n = 1; n < frame.size(); ++n) {
    bool neg = frame[n] < 0.0;
    if (neg != prev_neg) ++changes;
    prev_neg = neg;
  }
  return static_cast<double>(changes) / static_cast<double>(frame.size() - 1);
}

namespace {

double clip_f0(double f0, const F0SearchRange& range) {
  return std::clamp(f0, range.f0_min, range.f0_max);
}

PeakF0 peak_from_ac(const CorrelationCurves& curves, int sample_rate,
                    const F0SearchRange& range) {
  PeakF0 out;
  const auto& ac = curves.ac;
  auto it = std::max_element(ac.begin(), ac.end());
  const int i = static_cast<int>(it - ac.begin());
  out.peak = *it;
  if (out.peak <= 0.0 && std::all_of(ac.begin(), ac.end(),
                                     [](double v) { return v == 0.0; })) {
    out.f0 = range.f0_min;  // silent-frame convention
    out.peak = 0.0;
    return out;
  }
  const double lag = curves.lag_min + i + parabolic_offset(ac, i);
  out.f0 = clip_f0(sample_rate / lag, range);
  return out;
}

double clarity_from_nsdf(const std::vector<double>& nsdf) {
  auto it = std::max_element(nsdf.begin(), nsdf.end());
  const double gmax = *it;
  if (gmax <= 0.0) return gmax == 0.0 ? 0.0 : gmax;
  // first local maximum at >= 80% of the global one
  for (std::size_t i = 1; i + 1 < nsdf.size(); ++i) {
    if (nsdf[i] >= nsdf[i - 1] && nsdf[i] >= nsdf[i + 1] && nsdf[i] >= 0.8 * gmax)
      return nsdf[i];
  }
  return gmax;
}

double frame_rms(const std::vector<double>& frame) {
  double s = 0.0;
  for (double v : frame) s += v * v;
  return std::sqrt(s / static_cast<double>(frame.size()));
}

CppResult cpp_from_cepstrum(const std::vector<double>& ceps, int sample_rate,
                            const F0SearchRange& range) {
  const int half = static_cast<int>(ceps.size()) / 2;
  int q_lo = std::max(1, static_cast<int>(std::ceil(sample_rate / range.f0_max)));
  int q_hi = std::min(half, static_cast<int>(std::floor(sample_rate / range.f0_min)));
  if (q_hi - q_lo + 1 < 8)
    throw ValidationError("cepstral quefrency band shorter than 8 bins");

  // least-squares trend line over the band
  const int n = q_hi - q_lo + 1;
  double sq = 0.0, sc = 0.0, sqq = 0.0, sqc = 0.0;
  for (int q = q_lo; q <= q_hi; ++q) {
    sq += q;
    sc += ceps[q];
    sqq += static_cast<double>(q) * q;
    sqc += q * ceps[q];
  }
  const double denom = n * sqq - sq * sq;
  const double slope = denom != 0.0 ? (n * sqc - sq * sc) / denom : 0.0;
  const double intercept = (sc - slope * sq) / n;

  int q_peak = q_lo;
  double best = -1e300;
  for (int q = q_lo; q <= q_hi; ++q) {
    const double prom = ceps[q] - (intercept + slope * q);
    if (prom > best) {
      best = prom;
      q_peak = q;
    }
  }

  std::vector<double> band(ceps.begin() + q_lo, ceps.begin() + q_hi + 1);
  const double q_ref = q_peak + parabolic_offset(band, q_peak - q_lo);

  CppResult out;
  out.cpp_db = best * (20.0 / std::log(10.0));  // ln-cepstrum to dB
  out.f0 = clip_f0(sample_rate / q_ref, range);
  return out;
}

struct SpeechFrameFeatures {
  double zcr = 0.0, ac_peak = 0.0, clarity = 0.0;
  double ssh = 0.0, ssh_star = 0.0, tilt = 0.0, cpp_db = 0.0;
  double f0_ac = 0.0, f0_ssh = 0.0, f0_cpp = 0.0;
};

// The per-frame work shared between the speech pass and the MS pass.
SpeechFrameFeatures analyze_frame(const std::vector<double>& windowed, int sample_rate,
                                  const F0SearchRange& range, int fft_size,
                                  int n_harmonics) {
  SpeechFrameFeatures out;
  out.zcr = zcr(windowed);

  const LagRange lags = range.lag_range(sample_rate, static_cast<int>(windowed.size()));
  CorrelationCurves curves = correlation_curves(windowed, lags);
  PeakF0 acp = peak_from_ac(curves, sample_rate, range);
  out.ac_peak = acp.peak;
  out.f0_ac = acp.f0;
  out.clarity = clarity_from_nsdf(curves.nsdf);

  std::vector<double> amp = amplitude_spectrum(windowed, fft_size);
  std::vector<double> db(amp.size());
  // floor relative to the spectral peak keeps the tilt slope exactly
  // invariant under amplitude scaling
  const double amp_peak = *std::max_element(amp.begin(), amp.end());
  const double amp_floor = amp_peak > 0.0 ? amp_peak * 1e-12 : 1e-12;
  for (std::size_t k = 0; k < amp.size(); ++k) db[k] = 20.0 * std::log10(amp[k] + amp_floor);
  out.tilt = spectral_tilt(db, fft_size, sample_rate);

  HarmonicScore hs = harmonic_summation(amp, fft_size, sample_rate, range,
                                        frame_rms(windowed), n_harmonics);
  out.ssh = hs.normalized;
  out.ssh_star = hs.unnormalized;
  out.f0_ssh = hs.f0;

  bool silent = std::all_of(windowed.begin(), windowed.end(),
                            [](double v) { return v == 0.0; });
  if (silent) {
    out.cpp_db = 0.0;
    out.f0_cpp = range.f0_min;
  } else {
    std::vector<double> ceps = real_cepstrum_from_amplitude(amp, fft_size);
    CppResult c = cpp_from_cepstrum(ceps, sample_rate, range);
    out.cpp_db = c.cpp_db;
    out.f0_cpp = c.f0;
  }
  return out;
}

}  // namespace

PeakF0 ac_peak_and_f0(const std::vector<double>& frame, const F0SearchRange& range,
                      int sample_rate) {
  const LagRange lags = range.lag_range(sample_rate, static_cast<int>(frame.size()));
  return peak_from_ac(correlation_curves(frame, lags), sample_rate, range);
}

double clarity(const std::vector<double>& frame, const F0SearchRange& range,
               int sample_rate) {
  const LagRange lags = range.lag_range(sample_rate, static_cast<int>(frame.size()));
  return clarity_from_nsdf(nsdf_curve(frame, lags));
}

double spectral_tilt(const std::vector<double>& spectrum_db, int fft_size,
                     int sample_rate) {
  const double nyquist = sample_rate / 2.0;
  const double f_lo = 1000.0;
  const double f_hi = std::min(7000.0, 0.95 * nyquist);
  int n = 0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < spectrum_db.size(); ++k) {
    const double f = static_cast<double>(k) * sample_rate / fft_size;
    if (f < f_lo || f > f_hi) continue;
    const double x = f / 1000.0;  // kHz
    sx += x;
    sy += spectrum_db[k];
    sxx += x * x;
    sxy += x * spectrum_db[k];
    ++n;
  }
  if (n < 8) throw ValidationError("fewer than 8 spectral bins in the tilt band");
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

HarmonicScore harmonic_summation(const std::vector<double>& amplitude, int fft_size,
                                 int sample_rate, const F0SearchRange& range,
                                 double frame_rms, int n_harmonics) {
  if (n_harmonics * range.f0_min > sample_rate / 2.0)
    throw ValidationError("harmonic summation: n_harmonics * f0_min exceeds Nyquist");
  const int half = fft_size / 2;
  const double bin_hz = static_cast<double>(sample_rate) / fft_size;
  const int b_lo = std::max(1, static_cast<int>(std::ceil(range.f0_min / bin_hz)));
  const int b_hi = std::min(half, static_cast<int>(std::floor(range.f0_max / bin_hz)));
  if (b_lo > b_hi) throw ValidationError("harmonic summation: empty bin range");

  HarmonicScore out;
  out.f0 = range.f0_min;
  if (frame_rms <= 0.0) return out;  // silent-frame convention

  auto at = [&](double bin) -> double {
    const int idx = static_cast<int>(std::lround(bin));
    return (idx >= 0 && idx <= half) ? amplitude[idx] : 0.0;
  };

  std::vector<double> scores(static_cast<std::size_t>(b_hi - b_lo + 1));
  int best = 0;
  for (int b = b_lo; b <= b_hi; ++b) {
    double s = 0.0;
    for (int k = 1; k <= n_harmonics; ++k) {
      s += at(static_cast<double>(k) * b) - at((k - 0.5) * b);
    }
    scores[b - b_lo] = s;
    if (s > scores[best]) best = b - b_lo;
  }

  out.unnormalized = scores[best];
  out.normalized = scores[best] / frame_rms;
  const double b_ref = b_lo + best + parabolic_offset(scores, best);
  out.f0 = clip_f0(b_ref * bin_hz, range);
  return out;
}

CppResult cpp(const std::vector<double>& frame, const F0SearchRange& range,
              int sample_rate, int fft_size) {
  if (std::all_of(frame.begin(), frame.end(), [](double v) { return v == 0.0; })) {
    return {0.0, range.f0_min};
  }
  return cpp_from_cepstrum(real_cepstrum(frame, fft_size), sample_rate, range);
}

MeanF0Estimate estimate_mean_f0(const std::vector<PeakF0>& ac_track) {
  if (ac_track.empty()) throw ValidationError("mean F0 estimate needs at least one frame");
  std::vector<double> voiced;
  for (const auto& p : ac_track) {
    if (p.peak >= 0.6) voiced.push_back(p.f0);
  }
  MeanF0Estimate out;
  out.fallback = voiced.empty();
  if (out.fallback) {
    for (const auto& p : ac_track) voiced.push_back(p.f0);
  }
  std::sort(voiced.begin(), voiced.end());
  const std::size_t n = voiced.size();
  out.mean_f0 = (n % 2 == 1) ? voiced[n / 2]
                             : 0.5 * (voiced[n / 2 - 1] + voiced[n / 2]);
  return out;
}

std::vector<double> mean_based_signal(const Waveform& w, double mean_f0) {
  if (mean_f0 <= 0.0) throw ValidationError("mean F0 must be positive");
  int m = static_cast<int>(std::lround(1.75 * w.sample_rate / mean_f0));
  if (m % 2 == 0) ++m;
  if (m < 3) m = 3;
  if (m > static_cast<int>(w.samples.size()))
    throw ValidationError("mean-based-signal window longer than the signal");

  const int half = (m - 1) / 2;
  std::vector<double> win(static_cast<std::size_t>(m));
  double wsum = 0.0;
  for (int i = 0; i < m; ++i) {
    win[i] = 0.42 - 0.5 * std::cos(2.0 * M_PI * i / (m - 1)) +
             0.08 * std::cos(4.0 * M_PI * i / (m - 1));
    wsum += win[i];
  }
  for (auto& v : win) v /= wsum;  // unit DC gain

  const int len = static_cast<int>(w.samples.size());
  std::vector<double> out(static_cast<std::size_t>(len), 0.0);
  for (int t = 0; t < len; ++t) {
    double acc = 0.0;
    const int j_lo = std::max(0, half - t);
    const int j_hi = std::min(m - 1, len - 1 - t + half);
    for (int j = j_lo; j <= j_hi; ++j) acc += win[j] * w.samples[t + j - half];
    out[t] = acc;
  }
  return out;
}

FeatureMatrix extract_all(const Waveform& w, const F0SearchRange& range) {
  range.validate(w.sample_rate);
  FramedSignal speech = frame_signal(w);
  const FrameGrid& grid = speech.grid;
  const int fft_size = default_fft_size(grid.frame_length);
  const int n_harmonics = 5;

  FeatureMatrix out;
  out.grid = grid;
  out.features.assign(static_cast<std::size_t>(grid.n_frames), {});
  out.candidates.assign(static_cast<std::size_t>(grid.n_frames), {});

  // pass 1: speech-domain features
  std::vector<PeakF0> ac_track(static_cast<std::size_t>(grid.n_frames));
  for (int k = 0; k < grid.n_frames; ++k) {
    SpeechFrameFeatures f =
        analyze_frame(speech.frames[k], w.sample_rate, range, fft_size, n_harmonics);
    auto& fv = out.features[k];
    auto& cv = out.candidates[k];
    fv[kZcr] = f.zcr;
    fv[kAcPeak] = f.ac_peak;
    fv[kClarity] = f.clarity;
    fv[kSsh] = f.ssh;
    fv[kSshStar] = f.ssh_star;
    fv[kTilt] = f.tilt;
    fv[kCpp] = f.cpp_db;
    cv[kF0Ac] = f.f0_ac;
    cv[kF0Ssh] = f.f0_ssh;
    cv[kF0Cpp] = f.f0_cpp;
    ac_track[k] = {f.ac_peak, f.f0_ac};
  }

  // residual harmonics (speech pass only)
  LpResidual residual = lp_residual(w);
  out.lpc_unstable_frames = residual.unstable_frames;
  Waveform res_wave{std::move(residual.samples), w.sample_rate};
  FramedSignal res_frames = frame_signal(res_wave);
  for (int k = 0; k < grid.n_frames; ++k) {
    const auto& rf = res_frames.frames[k];
    std::vector<double> amp = amplitude_spectrum(rf, fft_size);
    HarmonicScore hs =
        harmonic_summation(amp, fft_size, w.sample_rate, range, frame_rms(rf), n_harmonics);
    out.features[k][kSrh] = hs.normalized;
    out.features[k][kSrhStar] = hs.unnormalized;
    out.candidates[k][kF0Srh] = hs.f0;
  }

  // pass 2: mean-based signal
  MeanF0Estimate mf = estimate_mean_f0(ac_track);
  out.mean_f0 = mf.mean_f0;
  out.mean_f0_fallback = mf.fallback;
  Waveform ms{mean_based_signal(w, mf.mean_f0), w.sample_rate};
  FramedSignal ms_frames = frame_signal(ms);
  for (int k = 0; k < grid.n_frames; ++k) {
    SpeechFrameFeatures f =
        analyze_frame(ms_frames.frames[k], w.sample_rate, range, fft_size, n_harmonics);
    auto& fv = out.features[k];
    auto& cv = out.candidates[k];
    fv[kZcrMs] = f.zcr;
    fv[kAcMs] = f.ac_peak;
    fv[kClarityMs] = f.clarity;
    fv[kSshMs] = f.ssh;
    fv[kSshStarMs] = f.ssh_star;
    fv[kTiltMs] = f.tilt;
    fv[kCppMs] = f.cpp_db;
    cv[kF0AcMs] = f.f0_ac;
    cv[kF0SshMs] = f.f0_ssh;
    cv[kF0CppMs] = f.f0_cpp;
  }
  return out;
}

void save_feature_csv(const std::string& path, const FeatureMatrix& m) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write feature CSV: " + path);
  out << "frame_time_s";
  for (const char* name : kFeatureNames) out << ',' << name;
  for (const char* name : kCandidateNames) out << ',' << name;
  out << '\n';
  char buf[32];
  for (int k = 0; k < m.grid.n_frames; ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", m.grid.frame_time_s(k));
    out << buf;
    for (double v : m.features[k]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    for (double v : m.candidates[k]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

FeatureMatrix load_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open feature CSV: " + path);
  std::string header;
  if (!std::getline(in, header)) throw ValidationError("empty feature CSV: " + path);

  std::string expected = "frame_time_s";
  for (const char* name : kFeatureNames) expected += std::string(",") + name;
  for (const char* name : kCandidateNames) expected += std::string(",") + name;
  if (header != expected)
    throw ValidationError("feature CSV header mismatch in " + path);

  FeatureMatrix m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 1 + kNumVoicingFeatures + kNumF0Candidates)
      throw ValidationError("feature CSV row width mismatch in " + path);
    std::array<double, kNumVoicingFeatures> fv{};
    std::array<double, kNumF0Candidates> cv{};
    std::copy_n(row.begin() + 1, kNumVoicingFeatures, fv.begin());
    std::copy_n(row.begin() + 1 + kNumVoicingFeatures, kNumF0Candidates, cv.begin());
    m.features.push_back(fv);
    m.candidates.push_back(cv);
  }
  m.grid.n_frames = static_cast<int>(m.features.size());
  return m;
}

}  // namespace pitchml
