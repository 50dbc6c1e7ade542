#include "pitchml/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pitchml/errors.hpp"

namespace pitchml {

namespace {

void check_grids(const PitchTrack& pred, const PitchTrack& ref) {
  if (pred.n_frames() != ref.n_frames())
    throw ValidationError("prediction and reference grids differ in length (" +
                          std::to_string(pred.n_frames()) + " vs " +
                          std::to_string(ref.n_frames()) + ")");
  if (pred.frames.empty()) throw ValidationError("empty tracks");
}

double rel_error(const PitchFrame& p, const PitchFrame& r) {
  return (*p.f0 - *r.f0) / *r.f0;
}

}  // namespace

double vde(const PitchTrack& pred, const PitchTrack& ref) {
  check_grids(pred, ref);
  int errors = 0;
  for (int i = 0; i < pred.n_frames(); ++i) {
    if (pred.frames[i].voiced != ref.frames[i].voiced) ++errors;
  }
  return 100.0 * errors / pred.n_frames();
}

std::optional<double> gpe(const PitchTrack& pred, const PitchTrack& ref,
                          double threshold) {
  check_grids(pred, ref);
  int both = 0, gross = 0;
  for (int i = 0; i < pred.n_frames(); ++i) {
    if (!(pred.frames[i].voiced && ref.frames[i].voiced)) continue;
    ++both;
    if (std::abs(rel_error(pred.frames[i], ref.frames[i])) > threshold) ++gross;
  }
  if (both == 0) return std::nullopt;
  return 100.0 * gross / both;
}

std::optional<double> fpe(const PitchTrack& pred, const PitchTrack& ref,
                          double threshold) {
  check_grids(pred, ref);
  std::vector<double> errs;
  for (int i = 0; i < pred.n_frames(); ++i) {
    if (!(pred.frames[i].voiced && ref.frames[i].voiced)) continue;
    const double e = rel_error(pred.frames[i], ref.frames[i]);
    if (std::abs(e) <= threshold) errs.push_back(100.0 * e);
  }
  if (errs.empty()) return std::nullopt;
  double mean = 0.0;
  for (double e : errs) mean += e;
  mean /= static_cast<double>(errs.size());
  double var = 0.0;
  for (double e : errs) var += (e - mean) * (e - mean);
  return std::sqrt(var / static_cast<double>(errs.size()));  // population std
}

double ffe(const PitchTrack& pred, const PitchTrack& ref, double threshold) {
  check_grids(pred, ref);
  int errors = 0;
  for (int i = 0; i < pred.n_frames(); ++i) {
    if (pred.frames[i].voiced != ref.frames[i].voiced) {
      ++errors;
    } else if (pred.frames[i].voiced &&
               std::abs(rel_error(pred.frames[i], ref.frames[i])) > threshold) {
      ++errors;
    }
  }
  return 100.0 * errors / pred.n_frames();
}

EvalReport evaluate(const PitchTrack& pred, const PitchTrack& ref, double threshold) {
  check_grids(pred, ref);
  EvalReport r;
  r.n_frames = pred.n_frames();
  int v2u = 0, u2v = 0;
  for (int i = 0; i < pred.n_frames(); ++i) {
    if (ref.frames[i].voiced && !pred.frames[i].voiced) ++v2u;
    if (!ref.frames[i].voiced && pred.frames[i].voiced) ++u2v;
  }
  r.voiced_as_unvoiced = 100.0 * v2u / r.n_frames;
  r.unvoiced_as_voiced = 100.0 * u2v / r.n_frames;
  r.vde = vde(pred, ref);
  r.gpe = gpe(pred, ref, threshold);
  r.fpe = fpe(pred, ref, threshold);
  r.ffe = ffe(pred, ref, threshold);
  return r;
}

EvalReport average_reports(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw ValidationError("no reports to average");
  EvalReport avg;
  double gpe_sum = 0.0, fpe_sum = 0.0;
  int gpe_n = 0, fpe_n = 0;
  for (const EvalReport& r : reports) {
    avg.vde += r.vde;
    avg.ffe += r.ffe;
    avg.voiced_as_unvoiced += r.voiced_as_unvoiced;
    avg.unvoiced_as_voiced += r.unvoiced_as_voiced;
    avg.n_frames += r.n_frames;
    if (r.gpe) {
      gpe_sum += *r.gpe;
      ++gpe_n;
    }
    if (r.fpe) {
      fpe_sum += *r.fpe;
      ++fpe_n;
    }
  }
  const double n = static_cast<double>(reports.size());
  avg.vde /= n;
  avg.ffe /= n;
  avg.voiced_as_unvoiced /= n;
  avg.unvoiced_as_voiced /= n;
  if (gpe_n > 0) avg.gpe = gpe_sum / gpe_n;
  if (fpe_n > 0) avg.fpe = fpe_sum / fpe_n;
  return avg;
}

std::string report_to_json(const EvalReport& r) {
  char buf[512];
  std::string gpe_s = r.gpe ? (std::snprintf(buf, sizeof(buf), "%.10g", *r.gpe), buf)
                            : std::string("null");
  std::string fpe_s = r.fpe ? (std::snprintf(buf, sizeof(buf), "%.10g", *r.fpe), buf)
                            : std::string("null");
  std::snprintf(buf, sizeof(buf),
                "{\n"
                "  \"vde\": %.10g,\n"
                "  \"gpe\": %s,\n"
                "  \"fpe\": %s,\n"
                "  \"ffe\": %.10g,\n"
                "  \"n_frames\": %d,\n"
                "  \"voiced_as_unvoiced\": %.10g,\n"
                "  \"unvoiced_as_voiced\": %.10g\n"
                "}\n",
                r.vde, gpe_s.c_str(), fpe_s.c_str(), r.ffe, r.n_frames,
                r.voiced_as_unvoiced, r.unvoiced_as_voiced);
  return buf;
}

std::string report_to_table(const EvalReport& r) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-22s %10s\n", "metric", "value");
  out << line;
  auto row = [&](const char* name, const std::optional<double>& v) {
    if (v)
      std::snprintf(line, sizeof(line), "%-22s %9.3f%%\n", name, *v);
    else
      std::snprintf(line, sizeof(line), "%-22s %10s\n", name, "n/a");
    out << line;
  };
  row("VDE", r.vde);
  row("GPE", r.gpe);
  row("FPE", r.fpe);
  row("FFE", r.ffe);
  row("voiced->unvoiced", r.voiced_as_unvoiced);
  row("unvoiced->voiced", r.unvoiced_as_voiced);
  std::snprintf(line, sizeof(line), "%-22s %10d\n", "frames", r.n_frames);
  out << line;
  return out.str();
}

double nmi(const std::vector<double>& feature, const std::vector<int>& labels,
           int n_bins) {
  if (feature.size() != labels.size() || feature.size() < 2)
    throw ValidationError("nmi: needs >= 2 aligned frames");
  bool has0 = false, has1 = false;
  for (int y : labels) (y ? has1 : has0) = true;
  if (!has0 || !has1) throw ValidationError("nmi: labels contain a single class");

  // equal-frequency bin edges; a value lands in bin #{edges < value}
  std::vector<double> sorted(feature);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = feature.size();
  std::vector<double> edges;
  for (int j = 1; j < n_bins; ++j) {
    edges.push_back(sorted[static_cast<std::size_t>(j) * n / n_bins]);
  }

  std::vector<std::array<double, 2>> joint(static_cast<std::size_t>(n_bins), {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    const int b = static_cast<int>(
        std::lower_bound(edges.begin(), edges.end(), feature[i],
                         [](double e, double v) { return e < v; }) -
        edges.begin());
    joint[b][labels[i] ? 1 : 0] += 1.0;
  }
  for (auto& row : joint) {
    row[0] /= static_cast<double>(n);
    row[1] /= static_cast<double>(n);
  }

  double py[2] = {0.0, 0.0};
  for (const auto& row : joint) {
    py[0] += row[0];
    py[1] += row[1];
  }
  double hy = 0.0;
  for (double p : py) {
    if (p > 0.0) hy -= p * std::log(p);
  }
  if (hy <= 0.0) throw ValidationError("nmi: degenerate class entropy");

  double mi = 0.0;
  for (const auto& row : joint) {
    const double px = row[0] + row[1];
    if (px <= 0.0) continue;
    for (int y = 0; y < 2; ++y) {
      // split the log so a pure bin (row[y] == px) contributes exactly
      // -row[y]*log(py[y]); a feature carrying the labels then reaches 1.0
      // bit-exactly
      if (row[y] > 0.0)
        mi += row[y] * (std::log(row[y] / px) - std::log(py[y]));
    }
  }
  return std::clamp(mi / hy, 0.0, 1.0);
}

}  // namespace pitchml
