#include "pitchml/f0_fusion.hpp"

#include <algorithm>
#include <cmath>

#include "pitchml/errors.hpp"

namespace pitchml {

FuserKind fuser_kind_from_string(const std::string& s) {
  if (s == "median") return FuserKind::kMedian;
  if (s == "linreg") return FuserKind::kLinReg;
  if (s == "knn") return FuserKind::kKnnReg;
  if (s == "mlp-idx") return FuserKind::kMlpIdx;
  throw ValidationError("unknown fuser kind: " + s);
}

std::string to_string(FuserKind kind) {
  switch (kind) {
    case FuserKind::kMedian: return "median";
    case FuserKind::kLinReg: return "linreg";
    case FuserKind::kKnnReg: return "knn";
    case FuserKind::kMlpIdx: return "mlp-idx";
  }
  return "?";
}

namespace {

// bounds [first, last] of the contiguous voiced run containing `frame`
std::pair<int, int> segment_bounds(const VoicingDecisions& voicing, int frame) {
  int s = frame, e = frame;
  while (s > 0 && voicing[s - 1]) --s;
  while (e + 1 < static_cast<int>(voicing.size()) && voicing[e + 1]) ++e;
  return {s, e};
}

// Fixed-width stacked candidate row; context clamped to the voiced segment.
Vec stacked_row(const CandidateRows& candidates, int frame, int seg_first, int seg_last,
                const std::vector<int>& subset, int radius) {
  Vec row;
  row.reserve(subset.size() * (2 * radius + 1));
  for (int j = frame - radius; j <= frame + radius; ++j) {
    const int jj = std::clamp(j, seg_first, seg_last);
    for (int c : subset) row.push_back(candidates[jj][c]);
  }
  return row;
}

// Gaussian elimination with partial pivoting for the linreg normal equations.
Vec solve_linear(Mat a, Vec b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (std::abs(a[col][col]) < 1e-12) a[col][col] += 1e-9;  // near-singular guard
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  Vec x(static_cast<std::size_t>(n), 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace

double fuse_median_frame(const CandidateRows& candidates, const VoicingDecisions& voicing,
                         int frame, const std::vector<int>& subset, int radius) {
  if (subset.empty()) throw ValidationError("median fuser needs at least one candidate");
  if (!voicing[frame]) throw ValidationError("median fuser called on an unvoiced frame");
  auto [s, e] = segment_bounds(voicing, frame);
  std::vector<double> stack;
  stack.reserve(subset.size() * (2 * radius + 1));
  for (int j = std::max(s, frame - radius); j <= std::min(e, frame + radius); ++j) {
    for (int c : subset) stack.push_back(candidates[j][c]);
  }
  std::sort(stack.begin(), stack.end());
  const std::size_t n = stack.size();
  return n % 2 == 1 ? stack[n / 2] : 0.5 * (stack[n / 2 - 1] + stack[n / 2]);
}

F0Fuser fit_fuser(const CandidateRows& candidates, const VoicingDecisions& ref_voiced,
                  const std::vector<double>& ref_f0, FuserKind kind,
                  const std::vector<int>& subset, int radius, uint64_t seed,
                  const MlpHyper& mlp_hyper, int knn_k) {
  if (candidates.size() != ref_voiced.size() || candidates.size() != ref_f0.size())
    throw ValidationError("fit_fuser: candidate/reference length mismatch");
  if (subset.empty()) throw ValidationError("fit_fuser: empty candidate subset");

  F0Fuser fuser;
  fuser.kind = kind;
  fuser.candidate_indices = subset;
  fuser.context_radius = radius;
  if (kind == FuserKind::kMedian) return fuser;

  Mat inputs;
  std::vector<double> targets;
  std::vector<int> idx_labels;
  for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
    if (!ref_voiced[i]) continue;
    auto [s, e] = segment_bounds(ref_voiced, i);
    inputs.push_back(stacked_row(candidates, i, s, e, subset, radius));
    targets.push_back(ref_f0[i]);
    int best = 0;
    for (std::size_t c = 1; c < subset.size(); ++c) {
      if (std::abs(candidates[i][subset[c]] - ref_f0[i]) <
          std::abs(candidates[i][subset[best]] - ref_f0[i]))
        best = static_cast<int>(c);
    }
    idx_labels.push_back(best);
  }
  if (inputs.empty()) throw ValidationError("fit_fuser: no voiced frames with ground truth");

  fuser.standardizer = standardize_fit(inputs);
  Mat z = fuser.standardizer.apply(inputs);

  switch (kind) {
    case FuserKind::kLinReg: {
      // normal equations over [z, 1]
      const int d = static_cast<int>(z[0].size());
      Mat ata(static_cast<std::size_t>(d) + 1, Vec(static_cast<std::size_t>(d) + 1, 0.0));
      Vec atb(static_cast<std::size_t>(d) + 1, 0.0);
      for (std::size_t i = 0; i < z.size(); ++i) {
        for (int r = 0; r < d; ++r) {
          for (int c = r; c < d; ++c) ata[r][c] += z[i][r] * z[i][c];
          ata[r][d] += z[i][r];
          atb[r] += z[i][r] * targets[i];
        }
        ata[d][d] += 1.0;
        atb[d] += targets[i];
      }
      for (int r = 0; r < d + 1; ++r)
        for (int c = 0; c < r; ++c) ata[r][c] = ata[c][r];
      Vec sol = solve_linear(std::move(ata), std::move(atb));
      fuser.linreg.weights.assign(sol.begin(), sol.begin() + d);
      fuser.linreg.bias = sol[d];
      break;
    }
    case FuserKind::kKnnReg:
      fuser.knn = make_knn(z, targets, knn_k);
      break;
    case FuserKind::kMlpIdx: {
      MlpHyper hyper = mlp_hyper;
      hyper.seed = seed;
      fuser.mlp = fit_mlp(z, one_hot(idx_labels, static_cast<int>(subset.size())),
                          MlpHead::kSoftmax, hyper);
      break;
    }
    default:
      break;
  }
  return fuser;
}

PitchTrack predict_track(const VoicingDecisions& voicing, const CandidateRows& candidates,
                         const F0Fuser& fuser, const F0SearchRange& range) {
  if (voicing.size() != candidates.size())
    throw ValidationError("predict_track: voicing/candidate length mismatch");
  PitchTrack track;
  track.frames.resize(voicing.size());
  for (int i = 0; i < static_cast<int>(voicing.size()); ++i) {
    PitchFrame& f = track.frames[i];
    f.time_s = i * 0.005;
    f.voiced = voicing[i];
    if (!f.voiced) continue;

    double value = 0.0;
    if (fuser.kind == FuserKind::kMedian) {
      value = fuse_median_frame(candidates, voicing, i, fuser.candidate_indices,
                                fuser.context_radius);
    } else {
      auto [s, e] = segment_bounds(voicing, i);
      Vec z = fuser.standardizer.apply(
          stacked_row(candidates, i, s, e, fuser.candidate_indices, fuser.context_radius));
      switch (fuser.kind) {
        case FuserKind::kLinReg: {
          value = fuser.linreg.bias;
          for (std::size_t j = 0; j < z.size(); ++j) value += fuser.linreg.weights[j] * z[j];
          break;
        }
        case FuserKind::kKnnReg:
          value = knn_regress(fuser.knn, z);
          break;
        case FuserKind::kMlpIdx: {
          Vec probs = fuser.mlp.forward(z);
          const int best = static_cast<int>(
              std::max_element(probs.begin(), probs.end()) - probs.begin());
          value = candidates[i][fuser.candidate_indices[best]];
          break;
        }
        default:
          break;
      }
    }
    f.f0 = std::clamp(value, range.f0_min, range.f0_max);
  }
  return track;
}

}  // namespace pitchml
