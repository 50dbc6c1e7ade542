#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pitchml/pitch_track.hpp"

namespace pitchml {

// VDE/GPE/FPE/FFE in percent, with the voicing-error breakdown.
struct EvalReport {
  double vde = 0.0;
  std::optional<double> gpe;  // absent when no both-voiced frames exist
  std::optional<double> fpe;  // absent when no frames qualify
  double ffe = 0.0;
  int n_frames = 0;
  double voiced_as_unvoiced = 0.0;  // % of total frames
  double unvoiced_as_voiced = 0.0;  // % of total frames
};

double vde(const PitchTrack& pred, const PitchTrack& ref);
std::optional<double> gpe(const PitchTrack& pred, const PitchTrack& ref,
                          double threshold = 0.20);
std::optional<double> fpe(const PitchTrack& pred, const PitchTrack& ref,
                          double threshold = 0.20);
double ffe(const PitchTrack& pred, const PitchTrack& ref, double threshold = 0.20);

EvalReport evaluate(const PitchTrack& pred, const PitchTrack& ref,
                    double threshold = 0.20);

// Equal-weight average across already-computed per-speaker reports. Absent
// metrics are skipped per metric (averaged over speakers reporting them).
EvalReport average_reports(const std::vector<EvalReport>& reports);

std::string report_to_json(const EvalReport& r);
std::string report_to_table(const EvalReport& r);

// Normalized mutual information between a scalar feature and binary labels,
// equal-frequency binning. Throws ValidationError on single-class labels.
double nmi(const std::vector<double>& feature, const std::vector<int>& labels,
           int n_bins = 32);

}  // namespace pitchml
