#include "pitchml/pitch_track.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pitchml/errors.hpp"

namespace pitchml {

void save_track_csv(const std::string& path, const PitchTrack& t) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write track CSV: " + path);
  out << "time_s,voiced,f0_hz\n";
  char buf[32];
  for (const PitchFrame& f : t.frames) {
    std::snprintf(buf, sizeof(buf), "%.17g", f.time_s);
    out << buf << ',' << (f.voiced ? 1 : 0) << ',';
    if (f.f0.has_value()) {
      std::snprintf(buf, sizeof(buf), "%.17g", *f.f0);
      out << buf;
    }
    out << '\n';
  }
}

PitchTrack load_track_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open track CSV: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "time_s,voiced,f0_hz")
    throw ValidationError("track CSV header mismatch in " + path);
  PitchTrack t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string time_s, voiced, f0;
    if (!std::getline(ss, time_s, ',') || !std::getline(ss, voiced, ','))
      throw ValidationError("malformed track CSV row in " + path);
    std::getline(ss, f0, ',');
    PitchFrame f;
    f.time_s = std::stod(time_s);
    f.voiced = voiced == "1";
    if (!f0.empty()) f.f0 = std::stod(f0);
    if (f.voiced != f.f0.has_value())
      throw ValidationError("track CSV: f0 must be present iff voiced, in " + path);
    t.frames.push_back(f);
  }
  return t;
}

}  // namespace pitchml
