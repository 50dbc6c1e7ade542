#include "pitchml/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pitchml/errors.hpp"

namespace pitchml {

CorpusManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest: " + path);
  CorpusManifest manifest;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    ManifestEntry e;
    if (!std::getline(ss, e.speaker, '\t') || !std::getline(ss, e.speech_path, '\t'))
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": expected speaker<TAB>speech_path[<TAB>egg_path]");
    std::getline(ss, e.egg_path, '\t');
    if (e.speaker.empty())
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": empty speaker id");
    if (!std::filesystem::exists(e.speech_path))
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": speech file not found: " + e.speech_path);
    if (e.has_egg() && !std::filesystem::exists(e.egg_path))
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": EGG file not found: " + e.egg_path);
    manifest.push_back(std::move(e));
  }
  if (manifest.empty()) throw ValidationError("manifest is empty: " + path);
  return manifest;
}

void save_manifest(const std::string& path, const CorpusManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write manifest: " + path);
  for (const ManifestEntry& e : manifest) {
    out << e.speaker << '\t' << e.speech_path;
    if (e.has_egg()) out << '\t' << e.egg_path;
    out << '\n';
  }
}

}  // namespace pitchml
