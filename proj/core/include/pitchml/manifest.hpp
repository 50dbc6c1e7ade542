#pragma once

#include <string>
#include <vector>

namespace pitchml {

// One corpus entry: speaker id, speech WAV, optional EGG WAV.
struct ManifestEntry {
  std::string speaker;
  std::string speech_path;
  std::string egg_path;  // empty when absent

  bool has_egg() const { return !egg_path.empty(); }
};

using CorpusManifest = std::vector<ManifestEntry>;

// TSV: speaker<TAB>speech_path<TAB>egg_path?  Paths are checked to exist.
CorpusManifest load_manifest(const std::string& path);

void save_manifest(const std::string& path, const CorpusManifest& manifest);

}  // namespace pitchml
