#pragma once

#include <string>

#include "pitchml/f0_fusion.hpp"
#include "pitchml/features.hpp"
#include "pitchml/voicing.hpp"

namespace pitchml {

// The single JSON document written by training: voicing model, F0 fuser,
// and the search range they were trained with. The version field is
// mandatory; loading rejects unknown versions.
struct ModelDocument {
  int version = 1;
  F0SearchRange range;
  VoicingModel voicing;
  F0Fuser fuser;
};

std::string model_to_json(const ModelDocument& doc);
ModelDocument model_from_json(const std::string& text);

void save_model(const std::string& path, const ModelDocument& doc);
ModelDocument load_model(const std::string& path);

}  // namespace pitchml
