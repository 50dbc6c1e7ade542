#pragma once

#include <vector>

namespace pitchml {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // rows are samples

}  // namespace pitchml
