#pragma once

#include <string>
#include <vector>

namespace abcage::cli {

struct Preset {
  std::string name;
  std::string summary;
  std::string yaml;
};

const std::vector<Preset>& presets();
/// Throws std::out_of_range for unknown names.
const Preset& find_preset(const std::string& name);

}  // namespace abcage::cli
