#ifndef BOWENLAB_SYSTEM_HPP
#define BOWENLAB_SYSTEM_HPP

#include <string>
#include <vector>

#include "bowenlab/bowen.hpp"
#include "bowenlab/collocation.hpp"

namespace bowenlab {

// A loadable system: either a depth-1 edge system or a continued-fraction
// collocation system.
struct SystemDescription {
  std::string name = "custom";
  bool contfrac = false;
  DepthOneSystem depth_one;
  ContFracSystem cf;
};

// Named registry entries; a = NaN keeps the entry default.
SystemDescription registry_system(const std::string& name, double a);

std::vector<std::string> registry_names();

// Parse a system-description JSON file.  Throws Error(SchemaViolation) with
// a location hint on malformed input.
SystemDescription load_system_file(const std::string& path, double a_override);

}  // namespace bowenlab

#endif
