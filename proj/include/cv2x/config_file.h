#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "cv2x/engine.h"

namespace cv2x {

using ConfigOverride = std::pair<std::string, std::string>;

/// Builds a SimConfig from a flat key=value file plus command-line
/// overrides (applied last, so a flag beats a file value). Keys mirror the
/// simulation parameter names; unknown keys and out-of-range values raise
/// ConfigError naming the offender. An empty file yields the defaults:
/// 10 MHz / 5 subchannels, RRI 100 ms, reselection probability 0.5, 190
/// byte messages at 23 dBm, 30 s simulation time.
SimConfig LoadConfigFile(const std::string& path,
                         const std::vector<ConfigOverride>& overrides);

SimConfig ParseConfig(std::istream& in, const std::string& source_name,
                      const std::vector<ConfigOverride>& overrides);

/// Overrides only, no file.
SimConfig ConfigFromOverrides(const std::vector<ConfigOverride>& overrides);

/// Documented keys, one "key  description" line each (for --help-config).
std::string ConfigKeyReference();

}  // namespace cv2x
