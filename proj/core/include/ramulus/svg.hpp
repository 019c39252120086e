#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ramulus/chains.hpp"

namespace ramulus {

struct SvgOptions {
  double alpha = 0.5;   // stroke width follows |w|^alpha
  double size = 480.0;  // panel side in pixels
};

struct SvgImage {
  std::string text;
  /// True when the chain lives in d != 2 and was projected onto the first
  /// two coordinates (d = 1 is drawn on a horizontal line).
  bool projected = false;
};

/// Edges as arrows with width proportional to |w|^alpha; boundary atoms as
/// filled (sinks) and hollow (sources) circles.
SvgImage chain_svg(const PolyChain& chain, const SvgOptions& options = {});

/// Several labelled panels side by side, e.g. the four-point catalogue.
SvgImage contact_sheet(const std::vector<std::pair<std::string, PolyChain>>& panels, const SvgOptions& options = {});

}  // namespace ramulus
