#pragma once

#include <string>
#include <vector>

namespace ii {

struct SvgPoint {
  double x = 0.0;  // delta(A->B)
  double y = 0.0;  // delta(B->A)
  std::string label;
};

// Renders an imbalance-plane scatter: unit-square axes, diagonal reference
// line, labeled markers. Byte-deterministic for identical input; values may
// lie in [0, 2] (points past 1 plot outside the unit square).
std::string emit_svg(const std::vector<SvgPoint>& points);

}  // namespace ii
