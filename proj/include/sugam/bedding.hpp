#pragma once

#include <cmath>
#include <string>

#include "sugam/io.hpp"
#include "sugam/types.hpp"

namespace sugam {

// Bedding classes from the absolute aspect/dip-direction difference.
// Codes 1..5 name classes B1..B5:
//   B1 lateral, B2 reverse, B3 reverse-oblique, B4 dip, B5 down-dip.
// Intervals on AbsDiff are closed on the left, open on the right, which
// resolves the shared endpoints (30, 60, 120, ...) deterministically.
inline int classify_bedding(double aspect_deg, double dip_direction_deg) {
  if (!(aspect_deg >= 0.0 && aspect_deg < 360.0)) {
    throw UserError("classify_bedding: aspect " + format_double(aspect_deg) +
                    " outside [0,360)");
  }
  if (!(dip_direction_deg >= 0.0 && dip_direction_deg < 360.0)) {
    throw UserError("classify_bedding: dip direction " + format_double(dip_direction_deg) +
                    " outside [0,360)");
  }
  const double d = std::abs(aspect_deg - dip_direction_deg);
  if (d < 30.0) return 4;
  if (d < 60.0) return 5;
  if (d < 120.0) return 1;
  if (d < 150.0) return 3;
  if (d < 210.0) return 2;
  if (d < 240.0) return 3;
  if (d < 300.0) return 1;
  if (d < 330.0) return 5;
  return 4;  // [330,360); by precondition d < 360
}

inline std::string bedding_name(int code) { return "B" + format_int(code); }

}  // namespace sugam
