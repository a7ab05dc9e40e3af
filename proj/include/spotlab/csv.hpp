#pragma once

#include <cstdio>
#include <string>

namespace spotlab {

// Canonical CSV rendering for doubles: shortest %.12g form. One formatter
// everywhere keeps repeated runs byte-identical.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace spotlab
