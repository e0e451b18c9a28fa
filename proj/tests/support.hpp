#pragma once

#include <string>

#include "lvattract/model.hpp"

namespace lvtest {

inline std::string fixture(const std::string& name) { return std::string(LV_FIXTURE_DIR) + "/" + name; }

// Planar system with point-mass interaction delays and no control delay.
inline lv::SystemSpec planar(double b1, double b2, double a11, double a12, double a21, double a22,
                             double delay = 0.5, bool controlled = false, double c = 0.0) {
  lv::SystemSpec s = lv::make_spec(2);
  s.controlled = controlled;
  s.b << b1, b2;
  s.a << a11, a12, a21, a22;
  s.c.setConstant(c);
  for (auto& k : s.K) k = lv::point_mass(delay);
  return s;
}

}  // namespace lvtest
