// Phase-plane passivity of the nonlinear-damping loop: passive where
// |x2|/|x1| >= sign(x2)*sign(x1).
#pragma once

#include <cmath>
#include <string_view>

#include "nldamp/analysis/grid.hpp"
#include "nldamp/controllers.hpp"
#include "nldamp/model.hpp"

namespace nldamp {

enum class PassivityClass { Passive, NonPassive, Boundary };

inline std::string_view to_string(PassivityClass c) {
  switch (c) {
    case PassivityClass::Passive:
      return "passive";
    case PassivityClass::NonPassive:
      return "non_passive";
    case PassivityClass::Boundary:
      return "boundary";
  }
  return "unknown";
}

/// Undefined at the origin. On the x2-axis the ratio is unbounded (Passive);
/// on the x1-axis both sides vanish (Boundary).
inline PassivityClass classify_passivity(const State& s) {
  if (s.is_origin()) throw DomainError("classify_passivity: undefined at the origin");
  if (s.x1 == 0.0) return PassivityClass::Passive;
  const double ratio = std::abs(s.x2) / std::abs(s.x1);
  const double rhs = sign(s.x2) * sign(s.x1);
  if (ratio > rhs) return PassivityClass::Passive;
  if (ratio < rhs) return PassivityClass::NonPassive;
  return PassivityClass::Boundary;
}

using PassivityMap = GridField<PassivityClass>;

/// Classification at cell centers; a cell with the origin in its interior or
/// at its center is Boundary.
inline PassivityMap passivity_map(const GridSpec& grid) {
  PassivityMap map(grid, PassivityClass::Boundary);
  map.fill_with([&](std::size_t i1, std::size_t i2, const State& c) {
    const bool origin_cell = (grid.x1.cell_straddles_zero(i1) && grid.x2.cell_straddles_zero(i2)) || c.is_origin();
    return origin_cell ? PassivityClass::Boundary : classify_passivity(c);
  });
  return map;
}

}  // namespace nldamp
