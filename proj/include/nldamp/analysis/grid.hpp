// Rectangular cell grids over the phase plane.
#pragma once

#include <cstddef>
#include <vector>

#include "nldamp/model.hpp"

namespace nldamp {

struct Axis {
  double lo = -2.0;
  double hi = 2.0;
  std::size_t n = 201;

  // Computed around the midpoint so that symmetric axes give exactly
  // antisymmetric centers.
  [[nodiscard]] double center(std::size_t i) const {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    return mid + half * (2.0 * static_cast<double>(i) + 1.0 - static_cast<double>(n)) / static_cast<double>(n);
  }
  [[nodiscard]] double edge(std::size_t i) const {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    return mid + half * (2.0 * static_cast<double>(i) - static_cast<double>(n)) / static_cast<double>(n);
  }
  /// True when 0 lies strictly inside cell i.
  [[nodiscard]] bool cell_straddles_zero(std::size_t i) const { return edge(i) < 0.0 && 0.0 < edge(i + 1); }

  friend bool operator==(const Axis&, const Axis&) = default;
};

struct GridSpec {
  Axis x1;
  Axis x2;

  void validate() const {
    if (!(x1.lo < x1.hi) || !(x2.lo < x2.hi)) throw DomainError("grid ranges must be strictly ordered");
    if (x1.n == 0 || x2.n == 0) throw DomainError("grid resolution must be positive");
  }
  [[nodiscard]] State cell_center(std::size_t i1, std::size_t i2) const { return {x1.center(i1), x2.center(i2)}; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// One value per grid cell, indexed (i1, i2) along x1 and x2.
template <typename T>
class GridField {
 public:
  explicit GridField(GridSpec spec, T fill = T{}) : spec_(spec), cells_(spec.x1.n * spec.x2.n, fill) {
    spec_.validate();
  }

  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] std::size_t n1() const { return spec_.x1.n; }
  [[nodiscard]] std::size_t n2() const { return spec_.x2.n; }
  [[nodiscard]] std::size_t size() const { return cells_.size(); }

  [[nodiscard]] T at(std::size_t i1, std::size_t i2) const { return cells_.at(index(i1, i2)); }
  void set(std::size_t i1, std::size_t i2, T value) { cells_.at(index(i1, i2)) = value; }

  /// Applies f(i1, i2, center) to every cell.
  template <typename F>
  void fill_with(F&& f) {
    for (std::size_t i1 = 0; i1 < n1(); ++i1) {
      for (std::size_t i2 = 0; i2 < n2(); ++i2) set(i1, i2, f(i1, i2, spec_.cell_center(i1, i2)));
    }
  }

  [[nodiscard]] std::size_t count(const T& value) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < cells_.size(); ++i) c += (cells_[i] == value) ? 1 : 0;
    return c;
  }

  friend bool operator==(const GridField&, const GridField&) = default;

 private:
  [[nodiscard]] std::size_t index(std::size_t i1, std::size_t i2) const { return i1 * spec_.x2.n + i2; }

  GridSpec spec_;
  std::vector<T> cells_;
};

using RegionMask = GridField<bool>;

}  // namespace nldamp
