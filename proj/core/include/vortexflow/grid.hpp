#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vortexflow {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform cell-centered square mesh over [-L, L]^2.
///
/// Node (i, j) sits at (-L + (i + 1/2) h, -L + (j + 1/2) h) with h = 2L / n.
/// `i` runs along x, `j` along y; storage is row-major with rows of constant y.
struct Grid {
  int n = 0;
  double half_width = 0.0;
  double h = 0.0;

  double x(int i) const { return -half_width + (i + 0.5) * h; }
  double y(int j) const { return -half_width + (j + 0.5) * h; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  }
  std::size_t node_count() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
  double cell_area() const { return h * h; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Throws kNotPowerOfTwo for n that is not a power of two >= 16 and
/// kInvalidArgument for a nonpositive half-width.
Grid make_grid(int n, double half_width);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }

  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  bool all_finite() const;

 private:
  Grid grid_{};
  std::vector<double> values_;
};

enum class Staggering {
  kCell,  ///< both components at cell centers
  kFace,  ///< ux at x-face (i+1/2, j), uy at y-face (i, j+1/2); last face is the domain wall
};

struct VectorField {
  Grid grid{};
  Staggering staggering = Staggering::kCell;
  std::vector<double> ux;
  std::vector<double> uy;

  VectorField() = default;
  VectorField(const Grid& g, Staggering s)
      : grid(g), staggering(s), ux(g.node_count(), 0.0), uy(g.node_count(), 0.0) {}
};

}  // namespace vortexflow
