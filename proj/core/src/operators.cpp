#include "vortexflow/operators.hpp"

#include "vortexflow/errors.hpp"

namespace vortexflow {

namespace {

// Centered first difference along one axis with one-sided ends.
// `at(k)` reads the k-th sample along the line.
template <typename At>
double centered_diff(At at, int k, int n, double h) {
  if (k == 0) return (at(1) - at(0)) / h;
  if (k == n - 1) return (at(n - 1) - at(n - 2)) / h;
  return (at(k + 1) - at(k - 1)) / (2.0 * h);
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField v(g, Staggering::kFace);
  const int n = g.n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = g.index(i, j);
      v.ux[k] = (i + 1 < n) ? (f(i + 1, j) - f(i, j)) / g.h : 0.0;
      v.uy[k] = (j + 1 < n) ? (f(i, j + 1) - f(i, j)) / g.h : 0.0;
    }
  }
  return v;
}

VectorField gradient_centered(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField v(g, Staggering::kCell);
  const int n = g.n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = g.index(i, j);
      v.ux[k] = centered_diff([&](int m) { return f(m, j); }, i, n, g.h);
      v.uy[k] = centered_diff([&](int m) { return f(i, m); }, j, n, g.h);
    }
  }
  return v;
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = v.grid;
  ScalarField out(g);
  const int n = g.n;
  if (v.staggering == Staggering::kFace) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const std::size_t k = g.index(i, j);
        const double west = i > 0 ? v.ux[g.index(i - 1, j)] : 0.0;
        const double south = j > 0 ? v.uy[g.index(i, j - 1)] : 0.0;
        out[k] = (v.ux[k] - west + v.uy[k] - south) / g.h;
      }
    }
    return out;
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double dx = centered_diff([&](int m) { return v.ux[g.index(m, j)]; }, i, n, g.h);
      const double dy = centered_diff([&](int m) { return v.uy[g.index(i, m)]; }, j, n, g.h);
      out(i, j) = dx + dy;
    }
  }
  return out;
}

ScalarField laplacian5(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g);
  const int n = g.n;
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double c = f(i, j);
      const double e = i + 1 < n ? f(i + 1, j) : c;
      const double w = i > 0 ? f(i - 1, j) : c;
      const double nn = j + 1 < n ? f(i, j + 1) : c;
      const double s = j > 0 ? f(i, j - 1) : c;
      out(i, j) = (e + w + nn + s - 4.0 * c) * inv_h2;
    }
  }
  return out;
}

}  // namespace vortexflow
