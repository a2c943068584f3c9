#pragma once

// Independent reference computations for the tests. None of these call into
// the library's numerics; they rebuild each quantity from its definition with
// plain quadrature or fixed-step integration.

#include <functional>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

using Radial = std::function<double(double)>;

// Unit-mass centered Gaussian of per-axis variance s2.
double gaussian(double s2, double r);

// psi(r) = -(1/2pi) (Gamma(r) log r + int_r^inf log s omega(s) 2 pi s ds)
// for a radial density; Gamma is the enclosed mass.
double radial_psi(const Radial& omega, double r, double r_max);

// E = 1/2 int psi omega by nested adaptive quadrature.
double radial_energy(const Radial& omega, double r_max);

// int omega (f'(r))^2 2 pi r dr with f = log omega - a r^2 / 2 (b = 0 form).
double radial_dissipation_b0(const Radial& omega, const Radial& dlog_omega, double a, double r_max);

// Closed forms.
double gaussian_energy(double s2);
double gaussian_entropy(double s2);
double gaussian_rel_entropy(double s1, double s2);  // KL(G_s1 || G_s2)
// Per-axis variance at time t of d_t w = nu (Lap w + gamma div(x w)) from variance s0.
double ou_variance(double s0, double gamma, double nu, double t);
// Swirl speed of a Gaussian vortex, Gamma(r) / (2 pi r).
double gaussian_swirl(double s2, double r);

// psi by direct summation of g over all cell pairs, with the self cell
// averaged by tensor Gauss-Legendre quadrature. O(n^4): small n only.
std::vector<double> direct_streamfunction(const std::vector<double>& omega, int n, double half_width);

// Total mass Z(chi) of the radial mean-field problem H'' = -b e^{a e^{2t}/2} e^H,
// H ~ 2t + chi, by fixed-step RK4 in t on [t0, t1].
double shooting_mass_rk4(double a, double b, double chi, double t0 = -20.0, double t1 = 6.0, int steps = 200000);

// Least-squares slope and intercept.
struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};
Line fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oracle
