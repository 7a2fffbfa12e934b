#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace normsol {

// Ground state on a uniform radial table, with a Bessel tail
// A r^{-nu} K_nu(sqrt(lambda) r), nu = (N-2)/2, beyond the table.
struct RadialProfile {
  int N = 1;
  double p = 4.0;
  double lambda = 1.0;
  double mass_sq = 0;
  double grad_sq = 0;
  double p_norm = 0;
  double energy = 0;
  double c_decay = 0;
  double tail_amp = 0;
  double r_match = 0;  // last radius resolved by the ODE
  double dr = 0;
  std::vector<double> r_grid;
  std::vector<double> values;
  std::vector<double> derivs;

  bool empty() const { return values.empty(); }
  double r_max() const { return r_grid.empty() ? 0.0 : r_grid.back(); }
  double decay() const;
  double value(double r) const;
  double deriv(double r) const;
  // w(r) e^{sqrt(lambda) r}, finite for any r
  double value_scaled(double r) const;
  double tail_value_scaled(double r) const;
  double tail_deriv_scaled(double r) const;

  void write(std::ostream& os) const;
  static RadialProfile read(std::istream& is);
};

double sphere_area(int N);
// e^x K_nu(x)
double bessel_k_scaled(double nu, double x);
// e^{-x} I_nu(x)
double bessel_i_scaled(double nu, double x);
// e^{-x} \int_{S^{N-1}} e^{x w_1} dw
double angular_moment_scaled(int N, double x);

}  // namespace normsol
