#pragma once
#include <string>
#include <vector>

#include "normsol/minmax.hpp"
#include "normsol/saddle.hpp"

namespace normsol {

struct OneDimConfig {
  double p = 4.0;
  double rho = 2.0;
  double h = 0.05;
  double half_width = 40;       // whole-line box, in decay lengths
  double x_max = 60;            // half-line length, in decay lengths
  double epsilon_fraction = 0.5;  // amplitude of V as a fraction of the q = infinity threshold
  double v_rate = 1.0;          // gaussian rate, in units of lambda_infty
  double r = 6;                 // translation range of the landmark path, in decay lengths
  int path_points = 41;
  double wall_seed = 3;         // seed offset from the wall for the V = 0 half-line, in decay lengths
  std::vector<double> shifts{4, 8, 12};  // half-line potential centres, in decay lengths
  SolveOptions solve;
};

struct TranslationLandmarks {
  double A = 0;  // max over y in [-r, r] of E(w(. - y))
  double L = 0;  // max over y = -r, r
  double C0 = 0;
  double m_h = 0;
  double two_minus_s_m_h = 0;
  double eta = 0;
  bool ordering_ok = false;
  std::string failed;
};

struct OneDimCase {
  std::string name;
  double shift = 0;
  bool expect_accept = false;
  SolveReport solve;
  double soliton_error = -1;  // sup distance to the sech profile, when that oracle applies
  bool outcome_ok = false;
};

struct OneDimReport {
  double lambda_infty = 0;
  double threshold_L = 0;
  double epsilon = 0;
  TranslationLandmarks landmarks;
  std::vector<OneDimCase> cases;
  bool ok = false;
};

OneDimReport one_dim_suite(const OneDimConfig& cfg);

}  // namespace normsol
