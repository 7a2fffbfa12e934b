#pragma once
#include <array>
#include <string>
#include <vector>

#include "normsol/field_energy.hpp"
#include "normsol/minmax.hpp"

namespace normsol {

// Reflection parities shared by the seed, the potential and the mask (0: none).
struct Symmetry {
  std::array<int, 3> parity{0, 0, 0};
  // barycenter component fixed at the box centre by an even reflection
  bool fixes(int axis) const { return parity[axis] == 1; }
};

Symmetry detect_symmetry(const Problem& pb, const GridField& u, double tol = 1e-9);
void symmetrize(const Lattice& lat, const Symmetry& sym, std::vector<double>& v);

struct HistoryEntry {
  int iter = 0;
  double energy = 0;
  double residual = 0;
  double lambda = 0;
  std::array<double, 3> beta{0, 0, 0};
};

struct DescentOptions {
  int max_iter = 3000;
  double dt = 0.5;
  double dt_max = 1.5;
  double tol = 1e-7;            // stop once the residual is below this
  int check_every = 10;
  bool use_symmetry = true;
  bool pin_translations = false;  // remove translation modes along axes not fixed by symmetry
  double penalty = 0;           // mu in E + (mu/2)|beta - target|^2
  std::array<double, 3> target{0, 0, 0};
  int snapshot_every = 0;       // 0: none
};

struct DescentResult {
  GridField u;
  double energy = 0;
  double penalised = 0;
  double lambda = 0;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
  std::array<double, 3> beta{0, 0, 0};
  std::vector<HistoryEntry> history;
  std::vector<GridField> snapshots;
  std::vector<double> snapshot_energy;
};

// preconditioned projected gradient flow on S_rho
DescentResult constrained_descent(const Problem& pb, const GridField& seed, const DescentOptions& opt);

enum class EscapeLabel { compact, translation, dichotomy };
std::string to_string(EscapeLabel l);

struct SnapshotStats {
  double energy = 0;
  std::array<double, 3> c1{0, 0, 0};
  std::array<double, 3> c2{0, 0, 0};
  std::array<double, 3> com{0, 0, 0};  // centre of |u|^2
  bool two_bumps = false;
  double f1 = 0;  // mass fraction near c1
  double f2 = 0;
  double separation = 0;
  double beta_norm = 0;
};

struct EscapeReport {
  EscapeLabel label = EscapeLabel::compact;
  double level = 0;
  double drift = 0;
  double separation_growth = 0;
  std::vector<SnapshotStats> stats;
};

EscapeReport ps_escape_diagnostic(const Problem& pb, const std::vector<GridField>& fields,
                                  const std::vector<double>& energies);

// A fixed-field sequence evaluated on the grid against its analytic level.
struct SequenceWitness {
  std::string name;
  std::vector<double> offsets;  // bump offsets from the origin, in decay lengths
  std::vector<double> energies;
  double target = 0;            // 2^{-s} m or m
  double deviation = 0;         // |E_last - target|
  double grid_error = 0;
  double quad_error = 0;        // neglected interaction, by quadrature
  double bound = 0;             // grid_error + quad_error
  EscapeReport escape;
  bool ok = false;              // deviation <= bound < 1% of |target| and the expected label
};

// w_{rho^2/2}(x - y e1) + w_{rho^2/2}(x + y e1) projected to S_rho; whole space, V = 0
SequenceWitness two_bump_sequence(const Problem& pb, const std::vector<double>& offsets);
// w_rho(x - y e1)
SequenceWitness translated_sequence(const Problem& pb, const std::vector<double>& offsets);

struct Window {
  double lo = 0;   // m_h + 3 eta
  double hi = 0;   // 2^{-s} m_h - 3 eta
  double m = 0;
  double two_minus_s_m = 0;
  double eta = 0;
  static Window from(const DiscreteReference& ref);
};

struct SolveOptions {
  double tol = 1e-5;
  double newton_tol = 1e-10;
  int max_newton = 30;
  int max_rounds = 4;           // descent / Newton alternations
  double newton_switch = 0.05;  // residual / (lambda_infty rho) at which Newton is first tried
  double drift_tol = 2.0;       // in decay lengths
  double minres_tol = 1e-6;
  int minres_max_iter = 3000;
  DescentOptions descent;
};

struct SolveReport {
  GridField u_bar;
  double lambda = 0;
  double lambda_identity = 0;  // multiplier recomputed from the field
  double identity_rel = 0;
  double energy = 0;
  double residual_norm = 0;
  SignReport sign;
  bool positive = false;
  bool in_window = false;
  Window window;
  int iterations = 0;
  int newton_steps = 0;
  std::vector<HistoryEntry> history;
  std::array<double, 3> beta_seed{0, 0, 0};
  std::array<double, 3> beta_final{0, 0, 0};
  double drift = 0;
  EscapeReport escape;
  bool converged = false;
  bool accepted = false;
  std::string label;
};

SolveReport saddle_search(const Problem& pb, const GridField& seed, const Window& window,
                          const SolveOptions& opt = {});

}  // namespace normsol
