#pragma once
#include <functional>
#include <memory>
#include <vector>

#include "normsol/lattice.hpp"

namespace normsol {

using LinOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct SolveStats {
  int iterations = 0;
  double rel_residual = 0;
  bool converged = false;
};

// preconditioned conjugate gradients, x holds the initial guess
SolveStats conjugate_gradient(const LinOp& A, const LinOp& Minv, const std::vector<double>& b, std::vector<double>& x,
                              double tol, int max_iter);

// preconditioned MINRES for symmetric indefinite A with SPD preconditioner; starts from x = 0
SolveStats minres(const LinOp& A, const LinOp& Minv, const std::vector<double>& b, std::vector<double>& x, double tol,
                  int max_iter);

// (-Lap_h + shift)^{-1} on the box by a sine transform, masked to free nodes
class DstPreconditioner {
 public:
  DstPreconditioner(LatticePtr lat, int order, double shift);
  ~DstPreconditioner();
  DstPreconditioner(const DstPreconditioner&) = delete;
  DstPreconditioner& operator=(const DstPreconditioner&) = delete;

  void apply(const double* in, double* out) const;
  void set_shift(double shift) { shift_ = shift; }
  double shift() const { return shift_; }

 private:
  LatticePtr lat_;
  int order_;
  double shift_;
  std::vector<std::vector<double>> eig_;
  std::array<int, 3> m_{1, 1, 1};
  double norm_ = 1;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace normsol
