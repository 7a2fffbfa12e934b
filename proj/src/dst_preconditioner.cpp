#include <fftw3.h>

#include <cmath>
#include <stdexcept>

#include "normsol/linear_solvers.hpp"

namespace normsol {

struct DstPreconditioner::Impl {
  double* buf = nullptr;
  fftw_plan plan = nullptr;
  ~Impl() {
    if (plan) fftw_destroy_plan(plan);
    if (buf) fftw_free(buf);
  }
};

DstPreconditioner::DstPreconditioner(LatticePtr lat, int order, double shift)
    : lat_(std::move(lat)), order_(order), shift_(shift), impl_(std::make_unique<Impl>()) {
  const int dim = lat_->dim;
  std::size_t total = 1;
  int dims[3];
  fftw_r2r_kind kinds[3];
  eig_.resize(dim);
  const double ih2 = 1.0 / (lat_->h * lat_->h);
  for (int a = 0; a < dim; ++a) {
    const int M = lat_->n[a] - 2;
    if (M < 1) throw std::invalid_argument("lattice too small for the sine transform");
    m_[a] = M;
    dims[a] = M;
    kinds[a] = FFTW_RODFT00;
    total *= M;
    norm_ *= 2.0 * (M + 1);
    eig_[a].resize(M);
    for (int k = 0; k < M; ++k) {
      const double th = M_PI * (k + 1) / (M + 1);
      const double c = std::cos(th);
      eig_[a][k] = order_ == 2 ? (2.0 - 2.0 * c) * ih2 : (30.0 - 32.0 * c + 2.0 * std::cos(2 * th)) / 12.0 * ih2;
    }
  }
  impl_->buf = static_cast<double*>(fftw_malloc(sizeof(double) * total));
  impl_->plan = fftw_plan_r2r(dim, dims, impl_->buf, impl_->buf, kinds, FFTW_ESTIMATE);
  if (!impl_->plan) throw std::runtime_error("fftw plan failed");
}

DstPreconditioner::~DstPreconditioner() = default;

void DstPreconditioner::apply(const double* in, double* out) const {
  const Lattice& L = *lat_;
  double* b = impl_->buf;
  const int m0 = m_[0], m1 = m_[1], m2 = m_[2];
  const int o1 = L.dim > 1 ? 1 : 0, o2 = L.dim > 2 ? 1 : 0;
  auto full = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(i + 1) * L.n[1] + (j + o1)) * L.n[2] + (k + o2);
  };
  for (int i = 0; i < m0; ++i)
    for (int j = 0; j < m1; ++j)
      for (int k = 0; k < m2; ++k) {
        const std::size_t f = full(i, j, k);
        b[(static_cast<std::size_t>(i) * m1 + j) * m2 + k] = L.free[f] ? in[f] : 0.0;
      }
  fftw_execute(impl_->plan);
  for (int i = 0; i < m0; ++i)
    for (int j = 0; j < m1; ++j)
      for (int k = 0; k < m2; ++k) {
        double e = shift_ + eig_[0][i];
        if (L.dim > 1) e += eig_[1][j];
        if (L.dim > 2) e += eig_[2][k];
        b[(static_cast<std::size_t>(i) * m1 + j) * m2 + k] /= e * norm_;
      }
  fftw_execute(impl_->plan);
  for (std::size_t i = 0; i < L.size(); ++i) out[i] = 0.0;
  for (int i = 0; i < m0; ++i)
    for (int j = 0; j < m1; ++j)
      for (int k = 0; k < m2; ++k) {
        const std::size_t f = full(i, j, k);
        if (L.free[f]) out[f] = b[(static_cast<std::size_t>(i) * m1 + j) * m2 + k];
      }
}

namespace {

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SolveStats conjugate_gradient(const LinOp& A, const LinOp& Minv, const std::vector<double>& b, std::vector<double>& x,
                              double tol, int max_iter) {
  const std::size_t n = b.size();
  SolveStats st;
  if (x.size() != n) x.assign(n, 0.0);
  std::vector<double> r(n), z(n), p(n), Ap(n);
  A(x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  const double bn = std::sqrt(vdot(b, b));
  if (bn == 0) {
    x.assign(n, 0.0);
    st.converged = true;
    return st;
  }
  Minv(r, z);
  p = z;
  double rz = vdot(r, z);
  for (int it = 0; it < max_iter; ++it) {
    st.rel_residual = std::sqrt(vdot(r, r)) / bn;
    if (st.rel_residual < tol) {
      st.converged = true;
      st.iterations = it;
      return st;
    }
    A(p, Ap);
    const double alpha = rz / vdot(p, Ap);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    Minv(r, z);
    const double rz1 = vdot(r, z);
    const double beta = rz1 / rz;
    rz = rz1;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    st.iterations = it + 1;
  }
  st.rel_residual = std::sqrt(vdot(r, r)) / bn;
  st.converged = st.rel_residual < tol;
  return st;
}

SolveStats minres(const LinOp& A, const LinOp& Minv, const std::vector<double>& b, std::vector<double>& x, double tol,
                  int max_iter) {
  const std::size_t n = b.size();
  SolveStats st;
  x.assign(n, 0.0);
  std::vector<double> r1 = b, r2 = b, y(n), v(n), w(n, 0.0), w1(n, 0.0), w2(n, 0.0);
  Minv(r1, y);
  const double beta1 = std::sqrt(std::max(vdot(r1, y), 0.0));
  if (beta1 == 0) {
    st.converged = true;
    return st;
  }
  double oldb = 0, beta = beta1, dbar = 0, epsln = 0, phibar = beta1, cs = -1, sn = 0;
  for (int itn = 1; itn <= max_iter; ++itn) {
    const double s = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
    A(v, y);
    if (itn >= 2)
      for (std::size_t i = 0; i < n; ++i) y[i] -= (beta / oldb) * r1[i];
    const double alfa = vdot(v, y);
    for (std::size_t i = 0; i < n; ++i) y[i] -= (alfa / beta) * r2[i];
    r1.swap(r2);
    r2 = y;
    Minv(r2, y);
    oldb = beta;
    beta = std::sqrt(std::max(vdot(r2, y), 0.0));
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::hypot(gbar, beta);
    gamma = std::max(gamma, 1e-300);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    const double denom = 1.0 / gamma;
    w1.swap(w2);
    w2.swap(w);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
      x[i] += phi * w[i];
    }
    st.iterations = itn;
    st.rel_residual = phibar / beta1;
    if (st.rel_residual < tol || beta == 0) {
      st.converged = true;
      break;
    }
  }
  return st;
}

}  // namespace normsol
