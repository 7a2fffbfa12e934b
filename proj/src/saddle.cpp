#include "normsol/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace normsol {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::array<double, 3> beta_of(const Problem& pb, const GridField& u) {
  return barycenter(u, pb.ball, pb.ef->backend()).beta;
}

double norm3(const std::array<double, 3>& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

// central difference along one axis, zero on pinned nodes
void axis_derivative(const Lattice& L, int axis, const std::vector<double>& u, std::vector<double>& out) {
  out.assign(u.size(), 0.0);
  const std::size_t s = L.stride(axis);
  const double inv = 0.5 / L.h;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (L.free[i]) out[i] = (u[i + s] - u[i - s]) * inv;
}

}  // namespace

double Problem::decay_length() const { return 1.0 / std::sqrt(lambda_infty); }

Symmetry detect_symmetry(const Problem& pb, const GridField& u, double tol) {
  const Lattice& L = *pb.lat;
  Symmetry sym;
  std::vector<double> mask(L.size()), rm(L.size()), ru(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) mask[i] = L.free[i];
  const double umax = max_abs(u.v);
  const auto& V = pb.ef->potential();
  const double vmax = V.empty() ? 0.0 : max_abs(V);
  for (int a = 0; a < L.dim; ++a) {
    reflect(L, a, mask.data(), rm.data());
    if (rm != mask) continue;
    if (!V.empty()) {
      std::vector<double> rv(L.size());
      reflect(L, a, V.data(), rv.data());
      double d = 0;
      for (std::size_t i = 0; i < L.size(); ++i) d = std::max(d, std::abs(rv[i] - V[i]));
      if (d > tol * vmax) continue;
    }
    reflect(L, a, u.v.data(), ru.data());
    double de = 0, dodd = 0;
    for (std::size_t i = 0; i < L.size(); ++i) {
      de = std::max(de, std::abs(ru[i] - u.v[i]));
      dodd = std::max(dodd, std::abs(ru[i] + u.v[i]));
    }
    if (de <= tol * umax)
      sym.parity[a] = 1;
    else if (dodd <= tol * umax)
      sym.parity[a] = -1;
  }
  return sym;
}

void symmetrize(const Lattice& lat, const Symmetry& sym, std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (int a = 0; a < lat.dim; ++a) {
    if (sym.parity[a] == 0) continue;
    reflect(lat, a, v.data(), r.data());
    const double e = sym.parity[a];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (v[i] + e * r[i]);
  }
}

DescentResult constrained_descent(const Problem& pb, const GridField& seed, const DescentOptions& opt) {
  const EnergyFunctional& ef = *pb.ef;
  const Lattice& L = *pb.lat;
  const double rho = pb.params.rho;
  const double mu = opt.penalty;
  const Backend be = ef.backend();

  Symmetry sym;
  if (opt.use_symmetry) sym = detect_symmetry(pb, seed);
  GridField u = seed;
  u.apply_mask();
  symmetrize(L, sym, u.v);
  u = project_mass(u, rho);

  std::vector<int> pinned;
  if (opt.pin_translations)
    for (int a = 0; a < L.dim; ++a)
      if (sym.parity[a] == 0) pinned.push_back(a);

  DstPreconditioner P(pb.lat, ef.order(), 1.0);
  const std::array<double, 3> target = opt.target;

  auto value = [&](const GridField& v, EnergyReport& rep, Barycenter& b) {
    rep = ef.energy(v, false);
    double F = rep.total;
    if (mu > 0) {
      b = barycenter(v, pb.ball, be);
      double q = 0;
      for (int a = 0; a < 3; ++a) q += (b.beta[a] - target[a]) * (b.beta[a] - target[a]);
      F += 0.5 * mu * q;
    }
    return F;
  };

  DescentResult res;
  EnergyReport rep;
  Barycenter bc;
  double F = value(u, rep, bc);
  double dt = opt.dt;
  const double floor_shift = 0.25 * pb.lambda_infty;
  std::vector<double> g, pg, G(u.size()), U(u.size()), d(u.size()), Ht(u.size());
  std::vector<std::vector<double>> T, HT;
  int it = 0;
  double gd = 0;
  for (; it < opt.max_iter; ++it) {
    const double lam = rep.lambda_est;
    const bool check = it % opt.check_every == 0;
    if (check) {
      HistoryEntry e;
      e.iter = it;
      e.energy = rep.total;
      e.lambda = lam;
      e.residual = ef.residual_norm(ef.el_residual(u, lam));
      e.beta = mu > 0 ? bc.beta : beta_of(pb, u);
      res.history.push_back(e);
      res.residual = e.residual;
      if (mu == 0 && pinned.empty() && e.residual < opt.tol) {
        res.converged = true;
        break;
      }
    }
    if (opt.snapshot_every > 0 && it % opt.snapshot_every == 0) {
      res.snapshots.push_back(u);
      res.snapshot_energy.push_back(rep.total);
    }

    ef.gradient(u, g);
    if (mu > 0) {
      barycenter_penalty_gradient(u, pb.ball, bc, target, pg, be);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += mu * pg[i];
    }
    P.set_shift(std::max(lam, floor_shift));
    const double c = P.shift();
    P.apply(g.data(), G.data());
    P.apply(u.v.data(), U.data());
    const double mproj = ef.inner(u.v, G) / ef.inner(u.v, U);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = G[i] - mproj * U[i];

    if (!pinned.empty()) {
      T.clear();
      HT.clear();
      for (int a : pinned) {
        std::vector<double> t;
        axis_derivative(L, a, u.v, t);
        // H-orthogonal to the previous modes
        for (std::size_t k = 0; k < T.size(); ++k) {
          const double cf = ef.inner(t, HT[k]) / ef.inner(T[k], HT[k]);
          for (std::size_t i = 0; i < t.size(); ++i) t[i] -= cf * T[k][i];
        }
        ef.k().neg_laplacian(L, ef.order(), t.data(), Ht.data());
        for (std::size_t i = 0; i < t.size(); ++i) Ht[i] = L.free[i] ? Ht[i] + c * t[i] : 0.0;
        T.push_back(t);
        HT.push_back(Ht);
      }
      for (std::size_t k = 0; k < T.size(); ++k) {
        const double tt = ef.inner(T[k], HT[k]);
        if (!(tt > 0)) continue;
        const double cf = ef.inner(d, HT[k]) / tt;
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= cf * T[k][i];
      }
    }
    symmetrize(L, sym, d);
    gd = ef.inner(g, d);
    // penalised or pinned flows stop at a constrained critical point with a nonzero residual
    if ((mu > 0 || !pinned.empty()) && std::sqrt(std::max(gd, 0.0)) < opt.tol) {
      res.converged = true;
      break;
    }

    const double slack = 1e-13 * (std::abs(rep.kinetic) + std::abs(rep.nonlinear) + std::abs(rep.potential_term));
    bool moved = false;
    for (int ls = 0; ls < 12; ++ls) {
      GridField v = u;
      for (std::size_t i = 0; i < d.size(); ++i) v.v[i] -= dt * d[i];
      v = project_mass(v, rho);
      EnergyReport r2;
      Barycenter b2;
      const double F2 = value(v, r2, b2);
      if (F2 <= F + slack) {
        u = std::move(v);
        rep = r2;
        bc = b2;
        F = F2;
        dt = std::min(dt * 1.2, opt.dt_max);
        moved = true;
        break;
      }
      dt *= 0.5;
    }
    if (!moved) break;
  }
  res.iterations = it;
  res.u = u;
  res.energy = rep.total;
  res.penalised = F;
  res.lambda = rep.lambda_est;
  res.beta = beta_of(pb, u);
  if (mu > 0 || !pinned.empty() || !res.converged) res.residual = ef.residual_norm(ef.el_residual(u, rep.lambda_est));
  if (mu == 0 && pinned.empty() && res.residual < opt.tol) res.converged = true;
  return res;
}

Window Window::from(const DiscreteReference& ref) {
  Window w;
  w.m = ref.m_h;
  w.two_minus_s_m = ref.two_minus_s_m_h;
  w.eta = ref.eta;
  w.lo = ref.m_h + 3 * ref.eta;
  w.hi = ref.two_minus_s_m_h - 3 * ref.eta;
  return w;
}

namespace {

struct NewtonResult {
  GridField u;
  double lambda = 0;
  double residual = 0;
  int steps = 0;
  std::vector<HistoryEntry> history;
  std::vector<GridField> snapshots;
  std::vector<double> snapshot_energy;
};

// Newton on (u, lambda) with the mass constraint as a border row; MINRES on the saddle system.
NewtonResult newton_polish(const Problem& pb, GridField u, bool use_symmetry, const SolveOptions& opt,
                           int iter_offset) {
  const EnergyFunctional& ef = *pb.ef;
  const Lattice& L = *pb.lat;
  const double rho = pb.params.rho, dv = L.cell_volume();
  Symmetry sym;
  if (use_symmetry) sym = detect_symmetry(pb, u);
  NewtonResult out;
  double lam = ef.lagrange_multiplier(u);
  double res = ef.residual_norm(ef.el_residual(u, lam));
  DstPreconditioner P(pb.lat, ef.order(), std::max(lam, 0.25 * pb.lambda_infty));
  const std::size_t n = u.size();
  std::vector<double> Pu(n), tmp(n);

  auto record = [&](int k) {
    HistoryEntry e;
    e.iter = iter_offset + k;
    e.energy = ef.total_energy(u);
    e.residual = res;
    e.lambda = lam;
    e.beta = beta_of(pb, u);
    out.history.push_back(e);
    out.snapshots.push_back(u);
    out.snapshot_energy.push_back(e.energy);
  };
  record(0);

  for (int k = 0; k < opt.max_newton && res > opt.newton_tol; ++k) {
    P.set_shift(std::max(lam, 0.25 * pb.lambda_infty));
    std::vector<double> F = ef.el_residual(u, lam);
    double G = 0;
    for (std::size_t i = 0; i < n; ++i) G += u.v[i] * u.v[i];
    G = 0.5 * (G - rho * rho / dv);
    std::vector<double> b(n + 1);
    for (std::size_t i = 0; i < n; ++i) b[i] = -F[i];
    b[n] = -G;
    P.apply(u.v.data(), Pu.data());
    double uPu = 0;
    for (std::size_t i = 0; i < n; ++i) uPu += u.v[i] * Pu[i];
    const double sigma = 1.0 / uPu;

    const GridField& uc = u;
    const double lc = lam;
    LinOp A = [&](const std::vector<double>& x, std::vector<double>& y) {
      y.resize(n + 1);
      std::vector<double> xu(x.begin(), x.begin() + n), yu;
      ef.jacobian_apply(uc, lc, xu, yu);
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (L.free[i]) {
          y[i] = yu[i] + uc.v[i] * x[n];
          s += uc.v[i] * x[i];
        } else {
          y[i] = 0;
        }
      }
      y[n] = s;
    };
    LinOp M = [&](const std::vector<double>& x, std::vector<double>& y) {
      y.resize(n + 1);
      P.apply(x.data(), y.data());
      y[n] = sigma * x[n];
    };
    std::vector<double> x;
    minres(A, M, b, x, opt.minres_tol, opt.minres_max_iter);
    std::vector<double> du(x.begin(), x.begin() + n);
    symmetrize(L, sym, du);
    const double dl = x[n];

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 6; ++ls, alpha *= 0.5) {
      GridField v = u;
      for (std::size_t i = 0; i < n; ++i) v.v[i] += alpha * du[i];
      v.apply_mask();
      v = project_mass(v, rho);
      const double lv = lam + alpha * dl;
      const double rv = ef.residual_norm(ef.el_residual(v, lv));
      if (rv < res) {
        u = std::move(v);
        lam = lv;
        res = rv;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    out.steps = k + 1;
    record(k + 1);
  }
  out.u = u;
  out.lambda = lam;
  out.residual = res;
  return out;
}

}  // namespace

SolveReport saddle_search(const Problem& pb, const GridField& seed, const Window& window, const SolveOptions& opt) {
  const EnergyFunctional& ef = *pb.ef;
  SolveReport R;
  R.window = window;
  R.beta_seed = beta_of(pb, seed);

  DescentOptions dop = opt.descent;
  if (dop.snapshot_every == 0) dop.snapshot_every = 100;
  const double scale = pb.lambda_infty * pb.params.rho;
  dop.tol = std::max(opt.newton_switch * scale, opt.tol);

  std::vector<GridField> snaps;
  std::vector<double> snap_e;
  GridField u = seed;
  double lam = 0, res = 0;
  for (int round = 0; round < opt.max_rounds; ++round) {
    DescentResult D = constrained_descent(pb, u, dop);
    for (auto e : D.history) {
      e.iter += R.iterations;
      R.history.push_back(e);
    }
    snaps.insert(snaps.end(), D.snapshots.begin(), D.snapshots.end());
    snap_e.insert(snap_e.end(), D.snapshot_energy.begin(), D.snapshot_energy.end());
    R.iterations += D.iterations;
    u = D.u;
    lam = D.lambda;
    res = D.residual;

    NewtonResult N = newton_polish(pb, u, dop.use_symmetry, opt, R.iterations);
    R.newton_steps += N.steps;
    R.history.insert(R.history.end(), N.history.begin() + 1, N.history.end());
    snaps.insert(snaps.end(), N.snapshots.begin() + 1, N.snapshots.end());
    snap_e.insert(snap_e.end(), N.snapshot_energy.begin() + 1, N.snapshot_energy.end());
    if (N.residual < res) {
      u = N.u;
      lam = N.lambda;
      res = N.residual;
    }
    if (res < opt.tol && N.residual <= opt.newton_tol * 10) break;
    if (res < opt.tol && round > 0) break;
    dop.tol = std::max(dop.tol * 0.1, 0.1 * opt.tol);
  }

  // constant-sign solutions are reported nonnegative
  if (std::accumulate(u.v.begin(), u.v.end(), 0.0) < 0)
    for (double& x : u.v) x = -x;
  R.u_bar = u;
  R.lambda = lam;
  EnergyReport rep = ef.energy(u, false);
  R.energy = rep.total;
  R.lambda_identity = rep.lambda_est;
  R.identity_rel = std::abs(R.lambda - R.lambda_identity) / std::max(std::abs(R.lambda_identity), 1e-300);
  R.residual_norm = ef.residual_norm(ef.el_residual(u, R.lambda_identity));
  SignContext ctx;
  ctx.energy = R.energy;
  ctx.two_minus_s_m = window.two_minus_s_m;
  R.sign = sign_classify(u, ctx);
  R.positive = R.sign.cls == SignClass::constant_sign;
  R.in_window = R.energy > window.lo && R.energy < window.hi;
  R.beta_final = beta_of(pb, u);
  std::array<double, 3> db{0, 0, 0};
  for (int a = 0; a < 3; ++a) db[a] = R.beta_final[a] - R.beta_seed[a];
  R.drift = norm3(db) / pb.decay_length();
  snaps.push_back(u);
  snap_e.push_back(R.energy);
  R.escape = ps_escape_diagnostic(pb, snaps, snap_e);
  R.converged = R.residual_norm < opt.tol;
  R.accepted = R.converged && R.lambda > 0 && R.in_window && R.positive && R.drift <= opt.drift_tol;
  if (R.accepted)
    R.label = "accepted";
  else if (R.drift > opt.drift_tol)
    R.label = R.escape.label == EscapeLabel::compact ? "escape-drift" : "escape-" + to_string(R.escape.label);
  else if (!R.converged)
    R.label = R.escape.label == EscapeLabel::compact ? "stagnated" : "escape-" + to_string(R.escape.label);
  else if (!R.in_window)
    R.label = "outside-window";
  else if (!R.positive)
    R.label = "sign-changing";
  else
    R.label = "nonpositive-multiplier";
  return R;
}

}  // namespace normsol
