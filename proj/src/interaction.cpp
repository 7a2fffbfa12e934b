#include "normsol/interaction.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "normsol/scaling_laws.hpp"

namespace normsol {

using boost::math::quadrature::exp_sinh;
using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

double RadialFn::operator()(double d) const { return scaled(d) * std::exp(-rate * d); }

RadialFn profile_fn(const RadialProfile& w) {
  const RadialProfile* pw = &w;
  return RadialFn{[pw](double d) { return pw->value_scaled(d); }, w.decay(), w.r_match};
}

RadialFn profile_power_fn(const RadialProfile& w, double q) {
  const RadialProfile* pw = &w;
  return RadialFn{[pw, q](double d) { return std::pow(pw->value_scaled(d), q); }, q * w.decay(),
                  w.r_match};
}

namespace {

template <class F>
QuadResult gk(F f, double a, double b, double tol, unsigned depth = 18) {
  QuadResult q;
  if (b <= a) return q;
  q.value = GK::integrate(f, a, b, depth, tol, &q.error);
  q.error *= std::abs(q.value);
  return q;
}

template <class F>
QuadResult half_line(F f, double a, double tol) {
  exp_sinh<double> es;
  QuadResult q;
  double L1 = 0;
  q.value = es.integrate([&](double x) { return f(a + x); }, tol, &q.error, &L1);
  return q;
}

}  // namespace

QuadResult overlap_integral(int N, const RadialFn& f, const RadialFn& g, double D, double kappa,
                            double tol) {
  const double af = f.rate, ag = g.rate;
  if (kappa > std::min(af, ag) + 1e-14) throw std::invalid_argument("overlap_integral: kappa too large");
  if (!(af + ag > 0)) throw std::invalid_argument("overlap_integral: needs positive decay rates");
  QuadResult out;
  if (N == 1) {
    auto outer_left = [&](double d1) {
      const double d2 = d1 + D;
      return f.scaled(d1) * g.scaled(d2) * std::exp(-(ag - kappa) * D - (af + ag) * d1);
    };
    auto outer_right = [&](double d2) {
      const double d1 = d2 + D;
      return f.scaled(d1) * g.scaled(d2) * std::exp(-(af - kappa) * D - (af + ag) * d2);
    };
    auto middle = [&](double d1) {
      const double d2 = D - d1;
      return f.scaled(d1) * g.scaled(d2) * std::exp(kappa * D - af * d1 - ag * d2);
    };
    const double L = 80.0 / (af + ag);
    auto a = gk(outer_left, 0.0, L, tol);
    auto b = gk(outer_right, 0.0, L, tol);
    auto c = gk(middle, 0.0, D, tol);
    out.value = a.value + b.value + c.value;
    out.error = a.error + b.error + c.error;
    return out;
  }
  const double h = 0.5 * D;
  const double S = sphere_area(N - 1);
  const double ch_max = (120.0 / D + std::abs(af - ag) + 2.0 * kappa) / (af + ag);
  const double mu_max = std::acosh(std::max(ch_max, 1.0) + 1e-12);
  double inner_err = 0;
  auto inner = [&](double mu) {
    const double ch = std::cosh(mu), sh = std::sinh(mu);
    auto fn = [&](double nu) {
      const double c = std::cos(nu);
      const double d1 = h * (ch + c), d2 = h * (ch - c);
      double jac = S * std::pow(h, N) * (ch * ch - c * c);
      if (N > 2) jac *= std::pow(sh * std::sin(nu), N - 2);
      const double ex = -h * ((af + ag) * ch + (af - ag) * c - 2.0 * kappa);
      return jac * f.scaled(d1) * g.scaled(d2) * std::exp(ex);
    };
    double e = 0;
    const double v = GK::integrate(fn, 0.0, M_PI, 18, 0.1 * tol, &e);
    inner_err = std::max(inner_err, e);
    return v;
  };
  double e = 0;
  out.value = GK::integrate(inner, 0.0, mu_max, 18, tol, &e);
  out.error = (e + inner_err) * std::abs(out.value);
  return out;
}

QuadResult exponential_moment(int N, const RadialFn& h, double alpha, double tol) {
  if (!(h.rate > alpha)) {
    QuadResult q;
    q.value = std::numeric_limits<double>::infinity();
    q.error = q.value;
    return q;
  }
  auto fn = [&](double r) {
    if (r <= 0) return N == 1 ? h.scaled(0.0) * angular_moment_scaled(N, 0.0) : 0.0;
    return h.scaled(r) * std::pow(r, N - 1) * angular_moment_scaled(N, alpha * r) *
           std::exp(-(h.rate - alpha) * r);
  };
  const double R1 = std::max(h.knot, 1.0 / h.rate);
  auto a = gk(fn, 0.0, R1, tol);
  auto b = half_line(fn, R1, tol);
  return QuadResult{a.value + b.value, a.error + b.error};
}

BumpPair make_bump_pair(const RadialProfile& base, double rho, double t) {
  if (!(t >= 0 && t <= 0.5)) throw std::invalid_argument("bump pair: t outside [0, 1/2]");
  BumpPair bp;
  bp.t = t;
  bp.rho = rho;
  bp.s = compute_exponents(base.N, base.p).s;
  bp.lambda_infty = base.lambda;
  bp.c1 = base.c_decay;
  if (t > 0) bp.small = scaled_profile(base, t);
  bp.large = scaled_profile(base, 1.0 - t);
  return bp;
}

double delta_t(double r, double t, double lambda_infty, double s, int N) {
  const double a = t > 0 ? std::sqrt(std::pow(t, s) * lambda_infty) : 0.0;
  return 1.0 / (std::pow(r, 0.5 * (N - 1)) * std::exp(2.0 * a * r));
}

namespace {

double pair_distance(double r, const std::vector<double>& z) {
  double d2 = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double e = (i == 0 ? 1.0 : 0.0);
    d2 += (z[i] - e) * (z[i] - e);
  }
  return r * std::sqrt(d2);
}

}  // namespace

QuadResult tau_t(double r, const BumpPair& bp, const std::vector<double>& z) {
  if (bp.t == 0) return {};
  const int N = bp.large.N;
  const double D = pair_distance(r, z);
  const double a = bp.small.decay();
  auto q = overlap_integral(N, profile_fn(bp.small), profile_fn(bp.large), D, a);
  const double sc = 2.0 / (bp.rho * bp.rho) * std::exp(-a * D);
  return QuadResult{q.value * sc, q.error * sc};
}

QuadResult sigma_t(double r, const BumpPair& bp, const std::vector<double>& z) {
  if (bp.t == 0) return {};
  const int N = bp.large.N;
  const double p = bp.large.p;
  const double D = pair_distance(r, z);
  const double a = bp.small.decay();
  auto q1 = overlap_integral(N, profile_power_fn(bp.small, p - 1), profile_fn(bp.large), D, a);
  auto q2 = overlap_integral(N, profile_fn(bp.small), profile_power_fn(bp.large, p - 1), D, a);
  const double sc = std::exp(-a * D);
  return QuadResult{(q1.value + q2.value) * sc, (q1.error + q2.error) * sc};
}

LimitConstants limit_constants(const BumpPair& bp) {
  LimitConstants lc;
  if (bp.t == 0) return lc;
  const int N = bp.large.N;
  const double p = bp.large.p;
  lc.c_t = bp.c1 * std::pow(bp.t, bp.s * (1.0 / (p - 2.0) - (N - 1) / 4.0));
  lc.c_t_direct = bp.small.c_decay;
  const double alpha = bp.small.decay();
  const double geo = std::pow(2.0, -0.5 * (N - 1));
  lc.moment1 = exponential_moment(N, profile_fn(bp.large), alpha).value;
  lc.moment2 = exponential_moment(N, profile_power_fn(bp.large, p - 1), alpha).value;
  lc.c1t = 2.0 / (bp.rho * bp.rho) * geo * lc.c_t * lc.moment1;
  lc.c2t = geo * lc.c_t * lc.moment2 * (bp.t == 0.5 ? 2.0 : 1.0);
  return lc;
}

InteractionEstimate interaction_estimate(double r, const BumpPair& bp, const std::vector<double>& z) {
  InteractionEstimate e;
  const int N = bp.large.N;
  e.r = r;
  e.t = bp.t;
  e.z = z;
  e.delta = delta_t(r, bp.t, bp.lambda_infty, bp.s, N);
  auto ta = tau_t(r, bp, z);
  auto si = sigma_t(r, bp, z);
  e.tau = ta.value;
  e.sigma = si.value;
  e.quad_error = ta.error + si.error;
  e.ratio_tau = e.tau / e.delta;
  e.ratio_sigma = e.sigma / e.delta;
  auto lc = limit_constants(bp);
  e.c1t = lc.c1t;
  e.c2t = lc.c2t;
  return e;
}

BLReport bl_limit(int N, const RadialFn& g, const RadialFn& h, double alpha, double b, double zn,
                  const std::vector<double>& r_sequence) {
  BLReport rep;
  if (g.rate + 1e-14 < alpha) throw BLError("g decays slower than e^{-alpha|x|}");
  // (eBLh): \int |h| e^{alpha|x|} |x|^b dx
  if (!(h.rate > alpha)) throw BLError("h fails the weighted integrability hypothesis");
  RadialFn hw{[&](double d) { return std::abs(h.scaled(d)) * std::pow(d, b); }, h.rate - alpha, h.knot};
  auto hq = exponential_moment(N, hw, 0.0);
  rep.h_weighted = hq.value;
  if (!std::isfinite(hq.value)) throw BLError("h fails the weighted integrability hypothesis");
  rep.hypotheses_ok = true;
  // gamma = lim g(d) e^{alpha d} d^b
  if (g.rate > alpha + 1e-14) {
    rep.gamma = 0;
  } else {
    const double d = 1e3 / std::max(alpha, 1e-3);
    rep.gamma = g.scaled(d) * std::pow(d, b);
  }
  rep.predicted = rep.gamma * exponential_moment(N, h, alpha).value;
  for (double r : r_sequence) {
    const double D = r * zn;
    auto q = overlap_integral(N, g, h, D, std::min(alpha, std::min(g.rate, h.rate)));
    // q = I e^{kappa D}; kappa = alpha here since h.rate > alpha and g.rate >= alpha
    rep.r.push_back(r);
    rep.scaled.push_back(q.value * std::pow(D, b));
  }
  const std::size_t n = rep.scaled.size();
  rep.extrapolated = rep.scaled.back();
  if (n >= 3) {
    const double a0 = rep.scaled[n - 3], a1 = rep.scaled[n - 2], a2 = rep.scaled[n - 1];
    const double den = a2 - 2 * a1 + a0;
    if (std::abs(den) > 1e-14 * std::abs(a2) && (a2 - a1) * (a1 - a0) > 0)
      rep.extrapolated = a2 - (a2 - a1) * (a2 - a1) / den;
  }
  const double ref = std::abs(rep.predicted) > 0 ? std::abs(rep.predicted) : 1.0;
  rep.rel_diff = std::abs(rep.extrapolated - rep.predicted) / ref;
  return rep;
}

}  // namespace normsol
