#include "normsol/ground_state.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include "normsol/scaling_laws.hpp"

namespace normsol {

namespace odeint = boost::numeric::odeint;

namespace {

using Real = long double;
using State = std::array<Real, 5>;

Real pow_abs(Real a, Real p) {
  if (p == 3.0L) return a * a * a;
  if (p == 4.0L) return (a * a) * (a * a);
  if (p == 2.0L) return a * a;
  return std::pow(a, p);
}

struct Rhs {
  int N;
  Real p, lam;
  void operator()(const State& y, State& dy, Real r) const {
    const Real w = y[0], v = y[1];
    const Real aw = std::fabs(w);
    const Real f = pow_abs(aw, p - 2) * w;
    dy[0] = v;
    dy[1] = lam * w - f - (N > 1 ? (N - 1) * v / r : 0.0L);
    Real rn = 1;
    for (int i = 1; i < N; ++i) rn *= r;
    dy[2] = w * w * rn;
    dy[3] = v * v * rn;
    dy[4] = pow_abs(aw, p) * rn;
  }
};

enum class Fate { over, under, undecided };

struct Shooter {
  int N;
  Real p, lam, L;
  Real abs_tol, rel_tol;

  Real r0() const { return N == 1 ? 0.0L : 1e-4L * L; }

  State start(Real w0) const {
    State y{w0, 0, 0, 0, 0};
    if (N == 1) return y;
    const Real r = r0();
    const Real c = (lam * w0 - pow_abs(w0, p - 1)) / N;
    Real rn = 1;
    for (int i = 0; i < N; ++i) rn *= r;
    y[0] = w0 + 0.5L * c * r * r;
    y[1] = c * r;
    y[2] = w0 * w0 * rn / N;
    y[3] = c * c * rn * r * r / (N + 2);
    y[4] = pow_abs(w0, p) * rn / N;
    return y;
  }

  auto stepper() const {
    return odeint::make_controlled(abs_tol, rel_tol, odeint::runge_kutta_fehlberg78<State, Real>());
  }

  Fate classify(Real w0, Real r_end) const {
    auto st = stepper();
    Rhs rhs{N, p, lam};
    State y = start(w0);
    Real r = r0(), dt = 1e-3L * L;
    int fails = 0;
    while (r < r_end) {
      if (st.try_step(rhs, y, r, dt) == odeint::fail) {
        if (++fails > 100000) break;
        continue;
      }
      if (y[0] < 0) return Fate::over;
      if (y[1] > 0) return Fate::under;
      dt = std::min(dt, 0.25L * L);
    }
    return Fate::undecided;
  }

  // trajectory sampled at r_i = i*dr until it leaves the positive decreasing branch
  std::vector<State> trace(Real w0, Real dr, std::size_t n) const {
    auto st = stepper();
    Rhs rhs{N, p, lam};
    std::vector<State> out;
    out.reserve(n);
    State y = start(w0);
    out.push_back(State{w0, 0, 0, 0, 0});
    Real r = r0();
    Real dt = 1e-3L * L;
    for (std::size_t i = 1; i < n; ++i) {
      const Real r1 = i * dr;
      odeint::integrate_adaptive(st, rhs, y, r, r1, std::min(dt, r1 - r));
      r = r1;
      out.push_back(y);
      if (y[0] <= 0 || y[1] > 0) break;
    }
    return out;
  }
};

double tail_shape(double nu, double k, double r) {
  return std::pow(r, -nu) * boost::math::cyl_bessel_k(nu, k * r);
}

}  // namespace

double sphere_area(int N) { return 2.0 * std::pow(M_PI, N / 2.0) / std::tgamma(N / 2.0); }

double bessel_k_scaled(double nu, double x) {
  if (x < 50.0) return std::exp(x) * boost::math::cyl_bessel_k(nu, x);
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    const double next = term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(M_PI / (2.0 * x)) * sum;
}

double bessel_i_scaled(double nu, double x) {
  if (x < 50.0) return std::exp(-x) * boost::math::cyl_bessel_i(nu, x);
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    const double next = -term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

double angular_moment_scaled(int N, double x) {
  if (x == 0.0) return sphere_area(N);
  switch (N) {
    case 1:
      return 1.0 + std::exp(-2.0 * x);
    case 3:
      if (x < 1e-4) return 4.0 * M_PI * (1.0 + x * x / 6.0) * std::exp(-x);
      return 2.0 * M_PI * (-std::expm1(-2.0 * x)) / x;
    default:
      return std::pow(2.0 * M_PI, N / 2.0) * std::pow(x, 1.0 - N / 2.0) *
             bessel_i_scaled(N / 2.0 - 1.0, x);
  }
}

double RadialProfile::decay() const { return std::sqrt(lambda); }

double RadialProfile::tail_value_scaled(double r) const {
  const double nu = (N - 2) / 2.0;
  return tail_amp * std::pow(r, -nu) * bessel_k_scaled(nu, decay() * r);
}

double RadialProfile::tail_deriv_scaled(double r) const {
  const double nu = (N - 2) / 2.0;
  return -decay() * tail_amp * std::pow(r, -nu) * bessel_k_scaled(nu + 1.0, decay() * r);
}

double RadialProfile::value(double r) const {
  r = std::abs(r);
  if (r <= r_grid.back()) {
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(r / dr), values.size() - 2);
    const double t = (r - r_grid[i]) / dr;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * values[i] + (t3 - 2 * t2 + t) * dr * derivs[i] +
           (-2 * t3 + 3 * t2) * values[i + 1] + (t3 - t2) * dr * derivs[i + 1];
  }
  return tail_value_scaled(r) * std::exp(-decay() * r);
}

double RadialProfile::deriv(double r) const {
  const double sg = r < 0 ? -1.0 : 1.0;
  r = std::abs(r);
  if (r <= r_grid.back()) {
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(r / dr), values.size() - 2);
    const double t = (r - r_grid[i]) / dr;
    const double t2 = t * t;
    return sg * ((6 * t2 - 6 * t) * values[i] / dr + (3 * t2 - 4 * t + 1) * derivs[i] +
                 (-6 * t2 + 6 * t) * values[i + 1] / dr + (3 * t2 - 2 * t) * derivs[i + 1]);
  }
  return sg * tail_deriv_scaled(r) * std::exp(-decay() * r);
}

double RadialProfile::value_scaled(double r) const {
  r = std::abs(r);
  if (r <= r_match) return value(r) * std::exp(decay() * r);
  return tail_value_scaled(r);
}

void RadialProfile::write(std::ostream& os) const {
  os.precision(17);
  os << "# normsol radial profile\n";
  os << "# N p lambda mass_sq energy c1 grad_sq p_norm tail_amp r_match dr\n";
  os << "# " << N << ' ' << p << ' ' << lambda << ' ' << mass_sq << ' ' << energy << ' ' << c_decay
     << ' ' << grad_sq << ' ' << p_norm << ' ' << tail_amp << ' ' << r_match << ' ' << dr << '\n';
  os << "# r w dw\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    os << r_grid[i] << ' ' << values[i] << ' ' << derivs[i] << '\n';
}

RadialProfile RadialProfile::read(std::istream& is) {
  RadialProfile w;
  std::string line;
  int header = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (++header == 3) {
        std::istringstream ss(line.substr(1));
        ss >> w.N >> w.p >> w.lambda >> w.mass_sq >> w.energy >> w.c_decay >> w.grad_sq >> w.p_norm >>
            w.tail_amp >> w.r_match >> w.dr;
        if (!ss) throw std::runtime_error("profile header malformed");
      }
      continue;
    }
    std::istringstream ss(line);
    double r, v, d;
    if (!(ss >> r >> v >> d)) throw std::runtime_error("profile row malformed: " + line);
    w.r_grid.push_back(r);
    w.values.push_back(v);
    w.derivs.push_back(d);
  }
  if (header < 3 || w.values.size() < 2) throw std::runtime_error("profile file incomplete");
  return w;
}

RadialProfile shoot_radial(int N, double p, double lambda, const ShootOptions& opt) {
  if (!(lambda > 0)) throw std::invalid_argument("shoot_radial: lambda must be positive");
  if (N < 1 || !(p > 2) || (N > 2 && !(p < 2.0 + 4.0 / (N - 2))))
    throw std::invalid_argument("shoot_radial: p outside (2, 2*)");
  const Real L = 1.0L / std::sqrt(static_cast<Real>(lambda));
  const Real floor_w = std::pow(static_cast<Real>(lambda), 1.0L / (p - 2.0L));
  Shooter sh{N, static_cast<Real>(p), static_cast<Real>(lambda), L, 0, static_cast<Real>(opt.tol)};

  Real lo = floor_w * (1.0L + 1e-6L);
  sh.abs_tol = 1e-22L * floor_w;
  const Real r_end = opt.r_shoot * L;
  if (sh.classify(lo, r_end) != Fate::under) {
    std::ostringstream ss;
    ss << "bisection bracket failure: lower start " << static_cast<double>(lo) << " is not undershooting";
    throw ShootError(ss.str());
  }
  Real hi = 2.0L * lo;
  int grow = 0;
  while (sh.classify(hi, r_end) != Fate::over) {
    lo = hi;
    hi *= 2.0L;
    if (++grow > 60) throw ShootError("bisection bracket failure: no overshoot below " +
                                      std::to_string(static_cast<double>(hi)));
  }
  sh.abs_tol = 1e-22L * hi;
  for (int it = 0; it < opt.max_iter; ++it) {
    const Real mid = 0.5L * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Fate f = sh.classify(mid, r_end);
    if (f == Fate::over)
      hi = mid;
    else if (f == Fate::under)
      lo = mid;
    else {
      lo = hi = mid;
      break;
    }
  }

  const Real dr = opt.dr * L;
  const std::size_t n = static_cast<std::size_t>(std::ceil(opt.r_table / opt.dr)) + 1;
  auto tl = sh.trace(lo, dr, n);
  auto th = sh.trace(hi, dr, n);
  std::size_t m = std::min(tl.size(), th.size());
  std::size_t im = 0;
  // round-off in the decaying mode grows like e^{2 sqrt(lambda) r}; both traces share it
  const Real r_cap = 0.5L * std::log(opt.match_tol / std::numeric_limits<Real>::epsilon()) * L;
  for (std::size_t i = 1; i < m; ++i) {
    if (i * dr > r_cap) break;
    const Real a = tl[i][0], b = th[i][0];
    if (!(a > 0 && b > 0) || std::fabs(a - b) > opt.match_tol * std::fabs(a) || tl[i][1] > 0) break;
    im = i;
  }
  if (im < 10) throw ShootError("non-decay within max radius: trajectories separate at r = " +
                                std::to_string(static_cast<double>(im * dr)));

  RadialProfile w;
  w.N = N;
  w.p = p;
  w.lambda = lambda;
  w.dr = static_cast<double>(dr);
  w.r_grid.resize(n);
  w.values.resize(n);
  w.derivs.resize(n);
  for (std::size_t i = 0; i <= im; ++i) {
    w.r_grid[i] = static_cast<double>(i * dr);
    w.values[i] = static_cast<double>(0.5L * (tl[i][0] + th[i][0]));
    w.derivs[i] = static_cast<double>(0.5L * (tl[i][1] + th[i][1]));
  }
  const double nu = (N - 2) / 2.0;
  const double k = std::sqrt(lambda);
  const double rm = w.r_grid[im];
  w.r_match = rm;
  w.tail_amp = w.values[im] / tail_shape(nu, k, rm);
  for (std::size_t i = im + 1; i < n; ++i) {
    const double r = static_cast<double>(i * dr);
    w.r_grid[i] = r;
    w.values[i] = w.tail_amp * tail_shape(nu, k, r);
    w.derivs[i] = -k * w.tail_amp * tail_shape(nu + 1.0, k, r);
  }
  w.c_decay = w.tail_amp * std::sqrt(M_PI / 2.0) * std::pow(lambda, -0.25);

  // beyond r_match: quadrature of the tail model
  State yi;
  for (int j = 0; j < 5; ++j) yi[j] = 0.5L * (tl[im][j] + th[im][j]);
  auto tail_int = [&](auto f) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, rm, rm + 60.0 / k, 15, 1e-14);
  };
  const double rn1 = N - 1.0;
  const double Mt = tail_int([&](double r) {
    const double v = w.tail_amp * tail_shape(nu, k, r);
    return v * v * std::pow(r, rn1);
  });
  const double At = tail_int([&](double r) {
    const double v = k * w.tail_amp * tail_shape(nu + 1.0, k, r);
    return v * v * std::pow(r, rn1);
  });
  const double Bt = tail_int([&](double r) {
    const double v = w.tail_amp * tail_shape(nu, k, r);
    return std::pow(v, p) * std::pow(r, rn1);
  });
  const double S = sphere_area(N);
  w.mass_sq = S * (static_cast<double>(yi[2]) + Mt);
  w.grad_sq = S * (static_cast<double>(yi[3]) + At);
  w.p_norm = S * (static_cast<double>(yi[4]) + Bt);
  w.energy = 0.5 * w.grad_sq - w.p_norm / p;
  return w;
}

MassNormalized normalize_to_mass(int N, double p, double rho, const ShootOptions& opt) {
  if (!(rho > 0)) throw std::invalid_argument("normalize_to_mass: rho must be positive");
  const auto sc = compute_exponents(N, p);
  MassNormalized out;
  const auto unit = shoot_radial(N, p, 1.0, opt);
  out.unit_lambda_mass_sq = unit.mass_sq;
  out.lambda_infty = std::pow(rho * rho / unit.mass_sq, 1.0 / sc.mass_exponent);
  out.profile = shoot_radial(N, p, out.lambda_infty, opt);
  return out;
}

DecayFit fit_decay_constant(const RadialProfile& w) {
  DecayFit f;
  f.c1 = w.c_decay;
  const double k = w.decay();
  const double e = (w.N - 1) / 2.0;
  std::size_t im = static_cast<std::size_t>(std::llround(w.r_match / w.dr));
  std::size_t i0 = im;
  while (i0 > 0 && w.values[i0 - 1] < 10.0 * w.values[im]) --i0;
  if (i0 == im) return f;
  f.r_lo = w.r_grid[i0];
  f.r_hi = w.r_grid[im];
  double sum = 0;
  f.plateau_min = 1e300;
  f.plateau_max = -1e300;
  for (std::size_t i = i0; i <= im; ++i) {
    const double r = w.r_grid[i];
    const double g = w.values[i] * std::exp(k * r) * std::pow(r, e);
    sum += g;
    f.plateau_min = std::min(f.plateau_min, g);
    f.plateau_max = std::max(f.plateau_max, g);
  }
  f.plateau_mean = sum / (im - i0 + 1);
  f.spread = (f.plateau_max - f.plateau_min) / f.plateau_mean;
  const double rm = w.r_grid[im];
  f.end_ratio = w.values[im] * std::exp(k * rm) * std::pow(rm, e) / f.c1;
  f.deriv_ratio = w.derivs[im] * std::exp(k * rm) * std::pow(rm, e) / (-f.c1 * k);
  f.ok = f.spread < 0.01 && std::abs(f.end_ratio - 1.0) < 0.01;
  return f;
}

double sech_soliton(double x, double p, double lambda) {
  const double a = std::pow(0.5 * p * lambda, 1.0 / (p - 2.0));
  const double c = 1.0 / std::cosh(0.5 * (p - 2.0) * std::sqrt(lambda) * x);
  return a * std::pow(c, 2.0 / (p - 2.0));
}

}  // namespace normsol
