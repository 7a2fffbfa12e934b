#include "normsol/domain_potential.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

namespace normsol {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

double smooth_ramp_prime(double u, double eps) {
  if (u <= 0 || u >= 1) return 0;
  const double c = 1.0 / (1.0 - eps);
  auto sm = [](double x) { return x >= 1 ? 1.0 : x * x * (3 - 2 * x); };
  return c * sm(u / eps) * sm((1 - u) / eps);
}

double smooth_ramp(double u, double eps) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  const double c = 1.0 / (1.0 - eps);
  auto head = [&](double v) {
    const double x = v / eps;
    return c * eps * (x * x * x - 0.5 * x * x * x * x);
  };
  if (u <= eps) return head(u);
  if (u >= 1 - eps) return 1.0 - head(1 - u);
  return c * (0.5 * eps + (u - eps));
}

void ExteriorDomainSpec::validate() const {
  if (obstacle_radius < 0) throw std::invalid_argument("obstacle_radius must be >= 0");
  if (whole_space()) return;
  if (!(cutoff_R > obstacle_radius + 1.0))
    throw std::invalid_argument("cutoff_R must exceed obstacle_radius + 1");
  if (!(ramp_eps > 0 && ramp_eps < 0.5)) throw std::invalid_argument("ramp_eps outside (0, 1/2)");
}

double ExteriorDomainSpec::theta(double r) const {
  if (whole_space()) return 1.0;
  if (r <= obstacle_radius) return 0.0;
  if (r >= cutoff_R) return 1.0;
  return smooth_ramp(std::log(r / obstacle_radius) / std::log(cutoff_R / obstacle_radius), ramp_eps);
}

double ExteriorDomainSpec::theta_prime(double r) const {
  if (whole_space() || r <= obstacle_radius || r >= cutoff_R) return 0.0;
  const double l = std::log(cutoff_R / obstacle_radius);
  return smooth_ramp_prime(std::log(r / obstacle_radius) / l, ramp_eps) / (r * l);
}

double cutoff_theta(const std::vector<double>& x, const ExteriorDomainSpec& domain) {
  double r2 = 0;
  for (double v : x) r2 += v * v;
  return domain.theta(std::sqrt(r2));
}

PotentialForm parse_potential_form(const std::string& s) {
  if (s == "zero") return PotentialForm::zero;
  if (s == "exponential") return PotentialForm::exponential;
  if (s == "gaussian") return PotentialForm::gaussian;
  if (s == "bump") return PotentialForm::bump;
  if (s == "tabulated") return PotentialForm::tabulated;
  if (s == "step") return PotentialForm::step;
  throw std::invalid_argument("unknown potential form '" + s + "'");
}

std::string to_string(PotentialForm f) {
  switch (f) {
    case PotentialForm::zero: return "zero";
    case PotentialForm::exponential: return "exponential";
    case PotentialForm::gaussian: return "gaussian";
    case PotentialForm::bump: return "bump";
    case PotentialForm::tabulated: return "tabulated";
    case PotentialForm::step: return "step";
  }
  return "?";
}

std::string to_string(DecayVerdict v) {
  switch (v) {
    case DecayVerdict::converges: return "converges";
    case DecayVerdict::diverges: return "diverges";
    default: return "unknown";
  }
}

bool q_admissible(double q, int N) {
  if (std::isinf(q)) return true;
  if (q < std::max(N / 2.0, 1.0)) return false;
  if (N == 2 && q == 1.0) return false;
  return true;
}

bool PotentialSpec::nonneg() const {
  if (form == PotentialForm::tabulated)
    return std::all_of(table_v.begin(), table_v.end(), [](double v) { return v >= 0; });
  return amplitude >= 0;
}

void PotentialSpec::validate(int N) const {
  if (!nonneg()) throw std::invalid_argument("potential must be nonnegative");
  if (!q_admissible(q, N)) throw std::invalid_argument("q not admissible for this dimension");
  if (!center.empty()) {
    if (static_cast<int>(center.size()) != N) throw std::invalid_argument("center dimension mismatch");
    bool shifted = std::any_of(center.begin(), center.end(), [](double c) { return c != 0; });
    if (shifted && N != 1) throw std::invalid_argument("shifted potentials are supported for N = 1 only");
  }
  if (form == PotentialForm::step && N != 1) throw std::invalid_argument("step potential is one-dimensional");
  if ((form == PotentialForm::exponential || form == PotentialForm::gaussian || form == PotentialForm::bump ||
       form == PotentialForm::step) &&
      !(rate > 0))
    throw std::invalid_argument("potential rate must be positive");
  if (form == PotentialForm::tabulated) {
    if (table_r.size() < 2 || table_r.size() != table_v.size())
      throw std::invalid_argument("tabulated potential needs matching r/V columns");
    if (!std::is_sorted(table_r.begin(), table_r.end()) || table_r.front() != 0.0)
      throw std::invalid_argument("tabulated radii must start at 0 and increase");
  }
}

double PotentialSpec::radial(double r) const {
  switch (form) {
    case PotentialForm::zero: return 0;
    case PotentialForm::exponential: return amplitude * std::exp(-rate * r);
    case PotentialForm::gaussian: return amplitude * std::exp(-rate * r * r);
    case PotentialForm::bump: {
      if (r >= rate) return 0;
      const double u = 1 - (r / rate) * (r / rate);
      return amplitude * u * u * u;
    }
    case PotentialForm::step: return amplitude / (1.0 + std::exp(rate * r));
    case PotentialForm::tabulated: {
      if (r >= table_r.back()) return table_v.back() == 0 ? 0.0 : table_v.back();
      auto it = std::upper_bound(table_r.begin(), table_r.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - table_r.begin()) - 1;
      const double f = (r - table_r[i]) / (table_r[i + 1] - table_r[i]);
      return (1 - f) * table_v[i] + f * table_v[i + 1];
    }
  }
  return 0;
}

double PotentialSpec::operator()(const double* x, int N) const {
  if (form == PotentialForm::step) return radial(x[0] - (center.empty() ? 0.0 : center[0]));
  double r2 = 0;
  for (int i = 0; i < N; ++i) {
    const double c = center.empty() ? 0.0 : center[i];
    r2 += (x[i] - c) * (x[i] - c);
  }
  return radial(std::sqrt(r2));
}

double PotentialSpec::support_radius() const {
  switch (form) {
    case PotentialForm::zero: return 0;
    case PotentialForm::bump: return rate;
    case PotentialForm::tabulated:
      return table_v.back() == 0 ? table_r.back() : std::numeric_limits<double>::infinity();
    default: return std::numeric_limits<double>::infinity();
  }
}

namespace {

// |S^{N-1}| \int_0^R f(r) r^{N-1} dr
template <class F>
double radial_integral(F f, int N, double R) {
  auto g = [&](double r) { return f(r) * std::pow(r, N - 1); };
  if (std::isinf(R)) {
    boost::math::quadrature::exp_sinh<double> es;
    return sphere_area(N) * es.integrate(g, 1e-13);
  }
  return sphere_area(N) * GK::integrate(g, 0.0, R, 20, 1e-13);
}

}  // namespace

double lq_norm(const PotentialSpec& V, double q, int N) {
  if (V.is_zero()) return 0;
  if (std::isinf(q)) {
    if (V.form == PotentialForm::tabulated) return *std::max_element(V.table_v.begin(), V.table_v.end());
    return V.amplitude;
  }
  if (V.form == PotentialForm::step) throw PotentialError("step potential is not in L^q for finite q");
  const double R = V.support_radius();
  if (std::isinf(R) && V.form == PotentialForm::tabulated)
    throw PotentialError("tabulated potential without tail model: L^q norm undefined");
  double I = 0;
  if (V.form == PotentialForm::tabulated) {
    for (std::size_t i = 0; i + 1 < V.table_r.size(); ++i)
      I += sphere_area(N) * GK::integrate([&](double r) { return std::pow(V.radial(r), q) * std::pow(r, N - 1); },
                                          V.table_r[i], V.table_r[i + 1], 15, 1e-13);
  } else {
    I = radial_integral([&](double r) { return std::pow(V.radial(r), q); }, N, R);
  }
  return std::pow(I, 1.0 / q);
}

DecayCheck check_decay_condition(const PotentialSpec& V, double d, int N) {
  DecayCheck c;
  if (V.is_zero()) {
    c.verdict = DecayVerdict::converges;
    return c;
  }
  const double S = sphere_area(N);
  const int k = 2 * N - 2;  // r^{N-1} weight times the r^{N-1} of the measure
  const double shift = V.center.empty() ? 0.0 : std::abs(V.center[0]);
  const double a = V.form == PotentialForm::tabulated ? 0.0 : V.amplitude;
  switch (V.form) {
    case PotentialForm::exponential: {
      if (V.rate <= d) {
        c.verdict = DecayVerdict::diverges;
        c.integral_value = std::numeric_limits<double>::infinity();
        return c;
      }
      const double g = V.rate - d;
      if (shift == 0) {
        c.integral_value = a * S * std::tgamma(k + 1.0) / std::pow(g, k + 1);
      } else {
        // N = 1: \int a e^{-b|x-c|} e^{d|x|} dx in closed form
        const double b = V.rate, cc = shift;
        const double left = std::exp(-b * cc) / (b - d);               // x < 0
        const double mid = (std::exp(d * cc) - std::exp(-b * cc)) / (b + d);  // 0 < x < c
        const double right = std::exp(d * cc) / (b - d);               // x > c
        c.integral_value = a * (left + mid + right);
      }
      c.verdict = DecayVerdict::converges;
      return c;
    }
    case PotentialForm::gaussian: {
      const double b = V.rate;
      // beyond R the integrand is below a r^k e^{-b r^2 / 2}
      double R = std::max(2.0 * d / b, 1.0) + shift;
      auto tail = [&](double R0) {
        const double ak = 0.5 * (k + 1);
        const double y0 = std::max(R0 - shift, 0.0);
        return a * S * std::exp(d * shift) * 0.5 * std::pow(2.0 / b, ak) *
               boost::math::tgamma(ak, 0.5 * b * y0 * y0) * std::pow(1.0 + shift / std::max(y0, 1.0), k);
      };
      double value = 0;
      for (int it = 0; it < 60; ++it) {
        if (shift == 0) {
          value = S * GK::integrate([&](double r) { return V.radial(r) * std::pow(r, k) * std::exp(d * r); },
                                    0.0, R, 20, 1e-13);
        } else {
          value = GK::integrate([&](double x) { return V.radial(std::abs(x - shift)) * std::exp(d * std::abs(x)); },
                                -R, R, 20, 1e-13);
        }
        c.tail_bound = tail(R);
        if (c.tail_bound < 1e-12 * std::max(value, 1e-300)) break;
        R *= 1.5;
      }
      c.integral_value = value;
      c.truncation_radius = R;
      c.verdict = DecayVerdict::converges;
      return c;
    }
    case PotentialForm::bump:
    case PotentialForm::tabulated: {
      const double R = V.support_radius();
      if (std::isinf(R)) {
        c.verdict = DecayVerdict::unknown;
        return c;
      }
      if (shift == 0) {
        c.integral_value = S * GK::integrate([&](double r) { return V.radial(r) * std::pow(r, k) * std::exp(d * r); },
                                             0.0, R, 20, 1e-13);
      } else {
        c.integral_value = GK::integrate(
            [&](double x) { return V.radial(std::abs(x - shift)) * std::exp(d * std::abs(x)); }, shift - R, shift + R,
            20, 1e-13);
      }
      c.truncation_radius = R + shift;
      c.verdict = DecayVerdict::converges;
      return c;
    }
    case PotentialForm::step:
      c.verdict = DecayVerdict::diverges;
      c.integral_value = std::numeric_limits<double>::infinity();
      return c;
    default:
      return c;
  }
}

double profile_square_norm(const RadialProfile& w, double q_prime) {
  if (std::isinf(q_prime)) return w.values.front() * w.values.front();
  // \int w^{2q'} in the scaled form so the tail never underflows
  const double k = w.decay();
  auto f = [&](double r) {
    return std::pow(w.value_scaled(r), 2.0 * q_prime) * std::exp(-2.0 * q_prime * k * r) * std::pow(r, w.N - 1);
  };
  const double R = w.r_max();
  double I = GK::integrate(f, 0.0, w.r_match, 20, 1e-14);
  I += GK::integrate(f, w.r_match, R, 20, 1e-14);
  boost::math::quadrature::exp_sinh<double> es;
  I += es.integrate([&](double x) { return f(R + x); }, 1e-14);
  return std::pow(sphere_area(w.N) * I, 1.0 / q_prime);
}

Threshold smallness_threshold_wholespace(double q, const ModelParams& params, const RadialProfile& unit) {
  params.validate();
  if (!q_admissible(q, params.N)) throw std::invalid_argument("q not admissible");
  const auto sc = compute_exponents(params);
  const double qp = std::isinf(q) ? 1.0 : (q == 1.0 ? q_infinity : q / (q - 1.0));
  Threshold t;
  t.exponent = std::isinf(q) ? 2.0 * sc.s : (2.0 * sc.s / q) * (q - params.N / 2.0);
  const double window = 1.0 - sc.threshold_factor;
  const auto wr = scaled_profile(unit, params.rho * params.rho);
  t.m_rho = wr.energy;
  t.w2_norm = profile_square_norm(wr, qp);
  t.L = 0.5 * 2.0 * window * (-t.m_rho) / t.w2_norm;
  t.c = 2.0 * window * (-unit.energy) / profile_square_norm(unit, qp);
  t.L_power_law = 0.5 * t.c * std::pow(params.rho, t.exponent);
  return t;
}

}  // namespace normsol
