#include <algorithm>
#include <cmath>

#include "normsol/saddle.hpp"

namespace normsol {

std::string to_string(EscapeLabel l) {
  switch (l) {
    case EscapeLabel::compact: return "compact";
    case EscapeLabel::translation: return "translation";
    case EscapeLabel::dichotomy: return "dichotomy";
  }
  return "?";
}

namespace {

double dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double s = 0;
  for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

bool local_max(const Lattice& L, const std::vector<double>& a, std::size_t i) {
  for (int ax = 0; ax < L.dim; ++ax) {
    const std::size_t s = L.stride(ax);
    const int k = L.unravel(i)[ax];
    if (k > 0 && a[i - s] > a[i]) return false;
    if (k + 1 < L.n[ax] && a[i + s] > a[i]) return false;
  }
  return true;
}

SnapshotStats analyse(const Problem& pb, const GridField& u, double energy) {
  const Lattice& L = *u.lat;
  const double ell = pb.decay_length();
  SnapshotStats st;
  st.energy = energy;
  std::vector<double> a(u.size());
  double total = 0;
  std::size_t i1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = std::abs(u.v[i]);
    total += a[i] * a[i];
    for (int d = 0; d < L.dim; ++d) st.com[d] += a[i] * a[i] * L.position(i)[d];
    if (a[i] > a[i1]) i1 = i;
  }
  for (int d = 0; d < L.dim; ++d) st.com[d] /= total;
  st.c1 = L.position(i1);

  std::size_t i2 = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.2 * a[i1] || !L.free[i]) continue;
    if (dist(L.position(i), st.c1) <= 2 * ell) continue;
    if (!local_max(L, a, i)) continue;
    if (i2 == a.size() || a[i] > a[i2]) i2 = i;
  }
  st.two_bumps = i2 < a.size();
  double R = 2 * ell;
  if (st.two_bumps) {
    st.c2 = L.position(i2);
    st.separation = dist(st.c1, st.c2);
    R = std::min(R, 0.5 * st.separation);
  }
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto x = L.position(i);
    if (dist(x, st.c1) < R) m1 += a[i] * a[i];
    if (st.two_bumps && dist(x, st.c2) < R) m2 += a[i] * a[i];
  }
  st.f1 = m1 / total;
  st.f2 = m2 / total;
  st.beta_norm = dist(barycenter(u, pb.ball, pb.ef->backend()).beta, {0, 0, 0});
  return st;
}

}  // namespace

EscapeReport ps_escape_diagnostic(const Problem& pb, const std::vector<GridField>& fields,
                                  const std::vector<double>& energies) {
  EscapeReport rep;
  if (fields.empty()) return rep;
  for (std::size_t k = 0; k < fields.size(); ++k) rep.stats.push_back(analyse(pb, fields[k], energies[k]));
  const auto& first = rep.stats.front();
  const auto& last = rep.stats.back();
  const double ell = pb.decay_length();
  rep.level = last.energy;
  rep.drift = dist(last.com, first.com);
  rep.separation_growth = last.separation - (first.two_bumps ? first.separation : 0.0);
  if (last.two_bumps && last.f1 >= 0.2 && last.f2 >= 0.2 && rep.separation_growth > ell)
    rep.label = EscapeLabel::dichotomy;
  else if (rep.drift > ell)
    rep.label = EscapeLabel::translation;
  else
    rep.label = EscapeLabel::compact;
  return rep;
}

}  // namespace normsol
