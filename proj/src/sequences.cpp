#include <algorithm>
#include <cmath>

#include "normsol/interaction.hpp"
#include "normsol/saddle.hpp"
#include "normsol/scaling_laws.hpp"

namespace normsol {

namespace {

void require_plain(const Problem& pb) {
  if (pb.half_line() || !pb.domain.whole_space() || !pb.V.is_zero())
    throw std::invalid_argument("sequence witnesses need the whole space with V = 0");
}

// |E_h - E| for one centred copy of w on this lattice, at its own mass
double sampled_error(const Problem& pb, const RadialProfile& w) {
  const GridField u = soliton_field(pb, w, {0, 0, 0}, false);
  return std::abs(pb.ef->total_energy(u) - w.energy);
}

void finish(SequenceWitness& sw, EscapeLabel expected) {
  sw.deviation = std::abs(sw.energies.back() - sw.target);
  sw.bound = sw.grid_error + sw.quad_error;
  sw.ok = sw.deviation <= sw.bound && sw.bound < 0.01 * std::abs(sw.target) && sw.escape.label == expected;
}

}  // namespace

SequenceWitness two_bump_sequence(const Problem& pb, const std::vector<double>& offsets) {
  require_plain(pb);
  SequenceWitness sw;
  sw.name = "two-bump";
  sw.offsets = offsets;
  sw.target = pb.sc.threshold_factor * pb.w.energy;
  const double ell = pb.decay_length(), rho = pb.params.rho;
  const RadialProfile half = scaled_profile(pb.w, 0.5);
  std::vector<GridField> fields;
  for (double y : offsets) {
    GridField a = soliton_field(pb, half, {-y * ell, 0, 0}, false);
    const GridField b = soliton_field(pb, half, {y * ell, 0, 0}, false);
    for (std::size_t i = 0; i < a.size(); ++i) a.v[i] += b.v[i];
    fields.push_back(project_mass(a, rho));
    sw.energies.push_back(pb.ef->total_energy(fields.back()));
  }
  // each half carries its own discretisation error
  sw.grid_error = 2 * sampled_error(pb, half);
  // leading cross terms, int w^{p-1} w', at the last separation; doubled for the mass projection
  const BumpPair bp = make_bump_pair(pb.w, rho, 0.5);
  std::vector<double> z(pb.params.N, 0.0);
  z[0] = -1;
  const auto q = sigma_t(offsets.back() * ell, bp, z);
  sw.quad_error = 2 * (std::abs(q.value) + q.error);
  sw.escape = ps_escape_diagnostic(pb, fields, sw.energies);
  finish(sw, EscapeLabel::dichotomy);
  return sw;
}

SequenceWitness translated_sequence(const Problem& pb, const std::vector<double>& offsets) {
  require_plain(pb);
  SequenceWitness sw;
  sw.name = "translated";
  sw.offsets = offsets;
  sw.target = pb.w.energy;
  const double ell = pb.decay_length();
  std::vector<GridField> fields;
  for (double y : offsets) {
    fields.push_back(project_mass(soliton_field(pb, pb.w, {y * ell, 0, 0}, false), pb.params.rho));
    sw.energies.push_back(pb.ef->total_energy(fields.back()));
  }
  // off-node centres can double the centred sampling error; the box tail is below it
  sw.grid_error = 2 * sampled_error(pb, pb.w);
  const double gap = pb.lat->half_width(0) - offsets.back() * ell;
  sw.quad_error = pb.w.value(std::max(gap, 0.0)) * pb.w.value(0) * std::pow(pb.lat->h, pb.params.N);
  sw.escape = ps_escape_diagnostic(pb, fields, sw.energies);
  finish(sw, EscapeLabel::translation);
  return sw;
}

}  // namespace normsol
