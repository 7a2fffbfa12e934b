#pragma once
#include <fstream>
#include <json.hpp>
#include <string>

#include "normsol/config.hpp"
#include "normsol/minmax.hpp"
#include "normsol/one_dim.hpp"
#include "normsol/saddle.hpp"

namespace normsol {

using json = nlohmann::json;

json to_json(const Tolerances& t);
json to_json(const MinMaxReport& r);
json to_json(const SolveReport& r);  // the field itself goes to a snapshot file
json to_json(const Witness& w);
json to_json(const C0Estimate& c);
json to_json(const EscapeReport& e);
json to_json(const OneDimReport& r);

// One JSON object per line, each stamped with the config hash and tolerance set.
class ReportSink {
 public:
  ReportSink(const std::string& dir, const ExperimentConfig& cfg);
  void emit(const std::string& kind, json body);
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::string hash_;
  json tol_;
  std::ofstream out_;
};

void write_energy_csv(const std::string& path, const TestSurface& S);
// heat map of E over (z index, t) with the landmark points marked
void write_surface_svg(const std::string& path, const TestSurface& S, const MinMaxReport* rep, const Witness* w);

}  // namespace normsol
