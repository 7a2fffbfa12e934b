#include <doctest.h>

#include "normsol/config.hpp"
#include "normsol/report.hpp"

using namespace normsol;

TEST_CASE("valid config") {
  const auto c = parse_config("[model]\nN = 2\np = 3\nrho = 1.5\n[domain]\nobstacle_radius = 1\ncutoff_R = 10\n"
                              "[suite]\nname = landmarks\nr_values = 8, 16\n[potential]\nform = gaussian\namplitude = 0.1\n");
  CHECK(c.params.N == 2);
  CHECK(c.params.rho == doctest::Approx(1.5));
  CHECK(c.suite == Suite::landmarks);
  CHECK(c.r_values == std::vector<double>{8, 16});
  CHECK(c.potential.form == PotentialForm::gaussian);
  CHECK(c.domain.cutoff_R == 10);
}

TEST_CASE("diagnostics carry line and field") {
  auto err = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::pair{e.line, e.field};
    }
    return std::pair{-1, std::string()};
  };
  CHECK(err("[model]\nN = 2\np = 4.5\n") == std::pair{3, std::string("model.p")});
  CHECK(err("[model]\nN = 1\n\n[grid]\nh = fast\n") == std::pair{5, std::string("grid.h")});
  CHECK(err("[model]\nwidth = 3\n") == std::pair{2, std::string("model.width")});
  CHECK(err("[models]\nN = 2\n") == std::pair{1, std::string("models")});
  CHECK(err("[model]\nN = 2\np = 3\n[potential]\nform = gaussian\namplitude = 1\nq = 1\n").second == "potential.q");
  CHECK(err("[suite]\nt_points = 10\n").second == "suite.t_points");
  CHECK(err("[suite]\nname = everything\n").second == "suite.name");
  CHECK(err("[domain]\nobstacle_radius = 2\ncutoff_R = 1\n").second == "domain.cutoff_R");
  CHECK(err("[model]\nN = 2\np = 3\n[grid]\nx_max = 10\n").second == "grid.x_max");
  CHECK(err("[model\nN = 2\n").first == 1);
}

TEST_CASE("hash follows the text") {
  const auto a = parse_config("[model]\nN = 1\n");
  const auto b = parse_config("[model]\nN = 1\n");
  const auto c = parse_config("[model]\nN = 2\np = 3\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash_hex().size() == 16);
}

TEST_CASE("tolerance json") {
  Tolerances t;
  t.scale = 2;
  const json j = to_json(t);
  CHECK(j["scale"] == 2.0);
  CHECK(j.contains("identity"));
}
