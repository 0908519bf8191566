#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "tcurv/errors.hpp"
#include "tcurv/experiments.hpp"
#include "tcurv/io.hpp"
#include "tcurv/mesh_fixtures.hpp"

using namespace tcurv;
namespace fs = std::filesystem;

TEST_CASE("config text parses sections, comments, and layering") {
  const std::string text =
      "# suite defaults\n"
      "[global]\n"
      "seed = 7   # inline comment\n"
      "jobs = 0\n"
      "\n"
      "[chord-fit]\n"
      "samples = 300\n"
      "tol_rel = 0.03\n"
      "[develop]\n"
      "rows = 24\n"
      "cols = 32\n";
  const auto sections = parse_config_text(text);
  CHECK(sections.size() == 3);
  CHECK(sections.at("global").at("seed") == "7");
  CHECK(sections.at("chord-fit").at("samples") == "300");

  const ExperimentConfig cf = config_from_sections(sections, "chord-fit");
  CHECK(cf.seed == 7);
  CHECK(cf.samples == 300);
  CHECK(cf.tol_rel == 0.03);
  CHECK(cf.rows == -1);  // develop section does not leak

  const ExperimentConfig dv = config_from_sections(sections, "develop");
  CHECK(dv.seed == 7);
  CHECK(dv.rows == 24);
  CHECK(dv.cols == 32);
  CHECK(dv.samples == -1);
}

TEST_CASE("config rejections") {
  CHECK_THROWS_AS(parse_config_text("[global]\nwidgets = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[no-such-experiment]\nseed = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[global]\nseed = banana\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[global]\nsamples = 12x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[global]\nsamples = -20\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[global]\nsamples = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[global]\nt_max = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[global]\njobs = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("seed = 3\n"), ConfigError);          // key outside section
  CHECK_THROWS_AS(parse_config_text("[global\nseed = 3\n"), ConfigError); // unterminated header
  CHECK_THROWS_AS(parse_config_text("[global]\nseed\n"), ConfigError);    // missing '='
  CHECK_THROWS_AS(parse_config_text("[global]\nseed =\n"), ConfigError);  // empty value
  CHECK_NOTHROW(parse_config_text("[global]\njobs = 0\n"));

  ExperimentConfig cfg;
  cfg.name = "no-such-experiment";
  CHECK_THROWS_AS(run_single(cfg), ConfigError);
  CHECK_THROWS_AS(experiment_summary("no-such-experiment"), ConfigError);
}

TEST_CASE("experiment manifest") {
  const auto& names = experiment_names();
  CHECK(names.size() == 13);
  CHECK(names.front() == "spaces-selftest");
  CHECK(names.back() == "hull-aperture");
  for (const auto& n : names) CHECK(!experiment_summary(n).empty());
}

TEST_CASE("mesh io round trips doubles exactly") {
  const TriSurface s = geodesic_sphere(0.9, 2);
  std::ostringstream os;
  write_mesh(os, s);
  std::istringstream is(os.str());
  const TriSurface back = read_mesh(is);

  REQUIRE(back.vertices() == s.vertices());
  REQUIRE(back.triangles() == s.triangles());
  CHECK(back.genus == s.genus);
  CHECK(back.space->name() == "hyperbolic3");
  for (int i = 0; i < s.vertices(); ++i) {
    CHECK((back.x[i] - s.x[i]).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((back.nu[i] - s.nu[i]).lpNorm<Eigen::Infinity>() == 0.0);
  }
  for (int f = 0; f < s.triangles(); ++f) CHECK(back.tri[f] == s.tri[f]);
}

TEST_CASE("mesh io rejects malformed input") {
  const TriSurface s = icosphere(0);
  std::ostringstream os;
  write_mesh(os, s);
  const std::string good = os.str();

  {
    std::istringstream is("bogus-header 1\n");
    CHECK_THROWS_AS(read_mesh(is), ConfigError);
  }
  {
    std::string bad = good;
    bad.replace(bad.find("tcurv-mesh 1"), 12, "tcurv-mesh 9");
    std::istringstream is(bad);
    CHECK_THROWS_AS(read_mesh(is), ConfigError);
  }
  {
    std::string bad = good;
    bad.replace(bad.find("vertices 12"), 11, "vertices -4");
    std::istringstream is(bad);
    CHECK_THROWS_AS(read_mesh(is), ConfigError);
  }
  {
    // Last triangle line points past the vertex count.
    std::string bad = good;
    const auto cut = bad.find_last_of('\n', bad.size() - 2);
    bad = bad.substr(0, cut + 1) + "0 1 12\n";
    std::istringstream is(bad);
    CHECK_THROWS_AS(read_mesh(is), ConfigError);
  }
  {
    // Truncated vertex block.
    const auto head = good.find("genus 0\n") + 8;
    std::istringstream is(good.substr(0, head + 40));
    CHECK_THROWS_AS(read_mesh(is), ConfigError);
  }
}

TEST_CASE("turning curve io round trips the table exactly") {
  std::vector<double> knots;
  for (int i = 0; i <= 40; ++i) knots.push_back(2.5 * i / 40.0);
  const TurningCurve c = turning_curve_from_direction(
      knots, [](double t) { return 0.3 * t + 0.2 * std::sin(1.7 * t); }, 1.25);

  std::ostringstream os;
  write_turning_curve(os, c);
  std::istringstream is(os.str());
  const TurningCurve back = read_turning_curve(is);

  REQUIRE(back.knots.size() == c.knots.size());
  REQUIRE(back.theta.size() == c.theta.size());
  CHECK(back.speed == c.speed);
  for (size_t i = 0; i < c.knots.size(); ++i) CHECK(back.knots[i] == c.knots[i]);
  for (size_t i = 0; i < c.theta.size(); ++i) CHECK(back.theta[i] == c.theta[i]);
  REQUIRE(back.verts.size() == c.verts.size());
  for (size_t i = 0; i < c.verts.size(); ++i)
    CHECK((back.verts[i] - c.verts[i]).norm() <= 1e-12);

  std::istringstream junk("tcurv-turning 2\n");
  CHECK_THROWS_AS(read_turning_curve(junk), ConfigError);
}

TEST_CASE("csv table enforces width and formats through format_g") {
  CsvTable t({"a", "b"});
  t.add({"1", "2"});
  CHECK_THROWS_AS(t.add({"only-one"}), Error);
  t.add({format_g(0.1), format_g(1.0 / 3.0)});
  const std::string text = t.to_string();
  CHECK(text == "a,b\n1,2\n0.1,0.333333333333\n");

  CHECK(format_g(2.0) == "2");
  CHECK(format_g(-0.25) == "-0.25");
  CHECK(std::stod(format_g(1.3130352854993312)) == doctest::Approx(1.3130352854993312).epsilon(1e-11));
}

TEST_CASE("grid patches triangulate with the grid's vertex order") {
  const GridPatch p = strip_patch(0.8, 0.6, 5, 7);
  const TriSurface s = surface_from_grid(p);
  CHECK(s.vertices() == 35);
  CHECK(s.triangles() == 2 * 4 * 6);
  CHECK(s.space->name() == p.space->name());
  for (int i = 0; i < s.vertices(); ++i)
    CHECK((s.x[i] - p.x[i]).lpNorm<Eigen::Infinity>() == 0.0);
  // First cell: (0,0)-(0,1)-(1,1) and (0,0)-(1,1)-(1,0) up to diagonal choice.
  CHECK(s.tri[0][0] == 0);

  GridPatch tiny = p;
  tiny.rows = 1;
  tiny.x.resize(7);
  tiny.nu.resize(7);
  CHECK_THROWS_AS(surface_from_grid(tiny), DegenerateInput);
}

TEST_CASE("experiment runner writes deterministic artifacts") {
  const fs::path root = fs::temp_directory_path() / "tcurv-cli-test";
  fs::remove_all(root);

  ExperimentConfig cfg;
  cfg.name = "hull-aperture";
  cfg.seed = 11;
  cfg.out = (root / "run1").string();
  REQUIRE(run_experiment(cfg) == 0);

  const fs::path dir = root / "run1" / "hull-aperture";
  REQUIRE(fs::exists(dir / "results.csv"));
  REQUIRE(fs::exists(dir / "defects.csv"));
  REQUIRE(fs::exists(dir / "plotdata" / "cone-aperture.dat"));
  REQUIRE(fs::exists(dir / "h3-hull.mesh"));

  // The emitted hull mesh parses back in the Klein chart.
  const TriSurface hull = read_mesh_file((dir / "h3-hull.mesh").string());
  CHECK(hull.space->name() == "klein3");
  CHECK(hull.triangles() > 4);

  cfg.out = (root / "run2").string();
  cfg.jobs = 2;  // worker cap must not change a single byte
  REQUIRE(run_experiment(cfg) == 0);
  for (const char* rel : {"results.csv", "defects.csv", "plotdata/cone-aperture.dat",
                          "h3-hull.mesh"}) {
    CHECK(read_text_file((root / "run1" / "hull-aperture" / rel).string()) ==
          read_text_file((root / "run2" / "hull-aperture" / rel).string()));
  }

  // results.csv carries the pass column and every row passes.
  {
    std::istringstream is(read_text_file((dir / "results.csv").string()));
    std::string header;
    std::getline(is, header);
    CHECK(header.find(",pass,note") != std::string::npos);
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) {
      ++rows;
      CHECK(line.find(",1,") != std::string::npos);
    }
    CHECK(rows >= 8);
  }
  fs::remove_all(root);
}

TEST_CASE("small seeded suites run clean end to end") {
  const fs::path root = fs::temp_directory_path() / "tcurv-cli-suites";
  fs::remove_all(root);

  const auto sections = parse_config_text(
      "[global]\n"
      "seed = 5\n"
      "[spaces-selftest]\n"
      "instances = 1\n"
      "[majorize]\n"
      "instances = 6\n"
      "samples = 120\n"
      "[schur-suite]\n"
      "instances = 6\n"
      "samples = 256\n"
      "[two-point]\n"
      "instances = 8\n");
  for (const std::string name : {"spaces-selftest", "majorize", "schur-suite", "two-point"}) {
    ExperimentConfig cfg = config_from_sections(sections, name);
    cfg.name = name;
    cfg.out = (root / "o").string();
    CHECK(run_experiment(cfg) == 0);
    CHECK(fs::exists(root / "o" / name / "results.csv"));
  }
  fs::remove_all(root);
}
