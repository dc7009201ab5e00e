#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hallmhd/errors.hpp"
#include "hallmhd/experiments.hpp"
#include "hallmhd/initial.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/random.hpp"
#include "hallmhd/runner.hpp"
#include "hallmhd/snapshot.hpp"

using namespace hallmhd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("hallmhd_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

RunConfig tiny(const fs::path& out) {
  RunConfig c;
  c.n = 16;
  c.params = {0.1, 0.1, 1.0};
  c.dt = 1e-3;
  c.t_end = 0.01;
  c.sample_every = 2;
  c.initial.amplitude = 0.01;
  c.initial.hi = 3.0;
  c.out = out.string();
  return c;
}

bool same_fields(const SpectralVector& a, const SpectralVector& b) {
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.grid().spec_size(); ++i)
      if (a[c][i] != b[c][i]) return false;
  return true;
}

}  // namespace

TEST_CASE("config text round trip and rejection") {
  const auto c = RunConfig::parse(
      "# comment line\n"
      "dimension = 2.5\n"
      "formulation = physical   # trailing comment\n"
      "n = 48\n"
      "mu = 0.02\nnu = 0.03\neps = 0.5\n"
      "snapshot_times = 0.1, 0.5\n"
      "budgets = false\n");
  CHECK(c.grid_dim() == 2);
  CHECK(c.formulation == Formulation::Physical);
  CHECK(c.n == 48);
  CHECK(c.params.nu == 0.03);
  CHECK(c.snapshot_times == std::vector<double>{0.1, 0.5});
  CHECK_FALSE(c.budgets);

  const auto back = RunConfig::parse(c.to_text());
  CHECK(back.to_map() == c.to_map());
  CHECK(config_keys().size() == c.to_map().size());

  CHECK_THROWS_AS(RunConfig::parse("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("n = twelve\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("dt = 1e-3x\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("just words\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("budgets = maybe\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/config.txt"), ConfigError);

  RunConfig bad;
  bad.params = {0.1, 0.2, 1.0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);  // extended needs mu = nu
  bad.formulation = Formulation::Physical;
  CHECK_NOTHROW(bad.validate());
  bad.snapshot_times = {2.0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("snapshot round trip, corruption and grid mismatch") {
  const auto dir = scratch("snap");
  const auto g3 = Grid::make(3, 16);
  const auto g2 = Grid::make(2, 32);
  InitialSpec spec;
  spec.amplitude = 0.3;
  const auto s3 = make_initial(g3, spec, {1.0, 1.0, 0.7}, Formulation::Extended);
  auto s2 = make_initial(g2, spec, {1.0, 1.0, 0.7}, Formulation::Physical);
  s2.t = 0.125;

  const auto p3 = (dir / "a.hmhd").string();
  const auto p2 = (dir / "b.hmhd").string();
  write_snapshot(p3, s3);
  write_snapshot(p2, s2);

  const auto r3 = read_snapshot(p3);
  CHECK(r3.grid().dim() == 3);
  CHECK(r3.v.has_value());
  CHECK(same_fields(r3.u, s3.u));
  CHECK(same_fields(r3.b, s3.b));
  CHECK(same_fields(*r3.v, *s3.v));
  const auto r2 = read_snapshot(p2, *g2);
  CHECK(r2.t == 0.125);
  CHECK_FALSE(r2.v.has_value());
  CHECK(same_fields(r2.u, s2.u));

  const auto h = read_snapshot_header(p3);
  CHECK(h.version == kSnapshotVersion);
  CHECK(h.n == 16);
  CHECK(h.components == 9);
  CHECK(h.crc_ok);
  CHECK(read_snapshot_header(p2).dimension == 2);

  // other resolution or dimension
  CHECK_THROWS_AS(read_snapshot(p3, *Grid::make(3, 32)), FormatError);
  CHECK_THROWS_AS(read_snapshot(p2, *Grid::make(3, 32)), FormatError);

  // one flipped byte in the payload
  auto bytes = slurp(p3);
  bytes[bytes.size() / 2] ^= 0x01;
  const auto bad = (dir / "bad.hmhd").string();
  std::ofstream(bad, std::ios::binary) << bytes;
  CHECK_FALSE(read_snapshot_header(bad).crc_ok);
  CHECK_THROWS_AS(read_snapshot(bad), FormatError);

  // truncated and foreign files
  const auto cut = (dir / "cut.hmhd").string();
  std::ofstream(cut, std::ios::binary) << slurp(p3).substr(0, 100);
  CHECK_THROWS_AS(read_snapshot(cut), FormatError);
  const auto junk = (dir / "junk.hmhd").string();
  std::ofstream(junk, std::ios::binary) << "not a snapshot at all, just some text";
  CHECK_THROWS_AS(read_snapshot(junk), FormatError);
  CHECK_THROWS_AS(read_snapshot((dir / "missing.hmhd").string()), FormatError);
}

TEST_CASE("runner on zero data") {
  const auto dir = scratch("zero");
  auto c = tiny(dir);
  c.initial.kind = "zero";
  const auto r = run(c);
  CHECK(r.pass());
  CHECK(r.steps == 10);
  CHECK(r.records.size() == 6);
  CHECK(r.max_energy_drift == 0.0);
  CHECK(r.max_budget_residual == 0.0);
  for (const auto& y : r.triple) CHECK(y == 0.0);
  CHECK(fs::exists(dir / "timeseries.csv"));
  CHECK(fs::exists(dir / "final.hmhd"));
  CHECK(fs::exists(dir / "summary.json"));
}

TEST_CASE("runner output is deterministic and complete") {
  const auto d1 = scratch("det1");
  const auto d2 = scratch("det2");
  auto c = tiny(d1);
  c.snapshot_times = {0.0, 0.005};
  const auto r1 = run(c);
  c.out = d2.string();
  const auto r2 = run(c);
  CHECK(r1.pass());
  CHECK(slurp(d1 / "timeseries.csv") == slurp(d2 / "timeseries.csv"));
  CHECK(slurp(d1 / "final.hmhd") == slurp(d2 / "final.hmhd"));
  CHECK(fs::exists(d1 / "snapshot_0000.hmhd"));
  CHECK(fs::exists(d1 / "snapshot_0001.hmhd"));
  CHECK(read_snapshot((d1 / "snapshot_0001.hmhd").string()).t == doctest::Approx(0.005));

  // header row, then one row per sample: t = 0 and every second step
  std::istringstream csv(slurp(d1 / "timeseries.csv"));
  std::string header, line;
  std::getline(csv, header);
  std::string expect;
  for (const auto& col : record_columns()) expect += (expect.empty() ? "" : ",") + col;
  CHECK(header == expect);
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 6);
  CHECK(r1.records.size() == 6);
  CHECK(r1.max_budget_residual < 1e-5);
  CHECK(r1.max_energy_drift < 1e-9);

  // the final snapshot restarts the run where it stopped
  const auto fin = read_snapshot((d1 / "final.hmhd").string());
  CHECK(fin.t == doctest::Approx(0.01));
  CHECK(same_fields(fin.u, r1.final_state->u));
}

TEST_CASE("runner rejects an unstable step before writing output") {
  const auto dir = fs::temp_directory_path() / "hallmhd_test_unstable";
  fs::remove_all(dir);
  auto c = tiny(dir);
  c.initial.amplitude = 2.0;
  c.dt = 0.05;
  CHECK_THROWS_AS(run(c), ConfigError);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("runner stops with exit code 3 when the step becomes unstable") {
  // shear u = sin(y) e1 stretches B = 0.1 cos(x) e2: max|B| grows linearly
  const auto g = Grid::make(3, 16);
  SpectralVector u(g, true), b(g, true);
  u[0][std::size_t(g->index_of(0, 1, 0))] = {0.0, -0.5};
  u[0][std::size_t(g->index_of(0, -1, 0))] = {0.0, 0.5};
  b[1][std::size_t(g->index_of(1, 0, 0))] = 0.05;
  b[1][std::size_t(g->index_of(-1, 0, 0))] = 0.05;
  const PhysicalParams p{1e-3, 1e-3, 1.0};
  auto v = u;
  v.axpy(-p.eps, curl(b));
  const State s0(u, b, v, 0.0);

  const auto dir = scratch("cfl");
  auto c = tiny(dir);
  c.params = p;
  c.t_end = 1.0;
  c.dt = stable_dt(s0, p, c.hall_cfl);
  RunOptions o;
  o.initial = s0;
  const auto r = run(c, o);
  CHECK(r.exit_code == kExitNumeric);
  CHECK_FALSE(r.error.empty());
  REQUIRE(fs::exists(dir / "last_good.hmhd"));
  CHECK_FALSE(fs::exists(dir / "final.hmhd"));
  const auto last = read_snapshot((dir / "last_good.hmhd").string());
  CHECK(last.t > 0.0);
  CHECK(last.t < 1.0);
  CHECK(fs::exists(dir / "summary.json"));
}

TEST_CASE("2.5D run checks the E equation and fits constants") {
  auto c = tiny(scratch("two"));
  c.dimension = "2.5";
  c.formulation = Formulation::Physical;
  c.n = 32;
  RunOptions o;
  o.write_files = false;
  const auto r = run(c, o);
  REQUIRE(r.monitor("e_equation") != nullptr);
  INFO("E residual " << r.max_e_residual);
  CHECK(r.pass());
  CHECK(r.monitor("e_equation")->pass);
  CHECK(r.fitted.has_value());
  CHECK(r.monitor("budget_identities") == nullptr);
}

TEST_CASE("bisection brackets a known threshold") {
  int calls = 0;
  auto below = [&](double a) {
    ++calls;
    return a < 0.3;
  };
  const auto r = bisect_amplitude(below, 0.01, 0.1, 12);
  CHECK(r.threshold < 0.3);
  CHECK(r.failing >= 0.3);
  CHECK(r.failing / r.threshold < 1.01);
  CHECK(r.runs == calls);
  CHECK(r.history.size() == std::size_t(calls));

  // lo already failing: widened downwards
  const auto w = bisect_amplitude(below, 1.0, 2.0, 4);
  CHECK(w.threshold < 0.3);
  CHECK(w.failing >= 0.3);

  const auto never = bisect_amplitude([](double) { return true; }, 0.1, 0.2, 3);
  CHECK(std::isinf(never.failing));
  const auto none = bisect_amplitude([](double) { return false; }, 0.1, 0.2, 3);
  CHECK(none.threshold == 0.0);
  CHECK_THROWS_AS(bisect_amplitude(below, 0.2, 0.1, 3), ConfigError);
}

TEST_CASE("presets") {
  CHECK(preset_ids().size() == 7);
  for (const auto& id : preset_ids()) {
    CHECK_NOTHROW(preset_config(id).validate());
    CHECK_FALSE(preset_statement(id).empty());
  }
  CHECK_THROWS_AS(preset_config("nope"), ConfigError);
  CHECK_THROWS_AS(run_experiment("fujita-kato-3d", {{"bogus", "1"}}, "unused", false), ConfigError);

  // identical twin runs agree to the last bit
  const auto rep = run_experiment("weak-strong-3d", {{"perturb", "0"}, {"t_end", "0.01"}}, "unused", false);
  CHECK(rep.pass);
  CHECK(rep.detail["max_delta"].get<double>() == 0.0);
}
