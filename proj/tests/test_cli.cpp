#include "resint/run.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace resint;
using namespace resint::test;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Workdir
{
  fs::path dir;
  Workdir()
  {
    dir = fs::temp_directory_path() / ("resint_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }

  fs::path write(std::string const &name, std::string const &text) const
  {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
};

int invoke(std::string const &args, fs::path const &log)
{
  std::string const cmd = std::string(RESINT_CLI) + " " + args + " > " + log.string() + " 2>&1";
  int const status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(fs::path const &p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(fs::path const &p)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

double slope_from(fs::path const &log)
{
  std::istringstream in(slurp(log));
  for (std::string word; in >> word;)
    if (word == "slope") {
      double v;
      in >> v;
      return v;
    }
  return std::nan("");
}

std::string const base = R"(
  "state": {"pure": {"theta": 0.7853981633974483, "phi": 0}},
  "dipole_a": [[1, 0], [0, 0], [0, 0]],
  "omega0": 1,
  "n": [0, 0, 1])";

} // namespace

TEST_CASE("slope-fit near and far")
{
  Workdir w;
  auto const near = w.write("near.json", "{" + base + R"(,
    "r_range": {"min": 1e-3, "max": 1e-2, "count": 25, "spacing": "log"}})");
  REQUIRE(invoke("slope-fit --config " + near.string() + " --out " + (w.dir / "near.csv").string(), w.dir / "near.log") ==
          0);
  CHECK(slope_from(w.dir / "near.log") == doctest::Approx(-3).epsilon(0.01 / 3));

  auto const far = w.write("far.json", "{" + base + ",\n" + R"("r_range": {"min": )" + format_double(100 * pi) +
                                         R"(, "max": )" + format_double(1000 * pi) +
                                         R"(, "count": 60, "spacing": "extrema"}})");
  REQUIRE(invoke("slope-fit --config " + far.string() + " --out " + (w.dir / "far.csv").string(), w.dir / "far.log") ==
          0);
  CHECK(std::abs(slope_from(w.dir / "far.log") + 1) <= 0.05);
}

TEST_CASE("sweep output is deterministic and consistent")
{
  Workdir w;
  auto const cfg = w.write("sweep.json", "{" + base + R"(,
    "r_range": {"min": 0.1, "max": 20, "count": 40, "spacing": "log"},
    "coherence_columns": true})");
  REQUIRE(invoke("sweep --config " + cfg.string() + " --out " + (w.dir / "a.csv").string() + " --workers 1",
                 w.dir / "a.log") == 0);
  REQUIRE(invoke("sweep --config " + cfg.string() + " --out " + (w.dir / "b.csv").string() + " --workers 4",
                 w.dir / "b.log") == 0);
  CHECK(slurp(w.dir / "a.csv") == slurp(w.dir / "b.csv"));

  auto const rows = read_csv(w.dir / "a.csv");
  REQUIRE(rows.size() == 41);
  CHECK(rows[0] == std::vector<std::string>{"r", "omega0_r", "steady_energy", "dimensionless_energy", "Q", "l1",
                                            "concurrence"});

  auto const d = TransitionDipole<double>::real(1, 0, 0);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    double const r = std::stod(rows[k][0]);
    double const e = std::stod(rows[k][2]);
    double const q = std::stod(rows[k][4]);
    Geometry<double> g{r, Vector3<double>::UnitZ(), 1.0};
    double const identity = 2 * q * dipole_contraction(d, dipole_tensor(g));
    CHECK(std::abs(e - identity) <= 1e-12 * std::max(std::abs(e), energy_scale(d, d, g)));
    if (k > 1) CHECK(r > std::stod(rows[k - 1][0]));
  }
}

TEST_CASE("werner scan is linear in p")
{
  Workdir w;
  auto const cfg = w.write("scan.json", "{" + base + R"(,
    "r": 1.7,
    "scan": {"p": {"min": 0, "max": 1, "count": 5}}})");
  REQUIRE(invoke("scan --config " + cfg.string() + " --out " + (w.dir / "scan.csv").string(), w.dir / "scan.log") == 0);
  auto const rows = read_csv(w.dir / "scan.csv");
  REQUIRE(rows.size() == 6);
  CHECK(rows[0][0] == "p");
  CHECK(rows[0][3] == "steady_energy");
  double const full = std::stod(rows[5][3]);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    double const p = std::stod(rows[k][0]);
    CHECK(std::abs(std::stod(rows[k][3]) - p * full) <= 1e-12 * std::abs(full));
  }
}

TEST_CASE("single-point modes")
{
  Workdir w;
  auto const cfg = w.write("point.json", "{" + base + R"(, "r": 1.0})");
  CHECK(invoke("energy --config " + cfg.string(), w.dir / "energy.log") == 0);
  CHECK(slurp(w.dir / "energy.log").find("Q") != std::string::npos);

  CHECK(invoke("tensor --config " + cfg.string() + " --out " + (w.dir / "t.csv").string(), w.dir / "t.log") == 0);
  auto const tensor = read_csv(w.dir / "t.csv");
  REQUIRE(tensor.size() == 10);
  CHECK(tensor[0] == std::vector<std::string>{"i", "j", "dipole", "near_zone", "far_zone"});

  CHECK(invoke("coherence --config " + cfg.string() + " --out " + (w.dir / "c.csv").string(), w.dir / "c.log") == 0);
  auto const coh = read_csv(w.dir / "c.csv");
  REQUIRE(coh.size() == 2);
  CHECK(std::stod(coh[1][2]) == doctest::Approx(1.0));
}

TEST_CASE("exit codes")
{
  Workdir w;
  auto const bad = w.write("bad.json", "{" + base + R"(, "r": 1.0, "n": [0, 0, 0.9]})");
  CHECK(invoke("energy --config " + bad.string(), w.dir / "bad.log") == exit_code::invalid_config);
  CHECK(slurp(w.dir / "bad.log").find("$.n") != std::string::npos);

  auto const unknown = w.write("unknown.json", "{" + base + R"(, "r": 1.0, "extra": 1})");
  CHECK(invoke("energy --config " + unknown.string(), w.dir / "unknown.log") == exit_code::invalid_config);
  CHECK(invoke("energy --config " + (w.dir / "missing.json").string(), w.dir / "missing.log") != 0);

  auto const budget = w.write("budget.json", "{" + base + R"(, "r": 1.0, "oracle": {"max_evals": 2000}})");
  CHECK(invoke("oracle-check --config " + budget.string() + " --out " + (w.dir / "o.csv").string(), w.dir / "o.log") ==
        exit_code::oracle_nonconvergence);

  auto const ok = w.write("ok.json", "{" + base + R"(, "r": 1.0})");
  CHECK(invoke("oracle-check --config " + ok.string() + " --out " + (w.dir / "ok.csv").string(), w.dir / "ok.log") == 0);
  auto const rows = read_csv(w.dir / "ok.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][4] == "rel_diff");
  CHECK(std::stod(rows[1][4]) <= 1e-3);
  CHECK(rows[1][7] == "true");
}
