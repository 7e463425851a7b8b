#include <filesystem>
#include <fstream>
#include <cmath>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace susyqm::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

bool usage_error(const std::vector<std::string>& args) {
  try {
    parse_args(args);
  } catch (const UsageError&) {
    return true;
  }
  return false;
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "susy_spectra_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("argument parsing") {
  const auto c = parse_args({"spectrum", "--catalog", "morse", "--param", "A=3", "--levels", "5"});
  CHECK(c.command == Command::Spectrum);
  CHECK(c.input_kind == InputKind::Catalog);
  CHECK(c.input == "morse");
  CHECK(c.params.at("A") == 3.0);
  CHECK(c.levels == 5);
  CHECK(c.format == Format::Csv);

  const auto s = parse_args({"si-check", "--w", "A*tanh(x)", "--param", "A=2", "--transform",
                             "translation", "--alpha", "-1", "--transform-param", "A"});
  CHECK(s.format == Format::Json);
  CHECK(s.input_kind == InputKind::Expression);
  CHECK(*s.alpha == -1.0);
  CHECK(*s.transform_param == "A");

  CHECK(parse_args({"catalog"}).input_kind == InputKind::None);
  CHECK(parse_args({"solve", "--w", "x", "--format", "json"}).format == Format::Json);
}

TEST_CASE("usage errors") {
  CHECK(usage_error({}));
  CHECK(usage_error({"frobnicate"}));
  CHECK(usage_error({"solve"}));
  CHECK(usage_error({"solve", "--catalog", "morse", "--w", "x"}));
  CHECK(usage_error({"spectrum", "--catalog", "morse", "--tabulated", "v.csv"}));
  CHECK(usage_error({"solve", "--w", "A*x"}));
  CHECK(usage_error({"solve", "--w", "x", "--param", "A=1"}));
  CHECK(usage_error({"solve", "--w", "x+", "--points", "11"}));
  CHECK(usage_error({"solve", "--w", "x", "--param", "x"}));
  CHECK(usage_error({"solve", "--w", "x", "--points", "2"}));
  CHECK(usage_error({"solve", "--w", "x", "--x-min", "3", "--x-max", "1"}));
  CHECK(usage_error({"solve", "--w", "x", "--format", "xml"}));
  CHECK(usage_error({"solve", "--catalog", "hydrogen"}));
  CHECK(usage_error({"solve", "--catalog", "scaling-demo"}));
  CHECK(usage_error({"solve", "--tabulated", "v.csv", "--points", "11"}));
  CHECK(usage_error({"si-check", "--tabulated", "v.csv"}));
  CHECK(usage_error({"si-check", "--w", "x", "--transform", "rotation"}));
  CHECK(usage_error({"si-check", "--w", "x", "--alpha", "1"}));
  CHECK(usage_error({"classify", "--w", "x", "--budget", "9"}));
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"catalog"}).code == kExitOk);
  const auto help = run_cli({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("si-check") != std::string::npos);

  const auto bad = run_cli({"solve", "--w", "x", "--w", "y"});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.rfind("usage error:", 0) == 0);

  const auto missing = run_cli({"solve", "--tabulated", "/nonexistent/v.csv"});
  CHECK(missing.code == kExitFailure);
  CHECK(missing.err.find("error") != std::string::npos);

  CHECK(run_cli({"si-check", "--catalog", "morse"}).code == kExitOk);
  CHECK(run_cli({"si-check", "--catalog", "morse", "--transform", "translation", "--alpha", "-0.5",
                 "--transform-param", "A"})
            .code == kExitFailure);
  CHECK(run_cli({"algebra-check", "--w", "x", "--points", "201"}).code == kExitOk);
}

TEST_CASE("spectrum output") {
  const auto r = run_cli({"spectrum", "--catalog", "morse", "--levels", "3"});
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string header, row0, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == "n,algebraic,oracle,valid");
  CHECK(row1.rfind("1,3,2.9999", 0) == 0);
  CHECK(row2 == "2,4,,false");

  const auto pt = run_cli({"spectrum", "--catalog", "poschl-teller", "--param", "A=2", "--levels", "3"});
  REQUIRE(pt.code == kExitOk);
  std::istringstream pt_lines(pt.out);
  std::string line;
  std::getline(pt_lines, line);
  std::getline(pt_lines, line);
  std::getline(pt_lines, line);
  const auto first = line.find(',');
  const auto second = line.find(',', first + 1);
  CHECK(line.substr(0, second) == "1,3");
  CHECK(std::abs(std::stod(line.substr(second + 1)) - 3.0) < 5e-3);
}

TEST_CASE("JSON commands parse") {
  const auto c = json::parse(run_cli({"classify", "--catalog", "scaling-demo"}).out);
  CHECK(c["ih_factorizable"] == "no-within-search");
  const auto a = json::parse(run_cli({"algebra-check", "--w", "x", "--points", "201"}).out);
  CHECK(a["report"]["pass"] == true);
  const auto cat = json::parse(run_cli({"catalog", "--catalog", "morse"}).out);
  CHECK(cat.dump().find("morse") != std::string::npos);
}

TEST_CASE("output files and side files") {
  const auto dir = scratch_dir();
  const auto path = dir / "osc.csv";
  const auto r = run_cli({"solve", "--w", "x", "--levels", "2", "--output", path.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  CHECK(slurp(path).rfind("n,energy,nodes,bound\n", 0) == 0);
  CHECK(slurp(dir / "osc_states.csv").rfind("x,psi_0,psi_1\n", 0) == 0);

  const auto h = dir / "h.json";
  REQUIRE(run_cli({"hierarchy", "--w", "x", "--depth", "2", "--format", "json", "--output",
                   h.string()})
              .code == kExitOk);
  CHECK(fs::exists(dir / "h_potentials.csv"));

  const auto fig = dir / "venn.dot";
  REQUIRE(run_cli({"classify", "--catalog", "morse", "--fig", fig.string()}).code == kExitOk);
  CHECK(slurp(fig).rfind("digraph venn", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("tabulated input") {
  const auto dir = scratch_dir();
  const auto path = dir / "v.csv";
  {
    std::ofstream f(path);
    f << "x,V\n";
    for (int i = 0; i <= 800; ++i) {
      const double x = -8.0 + 0.02 * i;
      f << x << ',' << x * x << '\n';
    }
  }
  const auto r = run_cli({"solve", "--tabulated", path.string(), "--levels", "2"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("\n0,0.99") != std::string::npos);
  const auto c = json::parse(run_cli({"classify", "--tabulated", path.string()}).out);
  CHECK(c["susy"] == "yes");
  fs::remove_all(dir);
}

TEST_CASE("determinism") {
  const std::vector<std::vector<std::string>> runs{
      {"spectrum", "--catalog", "poschl-teller", "--levels", "3"},
      {"classify", "--w", "A-exp(-x)", "--param", "A=2", "--x-min", "-4", "--x-max", "18"},
      {"partner", "--catalog", "morse", "--points", "101", "--x-max", "5"},
      {"wavefunctions", "--catalog", "shifted-harmonic", "--levels", "3", "--points", "401"},
  };
  for (const auto& args : runs) {
    CAPTURE(args.front());
    const auto first = run_cli(args);
    REQUIRE(first.code == kExitOk);
    CHECK(first.out == run_cli(args).out);
  }
}

TEST_CASE("dump-config") {
  const auto r = run_cli({"spectrum", "--catalog", "morse", "--param", "A=3", "--dump-config"});
  REQUIRE(r.code == kExitOk);
  const auto j = json::parse(r.out);
  CHECK(j["command"] == "spectrum");
  CHECK(j["input"]["kind"] == "catalog");
  CHECK(j["params"]["A"] == 3.0);
  CHECK(j["grid"]["n_points"].is_null());
  CHECK(j["threads"].get<int>() >= 1);
}
