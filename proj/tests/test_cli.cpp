#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "periodfn/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"periodfn"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = periodfn::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

const char* kGs = "(((x+s)/2)*sinh(2*x)-(cosh(2*x)-1)/4)/s";

}  // namespace

TEST_CASE("period table for the linear oscillator") {
  const Run r = run({"period", "--g", "x", "--cmin", "0.1", "--cmax", "10", "--steps", "3"});
  CHECK(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "c,T,dTdc,err");
  for (int i = 1; i <= 3; ++i) CHECK(l[i].find(",6.28318530718,") != std::string::npos);
}

TEST_CASE("pendulum period row") {
  const Run r = run({"period", "--g", "sin(x)", "--cmin", "0.5", "--cmax", "1", "--steps", "2"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).back().rfind("1,7.41629870921,", 0) == 0);
}

TEST_CASE("analyze reports") {
  const Run text = run({"analyze", "--g", "x + x^2"});
  CHECK(text.code == 0);
  CHECK(text.out.find("verdict: increasing via C0") != std::string::npos);

  const Run js = run({"analyze", "--g", "x + x^2", "--json"});
  CHECK(js.code == 0);
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j["domain"]["c_bar"].get<double>() == doctest::Approx(1.0 / 6));
  CHECK(j["domain"]["left_kind"] == "g_vanishes");
  CHECK(j["verdict"]["direction"] == "increasing");
  CHECK(j["period_table"]["flag"] == "increasing");
  CHECK(j["potential"]["derivatives_at_zero"]["2"].get<double>() == 2.0);

  const Run lin = run({"analyze", "--g", "x"});
  CHECK(lin.code == 0);
  CHECK(lin.out.find("verdict: inconclusive") != std::string::npos);

  const Run gs = run({"analyze", "--g", kGs, "--param", "s=0.647", "--json"});
  CHECK(gs.code == 0);
  CHECK(nlohmann::json::parse(gs.out)["verdict"]["direction"] == "decreasing");
}

TEST_CASE("output is deterministic") {
  const Run a = run({"analyze", "--g", kGs, "--param", "s=0.647", "--json"});
  const Run b = run({"analyze", "--g", kGs, "--param", "s=0.647", "--json"});
  CHECK(a.out == b.out);
}

TEST_CASE("scan footer and involution") {
  const Run lin = run({"scan", "--g", "x", "--grid", "1000"});
  CHECK(lin.code == 0);
  CHECK(lin.out.find("overall=vanishing") != std::string::npos);
  CHECK(lin.out.find("# roots: none") != std::string::npos);

  const Run gs = run({"scan", "--g", kGs, "--param", "s=0.647", "--n", "0"});
  CHECK(gs.code == 0);
  CHECK(gs.out.find("sign_near_zero=negative") != std::string::npos);
  CHECK(gs.out.find("-0.0107364123") != std::string::npos);

  const Run inv = run({"involution", "--g", "x + x^2", "--x", "0.5"});
  CHECK(inv.code == 0);
  CHECK(lines(inv.out).at(1).rfind("0.5,-1,", 0) == 0);
}

TEST_CASE("exit codes") {
  const Run parse = run({"analyze", "--g", "x +"});
  CHECK(parse.code == periodfn::cli::kExitParse);
  CHECK(parse.err.rfind("error: parse:", 0) == 0);
  CHECK(parse.err.find("position 3") != std::string::npos);

  const Run hyp = run({"analyze", "--g", "2*x"});
  CHECK(hyp.code == periodfn::cli::kExitHypothesis);
  CHECK(hyp.err.find("g'(0)") != std::string::npos);

  CHECK(run({"analyze", "--g", kGs}).code == periodfn::cli::kExitParse);
  CHECK(run({"analyze", "--g", "x", "--param", "s"}).code == periodfn::cli::kExitParse);
  CHECK(run({"frobnicate"}).code == periodfn::cli::kExitParse);
  CHECK(run({"period", "--g", "x + x^2", "--cmax", "0.5"}).code == periodfn::cli::kExitParse);

  const Run num = run({"analyze", "--g", "ln(1+x)"});
  CHECK(num.code == periodfn::cli::kExitNumeric);
  CHECK(num.err.rfind("error: numeric:", 0) == 0);
  CHECK(lines(num.err).size() == 1);

  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("the installed tool propagates exit codes") {
  const std::string tool = PERIODFN_TOOL;
  CHECK(WEXITSTATUS(std::system((tool + " period --g x --steps 2 >/dev/null").c_str())) == 0);
  CHECK(WEXITSTATUS(std::system((tool + " analyze --g 'x +' 2>/dev/null").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system((tool + " analyze --g '2*x' 2>/dev/null").c_str())) == 3);
}

TEST_CASE("reproduce-paper artifacts are byte-identical across runs") {
  const fs::path base = fs::temp_directory_path() / "periodfn_cli_test";
  fs::remove_all(base);
  const std::string d1 = (base / "a").string(), d2 = (base / "b").string();
  const Run r1 = run({"reproduce-paper", "--out", d1.c_str()});
  const Run r2 = run({"reproduce-paper", "--out", d2.c_str()});
  CHECK(r1.code == r2.code);
  CHECK(r1.out == r2.out);
  int files = 0;
  for (const auto& e : fs::directory_iterator(d1)) {
    ++files;
    CHECK(slurp(e.path()) == slurp(fs::path(d2) / e.path().filename()));
  }
  CHECK(files >= 7);
  CHECK(fs::exists(fs::path(d1) / "summary.txt"));
  fs::remove_all(base);
}
