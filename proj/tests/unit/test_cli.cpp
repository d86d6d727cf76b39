#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bmo_cli/cli.hpp"
#include "bmo_cli/json_io.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using bmo::cli::Json;

namespace {

struct Output {
  int code = 0;
  std::string out;
  std::string err;
};

Output bmo_run(std::vector<std::string> args) {
  args.insert(args.begin(), "bmo");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = bmo::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("bmo_test_" + name);
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    CHECK(bmo_run({"jn", "delta", "--alpha", "0.25", "--eps", "0.5"}).code == 0);
    CHECK(bmo_run({"--help"}).code == 0);
    CHECK(bmo_run({}).code == 2);
    CHECK(bmo_run({"jn", "delta", "--alpha", "0.25"}).code == 2);
    CHECK(bmo_run({"nonsense"}).code == 2);
    CHECK(bmo_run({"jn", "delta", "--alpha", "0.25", "--eps", "0.5", "--out", "xml"}).code == 2);
    CHECK(bmo_run({"tree", "validate", "/nonexistent/tree.json"}).code == 2);
  }

  TEST_CASE("threshold errors report eps0") {
    const Output o = bmo_run({"jn", "delta", "--alpha", "0.25", "--eps", "2"});
    CHECK(o.code == 2);
    CHECK(o.err.find("threshold eps0 = 0.92419624074659") != std::string::npos);
    CHECK(bmo_run({"verify", "jn", "--alpha", "0.5", "--eps", "1.5"}).code == 2);
  }

  TEST_CASE("json output at full precision") {
    const Output o = bmo_run({"jn", "delta", "--alpha", "0.25", "--eps", "0.5"});
    const Json j = Json::parse(o.out);
    CHECK(j["alpha"].get<double>() == 0.25);
    CHECK(std::abs(j["residual"].get<double>()) < 1e-14);
    CHECK(j["seed"].get<int>() == 1);
    // a full 17-significant-digit rendering of delta
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", j["delta"].get<double>());
    CHECK(o.out.find(buf) != std::string::npos);
  }

  TEST_CASE("deterministic for a fixed seed") {
    const std::vector<std::string> args{"verify", "jn", "--alpha", "0.25", "--eps", "0.5", "--trials", "20", "--seed", "9"};
    const Output a = bmo_run(args);
    const Output b = bmo_run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(Json::parse(a.out)["passed"].get<bool>());
    CHECK(Json::parse(a.out)["seed"].get<int>() == 9);
    std::vector<std::string> other = args;
    other.back() = "10";
    CHECK(bmo_run(other).out != a.out);

    const Output c = bmo_run({"check", "shape", "--alpha", "0.5", "--eps", "0.5", "--samples", "2000"});
    CHECK(c.code == 0);
    CHECK(c.out == bmo_run({"check", "shape", "--alpha", "0.5", "--eps", "0.5", "--samples", "2000"}).out);
  }

  TEST_CASE("seed from the environment") {
    ::setenv("BMO_SEED", "42", 1);
    const Output o = bmo_run({"verify", "osc", "--alpha", "0.25", "--eps", "0.5", "--trials", "5"});
    ::unsetenv("BMO_SEED");
    CHECK(Json::parse(o.out)["seed"].get<int>() == 42);
    CHECK(o.code == 0);
  }

  TEST_CASE("csv with empty cells for undefined values") {
    const Output o = bmo_run({"osc", "surface", "--alpha", "0.25", "--eps", "0.5", "--grid", "5", "--out", "csv"});
    CHECK(o.code == 0);
    std::istringstream in(o.out);
    std::string header;
    std::getline(in, header);
    CHECK(header.find("x1") != std::string::npos);
    CHECK(header.find("b") != std::string::npos);
    bool empty_cell = false;
    for (std::string line; std::getline(in, line);)
      if (line.find(",,") != std::string::npos || line.back() == ',') empty_cell = true;
    CHECK(empty_cell);
    CHECK(o.out.find("nan") == std::string::npos);
  }

  TEST_CASE("table output") {
    const Output o = bmo_run({"jn", "constants", "--n", "2", "--out", "table"});
    CHECK(o.code == 0);
    CHECK(o.out.find("eps0") != std::string::npos);
  }

  TEST_CASE("tree files") {
    const fs::path good = temp_file("good.json", R"({"alpha": 0.5, "root": {"measure": 1, "children": [
      {"measure": 0.5, "value": 1}, {"measure": 0.5, "value": -1}]}})");
    const Output v = bmo_run({"tree", "validate", good.string()});
    CHECK(v.code == 0);
    CHECK(Json::parse(v.out)["valid"].get<bool>());
    const Output n = bmo_run({"tree", "norms", good.string()});
    CHECK(n.code == 0);
    CHECK(Json::parse(n.out)["norm2"].get<double>() == doctest::Approx(1.0));

    const fs::path bad = temp_file("bad.json", R"({"alpha": 0.5, "root": {"measure": 1, "children": [
      {"measure": 0.25}, {"measure": 0.75}]}})");
    const Output b = bmo_run({"tree", "validate", bad.string()});
    CHECK(b.code == 1);
    CHECK_FALSE(Json::parse(b.out)["valid"].get<bool>());

    const fs::path junk = temp_file("junk.json", "{not json");
    CHECK(bmo_run({"tree", "validate", junk.string()}).code == 2);
    fs::remove(good);
    fs::remove(bad);
    fs::remove(junk);
  }

  TEST_CASE("martingale files and demo") {
    const fs::path f = temp_file("m.json", R"({"eps": 1, "root": {"measure": 1, "point": [0, 0.5], "children": [
      {"measure": 0.5, "point": [-0.5, 0.5]}, {"measure": 0.5, "point": [0.5, 0.5]}]}})");
    const Output o = bmo_run({"martingale", "goodness", f.string()});
    CHECK(o.code == 0);
    CHECK(Json::parse(o.out)["overall_alpha"].get<double>() == doctest::Approx(1.0));
    fs::remove(f);

    const Output q = bmo_run({"martingale", "demo", "--strategy", "quarters"});
    CHECK(Json::parse(q.out)["overall_alpha"].get<double>() == doctest::Approx(0.625));
    const Output h = bmo_run({"martingale", "demo"});
    CHECK(Json::parse(h.out)["overall_alpha"].get<double>() == doctest::Approx(1.0));
  }

  TEST_CASE("output file") {
    const fs::path p = fs::temp_directory_path() / "bmo_test_out.json";
    const Output o = bmo_run({"segment", "--p", "0,0", "--r", "1.4142135623730951,2", "--eps", "1", "-o", p.string()});
    CHECK(o.code == 0);
    CHECK(o.out.empty());
    std::ifstream in(p);
    const Json j = Json::parse(in);
    CHECK(j["alpha_max"].get<double>() == doctest::Approx(1.0));
    fs::remove(p);
  }

  TEST_CASE("extremal commands") {
    const Output s = bmo_run({"extremal", "sharpness", "--n", "1", "--eps", "0.5", "--max-depth", "12"});
    CHECK(s.code == 0);
    CHECK(Json::parse(s.out)["convergent"].get<bool>());
    const Output d = bmo_run({"extremal", "sharpness", "--n", "1", "--eps", "2", "--max-depth", "12"});
    CHECK(d.code == 0);
    CHECK(Json::parse(d.out)["closed_form"] == "inf");
    CHECK(bmo_run({"extremal", "phi-star", "--n", "2", "--depth", "5"}).code == 0);
  }
}
