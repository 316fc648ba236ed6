#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "toda_crystal/cli.hpp"
#include "toda_crystal/toda.hpp"

using namespace toda_crystal;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "toda_crystal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::ordered_json> lines(const std::string& text) {
  std::vector<nlohmann::ordered_json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(nlohmann::ordered_json::parse(line));
  return out;
}

std::string without_timing(const std::string& text) {
  std::string out;
  for (auto j : lines(text)) {
    j.erase("wall_ms");
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("compute zprime-special") {
  const auto r = run({"compute", "zprime-special", "--l", "0", "--p", "1/2", "--NQ", "2"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j.size() == 3);
  CHECK(j["Q^0"] == "1");
  CHECK(j["Q^1"] == "4/9");
  CHECK(j["Q^2"] == "128/2025");
}

TEST_CASE("compute tau-prime at D = 0 is the vacuum entry of g'") {
  const auto r = run({"compute", "tau-prime", "--s", "0", "--D", "0", "--NQ", "3"});
  REQUIRE(r.code == 0);
  const auto pr = ModelParams::make(0, 0, Scalar(1, 2), SeriesContext{2, 0, 3});
  const auto vac = build_gprime(pr).entry_series(0, 0, pr.series_context());
  CHECK(nlohmann::ordered_json::parse(r.out) == to_json(vac));
}

TEST_CASE("compute output is byte-identical across runs") {
  for (const char* target : {"zprime", "z", "tau-prime", "tau-prev"}) {
    const std::vector<std::string> args{"compute", target, "--s", "1", "--l", "1", "--p", "3/5"};
    const auto a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  const auto sym = run({"compute", "tau-prev", "--form", "symmetric"});
  const auto left = run({"compute", "tau-prev", "--form", "left"});
  CHECK(sym.out == left.out);
}

TEST_CASE("verify suites and exit codes") {
  auto r = run({"verify", "main-identity", "--p", "3/5", "--s", "0", "--l", "0"});
  CHECK(r.code == 0);
  for (const auto& j : lines(r.out)) {
    CHECK(j.contains("check"));
    CHECK(j.contains("params"));
    CHECK(j["status"] == "pass");
    CHECK(j.contains("evidence"));
    CHECK(j.contains("wall_ms"));
  }

  r = run({"verify", "shift", "--p", "1/2", "--NQ", "0", "--D", "0"});
  CHECK(r.code == 1);
  CHECK(r.out.find("insufficient_window") != std::string::npos);

  r = run({"verify", "toeplitz", "--s", "0", "--D", "2", "--NQ", "2"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 2);

  r = run({"verify", "toda-bilinear", "--s", "0", "--K", "1", "--D", "2", "--NQ", "2"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 2);
}

TEST_CASE("report lines are sorted and independent of the thread count") {
  const std::vector<std::string> args{"verify", "prev-identity", "--s", "-1,0,1",
                                      "--l", "0,1", "--NQ", "2"};
  setenv("TODA_CRYSTAL_THREADS", "1", 1);
  const auto one = run(args);
  setenv("TODA_CRYSTAL_THREADS", "4", 1);
  const auto four = run(args);
  unsetenv("TODA_CRYSTAL_THREADS");
  CHECK(one.code == 0);
  CHECK(without_timing(one.out) == without_timing(four.out));

  std::string prev;
  for (const auto& j : lines(one.out)) {
    const std::string key = j["check"].get<std::string>() + '\n' + j["params"].dump();
    CHECK(prev <= key);
    prev = key;
  }
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"verify"}).code == 2);
  CHECK(run({"verify", "everything"}).code == 2);
  CHECK(run({"verify", "shift", "--p", "1"}).code == 2);
  CHECK(run({"verify", "shift", "--p", "half"}).code == 2);
  CHECK(run({"verify", "main-identity", "--K", "2", "--D", "2", "--N", "3"}).code == 2);
  CHECK(run({"compute", "zprime", "--s", "0,1"}).code == 2);
  CHECK(run({"compute", "tau-prev", "--form", "diagonal"}).code == 2);
  CHECK(run({"compute", "zprime", "--K", "0"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("--out writes the file") {
  const auto path = std::filesystem::temp_directory_path() / "toda_crystal_cli_test.json";
  const auto r = run({"compute", "zprime-special", "--NQ", "1", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::ordered_json::parse(in);
  CHECK(j["Q^1"] == "4/9");
  std::filesystem::remove(path);
}
