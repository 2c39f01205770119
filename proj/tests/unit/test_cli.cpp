#include <doctest.h>

#include "sobolab/cli.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using json = nlohmann::json;
namespace fs = std::filesystem;
using sobolab::cli::run;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  json doc;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  if (r.code != sobolab::cli::kExitError && !r.out.empty() && r.out.front() == '{') r.doc = json::parse(r.out);
  return r;
}

// A fresh directory per test case, removed afterwards.
struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("sobolab-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  [[nodiscard]] std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int count_files(const fs::path& dir, const std::string& ext) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("FNV-1a reference vectors") {
    using sobolab::cli::fnv1a;
    using sobolab::cli::hex64;
    CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
    CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
    CHECK(hex64(fnv1a("foobar")) == "85944171f73967e8");
    CHECK(hex64(0).size() == 16);
  }

  TEST_CASE("number lists and ranges") {
    using sobolab::cli::parse_number_list;
    CHECK(parse_number_list("1,2,inf") == std::vector<double>{1.0, 2.0, HUGE_VAL});
    const auto r = parse_number_list("0:0.4:0.05");
    REQUIRE(r.size() == 9);
    CHECK(r[3] == 0.15);
    CHECK(r.back() == 0.4);
    CHECK_THROWS(parse_number_list("1,x"));
    CHECK_THROWS(parse_number_list("1:0:0.1"));
  }

  TEST_CASE("every command is listed") {
    const auto names = sobolab::cli::command_names();
    for (const char* c : {"ladder", "bootstrap", "estimate", "verify", "heat", "riesz", "w2p", "scaling", "flow",
                          "report"}) {
      CHECK(std::find(names.begin(), names.end(), c) != names.end());
    }
  }

  TEST_CASE("ladder reports the chain at a target") {
    TempDir dir;
    const auto r = call({"ladder", "--n", "3", "--p0", "2", "--target", "2.9", "--out", dir.str()});
    REQUIRE(r.code == 0);
    const auto& res = r.doc.at("result");
    CHECK(res.at("p1").get<double>() == doctest::Approx(18.0 / 7.0).epsilon(1e-15));
    CHECK(res.at("p2").get<double>() == doctest::Approx(126.0 / 43.0).epsilon(1e-15));
    CHECK(res.at("k") == 1);
    CHECK(res.at("m") == 4);
    CHECK(res.at("C1").get<double>() == doctest::Approx(3802.4041105524671132).epsilon(1e-12));
    CHECK(res.at("C2").get<double>() == doctest::Approx(1.7078984807485805993).epsilon(1e-12));
    CHECK(res.at("strictly_increasing") == true);
    CHECK(r.doc.at("seed").is_null());
    CHECK(r.doc.at("command") == "ladder");
    CHECK(r.doc.at("violations") == 0);
    CHECK(count_files(dir.path, ".csv") == 1);
    CHECK(count_files(dir.path, ".json") == 1);
    CHECK(r.err.find("wrote ") != std::string::npos);
  }

  TEST_CASE("bootstrap closed form") {
    TempDir dir;
    const auto r = call({"bootstrap", "--n", "4", "--p0", "2", "--target", "2.6666666666666665", "--b", "0",
                         "--alpha", "1,2,10", "--out", dir.str(), "--formats", "json"});
    REQUIRE(r.code == 0);
    CHECK(r.doc.at("result").at("C1").get<double>() == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(count_files(dir.path, ".csv") == 0);
  }

  TEST_CASE("estimate reruns are byte-identical and artifacts are not rewritten") {
    TempDir dir;
    const std::vector<std::string> args{"estimate", "--model", "torus:n=2,res=12,L=1", "--p", "1.2",
                                        "--seed", "5", "--size", "40", "--out", dir.str()};
    const auto a = call(args);
    const auto b = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(b.err.find("unchanged ") != std::string::npos);
    CHECK(b.err.find("wrote ") == std::string::npos);
    CHECK(a.doc.at("seed") == 5);
    const auto& est = a.doc.at("result").at("estimate");
    CHECK(est.at("max_ratio").get<double>() <= 1.0 + 1e-9);
    const std::string members = a.doc.at("artifacts").at("members.csv");
    CHECK(fs::exists(dir.path / members));
  }

  TEST_CASE("an artifact name whose bytes changed is a guard error") {
    TempDir dir;
    const std::vector<std::string> args{"ladder", "--n", "3", "--p0", "2", "--out", dir.str()};
    const auto a = call(args);
    REQUIRE(a.code == 0);
    const std::string csv = a.doc.at("artifacts").at("ladder.csv");
    std::ofstream(dir.path / csv, std::ios::trunc) << "tampered\n";
    REQUIRE(a.doc.at("result").at("table").size() == 9);
    for (const auto& row : a.doc.at("result").at("table")) CHECK(row.at("r").is_number());
    CHECK(a.doc.at("result").at("table").back().at("C1").is_null());  // p_8 rounds to n
    const auto b = call(args);
    CHECK(b.code == sobolab::cli::kExitError);
    CHECK(b.err.find("refusing to overwrite") != std::string::npos);
    CHECK(slurp(dir.path / csv) == "tampered\n");
  }

  TEST_CASE("exit codes: success, invalid input, violations") {
    TempDir dir;
    const std::string model = "torus:n=3,res=5,L=1";
    CHECK(call({"verify", "--model", model, "--p", "2", "--seed", "1", "--size", "20", "--c1", "100", "--c2",
                "100", "--out", dir.str()})
              .code == sobolab::cli::kExitOk);
    const auto bad = call({"verify", "--model", model, "--p", "2", "--seed", "1", "--size", "20", "--c1",
                           "1e-3", "--c2", "1e-3", "--out", dir.str()});
    CHECK(bad.code == sobolab::cli::kExitViolations);
    CHECK(bad.doc.at("violations").get<int>() > 0);
    const auto missing = call({"verify", "--model", model, "--p", "2", "--out", dir.str()});
    CHECK(missing.code == sobolab::cli::kExitError);
    CHECK(missing.err.find("seed") != std::string::npos);
    const auto unknown = call({"frobnicate"});
    CHECK(unknown.code == sobolab::cli::kExitError);
    CHECK(unknown.err.find("unknown command 'frobnicate'") != std::string::npos);
    const auto domain = call({"estimate", "--model", model, "--p", "4", "--seed", "1", "--out", dir.str()});
    CHECK(domain.code == sobolab::cli::kExitError);
    CHECK(domain.err.find("invalid input") != std::string::npos);
    CHECK(call({"estimate", "--model", "klein:n=2", "--p", "1.5", "--seed", "1", "--out", dir.str()}).code ==
          sobolab::cli::kExitError);
    CHECK(call({"--help"}).code == sobolab::cli::kExitOk);
  }

  TEST_CASE("config files: flags override, unknown keys are rejected") {
    TempDir dir;
    const fs::path cfg = dir.path / "run.json";
    std::ofstream(cfg) << R"({"n": 3, "p0": 2, "target": 2.5, "a": 2})";
    const auto r = call({"ladder", "--config", cfg.string(), "--a", "1", "--out", (dir.path / "o").string()});
    REQUIRE(r.code == 0);
    CHECK(r.doc.at("config").at("a") == 1.0);
    CHECK(r.doc.at("config").at("target") == 2.5);
    CHECK(r.doc.at("result").at("C1").get<double>() == doctest::Approx(14.147509920070239683).epsilon(1e-12));
    // same parameters from flags alone hash identically
    const auto flags = call({"ladder", "--n", "3", "--p0", "2", "--target", "2.5", "--out", (dir.path / "o").string()});
    CHECK(flags.doc.at("config_hash") == r.doc.at("config_hash"));

    std::ofstream(cfg, std::ios::trunc) << R"({"n": 3, "p0": 2, "colour": "red"})";
    const auto bad = call({"ladder", "--config", cfg.string(), "--out", dir.str()});
    CHECK(bad.code == sobolab::cli::kExitError);
    CHECK(bad.err.find("colour") != std::string::npos);
  }

  TEST_CASE("SOBOLAB_OUT selects the default output directory") {
    TempDir dir;
    ::setenv("SOBOLAB_OUT", dir.str().c_str(), 1);
    const auto r = call({"ladder", "--n", "4", "--p0", "1.5", "--steps", "3"});
    ::unsetenv("SOBOLAB_OUT");
    REQUIRE(r.code == 0);
    CHECK(r.doc.at("result").at("table").size() == 4);
    CHECK(count_files(dir.path, ".json") == 1);
  }

  TEST_CASE("flow writes a nine-row trajectory") {
    TempDir dir;
    const auto r = call({"flow", "--flow", "sphere:r0=1", "--times", "0:0.4:0.05", "--theorem", "a2", "--p",
                         "1.5", "--seed", "1", "--size", "40", "--out", dir.str()});
    REQUIRE(r.code == 0);
    CHECK(r.doc.at("violations") == 0);
    CHECK(r.doc.at("config").at("p0") == 1.2);
    const std::string csv = r.doc.at("artifacts").at("trajectory.csv");
    std::istringstream lines(slurp(dir.path / csv));
    std::string line;
    int rows = -1;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 9);
    CHECK(r.doc.at("artifacts").contains("trajectory.svg"));
    const auto torus = call({"flow", "--flow", "torus:n=3,res=5,L=1", "--times", "0,1", "--theorem", "a2", "--p",
                             "2.5", "--seed", "1", "--size", "10", "--out", dir.str()});
    CHECK(torus.code == sobolab::cli::kExitError);
    CHECK(torus.err.find("hypothesis") != std::string::npos);
  }

  TEST_CASE("report indexes earlier runs") {
    TempDir dir;
    REQUIRE(call({"ladder", "--n", "3", "--p0", "2", "--out", dir.str()}).code == 0);
    call({"verify", "--model", "torus:n=3,res=5,L=1", "--p", "2", "--seed", "1", "--size", "10", "--c1", "1e-3",
          "--out", dir.str()});
    const auto r = call({"report", "--out", dir.str()});
    REQUIRE(r.code == 0);
    CHECK(r.doc.at("result").at("reports").size() == 2);
    CHECK(r.doc.at("result").at("total_violations").get<int>() > 0);
  }
}
