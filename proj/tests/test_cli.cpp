// CLI integration tests: drive the built binary through a shell and compare
// against the golden fixture output. Paths arrive via LOGCOV_TEST_CLI,
// LOGCOV_TEST_FIXTURE and LOGCOV_TEST_GOLDEN (set by CTest).

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string env_or_fail(const char* name) {
  const char* v = std::getenv(name);
  if (!v) throw std::runtime_error(std::string("missing env var ") + name);
  return v;
}

const std::string& cli() {
  static const std::string v = env_or_fail("LOGCOV_TEST_CLI");
  return v;
}
const std::string& fixture() {
  static const std::string v = env_or_fail("LOGCOV_TEST_FIXTURE");
  return v;
}
const std::string& golden() {
  static const std::string v = env_or_fail("LOGCOV_TEST_GOLDEN");
  return v;
}

struct Exec {
  int exit_code;
  std::string out;
};

Exec run(const std::string& args) {
  fs::path out_file = fs::temp_directory_path() / "logcov_cli_out.txt";
  std::string cmd = cli() + " " + args + " >" + out_file.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(out_file);
  return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir(const char* tag) {
    path = fs::temp_directory_path() / (std::string("logcov_cli_") + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("mine produces the golden runsets byte for byte", "[cli]") {
  TempDir out("mine");
  auto r = run("mine --corpus " + fixture() + " --out " + out.path.string());
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(out.path / "runsets.json") == slurp(fs::path(golden()) / "runsets.json"));
  CHECK(slurp(out.path / "templates.jsonl") ==
        slurp(fs::path(golden()) / "templates.jsonl"));

  SECTION("second invocation is byte-identical") {
    TempDir out2("mine2");
    auto r2 = run("mine --corpus " + fixture() + " --out " + out2.path.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(out2.path / "runsets.json") == slurp(out.path / "runsets.json"));
    CHECK(slurp(out2.path / "templates.jsonl") ==
          slurp(out.path / "templates.jsonl"));
  }
}

TEST_CASE("mine error paths", "[cli]") {
  SECTION("empty corpus") {
    TempDir empty("empty_corpus");
    TempDir out("empty_out");
    auto r = run("mine --corpus " + empty.path.string() + " --out " +
                 out.path.string());
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("no strategies found") != std::string::npos);
    CHECK_FALSE(fs::exists(out.path / "runsets.json"));
  }
  SECTION("missing corpus root") {
    auto r = run("mine --corpus /nonexistent/corpus --out /tmp/logcov_x");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("/nonexistent/corpus") != std::string::npos);
  }
  SECTION("bad miner config is a usage error") {
    auto r = run("mine --corpus " + fixture() + " --out /tmp/logcov_x --depth 2");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("depth") != std::string::npos);
  }
  SECTION("missing subcommand") {
    auto r = run("");
    CHECK(r.exit_code == 1);
  }
}

TEST_CASE("coverage reporting", "[cli]") {
  TempDir out("cov");
  REQUIRE(run("mine --corpus " + fixture() + " --out " + out.path.string())
              .exit_code == 0);
  const std::string runsets =
      " --runsets " + (out.path / "runsets.json").string();

  SECTION("table format shows Avg (Min--Max) lines") {
    auto r = run("coverage" + runsets + " --format table");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("synthA: 6 (4--8)") != std::string::npos);
    CHECK(r.out.find("synthB: 3 (2--5)") != std::string::npos);
    CHECK(r.out.find("synthC: 2 (2--3)") != std::string::npos);
    CHECK(r.out.find("templates/test: 1.50") != std::string::npos);
  }

  SECTION("single-run strategy collapses to N (N--N)") {
    TempDir single("single");
    fs::create_directories(single.path / "solo/run01");
    fs::copy(fs::path(fixture()) / "synthA/run01/token.log",
             single.path / "solo/run01/token.log");
    TempDir sout("single_out");
    REQUIRE(run("mine --corpus " + single.path.string() + " --out " +
                sout.path.string())
                .exit_code == 0);
    auto r = run("coverage --runsets " +
                 (sout.path / "runsets.json").string() + " --format table");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("solo: 4 (4--4)") != std::string::npos);
  }

  SECTION("per-service CSV has one row per service") {
    auto r = run("coverage" + runsets + " --per-service");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("service,synthA,synthB,synthC") != std::string::npos);
    CHECK(r.out.find("token,4.00,1.67,1.33") != std::string::npos);
    CHECK(r.out.find("user,2.00,1.33,1.00") != std::string::npos);
  }

  SECTION("json format carries template ids") {
    auto r = run("coverage" + runsets + " --format json --strategy synthC");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"cardinality\": 3") != std::string::npos);
    CHECK(r.out.find("template_ids") != std::string::npos);
  }

  SECTION("unknown strategy filter lists known ones") {
    auto r = run("coverage" + runsets + " --strategy nope");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("synthA") != std::string::npos);
  }
}

TEST_CASE("compare reporting", "[cli]") {
  TempDir out("cmp");
  REQUIRE(run("mine --corpus " + fixture() + " --out " + out.path.string())
              .exit_code == 0);
  const std::string runsets =
      " --runsets " + (out.path / "runsets.json").string();

  SECTION("default emits all three levels in table layout") {
    auto r = run("compare" + runsets + " --a synthA --b synthB --format table");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("synthA vs. synthB") != std::string::npos);
    CHECK(r.out.find("Jaccard Similarity (%)") != std::string::npos);
    // AvgLC 6 vs 3, intersection {T1,U1,T4} = 3, union 6 -> 50.00
    CHECK(r.out.find("50.00") != std::string::npos);
  }

  SECTION("self comparison warns and yields jaccard 100") {
    auto r = run("compare" + runsets + " --a synthA --b synthA --level avg");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("warning") != std::string::npos);
    CHECK(r.out.find("100.0") != std::string::npos);
  }

  SECTION("max level differs from avg") {
    auto rmax = run("compare" + runsets + " --a synthA --b synthB --level max --format csv");
    auto ravg = run("compare" + runsets + " --a synthA --b synthB --level avg --format csv");
    REQUIRE(rmax.exit_code == 0);
    REQUIRE(ravg.exit_code == 0);
    // MaxLC: 8 vs 5, B ⊆ A -> union 8, jaccard 62.50, gains 0.00 / 60.00
    CHECK(rmax.out.find("max,synthA,synthB,8,5,5,8,62.50,0.00,60.00") !=
          std::string::npos);
    CHECK(rmax.out != ravg.out);
  }

  SECTION("unknown strategy errors") {
    auto r = run("compare" + runsets + " --a synthA --b nope");
    CHECK(r.exit_code == 1);
  }
}

