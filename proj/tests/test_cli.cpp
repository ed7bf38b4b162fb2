#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <string>

#include "json.hpp"
#include "testutil.hpp"

using nlohmann::ordered_json;
using wcetest::run_command;
using wcetest::RunResult;

namespace {

const std::string kCli = WCE_CLI_PATH;
const std::string kConfigs = WCE_CONFIG_DIR;

std::string cfg(const std::string& name) { return "\"" + kConfigs + "/" + name + "\""; }

}  // namespace

TEST_CASE("complete truncation comes back certified with exit 0") {
  const RunResult r = run_command(kCli + " analyze --config " + cfg("small_table.json"));
  CAPTURE(r.out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("nuclearity : nuclear") != std::string::npos);
  CHECK(r.out.find("compactness: compact") != std::string::npos);
  CHECK(r.out.find("consistent : yes") != std::string::npos);
  CHECK(r.out.find("finite-truncation-exact") != std::string::npos);
  CHECK(r.out.find("oracle: formula_norm=") != std::string::npos);
}

TEST_CASE("zero operator is nuclear with exit 0") {
  const RunResult r = run_command(kCli + " analyze --config " + cfg("zero_u.json"));
  CAPTURE(r.out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("nuclearity : nuclear") != std::string::npos);
  CHECK(r.out.find("zero-on-truncation") != std::string::npos);
}

TEST_CASE("joint panel support fails both properties with exit 1") {
  const RunResult r = run_command(kCli + " analyze --config " + cfg("panel.json"));
  CAPTURE(r.out);
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("nuclearity : not-nuclear") != std::string::npos);
  CHECK(r.out.find("compactness: not-compact") != std::string::npos);
  CHECK(r.out.find("non-atomic-part") != std::string::npos);
}

TEST_CASE("missing tail information caps the verdict at exit 2") {
  const RunResult r = run_command(kCli + " analyze --config " + cfg("truncated.json"));
  CAPTURE(r.out);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("inconclusive") != std::string::npos);
}

TEST_CASE("expression weights load and analyze") {
  const RunResult r = run_command(kCli + " analyze --config " + cfg("expr_weights.json"));
  CAPTURE(r.out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("regime=smaller") != std::string::npos);
  CHECK(r.out.find("nuclearity : nuclear") != std::string::npos);
  CHECK(r.out.find("tail_bound<=0.001") != std::string::npos);
  // no series claim is supplied, so compactness follows from nuclearity
  CHECK(r.out.find("implied-by-nuclear") != std::string::npos);
}

TEST_CASE("exponent overrides change the regime") {
  const RunResult r = run_command(kCli + " analyze --config " + cfg("small_table.json") +
                                  " --p 3 --q 2");
  CAPTURE(r.out);
  CHECK(r.out.find("regime=smaller") != std::string::npos);
  CHECK(r.exit_code == 0);
}

TEST_CASE("config problems exit 3 with a named field") {
  SUBCASE("missing file") {
    const RunResult r = run_command(kCli + " analyze --config /nonexistent/nope.json");
    CAPTURE(r.out);
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("config error:") != std::string::npos);
  }
  SUBCASE("missing required section") {
    wcetest::write_file("/tmp/wce_bad_config.json", "{\"space\": {\"cells\": []}}");
    const RunResult r = run_command(kCli + " analyze --config /tmp/wce_bad_config.json");
    CAPTURE(r.out);
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("config error:") != std::string::npos);
    CHECK(r.out.find(".space.cells") != std::string::npos);
  }
  SUBCASE("malformed weight entry") {
    wcetest::write_file(
        "/tmp/wce_bad_weight.json",
        "{\"space\":{\"cells\":[{\"id\":1,\"mass\":1.0}],\"blocks\":[[1]]},"
        "\"weights\":{\"u\":{\"type\":\"table\",\"values\":[[1]]},"
        "\"w\":{\"type\":\"table\",\"values\":[[1,1.0]]}},"
        "\"analysis\":{\"p\":2,\"q\":3}}");
    const RunResult r = run_command(kCli + " analyze --config /tmp/wce_bad_weight.json");
    CAPTURE(r.out);
    CHECK(r.exit_code == 3);
    CHECK(r.out.find(".weights.u.values[0]") != std::string::npos);
  }
  SUBCASE("unknown example name") {
    const RunResult r = run_command(kCli + " analyze --example turtles");
    CAPTURE(r.out);
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("unknown example") != std::string::npos);
  }
  SUBCASE("no subcommand arguments") {
    const RunResult r = run_command(kCli + " analyze");
    CAPTURE(r.out);
    CHECK(r.exit_code == 3);
  }
}

TEST_CASE("library-level failures exit 4") {
  const RunResult r = run_command(kCli + " analyze --config " + cfg("small_table.json") +
                                  " --q 2");
  CAPTURE(r.out);
  CHECK(r.exit_code == 4);
  CHECK(r.out.find("error:") != std::string::npos);
}

TEST_CASE("built-in example family run") {
  const RunResult r = run_command(kCli + " analyze --example paper --terms 400");
  CAPTURE(r.out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("source: example paper") != std::string::npos);
  CHECK(r.out.find("nuclearity : nuclear") != std::string::npos);
  CHECK(r.out.find("sub-series odd: terms=200") != std::string::npos);
  CHECK(r.out.find("sub-series even: terms=200") != std::string::npos);
  CHECK(r.out.find("atoms shown: 200 of 400") != std::string::npos);
  CHECK(r.out.find("decay slope (heuristic):") != std::string::npos);
}

TEST_CASE("json report is complete and deterministic") {
  const std::string path = "/tmp/wce_report.json";
  const std::string cmd = kCli + " analyze --example paper --terms 400 --oracle --report " +
                          path + " --format json";
  const RunResult r1 = run_command(cmd);
  CAPTURE(r1.out);
  REQUIRE(r1.exit_code == 0);
  const std::string first = wcetest::read_file(path);
  const ordered_json j = ordered_json::parse(first);
  CHECK(j.at("tool") == "wce");
  CHECK(j.at("mode") == "example");
  CHECK(j.at("source") == "paper");
  CHECK(j.at("exponents").at("regime") == "larger");
  CHECK(j.at("terms").get<std::int64_t>() == 400);
  CHECK(j.at("nuclearity").at("status") == "nuclear");
  CHECK(j.at("compactness").at("status") == "compact");
  CHECK(j.at("consistent").get<bool>());
  CHECK(j.at("atoms").is_array());
  CHECK(j.at("atoms").size() == 200);
  CHECK(j.at("sub_series").at("odd").at("terms").get<std::int64_t>() == 200);
  CHECK(j.at("oracle").at("max_block_residual").get<double>() < 1e-10);
  CHECK(j.at("overrides").at("terms").get<std::int64_t>() == 400);
  CHECK(j.at("overrides").at("oracle").get<bool>());

  const RunResult r2 = run_command(cmd);
  REQUIRE(r2.exit_code == 0);
  CHECK(wcetest::read_file(path) == first);
  std::remove(path.c_str());
}

TEST_CASE("csv report carries the atom table") {
  const std::string path = "/tmp/wce_report.csv";
  const RunResult r = run_command(kCli + " analyze --config " + cfg("small_table.json") +
                                  " --report " + path + " --format csv");
  REQUIRE(r.exit_code == 0);
  const std::string csv = wcetest::read_file(path);
  CHECK(csv.rfind("atom,mass,eu,ew,d,term,phi_norm,g_norm,product\n", 0) == 0);
  // header + one line per block
  int lines = 0;
  for (const char c : csv) {
    lines += c == '\n' ? 1 : 0;
  }
  CHECK(lines == 3);
  std::remove(path.c_str());
}

TEST_CASE("condexp prints per-block averages with zero residual") {
  const RunResult r = run_command(kCli + " condexp --config " + cfg("small_table.json"));
  CAPTURE(r.out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("conditional expectation per block") != std::string::npos);
  CHECK(r.out.find("{1,2}") != std::string::npos);
  // block {1,2}: (3*1 + 6*2)/3 = 5
  CHECK(r.out.find("            5 ") != std::string::npos);
  CHECK(r.out.find("{3}") != std::string::npos);
}

TEST_CASE("condexp requires f") {
  const RunResult r = run_command(kCli + " condexp --config " + cfg("zero_u.json"));
  CAPTURE(r.out);
  CHECK(r.exit_code == 3);
  CHECK(r.out.find(".weights.f") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const RunResult r = run_command(kCli + " --help");
  CAPTURE(r.out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("analyze") != std::string::npos);
  CHECK(r.out.find("condexp") != std::string::npos);
}
