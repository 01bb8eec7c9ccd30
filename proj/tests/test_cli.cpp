#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <string>

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = std::string(BITOMO_CLI_PATH) + " " + args;
  if (!stdin_text.empty()) {
    const std::string path = "bitomo_cli_test_stdin.txt";
    std::ofstream file(path);
    file << stdin_text;
    file.close();
    cmd += " < " + path;
  }
  cmd += " 2>/dev/null";

  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::size_t n = std::fread(buffer, 1, sizeof(buffer), pipe))
    result.out.append(buffer, n);
  const int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

nlohmann::json run_json(const std::string& args,
                        const std::string& stdin_text = "") {
  const RunResult result = run_cli(args, stdin_text);
  INFO(result.out);
  REQUIRE(result.status == 0);
  return nlohmann::json::parse(result.out);
}

}  // namespace

TEST_CASE("count reports exact parameter totals", "[cli]") {
  const nlohmann::json doc = run_json("count --dims 2,2 --r 2 --s 1");
  CHECK(doc.at("k") == "10");
  CHECK(doc.at("l") == "6");

  const nlohmann::json pair = run_json("count --dims 2,3 --r 2 --s 1");
  CHECK(pair.at("k") == "21");
  CHECK(pair.at("l") == "15");

  const nlohmann::json complex_doc = run_json("count --dims 2,2,2");
  CHECK(complex_doc.at("k") == "64");
  CHECK(complex_doc.at("l") == "0");
}

TEST_CASE("count audit block matches the four-component discrepancy",
          "[cli]") {
  const nlohmann::json doc =
      run_json("count --dims 2,2,2,2 --r 2 --s 1 --audit");
  CHECK(doc.at("k") == "136");
  const nlohmann::json& audit = doc.at("audit");
  CHECK(audit.at("naive_count") == "138");
  CHECK(audit.at("true_k") == "136");
  CHECK(audit.at("surplus") == "2");
  CHECK(audit.at("per_class").at("1+1+1+1") == "81");
  CHECK(audit.at("per_class").at("2+1+1") == "54");
  CHECK(audit.at("per_class").at("2+2") == "3");
}

TEST_CASE("count supports a plain text format", "[cli]") {
  const RunResult result = run_cli("count --dims 2,2 --r 2 --s 1 --format text");
  CHECK(result.status == 0);
  CHECK(result.out.find("k") != std::string::npos);
  CHECK(result.out.find("10") != std::string::npos);
  CHECK(result.out.find('{') == std::string::npos);
}

TEST_CASE("fit recovers exponents from stdin tables", "[cli]") {
  const nlohmann::json real_fit = run_json("fit", "1 1\n2 3\n3 6\n4 10\n");
  CHECK(real_fit.at("r") == "2");
  CHECK(real_fit.at("s") == "1");

  const nlohmann::json complex_fit = run_json("fit", "1 1\n2 4\n3 9\n");
  CHECK(complex_fit.at("r") == "2");
  CHECK(complex_fit.at("s") == "2");
}

TEST_CASE("fit reports unfittable tables without failing", "[cli]") {
  const nlohmann::json doc = run_json("fit", "1 1\n2 3\n3 7\n");
  CHECK(doc.at("fit").is_null());
  CHECK(doc.at("reason").is_string());
}

TEST_CASE("fit rejects malformed tables", "[cli]") {
  const RunResult result = run_cli("fit", "1 1\n2\n");
  CHECK(result.status == 2);
  CHECK(result.out.empty());
}

TEST_CASE("basis --check certifies rank and structure", "[cli]") {
  const nlohmann::json doc =
      run_json("basis --dims 2,2 --kind real --check");
  CHECK(doc.at("kind") == "real-product");
  CHECK(doc.at("dim") == 4);
  CHECK(doc.at("count") == 10);
  CHECK(doc.at("rank") == "10");
  CHECK(doc.at("full_rank") == true);
  CHECK(doc.at("all_real_symmetric") == true);
  CHECK(doc.at("pass") == true);

  const nlohmann::json bilocal =
      run_json("basis --dims 2,2 --kind bilocal-projector --check");
  CHECK(bilocal.at("count") == 10);
  CHECK(bilocal.at("idempotent") == true);
  CHECK(bilocal.at("pass") == true);
}

TEST_CASE("basis --dump writes a parseable operator file", "[cli]") {
  const std::string path = "bitomo_cli_test_basis.json";
  const nlohmann::json doc =
      run_json("basis --dims 3 --kind complex --dump " + path);
  CHECK(doc.at("count") == 9);

  std::ifstream file(path);
  REQUIRE(file.good());
  const nlohmann::json dumped = nlohmann::json::parse(file);
  CHECK(dumped.at("dim") == 3);
  CHECK(dumped.at("count") == 9);
  CHECK(dumped.at("labels").size() == 9);
  CHECK(dumped.at("operators").size() == 9);
  std::remove(path.c_str());
}

TEST_CASE("tomo runs seeded round trips under tolerance", "[cli]") {
  const nlohmann::json doc =
      run_json("tomo --dims 2,2 --field real --frame bilocal-projector "
               "--trials 3 --seed 7");
  CHECK(doc.at("trials") == 3);
  CHECK(doc.at("seed") == "7");
  CHECK(doc.at("round_trip_errors").size() == 3);
  CHECK(doc.at("max_error").get<double>() <= 1e-10);
  CHECK(doc.at("pass") == true);

  const nlohmann::json complex_doc =
      run_json("tomo --dims 3 --field complex --frame complex --trials 2");
  CHECK(complex_doc.at("pass") == true);
}

TEST_CASE("witness reports the discriminating global observable", "[cli]") {
  const nlohmann::json doc = run_json("witness --dims 2,2");
  CHECK(doc.at("valid") == true);
  CHECK(doc.at("global_distance").get<double>() ==
        Catch::Approx(1.0).margin(1e-12));
  CHECK(doc.at("max_local_stat_gap").get<double>() <= 1e-12);
  CHECK(doc.at("discriminating_observable") == "y1-2*y1-2");
  CHECK(doc.at("state_a").at("dim") == 4);
  CHECK(doc.at("state_b").at("field") == "real");
}

TEST_CASE("ideality emits exact fractions and a verified identity", "[cli]") {
  const nlohmann::json doc =
      run_json("ideality --level 3 --verify-dims 2,2,2,2 --r 2 --s 1");
  CHECK(doc.at("level") == 3);
  CHECK(doc.at("coefficients").at("3+1") == "1");
  CHECK(doc.at("coefficients").at("2+2") == "1/3");
  CHECK(doc.at("coefficients").at("2+1+1") == "-4/3");
  CHECK(doc.at("coefficients").at("1+1+1+1") == "4");
  CHECK(doc.at("epsilon") == "1/2");
  CHECK(doc.at("verification").at("residual") == "0");

  const nlohmann::json level2 = run_json("ideality --level 2");
  CHECK(level2.at("coefficients").at("2+1") == "1");
  CHECK(level2.at("coefficients").at("1+1+1") == "-2");
  CHECK(level2.at("epsilon").is_null());
}

TEST_CASE("report aggregates every headline check", "[cli]") {
  const nlohmann::json doc = run_json("report");
  CHECK(doc.at("pass") == true);
  CHECK(doc.at("failed") == 0);
  REQUIRE(doc.at("items").size() == 12);
  for (const auto& item : doc.at("items")) {
    INFO(item.dump());
    CHECK(item.at("pass") == true);
    CHECK(item.at("name").is_string());
    CHECK(item.at("computed").is_string());
    CHECK(item.at("expected").is_string());
  }
}

TEST_CASE("output is byte identical across repeated runs", "[cli]") {
  const RunResult first =
      run_cli("tomo --dims 2,2 --field real --trials 2 --seed 42");
  const RunResult second =
      run_cli("tomo --dims 2,2 --field real --trials 2 --seed 42");
  CHECK(first.status == 0);
  CHECK(first.out == second.out);

  const RunResult count_a = run_cli("count --dims 2,2,2,2 --r 2 --s 1 --audit");
  const RunResult count_b = run_cli("count --dims 2,2,2,2 --r 2 --s 1 --audit");
  CHECK(count_a.out == count_b.out);
}

TEST_CASE("bad invocations exit nonzero", "[cli]") {
  CHECK(run_cli("count --dims 2,2 --no-such-flag").status != 0);
  CHECK(run_cli("count").status != 0);
  CHECK(run_cli("nonsense").status != 0);
  CHECK(run_cli("count --dims 0,2").status == 2);
  CHECK(run_cli("witness --dims 2,2,2").status == 2);
  CHECK(run_cli("ideality --level 9").status == 2);
}

TEST_CASE("rank tolerance honours the environment override", "[cli]") {
  const RunResult strict = run_cli(
      "basis --dims 2,2 --kind real --check");
  CHECK(strict.status == 0);

  const std::string cmd = std::string("BITOMO_TOLERANCE_RANK=0.9 ") +
                          BITOMO_CLI_PATH +
                          " basis --dims 2,2 --kind real --check 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buffer[4096];
  while (std::size_t n = std::fread(buffer, 1, sizeof(buffer), pipe))
    out.append(buffer, n);
  const int raw = pclose(pipe);
  const int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  const nlohmann::json doc = nlohmann::json::parse(out);
  CHECK(status == 1);
  CHECK(doc.at("full_rank") == false);
}
