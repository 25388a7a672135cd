#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

// End-to-end checks against the installed binary.

namespace {

using json = nlohmann::json;

std::string out_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

int run(const std::string& args) {
  const std::string cmd =
      std::string(LINGDYN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("") == 2);                              // missing subcommand
  CHECK(run("learn --format xml") == 2);            // invalid enum
  CHECK(run("calibrate") == 2);                     // missing required flags
  CHECK(run("nonsense") == 2);                      // unknown subcommand
  CHECK(run("--help") == 0);
}

TEST_CASE("invalid parameter domains exit with code 2") {
  CHECK(run("phase --alpha -1") == 2);
  CHECK(run("learn --gamma 2 --tokens 10") == 2);
  CHECK(run("cohort --l2-fraction 1.5 --tokens 1 --n-learners 2 "
            "--generations 1") == 2);
}

TEST_CASE("learn") {
  SUBCASE("zero tokens, one learner") {
    const std::string path = out_path("learn0.csv");
    REQUIRE(run("learn --n-learners 1 --tokens 0 --l2-fraction 0 --out " + path) == 0);
    const auto lines = lines_of(slurp(path));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "learner_id,kind,iteration,prob");
    const auto fields = split_csv(lines[1]);
    REQUIRE(fields.size() == 4);
    CHECK(fields[0] == "0");
    CHECK(fields[1] == "L1");
    CHECK(fields[2] == "0");
  }
  SUBCASE("same seed twice is byte-identical; different seed differs") {
    const std::string a = out_path("learn_a.csv"), b = out_path("learn_b.csv"),
                      c = out_path("learn_c.csv");
    const std::string flags =
        "learn --n-learners 4 --tokens 2000 --subsample 500 ";
    REQUIRE(run(flags + "--seed 11 --out " + a) == 0);
    REQUIRE(run(flags + "--seed 11 --out " + b) == 0);
    REQUIRE(run(flags + "--seed 12 --out " + c) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));
  }
  SUBCASE("csv and json runs carry identical values") {
    const std::string csv = out_path("learn.csv"), js = out_path("learn.json");
    const std::string flags =
        "learn --n-learners 3 --tokens 1000 --subsample 250 --seed 5 ";
    REQUIRE(run(flags + "--out " + csv) == 0);
    REQUIRE(run(flags + "--format json --out " + js) == 0);
    const auto lines = lines_of(slurp(csv));
    const json arr = json::parse(slurp(js));
    REQUIRE(arr.size() == lines.size() - 1);
    for (size_t i = 0; i < arr.size(); ++i) {
      const auto fields = split_csv(lines[i + 1]);
      CHECK(std::to_string(arr[i]["learner_id"].get<int>()) == fields[0]);
      CHECK(arr[i]["kind"].get<std::string>() == fields[1]);
      CHECK(arr[i]["prob"].get<double>() == std::stod(fields[3]));
    }
  }
}

TEST_CASE("cohort emits the companion deterministic table") {
  const std::string path = out_path("cohort.csv");
  const std::string det_path = out_path("cohort_det.csv");
  REQUIRE(run("cohort --n-learners 10 --tokens 200 --generations 2 --out " +
              path) == 0);
  const auto cohort_lines = lines_of(slurp(path));
  CHECK(cohort_lines[0] == "generation,kind,learner_id,terminal_prob");
  CHECK(cohort_lines.size() == 1 + 10 * 3);  // founders + 2 generations
  const auto det_lines = lines_of(slurp(det_path));
  CHECK(det_lines[0] == "generation,p_det,q_det");
  REQUIRE(det_lines.size() == 4);
  // founders pinned at 0.99
  CHECK(std::stod(split_csv(det_lines[1])[1]) == 0.99);
  // explicit --det-out wins over the derived name
  const std::string det2 = out_path("elsewhere.csv");
  REQUIRE(run("cohort --n-learners 10 --tokens 200 --generations 2 --out " +
              path + " --det-out " + det2) == 0);
  CHECK(slurp(det2) == slurp(det_path));
}

TEST_CASE("orbit sweep flags non-converged cells but still exits 0") {
  const std::string path = out_path("orbit.csv");
  REQUIRE(run("orbit --alpha 1.25 --d-grid 10 --sigma-grid 0.1,0.5 --out " +
              path) == 0);
  const auto lines = lines_of(slurp(path));
  CHECK(lines[0] == "alpha,D,sigma,p_star,q_star,phase,status");
  REQUIRE(lines.size() == 3);
  CHECK(split_csv(lines[1])[5] == "retained");
  CHECK(split_csv(lines[2])[5] == "lost");
  CHECK(split_csv(lines[2])[6] == "ok");
}

TEST_CASE("passage table reports generations and no-passage") {
  const std::string path = out_path("passage.csv");
  REQUIRE(run("passage --sigma-grid 0.6 --d-grid 1 --q0-grid 0.5 --out " +
              path) == 0);
  const auto lines = lines_of(slurp(path));
  REQUIRE(lines.size() == 2);
  const auto fields = split_csv(lines[1]);
  CHECK(fields[3] == "20");
  CHECK(fields[4] == "ok");

  // retained configuration: bounded budget, flagged, still exit 0
  REQUIRE(run("passage --alpha 3 --sigma-grid 0.2 --d-grid 1 --q0-grid 0.5 "
              "--max-gen 5000 --out " + path) == 0);
  const auto lines2 = lines_of(slurp(path));
  CHECK(split_csv(lines2[1])[4] == "no-passage");
}

TEST_CASE("phase report") {
  const std::string path = out_path("phase.json");
  REQUIRE(run("phase --alpha 1.25 --D 10 --sigma 0.5 --out " + path) == 0);
  const json report = json::parse(slurp(path));
  CHECK(report["sigma_crit"].get<double>() == doctest::Approx(0.22));
  CHECK(report["regime"] == "bifurcation");
  CHECK(report["phase"] == "lost");
  CHECK(report["origin_stable"] == true);
  CHECK(report["lambda_plus"].get<double>() == doctest::Approx(-0.33611).epsilon(1e-4));

  REQUIRE(run("phase --alpha 14 --D 1 --sigma 0.9 --out " + path) == 0);
  CHECK(json::parse(slurp(path))["phase"] == "retained");
}

TEST_CASE("calibrate reproduces the bundled tables") {
  const std::string data = std::string(LINGDYN_DATA_DIR);
  const std::string path = out_path("calibrate.csv");
  REQUIRE(run("calibrate --data " + data + "/cape.csv --pool " + data +
              "/cape_pool.txt --out " + path) == 0);
  const auto lines = lines_of(slurp(path));
  CHECK(lines[0] == "year,sigma_low,sigma_high");
  REQUIRE(lines.size() == 9);
  const auto first = split_csv(lines[1]);
  CHECK(first[0] == "1670");
  CHECK(std::stod(first[2]) == doctest::Approx(65.0 / 190.0));
  CHECK(std::stod(first[1]) == doctest::Approx(0.5 * 65.0 / 190.0));

  REQUIRE(run("calibrate --data " + data + "/lima.csv --pool " + data +
              "/lima_pool.txt --out " + path) == 0);
  const auto lima = lines_of(slurp(path));
  REQUIRE(lima.size() == 5);
  CHECK(std::stod(split_csv(lima[1])[2]) == doctest::Approx(0.46).epsilon(0.01));

  // unreadable inputs are runtime errors, not usage errors
  CHECK(run("calibrate --data /nonexistent.csv --pool " + data +
            "/cape_pool.txt") == 1);
}
