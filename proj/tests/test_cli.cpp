#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::temp_directory_path() / "skg_cli_test";

struct RunResult {
  int exit_code = -1;
  std::string out, err;
};

RunResult run_cli(const std::string& args) {
  fs::create_directories(kScratch);
  const fs::path out = kScratch / "stdout.txt";
  const fs::path err = kScratch / "stderr.txt";
  const std::string cmd = std::string(SKG_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(raw);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string slurp_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("dof subcommand emits the formula value") {
  const fs::path csv = kScratch / "dof.csv";
  auto r = run_cli("dof --deltas 0.25 0.25 0.25 0.25 --gammas 0.5 1 2 4 --out " +
                   csv.string());
  REQUIRE(r.exit_code == 0);
  const std::string body = slurp_file(csv);
  CHECK(body.find("dof,dof_upper_route") == 0);
  // identical values on both routes
  std::istringstream ss(body);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  const auto comma = row.find(',');
  CHECK(row.substr(0, comma) == row.substr(comma + 1));
}

TEST_CASE("erasure-sim with delta=0, delta_e=1 yields the exact capacity") {
  const fs::path csv = kScratch / "erasure.csv";
  auto r = run_cli(
      "erasure-sim --delta 0 --delta-e 1 --n 80 --L 4 --q 256 --m 3 --trials 2 --out " +
      csv.string());
  REQUIRE(r.exit_code == 0);
  std::istringstream ss(slurp_file(csv));
  std::string line;
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    CHECK(line.find(",32,") != std::string::npos);  // rate column = L log2 q = 32
    CHECK(line.substr(line.size() - 2) == "32");    // capacity column
  }
}

TEST_CASE("byte-identical CSV for identical config and seed") {
  const fs::path a = kScratch / "a.csv";
  const fs::path b = kScratch / "b.csv";
  const std::string args =
      "erasure-sim --delta 0.4 --delta-e 0.5 --n 200 --L 2 --q 65536 --m 3 "
      "--seed 9 --trials 3 --out ";
  REQUIRE(run_cli(args + a.string()).exit_code == 0);
  REQUIRE(run_cli(args + b.string()).exit_code == 0);
  CHECK(slurp_file(a) == slurp_file(b));
  CHECK(!slurp_file(a).empty());
}

TEST_CASE("config file plus flag override") {
  const fs::path cfg = kScratch / "cfg.json";
  write_file(cfg, R"({"kind":"dof","deltas":[0.5,0.5],"gammas":[1.0,2.0],"L":1})");
  const fs::path csv = kScratch / "dof2.csv";
  // override L via flag: dof scales linearly in L
  auto r = run_cli("dof --config " + cfg.string() + " --L 4 --out " + csv.string());
  REQUIRE(r.exit_code == 0);
  const std::string body = slurp_file(csv);
  CHECK(body.find("\n1,") != std::string::npos);  // (2-1) * 0.25 * L = 1 at L=4
}

TEST_CASE("validate lists schema violations without executing") {
  const fs::path bad = kScratch / "bad.json";
  write_file(bad,
             R"({"kind":"gauss-bounds","gains_db":[30.0,-5.0],"deltas":[0.5,0.4]})");
  auto r = run_cli("validate --config " + bad.string());
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("gains must be strictly increasing") != std::string::npos);
  CHECK(r.out.find("deltas must sum to 1 within 1e-12") != std::string::npos);

  const fs::path good = kScratch / "good.json";
  write_file(good,
             R"({"kind":"gauss-bounds","gains_db":[-5.0,5.0,18.0,30.0],)"
             R"("deltas":[0.25,0.25,0.25,0.25],"p_max":10.0})");
  auto r2 = run_cli("validate --config " + good.string());
  CHECK(r2.exit_code == 0);
  CHECK(r2.out.empty());
}

TEST_CASE("invalid run config exits 2 with machine-readable stderr") {
  auto r = run_cli("erasure-sim --delta 1.5 --delta-e 0.5 --out " +
                   (kScratch / "x.csv").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("\"error\"") != std::string::npos);
  CHECK(r.err.find("delta must lie in [0, 1]") != std::string::npos);
}

TEST_CASE("gauss-optimize emits per-layer rows and a candidate sidecar") {
  const fs::path csv = kScratch / "opt.csv";
  auto r = run_cli(
      "gauss-optimize --gains-db -10 0 10 --deltas 0.3333333333333333 "
      "0.3333333333333334 0.3333333333333333 --p-max 10 --out " +
      csv.string());
  REQUIRE(r.exit_code == 0);
  const std::string body = slurp_file(csv);
  CHECK(body.find("layer,h_db,power,interference,rate_bits,fraction") == 0);
  const std::string meta = slurp_file(csv.string() + ".meta.json");
  CHECK(meta.find("\"candidates\"") != std::string::npos);
  CHECK(meta.find("\"achievable_bits_per_use\"") != std::string::npos);
  CHECK(meta.find("\"version\"") != std::string::npos);
}

TEST_CASE("example1 sweep: dominance enforced and row count as requested") {
  const fs::path csv = kScratch / "ex1.csv";
  auto r = run_cli("example1 --p-max 10 --points 12 --out " + csv.string());
  REQUIRE(r.exit_code == 0);
  std::istringstream ss(slurp_file(csv));
  std::string line;
  std::getline(ss, line);
  CHECK(line == "h1_db,achievable,upper_bound");
  int rows = 0;
  while (std::getline(ss, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 12);
}
