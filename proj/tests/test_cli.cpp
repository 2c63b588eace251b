#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "sparsegof/datasets.hpp"
#include "sparsegof/tables.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "sparsegof_cli_tests";

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  fs::create_directories(kWorkDir);
  const fs::path out_path = kWorkDir / "stdout.txt";
  const fs::path err_path = kWorkDir / "stderr.txt";
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += std::string(SPARSEGOF_CLI_PATH) + " " + args + " >'" + out_path.string() +
         "' 2>'" + err_path.string() + "'";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

bool is_hex16(const std::string& s) {
  if (s.size() != 16) return false;
  for (char ch : s)
    if (!((ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f'))) return false;
  return true;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("quantile subcommand") {
  auto r = run_cli("quantile 0.95 99");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "123.225221\n");
  CHECK(run_cli("quantile 0.5 2").out == "1.386294\n");

  CHECK(run_cli("quantile 1.5 2").exit_code == 2);
  CHECK(run_cli("quantile 0.95 0").exit_code == 2);
  CHECK(run_cli("quantile 0.95").exit_code == 2);
}

TEST_CASE("builtin test decisions and exit codes") {
  auto rivers = run_cli("test --builtin rivers");
  CHECK(rivers.exit_code == 1);
  CHECK(rivers.out.find("combined decision: reject") != std::string::npos);
  CHECK(rivers.out.find("G^ab") != std::string::npos);
  CHECK(rivers.out.find("df=10") != std::string::npos);

  CHECK(run_cli("test --builtin sclerosis").exit_code == 1);
}

TEST_CASE("accepting test exits zero") {
  const fs::path counts = kWorkDir / "counts.txt";
  const fs::path null_w = kWorkDir / "null.txt";
  fs::create_directories(kWorkDir);
  spit(counts, "25, 25, 25, 25\n");
  spit(null_w, "1 1 1 1\n");
  auto r = run_cli("test --counts '" + counts.string() + "' --null '" +
                   null_w.string() + "'");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("combined decision: accept") != std::string::npos);
  CHECK(r.out.find("warning: correction inactive: no zero cells") != std::string::npos);
}

TEST_CASE("json report") {
  const fs::path out = kWorkDir / "rivers.json";
  auto r = run_cli("test --builtin rivers --json '" + out.string() + "' --no-timestamp");
  CHECK(r.exit_code == 1);
  auto doc = json::parse(slurp(out));

  CHECK(doc["metadata"]["version"] == "0.1.0");
  CHECK(doc["metadata"]["seed"] == 0);
  CHECK(doc["metadata"]["h"] == 0.1);
  CHECK(doc["metadata"]["eps_fraction"] == 0.001);
  CHECK_FALSE(doc["metadata"].contains("timestamp"));
  CHECK(is_hex16(doc["metadata"]["input_digest"].get<std::string>()));

  CHECK(doc["input"]["kind"] == "builtin");
  CHECK(doc["input"]["source"] == "rivers");
  CHECK(doc["input"]["rows"] == 3);
  CHECK(doc["input"]["cols"] == 6);

  auto& rep = doc["report"];
  CHECK(rep["n"] == 21);
  CHECK(rep["df"] == 10);
  CHECK(rep["statistics"]["Q"].get<double>() ==
        doctest::Approx(14.379166666666666).epsilon(1e-12));
  CHECK(rep["statistics"]["Qab"].get<double>() ==
        doctest::Approx(20.676367275425154).epsilon(1e-12));
  CHECK(rep["statistics"]["Gab"].get<double>() ==
        doctest::Approx(26.055926731409325).epsilon(1e-12));
  CHECK(rep["reject"]["Q"] == false);
  CHECK(rep["reject"]["Gab"] == true);
  CHECK(rep["combined_reject"] == true);
  CHECK(rep["correction"]["fallback"] == false);
  CHECK(rep["correction"]["b"].get<double>() ==
        doctest::Approx(0.78067377596476106).epsilon(1e-12));

  // reruns are byte identical without the timestamp
  const fs::path out2 = kWorkDir / "rivers2.json";
  run_cli("test --builtin rivers --json '" + out2.string() + "' --no-timestamp");
  CHECK(slurp(out) == slurp(out2));

  // with a timestamp the key is present
  const fs::path out3 = kWorkDir / "rivers3.json";
  run_cli("test --builtin rivers --json '" + out3.string() + "'");
  CHECK(json::parse(slurp(out3))["metadata"].contains("timestamp"));
}

TEST_CASE("print emits the fixture as csv") {
  auto r = run_cli("test --builtin rivers --print");
  CHECK(r.exit_code == 0);
  std::istringstream in(r.out);
  auto parsed = sparsegof::parse_table(in, sparsegof::TableFormat{true});
  auto builtin = sparsegof::builtin_table("rivers");
  CHECK(parsed.cells == builtin.cells);
  CHECK(parsed.row_labels == builtin.row_labels);
  CHECK(parsed.col_labels == builtin.col_labels);
}

TEST_CASE("table file input matches the builtin") {
  const fs::path a = kWorkDir / "a.json";
  const fs::path b = kWorkDir / "b.json";
  run_cli("test --builtin rivers --json '" + a.string() + "' --no-timestamp");
  run_cli(std::string("test --table '") + SPARSEGOF_DATA_DIR +
          "/rivers.csv' --labeled --json '" + b.string() + "' --no-timestamp");
  auto da = json::parse(slurp(a));
  auto db = json::parse(slurp(b));
  CHECK(da["report"]["statistics"] == db["report"]["statistics"]);
  CHECK(da["report"]["combined_reject"] == db["report"]["combined_reject"]);
}

TEST_CASE("empty margins are removed for the independence model") {
  const fs::path table = kWorkDir / "margins.csv";
  fs::create_directories(kWorkDir);
  spit(table, "row,a,b,c\nx,5,0,2\ny,0,0,0\nz,3,0,4\n");
  const fs::path out = kWorkDir / "margins.json";
  auto r = run_cli("test --table '" + table.string() + "' --labeled --json '" +
                   out.string() + "' --no-timestamp");
  CHECK(r.exit_code <= 1); // ran to a decision
  CHECK(r.exit_code >= 0);
  auto doc = json::parse(slurp(out));
  CHECK(doc["input"]["removed_rows"] == json::array({"y"}));
  CHECK(doc["input"]["removed_cols"] == json::array({"b"}));
  CHECK(doc["input"]["rows"] == 2);
  CHECK(doc["input"]["cols"] == 2);
}

TEST_CASE("argument errors exit with code 2") {
  CHECK(run_cli("test").exit_code == 2);
  CHECK(run_cli("test --builtin rivers --counts x.txt").exit_code == 2);
  CHECK(run_cli("test --builtin nosuch").exit_code == 2);
  CHECK(run_cli("test --print").exit_code == 2);
  CHECK(run_cli("test --builtin rivers --model bogus").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);

  const fs::path counts = kWorkDir / "c2.txt";
  fs::create_directories(kWorkDir);
  spit(counts, "1 2 3\n");
  auto r = run_cli("test --counts '" + counts.string() + "'");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error:") != std::string::npos);

  const fs::path badw = kWorkDir / "w.txt";
  spit(badw, "1 -2 3\n");
  CHECK(run_cli("test --counts '" + counts.string() + "' --null '" + badw.string() +
                "'").exit_code == 2);
}

TEST_CASE("help exits zero") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("test --help").exit_code == 0);
  // --h is the correction parameter, not an abbreviation of help
  CHECK(run_cli("test --builtin rivers --h 0.2").exit_code == 1);
}

TEST_CASE("simulate writes the three outputs") {
  const std::string prefix = (kWorkDir / "sim").string();
  auto r = run_cli("simulate --dist f2 --n 400 --reps 200 --alpha 0.01 --alpha 0.05"
                   " --seed 7 --out-prefix '" + prefix + "' --no-timestamp");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("mode(c)=46") != std::string::npos);

  const std::string quantiles = slurp(prefix + "_quantiles.csv");
  CHECK(quantiles.rfind("c,bucket_count,q_Q,q_Qab,q_G,q_Gab,q_RC23\n"
                        "41,4,179.040404,80.699379,95.248917,85.897977,128.540345\n",
                        0) == 0);
  const std::string rates = slurp(prefix + "_rates.csv");
  CHECK(rates.find("0.05,0.150000,") != std::string::npos);

  auto doc = json::parse(slurp(prefix + "_summary.json"));
  CHECK(doc["metadata"]["seed"] == 7);
  CHECK(doc["spec"]["dist"] == "f2");
  CHECK(doc["spec"]["null"] == "f2");
  CHECK(doc["spec"]["replicates"] == 200);
  CHECK(doc["mode_c"] == 46);
  CHECK(doc["fallback_count"] == 0);
  CHECK(doc["rejection_rates"][1]["Q"].get<double>() ==
        doctest::Approx(0.15).epsilon(1e-12));
  CHECK(doc["rejection_rates_at_mode"][1]["Q"].get<double>() ==
        doctest::Approx(0.044444444444444446).epsilon(1e-12));
  CHECK(doc["per_c"][0]["c"] == 41);
  CHECK(doc["per_c"][0]["count"] == 4);

  // byte-identical rerun
  const std::string prefix2 = (kWorkDir / "sim2").string();
  run_cli("simulate --dist f2 --n 400 --reps 200 --alpha 0.01 --alpha 0.05"
          " --seed 7 --out-prefix '" + prefix2 + "' --no-timestamp");
  CHECK(slurp(prefix + "_summary.json") == slurp(prefix2 + "_summary.json"));
  CHECK(slurp(prefix + "_quantiles.csv") == slurp(prefix2 + "_quantiles.csv"));
  CHECK(slurp(prefix + "_rates.csv") == slurp(prefix2 + "_rates.csv"));
}

TEST_CASE("simulate against the perturbed null") {
  const std::string prefix = (kWorkDir / "simp").string();
  auto r = run_cli("simulate --dist f1 --null-perturbed --n 400 --reps 50 --seed 3"
                   " --out-prefix '" + prefix + "' --no-timestamp");
  CHECK(r.exit_code == 0);
  auto doc = json::parse(slurp(prefix + "_summary.json"));
  CHECK(doc["spec"]["null"] == "perturbed");
  CHECK(doc["spec"]["alpha_levels"] == json::array({0.05}));

  CHECK(run_cli("simulate --dist f1 --null f2 --null-perturbed").exit_code == 2);
  CHECK(run_cli("simulate --dist nosuch.txt").exit_code == 2);
}

TEST_CASE("seed resolution") {
  const std::string a = (kWorkDir / "seed_env").string();
  run_cli("simulate --dist f1 --reps 5 --out-prefix '" + a + "' --no-timestamp",
          "SPARSEGOF_SEED=99");
  CHECK(json::parse(slurp(a + "_summary.json"))["metadata"]["seed"] == 99);

  const std::string b = (kWorkDir / "seed_flag").string();
  run_cli("simulate --dist f1 --reps 5 --seed 7 --out-prefix '" + b + "' --no-timestamp",
          "SPARSEGOF_SEED=99");
  CHECK(json::parse(slurp(b + "_summary.json"))["metadata"]["seed"] == 7);

  const std::string c = (kWorkDir / "seed_default").string();
  run_cli("simulate --dist f1 --reps 5 --out-prefix '" + c + "' --no-timestamp");
  CHECK(json::parse(slurp(c + "_summary.json"))["metadata"]["seed"] == 12345);

  CHECK(run_cli("simulate --dist f1 --reps 5", "SPARSEGOF_SEED=oops").exit_code == 2);
}

} // TEST_SUITE
