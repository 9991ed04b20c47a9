#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qnr/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("qnr_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// env is a prefix such as "QNR_SEED=5"; empty runs with QNR_SEED unset.
Run run(const std::string& args, const std::string& env = "") {
  const fs::path out = scratch() / "stdout.txt";
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = "cd " + scratch().string() + " && env -u QNR_SEED " + env + " " + QNR_CLI_PATH +
                          " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write(const std::string& name, const std::string& text) {
  std::ofstream(scratch() / name) << text;
}

const char* kJordan = R"({"dim": 2, "entries": [[0,0],[1,0],[0,0],[0,0]]})";
const char* kA1 = R"({"dim": 2, "entries": [[2.5,0],[-0.5,0],[-0.5,0],[2.5,0]]})";

}  // namespace

TEST_CASE("radius of the Jordan block") {
  write("j.json", kJordan);
  const Run r = run("radius --matrix j.json --q 0.5");
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - 0.93301) <= 1e-3);
  const Run js = run("radius --matrix j.json --q 0.5 --json");
  CHECK(js.code == 0);
  const nlohmann::json j = nlohmann::json::parse(js.out);
  CHECK(std::abs(j["w_q"].get<double>() - 0.9330127018922193) <= 1e-9);
}

TEST_CASE("complex q") {
  write("j.json", kJordan);
  const Run r = run("radius --matrix j.json --q 0.3,0.4");
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - 0.5 * (1.0 + std::sqrt(0.75))) <= 1e-9);
}

TEST_CASE("usage errors exit 2") {
  write("j.json", kJordan);
  const Run big = run("radius --matrix j.json --q 1.5");
  CHECK(big.code == 2);
  CHECK(big.err.rfind("error: kind=Usage", 0) == 0);
  CHECK(run("radius --matrix j.json --q 0").code == 2);
  CHECK(run("radius --matrix j.json --q abc").code == 2);
  CHECK(run("radius --matrix j.json --bogus 1").code == 2);
  CHECK(run("nosuchcommand").code == 2);
  CHECK(run("").code == 2);
}

TEST_CASE("domain errors exit 1 with a parseable line") {
  write("j.json", kJordan);
  const Run r = run("sectorial --matrix missing.json --q 0.5");
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error: kind=Io message=", 0) == 0);
  CHECK(r.err.find("missing.json") != std::string::npos);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  const Run u = run("orlicz --fn cosh --op eval 1");
  CHECK(u.code == 1);
  CHECK(u.err.rfind("error: kind=UnknownName", 0) == 0);
  const Run f = run("figure --id fig9");
  CHECK(f.code == 1);
  CHECK(f.err.rfind("error: kind=UnknownFigure", 0) == 0);
}

TEST_CASE("sectorial subcommand") {
  write("a1.json", kA1);
  const Run r = run("sectorial --matrix a1.json --q 0.5 --json");
  CHECK(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["is_q_sectorial"] == true);
  CHECK(j["alpha"].is_number());
  write("j.json", kJordan);
  const nlohmann::json n = nlohmann::json::parse(run("sectorial --matrix j.json --q 0.5 --json").out);
  CHECK(n["is_q_sectorial"] == false);
}

TEST_CASE("boundary subcommand") {
  write("j.json", kJordan);
  const Run r = run("boundary --matrix j.json --q 0.5 --directions 16");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("theta,h,vertex_re,vertex_im\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 17);
}

TEST_CASE("orlicz subcommand") {
  const nlohmann::json e = nlohmann::json::parse(run("orlicz --fn power:2 --op eval 3").out);
  CHECK(e["result"][0] == 9.0);
  const nlohmann::json c = nlohmann::json::parse(run("orlicz --fn power_over_p:2 --op complement 4").out);
  CHECK(std::abs(c["result"][0].get<double>() - 8.0) <= 1e-12);
  const nlohmann::json h = nlohmann::json::parse(run("orlicz --fn power:2 --op hh 0 1").out);
  CHECK(std::abs(h["result"].get<double>() - 1.0 / 3.0) <= 1e-12);
  const nlohmann::json y = nlohmann::json::parse(run("orlicz --fn power_over_p:2 --op young 1 1").out);
  CHECK(y.dump().find("slack") != std::string::npos);
  CHECK(run("orlicz --fn power:2 --op hh 1").code != 0);
}

TEST_CASE("figure subcommand") {
  const Run r = run("figure --id fig1 --out fig1.csv");
  CHECK(r.code == 0);
  const std::string csv = slurp(scratch() / "fig1.csv");
  CHECK(csv.rfind("q,f_L3,f_C1\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 200);
  CHECK(run("figure --id fig1").out == csv);
}

TEST_CASE("regress subcommand") {
  const Run r = run("regress");
  CHECK(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["entries"].size() >= 10);
}

TEST_CASE("verify is deterministic") {
  const std::string args = "verify --bounds L1a,C1,S2 --trials 2 --dims 2..3 --seed 42 --report r.json";
  CHECK(run(args).code == 0);
  nlohmann::json a = nlohmann::json::parse(slurp(scratch() / "r.json"));
  CHECK(run(args).code == 0);
  nlohmann::json b = nlohmann::json::parse(slurp(scratch() / "r.json"));
  a.erase("generated_at");
  b.erase("generated_at");
  CHECK(a.dump() == b.dump());
  CHECK(a["summary"]["violations"] == 0);
}

TEST_CASE("QNR_SEED sets the default seed and flags override it") {
  write("r.json", R"({"dim": 3, "entries": [[0.3,1],[1,0],[0,-2],[0.5,0.5],[1,1],[-1,0],[2,0],[0,0.1],[1,-1]]})");
  const nlohmann::json env = nlohmann::json::parse(run("radius --matrix r.json --q 0.5 --json", "QNR_SEED=5").out);
  CHECK(env["seed"] == 5);
  const nlohmann::json flag =
      nlohmann::json::parse(run("radius --matrix r.json --q 0.5 --json --seed 9", "QNR_SEED=5").out);
  CHECK(flag["seed"] == 9);
  const nlohmann::json none = nlohmann::json::parse(run("radius --matrix r.json --q 0.5 --json").out);
  CHECK(none["seed"] == 0);
}

TEST_CASE("dump-config round trip") {
  write("j.json", kJordan);
  const Run d = run("radius --matrix j.json --q 0.5 --json --restarts 7 --dump-config");
  CHECK(d.code == 0);
  write("cfg.json", d.out);
  const Run again = run("--config cfg.json --dump-config");
  CHECK(again.code == 0);
  CHECK(again.out == d.out);
  const Run replay = run("--config cfg.json");
  const Run direct = run("radius --matrix j.json --q 0.5 --json --restarts 7");
  CHECK(replay.code == 0);
  CHECK(replay.out == direct.out);

  const Run dv = run("verify --bounds L1a --trials 1 --dims 2 --dump-config");
  write("cfg2.json", dv.out);
  CHECK(run("--config cfg2.json --dump-config").out == dv.out);
  const Run o = run("orlicz --fn power:2 --op eval 3 4 --dump-config");
  write("cfg3.json", o.out);
  CHECK(run("--config cfg3.json --dump-config").out == o.out);
  CHECK(run("--config cfg3.json").out == run("orlicz --fn power:2 --op eval 3 4").out);
}

TEST_CASE("help lists every subcommand and flag") {
  const Run r = run("--help");
  CHECK(r.code == 0);
  for (const char* s : {"radius", "boundary", "sectorial", "orlicz", "verify", "figure", "regress"}) {
    CHECK(r.out.find(s) != std::string::npos);
  }
  const Run v = run("verify --help");
  for (const char* f : {"--bounds", "--trials", "--dims", "--q-grid", "--phi", "--seed", "--report"}) {
    CHECK(v.out.find(f) != std::string::npos);
  }
}

TEST_CASE("parse_q") {
  CHECK(qnr::parse_q("0.5").has_value());
  CHECK(qnr::parse_q("0.6,0.8").has_value());
  CHECK(std::abs(qnr::parse_q("0.6,0.8")->modulus() - 1.0) <= 1e-15);
  CHECK_FALSE(qnr::parse_q("1.5").has_value());
  CHECK_FALSE(qnr::parse_q("0").has_value());
  CHECK_FALSE(qnr::parse_q("x").has_value());
  CHECK_FALSE(qnr::parse_q("0.5,").has_value());
}

TEST_CASE("in-process entry point") {
  std::ostringstream out;
  std::ostringstream err;
  const char* argv[] = {"qnr", "orlicz", "--fn", "power:3", "--op", "kernel", "2"};
  CHECK(qnr::run_cli(7, argv, out, err) == 0);
  CHECK(nlohmann::json::parse(out.str())["result"][0] == 12.0);
  std::ostringstream out2;
  const char* bad[] = {"qnr", "figure"};
  CHECK(qnr::run_cli(2, bad, out2, err) == 2);
}
