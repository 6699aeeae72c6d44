// End-to-end runs of the command-line tool. The executable path arrives in
// the ALLAX_CLI environment variable.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("allax_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const char* exe = std::getenv("ALLAX_CLI");
  REQUIRE(exe != nullptr);
  const std::string cmd = std::string(exe) + " " + args + " 2>" +
                          (scratch() / "stderr.txt").string();
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string write_coeffs(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

json strip_timestamp(json j) {
  j["manifest"].erase("timestamp_utc");
  return j;
}

}  // namespace

TEST_CASE("verify over random periodic, finite and half-line draws passes") {
  const Run r = run("verify --all --random 4 42 20 --threads 4 --json");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["pass"].get<bool>());
  CHECK(j["reports"].size() > 20);
  for (const auto& rep : j["reports"]) CHECK(rep["max_abs_residual"].get<double>() < 1e-5);
  CHECK(j["manifest"]["thresholds"]["analytic"].get<double>() == 1e-10);
  CHECK(j["manifest"]["seed"].get<int>() == 42);
  CHECK(j["manifest"]["input_sha256"].get<std::string>().size() == 64);
}

TEST_CASE("a single variant against a file") {
  const auto f = write_coeffs("p4.json",
                              R"({"case":"periodic","alphas":[[0.3,0.1],[-0.2,0.4],[0.5,-0.1],[0.1,0.2]]})");
  const Run r = run("verify --variant PeriodicK0 --coeffs " + f +
                    " --d 1 --method analytic --json");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["reports"].size() == 1);
  CHECK(j["reports"][0]["variant"] == "PeriodicK0");
}

TEST_CASE("malformed JSON exits 2 with a diagnostic") {
  const auto f = write_coeffs("bad.json", R"({"case":"periodic","alphas":[[0.3,0.1],)");
  const Run r = run("verify --all --coeffs " + f);
  CHECK(r.code == 2);
  CHECK(slurp(scratch() / "stderr.txt").find("parse") != std::string::npos);
}

TEST_CASE("unreadable file and unknown flags exit 2") {
  CHECK(run("verify --all --coeffs /nonexistent/x.json").code == 2);
  CHECK(run("verify --bogus").code == 2);
  CHECK(run("flow --coeffs /nonexistent/x.json --out x.csv").code == 2);
}

TEST_CASE("variant of the wrong case exits 2") {
  const auto f = write_coeffs("fin.json",
                              R"({"case":"finite","alphas":[[0.3,0.1],[0.2,0],[-1,0]]})");
  CHECK(run("verify-lax --coeffs " + f + " --variant PeriodicK").code == 2);
  CHECK(run("verify-lax --coeffs " + f + " --variant FiniteK --n 2").code == 0);
}

TEST_CASE("impossible threshold exits 1") {
  CHECK(run("verify --all --random 2 1 1 --method analytic --thr-analytic 1e-300").code == 1);
}

TEST_CASE("discriminant of the zero pair on a four-point grid") {
  const auto f = write_coeffs("z2.json", R"({"case":"periodic","alphas":[[0,0],[0,0]]})");
  const Run r = run("discriminant --coeffs " + f + " --grid 4 --json");
  REQUIRE(r.code == 0);
  const json rows = json::parse(r.out)["rows"];
  REQUIRE(rows.size() == 4);
  const double expected[] = {2.0, 0.0, -2.0, 0.0};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(rows[k]["theta"].get<double>() == doctest::Approx(k * std::numbers::pi / 2));
    CHECK(std::abs(rows[k]["re"].get<double>() - expected[k]) < 1e-12);
    CHECK(std::abs(rows[k]["im"].get<double>()) < 1e-12);
    CHECK(std::abs(rows[k]["closed_form"].get<double>() - expected[k]) < 1e-12);
  }
}

TEST_CASE("discriminant CSV for a real pair matches the closed form") {
  const auto f = write_coeffs("r2.json", R"({"case":"periodic","alphas":[[0.5,0],[0.3,0]]})");
  const fs::path csv = scratch() / "disc.csv";
  REQUIRE(run("discriminant --coeffs " + f + " --grid 64 --out " + csv.string()).code == 0);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta,re,im,closed_form");
  int rows = 0;
  while (std::getline(in, line)) {
    double theta, re, im, closed;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &theta, &re, &im, &closed) == 4);
    CHECK(std::abs(im) < 1e-10);
    CHECK(std::abs(re - closed) < 1e-10);
    ++rows;
  }
  CHECK(rows == 64);
  CHECK(fs::exists(csv.string() + ".manifest.json"));
}

TEST_CASE("flow with t = 0 writes one record and zero drifts") {
  const auto f = write_coeffs("p4.json",
                              R"({"case":"periodic","alphas":[[0.3,0.1],[-0.2,0.4],[0.5,-0.1],[0.1,0.2]]})");
  const fs::path csv = scratch() / "t0.csv";
  const Run r = run("flow --coeffs " + f + " --t 0 --json --out " + csv.string());
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["records"].get<int>() == 1);
  for (const auto& [name, v] : j["drift"].items()) CHECK(v.get<double>() == 0.0);
  std::ifstream in(csv);
  std::string header, row, extra;
  std::getline(in, header);
  CHECK(header.rfind("t,alpha0_re,alpha0_im", 0) == 0);
  CHECK(std::getline(in, row));
  CHECK_FALSE(std::getline(in, extra));
}

TEST_CASE("Geronimus flow keeps the moduli constant") {
  const auto f = write_coeffs("ger.json", R"({"case":"periodic","alphas":[[0.4,0],[0.4,0]]})");
  const fs::path csv = scratch() / "ger.csv";
  const Run r = run("flow --coeffs " + f + " --hamiltonian AL --t 10 --dt 1e-3 " +
                    "--monitor-every 10 --json --out " + csv.string());
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["drift"]["maxmod"].get<double>() < 1e-8);
  CHECK(j["conserved_max_drift"].get<double>() < 1e-6);
  CHECK(j["t_final"].get<double>() == doctest::Approx(10.0));
  const json side = json::parse(slurp(csv.string() + ".manifest.json"));
  CHECK(side["manifest"]["command"] == "flow");
  CHECK(side["manifest"]["thresholds"]["drift"].get<double>() == 1e-6);
}

TEST_CASE("flow that starts on the disk boundary aborts with 3") {
  const auto f = write_coeffs("edge.json",
                              R"({"case":"periodic","alphas":[[0.9999999999,0],[0.2,0]]})");
  CHECK(run("flow --coeffs " + f + " --out " + (scratch() / "edge.csv").string()).code == 3);
}

TEST_CASE("complex generators are refused") {
  const auto f = write_coeffs("z2.json", R"({"case":"periodic","alphas":[[0,0],[0,0]]})");
  CHECK(run("flow --coeffs " + f + " --hamiltonian K:1 --out " +
            (scratch() / "k.csv").string()).code == 2);
}

TEST_CASE("reports are identical apart from the timestamp") {
  const Run a = run("verify --all --random 4 9 3 --threads 1 --json");
  const Run b = run("verify --all --random 4 9 3 --threads 3 --json");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(strip_timestamp(json::parse(a.out)).dump() == strip_timestamp(json::parse(b.out)).dump());
  const Run c = run("verify-bracket --random 4 5 4 --json");
  const Run d = run("verify-bracket --random 4 5 4 --json");
  CHECK(c.code == 0);
  CHECK(strip_timestamp(json::parse(c.out)).dump() == strip_timestamp(json::parse(d.out)).dump());
}

TEST_CASE("invariants and dump") {
  const auto f = write_coeffs("z4.json",
                              R"({"case":"periodic","alphas":[[0,0],[0,0],[0,0],[0,0]]})");
  const Run r = run("invariants --coeffs " + f);
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["K0"].get<double>() == 1.0);
  CHECK(j["K"][1][0].get<double>() == 0.0);
  CHECK(j["c"].size() == 5);
  CHECK(j["invariant_vector"].size() == 4);

  const Run m = run("dump --coeffs " + f + " --matrix theta --index 0");
  CHECK(m.code == 0);
  CHECK(m.out == "row,col,re,im\n0,1,1,0\n1,0,1,0\n");
}

TEST_CASE("selftest") {
  const Run r = run("selftest --json");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["pass"].get<bool>());
}
