#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

// End-to-end checks of the lacekit binary: exit codes, artifact files,
// strict config validation, and byte-level determinism.

namespace fs = std::filesystem;

namespace {

int run_cmd(const std::string& args) {
  const std::string cmd = std::string(LACEKIT_BIN) + " " + args + " > cli.log 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::current_path() / "cli_scratch";
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::current_path(dir);
  }
  ~Scratch() { fs::current_path(dir.parent_path()); }
};

}  // namespace

TEST_CASE("certify-kernel exit codes") {
  Scratch s;
  write_file("k11.json", R"({"kernel": {"type":"uniform_box","d":1,"L":1},
    "model": {"type":"pure_random_walk"}, "out_dir": "k11"})");
  CHECK(run_cmd("certify-kernel --config k11.json") == 1);
  CHECK(fs::exists("k11/kernel_certificate.json"));
  CHECK(slurp("k11/kernel_certificate.json").find("D.bound3") != std::string::npos);

  write_file("k12.json", R"({"kernel": {"type":"uniform_box","d":1,"L":2},
    "model": {"type":"pure_random_walk"}, "grid": {"tensor_per_axis": 2001},
    "out_dir": "k12"})");
  CHECK(run_cmd("certify-kernel --config k12.json") == 0);

  CHECK(run_cmd("certify-kernel --config does_not_exist.json") == 2);
  write_file("nokernel.json", R"({"model": {"type":"pure_random_walk"}})");
  CHECK(run_cmd("certify-kernel --config nokernel.json") == 2);
  CHECK(!fs::exists("out"));  // usage errors write nothing
}

TEST_CASE("unknown config fields are rejected") {
  Scratch s;
  write_file("bad.json", R"({"kernel": {"type":"uniform_box","d":1,"L":2},
    "model": {"type":"pure_random_walk"}, "bogus": 1})");
  CHECK(run_cmd("run --config bad.json") == 2);
  write_file("bad2.json", R"({"kernel": {"type":"uniform_box","d":1,"L":2,"zzz":0},
    "model": {"type":"pure_random_walk"}})");
  CHECK(run_cmd("run --config bad2.json") == 2);
}

TEST_CASE("run pipeline on the pure walk") {
  Scratch s;
  write_file("rw.json", R"({
    "kernel": {"type":"uniform_box","d":2,"L":1},
    "model": {"type":"pure_random_walk"},
    "z": 1.0, "N": 60,
    "kset": {"gap_targets": [0.005, 0.3, 1.2]},
    "asymptotics": {"n_list": [30, 60], "k_magnitudes": [0.5, 1.0]},
    "seed": 7, "out_dir": "rw_out"})");
  CHECK(run_cmd("run --config rw.json") == 0);
  for (const char* f : {"manifest.json", "trace.csv", "constants.json",
                        "certificate_h.json", "config_validation.json",
                        "gaussian.csv", "critical_point.json"})
    CHECK(fs::exists(fs::path("rw_out") / f));

  // f_n(0) = 1 at z = 1 in every trace row with k_index 0
  std::ifstream tr("rw_out/trace.csv");
  std::string line;
  std::getline(tr, line);  // header
  while (std::getline(tr, line)) {
    std::stringstream ss(line);
    std::string n, ki, f;
    std::getline(ss, n, ',');
    std::getline(ss, ki, ',');
    std::getline(ss, f, ',');
    if (ki == "0") CHECK(f == "1");
  }
  // manifest lists every artifact with a hash
  const auto man = slurp("rw_out/manifest.json");
  CHECK(man.find("\"trace.csv\"") != std::string::npos);
  CHECK(man.find("\"hash\"") != std::string::npos);
  CHECK(man.find("\"failed_stage\": null") != std::string::npos);
}

TEST_CASE("run at the critical point emits constants with small residuals") {
  Scratch s;
  write_file("syn.json", R"({
    "kernel": {"type":"uniform_box","d":2,"L":2},
    "model": {"type":"synthetic_theta","beta0":0.01,"theta":3.0},
    "z": "critical", "N": 60,
    "induction": {"theta": 3.0, "epsilon": 0.5, "gamma": 0.25, "delta": 0.2, "lambda": 2.8},
    "kset": {"gap_targets": [0.005, 0.3]},
    "asymptotics": {"n_list": [30, 60], "k_magnitudes": [0.5]},
    "seed": 3, "out_dir": "syn_out"})");
  CHECK(run_cmd("run --config syn.json") == 0);
  const auto cj = slurp("syn_out/constants.json");
  CHECK(cj.find("\"z_c\"") != std::string::npos);
  CHECK(cj.find("\"residuals\"") != std::string::npos);
  // residual of 1 = sum g is below 1e-8 at the solved critical point
  const auto pos = cj.find("one_minus_sum_g");
  REQUIRE(pos != std::string::npos);
  const auto val = cj.substr(cj.find(':', pos) + 1, 24);
  CHECK(std::abs(std::stod(val)) < 1e-8);
}

TEST_CASE("undersized K3 produces failing H3 records and a nonzero exit") {
  Scratch s;
  write_file("small.json", R"({
    "kernel": {"type":"uniform_box","d":2,"L":2},
    "model": {"type":"synthetic_theta","beta0":0.01,"theta":3.0},
    "z": "critical", "N": 40,
    "induction": {"theta": 3.0, "epsilon": 0.5, "gamma": 0.25, "delta": 0.2,
                  "lambda": 2.8, "K3": 1e-4},
    "kset": {"gap_targets": [0.005]},
    "seed": 3, "out_dir": "small_out"})");
  CHECK(run_cmd("run --config small.json") == 1);
  const auto cert = slurp("small_out/certificate_h.json");
  CHECK(cert.find("\"name\": \"H3.r0\"") != std::string::npos);
  CHECK(cert.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("repeated runs with a fixed seed are byte-identical") {
  Scratch s;
  write_file("det.json", R"({
    "kernel": {"type":"uniform_box","d":2,"L":1},
    "model": {"type":"synthetic_theta","beta0":0.02,"theta":2.5},
    "z": 0.95, "N": 40,
    "kset": {"gap_targets": [0.01, 0.5]},
    "asymptotics": {"n_list": [20, 40], "k_magnitudes": [0.5]},
    "seed": 11, "out_dir": "detA"})");
  CHECK(run_cmd("run --config det.json") == 0);
  CHECK(run_cmd("run --config det.json --out detB") == 0);
  for (const auto& entry : fs::directory_iterator("detA")) {
    const auto name = entry.path().filename();
    CHECK(slurp(entry.path()) == slurp(fs::path("detB") / name));
  }
  // a different seed changes the Monte Carlo artifacts but not validity
  CHECK(run_cmd("norms --config det.json --out detN1") == 0);
  CHECK(run_cmd("norms --config det.json --out detN2 --seed 99") == 0);
  CHECK(fs::exists("detN1/norms.csv"));
}

TEST_CASE("norms and susceptibility commands") {
  Scratch s;
  write_file("n.json", R"({
    "kernel": {"type":"uniform_box","d":2,"L":1},
    "model": {"type":"pure_random_walk"},
    "z": 1.0, "N": 30,
    "induction": {"p_list": [1.0, 2.0]},
    "quadrature": {"nodes_per_axis": 32},
    "seed": 5, "out_dir": "norms_out"})");
  CHECK(run_cmd("norms --config n.json") == 0);
  const auto csv = slurp("norms_out/norms.csv");
  CHECK(csv.find("n,p,norm,error") == 0);

  write_file("chi.json", R"({
    "kernel": {"type":"uniform_box","d":1,"L":1},
    "model": {"type":"pure_random_walk"},
    "N": 80,
    "asymptotics": {"z_list": [0.5, 0.8]},
    "out_dir": "chi_out"})");
  CHECK(run_cmd("susceptibility --config chi.json") == 0);
  const auto sj = slurp("chi_out/susceptibility.json");
  CHECK(sj.find("\"z_c_prime\"") != std::string::npos);
}

TEST_CASE("gaussian-check and critical-point commands") {
  Scratch s;
  write_file("g.json", R"({
    "kernel": {"type":"uniform_box","d":1,"L":2},
    "model": {"type":"pure_random_walk"},
    "z": "critical", "N": 50,
    "asymptotics": {"n_list": [100, 400], "k_magnitudes": [0.5, 1.0]},
    "out_dir": "g_out"})");
  CHECK(run_cmd("gaussian-check --config g.json") == 0);
  CHECK(fs::exists("g_out/gaussian_summary.json"));
  CHECK(run_cmd("critical-point --config g.json --out cp_out") == 0);
  CHECK(fs::exists("cp_out/critical_point.json"));
  CHECK(fs::exists("cp_out/zn_sequence.csv"));
}

TEST_CASE("stage failures preserve partial outputs and the stage name") {
  Scratch s;
  // chi at z above the critical point: susceptibility stage fails
  write_file("oob.json", R"({
    "kernel": {"type":"uniform_box","d":1,"L":1},
    "model": {"type":"pure_random_walk"},
    "N": 40,
    "asymptotics": {"z_list": [1.5]},
    "out_dir": "oob_out"})");
  CHECK(run_cmd("susceptibility --config oob.json") == 3);
  const auto man = slurp("oob_out/manifest.json");
  CHECK(man.find("\"failed_stage\": \"susceptibility\"") != std::string::npos);
}
