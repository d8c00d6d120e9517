#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "cissir/cissir.hpp"

using namespace cissir;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CISSIR_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = (status & 0x7f) == 0 ? (status >> 8) & 0xff : -1;  // exited normally
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

fs::path workdir(const std::string& name) {
  const fs::path d = fs::path(CISSIR_TEST_WORKDIR) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.ini";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("exit code 2 on configuration errors") {
  CHECK(run("channel --config /nonexistent/file.ini").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("optimize --solver hybrid").code == 2);
  CHECK(run("optimize --beta -1").code == 2);
  const auto d = workdir("badcfg");
  CHECK(run("channel --config " + write_config(d, "[scenario]\nantennas = 3\n").string()).code == 2);
}

TEST_CASE("channel command prints the reference max-SI") {
  const auto d = workdir("channel");
  const auto multi = run("channel --out " + (d / "m").string());
  REQUIRE(multi.code == 0);
  const double m = std::stod(key_values(multi.out).at("reference_max_si_db"));
  CHECK(std::abs(m - -54.5) <= 5.0);
  const auto single = run("channel --no-clutter --out " + (d / "s").string());
  REQUIRE(single.code == 0);
  const double s = std::stod(key_values(single.out).at("reference_max_si_db"));
  CHECK(std::abs(s - -60.6) <= 5.0);
  CHECK(fs::exists(d / "m" / "si_channel.txt"));
  CHECK(fs::exists(d / "m" / "radar_channel.txt"));
}

TEST_CASE("optimize writes codebooks that reproduce the printed max-SI") {
  const auto d = workdir("optimize");
  REQUIRE(run("channel --out " + d.string()).code == 0);
  const auto o = run("optimize --eps-db -85 --out " + d.string());
  REQUIRE(o.code == 0);
  const auto kv = key_values(o.out);
  const double printed = std::stod(kv.at("max_si"));
  const auto ch = read_channel_file(d / "si_channel.txt");
  const Codebook w = read_codebook_file(d / "W.txt");
  const Codebook c = read_codebook_file(d / "C.txt");
  CHECK(std::abs(max_si(c, w, ch.channel) - printed) <= 1e-9 * printed);
  CHECK(printed <= from_db20(-85.0) * (1.0 + 1e-9));
  const std::string csv = slurp(d / "columns.csv");
  CHECK(csv.rfind("side,column,objective,nu_or_upsilon,si_value,case\n", 0) == 0);

  SECTION("huge eps returns the references") {
    const auto h = run("optimize --eps-db 0 --out " + (d / "h").string());
    REQUIRE(h.code == 0);
    const auto hk = key_values(h.out);
    CHECK(hk.at("sigma_tx_sq_db") == "-inf");
    CHECK(hk.at("sigma_rx_sq_db") == "-inf");
  }
  SECTION("single-path SI gap stays within 1 dB") {
    const auto s = run("optimize --no-clutter --eps-db -70 --out " + (d / "s").string());
    REQUIRE(s.code == 0);
    const double gap = std::stod(key_values(s.out).at("si_gap_db"));
    CHECK(gap >= 0.0);
    CHECK(gap <= 1.0);
  }
}

TEST_CASE("exit code 3 when the budget is infeasible") {
  const auto d = workdir("infeasible");
  CHECK(run("optimize --eps-db -260 --out " + d.string()).code == 3);
  CHECK(run("optimize --solver phased --eps-db -85 --out " + d.string()).code == 3);
  CHECK(run("sweep --solver phased --config " +
            write_config(d, "[sweep]\neps_db = -120, -110\n").string() + " --out " + d.string())
            .code == 3);
}

TEST_CASE("exit code 4 when the SDP hits its iteration cap") {
  const auto d = workdir("stall");
  // Feasible phased budget with an unreachable tolerance and a short cap.
  const auto cfg = write_config(d, "[solver]\ntolerance = 1e-300\nmax_iterations = 200\n");
  CHECK(run("optimize --solver phased --eps-db -65 --config " + cfg.string() + " --out " + d.string()).code == 4);
}

TEST_CASE("sweep CSV columns") {
  const auto d = workdir("sweep");
  const auto cfg = write_config(d, "[sweep]\neps_db = -90, -80, -70\n");
  REQUIRE(run("sweep --config " + cfg.string() + " --out " + d.string()).code == 0);
  const std::string csv = slurp(d / "tradeoff.csv");
  CHECK(csv.rfind("eps_db,maxsi_db,sigma_tx_db,sigma_rx_db,frobenius_si_db,runtime_ms\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("budget command") {
  const auto r = run("budget");
  REQUIRE(r.code == 0);
  const auto kv = key_values(r.out);
  CHECK(std::abs(std::stod(kv.at("b_q")) * 6144.0 - 1.0) < 1e-11);
  CHECK(std::stod(kv.at("beta")) > 0.0);
}

TEST_CASE("every command is byte-identical across runs") {
  const auto d = workdir("determinism");
  const auto cfg = write_config(d,
                                "[ofdm]\nsymbols = 12\n"
                                "[sweep]\neps_db = -95, -85, -75, -65\n");
  const std::string base = " --seed 7 --config " + cfg.string();
  for (const std::string cmd : {"channel", "optimize", "sweep", "sense", "budget"}) {
    const auto a = run(cmd + base + " --out " + (d / (cmd + "_a")).string());
    const auto b = run(cmd + base + " --out " + (d / (cmd + "_b")).string());
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    if (!fs::exists(d / (cmd + "_a"))) continue;
    for (const auto& e : fs::directory_iterator(d / (cmd + "_a"))) {
      INFO(cmd << " " << e.path().filename());
      CHECK(slurp(e.path()) == slurp(d / (cmd + "_b") / e.path().filename()));
    }
  }
  const auto csvs = {"sense_a/profile_reference.csv", "sense_a/profile_optimized.csv", "sense_a/snr.csv"};
  for (const auto* f : csvs) CHECK(fs::exists(d / f));
  CHECK(slurp(d / "sense_a/profile_reference.csv").rfind("range_m,mag_db\n", 0) == 0);
  CHECK(slurp(d / "sense_a/snr.csv").rfind("eps_db,snr_db,snr_bound_db,crlb_sqrt_m\n", 0) == 0);
}
