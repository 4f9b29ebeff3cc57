#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "plsec/cli.hpp"
#include "plsec/montecarlo.hpp"

using namespace plsec;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  fs::path dir = fs::temp_directory_path() / "plsec_cli_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const std::string& name, const std::string& body) {
  fs::path p = test_dir() / name;
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
  int n = 0;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

int count_data_rows(const std::string& text) {
  int n = 0;
  std::istringstream ss(text);
  std::string line;
  bool seen_header = false;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;  // column header
      continue;
    }
    ++n;
  }
  return n;
}

const char* kAsrSweep = R"(
[main]
family = nakagami
m = 2

[eve]
family = nakagami
m = 2
avg_snr_db = 0

[constellation]
modulation_order = 4, 16, 64

[sweep]
points_db = 0, 5, 10, 15, 20, 25, 30, 35, 40
outputs = asr, i_lim
)";

const char* kSopPoint = R"(
[main]
family = generalized_k
k = 5
m = 2
avg_snr_db = 15

[eve]
family = generalized_k
k = 2
m = 1
avg_snr_db = 5

[constellation]
modulation_order = 4

[sweep]
points_db = 15
outputs = sop, mc
target_rate_bits = 1
)";

}  // namespace

TEST_CASE("a three-constellation sweep produces 27 labeled rows") {
  fs::path cfg = write_config("wide.ini", kAsrSweep);
  fs::path out = test_dir() / "wide.csv";
  int rc = run_cli({"sweep", "--config", cfg.string(), "--out", out.string()});
  REQUIRE(rc == 0);
  std::string text = slurp(out);
  CHECK(count_data_rows(text) == 27);
  CHECK(count_lines_starting(text, "# group:") == 3);
  CHECK(count_lines_starting(text, "# seed:") == 1);
  CHECK(text.find("snr_db,asr_bits,i_lim_bits") != std::string::npos);
}

TEST_CASE("sweep results are computed per group") {
  fs::path cfg = write_config("grouped.ini", R"(
[main]
family = nakagami
m = 2

[eve]
family = nakagami
m = 2
avg_snr_db = 0

[constellation]
modulation_order = 4

[sweep]
points_db = 0, 20
outputs = asr
)");
  fs::path out = test_dir() / "grouped.csv";
  REQUIRE(run_cli({"sweep", "--config", cfg.string(), "--out", out.string()}) ==
          0);
  std::string text = slurp(out);
  // Frozen endpoints reproduced from an independent implementation.
  CHECK(text.find("0,0.23059795345") != std::string::npos);
  CHECK(text.find("20,1.12461794939") != std::string::npos);
}

TEST_CASE("reruns with one seed are byte-identical") {
  fs::path cfg = write_config("sop_point.ini", kSopPoint);
  fs::path out1 = test_dir() / "r1.csv";
  fs::path out2 = test_dir() / "r2.csv";
  REQUIRE(run_cli({"sweep", "--config", cfg.string(), "--out", out1.string(),
                   "--seed", "42"}) == 0);
  REQUIRE(run_cli({"sweep", "--config", cfg.string(), "--out", out2.string(),
                   "--seed", "42"}) == 0);
  std::string a = slurp(out1);
  CHECK(a == slurp(out2));
  CHECK(a.find("mc_value") != std::string::npos);

  fs::path out3 = test_dir() / "r3.csv";
  REQUIRE(run_cli({"sweep", "--config", cfg.string(), "--out", out3.string(),
                   "--seed", "43"}) == 0);
  CHECK(a != slurp(out3));
}

TEST_CASE("json sweeps mirror the csv rows") {
  fs::path cfg = write_config("jsonsweep.ini", R"(
[main]
family = nakagami
m = 2

[eve]
family = nakagami
m = 2
avg_snr_db = 0

[constellation]
modulation_order = 16

[sweep]
points_db = 0, 20
outputs = asr, i_con
)");
  fs::path out = test_dir() / "sweep.json";
  REQUIRE(run_cli({"sweep", "--config", cfg.string(), "--out", out.string(),
                   "--format", "json"}) == 0);
  nlohmann::json doc = nlohmann::json::parse(slurp(out));
  REQUIRE(doc["groups"].size() == 1);
  REQUIRE(doc["groups"][0]["rows"].size() == 2);
  double a0 = doc["groups"][0]["rows"][0]["asr_bits"].get<double>();
  CHECK(std::fabs(a0 - 0.253921703780243) <= 1e-9);
  CHECK(doc["groups"][0]["rows"][1].contains("i_con_bits"));
}

TEST_CASE("single-point commands print the configured group") {
  fs::path cfg = write_config("point.ini", R"(
[main]
family = nakagami
m = 2
avg_snr_db = 20

[eve]
family = nakagami
m = 2
avg_snr_db = 0

[constellation]
modulation_order = 4

[sweep]
target_rate_bits = 1
)");
  fs::path out = test_dir() / "point.json";
  REQUIRE(run_cli({"asr", "--config", cfg.string(), "--out", out.string(),
                   "--format", "json"}) == 0);
  nlohmann::json doc = nlohmann::json::parse(slurp(out));
  REQUIRE(doc.size() == 1);
  CHECK(std::fabs(doc[0]["asr_bits"].get<double>() - 1.124617949394203) <=
        1e-9);
  double ident = doc[0]["i3_bits"].get<double>() -
                 doc[0]["i2_bits"].get<double>() -
                 doc[0]["i1_bits"].get<double>();
  CHECK(std::fabs(doc[0]["asr_bits"].get<double>() - ident) <= 1e-10);

  fs::path sout = test_dir() / "spoint.json";
  REQUIRE(run_cli({"sop", "--config", cfg.string(), "--out", sout.string(),
                   "--format", "json"}) == 0);
  nlohmann::json sdoc = nlohmann::json::parse(slurp(sout));
  CHECK(sdoc[0]["sop"].get<double>() > 0.0);
  CHECK(sdoc[0]["sop"].get<double>() < 1.0);
  CHECK(sdoc[0]["degenerate_threshold"].get<bool>() == false);

  fs::path aout = test_dir() / "apoint.json";
  REQUIRE(run_cli({"asymptote", "--config", cfg.string(), "--out",
                   aout.string(), "--format", "json"}) == 0);
  nlohmann::json adoc = nlohmann::json::parse(slurp(aout));
  CHECK(adoc[0]["g_d"].get<double>() == 2.0);
  CHECK(std::fabs(adoc[0]["g_a_asr"].get<double>() - 20.845091) <= 2e-4);
}

TEST_CASE("the mc command honors the metric switch") {
  fs::path cfg = write_config("mcpoint.ini", R"(
[main]
family = nakagami
m = 2
avg_snr_db = 10

[eve]
family = nakagami
m = 2
avg_snr_db = 0

[constellation]
modulation_order = 4

[sweep]
target_rate_bits = 1
)");
  fs::path out = test_dir() / "mc.json";
  REQUIRE(run_cli({"mc", "--config", cfg.string(), "--metric", "sop", "--out",
                   out.string(), "--format", "json", "--samples", "100000",
                   "--seed", "3"}) == 0);
  nlohmann::json doc = nlohmann::json::parse(slurp(out));
  CHECK(doc[0]["n_samples"].get<int>() == 100000);
  double v = doc[0]["value"].get<double>();
  CHECK(v > 0.0);
  CHECK(v < 1.0);
}

TEST_CASE("validate passes an honest config and fails a corrupted one") {
  fs::path cfg = write_config("validate.ini", kSopPoint);
  CHECK(run_cli({"validate", "--config", cfg.string(), "--samples",
                 "100000"}) == 0);
  CHECK(run_cli({"validate", "--config", cfg.string(), "--samples", "100000",
                 "--mc-rate-offset", "0.3"}) == 3);
  // Requests below the estimator floor are rounded up, not rejected.
  CHECK(run_cli({"validate", "--config", cfg.string(), "--samples",
                 "10000"}) == 0);
}

TEST_CASE("validate reports per-point z-scores") {
  fs::path cfg = write_config("vreport.ini", kSopPoint);
  SweepSpec spec = load_sweep_spec(cfg.string());
  CliOptions opts;
  opts.samples = 100000;
  ValidationReport report = validate(spec, opts);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.metric == "sop");
  CHECK(report.pass);
  CHECK(std::fabs(report.rows[0].z) <= 3.0);
  CHECK(report.rows[0].mc_stderr > 0.0);

  opts.mc_rate_offset = 0.3;
  ValidationReport bad = validate(spec, opts);
  CHECK_FALSE(bad.pass);
  CHECK(std::fabs(bad.rows[0].z) > 3.0);
}

TEST_CASE("config errors name the offending line") {
  fs::path cfg = write_config("badkey.ini", R"(
[main]
family = nakagami
m = 2
typo_key = 1

[eve]
family = nakagami
m = 2
avg_snr_db = 0

[constellation]
modulation_order = 4

[sweep]
points_db = 0
outputs = asr
)");
  CHECK_THROWS_WITH_AS(load_sweep_spec(cfg.string()),
                       doctest::Contains("badkey.ini:5"), ConfigError);
  CHECK(run_cli({"sweep", "--config", cfg.string(), "--out",
                 (test_dir() / "never.csv").string()}) == 1);
}

TEST_CASE("bad configs exit with code one and write nothing") {
  fs::path out = test_dir() / "untouched.csv";
  fs::remove(out);

  fs::path empty_pts = write_config("empty_pts.ini", R"(
[main]
family = nakagami
m = 2

[eve]
family = nakagami
m = 2
avg_snr_db = 0

[constellation]
modulation_order = 4

[sweep]
outputs = asr
)");
  CHECK(run_cli({"sweep", "--config", empty_pts.string(), "--out",
                 out.string()}) == 1);
  CHECK_FALSE(fs::exists(out));

  fs::path bad_family = write_config("badfam.ini", R"(
[main]
family = rician
avg_snr_db = 0
)");
  CHECK(run_cli({"asr", "--config", bad_family.string()}) == 1);

  CHECK(run_cli({"asr", "--config",
                 (test_dir() / "no_such_file.ini").string()}) == 1);
}

TEST_CASE("config validation covers the numeric fields") {
  auto rejects = [](const std::string& name, const std::string& body) {
    fs::path cfg = write_config(name, body);
    CHECK_THROWS_AS(load_sweep_spec(cfg.string()), ConfigError);
  };
  rejects("badorder.ini", R"(
[main]
family = nakagami
m = 2
[eve]
family = nakagami
m = 2
avg_snr_db = 0
[constellation]
modulation_order = 8
[sweep]
points_db = 0
outputs = asr
)");
  rejects("badpoints.ini", R"(
[main]
family = nakagami
m = 2
[eve]
family = nakagami
m = 2
avg_snr_db = 0
[constellation]
modulation_order = 4
[sweep]
points_db = 10, 5
outputs = asr
)");
  rejects("badoutput.ini", R"(
[main]
family = nakagami
m = 2
[eve]
family = nakagami
m = 2
avg_snr_db = 0
[constellation]
modulation_order = 4
[sweep]
points_db = 0
outputs = asr, bogus
)");
  rejects("badrate.ini", R"(
[main]
family = nakagami
m = 2
[eve]
family = nakagami
m = 2
avg_snr_db = 0
[constellation]
modulation_order = 4
[sweep]
points_db = 0
outputs = sop
target_rate_bits = -1
)");
  rejects("noeve.ini", R"(
[main]
family = nakagami
m = 2
[constellation]
modulation_order = 4
[sweep]
points_db = 0
outputs = asr
)");
  rejects("sop_needs_rate.ini", R"(
[main]
family = nakagami
m = 2
[eve]
family = nakagami
m = 2
avg_snr_db = 0
[constellation]
modulation_order = 4
[sweep]
points_db = 0
outputs = sop
)");
}

TEST_CASE("eavesdropper lists and extra sections multiply the groups") {
  fs::path cfg = write_config("multi_eve.ini", R"(
[main]
family = hoyt
q = 0.70710678118654752

[eve]
family = hoyt
q = 0.70710678118654752
avg_snr_db = -5, 0

[eve2]
family = nakagami
m = 6
avg_snr_db = 0

[constellation]
modulation_order = 4

[sweep]
points_db = 20
outputs = asr
)");
  SweepSpec spec = load_sweep_spec(cfg.string());
  REQUIRE(spec.groups.size() == 3);
  CHECK(spec.groups[0].eve.avg_snr_db == -5.0);
  CHECK(spec.groups[1].eve.avg_snr_db == 0.0);
  CHECK(spec.groups[2].eve.family == FadingFamily::Nakagami);

  fs::path out = test_dir() / "multi.csv";
  REQUIRE(run_cli({"sweep", "--config", cfg.string(), "--out", out.string()}) ==
          0);
  std::string text = slurp(out);
  CHECK(count_lines_starting(text, "# group:") == 3);
  CHECK(count_data_rows(text) == 3);
  // Anchored from the independent reference run.
  CHECK(text.find("20,1.61347391536") != std::string::npos);
  CHECK(text.find("20,1.18396828031") != std::string::npos);
}

TEST_CASE("custom mixture files plug into the sweep") {
  MixtureGamma base = from_nakagami(2.0, 1.0);
  fs::path mix = test_dir() / "nak2.mix";
  {
    std::ofstream out(mix);
    out << "avg_snr 1.0\n";
    char buf[96];
    for (const auto& comp : base.components) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", comp.alpha,
                    comp.beta, comp.zeta);
      out << buf;
    }
  }
  std::string body = R"(
[main]
family = custom
file = )" + mix.string() + R"(

[eve]
family = nakagami
m = 2
avg_snr_db = 0

[constellation]
modulation_order = 4

[sweep]
points_db = 20
outputs = asr
)";
  fs::path cfg = write_config("custom.ini", body);
  fs::path out = test_dir() / "custom.csv";
  REQUIRE(run_cli({"sweep", "--config", cfg.string(), "--out", out.string()}) ==
          0);
  // Behaves exactly like the built-in family it was exported from.
  CHECK(slurp(out).find("20,1.12461794939") != std::string::npos);

  // The same custom main cannot produce an asymptote column.
  std::string asym_body = body;
  asym_body.replace(asym_body.find("outputs = asr"), 13,
                    "outputs = asymptote");
  fs::path bad = write_config("custom_asym.ini", asym_body);
  CHECK(run_cli({"sweep", "--config", bad.string(), "--out",
                 (test_dir() / "never2.csv").string()}) == 1);
}

TEST_CASE("the command line rejects unknown usage") {
  CHECK(run_cli(std::vector<std::string>{}) == 1);
  CHECK(run_cli({"frobnicate"}) == 1);
  CHECK(run_cli({"sweep"}) == 1);  // --config and --out are required
  CHECK(run_cli({"--help"}) == 0);
}
