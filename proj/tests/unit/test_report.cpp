#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "biconf/errors.hpp"
#include "biconf/report.hpp"

using namespace biconf;
using nlohmann::json;

namespace {

RunConfig config(const std::string& scenario, int samples = 8) {
  RunConfig c;
  c.scenario = scenario;
  c.samples = samples;
  return c;
}

const IdentitySummary& find(const RunReport& r, const std::string& name) {
  for (const auto& s : r.identities) {
    if (s.name == name) return s;
  }
  throw std::runtime_error("missing identity " + name);
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(config("flat-projection-4-2").validate());
  RunConfig c = config("flat-projection-4-2");
  c.samples = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config("flat-projection-4-2");
  c.tol_fd = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config("flat-projection-4-2");
  c.special_sigma = "2";
  c.rho = "2";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config("flat-projection-4-2");
  c.identities = {"no-such-identity"};
  CHECK_THROWS_AS(c.validate(), ConfigError);

  CHECK(parse_format("csv") == ReportFormat::kCsv);
  CHECK(to_string(parse_format("text")) == "text");
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("special change on the flat projection passes") {
  RunConfig c = config("flat-projection-4-2");
  c.special_sigma = "1 + 0.25*sin(x1)";
  const RunReport r = run_verification(c);
  CHECK(r.flags_confirmed());
  CHECK(r.exit_code() == 0);
  for (const auto& s : r.identities) {
    CAPTURE(s.name);
    CHECK(!s.failed());
  }
  CHECK(find(r, "tension-transform").count(SampleStatus::kPass) == 8);
}

TEST_CASE("negative control confirms its flags") {
  const RunReport r = run_verification(config("nonphwc-anisotropic"));
  CHECK(r.exit_code() == 0);
  bool seen = false;
  for (const FlagCheck& f : r.flags) {
    if (f.flag != "phwc") continue;
    seen = true;
    CHECK(f.expected == std::optional<bool>(false));
    CHECK(!f.observed);
    CHECK(std::abs(f.max_value - 3.0 * std::sqrt(2.0)) < 1e-9);
  }
  CHECK(seen);
}

TEST_CASE("non-positive sigma marks samples as errored") {
  RunConfig c = config("flat-projection-4-2", 40);
  c.special_sigma = "log(x1)";
  const RunReport r = run_verification(c);
  const IdentitySummary& t = find(r, "tension-transform");
  CHECK(t.count(SampleStatus::kError) > 0);
  CHECK(t.count(SampleStatus::kPass) > 0);
  CHECK(t.count(SampleStatus::kFail) == 0);
  CHECK(r.exit_code() == 0);
  bool named = false;
  for (const auto& rec : t.records) {
    if (rec.status == SampleStatus::kError) named |= rec.message.find("sigma") != std::string::npos;
  }
  CHECK(named);
}

TEST_CASE("identity selection") {
  RunConfig c = config("flat-projection-6-4");
  c.identities = {"koszul-horizontal", "mean-curvature"};
  const RunReport r = run_verification(c);
  REQUIRE(r.identities.size() == 2);
  CHECK(r.identities[0].name == "koszul-horizontal");
  CHECK(r.identities[1].name == "mean-curvature");
}

TEST_CASE("json schema and determinism") {
  RunConfig c = config("warped-projection-4-2");
  c.sigma = "1 + 0.1*x1";
  c.rho = "exp(0.2*x3)";
  const std::string a = render_json(run_verification(c));
  const std::string b = render_json(run_verification(c));
  CHECK(a == b);
  const json j = json::parse(a);
  CHECK(j["schema_version"] == 1);
  CHECK(j["scenario"] == "warped-projection-4-2");
  CHECK(j["config"]["samples"] == 8);
  CHECK(j["config"]["seed"] == 42);
  REQUIRE(j["per_identity"].is_array());
  for (const json& s : j["per_identity"]) {
    for (const char* key : {"name", "samples_pass", "samples_fail", "samples_error",
                            "max_abs_residual", "max_rel_residual", "worst_point"}) {
      CAPTURE(key);
      CHECK(s.contains(key));
    }
  }
  CHECK(j.contains("flags_confirmed"));
  CHECK(j["verdict"] == "pass");
}

TEST_CASE("csv and text renderings") {
  RunConfig c = config("flat-projection-4-2", 3);
  c.identities = {"tension-transform"};
  const RunReport r = run_verification(c);
  std::istringstream csv(render_csv(r));
  std::string line;
  int rows = 0;
  std::getline(csv, line);
  CHECK(line.find("identity") != std::string::npos);
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == static_cast<int>(r.identities[0].records.size()));
  CHECK(render_text(r).find("tension-transform") != std::string::npos);
}

TEST_CASE("listing") {
  const std::string text = list_text();
  CHECK(text.find("flat-projection-4-2 (m=4, 2n=2)") != std::string::npos);
  CHECK(text.find("flat-projection-4-2") < text.find("nonphwc-anisotropic"));
  const json j = json::parse(list_json());
  REQUIRE(j.is_array());
  CHECK(j[0].contains("name"));
}

TEST_CASE("verify exit codes") {
  std::ostringstream out, err;
  CHECK(cmd_verify(config("unknown-name"), out, err) == 2);
  CHECK(err.str().find("unknown-name") != std::string::npos);

  RunConfig bad = config("flat-projection-4-2");
  bad.special_sigma = "1 + (";
  CHECK(cmd_verify(bad, out, err) == 2);

  RunConfig wide = config("flat-projection-4-2");
  wide.sigma = "x9";
  CHECK(cmd_verify(wide, out, err) == 2);

  // Finite-difference residuals sit near 1e-12, far above this tolerance.
  RunConfig fail = config("warped-projection-4-2", 4);
  fail.sigma = "1 + 0.1*x1";
  fail.identities = {"koszul-horizontal"};
  fail.tol_fd = 1e-30;
  CHECK(cmd_verify(fail, out, err) == 1);
}

TEST_CASE("reports are written atomically") {
  const auto dir = std::filesystem::temp_directory_path() / "biconf-report-test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "r.json";
  write_atomic(path.string(), "{}\n");
  std::ifstream in(path);
  std::string body((std::istreambuf_iterator<char>(in)), {});
  CHECK(body == "{}\n");
  CHECK(!std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir);

  RunConfig c = config("flat-projection-4-2", 2);
  c.report_path = "/nonexistent-dir/r.json";
  std::ostringstream out, err;
  CHECK(cmd_verify(c, out, err) == 2);
}
