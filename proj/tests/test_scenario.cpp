#include <cstdio>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <string>

#include "steinlab/scenario.hpp"

using namespace steinlab;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& stem, const std::string& text) {
  fs::path p = fs::temp_directory_path() / stem;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p.string();
}

const char* kMini = R"({
  "schema_version": 1,
  "name": "mini-a",
  "seed": 9,
  "eps": 0.2,
  "n_max": 3,
  "null_family": {"kind": "simple_iid", "alphabet": 2, "p": [0.8, 0.2]},
  "alt_family": {"kind": "simple_iid", "alphabet": 2, "p": [0.4, 0.6]},
  "checks": ["f-aux-identities", "type-counting", "blur-constants"],
  "params": {"samples": 12}
})";

}  // namespace

TEST_CASE("check registry") {
  const std::vector<CheckInfo>& reg = check_registry();
  CHECK(reg.size() >= 12);
  std::set<std::string> ids;
  for (const CheckInfo& info : reg) {
    CHECK_FALSE(info.id.empty());
    CHECK_FALSE(info.description.empty());
    CHECK(ids.insert(info.id).second);
  }
  CHECK(ids.count("duality-sandwich") == 1);
  CHECK(ids.count("definetti-type-bound") == 1);
  CHECK(ids.count("stein-rates") == 1);
}

TEST_CASE("scenario parsing") {
  Scenario sc = parse_scenario_json(kMini);
  CHECK(sc.schema_version == 1);
  CHECK(sc.name == "mini-a");
  CHECK(sc.seed == 9);
  CHECK(sc.eps == doctest::Approx(0.2));
  CHECK(sc.n_max == 3);
  CHECK(sc.null_family.kind == FamilyKind::simple_iid);
  CHECK(sc.checks.size() == 3);
  CHECK(sc.params.at("samples") == doctest::Approx(12.0));
  CHECK_FALSE(sc.has_log_base);

  Scenario defaults = parse_scenario_json(R"({
    "schema_version": 1, "name": "d_1",
    "null_family": {"kind": "werner_gamma", "gamma": 2.5},
    "alt_family": {"kind": "arbitrarily_varying", "alphabet": 2,
                   "base": [[0.5, 0.5], [0.9, 0.1]]},
    "checks": ["werner-gap"]})");
  CHECK(defaults.seed == 1);
  CHECK(defaults.eps == doctest::Approx(0.1));
  CHECK(defaults.n_max == 4);
  CHECK(defaults.null_family.kind == FamilyKind::werner_gamma);
  CHECK(defaults.null_family.gamma == doctest::Approx(2.5));
  CHECK(defaults.alt_family.base.size() == 2);

  Scenario rest = parse_scenario_json(R"({
    "schema_version": 1, "name": "rest", "log_base": "e",
    "null_family": {"kind": "almost_iid", "alphabet": 2, "p": [0.6, 0.4],
                    "phi": {"kind": "constant", "value": 1}},
    "alt_family": {"kind": "explicit_levels", "alphabet": 2,
                   "levels": {"1": [[0.5, 0.5]], "2": [[0.25, 0.25, 0.25, 0.25]]}},
    "checks": ["type-counting"]})");
  CHECK(rest.has_log_base);
  CHECK(rest.log_base == LogBase::e);
  CHECK(rest.null_family.kind == FamilyKind::almost_iid);
  CHECK(rest.null_family.phi(4) == 1);
  CHECK(rest.alt_family.kind == FamilyKind::explicit_levels);
  CHECK(rest.alt_family.levels.at(2).size() == 1);

  Scenario base2 = parse_scenario_json(R"({
    "schema_version": 1, "name": "b2", "log_base": 2,
    "null_family": {"kind": "composite_iid", "alphabet": 2,
                    "base": [[0.7, 0.3]]},
    "alt_family": {"kind": "simple_iid", "alphabet": 2, "p": [0.5, 0.5]},
    "checks": ["sanov-type-bound"]})");
  CHECK(base2.has_log_base);
  CHECK(base2.log_base == LogBase::two);
}

TEST_CASE("scenario parse failures") {
  auto reject = [](const std::string& text) {
    CHECK_THROWS_AS(parse_scenario_json(text), DomainError);
  };
  auto with = [](const std::string& patch) {
    return std::string(R"({"schema_version": 1, "name": "ok",
      "null_family": {"kind": "simple_iid", "alphabet": 2, "p": [0.8, 0.2]},
      "alt_family": {"kind": "simple_iid", "alphabet": 2, "p": [0.4, 0.6]},
      "checks": ["type-counting"])") +
           patch + "}";
  };

  reject("{ not json");
  reject(with(", \"schema_version\": 2"));
  reject(with(", \"name\": \"bad name!\""));
  reject(with(", \"name\": \"\""));
  reject(with(", \"eps\": 0.0"));
  reject(with(", \"eps\": 1.2"));
  reject(with(", \"n_max\": 0"));
  reject(with(", \"n_max\": 33"));
  reject(with(", \"log_base\": \"10\""));
  reject(with(", \"checks\": []"));
  reject(with(", \"checks\": [\"no-such-check\"]"));
  reject(with(", \"checks\": [\"type-counting\", \"type-counting\"]"));
  reject(with(", \"params\": {\"samples\": \"ten\"}"));
  reject(with(", \"alt_family\": {\"kind\": \"mystery\"}"));
  reject(with(", \"alt_family\": {\"kind\": \"werner_gamma\", \"gamma\": 0.5}"));
  reject(with(
      ", \"null_family\": {\"kind\": \"almost_iid\", \"alphabet\": 2, \"p\": [0.6, 0.4], "
      "\"phi\": {\"kind\": \"cubic\"}}"));
  reject(with(
      ", \"alt_family\": {\"kind\": \"explicit_levels\", \"alphabet\": 2, \"levels\": "
      "{\"zero\": [[0.5, 0.5]]}}"));
  reject("");
}

TEST_CASE("scenario run is ordered and parallelism invariant") {
  Scenario sc = parse_scenario_json(kMini);
  Report serial = run_scenario(sc, 1);
  CHECK(serial.scenario_name == "mini-a");
  CHECK(serial.seed == 9);
  REQUIRE(serial.outcomes.size() == 3);
  CHECK(serial.outcomes[0].check == "f-aux-identities");
  CHECK(serial.outcomes[1].check == "type-counting");
  CHECK(serial.outcomes[2].check == "blur-constants");
  CHECK(serial.all_hard_pass());
  CHECK_FALSE(serial.any_capacity());
  for (const CheckOutcome& o : serial.outcomes) CHECK(o.runtime_seconds >= 0.0);

  Report parallel = run_scenario(sc, 4);
  REQUIRE(parallel.outcomes.size() == serial.outcomes.size());
  for (std::size_t i = 0; i < serial.outcomes.size(); ++i) {
    CHECK(parallel.outcomes[i].check == serial.outcomes[i].check);
    CHECK(parallel.outcomes[i].pass == serial.outcomes[i].pass);
    CHECK(parallel.outcomes[i].margin == serial.outcomes[i].margin);
    CHECK(parallel.outcomes[i].note == serial.outcomes[i].note);
  }
  REQUIRE(parallel.tables.size() == serial.tables.size());
  for (std::size_t i = 0; i < serial.tables.size(); ++i) {
    CHECK(parallel.tables[i].name == serial.tables[i].name);
    CHECK(parallel.tables[i].rows == serial.tables[i].rows);
  }
}

TEST_CASE("file runner writes a stable bundle") {
  std::string cfg = write_temp("steinlab-mini.json", kMini);
  fs::path out = fs::temp_directory_path() / "steinlab-mini-out";
  fs::remove_all(out);
  int code = run_scenario_files(cfg, out.string(), 2, false, 0);
  CHECK(code == 0);

  fs::path summary = out / "mini-a-summary.json";
  REQUIRE(fs::exists(summary));
  std::ifstream in(summary);
  nlohmann::json js = nlohmann::json::parse(in);
  CHECK(js.at("scenario") == "mini-a");
  CHECK(js.at("seed") == 9);
  CHECK(js.at("all_hard_pass") == true);
  CHECK(js.at("checks").size() == 3);
  CHECK(js.contains("runtimes_seconds"));
  for (const auto& rel : js.at("tables"))
    CHECK(fs::exists(out / rel.get<std::string>()));
  fs::remove_all(out);
  fs::remove(cfg);
}

TEST_CASE("file runner reports config errors without writing") {
  std::string cfg = write_temp("steinlab-broken.json", "{ definitely not json");
  fs::path out = fs::temp_directory_path() / "steinlab-broken-out";
  fs::remove_all(out);
  int code = run_scenario_files(cfg, out.string(), 1, false, 0);
  CHECK(code == 2);
  CHECK((!fs::exists(out) || fs::is_empty(out)));

  int missing = run_scenario_files("/nonexistent/steinlab.json", out.string(), 1, false, 0);
  CHECK(missing == 2);
  fs::remove_all(out);
  fs::remove(cfg);
}
