#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "gammaflow/harness.hpp"

using namespace gammaflow;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config validation rejects unknown keys and experiments") {
    CHECK_THROWS_AS(parse_config(json{{"experiment", "energy"}, {"bogus", 1}}), UsageError);
    CHECK_THROWS_AS(parse_config(json{{"experiment", "warp"}}), UsageError);
    ExperimentConfig cfg = parse_config(json{{"experiment", "selftest"}, {"seed", 7}});
    CHECK(cfg.experiment == "selftest");
    CHECK(cfg.seed == 7);
  }

  TEST_CASE("selftest table passes and matches the golden check list") {
    const auto results = run_selftest_table();
    std::string csv = "check,status\n";
    for (const auto& [name, ok] : results) {
      CHECK_MESSAGE(ok, name);
      csv += name + std::string(",") + (ok ? "pass" : "FAIL") + "\n";
    }
    CHECK(csv == fixtures().at("golden_selftest.csv"));
  }

  TEST_CASE("fixture currents round-trip through JSON bit-exactly") {
    json fx = json::parse(fixtures().at("dipole.json"));
    ZeroCurrent t = zero_current_from_json(fx);
    json out = current_to_json(t);
    ZeroCurrent t2 = zero_current_from_json(out);
    REQUIRE(t2.atoms.size() == t.atoms.size());
    for (std::size_t i = 0; i < t.atoms.size(); ++i) {
      CHECK(t.atoms[i].p == t2.atoms[i].p);
      CHECK(t.atoms[i].m == t2.atoms[i].m);
    }
  }

  TEST_CASE("decompose experiment reproduces the golden dipole ledger") {
    TempDir tmp("gammaflow_golden_test");
    ExperimentConfig cfg;
    cfg.experiment = "decompose";
    cfg.out_dir = tmp.path.string();
    cfg.params = {{"fixture", "dipole"}, {"n", 2}, {"p", 1.9}, {"alpha", 0.9}};
    run_experiment(cfg);
    const std::string ledger = read_text_file((tmp.path / "ledger.csv").string());
    CHECK(ledger == fixtures().at("golden_dipole_ledger.csv"));
  }

  TEST_CASE("manifest checksums match the written files") {
    TempDir tmp("gammaflow_manifest_test");
    ExperimentConfig cfg;
    cfg.experiment = "flatnorm";
    cfg.out_dir = tmp.path.string();
    cfg.params = {{"fixture", "dipole"}};
    run_experiment(cfg);
    json manifest = json::parse(read_text_file((tmp.path / "manifest.json").string()));
    for (auto it = manifest.at("checksums").begin(); it != manifest.at("checksums").end(); ++it)
      CHECK(it.value().get<std::string>() ==
            file_checksum((tmp.path / it.key()).string()));
  }

  TEST_CASE("identical config and seed give byte-identical outputs") {
    TempDir a("gammaflow_det_a"), b("gammaflow_det_b");
    for (const auto* dir : {&a, &b}) {
      ExperimentConfig cfg;
      cfg.experiment = "decompose";
      cfg.seed = 42;
      cfg.out_dir = dir->path.string();
      cfg.params = {{"fixture", "dipole"}, {"n", 2}, {"p", 1.9}, {"alpha", 0.9}};
      run_experiment(cfg);
    }
    for (const char* name : {"result.json", "ledger.csv"})
      CHECK(read_text_file((a.path / name).string()) ==
            read_text_file((b.path / name).string()));
  }

  TEST_CASE("fixtures write out and parse") {
    TempDir tmp("gammaflow_fixture_test");
    write_fixtures(tmp.path.string());
    for (const auto& [name, content] : fixtures()) {
      CHECK(fs::exists(tmp.path / name));
      CHECK(read_text_file((tmp.path / name).string()) == content);
    }
  }
}
