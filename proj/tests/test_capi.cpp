#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <string>

#include "outerdim/outerdim.h"

using nlohmann::json;

TEST_SUITE("capi") {
  TEST_CASE("version and command table") {
    CHECK(std::string(od_version()).size() > 0);
    CHECK(od_command_count() == 12);
    for (int i = 0; i < od_command_count(); ++i) {
      const char* name = od_command_name(i);
      REQUIRE(name != nullptr);
      const char* keys = od_command_keys(name);
      REQUIRE(keys != nullptr);
      CHECK(std::string(keys).find("seed") != std::string::npos);
    }
    CHECK(od_command_name(-1) == nullptr);
    CHECK(od_command_name(12) == nullptr);
    CHECK(od_command_keys("nope") == nullptr);
    CHECK(std::string(od_usage()).find("cantor") != std::string::npos);
  }

  TEST_CASE("run lifecycle") {
    od_run* run = od_run_new();
    REQUIRE(run != nullptr);
    CHECK(od_run_execute(run, "cantor", R"({"k": "2", "depth": 3})") == OD_OK);
    const json report = json::parse(od_run_report(run));
    CHECK(report["command"] == "cantor");
    CHECK(report["exit_code"] == 0);
    CHECK(std::string(od_run_csv(run)).rfind("address,lo,hi,gap", 0) == 0);
    CHECK(std::string(od_run_error(run)).empty());

    CHECK(od_run_execute(run, "cantor", R"({"k": "1"})") == OD_INFEASIBLE);
    CHECK(std::string(od_run_error(run)).size() > 0);
    CHECK(od_run_execute(run, "cantor", "{not json") == OD_USAGE);
    CHECK(json::parse(od_run_report(run))["exit_code"] == 2);
    CHECK(od_run_execute(run, "nope", nullptr) == OD_USAGE);
    CHECK(od_run_execute(run, nullptr, nullptr) == OD_USAGE);
    od_run_free(run);
    od_run_free(nullptr);
  }

  TEST_CASE("null handles") {
    CHECK(od_run_execute(nullptr, "cantor", "{}") == OD_INVALID_HANDLE);
    CHECK(od_run_report(nullptr) == nullptr);
    CHECK(od_run_csv(nullptr) == nullptr);
    CHECK(od_run_error(nullptr) == nullptr);
  }

  TEST_CASE("identical runs give identical reports") {
    od_run* a = od_run_new();
    od_run* b = od_run_new();
    const char* cfg = R"({"pieces": 3, "depth": 3, "seed": 11})";
    CHECK(od_run_execute(a, "glue", cfg) == OD_OK);
    CHECK(od_run_execute(b, "glue", cfg) == OD_OK);
    CHECK(std::string(od_run_report(a)) == std::string(od_run_report(b)));
    CHECK(od_run_execute(b, "glue", R"({"pieces": 3, "depth": 3, "seed": 12})") == OD_OK);
    CHECK(std::string(od_run_report(a)) != std::string(od_run_report(b)));
    od_run_free(a);
    od_run_free(b);
  }
}
