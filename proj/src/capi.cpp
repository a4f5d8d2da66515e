#include "outerdim/outerdim.h"

#include <new>
#include <string>

#include "outerdim/commands.hpp"

struct od_run {
  std::string report;
  std::string csv;
  std::string error;
};

namespace {

std::string joined_keys(const outerdim::CommandSpec& s) {
  std::string out;
  for (const auto& k : s.keys) out += (out.empty() ? "" : ",") + k;
  return out;
}

}  // namespace

extern "C" {

const char* od_version(void) { return OUTERDIM_VERSION; }

int od_command_count(void) { return static_cast<int>(outerdim::command_specs().size()); }

const char* od_command_name(int index) {
  const auto& specs = outerdim::command_specs();
  if (index < 0 || index >= static_cast<int>(specs.size())) return nullptr;
  return specs[static_cast<std::size_t>(index)].name.c_str();
}

const char* od_command_keys(const char* command) {
  static thread_local std::string buf;
  if (!command) return nullptr;
  const auto* s = outerdim::find_command(command);
  if (!s) return nullptr;
  buf = joined_keys(*s);
  return buf.c_str();
}

const char* od_usage(void) {
  static const std::string text = outerdim::usage_text();
  return text.c_str();
}

od_run* od_run_new(void) { return new (std::nothrow) od_run(); }

void od_run_free(od_run* run) { delete run; }

od_status od_run_execute(od_run* run, const char* command, const char* config_json) {
  if (!run) return OD_INVALID_HANDLE;
  run->report.clear();
  run->csv.clear();
  run->error.clear();
  try {
    outerdim::Json cfg = outerdim::Json::object();
    if (config_json && *config_json) {
      try {
        cfg = outerdim::Json::parse(config_json);
      } catch (const std::exception& e) {
        run->error = std::string("config is not valid JSON: ") + e.what();
        outerdim::Json rep;
        rep["command"] = command ? command : "";
        rep["status"] = "usage_error";
        rep["exit_code"] = 2;
        rep["error"] = {{"code", "Usage"}, {"message", run->error}};
        run->report = rep.dump(2) + "\n";
        return OD_USAGE;
      }
    }
    outerdim::CommandResult r = outerdim::run_command(command ? command : "", cfg);
    run->report = r.report.dump(2) + "\n";
    run->csv = std::move(r.csv);
    if (r.report.contains("error") && r.report["error"].is_object()) run->error = r.report["error"].value("message", std::string());
    return static_cast<od_status>(r.exit_code);
  } catch (const std::exception& e) {
    run->error = e.what();
    return OD_INTERNAL;
  }
}

const char* od_run_report(const od_run* run) { return run ? run->report.c_str() : nullptr; }
const char* od_run_csv(const od_run* run) { return run ? run->csv.c_str() : nullptr; }
const char* od_run_error(const od_run* run) { return run ? run->error.c_str() : nullptr; }

}  // extern "C"
