#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "outerdim/outerdim.h"

namespace {

using Json = nlohmann::ordered_json;

struct RunDeleter {
  void operator()(od_run* r) const { od_run_free(r); }
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(part);
  return out;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fputs(od_usage(), stderr);
    return OD_USAGE;
  }

  CLI::App app{"outer dimension constructions and certificates"};
  app.require_subcommand(1);
  std::string config_path, out_path, csv_path;
  app.add_option("--config", config_path, "JSON config file; flags override its keys");
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--csv", csv_path, "write the CSV artifact here");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (int i = 0; i < od_command_count(); ++i) {
    const std::string name = od_command_name(i);
    CLI::App* sub = app.add_subcommand(name);
    sub->fallthrough();
    for (const auto& key : split(od_command_keys(name.c_str()))) sub->add_option("--" + key, values[name][key]);
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::fputs(od_usage(), stderr);
    return OD_USAGE;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  Json config = Json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    try {
      config = Json::parse(in);
    } catch (const std::exception& e) {
      std::cerr << "cannot read config " << config_path << ": " << e.what() << "\n";
      return OD_USAGE;
    }
  }
  for (const auto& key : split(od_command_keys(command.c_str())))
    if (subs[command]->count("--" + key) > 0) config[key] = values[command][key];

  std::unique_ptr<od_run, RunDeleter> run(od_run_new());
  const od_status st = od_run_execute(run.get(), command.c_str(), config.dump().c_str());
  if (st == OD_INVALID_HANDLE || st == OD_INTERNAL) {
    std::cerr << "internal error: " << od_run_error(run.get()) << "\n";
    return OD_VERIFICATION_FAILED;
  }
  const std::string report = od_run_report(run.get());
  if (out_path.empty()) {
    std::fwrite(report.data(), 1, report.size(), stdout);
  } else if (!write_file(out_path, report)) {
    std::cerr << "cannot write " << out_path << "\n";
    return OD_USAGE;
  }
  if (!csv_path.empty() && !write_file(csv_path, od_run_csv(run.get()))) {
    std::cerr << "cannot write " << csv_path << "\n";
    return OD_USAGE;
  }
  if (st == OD_USAGE) std::cerr << od_run_error(run.get()) << "\n";
  return st;
}
