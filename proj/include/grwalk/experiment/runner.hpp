#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "grwalk/experiment/config.hpp"
#include "grwalk/experiment/scenarios.hpp"

#ifndef GRWALK_VERSION
#define GRWALK_VERSION "0.1.0"
#endif

namespace grwalk::experiment {

inline constexpr const char* kVersion = GRWALK_VERSION;

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kCheckFailed = 3 };

struct Preset {
  std::string name;
  std::string summary;
  std::string text;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"moore-s3", "rate tests for S3 under its trivial, sign and standard representations", R"(
scenario = moore
seed = 20240601
group = S3
rep = trivial, sign, standard
u = e1
v = e1
atom = e 1/3
atom = (12) 1/3
atom = (23) 1/3
horizon = 10000
paths = 500
rates = power:0.25, power:0.5, log, geometric:0.99
growth_threshold = 2.0
saturation_threshold = 0.95
)"},
      {"moore-q8", "rate tests for the quaternion group in its 2-dimensional representation", R"(
scenario = moore
seed = 20240602
group = Q8
rep = quaternion
u = e1
v = e1
atom = 1 1/3
atom = i 1/3
atom = j 1/3
horizon = 10000
paths = 500
rates = power:0.25, power:0.5, log, geometric:0.99
growth_threshold = 2.0
saturation_threshold = 0.95
)"},
      {"kawada-ito-s3", "exact total variation to Haar measure on S3", R"(
scenario = kawada-ito
seed = 1
group = S3
atom = e 1/3
atom = (12) 1/3
atom = (23) 1/3
nmax = 200
converged_by = 100
tolerance = 1e-6
limsup_floor = 0.4
)"},
      {"mean-coefficient-s3", "exact mean coefficient against the Haar average on S3", R"(
scenario = mean-coefficient
seed = 1
group = S3
rep = standard
u = e1
v = e1
atom = e 1/3
atom = (12) 1/3
atom = (23) 1/3
nmax = 100
tolerance = 1e-6
)"},
      {"quotient-lemma", "path-wise equality of coefficients under S3 and S3/A3", R"(
scenario = quotient
seed = 7
group = S3
rep = sign
normal = e, (123), (132)
u = e1
v = e1
atom = e 1/3
atom = (12) 1/3
atom = (23) 1/3
horizon = 1000
paths = 100
)"},
      {"affine-folner", "Folner defects for the affine group over Q_2", R"(
scenario = affine-folner
seed = 1
prime = 2
unit_depth = 3
n = 3, 7, 15, 31
translation = 1
translation = 1/2
translation = 1/4
scale = 2
scale = 1/2
overflow = strict
tolerance = 1e-9
decay_ratio = 0.6
)"},
      {"regular-z", "decay of <R(mu^n) f, f> for the lazy walk on Z", R"(
scenario = regular-z
seed = 1
atom = -1 1/4
atom = 0 1/2
atom = 1 1/4
f = 1
f_offset = 0
nmax = 8000
check_n = 1000, 2000
ratio_tolerance = 0.05
)"},
  };
  return all;
}

inline const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

inline const std::map<std::string, std::vector<std::string>>& scenario_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"moore", {"group", "rep", "u", "v", "atom", "horizon", "paths", "rates", "growth_threshold",
                 "saturation_threshold", "threads"}},
      {"kawada-ito", {"group", "atom", "nmax", "converged_by", "tolerance", "limsup_floor"}},
      {"mean-coefficient", {"group", "rep", "u", "v", "atom", "nmax", "tolerance"}},
      {"quotient", {"group", "rep", "normal", "u", "v", "atom", "horizon", "paths"}},
      {"affine-folner", {"prime", "unit_depth", "n", "translation", "scale", "overflow", "window_margin",
                         "tolerance", "scale_tolerance", "decay_ratio"}},
      {"regular-z", {"atom", "f", "f_offset", "nmax", "check_n", "ratio_tolerance"}},
  };
  return keys;
}

/// Preset text (if `preset` names one) overlaid with the user's config.
inline Config resolve_config(const std::string& preset, const Config& user) {
  Config base;
  if (!preset.empty()) {
    const Preset* p = find_preset(preset);
    if (!p) throw UsageError("unknown preset '" + preset + "'");
    base = Config::parse_text(p->text, "preset:" + preset);
  }
  Config c = base.overlay(user);
  const std::string scenario = c.get("scenario");
  const auto it = scenario_keys().find(scenario);
  if (it == scenario_keys().end()) throw UsageError("unknown scenario '" + scenario + "'");
  auto allowed = it->second;
  for (const char* k : {"scenario", "seed", "preset", "output_dir"}) allowed.emplace_back(k);
  c.require_known(allowed);
  c.get_seed();
  return c;
}

inline ScenarioResult run_scenario(const Config& c) {
  const std::string s = c.get("scenario");
  if (s == "moore") return run_moore(c);
  if (s == "kawada-ito") return run_kawada_ito(c);
  if (s == "mean-coefficient") return run_mean_coefficient(c);
  if (s == "quotient") return run_quotient(c);
  if (s == "affine-folner") return run_affine_folner(c);
  if (s == "regular-z") return run_regular_z(c);
  throw UsageError("unknown scenario '" + s + "'");
}

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json config_json(const Config& c) {
  json out = json::object();
  for (const auto& [k, v] : c.values()) out[k] = v;
  for (const auto& [k, v] : c.lists()) out[k] = v;
  return out;
}

/// Writes manifest.json, curves.csv, ratios.csv and verdict.json into `dir`.
inline void write_artifacts(const std::filesystem::path& dir, const std::string& preset, const Config& c,
                            const ScenarioResult& r) {
  std::filesystem::create_directories(dir);
  const std::string seed = c.get("seed");
  const std::string label = preset.empty() ? "custom" : preset;
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw UsageError("cannot write " + (dir / name).string());
    return out;
  };

  json manifest = {{"tool", "grwalk"},
                   {"version", kVersion},
                   {"preset", label},
                   {"seed", seed},
                   {"scenario", c.get("scenario")},
                   {"config", config_json(c)},
                   {"modules",
                    {{"local-field", kVersion},
                     {"group-core", kVersion},
                     {"measure", kVersion},
                     {"representation", kVersion},
                     {"walk-engine", kVersion},
                     {"mixing-analysis", kVersion},
                     {"experiment-cli", kVersion}}}};
  open("manifest.json") << manifest.dump(2) << "\n";

  auto curves = open("curves.csv");
  curves << "# grwalk " << kVersion << " preset=" << label << " seed=" << seed << "\n";
  curves << "series,n,value\n";
  for (const auto& row : r.curves) curves << row.series << "," << row.n << "," << format_number(row.value) << "\n";

  auto ratios = open("ratios.csv");
  ratios << "series,path,checkpoint,maxRatio\n";
  for (const auto& row : r.ratios) {
    ratios << row.series << "," << row.path << "," << row.checkpoint << "," << format_number(row.max_ratio) << "\n";
  }

  json verdict = {{"preset", label},
                  {"seed", seed},
                  {"version", kVersion},
                  {"thresholds", r.thresholds},
                  {"results", r.results},
                  {"passed", r.passed}};
  open("verdict.json") << verdict.dump(2) << "\n";
}

/// GRWALK_OUTPUT_DIR, then the output_dir key, then grwalk-out/<preset>.
inline std::filesystem::path output_directory(const std::string& preset, const Config& c) {
  if (const char* env = std::getenv("GRWALK_OUTPUT_DIR"); env && *env) return env;
  if (c.has("output_dir")) return c.get("output_dir");
  return std::filesystem::path("grwalk-out") / (preset.empty() ? "custom" : preset);
}

inline int exit_code_for(const ScenarioResult& r) {
  if (r.leaked_mass > 1e-9) return kNumerical;
  return r.passed ? kOk : kCheckFailed;
}

inline Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  return Config::parse(in, path);
}

/**
 * Shared driver for `run` and `check`. Errors are reported on `err` and
 * mapped to exit codes: 1 usage, 2 numerical, 3 failed check.
 */
inline int execute(const std::string& preset, const std::string& config_path, bool write, std::ostream& out,
                   std::ostream& err) {
  try {
    const Config user = config_path.empty() ? Config{} : load_config_file(config_path);
    std::string name = preset;
    if (name.empty() && user.has("preset")) name = user.get("preset");
    const Config c = resolve_config(name, user);
    const ScenarioResult r = run_scenario(c);
    const int code = exit_code_for(r);
    if (write) {
      const auto dir = output_directory(name, c);
      write_artifacts(dir, name, c, r);
      out << "wrote " << dir.string() << "\n";
    }
    out << (name.empty() ? c.get("scenario") : name) << ": " << (code == kOk ? "PASS" : "FAIL") << "\n";
    if (r.leaked_mass > 1e-9) err << "window leak " << format_number(r.leaked_mass) << " exceeds 1e-9\n";
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  }
}

/// `target` is a preset name or a path to a config file (which may name a preset to extend).
inline int run_command(const std::string& target, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  if (find_preset(target)) return execute(target, "", true, out, err);
  return execute("", target, true, out, err);
}

/// `target` is a preset name or a path to a config file.
inline int check_command(const std::string& target, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  if (find_preset(target)) return execute(target, "", false, out, err);
  return execute("", target, false, out, err);
}

}  // namespace grwalk::experiment
