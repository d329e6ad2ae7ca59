#include "starkbeat/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "starkbeat/crossing.hpp"
#include "starkbeat/kernel.hpp"
#include "starkbeat/output.hpp"
#include "starkbeat/solver.hpp"
#include "starkbeat/survival.hpp"

namespace starkbeat::cli {
namespace {

using nlohmann::json;

struct Log {
  std::ostream* err;
  int level = 0;  // 0 error, 1 info, 2 debug

  static int level_from_env() {
    const char* v = std::getenv("RESONANCE_LOG");
    if (!v) return 0;
    std::string s(v);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
  }
  void info(const std::string& m) const {
    if (level >= 1) *err << "[info] " << m << "\n";
  }
  void debug(const std::string& m) const {
    if (level >= 2) *err << "[debug] " << m << "\n";
  }
};

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  bool as_json = false;
  int jobs = 1;
};

config::RunConfig resolve_config(const CommonArgs& a) {
  config::RunConfig cfg = config::load_file(a.config_path);
  for (const auto& s : a.overrides) config::apply_override(cfg, s);
  if (!a.out_path.empty()) cfg.output.path = a.out_path;
  if (a.as_json) cfg.output.format = "json";
  cfg.validate();
  return cfg;
}

json config_json(const config::RunConfig& cfg) {
  json model = {{"alpha1", cfg.model.alpha1}, {"alpha2", cfg.model.alpha2},
                {"x1", cfg.model.x1},         {"x2", cfg.model.x2},
                {"F", cfg.model.field}};
  json state = {{"center", cfg.state.center}, {"sigma", cfg.state.sigma}};
  json time = {{"t_min", cfg.time.t_min},
               {"t_max", cfg.time.t_max},
               {"t_points", cfg.time.t_points},
               {"spacing", cfg.time.log_spacing ? "log" : "linear"}};
  json out = {{"format", cfg.output.format},
              {"precision", cfg.output.precision}};
  if (!cfg.output.path.empty()) out["path"] = cfg.output.path;
  json j = {{"model", model}, {"state", state}, {"time", time}, {"output", out}};
  if (cfg.sweep.present)
    j["sweep"] = {{"f_min", cfg.sweep.f_min},
                  {"f_max", cfg.sweep.f_max},
                  {"f_steps", cfg.sweep.f_steps}};
  return j;
}

json result_envelope(const std::string& command,
                     const config::RunConfig& cfg) {
  return {{"version", output::kVersion},
          {"command", command},
          {"config", config_json(cfg)}};
}

// destination stream: configured path or the CLI stream
struct Sink {
  std::ostream* stream;
  std::unique_ptr<std::ofstream> file;
};

Sink open_sink(const config::RunConfig& cfg, std::ostream& fallback) {
  Sink s{&fallback, nullptr};
  if (!cfg.output.path.empty()) {
    s.file = std::make_unique<std::ofstream>(cfg.output.path);
    if (!*s.file)
      throw Error(ErrorCode::bad_config,
                  "cannot open output file '" + cfg.output.path + "'");
    s.stream = s.file.get();
  }
  return s;
}

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

// ------------------------------------------------------------ resonances

int cmd_resonances(const config::RunConfig& cfg, std::ostream& out,
                   const Log& log) {
  log.info("solving the resonance pair at F = " +
           output::format_double(cfg.model.field, 6));
  auto pair = solver::find_pair(cfg.model);
  double r1 = std::abs(kernel::d_function(cfg.model, pair.first.energy));
  double r2 = std::abs(kernel::d_function(cfg.model, pair.second.energy));

  Sink sink = open_sink(cfg, out);
  if (cfg.output.format == "json") {
    json j = result_envelope("resonances", cfg);
    j["results"] = {
        {"resonances",
         json::array(
             {{{"label", pair.first.label},
               {"energy", complex_json(pair.first.energy)},
               {"residue", complex_json(pair.first.residue)},
               {"abs_d", r1}},
              {{"label", pair.second.label},
               {"energy", complex_json(pair.second.energy)},
               {"residue", complex_json(pair.second.residue)},
               {"abs_d", r2}}})}};
    *sink.stream << j.dump(2) << "\n";
  } else {
    output::CsvWriter w(*sink.stream, "resonances", cfg);
    w.columns({"branch", "reE", "imE", "reResidue", "imResidue", "absD"});
    w.row({static_cast<double>(pair.first.label), pair.first.energy.real(),
           pair.first.energy.imag(), pair.first.residue.real(),
           pair.first.residue.imag(), r1});
    w.row({static_cast<double>(pair.second.label), pair.second.energy.real(),
           pair.second.energy.imag(), pair.second.residue.real(),
           pair.second.residue.imag(), r2});
  }
  return 0;
}

// ------------------------------------------------------------ sweep

Eigen::ArrayXd sweep_grid(const config::RunConfig& cfg) {
  return Eigen::ArrayXd::LinSpaced(cfg.sweep.f_steps, cfg.sweep.f_min,
                                   cfg.sweep.f_max);
}

solver::BranchTrack run_sweep(const config::RunConfig& cfg, int jobs,
                              const Log& log) {
  Eigen::ArrayXd grid = sweep_grid(cfg);
  int n = static_cast<int>(grid.size());
  jobs = std::max(1, std::min(jobs, n / 4));
  if (jobs <= 1) return solver::track_branches(cfg.model, grid);

  log.info("parallel sweep with " + std::to_string(jobs) + " partitions");
  // partition with one overlap point; stitch labels at the seams
  std::vector<solver::BranchTrack> parts(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (int k = 0; k < jobs; ++k) {
    pool.emplace_back([&, k] {
      try {
        int begin = k * n / jobs;
        int end = (k + 1) * n / jobs;
        if (k > 0) --begin;  // overlap point
        parts[k] = solver::track_branches(
            cfg.model, grid.segment(begin, end - begin).eval());
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  solver::BranchTrack track;
  track.f_grid = grid;
  track.first.resize(n);
  track.second.resize(n);
  int offset = 0;
  for (int k = 0; k < jobs; ++k) {
    const auto& part = parts[k];
    if (k > 0) {
      // re-verify branch identity on the shared point
      Complex p1 = track.first[offset - 1], p2 = track.second[offset - 1];
      Complex c1 = part.first[0], c2 = part.second[0];
      bool swap = std::abs(c1 - p2) + std::abs(c2 - p1) <
                  std::abs(c1 - p1) + std::abs(c2 - p2);
      Complex m1 = swap ? c2 : c1, m2 = swap ? c1 : c2;
      double scale = std::max(1.0, std::abs(p1));
      if (std::abs(m1 - p1) > 1e-6 * scale || std::abs(m2 - p2) > 1e-6 * scale)
        track.continuity_gaps.push_back(offset);
      for (int i = 1; i < part.f_grid.size(); ++i) {
        track.first[offset + i - 1] = swap ? part.second[i] : part.first[i];
        track.second[offset + i - 1] = swap ? part.first[i] : part.second[i];
      }
      for (int g : part.continuity_gaps)
        if (g >= 1) track.continuity_gaps.push_back(offset + g - 1);
      for (int g : part.failures)
        if (g >= 1) track.failures.push_back(offset + g - 1);
      offset += static_cast<int>(part.f_grid.size()) - 1;
    } else {
      for (int i = 0; i < part.f_grid.size(); ++i) {
        track.first[i] = part.first[i];
        track.second[i] = part.second[i];
      }
      track.continuity_gaps = part.continuity_gaps;
      track.failures = part.failures;
      offset = static_cast<int>(part.f_grid.size());
    }
  }
  return track;
}

int cmd_sweep(const config::RunConfig& cfg, std::ostream& out, int jobs,
              const Log& log) {
  if (!cfg.sweep.present)
    throw Error(ErrorCode::bad_config, "sweep requires a [sweep] block");
  solver::BranchTrack track = run_sweep(cfg, jobs, log);
  log.info("sweep finished: " + std::to_string(track.f_grid.size()) +
           " grid points, " + std::to_string(track.failures.size()) +
           " failures");

  auto flag_of = [&](int i) {
    for (int g : track.failures)
      if (g == i) return 2;
    for (int g : track.continuity_gaps)
      if (g == i) return 1;
    return 0;
  };

  Sink sink = open_sink(cfg, out);
  if (cfg.output.format == "json") {
    json rows = json::array();
    for (int i = 0; i < track.f_grid.size(); ++i)
      rows.push_back({{"F", track.f_grid[i]},
                      {"e1", complex_json(track.first[i])},
                      {"e2", complex_json(track.second[i])},
                      {"flag", flag_of(i)}});
    json j = result_envelope("sweep", cfg);
    j["results"] = {{"track", rows}};
    j["diagnostics"] = {{"failures", track.failures},
                        {"continuity_gaps", track.continuity_gaps}};
    *sink.stream << j.dump(2) << "\n";
  } else {
    output::CsvWriter w(*sink.stream, "sweep", cfg);
    w.columns({"F", "reE1", "imE1", "reE2", "imE2", "branch_gap_flag"});
    for (int i = 0; i < track.f_grid.size(); ++i)
      w.row({track.f_grid[i], track.first[i].real(), track.first[i].imag(),
             track.second[i].real(), track.second[i].imag(),
             static_cast<double>(flag_of(i))});
  }
  return 0;
}

// ------------------------------------------------------------ classify

int cmd_classify(const config::RunConfig& cfg, std::ostream& out,
                 const Log& log) {
  auto semi = crossing::classify_semiclassical(cfg.model);
  double fc_semi = crossing::semiclassical_fc(cfg.model);

  config::RunConfig sweep_cfg = cfg;
  if (!sweep_cfg.sweep.present) {
    sweep_cfg.sweep.f_min = 0.85 * fc_semi;
    sweep_cfg.sweep.f_max = 1.15 * fc_semi;
    sweep_cfg.sweep.f_steps = 41;
    sweep_cfg.sweep.present = true;
    log.info("no [sweep] block; classifying on the default window around "
             "the closed-form critical field");
  }
  solver::BranchTrack track = run_sweep(sweep_cfg, 1, log);
  crossing::CrossingType numeric = crossing::classify_numeric(track);

  double fc_num = std::nan("");
  double rho_i = 0.0, rho_e = 0.0;
  if (numeric == crossing::CrossingType::type1) {
    auto report = crossing::critical_field(
        cfg.model, {sweep_cfg.sweep.f_min, sweep_cfg.sweep.f_max});
    fc_num = report.f_critical;
    rho_i = report.rho_inner;
    rho_e = report.rho_outer;
  } else {
    // no exact Im-crossing in type II; barrier geometry at the
    // semiclassical crossing point instead
    ModelParams at_fc = cfg.model;
    at_fc.field = fc_semi;
    auto [ri, re] = crossing::agmon_lengths(
        at_fc, -cfg.model.alpha1 * cfg.model.alpha1 / 4.0);
    rho_i = ri;
    rho_e = re;
  }

  auto type_name = [](crossing::CrossingType t) {
    return t == crossing::CrossingType::type1 ? "I" : "II";
  };

  Sink sink = open_sink(cfg, out);
  if (cfg.output.format == "json") {
    json j = result_envelope("classify", cfg);
    j["results"] = {{"semiclassical_type", type_name(semi.type)},
                    {"numeric_type", type_name(numeric)},
                    {"near_threshold", semi.near_threshold},
                    {"alpha_ratio", semi.ratio},
                    {"fc_semiclassical", fc_semi},
                    {"rho_inner", rho_i},
                    {"rho_outer", rho_e}};
    if (std::isfinite(fc_num)) j["results"]["fc_numeric"] = fc_num;
    *sink.stream << j.dump(2) << "\n";
  } else {
    output::CsvWriter w(*sink.stream, "classify", cfg);
    if (semi.near_threshold)
      w.comment("near-threshold: |alpha1/alpha2| within 2% of 3^(1/3); "
                "the numeric verdict is authoritative");
    w.columns({"semiclassical_type", "numeric_type", "near_threshold",
               "alpha_ratio", "fc_semiclassical", "fc_numeric", "rho_inner",
               "rho_outer"});
    w.raw_row({type_name(semi.type), type_name(numeric),
               semi.near_threshold ? "1" : "0", w.fmt(semi.ratio),
               w.fmt(fc_semi), w.fmt(fc_num), w.fmt(rho_i), w.fmt(rho_e)});
  }
  return 0;
}

// ------------------------------------------------------------ survival

int cmd_survival(const config::RunConfig& cfg, std::ostream& out,
                 const Log& log) {
  Eigen::ArrayXd times = survival::time_grid(
      cfg.time.t_min, cfg.time.t_max, cfg.time.t_points, cfg.time.log_spacing);
  log.info("assembling the survival amplitude on " +
           std::to_string(times.size()) + " time points");
  survival::SurvivalSeries s = survival::amplitude(cfg.model, cfg.state, times);

  double period = 2.0 * M_PI / std::fabs(s.e2.real() - s.e1.real());
  double contrast = std::nan("");
  try {
    contrast = survival::oscillation_metric(
        s, {times[0], times[times.size() - 1]});
  } catch (const Error&) {
    // window too short for a contrast estimate; leave nan
  }

  Sink sink = open_sink(cfg, out);
  if (cfg.output.format == "json") {
    json j = result_envelope("survival", cfg);
    json rows = json::array();
    for (int i = 0; i < times.size(); ++i)
      rows.push_back({{"t", times[i]},
                      {"absA", std::abs(s.amplitude[i])},
                      {"reA", s.amplitude[i].real()},
                      {"imA", s.amplitude[i].imag()},
                      {"abs_free", std::abs(s.free_part[i])},
                      {"abs_resonance", std::abs(s.resonance_part[i])}});
    j["results"] = {{"series", rows},
                    {"c1", complex_json(s.c1)},
                    {"c2", complex_json(s.c2)},
                    {"e1", complex_json(s.e1)},
                    {"e2", complex_json(s.e2)},
                    {"pseudo_period", period}};
    if (std::isfinite(contrast)) j["results"]["oscillation_contrast"] = contrast;
    *sink.stream << j.dump(2) << "\n";
  } else {
    output::CsvWriter w(*sink.stream, "survival", cfg);
    w.comment("c1 = " + w.fmt(s.c1.real()) + " + " + w.fmt(s.c1.imag()) + "i");
    w.comment("c2 = " + w.fmt(s.c2.real()) + " + " + w.fmt(s.c2.imag()) + "i");
    w.comment("E1 = " + w.fmt(s.e1.real()) + " + " + w.fmt(s.e1.imag()) + "i");
    w.comment("E2 = " + w.fmt(s.e2.real()) + " + " + w.fmt(s.e2.imag()) + "i");
    w.comment("pseudo_period = " + w.fmt(period));
    w.comment("oscillation_contrast = " + w.fmt(contrast));
    w.columns({"t", "absA", "reA", "imA", "abs_free", "abs_resonance"});
    for (int i = 0; i < times.size(); ++i)
      w.row({times[i], std::abs(s.amplitude[i]), s.amplitude[i].real(),
             s.amplitude[i].imag(), std::abs(s.free_part[i]),
             std::abs(s.resonance_part[i])});
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Log log{&err, Log::level_from_env()};

  CLI::App app{"Stark resonances, crossing classification and survival-"
               "amplitude simulation for the two-delta-well model"};
  app.require_subcommand(1);

  CommonArgs common;
  auto add_common = [&](CLI::App* sub, bool with_jobs) {
    sub->add_option("--config", common.config_path, "configuration file")
        ->required();
    sub->add_option("--out", common.out_path, "output path (default stdout)");
    sub->add_option("--set", common.overrides,
                    "override a config key, section.key=value");
    sub->add_flag("--json", common.as_json, "structured JSON output");
    if (with_jobs)
      sub->add_option("--jobs", common.jobs, "parallel sweep partitions");
  };

  CLI::App* sub_res = app.add_subcommand("resonances",
                                         "solve the two resonances at fixed F");
  CLI::App* sub_sweep = app.add_subcommand("sweep",
                                           "track both branches over an F-grid");
  CLI::App* sub_cls = app.add_subcommand("classify",
                                         "crossing type and critical field");
  CLI::App* sub_sur = app.add_subcommand("survival",
                                         "survival amplitude time series");
  add_common(sub_res, false);
  add_common(sub_sweep, true);
  add_common(sub_cls, false);
  add_common(sub_sur, false);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    config::RunConfig cfg = resolve_config(common);
    log.debug("configuration loaded from " + common.config_path);
    if (sub_res->parsed()) return cmd_resonances(cfg, out, log);
    if (sub_sweep->parsed()) return cmd_sweep(cfg, out, common.jobs, log);
    if (sub_cls->parsed()) return cmd_classify(cfg, out, log);
    if (sub_sur->parsed()) return cmd_survival(cfg, out, log);
    err << "error: no subcommand\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::bad_config ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace starkbeat::cli
