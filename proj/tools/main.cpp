#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hetfc/autocov.hpp"
#include "hetfc/config.hpp"
#include "hetfc/errors.hpp"
#include "hetfc/experiments.hpp"
#include "hetfc/io.hpp"

namespace fs = std::filesystem;
using namespace hetfc;

namespace {

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& flag) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      const long v = std::stol(tok);
      if (v <= 0) throw std::invalid_argument("non-positive");
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError(flag + ": cannot parse '" + tok + "' as a positive integer");
    }
  }
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

// "1;2" -> {{1}}, {{2}};  "1,3;2,4" -> {1,3}, {2,4}
std::vector<std::vector<int>> parse_candidates(const std::string& text) {
  std::vector<std::vector<int>> out;
  std::stringstream sets(text);
  std::string set_tok;
  while (std::getline(sets, set_tok, ';')) {
    std::vector<int> lags;
    std::stringstream ss(set_tok);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        lags.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw ConfigError("--candidates: cannot parse lag '" + tok + "'");
      }
    }
    if (lags.empty()) throw ConfigError("--candidates: empty lag set");
    out.push_back(std::move(lags));
  }
  if (out.empty()) throw ConfigError("--candidates: no candidates given");
  return out;
}

std::vector<double> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open data file '" + path + "'");
  std::vector<double> x;
  std::string line;
  int x_col = -1;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (first) {
      first = false;
      bool header = false;
      try {
        (void)std::stod(fields[0]);
      } catch (const std::exception&) {
        header = true;
      }
      if (header) {
        for (std::size_t i = 0; i < fields.size(); ++i)
          if (fields[i] == "x") x_col = static_cast<int>(i);
        if (x_col < 0)
          throw ConfigError("data file '" + path + "': header has no 'x' column");
        continue;
      }
      x_col = fields.size() > 1 ? 1 : 0;
      if (fields.size() == 1) x_col = 0;
    }
    const std::size_t col = x_col < 0 ? 0 : static_cast<std::size_t>(x_col);
    if (col >= fields.size())
      throw ConfigError("data file '" + path + "': short row '" + line + "'");
    try {
      x.push_back(std::stod(fields[col]));
    } catch (const std::exception&) {
      throw ConfigError("data file '" + path + "': cannot parse '" + fields[col] + "'");
    }
  }
  if (x.size() < 10) throw ConfigError("data file '" + path + "': fewer than 10 values");
  return x;
}

struct ExperimentOutput {
  std::string csv;
  Json summary;
};

ExperimentOutput render_ratio(const std::string& table, const std::vector<RatioBlock>& blocks,
                              const std::vector<RatioResult>& results) {
  ExperimentOutput out;
  out.csv = csv_line({"experiment", "n", "h", "criterion", "estimate", "se", "count"});
  Json jblocks = Json::array();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::string tag = table + ":" + blocks[b].label;
    const RatioResult& r = results[b];
    Json jpop = Json::array();
    for (const auto& hp : r.population) {
      out.csv += csv_line({tag + ":g_tilde_pop", "0", std::to_string(hp.h), "na",
                           format_g17(hp.g_pop), format_g17(hp.g_pop_se),
                           std::to_string(blocks[b].config.n_long)});
      jpop.push_back(Json{{"h", hp.h},
                          {"g_tilde", hp.g_pop},
                          {"se", hp.g_pop_se},
                          {"f_h", hp.f_h},
                          {"beta", hp.beta}});
    }
    Json jcells = Json::array();
    for (const auto& c : r.cells) {
      out.csv += csv_line({tag + ":g_tilde_nh", std::to_string(c.n), std::to_string(c.h),
                           "na", format_g17(c.g_nh), format_g17(c.se),
                           std::to_string(c.completed)});
      out.csv += csv_line({tag + ":ratio", std::to_string(c.n), std::to_string(c.h), "na",
                           format_g17(c.ratio), format_g17(c.ratio_se),
                           std::to_string(c.completed)});
      jcells.push_back(Json{{"n", c.n},
                            {"h", c.h},
                            {"g_tilde_nh", c.g_nh},
                            {"se", c.se},
                            {"ratio", c.ratio},
                            {"ratio_se", c.ratio_se},
                            {"completed", c.completed},
                            {"failures", c.failures}});
    }
    jblocks.push_back(Json{{"block", blocks[b].label},
                           {"dgp", to_json(blocks[b].config.dgp)},
                           {"population", jpop},
                           {"cells", jcells}});
  }
  out.summary = Json{{"experiment", table}, {"blocks", jblocks}};
  return out;
}

ExperimentOutput render_selection(const std::string& table, const SelectionConfig& cfg,
                                  const SelectionResult& result) {
  ExperimentOutput out;
  out.csv = csv_line({"experiment", "n", "h", "criterion", "estimate", "se", "count"});
  Json jpop = Json::array();
  for (const auto& pop : result.population) {
    Json jic = Json::array();
    for (std::size_t c = 0; c < pop.entries.size(); ++c) {
      SubsetSpec spec;
      spec.lags = cfg.candidate_lags[c];
      spec.horizon = pop.h;
      out.csv += csv_line({table + ":f_h:" + spec.label(), "0", std::to_string(pop.h), "na",
                           format_g17(pop.entries[c].f), format_g17(pop.entries[c].f_se),
                           std::to_string(cfg.n_long)});
      out.csv += csv_line({table + ":g_tilde:" + spec.label(), "0", std::to_string(pop.h),
                           "na", format_g17(pop.entries[c].g),
                           format_g17(pop.entries[c].g_se), std::to_string(cfg.n_long)});
      jic.push_back(Json{{"J", cfg.candidate_lags[c]},
                         {"f_h", pop.entries[c].f},
                         {"f_se", pop.entries[c].f_se},
                         {"g_tilde", pop.entries[c].g},
                         {"g_se", pop.entries[c].g_se}});
    }
    jpop.push_back(Json{{"h", pop.h},
                        {"candidates", jic},
                        {"m1", pop.sets.m1},
                        {"m2", pop.sets.m2}});
  }
  Json jcells = Json::array();
  for (const auto& c : result.cells) {
    const auto emit = [&](const char* name, std::size_t hits) {
      const double freq =
          c.completed ? static_cast<double>(hits) / static_cast<double>(c.completed) : 0.0;
      const double se = c.completed
                            ? std::sqrt(std::max(0.0, freq * (1.0 - freq) /
                                                          static_cast<double>(c.completed)))
                            : 0.0;
      out.csv += csv_line({table, std::to_string(c.n), std::to_string(c.h), name,
                           format_g17(freq), format_g17(se), std::to_string(hits)});
    };
    emit("mric", c.mric_hits);
    emit("aic", c.aic_hits);
    emit("bic", c.bic_hits);
    jcells.push_back(Json{{"n", c.n},
                          {"h", c.h},
                          {"mric_hits", c.mric_hits},
                          {"aic_hits", c.aic_hits},
                          {"bic_hits", c.bic_hits},
                          {"completed", c.completed},
                          {"failures", c.failures}});
  }
  out.summary = Json{{"experiment", table},
                     {"dgp", to_json(cfg.dgp)},
                     {"population", jpop},
                     {"cells", jcells}};
  return out;
}

int cmd_simulate(const std::string& config_path, std::size_t n, std::uint64_t seed,
                 const std::string& out_dir, const std::string& command) {
  const Json cfg_json = load_json_file(config_path);
  const DgpSpec dgp = dgp_from_json(cfg_json);
  RunManifest manifest;
  manifest.command = command;
  manifest.config_echo = to_json(dgp);
  manifest.master_seed = seed;
  manifest.started = timestamp_utc();

  RngStream stream(seed);
  const PathBundle path = simulate_path(dgp, n, stream);

  std::string csv = csv_line({"t", "x", "eps", "sigma2"});
  for (std::size_t t = 0; t < n; ++t)
    csv += csv_line({std::to_string(t + 1), format_g17(path.x[t]), format_g17(path.eps[t]),
                     format_g17(path.sigma2[t])});
  fs::create_directories(out_dir);
  write_text_atomic(out_dir + "/series.csv", csv);
  manifest.finished = timestamp_utc();
  write_manifest(out_dir + "/manifest.json", manifest);
  std::cout << "wrote " << out_dir << "/series.csv (" << n << " rows)\n";
  return 0;
}

int cmd_experiment(const std::string& table, const std::string& config_path,
                   std::size_t reps, std::size_t n_long, std::uint64_t seed,
                   std::size_t workers, const std::string& out_dir,
                   const std::string& command) {
  PresetKnobs knobs;
  Json config_echo = Json::object();
  if (!config_path.empty()) {
    const Json j = load_json_file(config_path);
    if (!j.is_object()) throw ConfigError("experiment config: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      if (key == "replications")
        knobs.replications = it.value().get<std::size_t>();
      else if (key == "n_long")
        knobs.n_long = it.value().get<std::size_t>();
      else if (key == "master_seed")
        knobs.master_seed = it.value().get<std::uint64_t>();
      else if (key == "workers")
        knobs.workers = it.value().get<std::size_t>();
      else if (key == "cn_exponent")
        knobs.cn_exponent = it.value().get<double>();
      else
        throw ConfigError("experiment config: unknown field '" + key + "'");
    }
    config_echo = j;
  }
  if (reps) knobs.replications = reps;
  if (n_long) knobs.n_long = n_long;
  if (seed) knobs.master_seed = seed;
  if (workers) knobs.workers = workers;

  RunManifest manifest;
  manifest.command = command;
  manifest.master_seed = knobs.master_seed;
  manifest.started = timestamp_utc();

  ExperimentOutput rendered;
  if (is_ratio_table(table)) {
    const std::vector<RatioBlock> blocks = preset_ratio_table(table, knobs);
    std::vector<RatioResult> results;
    for (const auto& b : blocks) results.push_back(ratio_experiment(b.config));
    rendered = render_ratio(table, blocks, results);
  } else if (is_selection_table(table)) {
    const SelectionConfig cfg = preset_selection_table(knobs);
    rendered = render_selection(table, cfg, selection_experiment(cfg));
  } else {
    throw ConfigError("unknown table '" + table + "' (expected t1, t2, t3 or s1)");
  }

  config_echo["table"] = table;
  config_echo["resolved"] = Json{{"replications", knobs.replications},
                                 {"n_long", knobs.n_long},
                                 {"master_seed", knobs.master_seed},
                                 {"cn_exponent", knobs.cn_exponent}};
  manifest.config_echo = config_echo;

  fs::create_directories(out_dir);
  write_text_atomic(out_dir + "/results.csv", rendered.csv);
  write_text_atomic(out_dir + "/summary.json", rendered.summary.dump(2) + "\n");
  manifest.finished = timestamp_utc();
  write_manifest(out_dir + "/manifest.json", manifest);
  std::cout << "wrote " << out_dir << "/results.csv\n";
  return 0;
}

int cmd_select(const std::string& config_path, const std::string& data_path,
               bool do_simulate, std::size_t n, std::uint64_t seed,
               const std::string& candidates_text, int horizon, double cn_exponent,
               const std::string& out_path, const std::string& command) {
  const std::vector<std::vector<int>> lag_sets = parse_candidates(candidates_text);
  std::vector<SubsetSpec> candidates;
  for (const auto& lags : lag_sets) {
    SubsetSpec s;
    s.lags = lags;
    s.horizon = horizon;
    try {
      s.validate();
    } catch (const ModelError& e) {
      throw ConfigError(std::string("--candidates: ") + e.what());
    }
    candidates.push_back(std::move(s));
  }

  std::vector<double> x;
  Json config_echo = Json::object();
  if (do_simulate) {
    if (config_path.empty())
      throw ConfigError("select --simulate requires --config with a dgp");
    const DgpSpec dgp = dgp_from_json(load_json_file(config_path));
    config_echo = to_json(dgp);
    RngStream stream(seed);
    x = simulate_path(dgp, n, stream).x;
  } else {
    if (data_path.empty()) throw ConfigError("select needs --data FILE or --simulate");
    x = read_series_csv(data_path);
    config_echo["data"] = data_path;
  }

  const ScoreAllResult scores = score_all(x, candidates, horizon, cn_exponent);

  Json jc = Json::array();
  for (const auto& s : scores.scores) {
    Json row{{"J", s.spec.lags}, {"ok", s.ok}};
    if (s.ok) {
      row["sigma2_hat"] = s.sigma2_hat;
      row["g_hat"] = s.g_hat;
      row["mric"] = s.mric;
      row["aic"] = s.aic;
      row["bic"] = s.bic;
    } else {
      row["reason"] = s.failure;
    }
    jc.push_back(std::move(row));
  }
  const Json result{{"h", horizon},
                    {"n", x.size()},
                    {"cn", scores.cn},
                    {"cn_exponent", cn_exponent},
                    {"dbar", scores.dbar},
                    {"candidates", jc},
                    {"argmin", Json{{"mric", scores.scores[scores.argmin_mric].spec.lags},
                                    {"aic", scores.scores[scores.argmin_aic].spec.lags},
                                    {"bic", scores.scores[scores.argmin_bic].spec.lags}}}};

  const std::string text = result.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    fs::create_directories(fs::path(out_path).parent_path().string().empty()
                               ? "."
                               : fs::path(out_path).parent_path().string());
    write_text_atomic(out_path, text);
    RunManifest manifest;
    manifest.command = command;
    manifest.config_echo = config_echo;
    manifest.master_seed = seed;
    manifest.started = manifest.finished = timestamp_utc();
    write_manifest(out_path + ".manifest.json", manifest);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_eigprobe(const std::string& config_path, std::size_t k, double q,
                 const std::string& n_grid_text, std::size_t reps, std::uint64_t seed,
                 std::size_t workers, const std::string& out_dir,
                 const std::string& command) {
  const DgpSpec dgp = dgp_from_json(load_json_file(config_path));
  const std::vector<std::size_t> n_grid = parse_size_list(n_grid_text, "--n-grid");

  RunManifest manifest;
  manifest.command = command;
  manifest.config_echo = to_json(dgp);
  manifest.master_seed = seed;
  manifest.started = timestamp_utc();

  const NegativeMomentSweep sweep =
      negative_moment_sweep(dgp, k, q, n_grid, reps, seed, workers);

  std::string csv = csv_line({"n", "q", "k", "mean_negq_moment", "se", "nonfinite_count"});
  for (const auto& row : sweep.rows)
    csv += csv_line({std::to_string(row.n), format_g17(row.q), std::to_string(row.k),
                     format_g17(row.mean), format_g17(row.se), std::to_string(row.nonfinite)});

  fs::create_directories(out_dir);
  write_text_atomic(out_dir + "/sweep.csv", csv);
  const Json summary{{"rows", sweep.rows.size()},
                     {"loglog_slope", sweep.loglog_slope},
                     {"last_first_ratio", sweep.last_first_ratio}};
  write_text_atomic(out_dir + "/summary.json", summary.dump(2) + "\n");
  manifest.finished = timestamp_utc();
  write_manifest(out_dir + "/manifest.json", manifest);
  std::cout << "wrote " << out_dir << "/sweep.csv (slope "
            << format_g17(sweep.loglog_slope) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation, direct multi-step prediction and model selection "
               "for linear processes with conditionally heteroscedastic errors"};
  app.require_subcommand(1);
  const std::string command = join_args(argc, argv);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a path and write it as CSV");
  std::string sim_config, sim_out;
  std::size_t sim_n = 1000;
  std::uint64_t sim_seed = 12345;
  sim->add_option("--config", sim_config, "DGP config JSON")->required();
  sim->add_option("--n", sim_n, "Series length")->required();
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "Output directory")->required();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a bundled experiment design");
  std::string exp_table, exp_config, exp_out;
  std::size_t exp_reps = 0, exp_workers = 0, exp_nlong = 0;
  std::uint64_t exp_seed = 0;
  exp->add_option("--table", exp_table, "t1 | t2 | t3 | s1")->required();
  exp->add_option("--config", exp_config, "Knobs JSON (replications, n_long, master_seed, workers, cn_exponent)");
  exp->add_option("--M", exp_reps, "Replications per cell");
  exp->add_option("--n-long", exp_nlong, "Population moment sample size");
  exp->add_option("--seed", exp_seed, "Master seed");
  exp->add_option("--workers", exp_workers, "Worker threads (default HETFORECAST_WORKERS or hardware)");
  exp->add_option("--out", exp_out, "Output directory")->required();

  // select
  auto* sel = app.add_subcommand("select", "Score candidate subset AR models");
  std::string sel_config, sel_data, sel_candidates, sel_out;
  bool sel_simulate = false;
  std::size_t sel_n = 2000;
  std::uint64_t sel_seed = 12345;
  int sel_h = 1;
  double sel_cn = 0.6;
  sel->add_option("--config", sel_config, "DGP config JSON (for --simulate)");
  sel->add_option("--data", sel_data, "CSV with the observed series");
  sel->add_flag("--simulate", sel_simulate, "Simulate the series instead of reading --data");
  sel->add_option("--n", sel_n, "Simulated series length");
  sel->add_option("--seed", sel_seed, "RNG seed");
  sel->add_option("--candidates", sel_candidates,
                  "Lag sets, e.g. \"1;2\" or \"1,3;2,4\"")->required();
  sel->add_option("--h", sel_h, "Forecast horizon")->required();
  sel->add_option("--cn-exponent", sel_cn, "MRIC penalty exponent in (0.5, 1)");
  sel->add_option("--out", sel_out, "Output JSON path (stdout when omitted)");

  // eigprobe
  auto* eig = app.add_subcommand("eigprobe",
                                 "Negative-moment probe of the minimum eigenvalue");
  std::string eig_config, eig_grid = "100,200,400,800", eig_out;
  std::size_t eig_k = 2, eig_reps = 1000, eig_workers = 0;
  double eig_q = 2.0;
  std::uint64_t eig_seed = 12345;
  eig->add_option("--config", eig_config, "DGP config JSON")->required();
  eig->add_option("--k", eig_k, "Autocovariance matrix order");
  eig->add_option("--q", eig_q, "Negative moment exponent");
  eig->add_option("--n-grid", eig_grid, "Comma-separated sample sizes");
  eig->add_option("--reps", eig_reps, "Replications per n");
  eig->add_option("--seed", eig_seed, "Master seed");
  eig->add_option("--workers", eig_workers, "Worker threads");
  eig->add_option("--out", eig_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
    if (sim->parsed())
      return cmd_simulate(sim_config, sim_n, sim_seed, sim_out, command);
    if (exp->parsed())
      return cmd_experiment(exp_table, exp_config, exp_reps, exp_nlong, exp_seed,
                            exp_workers, exp_out, command);
    if (sel->parsed())
      return cmd_select(sel_config, sel_data, sel_simulate, sel_n, sel_seed,
                        sel_candidates, sel_h, sel_cn, sel_out, command);
    if (eig->parsed())
      return cmd_eigprobe(eig_config, eig_k, eig_q, eig_grid, eig_reps, eig_seed,
                          eig_workers, eig_out, command);
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
