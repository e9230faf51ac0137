#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bgbm/errors.hpp"
#include "bgbm/estimate.hpp"
#include "bgbm/forecast.hpp"
#include "bgbm/paths.hpp"
#include "bgbm/trading.hpp"
#include "bgbm/verify.hpp"

namespace bgbm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  ModelParams params{-1.0, 1.0, 1.0, 1.0, 0.1};
  std::optional<std::uint64_t> seed;
  std::size_t reps = 0;
  double grid_step = 1e-3;
  double horizon = 0.0;
  std::size_t trades = 0;
  std::optional<double> a0, b0;
  bool exact = false;
  bool grid = false;
  double window_s = 600.0;
  double lead_s = 60.0;
  double band_sigmas = 3.0;
  std::size_t min_trades = 10;
  std::string input;
  std::string outdir = ".";
  std::string format = "csv";
  bool use_first = false;
  bool with_stderr = false;
  std::string suite;
  double delta = 0.01;
};

void add_params(CLI::App* app, Options& o) {
  app->add_option("--mu-a", o.params.mu_a, "ask log-drift")->capture_default_str();
  app->add_option("--mu-b", o.params.mu_b, "bid log-drift")->capture_default_str();
  app->add_option("--sigma-a", o.params.sigma_a, "ask log-volatility")->capture_default_str();
  app->add_option("--sigma-b", o.params.sigma_b, "bid log-volatility")->capture_default_str();
}

std::ofstream open_out(const Options& o, const std::string& name) {
  fs::create_directories(o.outdir);
  const fs::path p = fs::path(o.outdir) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot write " + p.string());
  return f;
}

std::ifstream open_in(const std::string& path) {
  if (path.empty()) throw DomainError("--input is required");
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  return f;
}

TickData read_input_ticks(const Options& o) {
  auto f = open_in(o.input);
  return read_tick_csv(f);
}

int cmd_simulate(const Options& o, std::ostream& out) {
  if (o.exact == o.grid) throw DomainError("simulate needs exactly one of --exact or --grid");
  if (!o.seed) throw DomainError("simulate needs --seed");
  if (o.format != "csv" && o.format != "json") throw DomainError("--format must be csv or json");
  const double a0 = o.a0.value_or(std::exp(o.params.delta));
  const double b0 = o.b0.value_or(std::exp(-o.params.delta));
  std::string written;
  if (o.exact) {
    validate(o.params);
    TradeSequence seq;
    if (o.trades > 0) {
      seq = exact_trade_sequence(o.params, a0, b0, o.trades, *o.seed);
    } else if (o.horizon > 0.0) {
      seq = exact_trades_until(o.params, a0, b0, o.horizon, *o.seed);
    } else {
      throw DomainError("simulate --exact needs --trades or --horizon");
    }
    written = o.format == "csv" ? "trades.csv" : "trades.json";
    auto f = open_out(o, written);
    if (o.format == "csv") {
      write_trades_csv(f, seq);
    } else {
      f << json{{"timestamp_s", seq.t()}, {"price", seq.p()}}.dump() << '\n';
    }
  } else {
    validate_allow_zero_volatility(o.params);
    if (!(o.horizon > 0.0)) throw DomainError("simulate --grid needs --horizon > 0");
    if (!(o.grid_step > 0.0)) throw DomainError("--grid-step must be > 0");
    const auto n_steps = static_cast<std::size_t>(std::llround(o.horizon / o.grid_step));
    const BouncingPath path =
        build_bouncing_path(o.params, a0, b0, TimeGrid::uniform(o.grid_step, std::max<std::size_t>(n_steps, 1)), *o.seed);
    written = o.format == "csv" ? "path.csv" : "path.json";
    auto f = open_out(o, written);
    if (o.format == "csv") {
      write_path_csv(f, path);
    } else {
      std::vector<double> t(path.grid.times().begin(), path.grid.times().end());
      f << json{{"t", t}, {"x_a", path.x_a}, {"x_b", path.x_b}, {"l", path.l}, {"y_a", path.y_a},
                {"y_b", path.y_b}, {"a", path.a}, {"b", path.b}}
               .dump()
        << '\n';
    }
  }
  out << (fs::path(o.outdir) / written).string() << '\n';
  return kOk;
}

int cmd_fit(const Options& o, std::ostream& out) {
  const TickData d = merge_ties(read_input_ticks(o));
  const double shift = d.timestamp_s.front() - 1.0;
  std::vector<double> t = d.timestamp_s;
  // Only increments are fitted unless --use-first is given, in which case
  // the timestamps are taken as elapsed time from the origin.
  if (!o.use_first) {
    for (double& x : t) x -= shift;
  }
  const TradeSequence seq(std::move(t), d.price);
  EstimateResult r = fit(sample_moments(seq, o.use_first));
  if (o.with_stderr) r.std_errors = asymptotic_stderr(seq, r);
  out << to_json(r, FitWindow{d.timestamp_s.front(), d.timestamp_s.back()}).dump(2) << '\n';
  return kOk;
}

int cmd_predict(const Options& o, std::ostream& out) {
  EstimateResult est;
  if (!o.input.empty()) {
    auto f = open_in(o.input);
    json j;
    try {
      j = json::parse(f);
      est.theta_hat = {j.at("mu_a").get<double>(), j.at("mu_b").get<double>(), j.at("sigma_a").get<double>(),
                       j.at("sigma_b").get<double>(), j.at("delta").get<double>()};
    } catch (const json::exception& e) {
      throw InputError(std::string("bad fit JSON: ") + e.what());
    }
  } else {
    est.theta_hat = o.params;
  }
  const Prediction p = predict(est, o.horizon, o.band_sigmas);
  out << json{{"horizon_s", o.horizon}, {"point", p.point}, {"lower", p.lower}, {"upper", p.upper}}.dump(2) << '\n';
  return kOk;
}

int cmd_backtest(const Options& o, std::ostream& out) {
  ForecastConfig cfg;
  cfg.window_len_s = o.window_s;
  cfg.lead_time_s = o.lead_s;
  cfg.band_width_sigmas = o.band_sigmas;
  cfg.min_trades = o.min_trades;
  const BacktestResult r = backtest(read_input_ticks(o), cfg);
  {
    auto f = open_out(o, "records.csv");
    write_records_csv(f, r.records);
  }
  {
    auto f = open_out(o, "delta_trace.csv");
    write_delta_trace_csv(f, delta_trace(r));
  }
  const std::string summary = to_json(r.summary).dump(2);
  {
    auto f = open_out(o, "summary.json");
    f << summary << '\n';
  }
  out << summary << '\n';
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.suite.empty()) throw DomainError("verify needs --suite <name>|all");
  verify::VerifyConfig cfg;
  cfg.seed = o.seed.value_or(1);
  cfg.reps = o.reps;
  cfg.delta = o.delta;
  std::vector<std::string> names;
  if (o.suite == "all") {
    names = verify::suite_names();
  } else if (verify::is_suite(o.suite)) {
    names = {o.suite};
  } else {
    std::string known;
    for (const auto& n : verify::suite_names()) known += " " + n;
    throw DomainError("unknown suite '" + o.suite + "'; known suites: all" + known);
  }
  json suites = json::array();
  bool pass = true;
  for (const auto& n : names) {
    const verify::SuiteReport r = verify::run_suite(n, cfg);
    pass = pass && r.pass();
    suites.push_back(verify::to_json(r));
  }
  const json report{{"seed", cfg.seed}, {"pass", pass}, {"suites", suites}};
  out << report.dump(2) << '\n';
  return pass ? kOk : kVerifyFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bouncing GBM limit-order-book toolkit", "bgbm"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "simulate exact trades or a grid path");
  add_params(sim, o);
  sim->add_option("--delta", o.params.delta, "post-trade half-spread in log-price")->capture_default_str();
  sim->add_flag("--exact", o.exact, "exact trade sequence");
  sim->add_flag("--grid", o.grid, "bouncing path on a uniform grid");
  sim->add_option("--seed", o.seed, "random seed");
  sim->add_option("--trades", o.trades, "number of exact trades");
  sim->add_option("--horizon", o.horizon, "time horizon");
  sim->add_option("--grid-step", o.grid_step, "grid step")->capture_default_str();
  sim->add_option("--a0", o.a0, "initial ask (default e^delta)");
  sim->add_option("--b0", o.b0, "initial bid (default e^-delta)");
  sim->add_option("--outdir", o.outdir, "output directory")->capture_default_str();
  sim->add_option("--format", o.format, "csv or json")->capture_default_str();

  auto* fitc = app.add_subcommand("fit", "fit the model to a timestamp_s,price CSV");
  fitc->add_option("--input", o.input, "trades CSV")->required();
  fitc->add_flag("--use-first", o.use_first, "include the first (level) pair");
  fitc->add_flag("--stderr", o.with_stderr, "delta-method standard errors");

  auto* pred = app.add_subcommand("predict", "log-return forecast with band");
  add_params(pred, o);
  pred->add_option("--delta", o.params.delta, "half-spread")->capture_default_str();
  pred->add_option("--input", o.input, "fit JSON (overrides parameter flags)");
  pred->add_option("--horizon", o.horizon, "forecast horizon in seconds")->required();
  pred->add_option("--band-sigmas", o.band_sigmas, "band width in standard deviations")->capture_default_str();

  auto* bt = app.add_subcommand("backtest", "sliding-window back-test on tick data");
  bt->add_option("--input", o.input, "tick CSV")->required();
  bt->add_option("--window-s", o.window_s, "fit window length")->capture_default_str();
  bt->add_option("--lead-s", o.lead_s, "lead time")->capture_default_str();
  bt->add_option("--band-sigmas", o.band_sigmas, "band width")->capture_default_str();
  bt->add_option("--min-trades", o.min_trades, "minimum trades per window")->capture_default_str();
  bt->add_option("--outdir", o.outdir, "output directory")->capture_default_str();

  auto* ver = app.add_subcommand("verify", "run verification suites");
  ver->add_option("--suite", o.suite, "suite name or all")->required();
  ver->add_option("--seed", o.seed, "random seed (default 1)");
  ver->add_option("--reps", o.reps, "replications (suite default if omitted)");
  ver->add_option("--delta", o.delta, "tick size for theorem2")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o, out);
    if (fitc->parsed()) return cmd_fit(o, out);
    if (pred->parsed()) return cmd_predict(o, out);
    if (bt->parsed()) return cmd_backtest(o, out);
    if (ver->parsed()) return cmd_verify(o, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace bgbm::cli
