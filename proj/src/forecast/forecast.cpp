#include "bgbm/forecast.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "bgbm/errors.hpp"
#include "bgbm/parallel.hpp"
#include "bgbm/trading.hpp"

namespace bgbm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

double parse_number(std::string_view s, std::size_t line, const char* column) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line) + ": bad " + column + " '" + std::string(s) + "'");
  }
  return v;
}

void put(std::ostream& os, double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, r.ptr - buf);
}

}  // namespace

TickData read_tick_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  // Header, skipping a UTF-8 byte-order mark.
  if (!std::getline(is, line)) throw InputError("empty input: expected header timestamp_s,price");
  ++line_no;
  std::string_view header = line;
  if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  if (trim(header) != "timestamp_s,price") {
    throw InputError("line 1: expected header timestamp_s,price, got '" + std::string(trim(header)) + "'");
  }
  TickData d;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw InputError("line " + std::to_string(line_no) + ": expected 2 fields");
    }
    const double t = parse_number(row.substr(0, comma), line_no, "timestamp_s");
    const double p = parse_number(row.substr(comma + 1), line_no, "price");
    if (!(p > 0.0)) throw InputError("line " + std::to_string(line_no) + ": price must be > 0");
    if (!d.timestamp_s.empty() && t < d.timestamp_s.back()) {
      throw InputError("line " + std::to_string(line_no) + ": timestamps must be nondecreasing");
    }
    d.timestamp_s.push_back(t);
    d.price.push_back(p);
  }
  if (d.timestamp_s.empty()) throw InputError("input has a header but no trades");
  return d;
}

void write_tick_csv(std::ostream& os, const TickData& data) {
  os << "timestamp_s,price\n";
  for (std::size_t i = 0; i < data.timestamp_s.size(); ++i) {
    put(os, data.timestamp_s[i]);
    os << ',';
    put(os, data.price[i]);
    os << '\n';
  }
}

TickData merge_ties(const TickData& data) {
  TickData out;
  for (std::size_t i = 0; i < data.timestamp_s.size(); ++i) {
    if (!out.timestamp_s.empty() && out.timestamp_s.back() == data.timestamp_s[i]) {
      out.price.back() = data.price[i];
    } else {
      out.timestamp_s.push_back(data.timestamp_s[i]);
      out.price.push_back(data.price[i]);
    }
  }
  return out;
}

void validate(const ForecastConfig& cfg) {
  if (!(cfg.window_len_s > 0.0) || !std::isfinite(cfg.window_len_s))
    throw DomainError("window length must be > 0");
  if (!(cfg.lead_time_s > 0.0) || !std::isfinite(cfg.lead_time_s))
    throw DomainError("lead time must be > 0");
  if (!(cfg.band_width_sigmas >= 0.0) || !std::isfinite(cfg.band_width_sigmas))
    throw DomainError("band width must be >= 0");
  if (cfg.min_trades < 1) throw DomainError("min_trades must be >= 1");
}

double relative_error(double real_price, double predicted_price) {
  return (real_price - predicted_price) / real_price;
}

Prediction predict(const EstimateResult& est, double horizon_s, double band_sigmas) {
  if (!(horizon_s > 0.0)) throw DomainError("predict: horizon must be > 0");
  if (!(band_sigmas >= 0.0)) throw DomainError("predict: band width must be >= 0");
  const ModelParams& th = est.theta_hat;
  const double point = 0.5 * (th.mu_a + th.mu_b) * horizon_s;
  const double half = band_sigmas * 0.5 * std::sqrt(th.total_variance() * horizon_s);
  return {point, point - half, point + half};
}

namespace {

ForecastRecord forecast_one(const TickData& d, std::size_t target, const ForecastConfig& cfg) {
  const double tau = d.timestamp_s[target];
  const double end = tau - cfg.lead_time_s;
  const double start = end - cfg.window_len_s;
  const auto& ts = d.timestamp_s;
  const auto first = static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), start) - ts.begin());
  const auto last = static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), end) - ts.begin());

  ForecastRecord r;
  r.target_time_s = tau;
  r.realized_price = d.price[target];
  r.window_trades = last - first;
  if (r.window_trades > 0) {
    r.p0 = d.price[last - 1];
    r.last_used_s = ts[last - 1];
  }
  if (r.window_trades < cfg.min_trades || r.window_trades < 2) {
    r.skipped = true;
    r.reason = "too_few_trades";
    return r;
  }

  // Only increments enter the fit, so the times are shifted to keep them
  // positive without changing any v.
  const double shift = start - 1.0;
  std::vector<double> t(ts.begin() + static_cast<std::ptrdiff_t>(first),
                        ts.begin() + static_cast<std::ptrdiff_t>(last));
  for (double& x : t) x -= shift;
  std::vector<double> p(d.price.begin() + static_cast<std::ptrdiff_t>(first),
                        d.price.begin() + static_cast<std::ptrdiff_t>(last));
  try {
    const EstimateResult est = fit(sample_moments(TradeSequence(std::move(t), std::move(p))));
    r.delta_hat = est.theta_hat.delta;
    r.pred = predict(est, tau - end, cfg.band_width_sigmas);
  } catch (const InsufficientDataError&) {
    r.skipped = true;
    r.reason = "too_few_trades";
    return r;
  } catch (const DegenerateDataError&) {
    r.skipped = true;
    r.reason = "degenerate_moments";
    return r;
  } catch (const NumericalError&) {
    r.skipped = true;
    r.reason = "numerical";
    return r;
  }
  const double predicted_price = r.p0 * std::exp(r.pred.point);
  r.relative_error = relative_error(r.realized_price, predicted_price);
  return r;
}

}  // namespace

BacktestResult backtest(const TickData& data, const ForecastConfig& cfg) {
  validate(cfg);
  if (data.timestamp_s.empty()) throw InputError("backtest: no trades");
  if (data.timestamp_s.size() != data.price.size()) throw InputShapeError("backtest: column lengths differ");
  const TickData d = merge_ties(data);
  const double earliest = d.timestamp_s.front() + cfg.window_len_s + cfg.lead_time_s;
  if (d.timestamp_s.back() < earliest) {
    throw InputError("backtest: data span is shorter than window + lead time");
  }
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < d.timestamp_s.size(); ++i) {
    if (d.timestamp_s[i] >= earliest) targets.push_back(i);
  }

  BacktestResult out;
  out.records.resize(targets.size());
  const unsigned threads = cfg.threads == 0 ? default_thread_count() : cfg.threads;
  parallel_for(targets.size(), threads,
               [&](std::size_t k) { out.records[k] = forecast_one(d, targets[k], cfg); });

  BacktestSummary& s = out.summary;
  s.n_records = out.records.size();
  double sum = 0.0;
  std::size_t used = 0, covered = 0;
  for (const auto& r : out.records) {
    if (r.skipped) {
      ++s.n_skipped;
      continue;
    }
    ++used;
    const double a = std::abs(r.relative_error);
    s.max_abs_re = std::max(s.max_abs_re, a);
    sum += a;
    const double realized = std::log(r.realized_price / r.p0);
    if (realized >= r.pred.lower && realized <= r.pred.upper) ++covered;
  }
  if (used > 0) {
    s.mean_abs_re = sum / static_cast<double>(used);
    s.band_coverage = static_cast<double>(covered) / static_cast<double>(used);
  }
  return out;
}

std::vector<DeltaPoint> delta_trace(const BacktestResult& result) {
  std::vector<DeltaPoint> out;
  for (const auto& r : result.records) {
    if (!r.skipped) out.push_back({r.target_time_s, r.delta_hat});
  }
  return out;
}

std::vector<DeltaPoint> delta_trace(const TickData& data, const ForecastConfig& cfg) {
  return delta_trace(backtest(data, cfg));
}

void write_records_csv(std::ostream& os, const std::vector<ForecastRecord>& records) {
  os << "target_time_s,p0,pred_log_return,lower,upper,realized_price,relative_error,skipped,reason\n";
  for (const auto& r : records) {
    put(os, r.target_time_s);
    os << ',';
    if (r.window_trades > 0) put(os, r.p0);
    os << ',';
    if (!r.skipped) {
      put(os, r.pred.point);
      os << ',';
      put(os, r.pred.lower);
      os << ',';
      put(os, r.pred.upper);
    } else {
      os << ",,";
    }
    os << ',';
    put(os, r.realized_price);
    os << ',';
    if (!r.skipped) put(os, r.relative_error);
    os << ',' << (r.skipped ? "true" : "false") << ',' << r.reason << '\n';
  }
}

nlohmann::json to_json(const BacktestSummary& s) {
  return {{"n_records", s.n_records},
          {"n_skipped", s.n_skipped},
          {"max_abs_re", s.max_abs_re},
          {"mean_abs_re", s.mean_abs_re},
          {"band_coverage", s.band_coverage}};
}

void write_delta_trace_csv(std::ostream& os, const std::vector<DeltaPoint>& trace) {
  os << "target_time_s,delta_hat\n";
  for (const auto& p : trace) {
    put(os, p.target_time_s);
    os << ',';
    put(os, p.delta_hat);
    os << '\n';
  }
}

TickData synthetic_session(const ModelParams& params, double start_price, double duration_s,
                           std::uint64_t seed) {
  if (!(start_price > 0.0)) throw DomainError("synthetic_session: start price must be > 0");
  const double a0 = start_price * std::exp(params.delta);
  const double b0 = start_price * std::exp(-params.delta);
  const TradeSequence seq = exact_trades_until(params, a0, b0, duration_s, seed);
  return {seq.t(), seq.p()};
}

}  // namespace bgbm
