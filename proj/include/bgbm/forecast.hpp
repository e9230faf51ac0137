#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "bgbm/estimate.hpp"
#include "bgbm/params.hpp"

namespace bgbm {

// Trades in time order. Timestamps are seconds from an arbitrary origin and
// may repeat; prices are > 0.
struct TickData {
  std::vector<double> timestamp_s;
  std::vector<double> price;
};

// Reads `timestamp_s,price` CSV. Throws InputError with the line number on
// a bad header, malformed number, decreasing timestamp or nonpositive price,
// and on a file without rows.
TickData read_tick_csv(std::istream& is);
void write_tick_csv(std::ostream& os, const TickData& data);

// Collapses runs of equal timestamps into their last trade.
TickData merge_ties(const TickData& data);

struct ForecastConfig {
  double window_len_s = 600.0;
  double lead_time_s = 60.0;
  double band_width_sigmas = 3.0;
  std::size_t min_trades = 10;
  unsigned threads = 0;  // 0: default_thread_count()
};
void validate(const ForecastConfig& cfg);

struct Prediction {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Log-return forecast over `horizon_s`: point m t, half-width
// band_sigmas * sqrt(s t) with m, s the fitted diffusion coefficients.
Prediction predict(const EstimateResult& est, double horizon_s, double band_sigmas = 3.0);

// (real - predicted) / real.
double relative_error(double real_price, double predicted_price);

struct ForecastRecord {
  double target_time_s = 0.0;
  double p0 = 0.0;
  Prediction pred;
  double realized_price = 0.0;
  double relative_error = 0.0;
  double delta_hat = 0.0;
  std::size_t window_trades = 0;
  // Latest timestamp that entered the fit.
  double last_used_s = 0.0;
  bool skipped = false;
  // Empty unless skipped: too_few_trades, degenerate_moments, numerical.
  std::string reason;
};

struct BacktestSummary {
  std::size_t n_records = 0;
  std::size_t n_skipped = 0;
  double max_abs_re = 0.0;
  double mean_abs_re = 0.0;
  double band_coverage = 0.0;
};

struct BacktestResult {
  std::vector<ForecastRecord> records;
  BacktestSummary summary;
};

// For every trade at tau with a complete window [tau - lead - W, tau - lead)
// inside the data: fit on the window's trades, take P(0) as the last price in
// it and forecast over t = tau - (tau - lead). Windows that cannot be fitted
// are kept as skipped records. Ties are merged first.
BacktestResult backtest(const TickData& data, const ForecastConfig& cfg);

struct DeltaPoint {
  double target_time_s = 0.0;
  double delta_hat = 0.0;
};
std::vector<DeltaPoint> delta_trace(const TickData& data, const ForecastConfig& cfg);
std::vector<DeltaPoint> delta_trace(const BacktestResult& result);

// Header `target_time_s,p0,pred_log_return,lower,upper,realized_price,
// relative_error,skipped,reason`; numeric fields of skipped rows are empty.
void write_records_csv(std::ostream& os, const std::vector<ForecastRecord>& records);
nlohmann::json to_json(const BacktestSummary& s);
void write_delta_trace_csv(std::ostream& os, const std::vector<DeltaPoint>& trace);

// Exact-sampler trades over [0, duration_s] starting from quotes
// start_price * e^{+-delta}.
TickData synthetic_session(const ModelParams& params, double start_price, double duration_s,
                           std::uint64_t seed);

}  // namespace bgbm
