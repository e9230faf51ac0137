#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "bgbm/dists.hpp"
#include "bgbm/params.hpp"
#include "bgbm/paths.hpp"
#include "bgbm/rng.hpp"

namespace bgbm {

// Trade times and prices with the derived increments
//   u[0] = ln p[0], u[n] = ln(p[n] / p[n-1]);  v[0] = t[0], v[n] = t[n] - t[n-1].
class TradeSequence {
 public:
  TradeSequence() = default;
  // Throws DomainError unless t is strictly increasing and > 0 and p > 0.
  TradeSequence(std::vector<double> t, std::vector<double> p);

  std::size_t size() const { return t_.size(); }
  bool empty() const { return t_.empty(); }
  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& p() const { return p_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& v() const { return v_; }

 private:
  std::vector<double> t_, p_, u_, v_;
};

// One detected crossing of level -2 (n - 1) delta by x_a - x_b.
struct TradeDetection {
  std::size_t index = 0;  // grid index
  std::size_t n = 0;      // trade number, 1-based
};

// Scans left to right: trade n is the first grid index, not before trade
// n - 1, at which diff <= -2 (n - 1) delta. One grid index may carry several
// consecutive trades when a step crosses more than one level.
std::vector<TradeDetection> detect_trades(std::span<const double> diff, double delta);

struct ModifiedPath {
  TimeGrid grid;
  std::vector<double> a_delta, b_delta;
  // Detections in trade order (indices may repeat, see detect_trades).
  std::vector<TradeDetection> trades;
  // Trade prices at the detections, sigma^2-weighted meeting-point estimate.
  std::vector<double> trade_prices;
};

// a_delta = exp(x_a + k delta), b_delta = exp(x_b - k delta) where k is the
// number of trades detected at or before each grid index. Since the
// regulator stays below 2 k delta until trade k + 1, a_delta >= a and
// b_delta <= b hold exactly at every grid point.
ModifiedPath build_modified_paths(const BouncingPath& path, const ModelParams& params);

// Trades of a modified path as a TradeSequence. Detections that share a grid
// index are merged into one trade carrying the last price.
TradeSequence grid_trade_sequence(const ModifiedPath& mp);

// Exact trade sequence: (V_1, U_1) from the first-meeting law with
// alpha = ln a0, beta = ln b0, later pairs i.i.d. with alpha = delta,
// beta = -delta. Deterministic given seed.
TradeSequence exact_trade_sequence(const ModelParams& params, double a0, double b0,
                                   std::size_t n_trades, std::uint64_t seed);
// Same sampler, every trade with T_n <= horizon.
TradeSequence exact_trades_until(const ModelParams& params, double a0, double b0,
                                 double horizon, std::uint64_t seed);
// Z(horizon) from the same draws as exact_trades_until, without storing the
// sequence. Draws come from `rng`.
double exact_log_price_at(const ModelParams& params, double a0, double b0, double horizon,
                          Rng& rng);
// Z at each of the nondecreasing `horizons`, all from one sequence.
std::vector<double> exact_log_prices_at(const ModelParams& params, double a0, double b0,
                                        std::span<const double> horizons, Rng& rng);

std::size_t count_trades(const TradeSequence& seq, double t);
// Z(t) = sum of u over trades with T_n <= t; 0 before the first trade.
double log_price_process(const TradeSequence& seq, double t);

struct DiffusionCoefficients {
  double m = 0.0;
  double s = 0.0;
};
DiffusionCoefficients diffusion_coefficients(const ModelParams& params);

// (delta Z(t / delta) - m t) / sqrt(s delta).
double scaled_process(const TradeSequence& seq, const ModelParams& params, double t);

struct RenewalReport {
  double mean_z = 0.0;
  double mean_z_se = 0.0;
  double var_z = 0.0;
  double var_z_se = 0.0;
  double target_mean = 0.0;  // m t
  double target_var = 0.0;   // s t
  double mean_gap = 0.0;     // |mean_z - m t|
  double var_gap = 0.0;      // |var_z - s t|
};

// Monte Carlo of Z(t) started from a0 = e^delta, b0 = e^-delta, so every
// inter-trade pair has the stationary law. Replication r uses substream r
// of `seed`.
RenewalReport renewal_moment_check(const ModelParams& params, double t, std::size_t replications,
                                   std::uint64_t seed, unsigned threads = 0);

// `timestamp_s,price` CSV, shared with the forecast reader.
void write_trades_csv(std::ostream& os, const TradeSequence& seq);

}  // namespace bgbm
