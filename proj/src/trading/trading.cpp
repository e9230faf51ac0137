#include "bgbm/trading.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "bgbm/errors.hpp"
#include "bgbm/numeric.hpp"
#include "bgbm/parallel.hpp"

namespace bgbm {

TradeSequence::TradeSequence(std::vector<double> t, std::vector<double> p)
    : t_(std::move(t)), p_(std::move(p)) {
  if (t_.size() != p_.size()) {
    throw InputShapeError("trade sequence: " + std::to_string(t_.size()) + " times but " +
                          std::to_string(p_.size()) + " prices");
  }
  const std::size_t n = t_.size();
  u_.resize(n);
  v_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(t_[i]) || !(t_[i] > (i == 0 ? 0.0 : t_[i - 1]))) {
      throw DomainError("trade times must be finite, > 0 and strictly increasing (index " +
                        std::to_string(i) + ")");
    }
    if (!std::isfinite(p_[i]) || !(p_[i] > 0.0)) {
      throw DomainError("trade prices must be finite and > 0 (index " + std::to_string(i) + ")");
    }
    u_[i] = i == 0 ? std::log(p_[0]) : std::log(p_[i] / p_[i - 1]);
    v_[i] = i == 0 ? t_[0] : t_[i] - t_[i - 1];
  }
}

namespace {

// Level for trade n = k + 1. Written as 2 (k delta) so that the comparison
// agrees bit for bit with the k * delta offset of the modified paths.
double level(std::size_t k, double delta) { return -2.0 * (static_cast<double>(k) * delta); }

}  // namespace

std::vector<TradeDetection> detect_trades(std::span<const double> diff, double delta) {
  if (!(delta > 0.0)) throw DomainError("detect_trades: delta must be > 0");
  std::vector<TradeDetection> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    while (diff[i] <= level(k, delta)) {
      out.push_back({i, k + 1});
      ++k;
    }
  }
  return out;
}

ModifiedPath build_modified_paths(const BouncingPath& path, const ModelParams& params) {
  const double delta = params.delta;
  if (!(delta > 0.0)) throw DomainError("build_modified_paths: delta must be > 0");
  const std::size_t n = path.grid.size();
  if (path.x_a.size() != n || path.x_b.size() != n) {
    throw InputShapeError("build_modified_paths: path series differ from the grid length");
  }
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = path.x_a[i] - path.x_b[i];

  ModifiedPath mp{path.grid, std::vector<double>(n), std::vector<double>(n),
                  detect_trades(diff, delta), {}};

  // Meeting-point weights: sigma_b^2 on the ask side, sigma_a^2 on the bid
  // side. The drift-only construction has no noise to weight by.
  const double va = params.sigma_a * params.sigma_a;
  const double vb = params.sigma_b * params.sigma_b;
  const double var = va + vb;
  const double wa = var > 0.0 ? vb / var : 0.5;
  const double wb = var > 0.0 ? va / var : 0.5;

  mp.trade_prices.reserve(mp.trades.size());
  for (const auto& d : mp.trades) {
    const double off = static_cast<double>(d.n - 1) * delta;
    const double ya = path.x_a[d.index] + off;
    const double yb = path.x_b[d.index] - off;
    mp.trade_prices.push_back(std::exp(wa * ya + wb * yb));
  }

  std::size_t k = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (next < mp.trades.size() && mp.trades[next].index == i) {
      ++k;
      ++next;
    }
    const double off = static_cast<double>(k) * delta;
    mp.a_delta[i] = std::exp(path.x_a[i] + off);
    mp.b_delta[i] = std::exp(path.x_b[i] - off);
  }
  return mp;
}

TradeSequence grid_trade_sequence(const ModifiedPath& mp) {
  std::vector<double> t, p;
  for (std::size_t j = 0; j < mp.trades.size(); ++j) {
    const std::size_t idx = mp.trades[j].index;
    // Quotes that already cross at time 0 are not an observed trade.
    if (idx == 0) continue;
    if (!t.empty() && t.back() == mp.grid[idx]) {
      p.back() = mp.trade_prices[j];
    } else {
      t.push_back(mp.grid[idx]);
      p.push_back(mp.trade_prices[j]);
    }
  }
  return TradeSequence(std::move(t), std::move(p));
}

namespace {

// Constants of the (U, V) law for fixed starting log levels.
struct PairSampler {
  IGParams ig;
  double w_alpha, drift, cond_sd_per_sqrt_t;

  PairSampler(const ModelParams& m, double alpha, double beta) {
    const JointLawParams jp{m, alpha, beta};
    ig = v_marginal_params(jp);
    const double va = m.sigma_a * m.sigma_a;
    const double vb = m.sigma_b * m.sigma_b;
    const double var = va + vb;
    w_alpha = (vb * alpha + va * beta) / var;
    drift = (vb * m.mu_a + va * m.mu_b) / var;
    cond_sd_per_sqrt_t = m.sigma_a * m.sigma_b / std::sqrt(var);
  }

  // Same draw order as sample_uv: V first, then the normal for U | V.
  void draw(Rng& rng, double& u, double& v) const {
    v = ig_sample(ig, rng);
    u = w_alpha + drift * v + cond_sd_per_sqrt_t * std::sqrt(v) * rng.normal();
  }
};

void check_start(const ModelParams& params, double a0, double b0) {
  validate(params);
  if (!(b0 > 0.0) || !std::isfinite(a0)) throw DomainError("initial prices must be positive");
  if (!(a0 > b0)) throw DomainError("exact trade sampler needs a0 > b0");
}

template <typename Emit>
void run_exact(const ModelParams& params, double alpha, double beta, Rng& rng, Emit&& emit) {
  const PairSampler first(params, alpha, beta);
  const PairSampler rest(params, params.delta, -params.delta);
  double t = 0.0;
  double z = 0.0;
  for (std::size_t n = 0;; ++n) {
    double u, v;
    (n == 0 ? first : rest).draw(rng, u, v);
    t += v;
    z += u;
    if (!emit(t, z)) return;
  }
}

TradeSequence sequence_from_logs(std::vector<double> t, const std::vector<double>& z) {
  std::vector<double> p(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) p[i] = std::exp(z[i]);
  return TradeSequence(std::move(t), std::move(p));
}

}  // namespace

TradeSequence exact_trade_sequence(const ModelParams& params, double a0, double b0,
                                   std::size_t n_trades, std::uint64_t seed) {
  check_start(params, a0, b0);
  if (n_trades < 1) throw DomainError("exact_trade_sequence: n_trades must be >= 1");
  Rng rng(seed);
  std::vector<double> t, z;
  t.reserve(n_trades);
  z.reserve(n_trades);
  run_exact(params, std::log(a0), std::log(b0), rng, [&](double tt, double zz) {
    t.push_back(tt);
    z.push_back(zz);
    return t.size() < n_trades;
  });
  return sequence_from_logs(std::move(t), z);
}

TradeSequence exact_trades_until(const ModelParams& params, double a0, double b0,
                                 double horizon, std::uint64_t seed) {
  check_start(params, a0, b0);
  if (!(horizon >= 0.0) || std::isinf(horizon)) {
    throw DomainError("exact_trades_until: horizon must be finite and >= 0");
  }
  Rng rng(seed);
  std::vector<double> t, z;
  run_exact(params, std::log(a0), std::log(b0), rng, [&](double tt, double zz) {
    if (tt > horizon) return false;
    t.push_back(tt);
    z.push_back(zz);
    return true;
  });
  return sequence_from_logs(std::move(t), z);
}

double exact_log_price_at(const ModelParams& params, double a0, double b0, double horizon,
                          Rng& rng) {
  const double h[] = {horizon};
  return exact_log_prices_at(params, a0, b0, h, rng)[0];
}

std::vector<double> exact_log_prices_at(const ModelParams& params, double a0, double b0,
                                        std::span<const double> horizons, Rng& rng) {
  check_start(params, a0, b0);
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!(horizons[i] >= 0.0) || std::isinf(horizons[i]) || (i > 0 && horizons[i] < horizons[i - 1])) {
      throw DomainError("exact_log_prices_at: horizons must be finite, >= 0 and nondecreasing");
    }
  }
  std::vector<double> out(horizons.size(), 0.0);
  if (horizons.empty()) return out;
  std::size_t j = 0;
  double z_prev = 0.0;
  run_exact(params, std::log(a0), std::log(b0), rng, [&](double tt, double zz) {
    while (j < horizons.size() && tt > horizons[j]) out[j++] = z_prev;
    z_prev = zz;
    return j < horizons.size();
  });
  return out;
}

std::size_t count_trades(const TradeSequence& seq, double t) {
  if (!(t >= 0.0)) throw DomainError("count_trades: t must be >= 0");
  const auto& ts = seq.t();
  return static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
}

double log_price_process(const TradeSequence& seq, double t) {
  const std::size_t n = count_trades(seq, t);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) z += seq.u()[i];
  return z;
}

DiffusionCoefficients diffusion_coefficients(const ModelParams& params) {
  validate(params);
  return {0.5 * (params.mu_a + params.mu_b), 0.25 * params.total_variance()};
}

double scaled_process(const TradeSequence& seq, const ModelParams& params, double t) {
  const auto c = diffusion_coefficients(params);
  const double d = params.delta;
  return (d * log_price_process(seq, t / d) - c.m * t) / std::sqrt(c.s * d);
}

RenewalReport renewal_moment_check(const ModelParams& params, double t, std::size_t replications,
                                   std::uint64_t seed, unsigned threads) {
  validate(params);
  if (!(t > 0.0) || std::isinf(t)) throw DomainError("renewal_moment_check: t must be finite and > 0");
  if (replications < 2) throw InsufficientDataError("renewal_moment_check needs >= 2 replications");
  if (threads == 0) threads = default_thread_count();

  std::vector<double> z(replications);
  parallel_for(replications, threads, [&](std::size_t r) {
    Rng rng(seed, r);
    double result = 0.0;
    run_exact(params, params.delta, -params.delta, rng, [&](double tt, double zz) {
      if (tt > t) return false;
      result = zz;
      return true;
    });
    z[r] = result;
  });

  const auto c = diffusion_coefficients(params);
  const double n = static_cast<double>(replications);
  RenewalReport rep;
  rep.mean_z = mean(z);
  rep.var_z = variance(z);
  rep.mean_z_se = std::sqrt(rep.var_z / n);
  std::vector<double> c4(replications);
  for (std::size_t i = 0; i < replications; ++i) {
    const double d = z[i] - rep.mean_z;
    c4[i] = d * d * d * d;
  }
  const double m4 = pairwise_sum(c4) / n;
  rep.var_z_se = std::sqrt(std::max(m4 - rep.var_z * rep.var_z, 0.0) / n);
  rep.target_mean = c.m * t;
  rep.target_var = c.s * t;
  rep.mean_gap = std::abs(rep.mean_z - rep.target_mean);
  rep.var_gap = std::abs(rep.var_z - rep.target_var);
  return rep;
}

void write_trades_csv(std::ostream& os, const TradeSequence& seq) {
  os << "timestamp_s,price\n";
  char buf[64];
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto r = std::to_chars(buf, buf + sizeof(buf), seq.t()[i]);
    os.write(buf, r.ptr - buf);
    os << ',';
    r = std::to_chars(buf, buf + sizeof(buf), seq.p()[i]);
    os.write(buf, r.ptr - buf);
    os << '\n';
  }
}

}  // namespace bgbm
