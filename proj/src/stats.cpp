#include "qbb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qbb::stats {

DownRunSet extract_down_runs(const std::vector<bool>& up, double dt) {
  DownRunSet out;
  const std::size_t n = up.size();
  std::size_t k = 0;
  while (k < n) {
    if (up[k]) {
      ++k;
      continue;
    }
    const std::size_t start = k;
    while (k < n && !up[k]) ++k;
    const std::size_t len = k - start;
    if (k == n) {
      out.censored_epochs = len;
    } else {
      out.durations.push_back(static_cast<double>(len) * dt);
      out.start_epochs.push_back(start);
    }
  }
  return out;
}

std::vector<double> forward_waits(const std::vector<bool>& up, double dt) {
  const std::size_t n = up.size();
  std::vector<double> out(n, std::numeric_limits<double>::infinity());
  std::size_t next_up = n;  // n marks "never again"
  for (std::size_t k = n; k-- > 0;) {
    if (up[k]) next_up = k;
    if (next_up < n) out[k] = static_cast<double>(next_up - k) * dt;
  }
  return out;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InsufficientEventsError("quantile of an empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-12));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

double inspection_corrected_wait(const DownRunSet& runs) {
  if (runs.count() < 2) throw InsufficientEventsError("inspection-corrected wait needs at least two down runs");
  const double mu = mean(runs.durations);
  const double sd = sample_std(runs.durations);
  return 0.5 * mu + sd * sd / (2.0 * mu);
}

double WaitStats::time_to_connectivity() const {
  return forward_mean ? *forward_mean : std::numeric_limits<double>::infinity();
}

WaitStats wait_summary(const DownRunSet& runs, std::span<const double> waits) {
  WaitStats s;
  s.events = runs.count();
  if (s.events > 0) {
    s.mean = mean(runs.durations);
    s.p10 = nearest_rank_quantile(runs.durations, 0.10);
    s.p50 = nearest_rank_quantile(runs.durations, 0.50);
    s.p90 = nearest_rank_quantile(runs.durations, 0.90);
  }
  if (s.events >= 2) {
    s.std_dev = sample_std(runs.durations);
    s.inspection_wait = inspection_corrected_wait(runs);
  }
  s.continuously_up = s.events == 0 && runs.censored_epochs == 0;

  double sum = 0.0;
  std::size_t finite = 0;
  for (double w : waits) {
    if (std::isfinite(w)) {
      sum += w;
      ++finite;
    } else {
      ++s.forward_censored;
    }
  }
  if (finite > 0) s.forward_mean = sum / static_cast<double>(finite);
  return s;
}

double autocorrelation(std::span<const double> series, std::size_t lag) {
  const std::size_t n = series.size();
  if (n == 0 || lag >= n) return 0.0;
  const double m = mean(series);
  double c0 = 0.0;
  for (double x : series) c0 += (x - m) * (x - m);
  if (c0 == 0.0) throw DegenerateSeriesError("autocorrelation of a constant series");
  double cl = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) cl += (series[i] - m) * (series[i + lag] - m);
  return cl / c0;
}

double ips_tau_int(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 10) throw std::invalid_argument("ips_tau_int: series needs at least 10 samples");
  const double m = mean(series);
  std::vector<double> centered(series.begin(), series.end());
  double c0 = 0.0;
  for (double& x : centered) {
    x -= m;
    c0 += x * x;
  }
  if (!(c0 > 0.0)) throw DegenerateSeriesError("ips_tau_int: series has zero variance");

  const std::size_t max_lag = std::min(n - 1, n / 10);
  double tau = 0.5;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double cl = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) cl += centered[i] * centered[i + lag];
    const double rho = cl / c0;
    if (rho <= 0.0) break;
    tau += rho;
  }
  return tau;
}

AutocorrEstimate n_eff_sem(std::span<const double> series, double tau_int) {
  if (!(tau_int >= 0.5)) throw std::invalid_argument("n_eff_sem: tau_int must be >= 0.5");
  AutocorrEstimate e;
  e.tau_int = tau_int;
  e.n_eff = static_cast<double>(series.size()) / (2.0 * tau_int);
  e.sem = e.n_eff > 0.0 ? sample_std(series) / std::sqrt(e.n_eff) : 0.0;
  return e;
}

std::optional<AutocorrEstimate> summarize_autocorrelation(std::span<const double> series) {
  if (series.empty()) return std::nullopt;
  const bool constant = std::all_of(series.begin(), series.end(), [&](double x) { return x == series.front(); });
  if (series.size() < 10 || constant) return n_eff_sem(series, 0.5);
  return n_eff_sem(series, ips_tau_int(series));
}

std::vector<PhaseBin> phase_binned_runs(const DownRunSet& runs, double t_start, double dt, double period,
                                        std::size_t bins) {
  if (!(period > 0.0) || bins == 0) throw std::invalid_argument("phase binning needs period > 0 and bins > 0");
  std::vector<PhaseBin> out(bins);
  std::vector<std::vector<double>> members(bins);
  const double width = period / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].phase_lo = width * static_cast<double>(b);
    out[b].phase_hi = width * static_cast<double>(b + 1);
  }
  for (std::size_t i = 0; i < runs.count(); ++i) {
    double phase = std::fmod(t_start + static_cast<double>(runs.start_epochs[i]) * dt, period);
    if (phase < 0.0) phase += period;
    auto b = static_cast<std::size_t>(phase / width);
    b = std::min(b, bins - 1);
    members[b].push_back(runs.durations[i]);
  }
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].events = members[b].size();
    if (!members[b].empty()) {
      out[b].mean = mean(members[b]);
      out[b].max = *std::max_element(members[b].begin(), members[b].end());
    }
  }
  return out;
}

}  // namespace qbb::stats
