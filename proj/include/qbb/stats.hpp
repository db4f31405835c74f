#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace qbb::stats {

/// Raised when an estimator needs more events than the trace provides.
class InsufficientEventsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for series without variance, where autocorrelation is undefined.
class DegenerateSeriesError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Maximal below-threshold episodes. A run still open at the final epoch is
/// right-censored and left out.
struct DownRunSet {
  std::vector<double> durations;        // s
  std::vector<std::size_t> start_epochs;
  std::size_t censored_epochs = 0;      // length of the dropped terminal run

  std::size_t count() const { return durations.size(); }
};

DownRunSet extract_down_runs(const std::vector<bool>& up, double dt);

/// Residual wait from each epoch until the indicator next holds (0 on up
/// epochs, +inf when it never holds again).
std::vector<double> forward_waits(const std::vector<bool>& up, double dt);

struct WaitStats {
  std::size_t events = 0;               // M
  std::optional<double> mean;           // down-run mean, s
  std::optional<double> std_dev;        // sample std (n-1), needs M >= 2
  std::optional<double> p10, p50, p90;  // nearest rank
  std::optional<double> forward_mean;   // over finite forward waits
  std::size_t forward_censored = 0;
  std::optional<double> inspection_wait;  // mu/2 + sigma^2/(2 mu), needs M >= 2
  bool continuously_up = false;         // M == 0 and no censored run

  /// Mean forward wait, +inf when no finite sample exists.
  double time_to_connectivity() const;
};

WaitStats wait_summary(const DownRunSet& runs, std::span<const double> waits);

/// Nearest-rank empirical quantile of an unsorted sample; q in (0, 1].
double nearest_rank_quantile(std::vector<double> values, double q);

/// Inspection-paradox mean residual wait estimated from down-run lengths.
/// Throws InsufficientEventsError for fewer than two runs.
double inspection_corrected_wait(const DownRunSet& runs);

/// Sample autocorrelation at `lag` (biased covariance normalised by lag 0).
double autocorrelation(std::span<const double> series, std::size_t lag);

/// Integrated autocorrelation time with initial-positive-sequence truncation:
/// 1/2 plus the autocorrelations up to the lag before the first non-positive
/// one, searching lags 1..min(N-1, N/10). Needs N >= 10 and non-zero variance.
double ips_tau_int(std::span<const double> series);

struct AutocorrEstimate {
  double tau_int = 0.5;
  double n_eff = 0.0;
  double sem = 0.0;
};

/// N_eff = N / (2 tau) and SEM = sample std / sqrt(N_eff).
AutocorrEstimate n_eff_sem(std::span<const double> series, double tau_int);

/// Estimate used for exported tables. Short series (N < 10) admit no lag
/// under the truncation rule and get tau = 1/2; constant series get tau = 1/2
/// and SEM 0. Empty series yield nullopt, and a single sample gives SEM 0.
std::optional<AutocorrEstimate> summarize_autocorrelation(std::span<const double> series);

double mean(std::span<const double> xs);
double sample_std(std::span<const double> xs);

/// Down runs grouped by start phase (t_start + k dt) mod period.
struct PhaseBin {
  double phase_lo = 0.0;  // s
  double phase_hi = 0.0;  // s
  std::size_t events = 0;
  std::optional<double> mean;  // s
  std::optional<double> max;   // s
};

std::vector<PhaseBin> phase_binned_runs(const DownRunSet& runs, double t_start, double dt, double period,
                                        std::size_t bins);

}  // namespace qbb::stats
