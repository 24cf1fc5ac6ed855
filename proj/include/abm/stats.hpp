#pragma once

#include <optional>
#include <span>
#include <vector>

namespace abm::stats {

double mean(std::span<const double> xs);
// Sample standard deviation (n - 1 denominator). Requires two observations.
double sample_std(std::span<const double> xs);

// last / first - 1; absent when either endpoint is non-positive.
std::optional<double> total_return(std::span<const double> series);

// ln(x[i] / x[i-1]); absent when any value is non-positive.
std::optional<std::vector<double>> log_returns(std::span<const double> series);

// One row of a moment table. Skewness and excess kurtosis are the
// standardised third and fourth central moments (population form); they and
// the Sharpe ratio are absent for a degenerate series, and kurtosis also
// needs at least four observations.
struct Moments {
  std::size_t n{0};
  double mean{0.0};
  double std{0.0};
  std::optional<double> skew;
  std::optional<double> kurtosis;
  std::optional<double> sharpe;
};

std::optional<Moments> moments(std::span<const double> returns);

// Pearson correlation; absent for mismatched lengths, fewer than two points
// or zero variance on either side.
std::optional<double> correlation(std::span<const double> x, std::span<const double> y);

// Spearman rank correlation with average ranks for ties.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

struct SeriesSummary {
  std::optional<double> total_return;
  std::optional<double> volatility;
  std::optional<double> skew;
  std::optional<double> kurtosis;
  std::optional<double> sharpe;
};

// Total return of a level series plus the moments of its log returns.
SeriesSummary summarise_levels(std::span<const double> levels);

}  // namespace abm::stats
