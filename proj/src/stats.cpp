#include "abm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "abm/types.hpp"

namespace abm::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) throw ValidationError("sample_std needs at least two observations");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::optional<double> total_return(std::span<const double> series) {
  if (series.empty() || !(series.front() > 0.0) || !(series.back() > 0.0)) return std::nullopt;
  return series.back() / series.front() - 1.0;
}

std::optional<std::vector<double>> log_returns(std::span<const double> series) {
  std::vector<double> out;
  if (series.size() < 2) return out;
  out.reserve(series.size() - 1);
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i] > 0.0) || !(series[i - 1] > 0.0)) return std::nullopt;
    out.push_back(std::log(series[i] / series[i - 1]));
  }
  return out;
}

std::optional<Moments> moments(std::span<const double> returns) {
  if (returns.size() < 2) return std::nullopt;
  Moments m;
  m.n = returns.size();
  m.mean = mean(returns);
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double r : returns) {
    const double d = r - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(m.n);
  m.std = std::sqrt(m2 / (n - 1.0));
  m2 /= n;
  m3 /= n;
  m4 /= n;
  // Relative threshold: a constant series leaves only rounding residue.
  const double scale = std::max(1.0, std::abs(m.mean));
  if (!(m2 > 1e-28 * scale * scale)) {
    m.std = 0.0;
    return m;
  }
  m.skew = m3 / std::pow(m2, 1.5);
  if (m.n >= 4) m.kurtosis = m4 / (m2 * m2) - 3.0;
  m.sharpe = m.mean / m.std;
  return m;
}

std::optional<double> correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::vector<double> ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) return std::nullopt;
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return correlation(rx, ry);
}

SeriesSummary summarise_levels(std::span<const double> levels) {
  SeriesSummary s;
  s.total_return = total_return(levels);
  const auto rets = log_returns(levels);
  if (!rets) return s;
  if (const auto m = moments(*rets)) {
    s.volatility = m->std;
    s.skew = m->skew;
    s.kurtosis = m->kurtosis;
    s.sharpe = m->sharpe;
  }
  return s;
}

}  // namespace abm::stats
