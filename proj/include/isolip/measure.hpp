#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isolip/common.hpp"

namespace isolip {

/// A finitely-supported Borel measure on the real line: strictly increasing
/// atom positions with positive weights. Total mass lies in (0, 1]; a
/// probability measure has mass 1 within kMassTol. Immutable after
/// construction, so instances are safe to share across threads.
class AtomicMeasure {
 public:
  /// Builds a measure from atom/weight pairs. Atoms are sorted and positions
  /// closer than kMassTol are merged (weights added), since floating-point
  /// pushforwards produce near-duplicates. Rejects non-positive weights and
  /// total mass outside (0, 1 + kMassTol].
  AtomicMeasure(std::vector<double> atoms, std::vector<double> weights) {
    if (atoms.size() != weights.size())
      throw std::invalid_argument("AtomicMeasure: atoms and weights differ in length");
    if (atoms.empty()) throw std::invalid_argument("AtomicMeasure: empty support");
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (!std::isfinite(atoms[i])) throw std::invalid_argument("AtomicMeasure: non-finite atom");
      if (!(weights[i] > 0.0))
        throw std::invalid_argument("AtomicMeasure: weights must be positive");
      pairs.emplace_back(atoms[i], weights[i]);
    }
    std::sort(pairs.begin(), pairs.end());
    atoms_.reserve(pairs.size());
    weights_.reserve(pairs.size());
    for (const auto& [a, w] : pairs) {
      if (!atoms_.empty() && a - atoms_.back() <= kMassTol) {
        weights_.back() += w;
      } else {
        atoms_.push_back(a);
        weights_.push_back(w);
      }
    }
    cum_.resize(weights_.size());
    std::partial_sum(weights_.begin(), weights_.end(), cum_.begin());
    if (cum_.back() > 1.0 + kMassTol)
      throw std::invalid_argument("AtomicMeasure: total mass exceeds 1");
  }

  static AtomicMeasure dirac(double x) { return AtomicMeasure({x}, {1.0}); }

  /// Uniform probability measure on the given (distinct) positions.
  static AtomicMeasure uniform(std::vector<double> atoms) {
    std::vector<double> w(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
    return AtomicMeasure(std::move(atoms), std::move(w));
  }

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Prefix sums of the weights, aligned with atoms().
  const std::vector<double>& cumulative() const { return cum_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const { return cum_.back(); }
  bool is_probability() const { return std::abs(total_mass() - 1.0) <= kMassTol; }

  double min_atom() const { return atoms_.front(); }
  double max_atom() const { return atoms_.back(); }

  double mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) s += atoms_[i] * weights_[i];
    return s / total_mass();
  }

  /// F(t) = mu((-inf, t]). Right-continuous step function; 0 below the
  /// support and total mass at or above its maximum.
  double cdf(double t) const {
    require_probability("cdf");
    auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t);
    if (it == atoms_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
  }

  /// Generalized inverse of the CDF: the smallest atom whose cumulative
  /// weight reaches s (within kMassTol), and the constant c at s = 0.
  double generalized_inverse(double s, double c) const {
    require_probability("generalized_inverse");
    if (s < 0.0 || s > 1.0)
      throw std::invalid_argument("generalized_inverse: s must lie in [0,1]");
    if (s == 0.0) return c;
    auto it = std::lower_bound(cum_.begin(), cum_.end(), s - kMassTol);
    if (it == cum_.end()) return atoms_.back();
    return atoms_[static_cast<std::size_t>(it - cum_.begin())];
  }

  /// diam(mu; alpha): the least length of a closed window [a,b] with atom
  /// endpoints carrying mass >= alpha. Returns 0 for alpha = 0 (diam of the
  /// empty set) and, more generally, whenever a single atom suffices.
  double partial_diameter(double alpha) const {
    require_probability("partial_diameter");
    if (alpha < 0.0 || alpha > 1.0)
      throw std::invalid_argument("partial_diameter: alpha must lie in [0,1]");
    if (alpha <= kMassTol) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
      // shrink from the left while the window still carries alpha
      while (i < j && window_mass(i + 1, j) >= alpha - kMassTol) ++i;
      if (window_mass(i, j) >= alpha - kMassTol) best = std::min(best, atoms_[j] - atoms_[i]);
    }
    return std::isfinite(best) ? best : 0.0;
  }

 private:
  double window_mass(std::size_t i, std::size_t j) const {
    return cum_[j] - (i > 0 ? cum_[i - 1] : 0.0);
  }

  void require_probability(const char* op) const {
    if (!is_probability())
      throw std::invalid_argument(std::string(op) + ": requires a probability measure");
  }

  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<double> cum_;
};

/// Distribution of the sum of independent draws from mu and nu.
inline AtomicMeasure convolve(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (!mu.is_probability() || !nu.is_probability())
    throw std::invalid_argument("convolve: requires probability measures");
  std::vector<double> atoms;
  std::vector<double> weights;
  atoms.reserve(mu.size() * nu.size());
  weights.reserve(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      atoms.push_back(mu.atoms()[i] + nu.atoms()[j]);
      weights.push_back(mu.weights()[i] * nu.weights()[j]);
    }
  }
  return AtomicMeasure(std::move(atoms), std::move(weights));
}

/// Pushforward under x -> a*x + b. Rejects a = 0; a < 0 reverses the atom
/// order, which the constructor re-sorts.
inline AtomicMeasure scale_shift(const AtomicMeasure& mu, double a, double b) {
  if (a == 0.0) throw std::invalid_argument("scale_shift: scale must be nonzero");
  std::vector<double> atoms;
  atoms.reserve(mu.size());
  for (double x : mu.atoms()) atoms.push_back(a * x + b);
  return AtomicMeasure(std::move(atoms), mu.weights());
}

/// Gap structure of a support: delta_minus[i] is the gap to the previous
/// atom (infinity at the minimum), delta_plus[i] the gap to the next
/// (infinity at the maximum), and max_gap the largest finite delta_minus.
/// A singleton support has no gap above its infimum; max_gap is reported
/// as 0 with the singleton flag set.
struct SupportGaps {
  std::vector<double> delta_minus;
  std::vector<double> delta_plus;
  double max_gap = 0.0;
  bool singleton = false;
};

inline SupportGaps support_gaps(const AtomicMeasure& nu) {
  const auto& a = nu.atoms();
  const double inf = std::numeric_limits<double>::infinity();
  SupportGaps g;
  g.delta_minus.assign(a.size(), inf);
  g.delta_plus.assign(a.size(), inf);
  g.singleton = a.size() == 1;
  for (std::size_t i = 1; i < a.size(); ++i) {
    g.delta_minus[i] = a[i] - a[i - 1];
    g.delta_plus[i - 1] = a[i] - a[i - 1];
    g.max_gap = std::max(g.max_gap, g.delta_minus[i]);
  }
  return g;
}

}  // namespace isolip
