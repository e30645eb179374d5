#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "isolip/common.hpp"
#include "isolip/measure.hpp"
#include "isolip/mmspace.hpp"

namespace isolip {

enum class FieldProvenance { DistanceFunction, McShaneRandom, User };

/// A real-valued function on the points of a FiniteMMSpace, tagged with how
/// it was produced. Fields used as 1-measurement samples must be
/// 1-Lipschitz within kMassTol.
struct ScalarField {
  std::vector<double> values;
  FieldProvenance provenance = FieldProvenance::User;
};

struct LipschitzCheck {
  bool ok = true;
  std::size_t i = 0, j = 0;  // maximally violating pair when !ok
  double excess = 0.0;       // |f(i)-f(j)| - d(i,j)
};

/// Exact pairwise 1-Lipschitz test with kMassTol slack.
inline LipschitzCheck is_one_lipschitz(const FiniteMMSpace& x, const ScalarField& f) {
  if (f.values.size() != x.size())
    throw std::invalid_argument("is_one_lipschitz: field size does not match the space");
  LipschitzCheck out;
  double worst = kMassTol;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double excess = std::abs(f.values[i] - f.values[j]) - x.dist(i, j);
      if (excess > worst) {
        worst = excess;
        out = {false, i, j, excess};
      }
    }
  return out;
}

/// The distance function d(., base), always 1-Lipschitz.
inline ScalarField distance_field(const FiniteMMSpace& x, std::size_t base) {
  if (base >= x.size()) throw std::invalid_argument("distance_field: bad base index");
  ScalarField f;
  f.provenance = FieldProvenance::DistanceFunction;
  f.values.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f.values[i] = x.dist(i, base);
  return f;
}

/// Random 1-Lipschitz field in McShane form: the minimum over sampled
/// anchors p_j of c_j + d(., p_j), with offsets drawn from
/// [-diam(X), diam(X)]. A minimum of 1-Lipschitz functions, hence
/// 1-Lipschitz; deterministic for a fixed seed.
inline ScalarField mcshane_random(const FiniteMMSpace& x, std::size_t anchors,
                                  std::uint64_t seed) {
  if (anchors == 0) throw std::invalid_argument("mcshane_random: need at least one anchor");
  Rng rng(seed);
  const double diam = x.diameter();
  ScalarField f;
  f.provenance = FieldProvenance::McShaneRandom;
  f.values.assign(x.size(), std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < anchors; ++a) {
    const std::size_t p = rng.uniform_index(x.size());
    const double c = rng.uniform(-diam, diam);
    for (std::size_t i = 0; i < x.size(); ++i)
      f.values[i] = std::min(f.values[i], c + x.dist(i, p));
  }
  return f;
}

/// Pushforward of the space's measure by a 1-Lipschitz field: atoms are the
/// distinct field values, weights the summed point masses.
inline AtomicMeasure pushforward_field(const FiniteMMSpace& x, const ScalarField& f) {
  const auto check = is_one_lipschitz(x, f);
  if (!check.ok)
    throw std::invalid_argument("pushforward_field: field is not 1-Lipschitz (points " +
                                std::to_string(check.i) + "," + std::to_string(check.j) +
                                " exceed by " + std::to_string(check.excess) + ")");
  return AtomicMeasure(f.values, x.weights());
}

/// Sampled lower bound for the observable diameter ObsDiam(X; -kappa): the
/// maximum of diam(f_* m_X; 1 - kappa) over the supplied family. The true
/// value is a sup over all of the 1-measurement, so this is a lower bound
/// only.
inline double obs_diameter_lower(const FiniteMMSpace& x, double kappa,
                                 const std::vector<ScalarField>& family) {
  if (kappa < 0.0 || kappa > 1.0)
    throw std::invalid_argument("obs_diameter_lower: kappa must lie in [0,1]");
  if (family.empty()) throw std::invalid_argument("obs_diameter_lower: empty family");
  const auto diams = parallel_map<double>(family.size(), [&](std::size_t k) {
    return pushforward_field(x, family[k]).partial_diameter(1.0 - kappa);
  });
  return *std::max_element(diams.begin(), diams.end());
}

/// Certified upper bound from an (s, t)-iso-dominant nu of X:
/// ObsDiam(X; -kappa - t) <= diam(nu; 1 - kappa) + s. The premise that nu
/// really is an (s, t)-iso-dominant is the caller's responsibility.
inline double obs_diameter_upper(const AtomicMeasure& nu, double s, double t, double kappa) {
  if (s < 0.0 || t < 0.0 || kappa < 0.0)
    throw std::invalid_argument("obs_diameter_upper: s, t, kappa must be non-negative");
  const double level = std::min(1.0, std::max(0.0, 1.0 - kappa));
  return nu.partial_diameter(level) + s;
}

}  // namespace isolip
