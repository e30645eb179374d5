#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isolip/common.hpp"
#include "isolip/isoorder.hpp"
#include "isolip/lipschitz.hpp"
#include "isolip/measure.hpp"
#include "isolip/mmspace.hpp"

namespace isolip {

/// Largest point count for which exhaustive 2^|X| subset sweeps run.
inline constexpr std::size_t kDefaultSubsetBudget = 22;

namespace detail {

/// Enumerates every nonempty subset of X in Gray-code order, maintaining
/// the subset volume and the mass of its closed radius-neighborhood
/// incrementally (one point flips per step). On uniform spaces volumes are
/// recomputed from integer counts, so they are exact multiples of 1/|X|.
/// visit(mask, volume, neighborhood_mass) returns false to stop early.
template <typename Visit>
void gray_sweep(const FiniteMMSpace& x, double radius, std::size_t budget, Visit visit) {
  const std::size_t n = x.size();
  if (n > budget || n > 25)
    throw budget_error("subset enumeration budget exceeded (" + std::to_string(n) +
                       " points); exact sweeps need |X| <= " + std::to_string(budget) +
                       ". A sampling fallback would not be exact and is not provided.");
  std::vector<std::vector<std::uint32_t>> ball(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t y = 0; y < n; ++y)
      if (x.dist(y, p) <= radius + kMetricTol) ball[p].push_back(static_cast<std::uint32_t>(y));

  const bool uniform = x.uniform_weights();
  const double w0 = 1.0 / static_cast<double>(n);
  std::vector<int> count(n, 0);
  double vol = 0.0, nb = 0.0;
  int vol_points = 0, nb_points = 0;
  std::uint32_t mask = 0;
  const std::uint32_t end = static_cast<std::uint32_t>(1) << n;
  for (std::uint32_t g = 1; g < end; ++g) {
    const unsigned bit = static_cast<unsigned>(std::countr_zero(g));
    const std::uint32_t flip = static_cast<std::uint32_t>(1) << bit;
    mask ^= flip;
    if ((mask & flip) != 0) {
      vol += x.weights()[bit];
      ++vol_points;
      for (std::uint32_t y : ball[bit])
        if (count[y]++ == 0) {
          nb += x.weights()[y];
          ++nb_points;
        }
    } else {
      vol -= x.weights()[bit];
      --vol_points;
      for (std::uint32_t y : ball[bit])
        if (--count[y] == 0) {
          nb -= x.weights()[y];
          --nb_points;
        }
    }
    const double v = uniform ? vol_points * w0 : vol;
    const double b = uniform ? nb_points * w0 : nb;
    if (!visit(mask, v, b)) return;
  }
}

inline std::vector<std::size_t> mask_to_indices(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1)
    if ((mask & 1u) != 0) out.push_back(i);
  return out;
}

/// Tolerance-bucketed lookup: volumes within kMassTol share a bucket.
template <typename T>
typename std::map<double, T>::iterator find_bucket(std::map<double, T>& m, double v) {
  auto it = m.lower_bound(v - kMassTol);
  if (it != m.end() && std::abs(it->first - v) <= kMassTol) return it;
  return m.end();
}

}  // namespace detail

struct ProfileEntry {
  double volume = 0.0;
  double value = 0.0;                 // I_X^eps(volume)
  std::vector<std::size_t> witness;   // a minimizing subset
};

/// The eps-discrete isoperimetric profile with one entry per achievable
/// volume and a witnessing minimizer each.
struct ProfileTable {
  double eps = 0.0;
  std::vector<ProfileEntry> entries;  // sorted by volume

  const ProfileEntry* at_volume(double v) const {
    for (const auto& e : entries)
      if (std::abs(e.volume - v) <= kMassTol) return &e;
    return nullptr;
  }
};

/// Exhaustive minimum of m(B_eps(A)) over subsets A of each achievable
/// volume. Deterministic: the Gray-code sweep order fixes which minimizer
/// is recorded.
inline ProfileTable isoperimetric_profile(const FiniteMMSpace& x, double eps,
                                          std::size_t budget = kDefaultSubsetBudget) {
  if (eps < 0.0) throw std::invalid_argument("isoperimetric_profile: eps must be >= 0");
  struct Slot {
    double value;
    std::uint32_t witness;
  };
  std::map<double, Slot> slots;
  slots.emplace(0.0, Slot{0.0, 0});  // the empty set
  detail::gray_sweep(x, eps, budget, [&](std::uint32_t mask, double vol, double nb) {
    auto it = detail::find_bucket(slots, vol);
    if (it == slots.end())
      slots.emplace(vol, Slot{nb, mask});
    else if (nb < it->second.value) {
      it->second.value = nb;
      it->second.witness = mask;
    }
    return true;
  });
  ProfileTable table;
  table.eps = eps;
  table.entries.reserve(slots.size());
  for (const auto& [v, slot] : slots)
    table.entries.push_back({v, slot.value, detail::mask_to_indices(slot.witness)});
  return table;
}

/// All values of m_X on subsets (the image of the measure), sorted.
inline std::vector<double> achievable_volumes(const FiniteMMSpace& x,
                                              std::size_t budget = kDefaultSubsetBudget) {
  std::map<double, bool> seen;
  seen.emplace(0.0, true);
  detail::gray_sweep(x, 0.0, budget, [&](std::uint32_t, double vol, double) {
    if (detail::find_bucket(seen, vol) == seen.end()) seen.emplace(vol, true);
    return true;
  });
  std::vector<double> out;
  out.reserve(seen.size());
  for (const auto& [v, _] : seen) out.push_back(v);
  return out;
}

struct IclViolation {
  double a = 0.0, b = 0.0;
  std::vector<std::size_t> witness;  // the subset A
  double required = 0.0;             // F_nu(b)
  double achieved = 0.0;             // m(B_{b-a+eps}(A))
};

struct IclReport {
  bool pass = false;
  double eps = 0.0;
  std::size_t pairs_checked = 0;
  std::optional<IclViolation> violation;
};

/// Isoperimetric comparison condition of Levy type: for every a <= b in
/// supp nu and every nonempty subset A with F_nu(a) <= m(A), checks
/// F_nu(b) <= m(B_{b-a+eps}(A)). Exhaustive over subsets; the first
/// violating triple in (a, b, sweep) order is reported.
inline IclReport check_icl(const FiniteMMSpace& x, const AtomicMeasure& nu, double eps,
                           std::size_t budget = kDefaultSubsetBudget) {
  if (!nu.is_probability()) throw std::invalid_argument("check_icl: nu must be a probability");
  if (eps < 0.0) throw std::invalid_argument("check_icl: eps must be >= 0");
  IclReport report;
  report.eps = eps;
  for (std::size_t ai = 0; ai < nu.size(); ++ai) {
    for (std::size_t bi = ai; bi < nu.size(); ++bi) {
      ++report.pairs_checked;
      const double a = nu.atoms()[ai], b = nu.atoms()[bi];
      const double fa = nu.cumulative()[ai], fb = nu.cumulative()[bi];
      const double radius = b - a + eps;
      bool violated = false;
      detail::gray_sweep(x, radius, budget,
                         [&](std::uint32_t mask, double vol, double nb) {
                           if (vol >= fa - kMassTol && nb < fb - kMassTol) {
                             report.violation =
                                 IclViolation{a, b, detail::mask_to_indices(mask), fb, nb};
                             violated = true;
                             return false;
                           }
                           return true;
                         });
      if (violated) {
        report.pass = false;
        return report;
      }
    }
  }
  report.pass = true;
  return report;
}

struct IcPlusCase {
  double t = 0.0;
  double delta_plus = 0.0;
  bool vacuous = false;  // V(t) not in Image m_X: the condition is empty at t
  bool pass = true;
  double profile_value = 0.0;  // I_X^{delta_plus + eps}(V(t))
  double required = 0.0;       // V(t + delta_plus)
  std::vector<std::size_t> witness;
};

struct IcPlusReport {
  bool pass = false;
  double eps = 0.0;
  std::vector<IcPlusCase> cases;
};

/// Discrete isoperimetric comparison IC_eps^+: at every support point below
/// the maximum whose CDF value is an achievable volume, the profile at one
/// support gap must dominate the CDF increment.
inline IcPlusReport check_ic_plus(const FiniteMMSpace& x, const AtomicMeasure& nu, double eps,
                                  std::size_t budget = kDefaultSubsetBudget) {
  if (!nu.is_probability())
    throw std::invalid_argument("check_ic_plus: nu must be a probability");
  if (eps < 0.0) throw std::invalid_argument("check_ic_plus: eps must be >= 0");
  IcPlusReport report;
  report.eps = eps;
  const auto volumes = achievable_volumes(x, budget);
  auto achievable = [&](double v) {
    for (double u : volumes)
      if (std::abs(u - v) <= kMassTol) return true;
    return false;
  };
  bool all_pass = true;
  for (std::size_t i = 0; i + 1 < nu.size(); ++i) {
    IcPlusCase c;
    c.t = nu.atoms()[i];
    c.delta_plus = nu.atoms()[i + 1] - nu.atoms()[i];
    const double vt = nu.cumulative()[i];
    if (!achievable(vt)) {
      c.vacuous = true;
      report.cases.push_back(std::move(c));
      continue;
    }
    c.required = nu.cumulative()[i + 1];
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    detail::gray_sweep(x, c.delta_plus + eps, budget,
                       [&](std::uint32_t mask, double vol, double nb) {
                         if (std::abs(vol - vt) <= kMassTol && nb < best) {
                           best = nb;
                           best_mask = mask;
                         }
                         return true;
                       });
    c.profile_value = best;
    c.witness = detail::mask_to_indices(best_mask);
    c.pass = best >= c.required - kMassTol;
    all_pass = all_pass && c.pass;
    report.cases.push_back(std::move(c));
  }
  report.pass = all_pass;
  return report;
}

struct IcPlusToIclReport {
  bool hypothesis_ok = false;
  std::string hypothesis_issue;
  std::size_t support_size = 0;
  double icl_eps = 0.0;  // (N - 2) * eps, clamped at 0
  std::optional<IcPlusReport> ic_plus;
  std::optional<IclReport> icl;
  bool implication_ok = false;
};

/// Empirical cross-check of the bound "IC_eps^+ implies ICL_{(N-2)eps}" for
/// finite uniform spaces whose nu-masses are multiples of 1/|X|.
inline IcPlusToIclReport icl_from_ic_plus_bound(const FiniteMMSpace& x, const AtomicMeasure& nu,
                                                double eps,
                                                std::size_t budget = kDefaultSubsetBudget) {
  IcPlusToIclReport report;
  report.support_size = nu.size();
  if (!x.uniform_weights()) {
    report.hypothesis_issue = "space measure is not uniform";
    return report;
  }
  const double n = static_cast<double>(x.size());
  for (double w : nu.weights()) {
    if (std::abs(w * n - std::round(w * n)) > kMassTol * n) {
      report.hypothesis_issue = "Image of nu is not contained in (1/|X|)Z";
      return report;
    }
  }
  report.hypothesis_ok = true;
  report.icl_eps = std::max(0.0, static_cast<double>(report.support_size) - 2.0) * eps;
  report.ic_plus = check_ic_plus(x, nu, eps, budget);
  report.icl = check_icl(x, nu, report.icl_eps, budget);
  report.implication_ok = !report.ic_plus->pass || report.icl->pass;
  return report;
}

struct IclToDominantReport {
  bool side_condition_ok = false;
  std::string side_condition_issue;
  double delta = 0.0;  // Delta(supp nu)
  std::optional<IclReport> icl;
  std::optional<DominanceReport> dominance;
  bool implication_ok = false;  // ICL pass implies family-level dominance pass
};

/// Applies "ICL_eps(nu) implies nu is an (eps + Delta)-iso-dominant": the
/// side condition nu(min atom) <= m_X(x) is checked first, then ICL, then
/// the dominance over the supplied family at error eps + Delta.
inline IclToDominantReport icl_to_dominant(const FiniteMMSpace& x, const AtomicMeasure& nu,
                                           double eps, const std::vector<ScalarField>& family,
                                           const DecideOptions& opts = {},
                                           std::size_t budget = kDefaultSubsetBudget) {
  IclToDominantReport report;
  const double min_point_mass = *std::min_element(x.weights().begin(), x.weights().end());
  if (nu.weights().front() > min_point_mass + kMassTol) {
    report.side_condition_issue =
        "nu({min atom}) exceeds a point mass of X; the theorem does not apply";
    return report;
  }
  report.side_condition_ok = true;
  report.delta = support_gaps(nu).max_gap;
  report.icl = check_icl(x, nu, eps, budget);
  if (!report.icl->pass) {
    report.implication_ok = true;  // premise fails, nothing to verify
    return report;
  }
  report.dominance = check_iso_dominant(nu, x, eps + report.delta, family, opts);
  report.implication_ok = report.dominance->all_pass;
  return report;
}

struct DominantToIclReport {
  std::string hypothesis_branch;
  DominanceReport dominance;
  std::optional<IclReport> icl;
  // "pass", "premise failed on supplied family", or "inconclusive premise"
  std::string verdict;
};

/// Applies "nu an eps-iso-dominant implies ICL_{2 eps}(nu)". Dominance over
/// a finite family is only a sampled premise: if ICL_{2 eps} fails anyway,
/// the verdict is "inconclusive premise" (the family under-samples the
/// 1-measurement), never a theorem violation.
inline DominantToIclReport dominant_to_icl(const FiniteMMSpace& x, const AtomicMeasure& nu,
                                           double eps, const std::vector<ScalarField>& family,
                                           const DecideOptions& opts = {},
                                           std::size_t budget = kDefaultSubsetBudget) {
  DominantToIclReport report;
  report.hypothesis_branch = nu.size() == 1
                                 ? "supp nu connected (singleton)"
                                 : "every atom of nu carries positive mass";
  report.dominance = check_iso_dominant(nu, x, eps, family, opts);
  if (!report.dominance.all_pass) {
    report.verdict = "premise failed on supplied family";
    return report;
  }
  report.icl = check_icl(x, nu, 2.0 * eps, budget);
  report.verdict = report.icl->pass
                       ? "pass"
                       : "inconclusive premise: the family under-samples the 1-measurement";
  return report;
}

}  // namespace isolip
