// gap.cpp — approximate-isometry certificates and exact Gromov–Hausdorff
// distances on tiny spaces.

#include "mmdist/gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mmdist/errors.hpp"
#include "mmdist/measure.hpp"
#include "mmdist/rng.hpp"

namespace mmd {

namespace {

// Random mixtures drawn per side for defect sampling.  The weight floor
// keeps sampled measures fully supported, matching the nonexpansiveness
// checks.
ProbabilityMeasure random_mixture(const SpacePtr& space, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(space->size()));
  for (double& v : w) v = 0.01 + rng.uniform();
  return ProbabilityMeasure(space, std::move(w));
}

// Per-side sampled inputs.  The stream is seeded from the side's space
// digest and consumed in a fixed order (pairs, then singles), so the same
// side produces bitwise-identical samples no matter which argument slot it
// occupies.
struct SideSamples {
  std::vector<std::pair<ProbabilityMeasure, ProbabilityMeasure>> pairs;
  std::vector<ProbabilityMeasure> singles;
};

SideSamples draw_side_samples(const SpacePtr& space, int samples, std::uint64_t seed) {
  SideSamples out;
  Rng rng(sub_seed(seed, space->digest()));
  out.pairs.reserve(static_cast<std::size_t>(samples));
  out.singles.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    ProbabilityMeasure a = random_mixture(space, rng);
    ProbabilityMeasure b = random_mixture(space, rng);
    out.pairs.emplace_back(std::move(a), std::move(b));
  }
  for (int s = 0; s < samples; ++s) out.singles.push_back(random_mixture(space, rng));
  return out;
}

// Largest |D_target(map a, map b) - D_source(a, b)| over all dirac pairs of
// the map's source plus the supplied mixture pairs.
double isometry_defect_of(const AffineStageMap& map, const StageDistance& source_metric,
                          const StageDistance& target_metric, const SideSamples& samples) {
  double defect = 0.0;
  const SpacePtr& source = map.source();
  const int n = source->size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const ProbabilityMeasure a = dirac(source, i);
      const ProbabilityMeasure b = dirac(source, j);
      const double ds = evaluate_distance(source_metric, a, b);
      const double dt = evaluate_distance(target_metric, map.apply(a), map.apply(b));
      defect = std::max(defect, std::abs(dt - ds));
    }
  }
  for (const auto& [a, b] : samples.pairs) {
    const double ds = evaluate_distance(source_metric, a, b);
    const double dt = evaluate_distance(target_metric, map.apply(a), map.apply(b));
    defect = std::max(defect, std::abs(dt - ds));
  }
  return defect;
}

// Largest D(out(back(tau)), tau) over all diracs of back's source plus the
// supplied mixtures; measures how far the round trip drifts.
double round_trip_defect(const AffineStageMap& out, const AffineStageMap& back,
                         const StageDistance& metric, const SideSamples& samples) {
  double defect = 0.0;
  const SpacePtr& space = back.source();
  for (int j = 0; j < space->size(); ++j) {
    const ProbabilityMeasure tau = dirac(space, j);
    defect = std::max(defect, evaluate_distance(metric, out.apply(back.apply(tau)), tau));
  }
  for (const ProbabilityMeasure& tau : samples.singles) {
    defect = std::max(defect, evaluate_distance(metric, out.apply(back.apply(tau)), tau));
  }
  return defect;
}

// Greedy distortion-minimizing alignment with `lead` supplying the outer
// loop: anchor (0,0), assign each further lead point to the partner adding
// the least distortion against the pairs chosen so far, then cover leftover
// partner points the same way.  Ties take the lowest index.
Correspondence greedy_alignment(const FiniteMetricSpace& lead,
                                const FiniteMetricSpace& other) {
  const int n = lead.size();
  const int m = other.size();
  Correspondence rel;
  rel.emplace_back(0, 0);
  std::vector<char> covered(static_cast<std::size_t>(m), 0);
  covered[0] = 1;
  const auto added_distortion = [&](int i, int j) {
    double worst = 0.0;
    for (const auto& [pi, pj] : rel) {
      worst = std::max(worst, std::abs(lead.dist(i, pi) - other.dist(j, pj)));
    }
    return worst;
  };
  for (int i = 1; i < n; ++i) {
    int best_j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double d = added_distortion(i, j);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    rel.emplace_back(i, best_j);
    covered[static_cast<std::size_t>(best_j)] = 1;
  }
  for (int j = 0; j < m; ++j) {
    if (covered[static_cast<std::size_t>(j)]) continue;
    int best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double d = added_distortion(i, j);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    rel.emplace_back(best_i, j);
  }
  return rel;
}

// Swap-invariant alignment: the smaller space (digest as tie-break) leads,
// so exchanging the arguments yields the transposed correspondence.
Correspondence canonical_alignment(const FiniteMetricSpace& m1, const FiniteMetricSpace& m2) {
  const bool first_leads = m1.size() < m2.size() ||
                           (m1.size() == m2.size() && m1.digest() <= m2.digest());
  if (first_leads) return greedy_alignment(m1, m2);
  Correspondence rel = greedy_alignment(m2, m1);
  for (auto& p : rel) std::swap(p.first, p.second);
  return rel;
}

// Lowest-index partner of every point on each side; validates coverage.
void partner_tables(const Correspondence& rel, int n1, int n2, std::vector<int>& to_second,
                    std::vector<int>& to_first) {
  if (rel.empty()) throw InvalidInput("correspondence must be nonempty");
  to_second.assign(static_cast<std::size_t>(n1), -1);
  to_first.assign(static_cast<std::size_t>(n2), -1);
  for (const auto& [i, j] : rel) {
    if (i < 0 || i >= n1 || j < 0 || j >= n2) {
      std::ostringstream msg;
      msg << "correspondence pair (" << i << "," << j << ") out of range for sizes " << n1
          << " and " << n2;
      throw InvalidInput(msg.str());
    }
    int& fwd = to_second[static_cast<std::size_t>(i)];
    if (fwd < 0 || j < fwd) fwd = j;
    int& bwd = to_first[static_cast<std::size_t>(j)];
    if (bwd < 0 || i < bwd) bwd = i;
  }
  for (int i = 0; i < n1; ++i) {
    if (to_second[static_cast<std::size_t>(i)] < 0) {
      std::ostringstream msg;
      msg << "correspondence leaves point " << i << " of the first space unmatched";
      throw InvalidInput(msg.str());
    }
  }
  for (int j = 0; j < n2; ++j) {
    if (to_first[static_cast<std::size_t>(j)] < 0) {
      std::ostringstream msg;
      msg << "correspondence leaves point " << j << " of the second space unmatched";
      throw InvalidInput(msg.str());
    }
  }
}

AffineStageMap point_map(const SpacePtr& source, const SpacePtr& target,
                         const std::vector<int>& assignment) {
  std::vector<ProbabilityMeasure> images;
  images.reserve(assignment.size());
  for (int j : assignment) images.push_back(dirac(target, j));
  return AffineStageMap(source, target, std::move(images));
}

}  // namespace

Correspondence net_correspondence(const FiniteMetricSpace& space,
                                  const std::vector<int>& net) {
  if (net.empty()) throw InvalidInput("net must contain at least one point");
  for (int idx : net) space.check_point(idx);
  Correspondence rel;
  rel.reserve(static_cast<std::size_t>(space.size()));
  for (int i = 0; i < space.size(); ++i) {
    int best_t = 0;
    double best = space.dist(i, net[0]);
    for (std::size_t t = 1; t < net.size(); ++t) {
      const double d = space.dist(i, net[t]);
      if (d < best) {
        best = d;
        best_t = static_cast<int>(t);
      }
    }
    rel.emplace_back(i, best_t);
  }
  return rel;
}

GapCertificate gamma_q_upper(const SpacePtr& m1, const StageDistance& d1,
                             const SpacePtr& m2, const StageDistance& d2, double eps,
                             int samples, std::uint64_t seed,
                             const Correspondence& correspondence) {
  if (!m1 || !m2) throw InvalidInput("certificate needs two metric spaces");
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("certificate scale eps must be a positive real");
  }
  if (samples < 0) throw InvalidInput("sample count must be nonnegative");

  const Correspondence rel =
      correspondence.empty() ? canonical_alignment(*m1, *m2) : correspondence;
  std::vector<int> to_second, to_first;
  partner_tables(rel, m1->size(), m2->size(), to_second, to_first);
  AffineStageMap forward = point_map(m1, m2, to_second);
  AffineStageMap backward = point_map(m2, m1, to_first);

  const SideSamples s1 = draw_side_samples(m1, samples, seed);
  const SideSamples s2 = draw_side_samples(m2, samples, seed);

  const double iso = std::max(isometry_defect_of(forward, d1, d2, s1),
                              isometry_defect_of(backward, d2, d1, s2));
  const double inv = std::max(round_trip_defect(forward, backward, d2, s2),
                              round_trip_defect(backward, forward, d1, s1));
  return GapCertificate{std::max(iso, inv), std::move(forward), std::move(backward), iso,
                        inv};
}

MapCheckResult check_maps(const AffineStageMap& forward, const AffineStageMap& backward,
                          const StageDistance& d1, const StageDistance& d2, double eps,
                          int samples, std::uint64_t seed) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("check threshold eps must be a positive real");
  }
  if (samples < 0) throw InvalidInput("sample count must be nonnegative");
  if (!forward.source()->same_metric_as(*backward.target()) ||
      !forward.target()->same_metric_as(*backward.source())) {
    throw InvalidInput("maps do not form a forward/backward pair between the same spaces");
  }
  const SideSamples s1 = draw_side_samples(forward.source(), samples, seed);
  const SideSamples s2 = draw_side_samples(forward.target(), samples, seed);
  MapCheckResult result;
  result.isometry_defect = isometry_defect_of(forward, d1, d2, s1);
  result.invertibility_defect = round_trip_defect(forward, backward, d2, s2);
  result.pass = result.isometry_defect < eps && result.invertibility_defect < eps;
  return result;
}

double gromov_hausdorff_small(const FiniteMetricSpace& m1, const FiniteMetricSpace& m2,
                              int max_size) {
  if (max_size < 1 || max_size > kMaxGromovHausdorffPoints) {
    std::ostringstream msg;
    msg << "exhaustive search budget must lie in [1," << kMaxGromovHausdorffPoints
        << "], got " << max_size;
    throw InvalidInput(msg.str());
  }
  if (m1.size() > max_size || m2.size() > max_size) {
    std::ostringstream msg;
    msg << "space sizes " << m1.size() << " and " << m2.size()
        << " exceed the exhaustive search budget " << max_size;
    throw ResourceError(msg.str());
  }
  const int n = m1.size();
  const int m = m2.size();
  // Variables: partners f(0..n-1) in the second space, then g(0..m-1) in the
  // first.  Every correspondence contains such a selection pair with no
  // larger distortion, so minimizing over selections is exact.
  const int total = n + m;
  std::vector<int> partner(static_cast<std::size_t>(total), 0);
  const auto left_of = [&](int t, int value) { return t < n ? t : value; };
  const auto right_of = [&](int t, int value) { return t < n ? value : t - n; };

  // Initial upper bound from the index-truncating selection.
  double best;
  {
    for (int t = 0; t < total; ++t) {
      partner[static_cast<std::size_t>(t)] = t < n ? std::min(t, m - 1) : std::min(t - n, n - 1);
    }
    double dis = 0.0;
    for (int t = 0; t < total; ++t) {
      for (int u = 0; u < t; ++u) {
        const int it = left_of(t, partner[static_cast<std::size_t>(t)]);
        const int jt = right_of(t, partner[static_cast<std::size_t>(t)]);
        const int iu = left_of(u, partner[static_cast<std::size_t>(u)]);
        const int ju = right_of(u, partner[static_cast<std::size_t>(u)]);
        dis = std::max(dis, std::abs(m1.dist(it, iu) - m2.dist(jt, ju)));
      }
    }
    best = dis;
  }

  const auto dfs = [&](const auto& self, int t, double current) -> void {
    if (current >= best) return;
    if (t == total) {
      best = current;
      return;
    }
    const int domain = t < n ? m : n;
    for (int v = 0; v < domain; ++v) {
      const int it = left_of(t, v);
      const int jt = right_of(t, v);
      double next = current;
      for (int u = 0; u < t && next < best; ++u) {
        const int iu = left_of(u, partner[static_cast<std::size_t>(u)]);
        const int ju = right_of(u, partner[static_cast<std::size_t>(u)]);
        next = std::max(next, std::abs(m1.dist(it, iu) - m2.dist(jt, ju)));
      }
      if (next < best) {
        partner[static_cast<std::size_t>(t)] = v;
        self(self, t + 1, next);
      }
    }
  };
  dfs(dfs, 0, 0.0);
  return best / 2.0;
}

}  // namespace mmd
