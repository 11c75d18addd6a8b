// generators.cpp — example geometries, nets, and the box-counting estimator.

#include "mmdist/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>

#include "mmdist/errors.hpp"
#include "mmdist/rng.hpp"

namespace mmd {

namespace {

// C(n0 + k, k) computed incrementally; returns `cap` as soon as the running
// value exceeds it, so callers can compare against a budget without overflow.
// All intermediate values below the cap are integers representable exactly in
// a double (cap << 2^53).
double binomial_capped(int n0, int k, double cap) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) {
    v = v * (n0 + i) / i;
    if (v > cap) return cap;
  }
  return v;
}

// Calls fn(a) for every vector a of k+1 nonnegative integers summing to
// `total`, in lexicographic order with the first coordinate descending from
// `total` (so the first composition is total*e_0, i.e. the simplex vertex 0).
template <typename Fn>
void for_each_composition(int k, int total, Fn&& fn) {
  std::vector<int> a(static_cast<std::size_t>(k) + 1, 0);
  // Iterative descent: position p takes values rest..0; the last coordinate
  // absorbs the remainder.
  std::vector<int> rest(static_cast<std::size_t>(k) + 1, 0);
  int p = 0;
  rest[0] = total;
  a[0] = total + 1;  // pre-decremented on entry below
  while (p >= 0) {
    if (p == k) {
      a[p] = rest[p];
      fn(a);
      --p;
      continue;
    }
    if (a[p] == 0) {  // exhausted this position
      --p;
      continue;
    }
    --a[p];
    rest[p + 1] = rest[p] - a[p];
    ++p;
    a[p] = rest[p] + 1;
  }
}

FiniteMetricSpace simplicial_ball(int k, int mesh,
                                  std::vector<std::vector<int>> grid) {
  const int n = static_cast<int>(grid.size());
  // The l1 distance between grid points i and j is sum_c |a_ic - a_jc| / mesh,
  // a rational that binary doubles cannot represent for most meshes — and
  // correctly rounded quotients are not additive, so degenerate triangles
  // (collinear barycentric points) could violate the triangle inequality by an
  // ulp.  Rounding every distance *up* to the 2^-48 lattice restores exactness:
  // ceil is superadditive, and sums of these lattice values (at most 4) carry
  // no more than 50 significant bits, so no later addition rounds.  Dyadic
  // meshes and integer-valued distances are unaffected; others move by less
  // than 2^-48 ~ 3.6e-15.
  const double grid_step = std::ldexp(1.0, -48);
  std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      long long sum = 0;
      for (int c = 0; c <= k; ++c) sum += std::abs(grid[i][c] - grid[j][c]);
      const long long scaled = ((sum << 48) + mesh - 1) / mesh;  // exact ceil
      const double d = static_cast<double>(scaled) * grid_step;
      dist[static_cast<std::size_t>(i) * n + j] = d;
      dist[static_cast<std::size_t>(j) * n + i] = d;
    }
  }
  std::vector<std::vector<double>> coords(n);
  for (int i = 0; i < n; ++i) {
    coords[i].resize(static_cast<std::size_t>(k) + 1);
    for (int c = 0; c <= k; ++c)
      coords[i][c] = static_cast<double>(grid[i][c]) / mesh;
  }
  return FiniteMetricSpace(n, std::move(dist), {}, std::move(coords));
}

FiniteMetricSpace simplicial_sphere(int k, int mesh,
                                    std::vector<std::vector<int>> grid) {
  const int n = static_cast<int>(grid.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < n; ++i) index.emplace(grid[i], i);

  LengthGraph graph;
  graph.vertices = n;
  const double edge_len = 2.0 / mesh;
  std::vector<int> b;
  for (int i = 0; i < n; ++i) {
    const std::vector<int>& a = grid[i];
    int zeros = 0;
    for (int c = 0; c <= k; ++c) zeros += (a[c] == 0);
    for (int r = 0; r <= k; ++r) {
      if (a[r] == 0) continue;
      for (int s = 0; s <= k; ++s) {
        if (s == r) continue;
        // The transfer a - e_r + e_s stays inside a common facet only if some
        // coordinate other than r and s is zero on both endpoints (r is
        // nonzero on a, s is nonzero on the neighbor).
        const int shared_zeros = zeros - (a[s] == 0 ? 1 : 0);
        if (shared_zeros == 0) continue;
        b = a;
        --b[r];
        ++b[s];
        const int j = index.at(b);
        if (j > i) graph.edges.push_back({i, j, edge_len});
      }
    }
  }
  graph.coords.resize(n);
  for (int i = 0; i < n; ++i) {
    graph.coords[i].resize(static_cast<std::size_t>(k) + 1);
    for (int c = 0; c <= k; ++c)
      graph.coords[i][c] = static_cast<double>(grid[i][c]) / mesh;
  }
  return intrinsic_metric(graph);
}

}  // namespace

FiniteMetricSpace gen_equidistant(int n, double r) {
  if (n < 1) {
    throw InvalidInput("gen_equidistant: need at least one point, got n = " +
                       std::to_string(n));
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidInput("gen_equidistant: radius must be a positive real");
  }
  if (n > kMaxIntrinsicPoints) {
    std::ostringstream msg;
    msg << "gen_equidistant: " << n << " points exceed the dense-matrix limit of "
        << kMaxIntrinsicPoints;
    throw ResourceError(msg.str());
  }
  std::vector<double> dist(static_cast<std::size_t>(n) * n, 2.0 * r);
  for (int i = 0; i < n; ++i) dist[static_cast<std::size_t>(i) * n + i] = 0.0;
  return FiniteMetricSpace(n, std::move(dist));
}

LengthGraph gen_sierpinski(FractalKind kind, int level) {
  if (level < 0) {
    throw InvalidInput("gen_sierpinski: level must be nonnegative, got " +
                       std::to_string(level));
  }
  LengthGraph graph;

  if (kind == FractalKind::kGasket) {
    if (level > kMaxGasketLevel) {
      std::ostringstream msg;
      msg << "gen_sierpinski: gasket level " << level << " exceeds the limit of "
          << kMaxGasketLevel;
      throw ResourceError(msg.str());
    }
    // Lattice coordinates: vertex (a, b) sits at (a + b/2, b*sqrt(3)/2) * h
    // with h = 2^-level; every edge of a unit lattice triangle has Euclidean
    // length exactly h.
    const int side = 1 << level;
    const double h = std::ldexp(1.0, -level);
    const double half_sqrt3 = std::sqrt(3.0) / 2.0;
    std::vector<int> id(static_cast<std::size_t>(side + 1) * (side + 1), -1);
    auto vertex = [&](int a, int b) {
      int& slot = id[static_cast<std::size_t>(a) * (side + 1) + b];
      if (slot < 0) {
        slot = graph.vertices++;
        graph.coords.push_back({(a + 0.5 * b) * h, b * half_sqrt3 * h});
      }
      return slot;
    };
    struct Cell {
      int a, b, t;  // lower-left lattice corner and side in lattice units
    };
    std::vector<Cell> stack{{0, 0, side}};
    while (!stack.empty()) {
      const Cell cell = stack.back();
      stack.pop_back();
      if (cell.t == 1) {
        const int p = vertex(cell.a, cell.b);
        const int q = vertex(cell.a + 1, cell.b);
        const int r = vertex(cell.a, cell.b + 1);
        graph.edges.push_back({p, q, h});
        graph.edges.push_back({q, r, h});
        graph.edges.push_back({r, p, h});
      } else {
        const int t2 = cell.t / 2;
        // Push in reverse so the lower-left child is processed first.
        stack.push_back({cell.a, cell.b + t2, t2});
        stack.push_back({cell.a + t2, cell.b, t2});
        stack.push_back({cell.a, cell.b, t2});
      }
    }
    return graph;
  }

  if (level > kMaxCarpetLevel) {
    std::ostringstream msg;
    msg << "gen_sierpinski: carpet level " << level << " exceeds the limit of "
        << kMaxCarpetLevel;
    throw ResourceError(msg.str());
  }
  int cells = 1;
  for (int i = 0; i < level; ++i) cells *= 3;
  const int grid = cells + 1;
  const double h = 1.0 / cells;
  // A cell survives when no base-3 digit position has both address digits
  // equal to 1 (the middle of a 3x3 block).
  auto kept = [](int i, int j) {
    while (i > 0 || j > 0) {
      if (i % 3 == 1 && j % 3 == 1) return false;
      i /= 3;
      j /= 3;
    }
    return true;
  };
  std::vector<int> id(static_cast<std::size_t>(grid) * grid, -1);
  auto vertex = [&](int x, int y) {
    int& slot = id[static_cast<std::size_t>(x) * grid + y];
    if (slot < 0) {
      slot = graph.vertices++;
      graph.coords.push_back({x * h, y * h});
    }
    return slot;
  };
  std::vector<char> seen_h(static_cast<std::size_t>(grid) * grid, 0);
  std::vector<char> seen_v(static_cast<std::size_t>(grid) * grid, 0);
  auto add_edge = [&](std::vector<char>& seen, int x, int y, int u, int v) {
    char& flag = seen[static_cast<std::size_t>(x) * grid + y];
    if (!flag) {
      flag = 1;
      graph.edges.push_back({u, v, h});
    }
  };
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      if (!kept(i, j)) continue;
      const int p00 = vertex(i, j);
      const int p10 = vertex(i + 1, j);
      const int p01 = vertex(i, j + 1);
      const int p11 = vertex(i + 1, j + 1);
      add_edge(seen_h, i, j, p00, p10);          // bottom
      add_edge(seen_h, i, j + 1, p01, p11);      // top
      add_edge(seen_v, i, j, p00, p01);          // left
      add_edge(seen_v, i + 1, j, p10, p11);      // right
    }
  }
  return graph;
}

FiniteMetricSpace gen_simplicial(SimplicialKind kind, int k, int mesh) {
  if (k < 1) {
    throw InvalidInput("gen_simplicial: simplex dimension must be >= 1, got " +
                       std::to_string(k));
  }
  if (mesh < 1) {
    throw InvalidInput("gen_simplicial: mesh must be >= 1, got " +
                       std::to_string(mesh));
  }
  if (kind == SimplicialKind::kSphere && k == 1) {
    throw InvalidInput(
        "gen_simplicial: the 0-sphere (boundary of a 1-simplex) is two "
        "isolated points and has no intrinsic metric");
  }

  const double cap = 1e12;
  const double total = binomial_capped(mesh, k, cap);
  const double interior =
      mesh >= k + 1 ? binomial_capped(mesh - (k + 1), k, cap) : 0.0;
  const double points =
      kind == SimplicialKind::kBall ? total : total - interior;
  if (points > static_cast<double>(kMaxSimplicialPoints)) {
    std::ostringstream msg;
    msg << "gen_simplicial: grid would have " << points
        << " points; limit is " << kMaxSimplicialPoints;
    throw ResourceError(msg.str());
  }
  if (points > static_cast<double>(kMaxIntrinsicPoints)) {
    std::ostringstream msg;
    msg << "gen_simplicial: grid with " << points
        << " points exceeds the dense-matrix limit of " << kMaxIntrinsicPoints;
    throw ResourceError(msg.str());
  }

  std::vector<std::vector<int>> grid;
  grid.reserve(static_cast<std::size_t>(points));
  if (kind == SimplicialKind::kBall) {
    for_each_composition(k, mesh,
                         [&](const std::vector<int>& a) { grid.push_back(a); });
    return simplicial_ball(k, mesh, std::move(grid));
  }
  for_each_composition(k, mesh, [&](const std::vector<int>& a) {
    if (*std::min_element(a.begin(), a.end()) == 0) grid.push_back(a);
  });
  return simplicial_sphere(k, mesh, std::move(grid));
}

double arc_distance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    std::ostringstream msg;
    msg << "arc_distance: dimension mismatch (" << x.size() << " vs " << y.size()
        << ")";
    throw InvalidInput(msg.str());
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
  dot = std::min(1.0, std::max(-1.0, dot));
  return std::acos(dot);
}

FiniteMetricSpace gen_sphere_sample(int k, int n, std::uint64_t seed) {
  if (k < 2) {
    throw InvalidInput("gen_sphere_sample: dimension must be >= 2, got " +
                       std::to_string(k));
  }
  if (n < 1) {
    throw InvalidInput("gen_sphere_sample: need at least one point, got n = " +
                       std::to_string(n));
  }
  if (n > kMaxIntrinsicPoints) {
    std::ostringstream msg;
    msg << "gen_sphere_sample: " << n << " points exceed the dense-matrix limit of "
        << kMaxIntrinsicPoints;
    throw ResourceError(msg.str());
  }

  Rng rng(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(n);
  std::vector<double> x(static_cast<std::size_t>(k));
  while (static_cast<int>(pts.size()) < n) {
    bool accepted = false;
    for (int attempt = 0; attempt < 100 && !accepted; ++attempt) {
      double norm_sq = 0.0;
      for (int c = 0; c < k; ++c) {
        x[c] = rng.gaussian();
        norm_sq += x[c] * x[c];
      }
      const double norm = std::sqrt(norm_sq);
      if (!(norm > 0.0) || !std::isfinite(norm)) continue;
      for (int c = 0; c < k; ++c) x[c] /= norm;
      bool duplicate = false;
      for (const auto& p : pts) {
        if (arc_distance(x, p) == 0.0) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      pts.push_back(x);
      accepted = true;
    }
    if (!accepted) {
      throw CheckFailure(
          "gen_sphere_sample: no distinct point found in 100 attempts");
    }
  }

  std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = arc_distance(pts[i], pts[j]);
      dist[static_cast<std::size_t>(i) * n + j] = d;
      dist[static_cast<std::size_t>(j) * n + i] = d;
    }
  }
  return FiniteMetricSpace(n, std::move(dist), {}, std::move(pts));
}

std::vector<int> eps_net(const FiniteMetricSpace& space, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("eps_net: eps must be a positive real");
  }
  const int n = space.size();
  std::vector<int> net{0};
  // Distance from each point to the current net.
  std::vector<double> to_net(space.row(0), space.row(0) + n);
  for (;;) {
    int farthest = 0;
    for (int i = 1; i < n; ++i) {
      if (to_net[i] > to_net[farthest]) farthest = i;  // ties keep lowest index
    }
    if (to_net[farthest] <= eps) break;
    net.push_back(farthest);
    const double* row = space.row(farthest);
    for (int i = 0; i < n; ++i) to_net[i] = std::min(to_net[i], row[i]);
  }
  return net;
}

BoxCountResult box_counting_dimension(const LengthGraph& graph,
                                      const std::vector<double>& scales) {
  check_graph(graph);
  if (graph.coords.empty()) {
    throw InvalidInput("box_counting_dimension: graph has no vertex coordinates");
  }
  const std::size_t dims = graph.coords[0].size();
  if (dims == 0) {
    throw InvalidInput("box_counting_dimension: vertex coordinates are empty");
  }
  for (const auto& c : graph.coords) {
    if (c.size() != dims) {
      throw InvalidInput(
          "box_counting_dimension: vertex coordinates have mixed dimensions");
    }
  }
  if (scales.size() < 2) {
    throw InvalidInput("box_counting_dimension: need at least two scales");
  }
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || !std::isfinite(scales[i])) {
      throw InvalidInput("box_counting_dimension: scales must be positive reals");
    }
    if (i > 0 && !(scales[i] < scales[i - 1])) {
      throw InvalidInput(
          "box_counting_dimension: scales must be strictly decreasing");
    }
  }

  std::vector<double> lo(dims), hi(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    lo[d] = hi[d] = graph.coords[0][d];
  }
  for (const auto& c : graph.coords) {
    for (std::size_t d = 0; d < dims; ++d) {
      lo[d] = std::min(lo[d], c[d]);
      hi[d] = std::max(hi[d], c[d]);
    }
  }

  BoxCountResult result;
  result.counts.reserve(scales.size());
  std::vector<std::int64_t> idx(dims);
  for (const double s : scales) {
    // Boxes tile [lo, lo + m*s) per axis; the tolerant ceiling keeps points
    // sitting exactly on the upper boundary inside the last box instead of
    // opening a spurious extra one.
    std::vector<std::int64_t> boxes(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      boxes[d] = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(std::ceil((hi[d] - lo[d]) / s - 1e-9)));
    }
    std::unordered_set<std::string> occupied;
    occupied.reserve(graph.coords.size());
    for (const auto& c : graph.coords) {
      for (std::size_t d = 0; d < dims; ++d) {
        auto v = static_cast<std::int64_t>(std::floor((c[d] - lo[d]) / s));
        idx[d] = std::min(std::max<std::int64_t>(v, 0), boxes[d] - 1);
      }
      occupied.emplace(reinterpret_cast<const char*>(idx.data()),
                       dims * sizeof(std::int64_t));
    }
    result.counts.push_back(static_cast<std::int64_t>(occupied.size()));
  }

  // Least-squares slope of log(count) against log(1/scale).
  const std::size_t m = scales.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_x += -std::log(scales[i]);
    mean_y += std::log(static_cast<double>(result.counts[i]));
  }
  mean_x /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = -std::log(scales[i]) - mean_x;
    const double dy = std::log(static_cast<double>(result.counts[i])) - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
  }
  result.dimension = sxy / sxx;
  return result;
}

}  // namespace mmd
