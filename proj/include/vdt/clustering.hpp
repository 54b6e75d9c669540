#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "vdt/rng.hpp"

namespace vdt {

/// One point per row; 2 columns for pixel coordinates, 3 for RGB values.
using PointSet = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct DbscanParams {
  double epsilon = 15.0;
  int min_pts = 40;
};

/// Per-point labels: kNoise or a cluster id in [0, cluster_count).
struct ClusterLabeling {
  static constexpr int kNoise = -1;

  std::vector<int> labels;
  int cluster_count = 0;
};

/// Indices of all points within Euclidean distance epsilon of points[index],
/// the query index included, in ascending order.
inline std::vector<Eigen::Index> region_query(const PointSet& points, Eigen::Index index,
                                              double epsilon) {
  if (index < 0 || index >= points.rows()) {
    throw std::out_of_range("region_query: index out of range");
  }
  const double eps2 = epsilon * epsilon;
  std::vector<Eigen::Index> out;
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    if ((points.row(j) - points.row(index)).squaredNorm() <= eps2) {
      out.push_back(j);
    }
  }
  return out;
}

enum class NeighborStrategy { kAuto, kNaive, kGrid };

namespace detail {

// Uniform grid over 2-D points with cell size epsilon. Queries gather the
// 3x3 cell block and filter by exact distance; results are sorted so they
// match region_query index for index.
class GridIndex2d {
 public:
  GridIndex2d(const PointSet& points, double epsilon) : points_(points), eps_(epsilon) {
    cells_.reserve(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      cells_[key_of(points(i, 0), points(i, 1))].push_back(i);
    }
  }

  std::vector<Eigen::Index> query(Eigen::Index index) const {
    const double px = points_(index, 0);
    const double py = points_(index, 1);
    const double eps2 = eps_ * eps_;
    const std::int64_t cx = cell_coord(px);
    const std::int64_t cy = cell_coord(py);
    std::vector<Eigen::Index> out;
    for (std::int64_t gy = cy - 1; gy <= cy + 1; ++gy) {
      for (std::int64_t gx = cx - 1; gx <= cx + 1; ++gx) {
        const auto it = cells_.find(pack(gx, gy));
        if (it == cells_.end()) continue;
        for (const Eigen::Index j : it->second) {
          const double dx = points_(j, 0) - px;
          const double dy = points_(j, 1) - py;
          if (dx * dx + dy * dy <= eps2) out.push_back(j);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::int64_t cell_coord(double v) const {
    return static_cast<std::int64_t>(std::floor(v / eps_));
  }
  std::uint64_t key_of(double x, double y) const { return pack(cell_coord(x), cell_coord(y)); }
  static std::uint64_t pack(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint32_t>(cy);
  }

  const PointSet& points_;
  double eps_;
  std::unordered_map<std::uint64_t, std::vector<Eigen::Index>> cells_;
};

}  // namespace detail

/// Density clustering. Points are visited in input order; a point whose
/// epsilon-neighborhood (self included, distance <= epsilon) has at least
/// min_pts members is a core point and seeds a cluster, which grows through
/// a FIFO frontier of neighborhoods. Non-core points reached by a cluster
/// join the first cluster that reaches them; the rest end up as noise.
///
/// Above 1000 points a uniform-grid index (cell size epsilon) accelerates
/// the neighborhood queries; labelings are identical either way.
inline ClusterLabeling dbscan(const PointSet& points, const DbscanParams& params,
                              NeighborStrategy strategy = NeighborStrategy::kAuto) {
  if (params.epsilon <= 0.0) throw std::invalid_argument("dbscan: epsilon must be > 0");
  if (params.min_pts < 1) throw std::invalid_argument("dbscan: min_pts must be >= 1");

  const Eigen::Index n = points.rows();
  constexpr int kUnvisited = -2;
  ClusterLabeling result;
  result.labels.assign(static_cast<std::size_t>(n), kUnvisited);
  if (n == 0) return result;

  const bool grid_eligible = points.cols() == 2;
  const bool use_grid = strategy == NeighborStrategy::kGrid ||
                        (strategy == NeighborStrategy::kAuto && grid_eligible && n > 1000);
  if (use_grid && !grid_eligible) {
    throw std::invalid_argument("dbscan: grid index supports 2-D points only");
  }
  std::optional<detail::GridIndex2d> grid;
  if (use_grid) grid.emplace(points, params.epsilon);
  const auto query = [&](Eigen::Index i) {
    return grid ? grid->query(i) : region_query(points, i, params.epsilon);
  };

  const auto min_pts = static_cast<std::size_t>(params.min_pts);
  int next_cluster = 0;
  std::vector<Eigen::Index> frontier;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (result.labels[i] != kUnvisited) continue;
    const auto neighborhood = query(i);
    if (neighborhood.size() < min_pts) {
      result.labels[i] = ClusterLabeling::kNoise;  // may become a border point later
      continue;
    }
    const int cid = next_cluster++;
    result.labels[i] = cid;
    frontier.assign(neighborhood.begin(), neighborhood.end());
    for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
      const Eigen::Index j = frontier[qi];
      if (result.labels[j] == ClusterLabeling::kNoise) {
        result.labels[j] = cid;  // border point
        continue;
      }
      if (result.labels[j] != kUnvisited) continue;
      result.labels[j] = cid;
      const auto reach = query(j);
      if (reach.size() >= min_pts) {
        frontier.insert(frontier.end(), reach.begin(), reach.end());
      }
    }
  }
  result.cluster_count = next_cluster;
  return result;
}

struct KmeansResult {
  Eigen::MatrixXd centroids;    // k rows
  std::vector<int> assignment;  // per point, in [0, k)
  int iterations = 0;
  double wcss = 0.0;
};

/// Within-cluster sum of squares for a given assignment and centroids.
inline double wcss(const PointSet& points, const KmeansResult& result) {
  if (static_cast<Eigen::Index>(result.assignment.size()) != points.rows()) {
    throw std::invalid_argument("wcss: assignment size does not match point count");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - result.centroids.row(result.assignment[i])).squaredNorm();
  }
  return total;
}

/// Lloyd iterations from explicit initial centroids. Each round assigns every
/// point to its nearest centroid (ties to the lower index) and recenters each
/// cluster on the mean of its members. An emptied cluster is reseeded to the
/// point farthest from its current centroid. Stops when centroids move less
/// than tol, when the WCSS improvement drops below tol, or at max_iter.
inline KmeansResult kmeans_lloyd(const PointSet& points, Eigen::MatrixXd centroids,
                                 int max_iter, double tol) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = centroids.rows();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > n) throw std::invalid_argument("kmeans: k exceeds point count");
  if (centroids.cols() != points.cols()) {
    throw std::invalid_argument("kmeans: centroid dimensionality mismatch");
  }

  KmeansResult res;
  res.assignment.assign(static_cast<std::size_t>(n), 0);

  const auto assign_all = [&]() {
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d2 = (points.row(i) - centroids.row(0)).squaredNorm();
      for (Eigen::Index c = 1; c < k; ++c) {
        const double d2 = (points.row(i) - centroids.row(c)).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = static_cast<int>(c);
        }
      }
      res.assignment[i] = best;
    }
  };

  double prev_wcss = std::numeric_limits<double>::infinity();
  int iter = 0;
  while (iter < max_iter) {
    assign_all();

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(res.assignment[i]) += points.row(i);
      ++counts[res.assignment[i]];
    }
    double max_move = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) {
      Eigen::RowVectorXd updated;
      if (counts[c] == 0) {
        // Reseed an empty cluster to the point farthest from its centroid.
        Eigen::Index far = 0;
        double far_d2 = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double d2 = (points.row(i) - centroids.row(c)).squaredNorm();
          if (d2 > far_d2) {
            far_d2 = d2;
            far = i;
          }
        }
        updated = points.row(far);
      } else {
        updated = sums.row(c) / static_cast<double>(counts[c]);
      }
      max_move = std::max(max_move, (updated - centroids.row(c)).norm());
      centroids.row(c) = updated;
    }
    ++iter;

    res.centroids = centroids;
    const double current = wcss(points, res);
    const bool converged = max_move < tol || (prev_wcss - current) < tol;
    prev_wcss = current;
    if (converged) break;
  }

  res.centroids = centroids;
  assign_all();
  res.iterations = iter;
  res.wcss = wcss(points, res);
  return res;
}

/// K-means with seeded initialization: k distinct points are chosen as the
/// starting centroids via a partial Fisher-Yates shuffle, then Lloyd runs.
/// Deterministic for a given seed.
inline KmeansResult kmeans(const PointSet& points, int k, int max_iter, double tol,
                           std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (static_cast<Eigen::Index>(k) > n) {
    throw std::invalid_argument("kmeans: k exceeds point count");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  SplitMix64 rng(seed);
  Eigen::MatrixXd centroids(k, points.cols());
  for (int j = 0; j < k; ++j) {
    const auto pick = j + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - j)));
    std::swap(order[j], order[pick]);
    centroids.row(j) = points.row(order[j]);
  }
  return kmeans_lloyd(points, std::move(centroids), max_iter, tol);
}

}  // namespace vdt
