#pragma once

#include <Eigen/Core>

#include <vector>

namespace crowdflow {

using Polyline = std::vector<Eigen::Vector2d>;

/// Marching squares for the level set values == level on the grid
/// (xs[i], ys[j]) -> values(i, j). Saddle cells are resolved with the cell
/// centre average. Segments are chained into polylines; closed loops repeat
/// their first point at the end.
std::vector<Polyline> extract_contour(const std::vector<double>& xs, const std::vector<double>& ys,
                                      const Eigen::MatrixXd& values, double level);

/// Symmetric Hausdorff distance between two sets of polylines, treating
/// each polyline as the union of its segments. Sup terms are sampled at
/// points at most `resolution` apart along each segment.
double hausdorff_distance(const std::vector<Polyline>& a, const std::vector<Polyline>& b,
                          double resolution = 1e-3);

/// Distance from a point to the union of polylines.
double distance_to_polylines(const Eigen::Vector2d& p, const std::vector<Polyline>& lines);

}  // namespace crowdflow
