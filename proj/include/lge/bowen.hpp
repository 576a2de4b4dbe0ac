#pragma once

// Numerical topological entropy by (n, eps)-spanning sets on compact models:
// flat tori, boxes and one-point compactifications of proper maps on R^d.

#include <Eigen/Dense>
#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lge {

enum class SpaceKind { Torus, Box, Sphere };

using PointMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct MetricSystem {
  SpaceKind kind = SpaceKind::Torus;
  /// Intrinsic dimension d; sphere points live in R^{d+1}.
  std::size_t dim = 0;
  /// Must be safe to call concurrently.
  PointMap map;
  /// Torus only: x -> linear x + shift (mod 1), enables the adapted estimator.
  std::optional<Eigen::MatrixXd> linear;
  Eigen::VectorXd shift;
  /// Box only.
  Eigen::VectorXd lower, upper;

  std::size_t ambient_dim() const { return kind == SpaceKind::Sphere ? dim + 1 : dim; }
};

/// x -> a x + shift on R^d / Z^d.
MetricSystem torus_system(const Eigen::MatrixXd& a, const Eigen::VectorXd& shift = {});
MetricSystem box_system(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, PointMap map);

struct CoercivityOptions {
  double max_radius = 1e6;
  /// Required |f(x)| at the largest radius along every ray.
  double escape_threshold = 1e3;
};

/// One-point compactification of a proper map on R^d: inverse stereographic
/// embedding into the unit sphere with the chordal metric, the north pole
/// standing for infinity and fixed by the extension. Throws
/// std::invalid_argument when the radial coercivity check fails.
MetricSystem compactify(PointMap map, std::size_t d, const CoercivityOptions& opt = {});
MetricSystem compactify_linear(const Eigen::MatrixXd& a, const CoercivityOptions& opt = {});

Eigen::VectorXd to_sphere(const Eigen::VectorXd& x);
/// Inverse of to_sphere away from the pole.
Eigen::VectorXd from_sphere(const Eigen::VectorXd& p);

double distance(const MetricSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
/// max over 0 <= i <= n of d(f^i x, f^i y). Throws std::domain_error when a
/// box orbit leaves the box.
double dynamic_distance(const MetricSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& y, int n);

/// Greedy (n, eps)-spanning subset of the sample, in sample order. Throws
/// std::invalid_argument on an empty sample.
std::size_t spanning_count(const MetricSystem& sys, const std::vector<Eigen::VectorXd>& sample, int n, double eps);

struct EstimatorParams {
  int n_max = 18;
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  std::size_t grid_density = 1024;
  /// Worker cap; 0 reads LGE_THREADS, then the hardware concurrency.
  unsigned threads = 0;
};

struct GridCell {
  int n = 0;
  double eps = 0.0;
  /// Estimated minimal spanning count s(n, eps) of the whole space.
  double count = 0.0;
  /// Greedy centres in the finite sample.
  std::size_t raw_count = 0;
  std::size_t sample_size = 0;
  double slope = 0.0;  // least-squares slope of log count over [n/2, n]
};

struct EstimateResult {
  std::string method;  // "adapted_lattice" or "uniform_sample"
  std::vector<GridCell> grid;
  std::vector<std::pair<double, double>> per_eps_slopes;  // (eps, slope)
  double estimate = 0.0;
  bool reliable = true;
  bool monotone_in_n = true;
  bool monotone_in_eps = true;
  std::vector<std::string> warnings;
};

/// Sample of the whole space used by the uniform estimator.
struct SpaceSample {
  std::vector<Eigen::VectorXd> points;
  /// Every point of the space lies within this distance of the sample.
  double density = 0.0;
};
SpaceSample uniform_sample(const MetricSystem& sys, std::size_t grid_density);

EstimateResult estimate_entropy(const MetricSystem& sys, const EstimatorParams& params = {});

/// Sum of two runs on the factors of a product space.
EstimateResult combine_product(const EstimateResult& a, const EstimateResult& b);

/// Count for one (n, eps) cell of a linear torus map via translation
/// invariance: greedy cover of a patch sampled along the singular axes of
/// a^n, scaled to the torus volume.
struct AdaptedCell {
  double count = 0.0;
  std::size_t raw_count = 0;
  std::size_t sample_size = 0;
  std::size_t stencil_size = 0;
  bool reliable = true;
  std::string warning;
};
AdaptedCell adapted_torus_count(const Eigen::MatrixXd& a, int n, double eps, std::size_t budget);

unsigned estimator_threads(unsigned requested);
std::string estimate_csv(const EstimateResult& r);
nlohmann::json estimate_to_json(const EstimateResult& r);

}  // namespace lge
