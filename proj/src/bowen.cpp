#include "lge/bowen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace lge {

namespace {

constexpr std::size_t kAdaptedBudgetCap = std::size_t{1} << 22;
constexpr std::size_t kSampleBudgetCap = std::size_t{1} << 16;
constexpr std::size_t kMinAxisPoints = 32;

Eigen::VectorXd wrap(Eigen::VectorXd v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) -= std::round(v(i));
  return v;
}

Eigen::VectorXd mod1(Eigen::VectorXd v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) -= std::floor(v(i));
  return v;
}

Eigen::VectorXd north_pole(std::size_t d) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d + 1));
  p(static_cast<Eigen::Index>(d)) = 1.0;
  return p;
}

bool inside_box(const MetricSystem& sys, const Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(x(i) >= sys.lower(i) && x(i) <= sys.upper(i))) return false;
  return true;
}

double integer_pow_size(std::size_t base, std::size_t exp, double cap) {
  double v = 1.0;
  for (std::size_t i = 0; i < exp; ++i) v = std::min(cap, v * static_cast<double>(base));
  return v;
}

}  // namespace

MetricSystem torus_system(const Eigen::MatrixXd& a, const Eigen::VectorXd& shift) {
  MetricSystem sys;
  sys.kind = SpaceKind::Torus;
  sys.dim = static_cast<std::size_t>(a.rows());
  sys.linear = a;
  sys.shift = shift.size() == 0 ? Eigen::VectorXd::Zero(a.rows()) : shift;
  const Eigen::VectorXd t = sys.shift;
  sys.map = [a, t](const Eigen::VectorXd& x) { return mod1(a * x + t); };
  return sys;
}

MetricSystem box_system(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, PointMap map) {
  MetricSystem sys;
  sys.kind = SpaceKind::Box;
  sys.dim = static_cast<std::size_t>(lower.size());
  sys.lower = lower;
  sys.upper = upper;
  sys.map = std::move(map);
  return sys;
}

Eigen::VectorXd to_sphere(const Eigen::VectorXd& x) {
  const auto d = static_cast<std::size_t>(x.size());
  const double s = x.squaredNorm();
  if (!std::isfinite(s)) return north_pole(d);
  Eigen::VectorXd p(x.size() + 1);
  p.head(x.size()) = 2.0 * x / (s + 1.0);
  p(x.size()) = (s - 1.0) / (s + 1.0);
  return p;
}

Eigen::VectorXd from_sphere(const Eigen::VectorXd& p) {
  const Eigen::Index d = p.size() - 1;
  return p.head(d) / (1.0 - p(d));
}

MetricSystem compactify(PointMap map, std::size_t d, const CoercivityOptions& opt) {
  std::vector<Eigen::VectorXd> rays;
  for (std::size_t k = 0; k < d; ++k)
    for (double sign : {1.0, -1.0}) rays.push_back(sign * Eigen::VectorXd::Unit(static_cast<Eigen::Index>(d), k));
  if (d >= 2 && d <= 4) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      Eigen::VectorXd u(static_cast<Eigen::Index>(d));
      for (std::size_t k = 0; k < d; ++k) u(static_cast<Eigen::Index>(k)) = (mask >> k & 1U) ? -1.0 : 1.0;
      rays.push_back(u.normalized());
    }
  }
  for (const auto& u : rays) {
    const Eigen::VectorXd y = map(opt.max_radius * u);
    if (y.size() != static_cast<Eigen::Index>(d))
      throw std::invalid_argument("map returns a vector of the wrong dimension");
    const double norm = y.norm();
    if (std::isfinite(norm) && norm < opt.escape_threshold) {
      std::ostringstream msg;
      msg << "map is not proper: |f(x)| = " << norm << " at |x| = " << opt.max_radius;
      throw std::invalid_argument(msg.str());
    }
  }
  MetricSystem sys;
  sys.kind = SpaceKind::Sphere;
  sys.dim = d;
  sys.map = [map = std::move(map), d](const Eigen::VectorXd& p) -> Eigen::VectorXd {
    if (1.0 - p(static_cast<Eigen::Index>(d)) < 1e-14) return north_pole(d);
    const Eigen::VectorXd y = map(from_sphere(p));
    if (!y.allFinite()) return north_pole(d);
    return to_sphere(y);
  };
  return sys;
}

MetricSystem compactify_linear(const Eigen::MatrixXd& a, const CoercivityOptions& opt) {
  return compactify([a](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; },
                    static_cast<std::size_t>(a.rows()), opt);
}

double distance(const MetricSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (sys.kind == SpaceKind::Torus) return wrap(x - y).norm();
  return (x - y).norm();
}

double dynamic_distance(const MetricSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& y, int n) {
  Eigen::VectorXd a = x;
  Eigen::VectorXd b = y;
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    if (sys.kind == SpaceKind::Box && (!inside_box(sys, a) || !inside_box(sys, b)))
      throw std::domain_error("orbit leaves the box; compactify the map instead");
    best = std::max(best, distance(sys, a, b));
    if (i < n) {
      a = sys.map(a);
      b = sys.map(b);
    }
  }
  return best;
}

// ---- uniform-sample greedy cover ----------------------------------------

namespace {

struct Orbits {
  std::size_t points = 0;
  std::size_t steps = 0;  // n_max + 1
  std::size_t amb = 0;
  std::vector<double> data;

  const double* at(std::size_t p, std::size_t i) const { return data.data() + (p * steps + i) * amb; }
};

Orbits compute_orbits(const MetricSystem& sys, const std::vector<Eigen::VectorXd>& sample, int n) {
  Orbits o;
  o.points = sample.size();
  o.steps = static_cast<std::size_t>(n) + 1;
  o.amb = sys.ambient_dim();
  o.data.resize(o.points * o.steps * o.amb);
  for (std::size_t p = 0; p < o.points; ++p) {
    Eigen::VectorXd x = sample[p];
    for (std::size_t i = 0; i < o.steps; ++i) {
      if (sys.kind == SpaceKind::Box && !inside_box(sys, x))
        throw std::domain_error("orbit leaves the box; compactify the map instead");
      std::copy(x.data(), x.data() + o.amb, o.data.data() + (p * o.steps + i) * o.amb);
      if (i + 1 < o.steps) x = sys.map(x);
    }
  }
  return o;
}

double point_distance(bool torus, const double* a, const double* b, std::size_t amb) {
  double s = 0.0;
  for (std::size_t k = 0; k < amb; ++k) {
    double t = a[k] - b[k];
    if (torus) t -= std::round(t);
    s += t * t;
  }
  return std::sqrt(s);
}

std::uint64_t mix_key(const std::vector<long long>& cell) {
  std::uint64_t h = 1469598103934665603ULL;
  for (long long c : cell) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return h;
}

std::size_t greedy_cover(const MetricSystem& sys, const Orbits& o, int n, double eps) {
  const bool torus = sys.kind == SpaceKind::Torus;
  const std::size_t amb = o.amb;
  const long long cells_per_unit = torus ? std::max<long long>(1, static_cast<long long>(std::floor(1.0 / eps))) : 0;
  const double cell = torus ? 1.0 / static_cast<double>(cells_per_unit) : eps;

  auto cell_of = [&](const double* x) {
    std::vector<long long> c(amb);
    for (std::size_t k = 0; k < amb; ++k) {
      long long v = static_cast<long long>(std::floor(x[k] / cell));
      if (torus) v = ((v % cells_per_unit) + cells_per_unit) % cells_per_unit;
      c[k] = v;
    }
    return c;
  };

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  for (std::size_t p = 0; p < o.points; ++p) buckets[mix_key(cell_of(o.at(p, 0)))].push_back(static_cast<std::uint32_t>(p));

  std::vector<std::uint8_t> covered(o.points, 0);
  std::size_t count = 0;
  std::vector<long long> nb(amb);
  std::vector<std::uint64_t> keys;
  for (std::size_t p = 0; p < o.points; ++p) {
    if (covered[p]) continue;
    ++count;
    covered[p] = 1;
    const auto base = cell_of(o.at(p, 0));
    keys.clear();
    std::size_t total = 1;
    for (std::size_t k = 0; k < amb; ++k) total *= 3;
    for (std::size_t t = 0; t < total; ++t) {
      std::size_t r = t;
      for (std::size_t k = 0; k < amb; ++k) {
        long long v = base[k] + static_cast<long long>(r % 3) - 1;
        r /= 3;
        if (torus) v = ((v % cells_per_unit) + cells_per_unit) % cells_per_unit;
        nb[k] = v;
      }
      keys.push_back(mix_key(nb));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (auto key : keys) {
      auto it = buckets.find(key);
      if (it == buckets.end()) continue;
      for (auto q : it->second) {
        if (covered[q]) continue;
        bool close = true;
        for (int i = 0; i <= n && close; ++i)
          close = point_distance(torus, o.at(p, static_cast<std::size_t>(i)), o.at(q, static_cast<std::size_t>(i)), amb) < eps;
        if (close) covered[q] = 1;
      }
    }
  }
  return count;
}

}  // namespace

std::size_t spanning_count(const MetricSystem& sys, const std::vector<Eigen::VectorXd>& sample, int n, double eps) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  if (n < 0 || !(eps > 0)) throw std::invalid_argument("need n >= 0 and eps > 0");
  return greedy_cover(sys, compute_orbits(sys, sample, n), n, eps);
}

SpaceSample uniform_sample(const MetricSystem& sys, std::size_t grid_density) {
  SpaceSample s;
  const std::size_t d = sys.dim;
  if (d == 0) {
    s.points.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.ambient_dim())));
    return s;
  }
  auto per_axis = [&](std::size_t faces) {
    std::size_t g = grid_density;
    while (g > 2 && integer_pow_size(g, d, 1e18) * static_cast<double>(faces) > static_cast<double>(kSampleBudgetCap)) --g;
    return std::max<std::size_t>(g, 2);
  };
  auto grid_points = [&](std::size_t g, auto&& emit) {
    std::vector<std::size_t> idx(d, 0);
    while (true) {
      emit(idx);
      std::size_t k = 0;
      while (k < d && ++idx[k] == g) idx[k++] = 0;
      if (k == d) break;
    }
  };
  const auto dd = static_cast<Eigen::Index>(d);
  switch (sys.kind) {
    case SpaceKind::Torus: {
      const std::size_t g = per_axis(1);
      grid_points(g, [&](const std::vector<std::size_t>& idx) {
        Eigen::VectorXd x(dd);
        for (std::size_t k = 0; k < d; ++k) x(static_cast<Eigen::Index>(k)) = static_cast<double>(idx[k]) / static_cast<double>(g);
        s.points.push_back(x);
      });
      s.density = std::sqrt(static_cast<double>(d)) / (2.0 * static_cast<double>(g));
      break;
    }
    case SpaceKind::Box: {
      const std::size_t g = per_axis(1);
      const Eigen::VectorXd step = (sys.upper - sys.lower) / static_cast<double>(g);
      grid_points(g, [&](const std::vector<std::size_t>& idx) {
        Eigen::VectorXd x(dd);
        for (std::size_t k = 0; k < d; ++k) {
          const auto kk = static_cast<Eigen::Index>(k);
          x(kk) = sys.lower(kk) + (static_cast<double>(idx[k]) + 0.5) * step(kk);
        }
        s.points.push_back(x);
      });
      s.density = 0.5 * step.norm();
      break;
    }
    case SpaceKind::Sphere: {
      if (d == 1) {
        const std::size_t g = std::min(grid_density, kSampleBudgetCap);
        const double pi = std::acos(-1.0);
        for (std::size_t i = 0; i < g; ++i) {
          const double t = 2.0 * pi * static_cast<double>(i) / static_cast<double>(g);
          Eigen::VectorXd p(2);
          p << std::cos(t), std::sin(t);
          s.points.push_back(p);
        }
        s.density = 2.0 * std::sin(pi / (2.0 * static_cast<double>(g)));
        break;
      }
      const std::size_t faces = 2 * (d + 1);
      const std::size_t g = per_axis(faces);
      for (std::size_t axis = 0; axis <= d; ++axis)
        for (double sign : {1.0, -1.0})
          grid_points(g, [&](const std::vector<std::size_t>& idx) {
            Eigen::VectorXd p(dd + 1);
            std::size_t k = 0;
            for (std::size_t c = 0; c <= d; ++c) {
              const auto cc = static_cast<Eigen::Index>(c);
              if (c == axis) {
                p(cc) = sign;
              } else {
                p(cc) = -1.0 + 2.0 * (static_cast<double>(idx[k++]) + 0.5) / static_cast<double>(g);
              }
            }
            s.points.push_back(p.normalized());
          });
      s.density = std::sqrt(static_cast<double>(d)) / static_cast<double>(g);
      break;
    }
  }
  return s;
}

// ---- adapted lattice estimator -----------------------------------------

namespace {

struct OffsetHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 0;
    for (int x : v) h = h * 1000003U ^ static_cast<std::size_t>(x + 0x40000000);
    return h;
  }
};

}  // namespace

AdaptedCell adapted_torus_count(const Eigen::MatrixXd& a, int n, double eps, std::size_t budget) {
  AdaptedCell cell;
  const Eigen::Index d = a.rows();
  const auto du = static_cast<std::size_t>(d);
  Eigen::MatrixXd an = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < n; ++i) an = a * an;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(an, Eigen::ComputeFullV);
  std::vector<Eigen::MatrixXd> images(static_cast<std::size_t>(n) + 1);
  images[0] = svd.matrixV();
  for (std::size_t i = 1; i < images.size(); ++i) images[i] = a * images[i - 1];

  std::vector<double> h(du);
  for (std::size_t k = 0; k < du; ++k) {
    double stretch = 0.0;
    for (const auto& img : images) stretch = std::max(stretch, img.col(static_cast<Eigen::Index>(k)).norm());
    h[k] = eps / stretch / 4.0;
  }

  std::vector<std::size_t> m(du, 0);
  std::vector<bool> capped(du, false);
  for (bool changed = true; changed;) {
    changed = false;
    double rest = static_cast<double>(budget);
    std::size_t free_axes = 0;
    for (std::size_t k = 0; k < du; ++k) {
      if (capped[k])
        rest /= static_cast<double>(m[k]);
      else
        ++free_axes;
    }
    if (free_axes == 0) break;
    const auto per = static_cast<std::size_t>(std::floor(std::pow(std::max(rest, 1.0), 1.0 / static_cast<double>(free_axes)) + 1e-9));
    for (std::size_t k = 0; k < du; ++k) {
      if (capped[k]) continue;
      if (static_cast<double>(per) * h[k] > 1.0) {
        capped[k] = true;
        m[k] = static_cast<std::size_t>(std::ceil(1.0 / h[k]));
        changed = true;
      } else {
        m[k] = std::max<std::size_t>(per, 1);
      }
    }
  }
  if (std::all_of(capped.begin(), capped.end(), [](bool c) { return c; })) {
    // Every axis wraps the torus: spend the leftover budget on resolution.
    double used = 1.0;
    for (auto mk : m) used *= static_cast<double>(mk);
    const double refine = std::floor(std::pow(static_cast<double>(budget) / used, 1.0 / static_cast<double>(du)) + 1e-9);
    if (refine > 1.0)
      for (std::size_t k = 0; k < du; ++k) {
        h[k] /= refine;
        m[k] = static_cast<std::size_t>(std::ceil(1.0 / h[k]));
      }
  }
  for (std::size_t k = 0; k < du; ++k)
    if (!capped[k] && m[k] < kMinAxisPoints) {
      cell.reliable = false;
      cell.warning = "grid saturation: axis " + std::to_string(k) + " holds " + std::to_string(m[k]) +
                     " points, fewer than " + std::to_string(kMinAxisPoints) + " (8 ball widths)";
    }

  // Stencil of grid offsets inside the dynamic eps-ball around the origin.
  auto inside = [&](const std::vector<int>& j) {
    for (const auto& img : images) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
      for (std::size_t k = 0; k < du; ++k) v += (j[k] * h[k]) * img.col(static_cast<Eigen::Index>(k));
      if (wrap(v).norm() >= eps) return false;
    }
    return true;
  };
  std::vector<std::vector<int>> stencil;
  std::unordered_set<std::vector<int>, OffsetHash> seen;
  std::deque<std::vector<int>> queue;
  const std::vector<int> origin(du, 0);
  seen.insert(origin);
  queue.push_back(origin);
  std::size_t neighbours = 1;
  for (std::size_t k = 0; k < du; ++k) neighbours *= 3;
  constexpr std::size_t kStencilCap = 50'000'000;
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    stencil.push_back(cur);
    if (stencil.size() > kStencilCap) throw std::runtime_error("dynamic ball stencil exceeds size limit");
    for (std::size_t t = 0; t < neighbours; ++t) {
      std::vector<int> nb = cur;
      std::size_t r = t;
      for (std::size_t k = 0; k < du; ++k) {
        nb[k] += static_cast<int>(r % 3) - 1;
        r /= 3;
      }
      if (seen.count(nb)) continue;
      seen.insert(nb);
      if (inside(nb)) queue.push_back(std::move(nb));
    }
  }
  cell.stencil_size = stencil.size();

  // Greedy raster cover of the patch.
  std::size_t total = 1;
  std::vector<std::size_t> stride(du);
  for (std::size_t k = du; k-- > 0;) {
    stride[k] = total;
    total *= m[k];
  }
  std::vector<long long> lin(stencil.size());
  for (std::size_t s = 0; s < stencil.size(); ++s) {
    long long v = 0;
    for (std::size_t k = 0; k < du; ++k) v += static_cast<long long>(stencil[s][k]) * static_cast<long long>(stride[k]);
    lin[s] = v;
  }
  std::vector<std::uint8_t> covered(total, 0);
  std::vector<std::size_t> coord(du, 0);
  std::size_t raw = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (!covered[idx]) {
      ++raw;
      for (std::size_t s = 0; s < stencil.size(); ++s) {
        bool ok = true;
        for (std::size_t k = 0; k < du && ok; ++k) {
          const long long c = static_cast<long long>(coord[k]) + stencil[s][k];
          ok = c >= 0 && c < static_cast<long long>(m[k]);
        }
        if (ok) covered[static_cast<std::size_t>(static_cast<long long>(idx) + lin[s])] = 1;
      }
    }
    for (std::size_t k = du; k-- > 0;) {
      if (++coord[k] < m[k]) break;
      coord[k] = 0;
    }
  }
  double volume = 1.0;
  for (std::size_t k = 0; k < du; ++k) volume *= static_cast<double>(m[k]) * h[k];
  cell.raw_count = raw;
  cell.sample_size = total;
  cell.count = static_cast<double>(raw) / volume;
  if (4 * raw >= total) {
    cell.reliable = false;
    cell.warning = "sample saturation: " + std::to_string(raw) + " centres for " + std::to_string(total) + " points";
  }
  return cell;
}

unsigned estimator_threads(unsigned requested) {
  unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  if (requested > 0) return std::min(requested, hw);
  if (const char* env = std::getenv("LGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return std::min(static_cast<unsigned>(v), hw);
  }
  return hw;
}

namespace {

double tail_slope(const std::vector<double>& logs, int n) {
  const int lo = n / 2;
  if (n == lo) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (int i = lo; i <= n; ++i, ++k) {
    const double x = i;
    const double y = logs[static_cast<std::size_t>(i)];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

void finish(EstimateResult& r, const EstimatorParams& params) {
  const auto ne = params.eps_list.size();
  const auto steps = static_cast<std::size_t>(params.n_max) + 1;
  for (std::size_t e = 0; e < ne; ++e) {
    std::vector<double> logs(steps);
    for (std::size_t i = 0; i < steps; ++i) logs[i] = std::log(r.grid[e * steps + i].count);
    for (std::size_t i = 0; i < steps; ++i) r.grid[e * steps + i].slope = tail_slope(logs, static_cast<int>(i));
    r.per_eps_slopes.emplace_back(params.eps_list[e], r.grid[e * steps + steps - 1].slope);
    for (std::size_t i = 1; i < steps; ++i)
      if (r.grid[e * steps + i].count < 0.95 * r.grid[e * steps + i - 1].count && r.monotone_in_n) {
        r.monotone_in_n = false;
        char buf[160];
        std::snprintf(buf, sizeof buf, "count decreases in n at eps=%g, n=%zu", params.eps_list[e], i);
        r.warnings.emplace_back(buf);
      }
  }
  for (std::size_t e = 0; e < ne; ++e)
    for (std::size_t f = 0; f < ne; ++f) {
      if (!(params.eps_list[f] < params.eps_list[e])) continue;
      for (std::size_t i = 0; i < steps; ++i)
        if (r.grid[f * steps + i].count < 0.95 * r.grid[e * steps + i].count && r.monotone_in_eps) {
          r.monotone_in_eps = false;
          r.warnings.emplace_back("count increases with eps at n=" + std::to_string(i));
        }
    }
  const auto smallest = std::min_element(params.eps_list.begin(), params.eps_list.end()) - params.eps_list.begin();
  r.estimate = r.per_eps_slopes[static_cast<std::size_t>(smallest)].second;
}

template <typename Task>
void run_parallel(std::size_t tasks, unsigned workers, Task&& task) {
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, tasks));
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) task(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;) task(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

EstimateResult estimate_entropy(const MetricSystem& sys, const EstimatorParams& params) {
  if (params.n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  if (params.eps_list.empty()) throw std::invalid_argument("eps list is empty");
  for (double e : params.eps_list)
    if (!(e > 0)) throw std::invalid_argument("eps must be positive");
  if (params.grid_density < 2) throw std::invalid_argument("grid density must be at least 2");

  EstimateResult r;
  const std::size_t steps = static_cast<std::size_t>(params.n_max) + 1;
  const std::size_t ne = params.eps_list.size();
  r.grid.resize(ne * steps);
  const unsigned workers = estimator_threads(params.threads);

  if (sys.kind == SpaceKind::Torus && sys.linear) {
    r.method = "adapted_lattice";
    const auto budget = static_cast<std::size_t>(
        integer_pow_size(params.grid_density, sys.dim, static_cast<double>(kAdaptedBudgetCap)));
    std::vector<AdaptedCell> cells(ne * steps);
    run_parallel(cells.size(), workers, [&](std::size_t t) {
      cells[t] = adapted_torus_count(*sys.linear, static_cast<int>(t % steps), params.eps_list[t / steps], budget);
    });
    for (std::size_t t = 0; t < cells.size(); ++t) {
      auto& g = r.grid[t];
      g.n = static_cast<int>(t % steps);
      g.eps = params.eps_list[t / steps];
      g.count = cells[t].count;
      g.raw_count = cells[t].raw_count;
      g.sample_size = cells[t].sample_size;
      if (!cells[t].reliable) {
        r.reliable = false;
        r.warnings.push_back("n=" + std::to_string(g.n) + ": " + cells[t].warning);
      }
    }
  } else {
    r.method = "uniform_sample";
    const auto sample = uniform_sample(sys, params.grid_density);
    const auto orbits = compute_orbits(sys, sample.points, params.n_max);
    std::vector<std::size_t> counts(ne * steps);
    run_parallel(counts.size(), workers, [&](std::size_t t) {
      counts[t] = greedy_cover(sys, orbits, static_cast<int>(t % steps), params.eps_list[t / steps]);
    });
    for (std::size_t t = 0; t < counts.size(); ++t) {
      auto& g = r.grid[t];
      g.n = static_cast<int>(t % steps);
      g.eps = params.eps_list[t / steps];
      g.count = static_cast<double>(counts[t]);
      g.raw_count = counts[t];
      g.sample_size = sample.points.size();
      if (4 * counts[t] >= sample.points.size()) {
        if (r.reliable || r.warnings.empty())
          r.warnings.push_back("sample saturation at n=" + std::to_string(g.n) + ", eps=" + std::to_string(g.eps));
        r.reliable = false;
      }
    }
    const double min_eps = *std::min_element(params.eps_list.begin(), params.eps_list.end());
    if (sample.density > min_eps / 4.0) {
      r.reliable = false;
      r.warnings.push_back("sample spacing " + std::to_string(sample.density) + " exceeds eps/4 = " +
                           std::to_string(min_eps / 4.0));
    }
  }
  finish(r, params);
  return r;
}

EstimateResult combine_product(const EstimateResult& a, const EstimateResult& b) {
  if (a.grid.size() != b.grid.size()) throw std::invalid_argument("estimates on different grids");
  EstimateResult r;
  r.method = a.method == b.method ? a.method : a.method + "+" + b.method;
  r.grid = a.grid;
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    r.grid[i].count = a.grid[i].count * b.grid[i].count;
    r.grid[i].raw_count = a.grid[i].raw_count * b.grid[i].raw_count;
    r.grid[i].sample_size = a.grid[i].sample_size * b.grid[i].sample_size;
    r.grid[i].slope = a.grid[i].slope + b.grid[i].slope;
  }
  for (std::size_t i = 0; i < a.per_eps_slopes.size(); ++i)
    r.per_eps_slopes.emplace_back(a.per_eps_slopes[i].first, a.per_eps_slopes[i].second + b.per_eps_slopes[i].second);
  r.estimate = a.estimate + b.estimate;
  r.reliable = a.reliable && b.reliable;
  r.monotone_in_n = a.monotone_in_n && b.monotone_in_n;
  r.monotone_in_eps = a.monotone_in_eps && b.monotone_in_eps;
  r.warnings = a.warnings;
  r.warnings.insert(r.warnings.end(), b.warnings.begin(), b.warnings.end());
  return r;
}

std::string estimate_csv(const EstimateResult& r) {
  std::ostringstream out;
  out << "n,eps,count,slope\n";
  char buf[160];
  for (const auto& g : r.grid) {
    std::snprintf(buf, sizeof buf, "%d,%g,%.10g,%.10g\n", g.n, g.eps, g.count, g.slope);
    out << buf;
  }
  return out.str();
}

nlohmann::json estimate_to_json(const EstimateResult& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["estimate"] = r.estimate;
  j["reliable"] = r.reliable;
  j["monotone_in_n"] = r.monotone_in_n;
  j["monotone_in_eps"] = r.monotone_in_eps;
  j["warnings"] = r.warnings;
  j["per_eps_slopes"] = nlohmann::json::array();
  for (const auto& [e, s] : r.per_eps_slopes) j["per_eps_slopes"].push_back({{"eps", e}, {"slope", s}});
  j["grid"] = nlohmann::json::array();
  for (const auto& g : r.grid)
    j["grid"].push_back({{"n", g.n},
                         {"eps", g.eps},
                         {"count", g.count},
                         {"raw_count", g.raw_count},
                         {"sample_size", g.sample_size},
                         {"slope", g.slope}});
  return j;
}

}  // namespace lge
