#include "bergdyn/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace bergdyn::quad {

void QuadratureConfig::validate() const {
  if (!(split_radius > 1.0))
    throw std::invalid_argument("quadrature: split_radius must be > 1");
  if (max_depth < 1)
    throw std::invalid_argument("quadrature: max_depth must be >= 1");
  if (base_order < 2)
    throw std::invalid_argument("quadrature: base_order must be >= 2");
  if (!(rel_tol > 0.0))
    throw std::invalid_argument("quadrature: rel_tol must be positive");
}

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  auto legendre = [n](double x, double& p, double& dp) {
    double p1 = 1.0, p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
    }
    p = p1;
    dp = n * (x * p1 - p2) / (x * x - 1.0);
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(x, p, dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

namespace {

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

struct Accum {
  Kahan re, im, err;
  std::uint64_t discarded = 0;
  void add_value(Complex v) {
    re.add(v.real());
    im.add(v.imag());
  }
};

enum class CellClass { Outside, Inside, Straddle };

struct Cell {
  double x0, x1, y0, y1;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

class Engine {
 public:
  Engine(ComplexField field, const geom::Domain& domain,
         const QuadratureConfig& cfg)
      : field_(std::move(field)),
        domain_(domain),
        cfg_(cfg),
        rule_(gauss_legendre(cfg.base_order)),
        blend_lo_(0.8 * cfg.split_radius),
        blend_hi_(1.2 * cfg.split_radius) {
    cfg_.validate();
    build_tasks();
  }

  struct Result {
    Complex value;
    double error = 0.0;
    std::uint64_t cells = 0;
    std::uint64_t discarded = 0;
  };

  Result run() {
    // Coarse pass fixes the absolute tolerance floor per unit area.
    double coarse_l1 = 0.0;
    double total_area = 0.0;
    for (const Task& t : tasks_) {
      bool any_inside = false;
      const CellClass cls = classify(t.chart, t.cell);
      total_area += t.cell.area();
      if (cls == CellClass::Outside) continue;
      Complex e;
      if (cls == CellClass::Inside) {
        bool all_in = true;
        e = tensor_gauss(t.chart, t.cell, all_in);
        if (!all_in) e = pencil(t.chart, t.cell, any_inside);
      } else {
        e = pencil(t.chart, t.cell, any_inside);
      }
      coarse_l1 += std::abs(e);
    }
    scale_density_ = coarse_l1 / total_area;

    const std::size_t n = tasks_.size();
    results_.assign(n, Accum{});
    next_task_.store(0);
    cell_count_.store(0);

    int threads = cfg_.threads;
    if (threads <= 0) {
      const unsigned hw = std::thread::hardware_concurrency();
      threads = static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
    }
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));

    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (int i = 0; i < threads; ++i)
        pool.emplace_back([this] { worker(); });
      for (auto& th : pool) th.join();
    }
    if (worker_error_) std::rethrow_exception(worker_error_);

    // Fixed-order reduction: task index order, compensated.
    Result out;
    Kahan re, im, err;
    for (const Accum& a : results_) {
      re.add(a.re.sum);
      re.add(a.re.comp);
      im.add(a.im.sum);
      im.add(a.im.comp);
      err.add(a.err.sum);
      out.discarded += a.discarded;
    }
    out.value = Complex(re.sum, im.sum);
    out.error = err.sum;
    out.cells = cell_count_.load();
    return out;
  }

 private:
  struct Task {
    int chart;
    Cell cell;
  };

  void build_tasks() {
    const int grid = 8;
    const double s0 = blend_hi_;
    add_chart_tasks(0, s0, grid);
    const double s1 = 1.0 / blend_lo_;
    add_chart_tasks(1, s1, grid);

    // Chart coordinates of domain feature points, for rescuing
    // components smaller than the probe grid.
    for (const ExtendedPoint& p : domain_.feature_points()) {
      if (!domain_.contains(p)) continue;
      if (!p.is_infinity()) {
        features_[0].push_back(p.value());
        if (p.value() != Complex(0.0, 0.0))
          features_[1].push_back(1.0 / p.value());
      } else {
        features_[1].push_back(Complex(0.0, 0.0));
      }
    }
  }

  void add_chart_tasks(int chart, double half_extent, int grid) {
    const double h = 2.0 * half_extent / grid;
    for (int iy = 0; iy < grid; ++iy)
      for (int ix = 0; ix < grid; ++ix)
        tasks_.push_back(Task{chart, Cell{-half_extent + ix * h,
                                          -half_extent + (ix + 1) * h,
                                          -half_extent + iy * h,
                                          -half_extent + (iy + 1) * h}});
  }

  void worker() {
    try {
      for (;;) {
        const std::size_t i = next_task_.fetch_add(1);
        if (i >= tasks_.size()) return;
        Accum acc;
        process(tasks_[i].chart, tasks_[i].cell, 0, nullptr, acc);
        results_[i] = acc;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lk(error_mutex_);
      if (!worker_error_) worker_error_ = std::current_exception();
    }
  }

  double phi_blend(double r) const {
    if (r <= blend_lo_) return 1.0;
    if (r >= blend_hi_) return 0.0;
    const double t = (r - blend_lo_) / (blend_hi_ - blend_lo_);
    const double ea = std::exp(-1.0 / (1.0 - t));
    const double eb = std::exp(-1.0 / t);
    return ea / (ea + eb);
  }

  double pou(int chart, Complex u) const {
    const double r = std::abs(u);
    if (chart == 0) return phi_blend(r);
    if (r == 0.0) return 1.0;
    return 1.0 - phi_blend(1.0 / r);
  }

  bool member(int chart, Complex u) const {
    if (chart == 0) return domain_.contains(u);
    if (u == Complex(0.0, 0.0)) return domain_.contains_infinity();
    return domain_.contains(1.0 / u);
  }

  Complex integrand(int chart, Complex u) const {
    const double w = pou(chart, u);
    if (w == 0.0) return Complex(0.0, 0.0);
    const double r2 = std::norm(u);
    const double dens = 1.0 / (kPi * (1.0 + r2) * (1.0 + r2));
    const Complex z = (chart == 0) ? u : 1.0 / u;
    const Complex v = field_(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NonFiniteSampleError("non-finite sample in sphere integral");
    return v * (dens * w);
  }

  /// Whole cell is beyond the blend support for this chart.
  bool blend_dead(int chart, const Cell& c) const {
    const double dx = std::max({c.x0, -c.x1, 0.0});
    const double dy = std::max({c.y0, -c.y1, 0.0});
    const double rmin = std::hypot(dx, dy);
    const double cutoff = (chart == 0) ? blend_hi_ : 1.0 / blend_lo_;
    return rmin >= cutoff;
  }

  CellClass classify(int chart, const Cell& c) const {
    int in = 0, total = 0;
    for (int iy = 0; iy < 5; ++iy)
      for (int ix = 0; ix < 5; ++ix) {
        const Complex u(c.x0 + (c.x1 - c.x0) * ix / 4.0,
                        c.y0 + (c.y1 - c.y0) * iy / 4.0);
        ++total;
        if (member(chart, u)) ++in;
      }
    if (in == total) return CellClass::Inside;
    if (in > 0) return CellClass::Straddle;
    // All probes outside: rescue cells hiding a small component.
    for (const Complex& fp : features_[chart]) {
      if (fp.real() >= c.x0 && fp.real() <= c.x1 && fp.imag() >= c.y0 &&
          fp.imag() <= c.y1)
        return CellClass::Straddle;
    }
    return CellClass::Outside;
  }

  void count_cell() const {
    if (cell_count_.fetch_add(1) + 1 > cfg_.cell_budget)
      throw BudgetExceededError("quadrature cell budget exceeded");
  }

  Complex tensor_gauss(int chart, const Cell& c, bool& all_in) const {
    count_cell();
    const double hx = 0.5 * (c.x1 - c.x0), mx = 0.5 * (c.x1 + c.x0);
    const double hy = 0.5 * (c.y1 - c.y0), my = 0.5 * (c.y1 + c.y0);
    Complex acc(0.0, 0.0);
    all_in = true;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
      for (std::size_t j = 0; j < rule_.nodes.size(); ++j) {
        const Complex u(mx + hx * rule_.nodes[i], my + hy * rule_.nodes[j]);
        if (!member(chart, u)) {
          all_in = false;
          return Complex(0.0, 0.0);
        }
        acc += integrand(chart, u) * (rule_.weights[i] * rule_.weights[j]);
      }
    }
    return acc * (hx * hy);
  }

  /// Masked integration of a straddling cell: 1-D slices at Gauss nodes
  /// of the cross axis, member segments found by bisected crossings,
  /// Gauss applied per segment.
  Complex pencil(int chart, const Cell& c, bool& any_inside) const {
    count_cell();
    any_inside = false;

    // Pick the slice axis: prefer the axis along which membership varies.
    int change_x = 0, change_y = 0;
    bool probe[5][5];
    for (int iy = 0; iy < 5; ++iy)
      for (int ix = 0; ix < 5; ++ix)
        probe[iy][ix] = member(chart, Complex(c.x0 + (c.x1 - c.x0) * ix / 4.0,
                                              c.y0 + (c.y1 - c.y0) * iy / 4.0));
    for (int iy = 0; iy < 5; ++iy)
      for (int ix = 0; ix + 1 < 5; ++ix) {
        if (probe[iy][ix] != probe[iy][ix + 1]) ++change_x;
        if (probe[ix][iy] != probe[ix + 1][iy]) ++change_y;
      }
    const bool slice_along_x = change_x >= change_y;

    const double p0 = slice_along_x ? c.x0 : c.y0;
    const double p1 = slice_along_x ? c.x1 : c.y1;
    const double q0 = slice_along_x ? c.y0 : c.x0;
    const double q1 = slice_along_x ? c.y1 : c.x1;
    const double hq = 0.5 * (q1 - q0), mq = 0.5 * (q1 + q0);

    auto at = [&](double p, double q) {
      return slice_along_x ? Complex(p, q) : Complex(q, p);
    };

    const int order = static_cast<int>(rule_.nodes.size());
    const int probes = 2 * order + 1;
    Complex acc(0.0, 0.0);
    for (int jq = 0; jq < order; ++jq) {
      const double q = mq + hq * rule_.nodes[jq];
      // Member pattern along the pencil.
      std::vector<bool> inside(probes);
      for (int k = 0; k < probes; ++k)
        inside[k] =
            member(chart, at(p0 + (p1 - p0) * k / (probes - 1.0), q));
      // Crossings, bisected.
      std::vector<double> cuts;
      for (int k = 0; k + 1 < probes; ++k) {
        if (inside[k] == inside[k + 1]) continue;
        double lo = p0 + (p1 - p0) * k / (probes - 1.0);
        double hi = p0 + (p1 - p0) * (k + 1) / (probes - 1.0);
        const bool lo_in = inside[k];
        for (int it = 0; it < 45; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (member(chart, at(mid, q)) == lo_in)
            lo = mid;
          else
            hi = mid;
        }
        cuts.push_back(0.5 * (lo + hi));
      }
      // Integrate the member segments.
      Complex line(0.0, 0.0);
      double seg_start = p0;
      bool seg_in = inside[0];
      auto flush = [&](double seg_end) {
        // Slivers thinner than 1e-8 put Gauss nodes inside the pole
        // guard of kernel evaluators; their mass is negligible.
        if (seg_in && seg_end - seg_start > 1e-8) {
          any_inside = true;
          const double hp = 0.5 * (seg_end - seg_start);
          const double mp = 0.5 * (seg_end + seg_start);
          for (int i = 0; i < order; ++i)
            line += integrand(chart, at(mp + hp * rule_.nodes[i], q)) *
                    (rule_.weights[i] * hp);
        }
      };
      for (double cut : cuts) {
        flush(cut);
        seg_start = cut;
        seg_in = !seg_in;
      }
      flush(p1);
      acc += line * (rule_.weights[jq] * hq);
    }
    return acc;
  }

  Complex estimate(int chart, const Cell& c, CellClass cls,
                   bool& any_inside) const {
    any_inside = true;
    if (cls == CellClass::Outside) return Complex(0.0, 0.0);
    if (cls == CellClass::Inside) {
      bool all_in = true;
      const Complex e = tensor_gauss(chart, c, all_in);
      if (all_in) return e;
    }
    return pencil(chart, c, any_inside);
  }

  void process(int chart, const Cell& c, int depth, const Complex* known,
               Accum& acc) const {
    if (blend_dead(chart, c)) return;
    const CellClass cls = classify(chart, c);
    if (cls == CellClass::Outside) return;

    bool any_inside = true;
    Complex e1;
    if (known) {
      e1 = *known;
    } else {
      e1 = estimate(chart, c, cls, any_inside);
    }

    const double mx = 0.5 * (c.x0 + c.x1), my = 0.5 * (c.y0 + c.y1);
    const Cell child[4] = {Cell{c.x0, mx, c.y0, my}, Cell{mx, c.x1, c.y0, my},
                           Cell{c.x0, mx, my, c.y1}, Cell{mx, c.x1, my, c.y1}};
    Complex e2(0.0, 0.0);
    Complex ce[4];
    CellClass ccls[4];
    bool cin[4];
    for (int k = 0; k < 4; ++k) {
      cin[k] = true;
      if (blend_dead(chart, child[k])) {
        ccls[k] = CellClass::Outside;
        ce[k] = Complex(0.0, 0.0);
        continue;
      }
      ccls[k] = classify(chart, child[k]);
      ce[k] = estimate(chart, child[k], ccls[k], cin[k]);
      e2 += ce[k];
    }

    const double delta = std::abs(e1 - e2);
    const double tol =
        cfg_.rel_tol * std::max(std::abs(e2), scale_density_ * c.area());
    if (delta <= tol || depth + 1 >= cfg_.max_depth) {
      for (int k = 0; k < 4; ++k) {
        if (ccls[k] == CellClass::Outside) continue;
        acc.add_value(ce[k]);
        if (ccls[k] == CellClass::Straddle && !cin[k]) acc.discarded += 1;
      }
      acc.err.add(delta);
      return;
    }
    for (int k = 0; k < 4; ++k) {
      if (ccls[k] == CellClass::Outside) continue;
      process(chart, child[k], depth + 1, &ce[k], acc);
    }
  }

  ComplexField field_;
  const geom::Domain& domain_;
  QuadratureConfig cfg_;
  GaussRule rule_;
  double blend_lo_, blend_hi_;
  double scale_density_ = 0.0;
  std::vector<Task> tasks_;
  std::vector<Complex> features_[2];
  std::vector<Accum> results_;
  mutable std::atomic<std::size_t> next_task_{0};
  mutable std::atomic<std::uint64_t> cell_count_{0};
  std::exception_ptr worker_error_;
  std::mutex error_mutex_;
};

}  // namespace

NormEstimate sphere_integral(const RealField& g, const geom::Domain& domain,
                             const QuadratureConfig& cfg) {
  Engine engine([&g](Complex z) { return Complex(g(z), 0.0); }, domain, cfg);
  const Engine::Result r = engine.run();
  NormEstimate out;
  out.value = std::max(0.0, r.value.real());
  out.error_estimate = r.error;
  out.cells_used = r.cells;
  out.boundary_cells_discarded = r.discarded;
  out.divergent =
      out.error_estimate > 0.02 * std::max(out.value, 1e-12);
  return out;
}

NormEstimate ap_norm(const ComplexField& f, const geom::Domain& domain,
                     double p, const QuadratureConfig& cfg) {
  if (!(p >= 1.0)) throw std::invalid_argument("ap_norm: p must be >= 1");
  NormEstimate raw = sphere_integral(
      [&f, p](Complex z) { return std::pow(std::abs(f(z)), p); }, domain, cfg);
  NormEstimate out = raw;
  out.value = std::pow(raw.value, 1.0 / p);
  if (raw.value > 0.0)
    out.error_estimate = raw.error_estimate * out.value / (p * raw.value);
  else
    out.error_estimate = std::pow(raw.error_estimate, 1.0 / p);
  return out;
}

InnerProductEstimate inner_product(const ComplexField& f,
                                   const ComplexField& g,
                                   const geom::Domain& domain,
                                   const QuadratureConfig& cfg) {
  Engine engine(
      [&f, &g](Complex z) { return f(z) * std::conj(g(z)); }, domain, cfg);
  const Engine::Result r = engine.run();
  InnerProductEstimate out;
  out.value = r.value;
  out.error_estimate = r.error;
  out.cells_used = r.cells;
  out.boundary_cells_discarded = r.discarded;
  return out;
}

namespace {

double line_gauss(const std::function<double(double)>& f,
                  const GaussRule& rule, double lo, double hi, double& l1) {
  const double hh = 0.5 * (hi - lo), mm = 0.5 * (hi + lo);
  double s = 0.0;
  l1 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = f(mm + hh * rule.nodes[i]);
    s += rule.weights[i] * v;
    l1 += rule.weights[i] * std::abs(v);
  }
  l1 *= hh;
  return s * hh;
}

double line_recurse(const std::function<double(double)>& f,
                    const GaussRule& rule, double a, double b, double whole,
                    double tol, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  double l1_left = 0.0, l1_right = 0.0;
  const double left = line_gauss(f, rule, a, m, l1_left);
  const double right = line_gauss(f, rule, m, b, l1_right);
  const double delta = std::abs(left + right - whole);
  // Accept on relative agreement or at the roundoff floor of the pair.
  if (depth >= max_depth ||
      delta <= tol * std::max(1e-300, std::abs(left + right)) ||
      delta <= 1e-14 * (l1_left + l1_right))
    return left + right;
  return line_recurse(f, rule, a, m, left, tol, depth + 1, max_depth) +
         line_recurse(f, rule, m, b, right, tol, depth + 1, max_depth);
}

}  // namespace

double line_integral(const std::function<double(double)>& f, double a,
                     double b, double rel_tol, int max_depth) {
  const GaussRule rule = gauss_legendre(8);
  double l1 = 0.0;
  const double whole = line_gauss(f, rule, a, b, l1);
  return line_recurse(f, rule, a, b, whole, rel_tol, 0, max_depth);
}

std::vector<LogGrowthRow> log_growth_check(const std::vector<double>& radii) {
  std::vector<LogGrowthRow> rows;
  rows.reserve(radii.size());
  for (double r : radii) {
    if (!(r >= 0.0) || !(r < 1.0))
      throw std::invalid_argument("log_growth_check: radii must be in [0,1)");
    auto integrand = [r](double t) {
      return 1.0 / std::abs(Complex(1.0, 0.0) - r * unit_point(t));
    };
    LogGrowthRow row;
    row.r = r;
    row.h = line_integral(integrand, 0.0, kTwoPi, 1e-11) / kTwoPi;
    row.ratio = (r > 0.0) ? row.h / std::log(1.0 / (1.0 - r)) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bergdyn::quad
