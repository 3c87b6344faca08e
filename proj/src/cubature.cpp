#include "bornrate/cubature.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace bornrate {

//******************************************************************************
// Gauss-Kronrod tables

namespace {

struct KronrodRule {
  std::vector<double> nodes;   // ascending on [-1, 1]
  std::vector<double> kronrod; // Kronrod weights
  std::vector<double> gauss;   // embedded Gauss weights, 0 at Kronrod-only nodes
  int degree = 0;
};

KronrodRule make_symmetric(const std::vector<double> &x_desc, const std::vector<double> &wk_desc,
                           const std::vector<double> &wg_desc, int degree) {
  // Inputs list the non-negative half, largest node first, centre last.
  KronrodRule r;
  r.degree = degree;
  const std::size_t half = x_desc.size() - 1;
  for (std::size_t i = 0; i < half; ++i) {
    r.nodes.push_back(-x_desc[i]);
    r.kronrod.push_back(wk_desc[i]);
    r.gauss.push_back(wg_desc[i]);
  }
  r.nodes.push_back(0.0);
  r.kronrod.push_back(wk_desc[half]);
  r.gauss.push_back(wg_desc[half]);
  for (std::size_t i = half; i-- > 0;) {
    r.nodes.push_back(x_desc[i]);
    r.kronrod.push_back(wk_desc[i]);
    r.gauss.push_back(wg_desc[i]);
  }
  return r;
}

// 7-point Kronrod extension of the 3-point Gauss rule.
const KronrodRule &rule_k7() {
  static const KronrodRule r = make_symmetric(
      {0.96049126870802028342, 0.77459666924148337704, 0.43424374934680255800, 0.0},
      {0.10465622602646726519, 0.26848808986833344073, 0.40139741477596222291,
       0.45091653865847414235},
      {0.0, 5.0 / 9.0, 0.0, 8.0 / 9.0}, 11);
  return r;
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
const KronrodRule &rule_k15() {
  static const KronrodRule r = make_symmetric(
      {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
       0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
       0.207784955007898467600689403773245, 0.0},
      {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
       0.204432940075298892414161999234649, 0.209482141084727828012999174891714},
      {0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780, 0.0,
       0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327},
      23);
  return r;
}

const KronrodRule &rule_for(int base_order) {
  switch (base_order) {
  case 7:
    return rule_k7();
  case 15:
    return rule_k15();
  default:
    throw DomainError("unsupported base_order " + std::to_string(base_order) +
                      " (supported: 7, 15)");
  }
}

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
  void add(Complex v) {
    add_part(sum_re_, comp_re_, v.real());
    add_part(sum_im_, comp_im_, v.imag());
  }
  Complex value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }

private:
  static void add_part(double &sum, double &comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double sum_re_ = 0.0, comp_re_ = 0.0, sum_im_ = 0.0, comp_im_ = 0.0;
};

} // namespace

int kronrod_degree(int base_order) { return rule_for(base_order).degree; }

//******************************************************************************
// Box

double Box::distance_to(const Position &p) const {
  double d2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    double d = 0.0;
    if (p[i] < lo[i])
      d = lo[i] - p[i];
    else if (p[i] > hi[i])
      d = p[i] - hi[i];
    d2 += d * d;
  }
  return std::sqrt(d2);
}

void Box::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i]))
      throw DomainError("Box: require finite lo < hi along every axis");
  }
}

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw DomainError("QuadratureSpec: tolerances must be > 0");
  if (max_depth <= 0 || max_evaluations <= 0)
    throw DomainError("QuadratureSpec: max_depth and max_evaluations must be > 0");
  if (base_order < 3)
    throw DomainError("QuadratureSpec: base_order must be >= 3");
  (void)rule_for(base_order);
  if (!(max_cell_width > 0.0) || !(grading_distance >= 0.0))
    throw DomainError("QuadratureSpec: max_cell_width must be > 0, grading_distance >= 0");
}

void McSpec::validate() const {
  if (samples < 1000)
    throw DomainError("McSpec: samples must be >= 1000");
}

//******************************************************************************
// Box cubature

namespace {

struct Cell {
  Box box;
  Complex value;
  double error = 0.0;
  int depth = 0;
};

struct CellEstimate {
  Complex value;
  double error;
};

CellEstimate evaluate_cell(const Field &f, const Box &b, const KronrodRule &rule) {
  const std::size_t n = rule.nodes.size();
  const Position c = b.center();
  const Vec3 h = 0.5 * b.widths();

  std::vector<double> xs(n), ys(n), zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = c.x + h.x * rule.nodes[i];
    ys[i] = c.y + h.y * rule.nodes[i];
    zs[i] = c.z + h.z * rule.nodes[i];
  }

  Complex kron = 0.0, gauss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double wk_ij = rule.kronrod[i] * rule.kronrod[j];
      const double wg_ij = rule.gauss[i] * rule.gauss[j];
      Complex kron_line = 0.0, gauss_line = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        const Complex v = f(Position{xs[i], ys[j], zs[l]});
        kron_line += rule.kronrod[l] * v;
        if (wg_ij != 0.0)
          gauss_line += rule.gauss[l] * v;
      }
      kron += wk_ij * kron_line;
      gauss += wg_ij * gauss_line;
    }
  }
  const double scale = h.x * h.y * h.z;
  return {kron * scale, std::abs(kron - gauss) * scale};
}

/// Bisects every side that ties for the longest, so that cells which are
/// mirror images of each other are split the same way.
std::vector<Box> split_longest(const Box &b) {
  const Vec3 w = b.widths();
  const double longest = std::max({w.x, w.y, w.z});
  std::vector<Box> parts{b};
  for (int axis = 0; axis < 3; ++axis) {
    if (w[axis] != longest)
      continue;
    std::vector<Box> next;
    next.reserve(parts.size() * 2);
    for (const Box &p : parts) {
      const double mid = 0.5 * (p.lo[axis] + p.hi[axis]);
      Box lower = p, upper = p;
      lower.hi[axis] = mid;
      upper.lo[axis] = mid;
      next.push_back(lower);
      next.push_back(upper);
    }
    parts = std::move(next);
  }
  return parts;
}

double longest_side(const Box &b) {
  const Vec3 w = b.widths();
  return std::max({w.x, w.y, w.z});
}

void grade_toward(const Box &b, int depth, const Position &focus, int max_depth,
                  std::vector<std::pair<Box, int>> &out) {
  if (depth < max_depth && longest_side(b) > b.distance_to(focus)) {
    for (const Box &child : split_longest(b))
      grade_toward(child, depth + 1, focus, max_depth, out);
    return;
  }
  out.emplace_back(b, depth);
}

std::vector<std::pair<Box, int>> initial_cells(const Box &box, const QuadratureSpec &spec,
                                               const std::optional<Position> &focus) {
  int counts[3];
  const Vec3 w = box.widths();
  for (int i = 0; i < 3; ++i)
    counts[i] = std::max(1, static_cast<int>(std::ceil(w[i] / spec.max_cell_width * (1.0 - 1e-12))));

  auto edge = [&](int axis, int i) {
    if (i == counts[axis])
      return box.hi[axis];
    return box.lo[axis] + w[axis] * static_cast<double>(i) / counts[axis];
  };

  std::vector<std::pair<Box, int>> grid;
  grid.reserve(static_cast<std::size_t>(counts[0]) * counts[1] * counts[2]);
  for (int i = 0; i < counts[0]; ++i)
    for (int j = 0; j < counts[1]; ++j)
      for (int l = 0; l < counts[2]; ++l)
        grid.emplace_back(Box{{edge(0, i), edge(1, j), edge(2, l)},
                              {edge(0, i + 1), edge(1, j + 1), edge(2, l + 1)}},
                          0);

  if (!focus || box.distance_to(*focus) >= spec.grading_distance)
    return grid;
  if (box.distance_to(*focus) == 0.0)
    throw DomainError("integrate_box: focus point lies on or inside the integration box");

  std::vector<std::pair<Box, int>> graded;
  for (const auto &[cell, depth] : grid)
    grade_toward(cell, depth, *focus, spec.max_depth, graded);
  return graded;
}

} // namespace

CubatureResult integrate_box(const Field &f, const Box &box, const QuadratureSpec &spec,
                             std::optional<Position> focus) {
  box.validate();
  spec.validate();
  const KronrodRule &rule = rule_for(spec.base_order);
  const long long points_per_cell = static_cast<long long>(rule.nodes.size()) *
                                    static_cast<long long>(rule.nodes.size()) *
                                    static_cast<long long>(rule.nodes.size());

  std::vector<Cell> cells;
  {
    const auto seeds = initial_cells(box, spec, focus);
    cells.resize(seeds.size());
    detail::parallel_for(seeds.size(), spec.threads, [&](std::size_t i) {
      const auto est = evaluate_cell(f, seeds[i].first, rule);
      cells[i] = Cell{seeds[i].first, est.value, est.error, seeds[i].second};
    });
  }
  long long evaluations = points_per_cell * static_cast<long long>(cells.size());

  std::vector<std::size_t> order;
  for (;;) {
    CompensatedSum total_sum;
    double error = 0.0;
    for (const Cell &c : cells) {
      total_sum.add(c.value);
      error += c.error;
    }
    const Complex total = total_sum.value();
    const double tolerance = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (error <= tolerance)
      return {total, error, evaluations};

    // Refine the worst cells until the untouched remainder fits in half
    // the tolerance.
    order.resize(cells.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (cells[a].error != cells[b].error)
        return cells[a].error > cells[b].error;
      return a < b;
    });
    std::vector<std::size_t> chosen;
    double remaining = error;
    for (std::size_t idx : order) {
      if (remaining <= 0.5 * tolerance && !chosen.empty())
        break;
      if (cells[idx].depth >= spec.max_depth)
        continue;
      chosen.push_back(idx);
      remaining -= cells[idx].error;
    }
    if (chosen.empty())
      throw ConvergenceError("integrate_box: maximum subdivision depth reached", total, error,
                             evaluations);

    std::sort(chosen.begin(), chosen.end());
    std::vector<Cell> children;
    std::vector<std::size_t> parent_slot;
    for (std::size_t idx : chosen) {
      for (const Box &b : split_longest(cells[idx].box)) {
        children.push_back(Cell{b, {}, 0.0, cells[idx].depth + 1});
        parent_slot.push_back(idx);
      }
    }
    const long long cost = points_per_cell * static_cast<long long>(children.size());
    if (evaluations + cost > spec.max_evaluations)
      throw ConvergenceError("integrate_box: evaluation budget exhausted", total, error,
                             evaluations);

    detail::parallel_for(children.size(), spec.threads, [&](std::size_t i) {
      const auto est = evaluate_cell(f, children[i].box, rule);
      children[i].value = est.value;
      children[i].error = est.error;
    });
    evaluations += cost;

    // First child takes the parent's slot; the rest are appended.
    std::size_t prev_parent = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (parent_slot[i] != prev_parent) {
        cells[parent_slot[i]] = children[i];
        prev_parent = parent_slot[i];
      } else {
        cells.push_back(children[i]);
      }
    }
  }
}

//******************************************************************************
// Monte Carlo oracle

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ (counter * 0xd1342543de82ef95ULL));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

struct RunningStats {
  long long n = 0;
  double mean_re = 0.0, mean_im = 0.0, m2_re = 0.0, m2_im = 0.0;

  void push(Complex v) {
    ++n;
    const double dr = v.real() - mean_re;
    const double di = v.imag() - mean_im;
    mean_re += dr / static_cast<double>(n);
    mean_im += di / static_cast<double>(n);
    m2_re += dr * (v.real() - mean_re);
    m2_im += di * (v.imag() - mean_im);
  }

  void merge(const RunningStats &o) {
    if (o.n == 0)
      return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double frac = static_cast<double>(o.n) / total;
    const double dr = o.mean_re - mean_re;
    const double di = o.mean_im - mean_im;
    const double cross = static_cast<double>(n) * static_cast<double>(o.n) / total;
    mean_re += dr * frac;
    mean_im += di * frac;
    m2_re += o.m2_re + dr * dr * cross;
    m2_im += o.m2_im + di * di * cross;
    n += o.n;
  }
};

} // namespace

McResult mc_integrate(const Field &f, const Box &box, const McSpec &spec) {
  box.validate();
  spec.validate();
  constexpr long long chunk = 1 << 16;
  const long long n_chunks = (spec.samples + chunk - 1) / chunk;
  const Vec3 w = box.widths();

  std::vector<RunningStats> partial(static_cast<std::size_t>(n_chunks));
  detail::parallel_for(partial.size(), spec.threads, [&](std::size_t c) {
    const long long begin = static_cast<long long>(c) * chunk;
    const long long end = std::min(spec.samples, begin + chunk);
    RunningStats s;
    for (long long i = begin; i < end; ++i) {
      const auto base = static_cast<std::uint64_t>(i) * 3;
      const Position p{box.lo.x + w.x * counter_uniform(spec.seed, base),
                       box.lo.y + w.y * counter_uniform(spec.seed, base + 1),
                       box.lo.z + w.z * counter_uniform(spec.seed, base + 2)};
      s.push(f(p));
    }
    partial[c] = s;
  });

  RunningStats all;
  for (const auto &s : partial)
    all.merge(s);

  const double volume = box.volume();
  const double n = static_cast<double>(all.n);
  const double variance = (all.m2_re + all.m2_im) / (n - 1.0);
  return {Complex{all.mean_re, all.mean_im} * volume, volume * std::sqrt(variance / n), all.n};
}

//******************************************************************************
// 1-D adaptive Gauss-Kronrod

namespace {

struct Segment {
  double a, b;
  Complex value;
  double error;
};

Segment evaluate_segment(const LineFunction &f, double a, double b) {
  const KronrodRule &rule = rule_k15();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Complex kron = 0.0, gauss = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Complex v = f(c + h * rule.nodes[i]);
    kron += rule.kronrod[i] * v;
    gauss += rule.gauss[i] * v;
  }
  return {a, b, kron * h, std::abs(kron - gauss) * std::abs(h)};
}

} // namespace

CubatureResult integrate_interval(const LineFunction &f, double a, double b,
                                  const IntervalSpec &spec) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw DomainError("integrate_interval: limits must be finite");
  if (a == b)
    return {};
  if (a > b) {
    CubatureResult r = integrate_interval(f, std::vector<double>{b, a}, spec);
    r.value = -r.value;
    return r;
  }
  return integrate_interval(f, std::vector<double>{a, b}, spec);
}

CubatureResult integrate_interval(const LineFunction &f, const std::vector<double> &points,
                                  const IntervalSpec &spec) {
  if (points.size() < 2)
    throw DomainError("integrate_interval: need at least two breakpoints");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i]))
      throw DomainError("integrate_interval: breakpoints must be finite");
    if (i > 0 && !(points[i] > points[i - 1]))
      throw DomainError("integrate_interval: breakpoints must be strictly increasing");
  }
  if (static_cast<long long>(points.size()) - 1 > spec.max_intervals)
    throw DomainError("integrate_interval: more initial pieces than max_intervals");

  constexpr long long points_per_segment = 15;
  std::vector<Segment> segs;
  segs.reserve(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    segs.push_back(evaluate_segment(f, points[i], points[i + 1]));
  long long evaluations = points_per_segment * static_cast<long long>(segs.size());

  std::vector<std::size_t> order;
  for (;;) {
    CompensatedSum total_sum;
    double error = 0.0;
    for (const Segment &s : segs) {
      total_sum.add(s.value);
      error += s.error;
    }
    const Complex total = total_sum.value();
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (error <= tol)
      return {total, error, evaluations};
    if (static_cast<long long>(segs.size()) >= spec.max_intervals)
      throw ConvergenceError("integrate_interval: interval budget exhausted", total, error,
                             evaluations);

    // Bisect the worst segments until the untouched remainder would meet
    // half the tolerance.
    order.resize(segs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return segs[x].error != segs[y].error ? segs[x].error > segs[y].error : x < y;
    });
    double remaining = error;
    for (std::size_t idx : order) {
      if (remaining <= 0.5 * tol || static_cast<long long>(segs.size()) >= spec.max_intervals)
        break;
      const Segment s = segs[idx];
      const double mid = 0.5 * (s.a + s.b);
      if (!(mid > s.a && mid < s.b))
        throw ConvergenceError("integrate_interval: interval collapsed below resolution", total,
                               error, evaluations);
      remaining -= s.error;
      segs[idx] = evaluate_segment(f, s.a, mid);
      segs.push_back(evaluate_segment(f, mid, s.b));
      evaluations += 2 * points_per_segment;
    }
  }
}

} // namespace bornrate
