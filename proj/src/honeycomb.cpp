#include "tlg/honeycomb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace tlg::honeycomb {

namespace {

long mod6(long h) { return ((h % 6) + 6) % 6; }
bool even(long k) { return (k % 2) == 0; }

}  // namespace

double layer_height(double rho) { return rho * std::sqrt(3.0) / 4.0; }

double LatticePoint::height(double rho) const { return static_cast<double>(k) * layer_height(rho); }

bool is_vertex(LatticePoint p) {
  const long r = mod6(p.h);
  return even(p.k) ? (r == 0 || r == 4) : (r == 1 || r == 3);
}

bool left_type(LatticePoint p) {
  const long r = mod6(p.h);
  return even(p.k) ? r == 0 : r == 3;
}

std::vector<LatticePoint> neighbours(LatticePoint p) {
  if (!is_vertex(p)) throw Error("not a lattice vertex");
  if (left_type(p)) return {{p.h - 2, p.k}, {p.h + 1, p.k - 1}, {p.h + 1, p.k + 1}};
  return {{p.h + 2, p.k}, {p.h - 1, p.k - 1}, {p.h - 1, p.k + 1}};
}

std::pair<LatticePoint, LatticePoint> lower_neighbours(LatticePoint p) {
  if (!is_vertex(p)) throw Error("not a lattice vertex");
  if (left_type(p)) return {{p.h - 3, p.k - 1}, {p.h + 1, p.k - 1}};
  return {{p.h - 1, p.k - 1}, {p.h + 3, p.k - 1}};
}

LatticePoint nearest_vertex(double rho, double t, double y) {
  if (!(rho > 0.0) || !std::isfinite(t) || !std::isfinite(y)) throw Error("bad query point");
  const double T = t / (rho / 4.0), Y = y / layer_height(rho);
  const long h0 = static_cast<long>(std::floor(T)), k0 = static_cast<long>(std::floor(Y));
  LatticePoint best;
  double best_d = std::numeric_limits<double>::infinity();
  for (long k = k0 - 2; k <= k0 + 3; ++k)
    for (long h = h0 - 8; h <= h0 + 9; ++h) {
      LatticePoint p{h, k};
      if (!is_vertex(p)) continue;
      const double dh = T - static_cast<double>(h), dk = Y - static_cast<double>(k);
      const double d = dh * dh + 3.0 * dk * dk;
      if (d < best_d || (d == best_d && (h < best.h || (h == best.h && k < best.k)))) {
        best = p;
        best_d = d;
      }
    }
  return best;
}

double target_height(double rho, double x, HeightScaling scaling) {
  if (scaling == HeightScaling::statement) return 4.0 * x / (std::sqrt(3.0) * rho);
  return layer_height(rho) * x / (rho * rho);
}

Eigen::Matrix4d chain_matrix() {
  Eigen::Matrix4d p;
  p << 0.25, 0, 0.75, 0,  //
      0.25, 0, 0.75, 0,   //
      0, 0.75, 0, 0.25,   //
      0, 0.75, 0, 0.25;
  return p;
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

std::array<Rational, 4> solve_stationary() {
  const Rational q(1, 4), t(3, 4), z(0);
  const Rational p[4][4] = {{q, z, t, z}, {q, z, t, z}, {z, t, z, q}, {z, t, z, q}};
  // rows 0..2: (P^T - I) pi = 0; row 3: sum pi = 1
  Rational a[4][5];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = p[j][i] - (i == j ? 1 : 0);
    a[i][4] = 0;
  }
  for (int j = 0; j < 4; ++j) a[3][j] = 1;
  a[3][4] = 1;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    while (piv < 4 && a[piv][c] == 0) ++piv;
    if (piv == 4) throw Error("singular stationary system");
    for (int j = 0; j < 5; ++j) std::swap(a[c][j], a[piv][j]);
    for (int r = 0; r < 4; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (int j = 0; j < 5; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::array<Rational, 4> pi;
  for (int i = 0; i < 4; ++i) pi[static_cast<std::size_t>(i)] = a[i][4] / a[i][i];
  return pi;
}

}  // namespace

std::array<std::string, 4> chain_stationary_exact() {
  std::array<std::string, 4> out;
  const auto pi = solve_stationary();
  for (std::size_t i = 0; i < 4; ++i) out[i] = pi[i].str();
  return out;
}

Eigen::Vector4d chain_stationary() {
  const auto pi = solve_stationary();
  Eigen::Vector4d v;
  for (int i = 0; i < 4; ++i) v(i) = pi[static_cast<std::size_t>(i)].convert_to<double>();
  return v;
}

double step_variance(double rho) {
  if (!(rho > 0.0)) throw Error("rho must be positive");
  const Eigen::Vector4d pi = chain_stationary();
  const double s[4] = {-3, -1, 1, 3};
  double v = 0.0;
  for (int i = 0; i < 4; ++i) v += pi(i) * (s[i] * rho / 4.0) * (s[i] * rho / 4.0);
  return v;
}

double stationary_mean(double rho) {
  const Eigen::Vector4d pi = chain_stationary();
  const double s[4] = {-3, -1, 1, 3};
  double m = 0.0;
  for (int i = 0; i < 4; ++i) m += pi(i) * s[i] * rho / 4.0;
  return m;
}

Descent descend_dp(LatticePoint start) {
  if (!is_vertex(start)) throw Error("descent must start at a lattice vertex");
  if (start.k < 0) throw Error("descent starts below line 0");
  Descent d;
  d.start_h = start.h;
  d.start_k = start.k;
  std::vector<double> cur{1.0};
  long off = start.h;
  double sink_moment = 0.0;
  const double h0 = static_cast<double>(start.h);

  auto absorb_nonpositive = [&]() {
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const long h = off + static_cast<long>(i);
      if (h > 0) break;
      d.sink += cur[i];
      sink_moment += cur[i] * static_cast<double>(h);
      cur[i] = 0.0;
    }
  };
  auto trim = [&]() {
    std::size_t lo = 0, hi = cur.size();
    while (lo < hi && cur[lo] == 0.0) ++lo;
    while (hi > lo && cur[hi - 1] == 0.0) --hi;
    std::vector<double> t(cur.begin() + static_cast<long>(lo), cur.begin() + static_cast<long>(hi));
    off += static_cast<long>(lo);
    cur = std::move(t);
  };
  auto check = [&]() {
    double mass = d.sink, moment = sink_moment;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      mass += cur[i];
      moment += cur[i] * static_cast<double>(off + static_cast<long>(i));
    }
    d.max_mass_error = std::max(d.max_mass_error, std::abs(mass - 1.0));
    d.max_mean_drift = std::max(d.max_mean_drift, std::abs(moment - h0));
  };

  for (long k = start.k; k >= 1; --k) {
    absorb_nonpositive();
    trim();
    std::vector<double> next(cur.size() + 6, 0.0);
    const long noff = off - 3;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const double p = cur[i];
      if (p == 0.0) continue;
      const LatticePoint pt{off + static_cast<long>(i), k};
      const auto [lo, hi] = lower_neighbours(pt);
      const double up = static_cast<double>(pt.h - lo.h) / static_cast<double>(hi.h - lo.h);
      next[static_cast<std::size_t>(hi.h - noff)] += p * up;
      next[static_cast<std::size_t>(lo.h - noff)] += p * (1.0 - up);
    }
    cur = std::move(next);
    off = noff;
    check();
  }
  absorb_nonpositive();
  trim();
  check();
  d.offset = off;
  d.layer0 = std::move(cur);
  return d;
}

double descent_covariance(double rho, LatticePoint u_point, LatticePoint v_point) {
  if (u_point.k != 0 || !is_vertex(u_point)) throw Error("u must be a vertex on line 0");
  const double ut = u_point.time(rho);
  if (ut <= 0.0) return 0.0;
  const Descent d = descend_dp(v_point);
  double s = 0.0;
  for (std::size_t i = 0; i < d.layer0.size(); ++i) {
    const LatticePoint w{d.offset + static_cast<long>(i), 0};
    s += d.layer0[i] * std::min(w.time(rho), ut);
  }
  return s;
}

FiniteCovariance finite_covariance(double rho, double u, double v, double x, HeightScaling scaling) {
  if (!(rho > 0.0)) throw Error("rho must be positive");
  if (u < 0.0 || v < 0.0 || x < 0.0) throw Error("u, v, x must be nonnegative");
  FiniteCovariance f;
  f.u_point = nearest_vertex(rho, u, 0.0);
  f.v_point = nearest_vertex(rho, v, target_height(rho, x, scaling));
  if (f.u_point.k != 0) throw Error("nearest vertex to (u, 0) is off line 0");
  const Descent d = descend_dp(f.v_point);
  f.sink = d.sink;
  const double ut = f.u_point.time(rho);
  if (ut > 0.0)
    for (std::size_t i = 0; i < d.layer0.size(); ++i) {
      const LatticePoint w{d.offset + static_cast<long>(i), 0};
      f.value += d.layer0[i] * std::min(w.time(rho), ut);
    }
  return f;
}

double limit_covariance(double u, double v, double x) {
  if (x < 0.0) throw Error("x must be nonnegative");
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (x == 0.0) return std::min(u, v);
  const double s = std::sqrt(5.0 * x);
  const double pi = boost::math::constants::pi<double>();
  const double a = u + v, b = u - v;
  return s / (8.0 * std::sqrt(pi)) * (std::exp(-16.0 * a * a / (5.0 * x)) - std::exp(-16.0 * b * b / (5.0 * x))) -
         0.5 * b * boost::math::erf(4.0 * b / s) + 0.5 * a * boost::math::erf(4.0 * a / s);
}

ConvergenceTable convergence_study(double u, double v, double x, const std::vector<double>& rhos,
                                   HeightScaling scaling) {
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] > 0.0)) throw Error("rhos must be positive");
    if (i > 0 && !(rhos[i] < rhos[i - 1])) throw Error("rhos must be decreasing");
  }
  ConvergenceTable t;
  t.scaling = scaling;
  const double lim = limit_covariance(u, v, x);
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    ConvergenceRow r;
    r.rho = rhos[i];
    r.finite = finite_covariance(rhos[i], u, v, x, scaling).value;
    r.limit = lim;
    r.abs_err = std::abs(r.finite - lim);
    r.rel_err = lim != 0.0 ? r.abs_err / std::abs(lim) : r.abs_err;
    if (i > 0) r.cauchy_diff = std::abs(r.finite - t.rows.back().finite);
    t.rows.push_back(r);
  }
  if (!t.rows.empty() && u > 0.0 && v > 0.0 && x > 0.0) {
    const double target = t.rows.back().finite;
    auto f = [&](double logc) { return limit_covariance(u, v, std::exp(logc) * x) - target; };
    const double lo = std::log(1e-3), hi = std::log(1e3);
    if (f(lo) * f(hi) < 0.0) {
      boost::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
      t.fitted_factor = std::exp(0.5 * (r.first + r.second));
    }
  }
  return t;
}

std::string convergence_csv(const ConvergenceTable& t) {
  std::ostringstream os;
  os.precision(12);
  os << "rho,finite,limit,abs_err,rel_err,cauchy_diff\n";
  for (const ConvergenceRow& r : t.rows) {
    os << r.rho << ',' << r.finite << ',' << r.limit << ',' << r.abs_err << ',' << r.rel_err << ',';
    if (r.cauchy_diff) os << *r.cauchy_diff;
    os << '\n';
  }
  return os.str();
}

}  // namespace tlg::honeycomb
