#include "tlg/measure.hpp"

#include <algorithm>
#include <cmath>

namespace tlg::dubins {

namespace {

void sort_merge(std::vector<Point>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Point& p, const Point& q) { return p.x < q.x; });
  std::vector<Point> out;
  for (const Point& p : atoms) {
    if (!out.empty() && out.back().x == p.x)
      out.back().w += p.w;
    else
      out.push_back(p);
  }
  atoms = std::move(out);
}

}  // namespace

Measure::Measure(Raw, std::vector<Point> atoms, std::vector<Piece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {}

Measure::Measure(std::vector<Point> atoms, std::vector<Piece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
  for (const Point& p : atoms_) {
    if (!std::isfinite(p.x) || p.x < 0.0 || p.x > 1.0) throw InvalidMeasure("atom outside [0, 1]");
    if (!(p.w > 0.0)) throw InvalidMeasure("atom weights must be positive");
  }
  for (const Piece& q : pieces_) {
    if (!(q.a >= 0.0 && q.b <= 1.0 && q.a < q.b)) throw InvalidMeasure("uniform piece must satisfy 0 <= a < b <= 1");
    if (!(q.mass > 0.0)) throw InvalidMeasure("piece mass must be positive");
  }
  sort_merge(atoms_);
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& p, const Piece& q) { return p.a < q.a; });
  if (atoms_.empty() && pieces_.empty()) throw InvalidMeasure("empty measure");
  if (std::abs(total() - 1.0) > 1e-12) throw InvalidMeasure("weights must sum to 1");
}

Measure Measure::dirac(double a) { return Measure({{a, 1.0}}); }
Measure Measure::uniform(double a, double b) { return Measure({}, {{a, b, 1.0}}); }

double Measure::total() const {
  double s = 0.0;
  for (const Point& p : atoms_) s += p.w;
  for (const Piece& q : pieces_) s += q.mass;
  return s;
}

double Measure::mean() const {
  double s = 0.0;
  for (const Point& p : atoms_) s += p.w * p.x;
  for (const Piece& q : pieces_) s += q.mass * 0.5 * (q.a + q.b);
  return s / total();
}

double Measure::cdf(double x) const {
  double s = 0.0;
  for (const Point& p : atoms_)
    if (p.x <= x) s += p.w;
  for (const Piece& q : pieces_) s += q.mass * std::clamp((x - q.a) / (q.b - q.a), 0.0, 1.0);
  return s;
}

double Measure::quantile(double p) const {
  const double target = p * total();
  // F is piecewise linear with jumps between breakpoints
  std::vector<double> bp = breakpoints();
  for (std::size_t i = 0; i < bp.size(); ++i) {
    double x = bp[i];
    if (cdf(x) >= target) {
      if (i == 0) return x;
      double x0 = bp[i - 1], f0 = cdf(x0), slope = density_at(0.5 * (x0 + x));
      double left_limit = f0 + slope * (x - x0);
      if (slope > 0.0 && target <= left_limit) return std::min(x, x0 + (target - f0) / slope);
      return x;
    }
  }
  return bp.back();
}

Measure Measure::restrict(double lo, double hi, bool closed) const {
  std::vector<Point> a;
  for (const Point& p : atoms_)
    if (p.x >= lo && (p.x < hi || (closed && p.x == hi))) a.push_back(p);
  std::vector<Piece> pc;
  for (const Piece& q : pieces_) {
    double l = std::max(lo, q.a), h = std::min(hi, q.b);
    if (h > l) pc.push_back({l, h, q.mass * (h - l) / (q.b - q.a)});
  }
  return Measure(Raw{}, std::move(a), std::move(pc));
}

Measure Measure::normalized() const {
  const double t = total();
  std::vector<Point> a = atoms_;
  std::vector<Piece> pc = pieces_;
  for (Point& p : a) p.w /= t;
  for (Piece& q : pc) q.mass /= t;
  return Measure(Raw{}, std::move(a), std::move(pc));
}

double Measure::first_moment_to(double u) const {
  double s = 0.0;
  for (const Point& p : atoms_)
    if (p.x <= u) s += p.w * p.x;
  for (const Piece& q : pieces_) {
    double h = std::min(u, q.b);
    if (h > q.a) s += q.mass / (q.b - q.a) * 0.5 * (h * h - q.a * q.a);
  }
  return s;
}

double Measure::mass_above(double u) const { return total() - cdf(u); }

std::vector<double> Measure::breakpoints() const {
  std::vector<double> bp{0.0, 1.0};
  for (const Point& p : atoms_) bp.push_back(p.x);
  for (const Piece& q : pieces_) {
    bp.push_back(q.a);
    bp.push_back(q.b);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

double Measure::density_at(double x) const {
  double d = 0.0;
  for (const Piece& q : pieces_)
    if (q.a < x && x < q.b) d += q.mass / (q.b - q.a);
  return d;
}

Measure discretize(const Measure& mu, std::size_t k) {
  if (k == 0) throw InvalidMeasure("discretization needs at least one atom");
  std::vector<Point> atoms;
  atoms.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    atoms.push_back({mu.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(k)), 1.0 / static_cast<double>(k)});
  return Measure(std::move(atoms));
}

double w1_distance(const Measure& mu, const Measure& nu) {
  std::vector<double> bp = mu.breakpoints(), other = nu.breakpoints();
  bp.insert(bp.end(), other.begin(), other.end());
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    double x0 = bp[i], x1 = bp[i + 1], dx = x1 - x0, mid = 0.5 * (x0 + x1);
    double d0 = mu.cdf(x0) - nu.cdf(x0);
    double d1 = d0 + (mu.density_at(mid) - nu.density_at(mid)) * dx;
    if (d0 * d1 >= 0.0)
      total += dx * 0.5 * (std::abs(d0) + std::abs(d1));
    else
      total += dx * 0.5 * (d0 * d0 + d1 * d1) / (std::abs(d0) + std::abs(d1));
  }
  return total;
}

nlohmann::json measure_to_json(const Measure& mu) {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const Point& p : mu.atoms()) j["atoms"].push_back({p.x, p.w});
  if (!mu.pieces().empty()) {
    j["uniform"] = nlohmann::json::array();
    for (const Piece& q : mu.pieces()) j["uniform"].push_back({q.a, q.b, q.mass});
  }
  return j;
}

Measure measure_from_json(const nlohmann::json& j) {
  try {
    Measure mu;
    if (j.contains("kind")) {
      if (j.at("kind").get<std::string>() != "uniform") throw InvalidMeasure("unknown measure kind");
      mu = Measure::uniform();
    } else {
      std::vector<Point> atoms;
      std::vector<Piece> pieces;
      if (j.contains("atoms"))
        for (const auto& a : j.at("atoms")) atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
      if (j.contains("uniform"))
        for (const auto& q : j.at("uniform"))
          pieces.push_back({q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>()});
      mu = Measure(std::move(atoms), std::move(pieces));
    }
    if (j.contains("discretize")) mu = discretize(mu, j.at("discretize").get<std::size_t>());
    return mu;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidMeasure(std::string("bad measure json: ") + e.what());
  }
}

}  // namespace tlg::dubins
