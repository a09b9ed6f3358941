#include "tlg/law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tlg/graph.hpp"

namespace tlg::gauss {

std::string Law::tag() const {
  std::ostringstream os;
  os.precision(17);
  os << (kind == LawKind::wiener ? "wiener" : "two-sided");
  if (kind == LawKind::wiener && origin) os << "@" << *origin;
  if (drift != 0.0) os << "+drift" << drift;
  return os.str();
}

ResolvedLaw::ResolvedLaw(const Law& law, double initial_time) : law_(law) {
  if (law.kind == LawKind::wiener) {
    origin_ = law.origin.value_or(initial_time);
    if (initial_time < origin_) throw Error("graph starts before the Wiener origin");
  }
}

double ResolvedLaw::mean(double t) const {
  return law_.kind == LawKind::wiener ? law_.drift * (t - origin_) : law_.drift * t;
}

double ResolvedLaw::kernel(double s, double t) const {
  if (law_.kind == LawKind::wiener) return std::min(s, t) - origin_;
  if (s > 0 && t > 0) return std::min(s, t);
  if (s < 0 && t < 0) return std::min(-s, -t);
  return 0.0;
}

Weights ResolvedLaw::transition(double s, double t) const {
  if (!(s < t)) throw Error("transition needs s < t");
  if (law_.kind == LawKind::wiener || s >= 0) return {1.0, 0.0, t - s};
  if (t <= 0) return {t / s, 0.0, (-t) * (t - s) / (-s)};
  return {0.0, 0.0, t};
}

Weights ResolvedLaw::bridge(double s, double r, double t) const {
  if (!(s < r && r < t)) throw Error("bridge needs s < r < t");
  auto plain = [](double a, double x, double b) {
    return Weights{(b - x) / (b - a), (x - a) / (b - a), (x - a) * (b - x) / (b - a)};
  };
  if (law_.kind == LawKind::wiener || s >= 0 || t <= 0) return plain(s, r, t);
  // two-sided law across the pinned point 0
  if (r < 0) {
    Weights w = plain(s, r, 0.0);
    return {w.left, 0.0, w.variance};
  }
  if (r == 0) return {0.0, 0.0, 0.0};
  Weights w = plain(0.0, r, t);
  return {0.0, w.right, w.variance};
}

}  // namespace tlg::gauss
