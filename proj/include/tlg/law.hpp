#pragma once

#include <optional>
#include <string>

namespace tlg::gauss {

enum class LawKind { wiener, two_sided };

// Brownian motion with optional constant drift. The Wiener law starts at
// `origin` (by default the initial vertex time) with value 0; the two-sided
// law is pinned to 0 at time 0 and runs independently on both sides.
struct Law {
  LawKind kind = LawKind::wiener;
  std::optional<double> origin;
  double drift = 0.0;

  static Law wiener(std::optional<double> origin = std::nullopt, double drift = 0.0) {
    return {LawKind::wiener, origin, drift};
  }
  static Law two_sided(double drift = 0.0) { return {LawKind::two_sided, std::nullopt, drift}; }

  std::string tag() const;
};

struct Weights {
  double left = 0.0, right = 0.0, variance = 0.0;
};

// A law with its start time fixed; all quantities refer to the centred process.
class ResolvedLaw {
 public:
  ResolvedLaw(const Law& law, double initial_time);

  const Law& law() const { return law_; }
  double origin() const { return origin_; }

  double mean(double t) const;
  double kernel(double s, double t) const;
  double variance(double t) const { return kernel(t, t); }

  // X(t) given X(s), s < t: weight on X(s) in `left`
  Weights transition(double s, double t) const;
  // X(r) given X(s) and X(t), s < r < t
  Weights bridge(double s, double r, double t) const;

 private:
  Law law_;
  double origin_ = 0.0;
};

}  // namespace tlg::gauss
