#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "tlg/graph.hpp"

namespace tlg::dubins {

class InvalidMeasure : public Error {
 public:
  using Error::Error;
};

struct Point {
  double x = 0.0;
  double w = 0.0;
};

// uniform density mass / (b - a) on [a, b]
struct Piece {
  double a = 0.0, b = 0.0, mass = 0.0;
};

// Finite measure on [0, 1]: atoms plus uniform pieces. Public constructors
// demand a probability measure; restrict() may produce sub-probabilities.
class Measure {
 public:
  Measure() = default;
  explicit Measure(std::vector<Point> atoms, std::vector<Piece> pieces = {});

  static Measure dirac(double a);
  static Measure uniform(double a = 0.0, double b = 1.0);

  const std::vector<Point>& atoms() const { return atoms_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool discrete() const { return pieces_.empty(); }
  bool point_mass() const { return pieces_.empty() && atoms_.size() == 1; }

  double total() const;
  double mean() const;  // of the normalized measure
  double cdf(double x) const;  // mass of [0, x]
  double quantile(double p) const;  // inf{x : cdf(x) >= p * total}

  // mass on [lo, hi) or [lo, hi]
  Measure restrict(double lo, double hi, bool closed) const;
  Measure normalized() const;

  // integral of s over [0, u] and mass of (u, 1]
  double first_moment_to(double u) const;
  double mass_above(double u) const;

  // breakpoints of the distribution function: 0, 1, atoms, piece ends
  std::vector<double> breakpoints() const;
  // total density of the pieces covering the open interval around x
  double density_at(double x) const;

 private:
  struct Raw {};
  Measure(Raw, std::vector<Point> atoms, std::vector<Piece> pieces);
  std::vector<Point> atoms_;
  std::vector<Piece> pieces_;
};

// K atoms of mass 1/K at the quantile-cell medians; W1 error at most 1/(2K).
Measure discretize(const Measure& mu, std::size_t k = 2048);

// Exact integral of |F - G|.
double w1_distance(const Measure& mu, const Measure& nu);

nlohmann::json measure_to_json(const Measure& mu);
// {"atoms": [[x, w], ...], "uniform": [[a, b, mass], ...], "discretize": K}
// or {"kind": "uniform"}
Measure measure_from_json(const nlohmann::json& j);

}  // namespace tlg::dubins
