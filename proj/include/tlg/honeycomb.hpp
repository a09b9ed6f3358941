#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tlg/graph.hpp"

namespace tlg::honeycomb {

// Lattice coordinates: time h * rho / 4, height k * rho * sqrt(3) / 4.
// Even lines carry vertices at h = 0, 4 (mod 6), odd lines at h = 1, 3.
struct LatticePoint {
  long h = 0;
  long k = 0;
  bool operator==(const LatticePoint&) const = default;
  double time(double rho) const { return static_cast<double>(h) * rho / 4.0; }
  double height(double rho) const;
};

double layer_height(double rho);  // rho * sqrt(3) / 4

bool is_vertex(LatticePoint p);
// Left-type vertices have their diagonal edges to the right.
bool left_type(LatticePoint p);
std::vector<LatticePoint> neighbours(LatticePoint p);
// The two lower-line vertices joined to p once its own line is removed,
// earlier one first.
std::pair<LatticePoint, LatticePoint> lower_neighbours(LatticePoint p);

// Ties go to the smaller time, then the smaller height.
LatticePoint nearest_vertex(double rho, double t, double y);

enum class HeightScaling {
  statement,  // target height 4x / (sqrt(3) rho), i.e. layer 16x / (3 rho^2)
  proof       // layer x / rho^2
};
double target_height(double rho, double x, HeightScaling scaling);

struct HexWindowSpec {
  double rho = 0.25;
  double t_min = 0.0, t_max = 1.0;
  long layers = 2;
};

struct HexWindow {
  double rho = 0.0;
  Graph graph;  // relaxed
  std::vector<std::optional<LatticePoint>> coords;  // per vertex index; empty for leads
  std::size_t lattice_vertices = 0;
  std::optional<std::size_t> vertex_at(LatticePoint p) const;
};

class WindowError : public Error {
 public:
  using Error::Error;
};

// Union of hexagon boundaries, each cell named by its leftmost vertex.
// Several sources or sinks are fed by a small tree of leads.
HexWindow hex_cells(double rho, const std::vector<LatticePoint>& cells);
// Every hexagon lying in [t_min, t_max] x [0, layers].
HexWindow hex_window(const HexWindowSpec& spec);
LatticePoint nearest_vertex(const HexWindowSpec& spec, double t, double y);
// Region under the two monotone lattice paths from `top` down to line 0,
// above the zigzag path along lines -1 and 0 between horizontal positions
// h_min and h_max (widened to cover the region).
HexWindow descent_window(double rho, LatticePoint top, long h_min, long h_max);

// Four-state step chain, states -3, -1, 1, 3 in units of rho / 4.
Eigen::Matrix4d chain_matrix();
// Exact solution of pi P = pi, sum pi = 1, as "p/q" strings and doubles.
std::array<std::string, 4> chain_stationary_exact();
Eigen::Vector4d chain_stationary();
double step_variance(double rho);
double stationary_mean(double rho);

struct Descent {
  long start_h = 0, start_k = 0;
  long offset = 0;            // layer0[i] is the mass at h = offset + i
  std::vector<double> layer0;  // h > 0 only
  double sink = 0.0;           // mass stopped at times <= 0
  double max_mass_error = 0.0;
  double max_mean_drift = 0.0;  // in units of rho / 4
};

Descent descend_dp(LatticePoint start);

struct FiniteCovariance {
  double value = 0.0;
  LatticePoint u_point, v_point;
  double sink = 0.0;
};

FiniteCovariance finite_covariance(double rho, double u, double v, double x,
                                   HeightScaling scaling = HeightScaling::statement);
// Covariance of X at (u_h, 0) and at vertex v by the descent walk.
double descent_covariance(double rho, LatticePoint u_point, LatticePoint v_point);

double limit_covariance(double u, double v, double x);

struct ConvergenceRow {
  double rho = 0.0, finite = 0.0, limit = 0.0, abs_err = 0.0, rel_err = 0.0;
  std::optional<double> cauchy_diff;
};

struct ConvergenceTable {
  HeightScaling scaling = HeightScaling::statement;
  std::vector<ConvergenceRow> rows;
  // c with limit(u, v, c x) equal to the finite value at the smallest rho
  std::optional<double> fitted_factor;
};

ConvergenceTable convergence_study(double u, double v, double x, const std::vector<double>& rhos,
                                   HeightScaling scaling = HeightScaling::statement);
std::string convergence_csv(const ConvergenceTable& table);

struct HexMcCheck {
  double dp = 0.0;      // descent walk
  double engine = 0.0;  // exact natural field on the window
  double mc = 0.0, std_error = 0.0;
  std::size_t n = 0;
  std::size_t window_vertices = 0;
};

// Natural Brownian motion (two-sided law) on the descent window of v.
HexMcCheck hex_mc_check(double rho, LatticePoint u_point, LatticePoint v_point, std::size_t n, std::uint64_t seed);

}  // namespace tlg::honeycomb
