#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace dgkit {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int order);

// Composite Gauss-Legendre quadrature over equal panels no wider than `width`.
double integrate_panels(const std::function<double(double)>& f, double lo, double hi, double width,
                        const GaussRule& rule);

// Same, but panels never straddle the given breakpoints.
double integrate_with_breaks(const std::function<double(double)>& f, double lo, double hi,
                             std::vector<double> breaks, double width, const GaussRule& rule);

// Calls visit(x, w) for every quadrature node of the panelled interval.
void for_each_node(double lo, double hi, std::vector<double> breaks, double width, const GaussRule& rule,
                   const std::function<void(double, double)>& visit);

// Quintic Hermite interpolation on one cell from value, first and second derivatives.
struct Jet {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

Jet quintic_hermite(double x0, double x1, const Jet& left, const Jet& right, double x);

// Natural cubic spline through (x, y).
class NaturalSpline {
 public:
  NaturalSpline() = default;
  NaturalSpline(std::vector<double> x, std::vector<double> y);
  Jet eval(double x) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }

 private:
  std::vector<double> x_, y_, m_;
};

// Linear weights of the natural cubic spline: value, first and second derivative at x
// are sums of w[j] * y[j]. Queries outside the knot hull are clamped.
class SplineWeights {
 public:
  SplineWeights() = default;
  explicit SplineWeights(std::vector<double> knots);
  std::size_t size() const { return x_.size(); }
  const std::vector<double>& knots() const { return x_; }
  // Returns the index of the knot equal to x, or -1.
  long exact_knot(double x) const;
  void weights(double x, std::vector<double>& w0, std::vector<double>& w1, std::vector<double>& w2) const;

 private:
  std::vector<double> x_;
  std::vector<std::vector<double>> k_;  // k_[i][j]: second derivative at knot i for unit data at j
};

// Quintic smoothstep 6x^5 - 15x^4 + 10x^3 clamped to [0, 1], with derivatives.
Jet smoothstep5(double x);

// Fit f(h) = A + C h^p through three samples; returns A. Falls back to the last sample.
struct Extrapolation {
  double limit = 0.0;
  double order = 0.0;
  bool fitted = false;
};

Extrapolation richardson(const std::vector<double>& h, const std::vector<double>& f);

// Least squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

double sphere_area(int n);  // surface measure of the unit sphere in R^n

// Stable 64-bit FNV-1a hash rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

// Splits a CSV row on commas and parses each field, subnormals included; false on a malformed field.
bool parse_csv_row(const std::string& line, std::vector<double>& out);

// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace dgkit
