#include "dgkit/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "dgkit/error.hpp"

namespace dgkit {

GaussRule gauss_legendre(int order) {
  require(order >= 1 && order <= 256, ErrorCode::invalid_argument, "gauss_legendre: order out of range");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

std::vector<double> merged_breaks(double lo, double hi, std::vector<double> breaks) {
  std::vector<double> pts{lo};
  std::sort(breaks.begin(), breaks.end());
  for (double b : breaks)
    if (b > lo && b < hi && b > pts.back()) pts.push_back(b);
  pts.push_back(hi);
  return pts;
}

}  // namespace

void for_each_node(double lo, double hi, std::vector<double> breaks, double width, const GaussRule& rule,
                   const std::function<void(double, double)>& visit) {
  if (!(hi > lo)) return;
  require(width > 0.0, ErrorCode::invalid_argument, "quadrature: panel width must be positive");
  const auto pts = merged_breaks(lo, hi, std::move(breaks));
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k], b = pts[k + 1];
    const auto panels = static_cast<long>(std::ceil((b - a) / width - 1e-12));
    const long np = std::max(1L, panels);
    const double h = (b - a) / static_cast<double>(np);
    for (long p = 0; p < np; ++p) {
      const double pa = a + h * static_cast<double>(p);
      const double mid = pa + 0.5 * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) visit(mid + 0.5 * h * rule.nodes[i], 0.5 * h * rule.weights[i]);
    }
  }
}

double integrate_with_breaks(const std::function<double(double)>& f, double lo, double hi,
                             std::vector<double> breaks, double width, const GaussRule& rule) {
  double sum = 0.0;
  for_each_node(lo, hi, std::move(breaks), width, rule, [&](double x, double w) { sum += w * f(x); });
  return sum;
}

double integrate_panels(const std::function<double(double)>& f, double lo, double hi, double width,
                        const GaussRule& rule) {
  return integrate_with_breaks(f, lo, hi, {}, width, rule);
}

Jet quintic_hermite(double x0, double x1, const Jet& l, const Jet& r, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double h3 = 0.5 * (t3 - 2 * t4 + t5);
  const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
  const double d0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double d1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double d2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  const double d3 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  const double d4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double e0 = -60 * t + 180 * t2 - 120 * t3;
  const double e1 = -36 * t + 96 * t2 - 60 * t3;
  const double e2 = 0.5 * (2 - 18 * t + 36 * t2 - 20 * t3);
  const double e3 = 0.5 * (6 * t - 24 * t2 + 20 * t3);
  const double e4 = -24 * t + 84 * t2 - 60 * t3;
  Jet out;
  out.f = l.f * h0 + h * l.d1 * h1 + h * h * l.d2 * h2 + h * h * r.d2 * h3 + h * r.d1 * h4 + r.f * h5;
  out.d1 = (l.f * d0 + h * l.d1 * d1 + h * h * l.d2 * d2 + h * h * r.d2 * d3 + h * r.d1 * d4 - r.f * d0) / h;
  out.d2 = (l.f * e0 + h * l.d1 * e1 + h * h * l.d2 * e2 + h * h * r.d2 * e3 + h * r.d1 * e4 - r.f * e0) / (h * h);
  return out;
}

namespace {

// Second derivatives of the natural cubic spline for data y on knots x.
std::vector<double> natural_moments(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  std::vector<double> M(m, 0.0);
  if (m < 3) return M;
  const std::size_t k = m - 2;
  std::vector<double> diag(k), upper(k), rhs(k);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
    diag[i - 1] = 2.0 * (hl + hr);
    upper[i - 1] = hr;
    rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl);
  }
  for (std::size_t i = 1; i < k; ++i) {
    const double lower = x[i + 1] - x[i];
    const double f = lower / diag[i - 1];
    diag[i] -= f * upper[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  M[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i >= 1; --i) M[i] = (rhs[i - 1] - upper[i - 1] * M[i + 1]) / diag[i - 1];
  return M;
}

std::size_t locate(const std::vector<double>& x, double v) {
  if (v <= x.front()) return 0;
  if (v >= x.back()) return x.size() - 2;
  auto it = std::upper_bound(x.begin(), x.end(), v);
  return static_cast<std::size_t>(it - x.begin()) - 1;
}

}  // namespace

NaturalSpline::NaturalSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  require(x_.size() == y_.size() && x_.size() >= 2, ErrorCode::invalid_argument, "spline: need at least two knots");
  for (std::size_t i = 1; i < x_.size(); ++i)
    require(x_[i] > x_[i - 1], ErrorCode::invalid_argument, "spline: knots must be strictly increasing");
  m_ = natural_moments(x_, y_);
}

Jet NaturalSpline::eval(double v) const {
  const std::size_t i = locate(x_, v);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - v) / h, b = 1.0 - a;
  Jet out;
  out.f = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
  out.d1 = (y_[i + 1] - y_[i]) / h - (3 * a * a - 1) / 6.0 * h * m_[i] + (3 * b * b - 1) / 6.0 * h * m_[i + 1];
  out.d2 = a * m_[i] + b * m_[i + 1];
  return out;
}

SplineWeights::SplineWeights(std::vector<double> knots) : x_(std::move(knots)) {
  require(!x_.empty(), ErrorCode::invalid_argument, "spline weights: empty knot set");
  for (std::size_t i = 1; i < x_.size(); ++i)
    require(x_[i] > x_[i - 1], ErrorCode::invalid_argument, "spline weights: knots must be strictly increasing");
  const std::size_t m = x_.size();
  k_.assign(m, std::vector<double>(m, 0.0));
  if (m < 3) return;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> e(m, 0.0);
    e[j] = 1.0;
    const auto M = natural_moments(x_, e);
    for (std::size_t i = 0; i < m; ++i) k_[i][j] = M[i];
  }
}

long SplineWeights::exact_knot(double v) const {
  auto it = std::lower_bound(x_.begin(), x_.end(), v);
  if (it != x_.end() && *it == v) return static_cast<long>(it - x_.begin());
  return -1;
}

void SplineWeights::weights(double v, std::vector<double>& w0, std::vector<double>& w1, std::vector<double>& w2) const {
  const std::size_t m = x_.size();
  w0.assign(m, 0.0);
  w1.assign(m, 0.0);
  w2.assign(m, 0.0);
  if (m == 1) {
    w0[0] = 1.0;
    return;
  }
  v = std::clamp(v, x_.front(), x_.back());
  const std::size_t i = locate(x_, v);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - v) / h, b = 1.0 - a;
  w0[i] += a;
  w0[i + 1] += b;
  w1[i] -= 1.0 / h;
  w1[i + 1] += 1.0 / h;
  const double ca = (a * a * a - a) * h * h / 6.0, cb = (b * b * b - b) * h * h / 6.0;
  const double da = -(3 * a * a - 1) / 6.0 * h, db = (3 * b * b - 1) / 6.0 * h;
  for (std::size_t j = 0; j < m; ++j) {
    w0[j] += ca * k_[i][j] + cb * k_[i + 1][j];
    w1[j] += da * k_[i][j] + db * k_[i + 1][j];
    w2[j] += a * k_[i][j] + b * k_[i + 1][j];
  }
}

Jet smoothstep5(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  const double x2 = x * x, x3 = x2 * x;
  const double y = 1.0 - x, y3 = y * y * y;
  const double f = x <= 0.5 ? x3 * (10.0 - 15.0 * x + 6.0 * x2) : 1.0 - y3 * (10.0 - 15.0 * y + 6.0 * y * y);
  return {f, 30.0 * x2 * (1.0 - x) * (1.0 - x), 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x)};
}

Extrapolation richardson(const std::vector<double>& h, const std::vector<double>& f) {
  require(h.size() == f.size() && !f.empty(), ErrorCode::invalid_argument, "richardson: size mismatch");
  Extrapolation out;
  out.limit = f.back();
  if (f.size() < 3) return out;
  const std::size_t n = f.size();
  const double h1 = h[n - 3], h2 = h[n - 2], h3 = h[n - 1];
  const double f1 = f[n - 3], f2 = f[n - 2], f3 = f[n - 1];
  const double d12 = f1 - f2, d23 = f2 - f3;
  if (d23 == 0.0 || d12 == 0.0 || (d12 > 0) != (d23 > 0)) return out;
  const double target = d12 / d23;
  auto ratio = [&](double p) { return (std::pow(h1, p) - std::pow(h2, p)) / (std::pow(h2, p) - std::pow(h3, p)); };
  double lo = 0.5, hi = 6.0;
  double p;
  if (target <= ratio(lo)) {
    p = lo;
  } else if (target >= ratio(hi)) {
    p = hi;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (ratio(mid) < target) lo = mid; else hi = mid;
    }
    p = 0.5 * (lo + hi);
  }
  const double c = d23 / (std::pow(h2, p) - std::pow(h3, p));
  out.limit = f3 - c * std::pow(h3, p);
  out.order = p;
  out.fitted = true;
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::invalid_argument, "loglog_slope: need two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double sphere_area(int n) {
  require(n >= 1, ErrorCode::invalid_argument, "sphere_area: dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool parse_csv_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    const std::string field = line.substr(pos, end - pos);
    const char* begin = field.c_str();
    char* stop = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &stop);
    if (stop == begin) return false;
    if (errno == ERANGE && std::abs(v) > 1.0) return false;
    for (const char* c = stop; *c != '\0'; ++c)
      if (!std::isspace(static_cast<unsigned char>(*c))) return false;
    out.push_back(v);
    pos = end + 1;
  }
  return true;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dgkit
