#pragma once

#include <functional>
#include <vector>

namespace nsblow {

/// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    static const GaussLegendre& get(int order);
};

/// Integrates f over [a, b] with a single Gauss-Legendre panel.
double gl_panel(const std::function<double(double)>& f, double a, double b,
                int order);

/// Integrates f over the panels defined by consecutive breakpoints.
double gl_panels(const std::function<double(double)>& f,
                 const std::vector<double>& breaks, int order);

/// Sorted, deduplicated breakpoints clipped to [lo, hi]; lo/hi included.
std::vector<double> make_breaks(std::vector<double> pts, double lo, double hi);

/// Uniform-grid clamped cubic spline; endpoint slopes from one-sided
/// 4th-order differences of the node values.
class UniformSpline {
  public:
    UniformSpline() = default;
    UniformSpline(double x0, double dx, std::vector<double> values);

    double operator()(double x) const;
    double derivative(double x) const;
    double x_min() const { return x0_; }
    double x_max() const { return x0_ + dx_ * (static_cast<double>(n_) - 1); }
    bool empty() const { return n_ == 0; }

  private:
    double x0_ = 0.0, dx_ = 1.0;
    std::size_t n_ = 0;
    std::vector<double> y_;
    std::vector<double> d_;  // node derivatives (Hermite representation)
};

}  // namespace nsblow
