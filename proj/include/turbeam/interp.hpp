#pragma once

#include <vector>

namespace turbeam {

// Monotone piecewise-cubic interpolation (Fritsch-Carlson limiter).
// Evaluation clamps to the end values outside [x.front(), x.back()].
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double xq) const;
  bool empty() const { return x_.empty(); }
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // m_: node derivatives
};

}  // namespace turbeam
