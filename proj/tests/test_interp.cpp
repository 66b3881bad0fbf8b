#include <cmath>
#include <vector>

#include "doctest.h"
#include "turbeam/interp.hpp"

using namespace turbeam;

TEST_CASE("MonotoneCubic interpolates the nodes exactly") {
  std::vector<double> x = {0.0, 0.5, 1.2, 2.0, 3.0};
  std::vector<double> y = {1.0, 0.8, 0.3, 0.1, 0.05};
  MonotoneCubic f(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(f(x[i]) == doctest::Approx(y[i]).epsilon(1e-15));
}

TEST_CASE("MonotoneCubic preserves monotonicity between nodes") {
  std::vector<double> x = {0.0, 0.1, 0.2, 1.0, 1.1, 4.0};
  std::vector<double> y = {0.0, 0.05, 0.5, 0.6, 0.99, 1.0};  // increasing
  MonotoneCubic f(x, y);
  double prev = f(0.0);
  for (int i = 1; i <= 400; ++i) {
    double v = f(4.0 * i / 400.0);
    CHECK(v >= prev - 1e-14);
    prev = v;
  }
}

TEST_CASE("MonotoneCubic clamps outside the sample range") {
  MonotoneCubic f({0.0, 1.0, 2.0, 3.0}, {2.0, 1.0, 0.5, 0.25});
  CHECK(f(-5.0) == doctest::Approx(2.0));
  CHECK(f(10.0) == doctest::Approx(0.25));
}

TEST_CASE("MonotoneCubic reproduces linear data exactly") {
  MonotoneCubic f({0.0, 1.0, 2.5, 4.0}, {1.0, 3.0, 6.0, 9.0});
  for (double xq : {0.25, 0.9, 1.7, 3.3})
    CHECK(f(xq) == doctest::Approx(1.0 + 2.0 * xq).epsilon(1e-13));
}

TEST_CASE("MonotoneCubic tracks a smooth function to high order") {
  std::vector<double> x, y;
  for (int i = 0; i <= 200; ++i) {
    double xi = i / 200.0 * 3.0;
    x.push_back(xi);
    y.push_back(std::exp(-xi * xi));
  }
  MonotoneCubic f(x, y);
  for (double xq : {0.123, 0.777, 1.456, 2.9})
    CHECK(f(xq) == doctest::Approx(std::exp(-xq * xq)).epsilon(1e-6));
}
