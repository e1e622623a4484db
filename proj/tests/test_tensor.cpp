#include <doctest.h>

#include "unshade/tensor.hpp"

using unshade::Tensor;

TEST_CASE("tensor: construction zero-fills and tracks shape") {
  Tensor<float> t({2, 3, 4});
  CHECK(t.ndim() == 3);
  CHECK(t.dim(0) == 2);
  CHECK(t.dim(1) == 3);
  CHECK(t.dim(2) == 4);
  CHECK(t.size() == 24);
  for (std::int64_t i = 0; i < t.size(); ++i) CHECK(t[i] == 0.0f);
  CHECK(t.shape_string() == "[2x3x4]");
}

TEST_CASE("tensor: chw accessor addresses row-major storage") {
  Tensor<double> t({2, 2, 3});
  t.at(1, 0, 2) = 7.0;
  CHECK(t[1 * 6 + 0 * 3 + 2] == 7.0);
  t.at(0, 1, 0) = -1.0;
  CHECK(t[3] == -1.0);
}

TEST_CASE("tensor: fill and full") {
  auto t = Tensor<float>::full({3, 3}, 2.5f);
  for (std::int64_t i = 0; i < t.size(); ++i) CHECK(t[i] == 2.5f);
  t.zero();
  CHECK(t[4] == 0.0f);
}

TEST_CASE("tensor: cast converts element type") {
  Tensor<double> t({4});
  for (std::int64_t i = 0; i < 4; ++i) t[i] = 0.5 * static_cast<double>(i);
  auto f = t.cast<float>();
  CHECK(f.same_shape(Tensor<float>({4})));
  CHECK(f[3] == 1.5f);
}

TEST_CASE("tensor: default tensor is empty") {
  Tensor<float> t;
  CHECK(t.size() == 0);
  CHECK(t.empty());
  CHECK(t.ndim() == 0);
}
