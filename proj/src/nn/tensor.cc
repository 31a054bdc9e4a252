// src/nn/tensor.cc

// Copyright 2026  The cwkws Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "cwkws/nn/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "cwkws/common/error.h"

namespace cwkws::nn {

std::string ShapeString(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::size_t ShapeSize(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<std::size_t>());
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(ShapeSize(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(data.begin(), data.end()) {
  if (data_.size() != ShapeSize(shape_))
    Fail(ErrorCode::kShapeMismatch, "tensor data length " + std::to_string(data_.size()) +
                                        " does not match shape " + ShapeString(shape_));
}

void Tensor::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor::Reshape(Shape shape) {
  if (ShapeSize(shape) != data_.size())
    Fail(ErrorCode::kShapeMismatch,
         "cannot reshape " + ShapeString(shape_) + " to " + ShapeString(shape));
  shape_ = std::move(shape);
}

Tensor Tensor::Reshaped(Shape shape) const {
  Tensor t = *this;
  t.Reshape(std::move(shape));
  return t;
}

void Tensor::Add(const Tensor& other) {
  if (other.data_.size() != data_.size())
    Fail(ErrorCode::kShapeMismatch, "Add: " + ShapeString(shape_) + " vs " +
                                        ShapeString(other.shape_));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
}

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void ExpectShape(const Tensor& t, const Shape& expected, const char* what) {
  if (t.shape() != expected)
    Fail(ErrorCode::kShapeMismatch, std::string(what) + ": expected " +
                                        ShapeString(expected) + ", got " +
                                        ShapeString(t.shape()));
}

}  // namespace cwkws::nn
