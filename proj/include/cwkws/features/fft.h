// include/cwkws/features/fft.h

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

#ifndef CWKWS_FEATURES_FFT_H_
#define CWKWS_FEATURES_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cwkws {

// In-place iterative radix-2 FFT with precomputed twiddles.
class Fft {
 public:
  explicit Fft(std::size_t size);  // size must be a power of two

  std::size_t size() const { return size_; }

  void Forward(std::span<std::complex<double>> data) const;

  // |X[k]|^2 for k in [0, size/2] of a real input of length <= size
  // (zero padded). `power` must hold size/2 + 1 values.
  void PowerSpectrum(std::span<const double> input, std::span<double> power) const;

 private:
  std::size_t size_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<std::complex<double>> twiddles_;
};

bool IsPowerOfTwo(std::size_t n);

}  // namespace cwkws

#endif  // CWKWS_FEATURES_FFT_H_
