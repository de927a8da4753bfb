// core/include/tsmaug/fft.h
//
// Copyright 2026  The tsmaug Authors
//
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

#ifndef TSMAUG_FFT_H_
#define TSMAUG_FFT_H_

#include <complex>
#include <memory>
#include <span>

namespace tsmaug {

/// Real-input DFT of a fixed size, backed by FFTW. Forward produces the
/// n/2 + 1 non-negative-frequency bins, unscaled. Inverse assumes Hermitian
/// symmetry and scales by 1/n, so inverse(forward(x)) == x.
///
/// An instance owns scratch buffers and is not safe for concurrent use;
/// create one per thread.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(RealFft &&) noexcept;
  RealFft &operator=(RealFft &&) noexcept;
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  int size() const { return size_; }
  int num_bins() const { return size_ / 2 + 1; }

  /// `in` may be shorter than size(); it is zero padded.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  int size_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tsmaug

#endif  // TSMAUG_FFT_H_
