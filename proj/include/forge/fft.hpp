// Copyright 2026 The xeus-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGE_FFT_HPP_
#define FORGE_FFT_HPP_

#include <complex>
#include <span>

namespace forge {

// In-place iterative radix-2 FFT.  Size must be a power of two (throws
// std::invalid_argument otherwise); the inverse transform scales by 1/n.
void fft(std::span<std::complex<double>> a, bool inverse);

// Smallest power of two >= n (n >= 1).
size_t next_pow2(size_t n);

}  // namespace forge

#endif  // FORGE_FFT_HPP_
