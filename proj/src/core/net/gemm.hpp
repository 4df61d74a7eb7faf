// Copyright 2026 The kbio Authors
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

#ifndef KBIO_CORE_NET_GEMM_HPP_
#define KBIO_CORE_NET_GEMM_HPP_

// Small dense kernels for the batched LSTM. Every output element is written
// by exactly one thread and every inner sum runs in a fixed order, so results
// are bit-identical for any thread count.

namespace kbio::detail {

int resolve_threads();

// Z[b][j] += sum_k X[b][k] * A[j][k]   (A row-major rows x cols)
void add_x_at(const double* x, int batch, int cols, const double* a, int rows, double* z);

// Z[b][k] = sum_j D[b][j] * A[j][k]
void mul_d_a(const double* d, int batch, int rows, const double* a, int cols, double* z);

// dA[j][k] += sum_b D[b][j] * X[b][k]
void acc_outer(const double* d, const double* x, int batch, int rows, int cols, double* da);

}  // namespace kbio::detail

#endif  // KBIO_CORE_NET_GEMM_HPP_
