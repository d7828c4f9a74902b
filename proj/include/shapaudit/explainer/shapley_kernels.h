/*
 * Copyright 2026 The shapaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SHAPAUDIT_EXPLAINER_SHAPLEY_KERNELS_H_
#define SHAPAUDIT_EXPLAINER_SHAPLEY_KERNELS_H_

#include <cstdint>
#include <span>
#include <vector>

// Numeric cores of the Shapley estimators, separated from text rendering
// and model calls. Each kernel exists twice: `serial` is the reference
// implementation, `omp` the OpenMP one. Both use the same per-output
// summation order, so their results are bitwise identical for any thread
// count.
namespace shapaudit::kernels {

// Largest player count accepted by the exact kernels (2^24 table entries).
inline constexpr int kMaxExactPlayers = 24;

// weights[s] = s! (n - s - 1)! / n! for coalition sizes s = 0 .. n-1.
std::vector<double> ShapleyWeights(int n);

struct PermutationEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;
};

// Layout shared by the permutation kernels:
//   orderings      n_orderings x n player indices, row-major;
//   prefix_values  n_orderings x (n + 1) values, where entry t of row o is the
//                  value of the coalition made of the first t players of
//                  ordering o.
// Rows 2k and 2k+1 form an antithetic pair; the pair average of marginal
// contributions is the sampling unit for the mean and its standard error.

namespace serial {

// phi_i = sum over coalitions S without i of weights[|S|] (v(S+i) - v(S)),
// where values[mask] = v(mask) and bit i of mask is player i.
std::vector<double> ExactFromTable(std::span<const double> values, int n);

PermutationEstimate PermutationMeans(std::span<const std::uint16_t> orderings,
                                     std::span<const double> prefix_values,
                                     int n);

}  // namespace serial

namespace omp {

std::vector<double> ExactFromTable(std::span<const double> values, int n);

PermutationEstimate PermutationMeans(std::span<const std::uint16_t> orderings,
                                     std::span<const double> prefix_values,
                                     int n);

}  // namespace omp

}  // namespace shapaudit::kernels

#endif  // SHAPAUDIT_EXPLAINER_SHAPLEY_KERNELS_H_
