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

#include "shapaudit/explainer/shapley_kernels.h"

#include <omp.h>

#include <bit>
#include <cmath>
#include <cstddef>
#include <string>

#include "shapaudit/errors.h"

namespace shapaudit::kernels {

namespace {

void CheckTable(std::span<const double> values, int n) {
  if (n < 1 || n > kMaxExactPlayers) {
    throw ContractViolation("exact kernel: player count " + std::to_string(n) +
                            " outside [1, " +
                            std::to_string(kMaxExactPlayers) + "]");
  }
  if (values.size() != (std::size_t{1} << n)) {
    throw ContractViolation("exact kernel: value table must have 2^n entries");
  }
}

std::size_t CheckPermutationLayout(std::span<const std::uint16_t> orderings,
                                   std::span<const double> prefix_values,
                                   int n) {
  if (n < 1) throw ContractViolation("permutation kernel: no players");
  const std::size_t rows = orderings.size() / static_cast<std::size_t>(n);
  if (rows == 0 || rows % 2 != 0 ||
      orderings.size() != rows * static_cast<std::size_t>(n)) {
    throw ContractViolation(
        "permutation kernel: orderings must hold antithetic pairs of length n");
  }
  if (prefix_values.size() != rows * static_cast<std::size_t>(n + 1)) {
    throw ContractViolation(
        "permutation kernel: prefix_values must be n_orderings x (n + 1)");
  }
  return rows;
}

// Marginal of every player along one ordering, written at its player index.
void OrderingMarginals(const std::uint16_t* order, const double* prefix, int n,
                       double* out) {
  for (int t = 0; t < n; ++t) out[order[t]] = prefix[t + 1] - prefix[t];
}

// Pair-averaged marginals for pair k, one row of n entries.
void PairRow(std::span<const std::uint16_t> orderings,
             std::span<const double> prefix_values, int n, std::size_t k,
             double* row, double* scratch) {
  const std::size_t un = static_cast<std::size_t>(n);
  const std::size_t fwd = 2 * k;
  const std::size_t rev = 2 * k + 1;
  OrderingMarginals(orderings.data() + fwd * un,
                    prefix_values.data() + fwd * (un + 1), n, row);
  OrderingMarginals(orderings.data() + rev * un,
                    prefix_values.data() + rev * (un + 1), n, scratch);
  for (std::size_t i = 0; i < un; ++i) row[i] = 0.5 * (row[i] + scratch[i]);
}

// Mean and standard error of column i of the pairs x n matrix.
void ColumnMoments(const std::vector<double>& pairs, std::size_t n_pairs,
                   std::size_t n, std::size_t i, double& mean, double& se) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n_pairs; ++k) sum += pairs[k * n + i];
  mean = sum / static_cast<double>(n_pairs);
  if (n_pairs < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (std::size_t k = 0; k < n_pairs; ++k) {
    const double d = pairs[k * n + i] - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(n_pairs - 1);
  se = std::sqrt(var / static_cast<double>(n_pairs));
}

double ExactForPlayer(std::span<const double> values, int n, int i,
                      const std::vector<double>& weights) {
  const std::uint32_t bit = 1U << i;
  const std::uint32_t end = 1U << n;
  double acc = 0.0;
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    if ((mask & bit) != 0) continue;
    acc += weights[std::popcount(mask)] * (values[mask | bit] - values[mask]);
  }
  return acc;
}

}  // namespace

std::vector<double> ShapleyWeights(int n) {
  std::vector<double> weights(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    // 1 / (n * C(n-1, s)); the binomial is exact in double for n <= 64.
    double binom = 1.0;
    for (int k = 1; k <= s; ++k) {
      binom = binom * static_cast<double>(n - k) / static_cast<double>(k);
    }
    weights[static_cast<std::size_t>(s)] =
        1.0 / (static_cast<double>(n) * std::round(binom));
  }
  return weights;
}

namespace serial {

std::vector<double> ExactFromTable(std::span<const double> values, int n) {
  CheckTable(values, n);
  const std::vector<double> weights = ShapleyWeights(n);
  std::vector<double> phi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) phi[i] = ExactForPlayer(values, n, i, weights);
  return phi;
}

PermutationEstimate PermutationMeans(std::span<const std::uint16_t> orderings,
                                     std::span<const double> prefix_values,
                                     int n) {
  const std::size_t rows = CheckPermutationLayout(orderings, prefix_values, n);
  const std::size_t n_pairs = rows / 2;
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<double> pairs(n_pairs * un);
  std::vector<double> scratch(un);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    PairRow(orderings, prefix_values, n, k, pairs.data() + k * un,
            scratch.data());
  }
  PermutationEstimate est;
  est.mean.resize(un);
  est.std_error.resize(un);
  for (std::size_t i = 0; i < un; ++i) {
    ColumnMoments(pairs, n_pairs, un, i, est.mean[i], est.std_error[i]);
  }
  return est;
}

}  // namespace serial

namespace omp {

std::vector<double> ExactFromTable(std::span<const double> values, int n) {
  CheckTable(values, n);
  const std::vector<double> weights = ShapleyWeights(n);
  std::vector<double> phi(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (n >= 8)
  for (int i = 0; i < n; ++i) phi[i] = ExactForPlayer(values, n, i, weights);
  return phi;
}

PermutationEstimate PermutationMeans(std::span<const std::uint16_t> orderings,
                                     std::span<const double> prefix_values,
                                     int n) {
  const std::size_t rows = CheckPermutationLayout(orderings, prefix_values, n);
  const std::size_t n_pairs = rows / 2;
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<double> pairs(n_pairs * un);
  const long long signed_pairs = static_cast<long long>(n_pairs);
#pragma omp parallel if (n_pairs * un >= 4096)
  {
    std::vector<double> scratch(un);
#pragma omp for schedule(static)
    for (long long k = 0; k < signed_pairs; ++k) {
      PairRow(orderings, prefix_values, n, static_cast<std::size_t>(k),
              pairs.data() + static_cast<std::size_t>(k) * un, scratch.data());
    }
  }
  PermutationEstimate est;
  est.mean.resize(un);
  est.std_error.resize(un);
#pragma omp parallel for schedule(static) if (n_pairs * un >= 4096)
  for (long long i = 0; i < static_cast<long long>(un); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    ColumnMoments(pairs, n_pairs, un, ui, est.mean[ui], est.std_error[ui]);
  }
  return est;
}

}  // namespace omp

}  // namespace shapaudit::kernels
