//
// Copyright 2026 The REAP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Laplace-mechanism calibration and sampling, and the mapping from the
// per-user privacy levels to the accuracy of the averaged aggregate.

#ifndef REAP_PRIVACY_CORE_H_
#define REAP_PRIVACY_CORE_H_

#include <span>

#include "absl/status/statusor.h"
#include "reap/random_stream.h"

namespace reap {

// Data range, confidence level and population size of one sensing round.
class SensingContext {
 public:
  // Requires gamma > 0, 0 <= delta < 1, n >= 1. delta = 1 is rejected since
  // the accuracy formula divides by sqrt(1 - delta).
  static absl::StatusOr<SensingContext> Create(double gamma, double delta,
                                               int n);

  double gamma() const { return gamma_; }
  double delta() const { return delta_; }
  int n() const { return n_; }

  friend bool operator==(const SensingContext&,
                         const SensingContext&) = default;

 private:
  SensingContext(double gamma, double delta, int n)
      : gamma_(gamma), delta_(delta), n_(n) {}

  double gamma_;
  double delta_;
  int n_;
};

// Scale b of a zero-mean Laplace distribution.
class LaplaceScale {
 public:
  static absl::StatusOr<LaplaceScale> Create(double b);
  double b() const { return b_; }

 private:
  explicit LaplaceScale(double b) : b_(b) {}
  double b_;
};

// Differential-privacy parameter epsilon. Smaller is more private.
class PplLevel {
 public:
  static absl::StatusOr<PplLevel> Create(double epsilon);
  double epsilon() const { return epsilon_; }

 private:
  explicit PplLevel(double epsilon) : epsilon_(epsilon) {}
  double epsilon_;
};

struct PerturbedReading {
  double raw;
  double noisy;
  LaplaceScale scale;
};

// b = gamma / epsilon.
absl::StatusOr<LaplaceScale> CalibrateLaplace(double gamma, double epsilon);
absl::StatusOr<LaplaceScale> CalibrateLaplace(double gamma, PplLevel ppl);

// Inverse CDF of Laplace(0, b) at u in (0, 1).
double LaplaceFromUniform(const LaplaceScale& scale, double u);

// Consumes exactly one uniform draw from `rng`.
double SampleLaplace(const LaplaceScale& scale, RandomStream& rng);

PerturbedReading Perturb(double raw, const LaplaceScale& scale,
                         RandomStream& rng);
// Same as Perturb with the noise value supplied by the caller.
PerturbedReading PerturbWithNoise(double raw, const LaplaceScale& scale,
                                  double noise);

// alpha = sqrt(2) * gamma / (n * sqrt(1 - delta)) * sqrt(sum 1 / eps_i^2).
// `ppls` must hold exactly ctx.n() entries.
absl::StatusOr<double> PredictedAccuracy(const SensingContext& ctx,
                                         std::span<const PplLevel> ppls);

// Same formula with sum 1 / eps_i^2 already reduced. Used for type-weighted
// menus where each epsilon stands for lambda_i users.
double AccuracyFromInverseSquareSum(const SensingContext& ctx,
                                    double inverse_square_sum);

// Chebyshev bound 2 / (alpha^2 n^2) * sum b_i^2 on P[|s_hat - s| >= alpha],
// clamped to [0, 1].
absl::StatusOr<double> ChebyshevErrorBound(const SensingContext& ctx,
                                           std::span<const LaplaceScale> scales,
                                           double alpha);

}  // namespace reap

#endif  // REAP_PRIVACY_CORE_H_
