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

#include "reap/privacy_core.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace reap {

absl::StatusOr<SensingContext> SensingContext::Create(double gamma,
                                                      double delta, int n) {
  if (!(gamma > 0) || !std::isfinite(gamma)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gamma must be positive and finite, got %g", gamma));
  }
  if (!(delta >= 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in [0, 1), got %g", delta));
  }
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("n must be at least 1, got %d", n));
  }
  return SensingContext(gamma, delta, n);
}

absl::StatusOr<LaplaceScale> LaplaceScale::Create(double b) {
  if (!(b > 0) || !std::isfinite(b)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Laplace scale b must be positive and finite, got %g",
                        b));
  }
  return LaplaceScale(b);
}

absl::StatusOr<PplLevel> PplLevel::Create(double epsilon) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be positive and finite, got %g", epsilon));
  }
  return PplLevel(epsilon);
}

absl::StatusOr<LaplaceScale> CalibrateLaplace(double gamma, double epsilon) {
  if (!(gamma > 0) || !std::isfinite(gamma)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gamma must be positive and finite, got %g", gamma));
  }
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be positive and finite, got %g", epsilon));
  }
  return LaplaceScale::Create(gamma / epsilon);
}

absl::StatusOr<LaplaceScale> CalibrateLaplace(double gamma, PplLevel ppl) {
  return CalibrateLaplace(gamma, ppl.epsilon());
}

double LaplaceFromUniform(const LaplaceScale& scale, double u) {
  // Sign-split inverse CDF; u = 0.5 maps to the median 0.
  if (u < 0.5) return scale.b() * std::log(2.0 * u);
  return -scale.b() * std::log(2.0 * (1.0 - u));
}

double SampleLaplace(const LaplaceScale& scale, RandomStream& rng) {
  return LaplaceFromUniform(scale, rng.NextUniform());
}

PerturbedReading Perturb(double raw, const LaplaceScale& scale,
                         RandomStream& rng) {
  return PerturbWithNoise(raw, scale, SampleLaplace(scale, rng));
}

PerturbedReading PerturbWithNoise(double raw, const LaplaceScale& scale,
                                  double noise) {
  return PerturbedReading{.raw = raw, .noisy = raw + noise, .scale = scale};
}

double AccuracyFromInverseSquareSum(const SensingContext& ctx,
                                    double inverse_square_sum) {
  return std::sqrt(2.0) * ctx.gamma() /
         (ctx.n() * std::sqrt(1.0 - ctx.delta())) *
         std::sqrt(inverse_square_sum);
}

absl::StatusOr<double> PredictedAccuracy(const SensingContext& ctx,
                                         std::span<const PplLevel> ppls) {
  if (static_cast<int>(ppls.size()) != ctx.n()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("expected %d privacy levels (one per user), got %d",
                        ctx.n(), ppls.size()));
  }
  double sum = 0;
  for (const PplLevel& ppl : ppls) {
    sum += 1.0 / (ppl.epsilon() * ppl.epsilon());
  }
  return AccuracyFromInverseSquareSum(ctx, sum);
}

absl::StatusOr<double> ChebyshevErrorBound(const SensingContext& ctx,
                                           std::span<const LaplaceScale> scales,
                                           double alpha) {
  if (!(alpha > 0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("alpha must be positive, got %g", alpha));
  }
  if (static_cast<int>(scales.size()) != ctx.n()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("expected %d Laplace scales (one per user), got %d",
                        ctx.n(), scales.size()));
  }
  double sum_sq = 0;
  for (const LaplaceScale& s : scales) sum_sq += s.b() * s.b();
  const double n = ctx.n();
  const double bound = 2.0 * sum_sq / (alpha * alpha * n * n);
  return std::clamp(bound, 0.0, 1.0);
}

}  // namespace reap
