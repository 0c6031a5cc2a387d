// Copyright 2026 The xfaith Authors.
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

#ifndef XFAITH_LOSSES_H_
#define XFAITH_LOSSES_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace xfaith {

// Inputs of a single target sequence under teacher forcing.
struct LossInputs {
  std::size_t steps = 0;       // T
  std::size_t vocab = 0;       // V
  std::vector<double> logits;  // T x V, row-major
  std::vector<std::size_t> targets;
  std::vector<int> faithful;   // F_t in {0, 1}
  // Unlikelihood positions (0-based). Derived from faithful when absent;
  // when present it must equal {t : faithful[t] == 0}.
  std::optional<std::vector<std::size_t>> unlikely;
  double alpha = 0.0;

  // Throws ValidationError when shapes or label sets are inconsistent.
  void Validate() const;
  std::vector<std::size_t> UnlikelySet() const;
  double LogProb(std::size_t t, std::size_t v) const;
};

struct LossValue {
  double total = 0.0;
  double mle = 0.0;
  // The term scaled by alpha: total == mle + alpha * unlikelihood.
  double unlikelihood = 0.0;
};

struct LossResult {
  LossValue value;
  std::vector<double> grad;  // d total / d logits, T x V
};

// -sum_t log p(y_t).
LossResult MleLoss(const LossInputs& in);

// -sum_t F_t log p(y_t); unfaithful steps contribute neither loss nor
// gradient.
LossResult MaskLoss(const LossInputs& in);

enum class UnlikeForm {
  // MLE - alpha * sum_{t in C} log(1 - p_t(y_t)): pushes the probability of
  // unfaithful targets down.
  kConventional,
  // The printed double sum with its printed sign:
  // MLE + alpha * sum_t sum_{c in C} log(1 - p_t(y_c)), with C read as the
  // set of distinct unfaithful target ids. Kept for comparison only.
  kLiteral,
};

// log(1 - p) is evaluated with p clamped to at most 1 - 1e-12.
LossResult UnlikeLoss(const LossInputs& in,
                      UnlikeForm form = UnlikeForm::kConventional);

using LossFn = std::function<LossResult(const LossInputs&)>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t worst_step = 0;
  std::size_t worst_vocab = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates = 0;
  double tolerance = 0.0;
  bool passed = true;

  std::string ToString() const;
};

// Compares the analytic gradient with central differences of step h on every
// logit: |analytic - numeric| / max(1, |analytic|) <= tol.
GradCheckReport GradCheck(const LossFn& loss, const LossInputs& in, double h,
                          double tol);

}  // namespace xfaith

#endif  // XFAITH_LOSSES_H_
