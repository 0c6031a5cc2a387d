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

#include "xfaith/losses.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "xfaith/error.h"

namespace xfaith {
namespace {

constexpr double kMaxProb = 1.0 - 1e-12;

// Softmax of row t.
std::vector<double> Probs(const LossInputs& in, std::size_t t) {
  const double* row = in.logits.data() + t * in.vocab;
  const double mx = *std::max_element(row, row + in.vocab);
  std::vector<double> p(in.vocab);
  double z = 0.0;
  for (std::size_t v = 0; v < in.vocab; ++v) {
    p[v] = std::exp(row[v] - mx);
    z += p[v];
  }
  for (double& x : p) x /= z;
  return p;
}

// Adds weight * d(-log p_t(y)) / d logits_t to grad.
void AddNllGrad(const std::vector<double>& p, std::size_t y, double weight,
                double* grad) {
  for (std::size_t v = 0; v < p.size(); ++v) {
    grad[v] += weight * (p[v] - (v == y ? 1.0 : 0.0));
  }
}

bool Clamped(double log_p) { return log_p >= std::log(kMaxProb); }

// log(1 - p) from log p, with p clamped to kMaxProb.
double LogOneMinus(double log_p) {
  if (Clamped(log_p)) return std::log1p(-kMaxProb);
  return std::log(-std::expm1(log_p));
}

// Adds weight * d log(1 - p_t(c)) / d logits_t to grad; zero when clamped.
void AddLogOneMinusGrad(const std::vector<double>& p, std::size_t c,
                        double log_p, double weight, double* grad) {
  if (Clamped(log_p)) return;
  const double scale = -p[c] / (-std::expm1(log_p));
  for (std::size_t v = 0; v < p.size(); ++v) {
    grad[v] += weight * scale * ((v == c ? 1.0 : 0.0) - p[v]);
  }
}

LossResult MaskedNll(const LossInputs& in, bool honour_mask) {
  in.Validate();
  LossResult out;
  out.grad.assign(in.steps * in.vocab, 0.0);
  for (std::size_t t = 0; t < in.steps; ++t) {
    if (honour_mask && in.faithful[t] == 0) continue;
    out.value.mle -= in.LogProb(t, in.targets[t]);
    AddNllGrad(Probs(in, t), in.targets[t], 1.0,
               out.grad.data() + t * in.vocab);
  }
  out.value.total = out.value.mle;
  return out;
}

}  // namespace

void LossInputs::Validate() const {
  if (steps == 0) throw ValidationError("loss inputs need at least one step");
  if (vocab == 0) throw ValidationError("loss inputs need a vocabulary");
  if (logits.size() != steps * vocab) {
    throw ValidationError("expected " + std::to_string(steps * vocab) +
                          " logits, got " + std::to_string(logits.size()));
  }
  if (targets.size() != steps || faithful.size() != steps) {
    throw ValidationError(
        "targets and faithful flags must have one entry per step");
  }
  for (std::size_t t = 0; t < steps; ++t) {
    if (targets[t] >= vocab) {
      throw ValidationError("target " + std::to_string(targets[t]) +
                            " at step " + std::to_string(t) +
                            " is outside the vocabulary");
    }
    if (faithful[t] != 0 && faithful[t] != 1) {
      throw ValidationError("faithful flags must be 0 or 1");
    }
  }
  for (double z : logits) {
    if (!std::isfinite(z)) throw ValidationError("non-finite logit");
  }
  if (!(alpha >= 0.0)) throw ValidationError("alpha must be >= 0");
  if (unlikely) {
    std::vector<std::size_t> given = *unlikely;
    std::sort(given.begin(), given.end());
    if (given != UnlikelySet()) {
      throw ValidationError(
          "unlikelihood set must equal the steps whose faithful flag is 0");
    }
  }
}

std::vector<std::size_t> LossInputs::UnlikelySet() const {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < steps; ++t) {
    if (faithful[t] == 0) out.push_back(t);
  }
  return out;
}

double LossInputs::LogProb(std::size_t t, std::size_t v) const {
  const double* row = logits.data() + t * vocab;
  const double mx = *std::max_element(row, row + vocab);
  double z = 0.0;
  for (std::size_t u = 0; u < vocab; ++u) z += std::exp(row[u] - mx);
  return row[v] - mx - std::log(z);
}

LossResult MleLoss(const LossInputs& in) { return MaskedNll(in, false); }

LossResult MaskLoss(const LossInputs& in) { return MaskedNll(in, true); }

LossResult UnlikeLoss(const LossInputs& in, UnlikeForm form) {
  LossResult out = MleLoss(in);
  const std::vector<std::size_t> positions = in.UnlikelySet();
  double term = 0.0;
  if (form == UnlikeForm::kConventional) {
    for (std::size_t t : positions) {
      const std::size_t y = in.targets[t];
      const double log_p = in.LogProb(t, y);
      term -= LogOneMinus(log_p);
      AddLogOneMinusGrad(Probs(in, t), y, log_p, -in.alpha,
                         out.grad.data() + t * in.vocab);
    }
  } else {
    std::set<std::size_t> ids;
    for (std::size_t t : positions) ids.insert(in.targets[t]);
    for (std::size_t t = 0; t < in.steps; ++t) {
      const std::vector<double> p = Probs(in, t);
      for (std::size_t c : ids) {
        const double log_p = in.LogProb(t, c);
        term += LogOneMinus(log_p);
        AddLogOneMinusGrad(p, c, log_p, in.alpha,
                           out.grad.data() + t * in.vocab);
      }
    }
  }
  out.value.unlikelihood = term;
  out.value.total = out.value.mle + in.alpha * term;
  return out;
}

GradCheckReport GradCheck(const LossFn& loss, const LossInputs& in, double h,
                          double tol) {
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be > 0");
  const LossResult base = loss(in);
  GradCheckReport report;
  report.tolerance = tol;
  LossInputs probe = in;
  for (std::size_t i = 0; i < in.logits.size(); ++i) {
    const double saved = probe.logits[i];
    probe.logits[i] = saved + h;
    const double up = loss(probe).value.total;
    probe.logits[i] = saved - h;
    const double down = loss(probe).value.total;
    probe.logits[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = base.grad[i];
    const double rel =
        std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
    ++report.coordinates;
    if (rel >= report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_step = i / in.vocab;
      report.worst_vocab = i % in.vocab;
      report.worst_analytic = analytic;
      report.worst_numeric = numeric;
    }
  }
  report.passed = report.max_rel_error <= tol;
  return report;
}

std::string GradCheckReport::ToString() const {
  std::ostringstream out;
  out.precision(6);
  out << (passed ? "PASS" : "FAIL") << " max_rel_error=" << std::scientific
      << max_rel_error << " tol=" << tolerance << " worst=(t=" << worst_step
      << ",v=" << worst_vocab << ") analytic=" << worst_analytic
      << " numeric=" << worst_numeric << " coords=" << coordinates;
  return out.str();
}

}  // namespace xfaith
