// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "mlgcl/error.hpp"

namespace mlgcl {
namespace {

struct Evaluation {
  double value;
  std::vector<std::uint8_t> signature;
};

Evaluation evaluate(const ScalarFn& f, std::span<const Matrix> inputs) {
  ad::Tape tape(ad::Tape::Mode::inference);
  std::vector<ad::Tensor> leaves;
  leaves.reserve(inputs.size());
  for (const auto& x : inputs) leaves.push_back(tape.leaf(x));
  const double v = f(tape, leaves).item();
  return {v, tape.relu_signature()};
}

}  // namespace

FiniteDiffReport finite_diff_check(const ScalarFn& f, std::span<const Matrix> inputs,
                                   const FiniteDiffOptions& options) {
  if (!(options.h > 0.0)) throw ValidationError("finite_diff_check needs h > 0");

  std::vector<Matrix> analytic;
  std::vector<std::uint8_t> base_signature;
  {
    ad::Tape tape;
    std::vector<ad::Tensor> leaves;
    for (const auto& x : inputs) leaves.push_back(tape.leaf(x));
    const auto loss = f(tape, leaves);
    const auto grads = ad::backward(tape, loss);
    for (const auto& l : leaves) analytic.push_back(grads.of(l));
    base_signature = tape.relu_signature();
  }
  if (options.tamper) options.tamper(analytic);

  FiniteDiffReport report;
  std::vector<Matrix> probe(inputs.begin(), inputs.end());
  for (std::size_t k = 0; k < probe.size(); ++k) {
    for (Index i = 0; i < probe[k].size(); ++i) {
      double& coord = probe[k].data()[i];
      const double saved = coord;
      coord = saved + options.h;
      const auto plus = evaluate(f, probe);
      coord = saved - options.h;
      const auto minus = evaluate(f, probe);
      coord = saved;
      if (plus.signature != base_signature || minus.signature != base_signature) {
        ++report.skipped;
        continue;
      }
      const double numeric = (plus.value - minus.value) / (2.0 * options.h);
      const double a = analytic[k].data()[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.denominator_floor});
      const double err = std::abs(a - numeric) / denom;
      if (!std::isfinite(err)) throw ComputeError("finite_diff_check produced a non-finite error");
      report.max_rel_error = std::max(report.max_rel_error, err);
      ++report.checked;
    }
  }
  return report;
}

FiniteDiffReport finite_diff_check(const std::function<ad::Tensor(ad::Tape&, const ad::Tensor&)>& f,
                                   const Matrix& x, double h) {
  FiniteDiffOptions options;
  options.h = h;
  const std::vector<Matrix> inputs{x};
  return finite_diff_check([&f](ad::Tape& tape, std::span<const ad::Tensor> xs) { return f(tape, xs[0]); },
                           inputs, options);
}

}  // namespace mlgcl
