// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "mlgcl/error.hpp"
#include "mlgcl/optim.hpp"
#include "mlgcl/random.hpp"

namespace mlgcl {
namespace {

Matrix gather_rows(const Matrix& z, std::span<const Index> rows) {
  Matrix out(static_cast<Index>(rows.size()), z.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = z.row(rows[i]);
  return out;
}

// Lowest class index wins ties.
double accuracy(const Matrix& logits, std::span<const int> labels, std::span<const Index> rows) {
  if (rows.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Index best = 0;
    logits.row(static_cast<Index>(i)).maxCoeff(&best);
    if (best == labels[static_cast<std::size_t>(rows[i])]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

void check_inputs(const Matrix& z, std::span<const int> labels) {
  if (labels.empty()) throw ValidationError("linear probe needs labels");
  if (static_cast<Index>(labels.size()) != z.rows()) {
    throw ValidationError("embedding has " + std::to_string(z.rows()) + " rows but there are " +
                          std::to_string(labels.size()) + " labels");
  }
  if (!z.allFinite()) throw ComputeError("embedding contains NaN or Inf");
  for (int l : labels) {
    if (l < 0) throw ValidationError("negative class label");
  }
}

}  // namespace

void ProbeConfig::validate() const {
  if (epochs < 1) throw ValidationError("probe.epochs must be >= 1");
  if (!(lr > 0.0)) throw ValidationError("probe.lr must be positive");
  if (!(weight_decay >= 0.0)) throw ValidationError("probe.weight_decay must be >= 0");
  if (runs < 1) throw ValidationError("probe.runs must be >= 1");
}

RunResult summarize(std::vector<double> accuracies) {
  RunResult r;
  r.accuracies = std::move(accuracies);
  if (r.accuracies.empty()) return r;
  // Accumulate offsets from the first run so identical runs give an exact mean.
  const double first = r.accuracies.front();
  double s = 0.0;
  for (double a : r.accuracies) s += a - first;
  const double n = static_cast<double>(r.accuracies.size());
  r.mean = first + s / n;
  double ss = 0.0;
  for (double a : r.accuracies) ss += (a - r.mean) * (a - r.mean);
  r.std = std::sqrt(ss / n);
  return r;
}

Split stratified_split(std::span<const int> labels, std::uint64_t seed) {
  if (labels.empty()) throw ValidationError("stratified split needs labels");
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw ValidationError("negative class label");
    by_class[static_cast<std::size_t>(labels[i])].push_back(static_cast<Index>(i));
  }
  Rng rng(seed);
  Split s;
  for (auto& members : by_class) {
    if (members.empty()) continue;
    const auto perm = rng.permutation(static_cast<Index>(members.size()));
    const auto n = static_cast<double>(members.size());
    const auto n_train = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.1 * n)));
    const auto n_val = std::min(members.size() - n_train, static_cast<std::size_t>(std::llround(0.1 * n)));
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Index node = members[static_cast<std::size_t>(perm[i])];
      (i < n_train ? s.train : i < n_train + n_val ? s.val : s.test).push_back(node);
    }
  }
  for (auto* v : {&s.train, &s.val, &s.test}) std::sort(v->begin(), v->end());
  return s;
}

double linear_probe(const Matrix& z, std::span<const int> labels, const Split& split, const ProbeConfig& cfg) {
  cfg.validate();
  check_inputs(z, labels);
  validate_split(split, z.rows());
  if (split.train.empty()) throw ValidationError("split has no training nodes");
  if (split.test.empty()) throw ValidationError("split has no test nodes");

  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  const Index d = z.cols();
  // Columns are standardized with train-split statistics so that the fixed
  // learning rate works for embeddings of any offset and scale.
  Matrix x_train = gather_rows(z, split.train);
  const Eigen::RowVectorXd mu = x_train.colwise().mean();
  Eigen::RowVectorXd sd = ((x_train.rowwise() - mu).cwiseAbs2().colwise().mean()).cwiseSqrt();
  sd = sd.unaryExpr([](double v) { return v > 1e-12 ? v : 1.0; });
  auto standardize = [&](Matrix x) -> Matrix {
    x.rowwise() -= mu;
    x.array().rowwise() /= sd.array();
    return x;
  };
  x_train = standardize(std::move(x_train));
  const Matrix x_val = standardize(gather_rows(z, split.val));
  const Matrix x_test = standardize(gather_rows(z, split.test));
  const auto n_train = static_cast<Index>(split.train.size());
  Matrix y = Matrix::Zero(n_train, classes);
  for (Index i = 0; i < n_train; ++i) y(i, labels[static_cast<std::size_t>(split.train[static_cast<std::size_t>(i)])]) = 1.0;

  Matrix w = xavier_init(d, classes, cfg.seed);
  Matrix b = Matrix::Zero(1, classes);
  const std::array<Matrix*, 2> params{&w, &b};
  const std::array<const Matrix*, 2> cparams{&w, &b};
  AdamState adam(AdamConfig{.lr = cfg.lr, .weight_decay = cfg.weight_decay}, cparams);

  auto logits_of = [&](const Matrix& x) -> Matrix { return (x * w).rowwise() + b.row(0); };

  const bool has_val = !split.val.empty();
  double best_val = -1.0;
  double test_at_best = 0.0;
  std::array<Matrix, 2> grads;
  for (int e = 0; e < cfg.epochs; ++e) {
    Matrix p = logits_of(x_train);
    p.colwise() -= p.rowwise().maxCoeff().eval();
    p = p.array().exp().matrix();
    p.array().colwise() /= p.rowwise().sum().eval().array();
    const Matrix delta = (p - y) / static_cast<double>(n_train);
    grads[0] = x_train.transpose() * delta;
    grads[1] = delta.colwise().sum();
    adam_step(params, grads, adam);

    if (has_val) {
      const double val = accuracy(logits_of(x_val), labels, split.val);
      if (val >= best_val) {
        best_val = val;
        test_at_best = accuracy(logits_of(x_test), labels, split.test);
      }
    }
  }
  return has_val ? test_at_best : accuracy(logits_of(x_test), labels, split.test);
}

RunResult evaluate(const Matrix& z, std::span<const int> labels, const std::optional<Split>& split,
                   const ProbeConfig& cfg) {
  cfg.validate();
  check_inputs(z, labels);
  std::vector<double> acc;
  acc.reserve(static_cast<std::size_t>(cfg.runs));
  for (int r = 0; r < cfg.runs; ++r) {
    const auto run_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    ProbeConfig run_cfg = cfg;
    run_cfg.seed = derive_seed(run_seed, 0);
    const Split s = split ? *split : stratified_split(labels, derive_seed(run_seed, 1));
    acc.push_back(linear_probe(z, labels, s, run_cfg));
  }
  return summarize(std::move(acc));
}

void write_results_header(std::ostream& out) { out << "dataset,mode,scheme,k,tau,lambda,seed,run,accuracy\n"; }

void write_results_rows(std::ostream& out, const ResultTag& tag, const RunResult& r) {
  out << std::setprecision(17);
  for (std::size_t i = 0; i < r.accuracies.size(); ++i) {
    out << tag.dataset << ',' << tag.mode << ',' << tag.scheme << ',' << tag.k << ',' << tag.tau << ','
        << tag.lambda << ',' << tag.seed << ',' << i << ',' << r.accuracies[i] << '\n';
  }
}

void write_summary_header(std::ostream& out) { out << "dataset,mode,scheme,mean,std,runs\n"; }

void write_summary_row(std::ostream& out, const ResultTag& tag, const RunResult& r) {
  out << std::setprecision(17) << tag.dataset << ',' << tag.mode << ',' << tag.scheme << ',' << r.mean << ','
      << r.std << ',' << r.accuracies.size() << '\n';
}

}  // namespace mlgcl
