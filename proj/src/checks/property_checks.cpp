#include "hgnn/checks/property_checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "hgnn/bench/experiment.hpp"
#include "hgnn/checks/oracles.hpp"
#include "hgnn/dataset.hpp"
#include "hgnn/error.hpp"
#include "hgnn/labels.hpp"
#include "hgnn/nn.hpp"
#include "hgnn/rng.hpp"
#include "hgnn/ssl.hpp"

namespace hgnn::checks {

namespace {

template <typename Body>
CheckResult timed(std::string name, Body body) {
  CheckResult r;
  r.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = fmt::format("exception: {}", e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

DenseMatrix random_pm1_labels(std::size_t n, std::size_t classes, SplitMix64& rng) {
  DenseMatrix y(n, classes);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform01() < 0.4) continue;  // unlabeled row
    const std::size_t c = rng.uniform_below(classes);
    for (std::size_t j = 0; j < classes; ++j) y(i, j) = j == c ? 1.0 : -1.0;
  }
  return y;
}

}  // namespace

CheckResult check_propagation_oracle() {
  return timed("propagation vs dense inverse", [](CheckResult& r) {
    constexpr double kAlphas[] = {0.5, 0.9, 0.99};
    constexpr double kTol = 1e-8;
    SplitMix64 rng(20240601);
    double worst = 0.0;
    PropagationConfig cfg;
    cfg.tol = 1e-13;
    cfg.max_iter = 5000;
    for (int inst = 0; inst < 20; ++inst) {
      const std::size_t n = 5 + rng.uniform_below(46);
      const auto edges = random_hyperedges(n, n / 2 + 1, 6, rng);
      const Hypergraph hg = make_hypergraph(n, edges);
      const PropagationOperator op = hypergraph_operator(hg, Normalization::kSym);
      const DenseMatrix theta = dense_hypergraph_operator(n, edges, {}, Normalization::kSym);
      const DenseMatrix y = random_pm1_labels(n, 3, rng);
      const DenseMatrix x = random_matrix(n, 4, rng, 0.0, 1.0);
      for (double alpha : kAlphas) {
        cfg.alpha = alpha;
        const DenseMatrix f_labels =
            propagate_labels(op, LabelMatrix{y, LabelScheme::kPlusMinusOne}, cfg);
        const DenseMatrix f_features = propagate_features(op, x, cfg);
        worst = std::max(worst, max_abs_diff(f_labels, dense_propagation(theta, y, alpha)));
        worst = std::max(worst, max_abs_diff(f_features, dense_propagation(theta, x, alpha)));
      }
    }
    r.passed = worst <= kTol;
    r.detail = fmt::format("20 hypergraphs x 3 alphas, label and feature solves; max |diff| {:.3g} "
                           "(tol {:g})",
                           worst, kTol);
  });
}

CheckResult check_gradients() {
  return timed("gradients vs finite differences", [](CheckResult& r) {
    constexpr double kStep = 1e-5;
    constexpr double kTol = 1e-5;
    constexpr double kFloor = 1e-6;  // relative error denominator floor
    constexpr double kWd = 5e-4;
    enum class Variant { kSym, kRw, kGcn, kProposed };
    constexpr std::pair<Variant, const char*> kVariants[] = {
        {Variant::kSym, "hgnn-sym"},
        {Variant::kRw, "hgnn-rw"},
        {Variant::kGcn, "gcn"},
        {Variant::kProposed, "proposed"}};
    std::string detail;
    bool ok = true;
    for (const auto& [variant, name] : kVariants) {
      SplitMix64 rng(mix_seed(77, static_cast<std::uint64_t>(variant)));
      double worst = 0.0;
      int done = 0;
      int skipped = 0;
      while (done < 3) {
        const std::size_t n = 6 + rng.uniform_below(7);
        const std::size_t l1 = 2 + rng.uniform_below(5);
        const std::size_t l2 = 2 + rng.uniform_below(4);
        const std::size_t c = 2 + rng.uniform_below(3);
        DenseMatrix x = random_matrix(n, l1, rng);
        PropagationOperator op;
        DenseMatrix theta;
        if (variant == Variant::kGcn) {
          op = gcn_operator(x, 3);
          theta = op.matrix.to_dense();
        } else {
          const auto edges = random_hyperedges(n, n / 2 + 1, 4, rng);
          const Normalization norm =
              variant == Variant::kRw ? Normalization::kRw : Normalization::kSym;
          op = hypergraph_operator(make_hypergraph(n, edges), norm);
          theta = dense_hypergraph_operator(n, edges, {}, norm);
        }
        if (variant == Variant::kProposed) {
          PropagationConfig pc;
          pc.alpha = 0.9;
          pc.tol = 1e-12;
          x = propagate_features(op, x, pc);
        }
        std::vector<std::size_t> labeled;
        std::vector<int> labels(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
          labels[i] = static_cast<int>(rng.uniform_below(c));
          if (rng.uniform01() < 0.6) labeled.push_back(i);
        }
        if (labeled.empty()) labeled.push_back(0);
        const LabelMatrix y =
            encode_labels(labels, labeled, static_cast<int>(c), LabelScheme::kOneHot);
        const TwoLayerParams params = glorot_init(l1, l2, c, rng.next_u64());

        const ForwardTrace trace = variant == Variant::kProposed
                                       ? forward_proposed(op, x, params)
                                       : forward(op, x, params);
        double min_pre = INFINITY;
        for (double v : trace.pre_activation.values()) min_pre = std::min(min_pre, std::abs(v));
        if (min_pre < 1e-3) {  // a central difference would straddle the ReLU kink
          ++skipped;
          continue;
        }
        const LossAndGradients analytic = loss_and_gradients(op, trace, y, labeled, params, kWd);
        const auto loss = [&](const TwoLayerParams& p) {
          return dense_network_loss(theta, x, p, y.values, labeled, kWd);
        };
        const TwoLayerParams fd = finite_difference_gradient(loss, params, kStep);
        worst = std::max(worst, max_relative_error(analytic.grads.theta1, fd.theta1, kFloor));
        worst = std::max(worst, max_relative_error(analytic.grads.theta2, fd.theta2, kFloor));
        worst = std::max(worst, std::abs(analytic.loss - loss(params)) /
                                    std::max(std::abs(analytic.loss), kFloor));
        ++done;
      }
      ok = ok && worst <= kTol;
      detail += fmt::format("{}{}: 3 instances, max rel err {:.2g}{}", detail.empty() ? "" : "; ",
                            name, worst,
                            skipped ? fmt::format(" ({} near-kink draws redrawn)", skipped) : "");
    }
    r.passed = ok;
    r.detail = fmt::format("{} (tol {:g}, step {:g})", detail, kTol, kStep);
  });
}

CheckResult check_operator_invariants() {
  return timed("operator invariants", [](CheckResult& r) {
    SplitMix64 rng(31337);
    double row_sum_err = 0.0;
    double asym = 0.0;
    double eig_lo = INFINITY;
    double eig_hi = -INFINITY;
    double dense_diff = 0.0;
    int count = 0;
    auto inspect = [&](const Hypergraph& hg) {
      const DenseMatrix rw = hypergraph_operator(hg, Normalization::kRw).matrix.to_dense();
      const DenseMatrix sym = hypergraph_operator(hg, Normalization::kSym).matrix.to_dense();
      const std::size_t n = hg.num_vertices();
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          s += rw(i, j);
          asym = std::max(asym, std::abs(sym(i, j) - sym(j, i)));
        }
        row_sum_err = std::max(row_sum_err, std::abs(s - 1.0));
      }
      const SymmetricEigen eig = jacobi_eigen(sym);
      eig_lo = std::min(eig_lo, eig.values.front());
      eig_hi = std::max(eig_hi, eig.values.back());
      ++count;
      return sym;
    };
    for (int inst = 0; inst < 12; ++inst) {
      const std::size_t n = 2 + rng.uniform_below(99);
      const auto edges = random_hyperedges(n, n / 3 + 1, 8, rng);
      const DenseMatrix sym = inspect(make_hypergraph(n, edges));
      dense_diff = std::max(
          dense_diff, max_abs_diff(sym, dense_hypergraph_operator(n, edges, {}, Normalization::kSym)));
    }
    for (int inst = 0; inst < 4; ++inst) {
      const std::size_t n = 20 + rng.uniform_below(81);
      const DenseMatrix x = random_matrix(n, 5, rng);
      inspect(build_knn_hypergraph(x, 2 + rng.uniform_below(6), inst % 2 == 0));
    }
    const Hypergraph pair = make_hypergraph(2, {{0, 1}});
    const DenseMatrix half{{0.5, 0.5}, {0.5, 0.5}};
    const double pair_err =
        std::max(max_abs_diff(hypergraph_operator(pair, Normalization::kSym).matrix.to_dense(), half),
                 max_abs_diff(hypergraph_operator(pair, Normalization::kRw).matrix.to_dense(), half));

    r.passed = row_sum_err <= 1e-10 && asym <= 1e-12 && eig_lo >= -1e-10 &&
               eig_hi <= 1.0 + 1e-10 && pair_err <= 1e-15 && dense_diff <= 1e-12;
    r.detail = fmt::format(
        "{} hypergraphs (n <= 100): rw row-sum err {:.2g}, sym asymmetry {:.2g}, spectrum "
        "[{:.3g}, {:.15g}], sparse vs dense {:.2g}; two-vertex err {:.2g}",
        count, row_sum_err, asym, eig_lo, eig_hi, dense_diff, pair_err);
  });
}

CheckResult check_noise_contract() {
  return timed("noise contract", [](CheckResult& r) {
    constexpr double kLevels[] = {0.0, 0.15, 0.30, 0.45, 0.5, 0.9};
    std::vector<ImageDataset> sets;
    sets.push_back(synthetic_blobs(300, 3, 4, 0.1, 1));
    sets.push_back(synthetic_blobs(101, 2, 3, 0.2, 2));
    sets.push_back(synthetic_blobs(250, 10, 5, 0.1, 3));
    std::size_t cases = 0;
    std::string failure;
    auto fail = [&](std::string msg) {
      if (failure.empty()) failure = std::move(msg);
    };
    for (std::size_t d = 0; d < sets.size(); ++d) {
      const ImageDataset& ds = sets[d];
      const std::size_t l = ds.train_indices.size();
      for (double level : kLevels) {
        for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
          ++cases;
          const NoisySplit a = inject_noise(ds, level, seed);
          const NoisySplit b = inject_noise(ds, level, seed);
          const auto expected = static_cast<std::size_t>(std::round(level * static_cast<double>(l)));
          std::size_t changed = 0;
          for (std::size_t i : ds.train_indices) changed += a.noisy_labels[i] != ds.labels[i];
          if (changed != expected || a.flipped.size() != expected) {
            fail(fmt::format("set {} level {} seed {}: {} flips, expected {}", d, level, seed,
                             changed, expected));
          }
          for (std::size_t i : a.flipped) {
            if (a.noisy_labels[i] == ds.labels[i]) {
              fail(fmt::format("set {} level {}: row {} kept its label", d, level, i));
            }
            if (a.noisy_labels[i] < 0 || a.noisy_labels[i] >= ds.num_classes) {
              fail(fmt::format("set {} level {}: row {} out of range", d, level, i));
            }
          }
          for (std::size_t i : ds.test_indices) {
            if (a.noisy_labels[i] != ds.labels[i]) {
              fail(fmt::format("set {} level {}: test row {} changed", d, level, i));
            }
          }
          if (a.clean_labels != ds.labels) fail("clean labels differ from the dataset");
          if (a.noisy_labels != b.noisy_labels || a.flipped != b.flipped) {
            fail(fmt::format("set {} level {} seed {}: not reproducible", d, level, seed));
          }
        }
      }
    }
    r.passed = failure.empty();
    r.detail = r.passed ? fmt::format("{} (dataset, level, seed) cases", cases) : failure;
  });
}

CheckResult check_synthetic_smoke() {
  return timed("synthetic end-to-end", [](CheckResult& r) {
    bench::ExperimentConfig cfg;
    cfg.dataset.name = "synthetic";
    cfg.dataset.synthetic = {300, 3, 10, 0.1, 1};
    cfg.noise_levels = {0.0};
    cfg.seeds = {1};
    const bench::ExperimentResult res = bench::run_experiment(cfg);
    bool ok = res.failures.empty() && res.rows.size() == cfg.methods.size();
    std::string detail;
    for (const auto& row : res.rows) {
      ok = ok && row.accuracy >= 0.90;
      detail += fmt::format("{}{} {:.2f}%", detail.empty() ? "" : ", ", bench::to_string(row.method),
                            100 * row.accuracy);
    }
    for (const auto& f : res.failures) {
      detail += fmt::format("{}{} failed: {}", detail.empty() ? "" : ", ",
                            bench::to_string(f.method), f.message);
    }
    r.passed = ok;
    r.detail = detail + " (threshold 90%)";
  });
}

std::vector<CheckResult> run_selftest() {
  return {check_propagation_oracle(), check_gradients(), check_operator_invariants(),
          check_noise_contract(), check_synthetic_smoke()};
}

}  // namespace hgnn::checks
