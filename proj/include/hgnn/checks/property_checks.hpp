#pragma once

#include <string>
#include <vector>

namespace hgnn::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Label and feature propagation (CG on the sparse operator) against the
// dense inverse on 20 random hypergraphs, n <= 50, alpha in {0.5, 0.9,
// 0.99}; entrywise 1e-8.
CheckResult check_propagation_oracle();

// Analytic gradients against central differences (step 1e-5, relative 1e-5)
// for the sym, rw, gcn and proposed networks, 3 seeded instances each.
CheckResult check_gradients();

// Row sums of Theta_rw, symmetry and spectrum of Theta_sym (n <= 100), and
// the two-vertex example.
CheckResult check_operator_invariants();

// Exact flip counts, no flip to the original class, test labels untouched,
// reproducible draws.
CheckResult check_noise_contract();

// All five methods >= 90% on synthetic_blobs(300, 3, spread 0.1), noise 0.
CheckResult check_synthetic_smoke();

std::vector<CheckResult> run_selftest();

}  // namespace hgnn::checks
