#pragma once

// Batch arithmetic kernels behind runtime CPU dispatch. Scalar versions
// are the reference semantics; the AVX2 variants (selected when the CPU
// supports avx2+fma) may differ from the reference in the last few ulps
// because exp/log/pow are polynomial implementations. Equivalence between
// variants is covered by tests/test_kernels.cpp.
//
// Selection: kernels::active() picks the best available variant once per
// process. The ASSETTAX_KERNELS environment variable ("scalar" or "avx2")
// or kernels::force() overrides the choice.

#include <cstddef>

namespace assettax::kernels {

struct RowBest {
  double value;
  std::size_t index;
};

struct Ops {
  const char* name;

  void (*exp_v)(const double* x, double* out, std::size_t n);
  void (*log_v)(const double* x, double* out, std::size_t n);
  // out[i] = x[i]^p for x[i] >= 0; x == 0 maps to 0 for p > 0, 1 for p == 0.
  void (*pow_v)(const double* x, double p, double* out, std::size_t n);
  // out[i] = t[i] / (t[i] + rho) -- the captured-share row of a sweep.
  void (*captured_share_v)(const double* t, double rho, double* out,
                           std::size_t n);
  // Scans one row of a brute-force utility grid,
  //   u[j] = base + prize[j] - h2_coeff * s[j]^h2_exp,
  // returning the maximum and the lowest index attaining it.
  RowBest (*utility_row_max)(const double* s, const double* prize,
                             std::size_t n, double base, double h2_coeff,
                             double h2_exp);
};

const Ops& scalar();
const Ops* avx2();  // nullptr when the CPU or build cannot run it
const Ops& active();

// Force a variant by name; nullptr or "" restores auto-detection.
// Returns false (and leaves the selection unchanged) if unavailable.
bool force(const char* name);

}  // namespace assettax::kernels
