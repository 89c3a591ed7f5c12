#include "assettax/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "test_util.hpp"

using namespace assettax;

namespace {

// AVX2 transcendentals are polynomial approximations; allow a few ulps
// against the libm reference.
bool tolerably_equal(double got, double want, double rel, double abs_floor) {
  if (std::isnan(want)) return std::isnan(got);
  if (std::isinf(want)) return got == want;
  return std::abs(got - want) <=
         std::max(abs_floor, rel * std::abs(want));
}

}  // namespace

TEST_CASE("kernel dispatch") {
  const auto& ops = kernels::active();
  CHECK((std::string(ops.name) == "scalar" || std::string(ops.name) == "avx2"));
  CHECK(kernels::force("scalar"));
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK_FALSE(kernels::force("bogus"));
  CHECK(kernels::force(nullptr));  // back to auto
  if (kernels::avx2() != nullptr) {
    CHECK(kernels::force("avx2"));
    CHECK(std::string(kernels::active().name) == "avx2");
    kernels::force(nullptr);
  } else {
    CHECK_FALSE(kernels::force("avx2"));
  }
}

TEST_CASE("scalar kernels match libm by construction") {
  const auto& s = kernels::scalar();
  const std::vector<double> xs{-5.0, -0.5, 0.0, 0.25, 1.0, 3.75, 100.0};
  std::vector<double> out(xs.size());
  s.exp_v(xs.data(), out.data(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == std::exp(xs[i]));
  s.pow_v(xs.data(), 1.7, out.data(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK((out[i] == std::pow(xs[i], 1.7) ||
           (std::isnan(out[i]) && std::isnan(std::pow(xs[i], 1.7)))));
  }
}

TEST_CASE("avx2 exp matches the scalar reference") {
  const kernels::Ops* v = kernels::avx2();
  if (v == nullptr) {
    MESSAGE("avx2 unavailable on this host; skipping");
    return;
  }
  testutil::Rng rng(11);
  std::vector<double> xs;
  for (int i = 0; i < 4096; ++i) xs.push_back(rng.uniform(-700.0, 700.0));
  xs.insert(xs.end(), {0.0, -0.0, 1.0, -1.0, 709.0, -707.0, 1e-300, -1e-300});
  std::vector<double> got(xs.size()), want(xs.size());
  v->exp_v(xs.data(), got.data(), xs.size());
  kernels::scalar().exp_v(xs.data(), want.data(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK_MESSAGE(tolerably_equal(got[i], want[i], 1e-14, 5e-324),
                  "x=", xs[i], " got=", got[i], " want=", want[i]);
  }
  // Saturation edges.
  const double edge[4] = {800.0, -800.0,
                          std::numeric_limits<double>::infinity(),
                          -std::numeric_limits<double>::infinity()};
  double eout[4];
  v->exp_v(edge, eout, 4);
  CHECK(eout[0] == std::numeric_limits<double>::infinity());
  CHECK(eout[1] == 0.0);
  CHECK(eout[2] == std::numeric_limits<double>::infinity());
  CHECK(eout[3] == 0.0);
}

TEST_CASE("avx2 log matches the scalar reference") {
  const kernels::Ops* v = kernels::avx2();
  if (v == nullptr) {
    MESSAGE("avx2 unavailable on this host; skipping");
    return;
  }
  testutil::Rng rng(13);
  std::vector<double> xs;
  for (int i = 0; i < 2048; ++i)
    xs.push_back(std::exp(rng.uniform(-690.0, 690.0)));
  for (int i = 0; i < 2048; ++i) xs.push_back(rng.uniform(0.5, 2.0));
  xs.insert(xs.end(), {1.0, 2.0, 0.5, 1e-308, 4e-320, 1e308});
  std::vector<double> got(xs.size()), want(xs.size());
  v->log_v(xs.data(), got.data(), xs.size());
  kernels::scalar().log_v(xs.data(), want.data(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK_MESSAGE(tolerably_equal(got[i], want[i], 1e-13, 2e-15),
                  "x=", xs[i], " got=", got[i], " want=", want[i]);
  }
  const double edge[4] = {0.0, -1.0, std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::quiet_NaN()};
  double eout[4];
  v->log_v(edge, eout, 4);
  CHECK(eout[0] == -std::numeric_limits<double>::infinity());
  CHECK(std::isnan(eout[1]));
  CHECK(eout[2] == std::numeric_limits<double>::infinity());
  CHECK(std::isnan(eout[3]));
}

TEST_CASE("avx2 pow matches the scalar reference") {
  const kernels::Ops* v = kernels::avx2();
  if (v == nullptr) {
    MESSAGE("avx2 unavailable on this host; skipping");
    return;
  }
  testutil::Rng rng(17);
  for (const double p : {-2.5, -1.0, 0.0, 0.5, 1.0, 1.75, 3.0, 11.0}) {
    std::vector<double> xs{0.0, 1.0, 2.0};
    for (int i = 0; i < 1000; ++i) xs.push_back(rng.uniform(1e-3, 1e3));
    std::vector<double> got(xs.size()), want(xs.size());
    v->pow_v(xs.data(), p, got.data(), xs.size());
    kernels::scalar().pow_v(xs.data(), p, want.data(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK_MESSAGE(tolerably_equal(got[i], want[i], 1e-13, 1e-300),
                    "x=", xs[i], " p=", p, " got=", got[i],
                    " want=", want[i]);
    }
  }
}

TEST_CASE("captured-share batches are identical across variants") {
  const kernels::Ops* v = kernels::avx2();
  testutil::Rng rng(19);
  std::vector<double> ts;
  for (int i = 0; i < 1027; ++i) ts.push_back(rng.uniform(0.0, 3.0));
  std::vector<double> a(ts.size()), b(ts.size());
  kernels::scalar().captured_share_v(ts.data(), 0.005, a.data(), ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(a[i] == ts[i] / (ts[i] + 0.005));
  }
  if (v != nullptr) {
    v->captured_share_v(ts.data(), 0.005, b.data(), ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("utility row scans agree across variants") {
  const kernels::Ops* v = kernels::avx2();
  testutil::Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + std::size_t(rng.uniform(0.0, 700.0));
    std::vector<double> s(n), prize(n);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s[j] = acc;
      acc += rng.uniform(0.001, 0.1);
      prize[j] = 0.8 * s[j] + rng.uniform(0.0, 0.05);
    }
    const double base = rng.uniform(-5.0, 5.0);
    const double coeff = rng.uniform(0.2, 2.0);
    const double expo = rng.uniform(1.2, 3.0);
    const auto a =
        kernels::scalar().utility_row_max(s.data(), prize.data(), n, base,
                                          coeff, expo);
    // The scalar scan must match a plain loop exactly.
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double u = base + prize[j] - coeff * std::pow(s[j], expo);
      if (u > best) {
        best = u;
        best_j = j;
      }
    }
    CHECK(a.value == best);
    CHECK(a.index == best_j);

    if (v != nullptr) {
      const auto b =
          v->utility_row_max(s.data(), prize.data(), n, base, coeff, expo);
      CHECK(testutil::close_rel(a.value, b.value, 1e-12));
      // The vector argmax must be an epsilon-argmax of the exact row.
      const double u_at_b =
          base + prize[b.index] - coeff * std::pow(s[b.index], expo);
      CHECK(u_at_b >= a.value - 1e-9 * std::max(1.0, std::abs(a.value)));
    }
  }
}
