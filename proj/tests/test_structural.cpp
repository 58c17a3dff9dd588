#include <doctest.h>

#include <cmath>
#include <random>

#include "gsh/hermite.hpp"
#include "gsh/spaces.hpp"
#include "gsh/structural.hpp"

using namespace gsh;
using namespace gsh::structural;
using weights::WeightSequence;

namespace {

CoefficientField random_field(const Box& box, std::mt19937_64& rng, FieldKind kind) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoefficientField f(box, kind);
  for (auto& z : f.data) z = cplx{u(rng), u(rng)};
  return f;
}

}  // namespace

TEST_CASE("divisor trivial cases") {
  const auto seq = WeightSequence::gevrey(1.0, 256);
  const auto d0 = divisor_total(seq, 1.0, 0);
  CHECK(d0.value() == 1.0);
  CHECK(d0.terms_used == 1);
  CHECK_FALSE(d0.tail_flag);

  const auto dm = divisor(seq, 1.0, MultiIndex(0, 0));
  CHECK(dm.value() == 1.0);

  // mu -> 0: D -> 1
  const auto dsmall = divisor_total(seq, 1e-9, 5);
  CHECK(dsmall.value() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("divisor closed form: cosh(1) for gevrey(1), mu = 1, nu = 1") {
  const auto seq = WeightSequence::gevrey(1.0, 256);
  const auto d = divisor_total(seq, 1.0, 1);
  // sum 1/(2a)! = cosh(1)
  CHECK(std::fabs(d.value() - std::cosh(1.0)) <= 1e-12);
}

TEST_CASE("divisor identity: the truncated series meets the full value") {
  const auto seq = WeightSequence::gevrey(1.0, 2048);
  for (double mu : {0.25, 1.0, 4.0}) {
    for (long nu : {1L, 7L, 63L, 255L}) {
      const auto d = divisor_total(seq, mu, nu);
      const double partial = divisor_partial_log(seq, mu, nu, d.terms_used);
      CHECK(std::fabs(partial - d.log_value) <= 1e-15 * std::fabs(d.log_value) + 1e-300);
    }
  }
}

TEST_CASE("divisor is nondecreasing in nu and mu") {
  const auto seq = WeightSequence::gevrey(1.0, 2048);
  double prev = 0.0;
  for (long nu = 0; nu <= 64; ++nu) {
    const double v = divisor_total(seq, 1.0, nu).log_value;
    CHECK(v >= prev);
    prev = v;
  }
  prev = -1.0;
  for (double mu : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const double v = divisor_total(seq, mu, 16).log_value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("divisor reports prefix exhaustion") {
  // short custom prefix, large mu * nu: terms still growing at the cap
  std::vector<double> t(9, 0.0);
  for (long p = 1; p <= 8; ++p) t[p] = 0.5 * p * std::log(static_cast<double>(p));
  const auto seq = WeightSequence::custom(t);
  CHECK_THROWS_AS(divisor_total(seq, 10.0, 50), std::domain_error);
}

TEST_CASE("regularize basics") {
  const auto seq = WeightSequence::gevrey(1.0, 256);
  const Box box(16);
  const auto b0 = CoefficientField::unit(box, MultiIndex(0), FieldKind::dual);
  const auto a0 = regularize(b0, seq, 1.0);
  CHECK(a0.data[0] == cplx{1.0, 0.0});
  CHECK(a0.kind == FieldKind::test);

  // synthetic b_n = D_mu(n): exact cancellation to a_n = 1
  CoefficientField bd(box, FieldKind::dual);
  for (int n = 0; n < 16; ++n) bd.data[n] = cplx{divisor_total(seq, 1.0, n).value(), 0.0};
  const auto ad = regularize(bd, seq, 1.0);
  for (int n = 0; n < 16; ++n) CHECK(std::abs(ad.data[n] - cplx{1.0, 0.0}) < 1e-14);

  // unit at nu = 1 picks up 1/cosh(1)
  const auto b1 = CoefficientField::unit(box, MultiIndex(1), FieldKind::dual);
  const auto a1 = regularize(b1, seq, 1.0);
  CHECK(std::abs(a1.data[1] - cplx{1.0 / std::cosh(1.0), 0.0}) < 1e-14);
}

TEST_CASE("regularize carries phases through the log-magnitude path") {
  const auto seq = WeightSequence::gevrey(1.0, 256);
  const Box box(8);
  CoefficientField b(box, FieldKind::dual);
  b.data[3] = std::polar(2.5, 1.234);
  const auto a = regularize(b, seq, 0.5);
  CHECK(std::arg(a.data[3]) == doctest::Approx(1.234).epsilon(1e-14));
}

TEST_CASE("verify_bound tables") {
  const Box box(32);
  const auto e0 = CoefficientField::unit(box, MultiIndex(0));
  const auto t0 = verify_bound(e0, 31);
  CHECK(t0.sup_value == 0.0);

  // a_n = 1/n^4: s_n = sup_norm(n)/n^2 decays; the sup sits at n = 1
  CoefficientField a(box, FieldKind::test);
  a.data[0] = cplx{1.0, 0.0};
  for (int n = 1; n < 32; ++n) a.data[n] = cplx{1.0 / std::pow(n, 4), 0.0};
  const auto tb = verify_bound(a, 31);
  CHECK(tb.s.size() == 31);
  CHECK(tb.sup_value == tb.s[0]);
  CHECK(tb.s[10] < tb.s[0]);
  CHECK_THROWS_AS(verify_bound(CoefficientField(Box(4, 4), FieldKind::test), 3),
                  std::invalid_argument);
}

TEST_CASE("bound table for the proof construction stays bounded") {
  // b at the growth envelope with theta = mu / H, H fitted by the
  // separativity check
  const auto seq = WeightSequence::gevrey(1.0, 2048);
  const auto m2 = weights::check_m2(seq);
  const double H = m2.witness("H");
  const double mu = 1.0;
  weights::AssociatedFunctionTable table(seq);

  const Box box(128);
  CoefficientField b(box, FieldKind::dual);
  b.data[0] = cplx{1.0, 0.0};
  for (int n = 1; n < 128; ++n)
    b.data[n] =
        cplx{std::exp(table.lookup((mu / H) * std::sqrt(static_cast<double>(n))).value), 0.0};
  const auto a = regularize(b, seq, mu);
  const auto tb = verify_bound(a, 127);
  CHECK(std::isfinite(tb.sup_value));
  // the tail should not carry the sup (uniform convergence evidence)
  const double tail_max = *std::max_element(tb.s.begin() + 64, tb.s.end());
  CHECK(tail_max <= tb.sup_value);
}

TEST_CASE("oscillator_series_pair trivial cases") {
  const auto seq = WeightSequence::gevrey(1.0, 256);
  const Box box(8);
  std::mt19937_64 rng(53);
  const auto phi = random_field(box, rng, FieldKind::test);

  const auto f0 = CoefficientField::unit(box, MultiIndex(0));
  const auto r0 = oscillator_series_pair(f0, seq, 1.0, phi, 100);
  CHECK(std::abs(r0.value - phi.data[0]) < 1e-15);
  CHECK(r0.beta_used == 1);

  // beta_max = 0 reduces to the Parseval pairing
  const auto a = random_field(box, rng, FieldKind::test);
  const auto rp = oscillator_series_pair(a, seq, 1.0, phi, 0);
  CHECK(std::abs(rp.value - spaces::parseval_pair(a, phi)) < 1e-15);
}

TEST_CASE("structural round trip at small scale") {
  std::mt19937_64 rng(59);
  const std::vector<WeightSequence> seqs = {WeightSequence::gevrey(1.0, 2048),
                                            WeightSequence::power_log(1.0, 1.0, 2048)};
  const Box box(64);
  for (const auto& seq : seqs) {
    for (double mu : {0.25, 1.0, 4.0}) {
      const auto b = random_field(box, rng, FieldKind::dual);
      const auto phi = random_field(box, rng, FieldKind::test);
      const auto a = regularize(b, seq, mu);
      const auto osc = oscillator_series_pair(a, seq, mu, phi, 2000);
      const cplx direct = spaces::parseval_pair(b, phi);
      CHECK(std::abs(osc.value - direct) <= 1e-8 * std::abs(direct));
      CHECK(osc.tail_estimate <= 1e-10 * std::abs(osc.value));
    }
  }
}

TEST_CASE("rearrangement: both summation orders agree") {
  std::mt19937_64 rng(61);
  const auto seq = WeightSequence::gevrey(1.0, 2048);
  const Box box(32);
  const auto b = random_field(box, rng, FieldKind::dual);
  const auto phi = random_field(box, rng, FieldKind::test);
  const double mu = 1.0;
  const auto a = regularize(b, seq, mu);

  const auto osc = oscillator_series_pair(a, seq, mu, phi, 2000);
  // opposite order: per-n partial divisors with the same truncation depth
  cplx by_n{0.0, 0.0};
  for (std::size_t f = 0; f < box.size(); ++f) {
    const long nu = box.unflat(f).total();
    const double logd = divisor_partial_log(seq, mu, nu, osc.beta_used);
    by_n += a.data[f] * phi.data[f] * std::exp(logd);
  }
  CHECK(std::abs(osc.value - by_n) <= 1e-12 * std::max(1.0, std::abs(by_n)));

  // absolute convergence of the double sum (finite on the fixture)
  double abs_sum = 0.0;
  for (std::size_t f = 0; f < box.size(); ++f) {
    const long nu = box.unflat(f).total();
    const double logd = divisor_partial_log(seq, mu, nu, osc.beta_used);
    abs_sum += std::abs(a.data[f]) * std::abs(phi.data[f]) * std::exp(logd);
  }
  CHECK(std::isfinite(abs_sum));
}

TEST_CASE("synthesize_f materializes a bounded continuous function") {
  const auto seq = WeightSequence::gevrey(1.0, 512);
  const Box box(24);
  std::mt19937_64 rng(67);
  auto b = random_field(box, rng, FieldKind::dual);
  const auto a = regularize(b, seq, 1.0);

  std::vector<double> grid;
  for (double x = -9.0; x <= 9.0; x += 0.05) grid.push_back(x);
  std::vector<std::vector<double>> grids{grid};
  const auto s = synthesize_f(a, grids);

  // triangle-inequality bound sum |a_n| ||H_n||_inf
  const auto sup = hermite::sup_norm_table(23);
  double bound = 0.0;
  for (int n = 0; n < 24; ++n) bound += std::abs(a.data[n]) * sup[n];
  for (const auto& v : s.values) CHECK(std::abs(v) <= bound + 1e-12);

  // grid refinement halves the max interpolation jump (continuity evidence)
  const auto max_jump = [&](double h) {
    std::vector<double> g;
    for (double x = -9.0; x <= 9.0; x += h) g.push_back(x);
    std::vector<std::vector<double>> gg{g};
    const auto samples = synthesize_f(a, gg);
    double m = 0.0;
    for (std::size_t i = 1; i < samples.values.size(); ++i)
      m = std::max(m, std::abs(samples.values[i] - samples.values[i - 1]));
    return m;
  };
  const double j1 = max_jump(0.02), j2 = max_jump(0.01);
  CHECK(j2 / j1 <= 0.6);

  // unit at 0 synthesizes the Gaussian ground state
  const auto e0 = CoefficientField::unit(Box(4), MultiIndex(0));
  const auto g0 = synthesize_f(e0, grids);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(g0.values[i] - cplx{hermite::hermite_eval(0, grid[i]), 0.0}) < 1e-14);
}
