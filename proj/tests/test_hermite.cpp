#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gsh/hermite.hpp"
#include "gsh/spaces.hpp"

using namespace gsh;
using namespace gsh::hermite;

namespace {

constexpr double kPi = std::numbers::pi;

// high-precision oracle: plain long double recurrence (long double range
// covers the Gaussian seed over |x| <= 40 directly)
long double hermite_oracle(int n, long double x) {
  long double hm1 = 0.0L, h = std::exp(-0.5L * x * x) / std::pow((long double)kPi, 0.25L);
  for (int k = 0; k < n; ++k) {
    const long double hp1 =
        x * std::sqrt(2.0L / (k + 1)) * h - std::sqrt((long double)k / (k + 1)) * hm1;
    hm1 = h;
    h = hp1;
  }
  return h;
}

// physicists' Hermite polynomial with exact integer coefficients (n <= 20),
// evaluated in long double: H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi))
long double hermite_poly_oracle(int n, long double x) {
  std::vector<long double> c(n + 1, 0.0L), prev(n + 1, 0.0L), next(n + 1, 0.0L);
  prev[0] = 1.0L;  // H_0
  if (n >= 1) {
    c.assign(n + 1, 0.0L);
    c[1] = 2.0L;  // H_1 = 2x
  } else {
    c = prev;
  }
  for (int k = 2; k <= n; ++k) {
    next.assign(n + 1, 0.0L);
    for (int j = 0; j + 1 <= n; ++j) next[j + 1] += 2.0L * c[j];
    for (int j = 0; j <= n; ++j) next[j] -= 2.0L * (k - 1) * prev[j];
    prev = c;
    c = next;
  }
  long double poly = 0.0L;
  for (int j = n; j >= 0; --j) poly = poly * x + c[j];
  long double norm = std::pow((long double)kPi, 0.25L);
  for (int k = 1; k <= n; ++k) norm *= std::sqrt(2.0L * k);
  return poly * std::exp(-0.5L * x * x) / norm;
}

CoefficientField random_field(const Box& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoefficientField f(box, FieldKind::test);
  for (auto& z : f.data) z = cplx{u(rng), u(rng)};
  return f;
}

CoefficientField embed(const CoefficientField& a, const Box& box) {
  CoefficientField out(box, a.kind);
  for (std::size_t f = 0; f < a.data.size(); ++f) out.at(a.box.unflat(f)) = a.data[f];
  return out;
}

}  // namespace

TEST_CASE("hermite_eval seeds and symmetry") {
  CHECK(hermite_eval(0, 0.0) == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-15));
  CHECK(hermite_eval(1, 0.0) == 0.0);
  CHECK(hermite_eval(7, 0.0) == 0.0);
  CHECK(hermite_eval(4, 1.7) == doctest::Approx(hermite_eval(4, -1.7)).epsilon(1e-15));
  CHECK(hermite_eval(5, 1.7) == doctest::Approx(-hermite_eval(5, -1.7)).epsilon(1e-15));
  CHECK_THROWS_AS(hermite_eval(-1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hermite_eval(20000, 0.0), std::domain_error);
}

TEST_CASE("hermite_eval matches the exact-polynomial oracle at small n") {
  const double got = hermite_eval(10, 1.3);
  const double expect = static_cast<double>(hermite_poly_oracle(10, 1.3L));
  CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  for (int n = 0; n <= 18; ++n)
    for (double x : {-3.7, -0.4, 0.9, 2.2}) {
      const double ref = static_cast<double>(hermite_poly_oracle(n, x));
      CHECK(hermite_eval(n, x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("recurrence stability at n = 500 over [-40, 40]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    const double got = hermite_eval(500, x);
    const long double ref = hermite_oracle(500, x);
    if (ref == 0.0L) {
      CHECK(got == 0.0);
    } else {
      CHECK(std::fabs(got - static_cast<double>(ref)) <=
            1e-9 * std::fabs(static_cast<double>(ref)));
    }
  }
}

TEST_CASE("scaled path recombines with the plain path") {
  // around the branch point the two evaluation paths must agree
  for (double x : {37.0, 37.5, 38.0, 39.0}) {
    const long double ref = hermite_oracle(800, x);
    const double got = hermite_eval(800, x);
    CHECK(std::fabs(got - static_cast<double>(ref)) <= 1e-10 * std::fabs(static_cast<double>(ref)));
  }
  // deep in the tail the value is genuinely below double range
  CHECK(hermite_eval(2, 60.0) == 0.0);
}

TEST_CASE("hermite_eval_multi is the tensor product") {
  const MultiIndex n(1, 2);
  const double a = 0.6, b = -1.1;
  const std::vector<double> x{a, b};
  CHECK(hermite_eval_multi(n, x) ==
        doctest::Approx(hermite_eval(1, a) * hermite_eval(2, b)).epsilon(1e-15));
  const MultiIndex zero(0, 0);
  const std::vector<double> origin{0.0, 0.0};
  CHECK(hermite_eval_multi(zero, origin) == doctest::Approx(std::pow(kPi, -0.5)).epsilon(1e-14));
  const MultiIndex odd(3, 2);
  CHECK(hermite_eval_multi(odd, origin) == 0.0);
}

TEST_CASE("gauss_hermite_rule closed forms") {
  const auto r1 = gauss_hermite_rule(1);
  CHECK(r1.nodes[0] == 0.0);
  CHECK(r1.weights[0] == doctest::Approx(std::sqrt(kPi)).epsilon(1e-15));

  const auto r2 = gauss_hermite_rule(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(r2.weights[0] == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-14));
  CHECK(r2.weights[1] == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-14));

  CHECK_THROWS_AS(gauss_hermite_rule(0), std::invalid_argument);
}

TEST_CASE("gauss_hermite_rule integrates monomials and sums to sqrt(pi)") {
  for (int order : {1, 2, 3, 8, 33, 64, 256, 512}) {
    const auto r = gauss_hermite_rule(order);
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
  }
  // moments against e^{-x^2}: int x^{2m} = sqrt(pi) (2m-1)!! / 2^m
  const auto r = gauss_hermite_rule(9);
  double dfact = 1.0;
  for (int m = 0; 2 * m + 1 <= 2 * 9 - 1; ++m) {
    if (m > 0) dfact *= 2 * m - 1;
    double got = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
      got += r.weights[i] * std::pow(r.nodes[i], 2 * m);
    CHECK(got == doctest::Approx(std::sqrt(kPi) * dfact / std::pow(2.0, m)).epsilon(1e-12));
  }
}

TEST_CASE("log weights stay informative where linear weights underflow") {
  const auto r = gauss_hermite_rule(512);
  // extreme node: w ~ e^{-x^2} with x ~ 31; log weight must stay finite
  CHECK(std::isfinite(r.log_weights.front()));
  CHECK(r.log_weights.front() < -700.0);
  CHECK(r.total_weights.front() > 0.0);
  CHECK(std::isfinite(r.total_weights.front()));
}

TEST_CASE("analyze recovers basis functions") {
  const Box box(12);
  const auto h0 = analyze(
      [](std::span<const double> x) {
        return cplx{std::pow(kPi, -0.25) * std::exp(-0.5 * x[0] * x[0]), 0.0};
      },
      box);
  CHECK(std::abs(h0.data[0] - cplx{1.0, 0.0}) < 1e-12);
  for (int n = 1; n < 12; ++n) CHECK(std::abs(h0.data[n]) < 1e-12);

  // f = H_3 with the minimal exact quadrature order k + 1
  const Box box4(4);
  const auto h3 = analyze([](std::span<const double> x) { return cplx{hermite_eval(3, x[0]), 0.0}; },
                          box4, 4);
  CHECK(std::abs(h3.data[3] - cplx{1.0, 0.0}) < 1e-12);
  for (int n = 0; n < 3; ++n) CHECK(std::abs(h3.data[n]) < 1e-12);

  // f = e^{-x^2/2} = pi^{1/4} H_0
  const auto g = analyze(
      [](std::span<const double> x) { return cplx{std::exp(-0.5 * x[0] * x[0]), 0.0}; }, box);
  CHECK(std::abs(g.data[0] - cplx{std::pow(kPi, 0.25), 0.0}) < 1e-12);
  CHECK(std::abs(g.data[1]) < 1e-12);
  CHECK(std::abs(g.data[3]) < 1e-12);
}

TEST_CASE("analyze validates quadrature order") {
  const Box box(8);
  CHECK_THROWS_AS(analyze([](std::span<const double>) { return cplx{0.0, 0.0}; }, box, 7),
                  std::invalid_argument);
}

TEST_CASE("analyze-synthesize round trip") {
  std::mt19937_64 rng(3);
  const Box box(24);
  const auto a = random_field(box, rng);
  const auto f = [&a](std::span<const double> x) { return synthesize_at(a, x); };
  const auto rec = analyze(f, box);
  for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(std::abs(rec.data[i] - a.data[i]) < 1e-10);
}

TEST_CASE("analyze in two dimensions matches the tensor structure") {
  const Box box(5, 6);
  const auto f = [](std::span<const double> x) {
    return cplx{hermite_eval(2, x[0]) * hermite_eval(4, x[1]), 0.0};
  };
  const auto a = analyze(f, box);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const MultiIndex n = box.unflat(i);
    const double expect = (n[0] == 2 && n[1] == 4) ? 1.0 : 0.0;
    CHECK(std::abs(a.data[i] - cplx{expect, 0.0}) < 1e-11);
  }
}

TEST_CASE("synthesize far outside the box turning point is tiny") {
  std::mt19937_64 rng(5);
  const int N = 32;
  auto a = random_field(Box(N), rng);
  double norm = 0.0;
  for (const auto& z : a.data) norm += std::norm(z);
  for (auto& z : a.data) z /= std::sqrt(norm);  // unit l2 norm
  const double far = std::sqrt(2.0 * N + 1.0) + 6.0;
  for (double x : {far, far + 2.0, -far}) {
    CHECK(std::abs(synthesize_at(a, std::span<const double>(&x, 1))) < 1e-12);
  }
}

TEST_CASE("synthesize basics and grid version") {
  const Box box(6);
  const auto e0 = CoefficientField::unit(box, MultiIndex(0));
  for (double x : {-2.0, 0.0, 0.7}) {
    CHECK(std::abs(synthesize_at(e0, std::span<const double>(&x, 1)) -
                   cplx{hermite_eval(0, x), 0.0}) < 1e-15);
  }
  std::vector<std::vector<double>> grids{{-1.0, 0.0, 2.0}};
  const auto s = synthesize(e0, grids);
  CHECK(s.values.size() == 3);
  CHECK(std::abs(s.values[1] - cplx{std::pow(kPi, -0.25), 0.0}) < 1e-15);
}

TEST_CASE("ladder_apply formulas") {
  const Box box(8);
  const auto e5 = CoefficientField::unit(box, MultiIndex(5));
  const auto n5 = ladder_apply(e5, LadderOp::number);
  CHECK(n5.data[5] == cplx{5.0, 0.0});

  const auto e0 = CoefficientField::unit(box, MultiIndex(0));
  const auto x0 = ladder_apply(e0, LadderOp::position);
  CHECK(x0.box.order(0) == 9);
  CHECK(std::abs(x0.data[1] - cplx{std::sqrt(0.5), 0.0}) < 1e-15);
  CHECK(std::abs(x0.data[0]) == 0.0);

  const auto d0 = ladder_apply(e0, LadderOp::derivative);
  CHECK(std::abs(d0.data[1] + cplx{std::sqrt(0.5), 0.0}) < 1e-15);
}

TEST_CASE("oscillator identity: -d2/dx2 + x^2 = 2N + 1 in coefficient space") {
  std::mt19937_64 rng(13);
  const auto a = random_field(Box(16), rng);
  const auto xx = ladder_apply(ladder_apply(a, LadderOp::position), LadderOp::position);
  const auto dd = ladder_apply(ladder_apply(a, LadderOp::derivative), LadderOp::derivative);
  CoefficientField lhs(xx.box, a.kind);
  for (std::size_t i = 0; i < lhs.data.size(); ++i) lhs.data[i] = xx.data[i] - dd.data[i];

  const auto na = ladder_apply(a, LadderOp::number);
  CoefficientField rhs(a.box, a.kind);
  for (std::size_t i = 0; i < rhs.data.size(); ++i) rhs.data[i] = 2.0 * na.data[i] + a.data[i];
  const auto rhs_embedded = embed(rhs, lhs.box);
  for (std::size_t i = 0; i < lhs.data.size(); ++i)
    CHECK(std::abs(lhs.data[i] - rhs_embedded.data[i]) < 1e-12);
}

TEST_CASE("ladder adjointness under the bilinear pairing") {
  std::mt19937_64 rng(17);
  const auto a = random_field(Box(12), rng);
  const auto b = random_field(Box(12), rng);
  const auto xa = ladder_apply(a, LadderOp::position);
  const auto xb = ladder_apply(b, LadderOp::position);
  CHECK(std::abs(spaces::parseval_pair(xa, b) - spaces::parseval_pair(a, xb)) < 1e-12);
  const auto da = ladder_apply(a, LadderOp::derivative);
  const auto db = ladder_apply(b, LadderOp::derivative);
  CHECK(std::abs(spaces::parseval_pair(da, b) + spaces::parseval_pair(a, db)) < 1e-12);
}

TEST_CASE("number_power") {
  const Box box(10);
  const auto e7 = CoefficientField::unit(box, MultiIndex(7));
  const auto p0 = number_power(e7, 0);
  CHECK(p0.data[7] == cplx{1.0, 0.0});
  const auto p1 = number_power(e7, 1);
  CHECK(p1.data[7] == cplx{7.0, 0.0});
  std::mt19937_64 rng(19);
  const auto a = random_field(box, rng);
  const auto twice = number_power(number_power(a, 1), 1);
  const auto sq = number_power(a, 2);
  for (std::size_t i = 0; i < a.data.size(); ++i)
    CHECK(std::abs(twice.data[i] - sq.data[i]) <= 1e-14 * std::max(1.0, std::abs(sq.data[i])));
  CHECK_THROWS_AS(number_power(a, -1), std::invalid_argument);
}

TEST_CASE("eigenrelation on a grid converges at second order") {
  // N H_n = n H_n; the centered finite difference of the half-oscillator
  // converges at O(h^2)
  const int n = 3;
  const auto err = [&](double h) {
    double worst = 0.0;
    for (double x = -6.0; x <= 6.0; x += 0.05) {
      const double d2 = (hermite_eval(n, x + h) - 2.0 * hermite_eval(n, x) + hermite_eval(n, x - h)) /
                        (h * h);
      const double lhs = 0.5 * (-d2 + (x * x - 1.0) * hermite_eval(n, x));
      worst = std::max(worst, std::fabs(lhs - n * hermite_eval(n, x)));
    }
    return worst;
  };
  const double e1 = err(0.02), e2 = err(0.01);
  CHECK(e1 / e2 >= 3.8);
}

TEST_CASE("sup_norm_estimate closed forms and decay") {
  CHECK(sup_norm_estimate(0) == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-12));
  // |H_1| peaks at x = 1: sqrt(2) pi^{-1/4} e^{-1/2}
  const double h1 = std::sqrt(2.0) * std::pow(kPi, -0.25) * std::exp(-0.5);
  CHECK(sup_norm_estimate(1) == doctest::Approx(h1).epsilon(1e-10));

  const auto table = sup_norm_table(200);
  const double h0 = std::pow(kPi, -0.25);
  for (int n = 0; n <= 200; ++n) CHECK(table[n] <= h0 + 1e-12);
}
