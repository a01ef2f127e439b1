#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradcheck.h"
#include "msvoc/autograd.h"
#include "msvoc/rng.h"

using namespace msvoc;
using ag::Var;

namespace {

ag::Mat random_mat(int r, int c, Rng& rng) {
  ag::Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.gaussian();
  return m;
}

}  // namespace

TEST_CASE("elementwise and reduction gradients match finite differences") {
  Rng rng(7);
  Var x = ag::param(random_mat(3, 5, rng));

  auto check = [&](const std::function<Var(const Var&)>& build) {
    Var loss = ag::mean(build(x));
    ag::backward(loss);
    ag::Mat analytic = x->grad;
    auto f = [&](const Var& v) {
      return ag::mean(build(v))->value(0, 0);
    };
    CHECK(msvoc_test::max_rel_err(analytic, msvoc_test::numeric_grad(f, x)) <
          1e-6);
  };

  check([](const Var& v) { return ag::tanh_(v); });
  check([](const Var& v) { return ag::sigmoid_(v); });
  check([](const Var& v) { return ag::exp_(v); });
  check([](const Var& v) { return ag::mul(v, ag::tanh_(v)); });
  check([](const Var& v) { return ag::leaky_relu(v, 0.2); });
  check([](const Var& v) { return ag::abs_(v); });
  check([](const Var& v) { return ag::sqrt_(ag::sadd(ag::mul(v, v), 1.0)); });
  check([](const Var& v) { return ag::log_floor(ag::sadd(ag::mul(v, v), 0.1), 1e-7); });
}

TEST_CASE("matmul and concat gradients") {
  Rng rng(11);
  Var a = ag::param(random_mat(4, 3, rng));
  Var b = ag::param(random_mat(3, 6, rng));

  Var loss = ag::mean(ag::tanh_(ag::matmul(a, b)));
  ag::backward(loss);
  ag::Mat ga = a->grad, gb = b->grad;

  auto fa = [&](const Var& v) {
    return ag::mean(ag::tanh_(ag::matmul(v, b)))->value(0, 0);
  };
  auto fb = [&](const Var& v) {
    return ag::mean(ag::tanh_(ag::matmul(a, v)))->value(0, 0);
  };
  CHECK(msvoc_test::max_rel_err(ga, msvoc_test::numeric_grad(fa, a)) < 1e-6);
  CHECK(msvoc_test::max_rel_err(gb, msvoc_test::numeric_grad(fb, b)) < 1e-6);

  Var c = ag::param(random_mat(4, 2, rng));
  auto build = [&](const Var& v) {
    Var h = ag::hcat({v, c, ag::cols(v, 1, 2)});
    return ag::mean(ag::mul(h, h));
  };
  Var loss2 = build(a);
  ag::backward(loss2);
  ag::Mat ga2 = a->grad;
  auto f2 = [&](const Var& v) { return build(v)->value(0, 0); };
  CHECK(msvoc_test::max_rel_err(ga2, msvoc_test::numeric_grad(f2, a)) < 1e-6);
}

TEST_CASE("conv1d gradients, padding variants") {
  Rng rng(3);
  const int cin = 2, cout = 3, k = 3, t = 12;
  Var x = ag::param(random_mat(cin, t, rng));
  Var w = ag::param(random_mat(cout, cin * k, rng));
  Var b = ag::param(random_mat(cout, 1, rng));

  struct Case {
    int dil, pl, pr;
  };
  for (Case cs : {Case{1, 1, 1}, Case{2, 2, 2}, Case{1, k - 1, 0}}) {
    auto build = [&](const Var& xx, const Var& ww, const Var& bb) {
      return ag::mean(
          ag::tanh_(ag::conv1d(xx, ww, bb, k, cs.dil, cs.pl, cs.pr)));
    };
    Var loss = build(x, w, b);
    ag::backward(loss);
    ag::Mat gx = x->grad, gw = w->grad, gb = b->grad;
    CHECK(msvoc_test::max_rel_err(
              gx, msvoc_test::numeric_grad(
                      [&](const Var& v) { return build(v, w, b)->value(0, 0); },
                      x)) < 1e-6);
    CHECK(msvoc_test::max_rel_err(
              gw, msvoc_test::numeric_grad(
                      [&](const Var& v) { return build(x, v, b)->value(0, 0); },
                      w)) < 1e-6);
    CHECK(msvoc_test::max_rel_err(
              gb, msvoc_test::numeric_grad(
                      [&](const Var& v) { return build(x, w, v)->value(0, 0); },
                      b)) < 1e-6);
  }
}

TEST_CASE("conv1d same padding keeps length") {
  Rng rng(5);
  Var x = ag::constant(random_mat(4, 20, rng));
  Var w = ag::constant(random_mat(4, 4 * 3, rng));
  for (int dil : {1, 2, 4}) {
    const int pad = dil;
    Var y = ag::conv1d(x, w, nullptr, 3, dil, pad, pad);
    CHECK(y->value.cols() == 20);
  }
}

TEST_CASE("resampling ops: shapes and gradients") {
  Rng rng(13);
  Var x = ag::param(random_mat(2, 16, rng));

  CHECK(ag::downsample_cols(x, 4)->value.cols() == 4);
  CHECK(ag::upsample_zero_cols(x, 4, 4.0)->value.cols() == 64);
  CHECK(ag::repeat_cols(x, 3)->value.cols() == 48);
  CHECK(ag::avg_pool1d(x, 4, 8)->value.cols() == 2);
  CHECK(ag::avg_pool1d(x, 4, 2)->value.cols() == 8);

  for (auto build : std::vector<std::function<Var(const Var&)>>{
           [](const Var& v) { return ag::downsample_cols(v, 4); },
           [](const Var& v) { return ag::upsample_zero_cols(v, 4, 4.0); },
           [](const Var& v) { return ag::repeat_cols(v, 3); },
           [](const Var& v) { return ag::avg_pool1d(v, 4, 2); },
           [](const Var& v) { return ag::avg_pool1d(v, 4, 8); },
           [](const Var& v) { return ag::pad_cols(v, 2, 5); }}) {
    Var loss = ag::mean(ag::mul(build(x), build(x)));
    ag::backward(loss);
    ag::Mat gx = x->grad;
    auto f = [&](const Var& v) {
      return ag::mean(ag::mul(build(v), build(v)))->value(0, 0);
    };
    CHECK(msvoc_test::max_rel_err(gx, msvoc_test::numeric_grad(f, x)) < 1e-6);
  }
}

TEST_CASE("constant subgraphs build no tape") {
  Rng rng(1);
  Var x = ag::constant(random_mat(2, 8, rng));
  Var y = ag::tanh_(ag::mul(x, x));
  CHECK_FALSE(y->requires_grad);
  CHECK(y->parents.empty());
}

TEST_CASE("repeated backward does not accumulate stale gradients") {
  Var x = ag::param(ag::Mat::Constant(1, 1, 2.0));
  Var loss = ag::mul(x, x);
  ag::backward(loss);
  CHECK(x->grad(0, 0) == doctest::Approx(4.0));
  ag::backward(loss);
  CHECK(x->grad(0, 0) == doctest::Approx(4.0));
}
