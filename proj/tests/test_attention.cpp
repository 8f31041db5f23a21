#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tpa/grad_check.hpp"
#include "tpa/model.hpp"

using namespace tpa;

namespace {

Tensor random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t = Tensor::zeros(std::move(shape));
  for (int i = 0; i < t.numel(); ++i) t.at(i) = rng.uniform(lo, hi);
  return t;
}

// Independent oracle: literal double loop over the trailing-aligned sum.
Tensor conv_oracle(const Tensor& h, const Tensor& f) {
  int m = h.rows(), w = h.cols(), k = f.rows(), t = f.cols();
  Tensor out = Tensor::zeros({m, k});
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < k; ++j) {
      double acc = 0.0;
      for (int l = 0; l < w; ++l) {
        int fi = t - w + l;  // trailing alignment; taps before the filter start contribute nothing
        if (fi >= 0) acc += h.at(i, l) * f.at(j, fi);
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

ModelParams with_params(const ModelParams& base, const std::vector<Tensor>& flat) {
  ModelParams p = base;
  size_t i = 0;
  p.for_each_tensor([&](const std::string&, Tensor& t) { t = flat[i++]; });
  return p;
}

std::vector<Tensor> flat_params(const ModelParams& p) {
  std::vector<Tensor> flat;
  p.for_each_tensor([&](const std::string&, const Tensor& t) { flat.push_back(t); });
  return flat;
}

}  // namespace

TEST_CASE("temporal convolution hand examples") {
  Tensor h = Tensor::matrix(1, 3, {1, 2, 3});
  CHECK(temporal_conv(h, Tensor::matrix(1, 3, {1, 1, 1})).at(0, 0) == 6.0);
  CHECK(temporal_conv(h, Tensor::matrix(1, 3, {0, 0, 1})).at(0, 0) == 3.0);
  CHECK(temporal_conv(h, Tensor::matrix(1, 3, {0, 0, 0})).at(0, 0) == 0.0);
  CHECK_THROWS_AS(temporal_conv(h, Tensor::matrix(1, 4, {1, 1, 1, 1})), ShapeError);
}

TEST_CASE("temporal convolution agrees with the brute-force oracle") {
  Rng rng(2024);
  for (int it = 0; it < 100; ++it) {
    int m = 1 + rng.uniform_int(6);
    int w = 1 + rng.uniform_int(10);
    int k = 1 + rng.uniform_int(6);
    int t = 1 + rng.uniform_int(w);
    Tensor h = random_tensor({m, w}, rng, -3.0, 3.0);
    Tensor f = random_tensor({k, t}, rng, -3.0, 3.0);
    Tensor got = temporal_conv(h, f);
    Tensor want = conv_oracle(h, f);
    REQUIRE(same_shape(got, want));
    for (int i = 0; i < got.numel(); ++i) CHECK(std::fabs(got.at(i) - want.at(i)) <= 1e-12);
  }
}

TEST_CASE("scoring function") {
  SUBCASE("zero map scores zero") {
    Tensor s = score(Tensor::vector({1, 2}), Tensor::vector({3, 4}), Tensor::zeros({2, 2}));
    CHECK(s.item() == 0.0);
  }
  SUBCASE("identity map hand case") {
    Tensor s = score(Tensor::vector({1, 0}), Tensor::vector({1, 0}),
                     Tensor::from_rows({{1, 0}, {0, 1}}));
    CHECK(s.item() == 1.0);
  }
  SUBCASE("bilinearity in the query") {
    Rng rng(17);
    Tensor hc = random_tensor({3}, rng);
    Tensor ht = random_tensor({4}, rng);
    Tensor wa = random_tensor({3, 4}, rng);
    double base = score(hc, ht, wa).item();
    Tensor scaled = ht;
    for (int i = 0; i < scaled.numel(); ++i) scaled.at(i) *= 2.5;
    CHECK(score(hc, scaled, wa).item() == doctest::Approx(2.5 * base).epsilon(1e-12));
  }
}

TEST_CASE("attention weight activations") {
  Tensor zeros = Tensor::vector({0, 0, 0});
  Tensor sig = attention_weights(zeros, Activation::Sigmoid);
  for (int i = 0; i < 3; ++i) CHECK(sig.at(i) == 0.5);

  Tensor sm = attention_weights(Tensor::vector({std::log(2.0), 0.0}), Activation::Softmax);
  CHECK(sm.at(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(sm.at(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  Rng rng(4);
  Tensor any = random_tensor({7}, rng, -5.0, 5.0);
  Tensor w = attention_weights(any, Activation::Softmax);
  double s = 0.0;
  for (int i = 0; i < 7; ++i) s += w.at(i);
  CHECK(std::fabs(s - 1.0) <= 1e-12);
}

TEST_CASE("context vector") {
  Tensor hc = Tensor::from_rows({{1, 0}, {0, 1}});
  SUBCASE("zero weights give the zero vector") {
    Tensor v = context_vector(Tensor::vector({0, 0}), hc);
    CHECK(v.at(0) == 0.0);
    CHECK(v.at(1) == 0.0);
  }
  SUBCASE("one-hot weights select a row") {
    Tensor v = context_vector(Tensor::vector({0, 1}), hc);
    CHECK(v.at(0) == 0.0);
    CHECK(v.at(1) == 1.0);
  }
  SUBCASE("hand-weighted sum") {
    Tensor v = context_vector(Tensor::vector({0.5, 0.5}), hc);
    CHECK(v.at(0) == 0.5);
    CHECK(v.at(1) == 0.5);
  }
}

TEST_CASE("output head") {
  TpaParams p;
  SUBCASE("all-zero maps output zero") {
    p.w_h = Tensor::zeros({2, 2});
    p.w_v = Tensor::zeros({2, 3});
    p.w_hprime = Tensor::zeros({2, 2});
    Tensor y = tpa_output(Tensor::vector({1, 2}), Tensor::vector({3, 4, 5}), p);
    CHECK(y.at(0) == 0.0);
    CHECK(y.at(1) == 0.0);
  }
  SUBCASE("zero context map reduces to a linear readout") {
    Rng rng(12);
    p.w_h = random_tensor({2, 2}, rng);
    p.w_v = Tensor::zeros({2, 3});
    p.w_hprime = random_tensor({2, 2}, rng);
    Tensor ht = random_tensor({2}, rng);
    Tensor y = tpa_output(ht, Tensor::vector({9, 9, 9}), p);
    Tensor want = matmul(p.w_hprime, matmul(p.w_h, ht));
    CHECK(y.values == want.values);
  }
  SUBCASE("scalar hand case") {
    p.w_h = Tensor::matrix(1, 1, {2});
    p.w_v = Tensor::matrix(1, 1, {3});
    p.w_hprime = Tensor::matrix(1, 1, {1});
    Tensor y = tpa_output(Tensor::vector({1}), Tensor::vector({1}), p);
    CHECK(y.at(0) == 5.0);
  }
}

TEST_CASE("luong attention") {
  SUBCASE("single column passes through") {
    Tensor h = Tensor::matrix(3, 1, {1, 2, 3});
    Tensor v = luong_attention(h, Tensor::vector({0, 0, 0}), Tensor::zeros({3, 3}));
    CHECK(v.at(0) == 1.0);
    CHECK(v.at(1) == 2.0);
    CHECK(v.at(2) == 3.0);
  }
  SUBCASE("zero map averages the columns") {
    Tensor h = Tensor::from_rows({{1, 3}, {2, 6}});
    Tensor v = luong_attention(h, Tensor::vector({1, 1}), Tensor::zeros({2, 2}));
    CHECK(v.at(0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(v.at(1) == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("two columns with log-ratio scores") {
    // Query/map chosen so the scores are exactly [ln2, 0].
    Tensor h = Tensor::from_rows({{std::log(2.0), 0.0}, {0.0, 0.0}});
    Tensor w = Tensor::from_rows({{1, 0}, {0, 1}});
    Tensor ht = Tensor::vector({1.0, 0.0});
    Tensor v = luong_attention(h, ht, w);
    double a = 2.0 / 3.0, b = 1.0 / 3.0;
    CHECK(v.at(0) == doctest::Approx(a * std::log(2.0) + b * 0.0).epsilon(1e-12));
    CHECK(v.at(1) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("ablation attend modes") {
  Rng rng(77);
  int m = 4, w = 6, k = 3;
  Tensor h = random_tensor({m, w}, rng);
  Tensor ht = random_tensor({m}, rng);

  SUBCASE("position mode equals the explicit composition") {
    Tensor hc = random_tensor({m, k}, rng);
    TpaParams p;
    p.w_a = random_tensor({k, m}, rng);
    AttentionMode mode{AttendAxis::Position, Activation::Sigmoid, Integration::Scored};
    Tensor got = ablation_attend(h, hc, ht, mode, p);

    Tensor pre = matmul(p.w_a, ht);
    Tensor scores = Tensor::zeros({m});
    for (int i = 0; i < m; ++i) {
      Tensor row = Tensor::zeros({k});
      for (int j = 0; j < k; ++j) row.at(j) = hc.at(i, j);
      scores.at(i) = score(row, ht, p.w_a).item();
    }
    Tensor weights = attention_weights(scores, Activation::Sigmoid);
    Tensor want = context_vector(weights, hc);
    CHECK(got.shape == Shape{k});
    CHECK(got.values == want.values);
    (void)pre;
  }

  SUBCASE("filter mode attends over columns") {
    Tensor hc = random_tensor({m, k}, rng);
    TpaParams p;
    p.w_a = random_tensor({m, m}, rng);
    AttentionMode mode{AttendAxis::Filter, Activation::Softmax, Integration::Scored};
    Tensor got = ablation_attend(h, hc, ht, mode, p);
    CHECK(got.shape == Shape{m});
  }

  SUBCASE("without-cnn one-hot weights select a hidden-feature row") {
    TpaParams p;
    // Map chosen so scores saturate the sigmoid into a near one-hot on row 2.
    p.w_a = Tensor::zeros({w, m});
    AttentionMode mode{AttendAxis::WithoutCnn, Activation::Sigmoid, Integration::Scored};
    Tensor v = ablation_attend(h, {}, ht, mode, p);
    CHECK(v.shape == Shape{w});
    // zero map: every weight is 0.5, so v = 0.5 * column-sums of H rows
    for (int j = 0; j < w; ++j) {
      double want = 0.0;
      for (int i = 0; i < m; ++i) want += 0.5 * h.at(i, j);
      CHECK(v.at(j) == doctest::Approx(want).epsilon(1e-12));
    }
  }

  SUBCASE("concat mode stacks hidden columns and ignores axis and activation") {
    TpaParams p;
    AttentionMode a{AttendAxis::Position, Activation::Sigmoid, Integration::Concat};
    AttentionMode b{AttendAxis::Filter, Activation::Softmax, Integration::Concat};
    Tensor va = ablation_attend(h, {}, ht, a, p);
    Tensor vb = ablation_attend(h, {}, ht, b, p);
    CHECK(va.shape == Shape{m * w});
    CHECK(va.values == vb.values);
    // column-major stacking: first block is column 0
    for (int i = 0; i < m; ++i) CHECK(va.at(i) == h.at(i, 0));

    // zero integration matrix: h' reduces to W_h h_t
    TpaParams head;
    head.w_h = random_tensor({m, m}, rng);
    head.w_v = Tensor::zeros({m, m * w});
    head.w_hprime = random_tensor({2, m}, rng);
    Tensor y = tpa_output(ht, va, head);
    Tensor want = matmul(head.w_hprime, matmul(head.w_h, ht));
    CHECK(y.values == want.values);
  }
}

TEST_CASE("sigmoid weights stay in (0,1); positive scaling preserves order") {
  Rng rng(5);
  for (int it = 0; it < 40; ++it) {
    int n = 2 + rng.uniform_int(6);
    Tensor scores = random_tensor({n}, rng, -8.0, 8.0);
    Tensor sig = attention_weights(scores, Activation::Sigmoid);
    for (int i = 0; i < n; ++i) {
      CHECK(sig.at(i) > 0.0);
      CHECK(sig.at(i) < 1.0);
    }

    double c = rng.uniform(0.1, 5.0);
    Tensor scaled = scores;
    for (int i = 0; i < n; ++i) scaled.at(i) *= c;
    Tensor sm1 = attention_weights(scores, Activation::Softmax);
    Tensor sm2 = attention_weights(scaled, Activation::Softmax);
    Tensor sg2 = attention_weights(scaled, Activation::Sigmoid);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (sm1.at(i) < sm1.at(j)) {
          CHECK(sm2.at(i) <= sm2.at(j));
          CHECK(sg2.at(i) <= sg2.at(j));
        }
      }
    }
  }
}

TEST_CASE("tpa shape contract") {
  ModelConfig cfg;
  cfg.variant = ModelVariant::Tpa;
  cfg.mode = {AttendAxis::Position, Activation::Sigmoid, Integration::Scored};
  cfg.input_size = cfg.output_size = 5;
  cfg.window = 8;
  cfg.hidden = 4;
  cfg.layers = 1;
  cfg.filters = 6;
  ModelParams p = init_params(cfg, 11);

  Rng rng(9);
  Tensor window = random_tensor({5, 8}, rng);
  ForwardTrace trace = model_forward_trace(p, window);
  CHECK(trace.hidden_history.shape == Shape{4, 8});
  CHECK(trace.conv_features.shape == Shape{4, 6});
  CHECK(trace.context.shape == Shape{6});
  CHECK(trace.prediction.shape == Shape{5});
}

TEST_CASE("model variants forward with expected shapes") {
  Rng rng(21);
  Tensor window = random_tensor({3, 6}, rng);
  for (ModelVariant variant : {ModelVariant::PlainLstm, ModelVariant::Luong, ModelVariant::Tpa}) {
    ModelConfig cfg;
    cfg.variant = variant;
    cfg.input_size = cfg.output_size = 3;
    cfg.window = 6;
    cfg.hidden = 4;
    cfg.layers = 2;
    cfg.filters = 5;
    cfg.ar_window = 2;
    ModelParams p = init_params(cfg, 3);
    Tensor y = model_forward(p, window);
    CHECK(y.shape == Shape{3});
    CHECK(y.all_finite());
  }
}

TEST_CASE("full tpa forward with l1 loss passes grad_check") {
  ModelConfig cfg;
  cfg.variant = ModelVariant::Tpa;
  cfg.mode = {AttendAxis::Position, Activation::Sigmoid, Integration::Scored};
  cfg.input_size = cfg.output_size = 5;
  cfg.window = 8;
  cfg.hidden = 4;
  cfg.layers = 1;
  cfg.filters = 3;
  cfg.ar_window = 2;
  ModelParams base = init_params(cfg, 68);

  Rng rng(69);
  Tensor window = random_tensor({5, 8}, rng);
  Tensor target = random_tensor({5}, rng);

  auto f = [&](const std::vector<Tensor>& flat) {
    ModelParams p = with_params(base, flat);
    Tensor pred = model_forward(p, window);
    return mean(abs(sub(pred, target)));
  };

  GradCheckReport r = grad_check(f, flat_params(base), 1e-6);
  CAPTURE(r.worst_param);
  CAPTURE(r.analytic);
  CAPTURE(r.numeric);
  CHECK(r.max_rel_err <= 1e-4);
}

TEST_CASE("ablation variants are differentiable end to end") {
  Rng rng(55);
  Tensor window = random_tensor({3, 5}, rng);
  Tensor target = random_tensor({3}, rng);

  std::vector<AttentionMode> modes = {
      {AttendAxis::Position, Activation::Softmax, Integration::Scored},
      {AttendAxis::Filter, Activation::Sigmoid, Integration::Scored},
      {AttendAxis::WithoutCnn, Activation::Sigmoid, Integration::Scored},
      {AttendAxis::Position, Activation::Sigmoid, Integration::Concat},
  };
  for (const AttentionMode& mode : modes) {
    CAPTURE(attend_axis_name(mode.axis));
    CAPTURE(integration_name(mode.integration));
    ModelConfig cfg;
    cfg.variant = ModelVariant::Tpa;
    cfg.mode = mode;
    cfg.input_size = cfg.output_size = 3;
    cfg.window = 5;
    cfg.hidden = 3;
    cfg.layers = 1;
    cfg.filters = 2;
    ModelParams base = init_params(cfg, 60);
    auto f = [&](const std::vector<Tensor>& flat) {
      Tensor pred = model_forward(with_params(base, flat), window);
      return mean(abs(sub(pred, target)));
    };
    GradCheckReport r = grad_check(f, flat_params(base), 1e-6);
    CHECK(r.max_rel_err <= 1e-4);
  }
}

TEST_CASE("luong model is differentiable end to end") {
  Rng rng(171);
  Tensor window = random_tensor({3, 5}, rng);
  Tensor target = random_tensor({3}, rng);
  ModelConfig cfg;
  cfg.variant = ModelVariant::Luong;
  cfg.input_size = cfg.output_size = 3;
  cfg.window = 5;
  cfg.hidden = 3;
  cfg.layers = 1;
  ModelParams base = init_params(cfg, 71);
  auto f = [&](const std::vector<Tensor>& flat) {
    Tensor pred = model_forward(with_params(base, flat), window);
    return mean(abs(sub(pred, target)));
  };
  CHECK(grad_check(f, flat_params(base), 1e-6).max_rel_err <= 1e-4);
}

TEST_CASE("filter export carries the filter rows") {
  ModelConfig cfg;
  cfg.variant = ModelVariant::Tpa;
  cfg.input_size = cfg.output_size = 2;
  cfg.window = 4;
  cfg.hidden = 3;
  cfg.layers = 1;
  cfg.filters = 2;
  ModelParams p = init_params(cfg, 5);
  std::string path = "filters_export_test.csv";
  export_filters_csv(p, path);
  ModelParams wo = init_params([&] {
    ModelConfig c = cfg;
    c.mode.axis = AttendAxis::WithoutCnn;
    return c;
  }(), 5);
  CHECK_THROWS(export_filters_csv(wo, path));
  std::remove(path.c_str());
}
