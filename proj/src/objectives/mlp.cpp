// MLP objective with an exact Hessian-vector product.
//
// hvp propagates directional derivatives R{.} = d/dr (.)(theta + r v) at r=0
// through an ordinary forward/backward pass: the forward pass carries
// (a, R a) and (h, R h) per layer, the backward pass carries (delta, R delta).
// R{grad} is then H v. Cost is a small constant times one gradient; no
// m x m matrix is formed.
#include <cmath>
#include <string>
#include <vector>

#include "sfhf/errors.hpp"
#include "sfhf/objectives.hpp"

namespace sfhf {
namespace {

struct LayerShape {
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t weight_offset = 0;  // W is out x in, row-major
  std::size_t bias_offset = 0;
};

class Mlp final : public Objective {
 public:
  explicit Mlp(const MlpSpec& spec) : dataset_(spec.dataset) {
    const auto& sizes = spec.layer_sizes;
    if (sizes.size() < 2) throw DimensionError("make_mlp: need at least input and output layers");
    for (std::size_t s : sizes)
      if (s == 0) throw DimensionError("make_mlp: layer sizes must be positive");
    if (dataset_.empty()) throw DimensionError("make_mlp: empty dataset");
    for (const Sample& s : dataset_) {
      if (s.input.size() != sizes.front())
        throw DimensionError("make_mlp: sample input has " + std::to_string(s.input.size()) +
                             " entries, first layer has " + std::to_string(sizes.front()));
      if (s.target.size() != sizes.back())
        throw DimensionError("make_mlp: sample target has " + std::to_string(s.target.size()) +
                             " entries, last layer has " + std::to_string(sizes.back()));
    }
    std::size_t offset = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
      LayerShape shape{sizes[l - 1], sizes[l], offset, offset + sizes[l] * sizes[l - 1]};
      offset = shape.bias_offset + shape.out;
      layers_.push_back(shape);
    }
    dim_ = offset;
    loss_scale_ = 1.0 / static_cast<double>(dataset_.size() * sizes.back());
  }

  std::size_t dim() const override { return dim_; }
  std::string_view name() const override { return "mlp"; }

  double eval(const Vector& theta) const override {
    check_point(theta, "eval");
    double loss = 0.0;
    for (const Sample& s : dataset_) {
      Activations act = forward(theta, nullptr, s);
      const std::vector<double>& y = act.h.back();
      for (std::size_t j = 0; j < y.size(); ++j) {
        const double e = y[j] - s.target[j];
        loss += e * e;
      }
    }
    loss *= loss_scale_;
    if (!std::isfinite(loss)) throw NonFiniteError("mlp::eval: non-finite loss");
    return loss;
  }

  Vector grad(const Vector& theta) const override {
    check_point(theta, "grad");
    Vector g(dim_);
    for (const Sample& s : dataset_) backward(theta, nullptr, s, g, nullptr);
    require_finite(g, "mlp::grad");
    return g;
  }

  void hvp(const Vector& theta, const Vector& v, Vector& out) const override {
    check_point(theta, "hvp");
    check_point(v, "hvp");
    out.fill(0.0);
    Vector g(dim_);
    for (const Sample& s : dataset_) backward(theta, &v, s, g, &out);
    require_finite(out, "mlp::hvp");
  }

 private:
  // Per-layer values for one sample. Index 0 is the input layer.
  struct Activations {
    std::vector<std::vector<double>> h, rh;  // outputs and their R{}
    std::vector<std::vector<double>> ra;     // R{pre-activation}
  };

  bool is_output(std::size_t layer) const { return layer + 1 == layers_.size(); }

  // With v == nullptr only the plain forward pass is done.
  Activations forward(const Vector& theta, const Vector* v, const Sample& s) const {
    Activations act;
    act.h.push_back(s.input);
    act.rh.emplace_back(s.input.size(), 0.0);
    act.ra.emplace_back(s.input.size(), 0.0);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const LayerShape& L = layers_[l];
      const std::vector<double>& hin = act.h.back();
      const std::vector<double>& rhin = act.rh.back();
      std::vector<double> a(L.out), ra(L.out, 0.0);
      for (std::size_t i = 0; i < L.out; ++i) {
        const std::size_t row = L.weight_offset + i * L.in;
        double sum = theta[L.bias_offset + i];
        for (std::size_t j = 0; j < L.in; ++j) sum += theta[row + j] * hin[j];
        a[i] = sum;
        if (v) {
          double rsum = (*v)[L.bias_offset + i];
          for (std::size_t j = 0; j < L.in; ++j)
            rsum += (*v)[row + j] * hin[j] + theta[row + j] * rhin[j];
          ra[i] = rsum;
        }
      }
      std::vector<double> h(L.out), rh(L.out);
      for (std::size_t i = 0; i < L.out; ++i) {
        if (is_output(l)) {
          h[i] = a[i];
          rh[i] = ra[i];
        } else {
          h[i] = std::tanh(a[i]);
          rh[i] = (1.0 - h[i] * h[i]) * ra[i];
        }
      }
      act.h.push_back(std::move(h));
      act.rh.push_back(std::move(rh));
      act.ra.push_back(std::move(ra));
    }
    return act;
  }

  // Accumulates this sample's gradient into g and, when v is given, its
  // Hessian-vector product into hv.
  void backward(const Vector& theta, const Vector* v, const Sample& s, Vector& g,
                Vector* hv) const {
    const Activations act = forward(theta, v, s);
    const std::vector<double>& y = act.h.back();
    const std::vector<double>& ry = act.rh.back();

    std::vector<double> delta(y.size()), rdelta(y.size(), 0.0);
    for (std::size_t j = 0; j < y.size(); ++j) {
      delta[j] = 2.0 * loss_scale_ * (y[j] - s.target[j]);
      if (v) rdelta[j] = 2.0 * loss_scale_ * ry[j];
    }

    for (std::size_t l = layers_.size(); l-- > 0;) {
      const LayerShape& L = layers_[l];
      const std::vector<double>& hin = act.h[l];
      const std::vector<double>& rhin = act.rh[l];
      for (std::size_t i = 0; i < L.out; ++i) {
        const std::size_t row = L.weight_offset + i * L.in;
        for (std::size_t j = 0; j < L.in; ++j) {
          g[row + j] += delta[i] * hin[j];
          if (hv) (*hv)[row + j] += rdelta[i] * hin[j] + delta[i] * rhin[j];
        }
        g[L.bias_offset + i] += delta[i];
        if (hv) (*hv)[L.bias_offset + i] += rdelta[i];
      }
      if (l == 0) break;

      // Back through W (and V for the R pass), then through tanh.
      std::vector<double> e(L.in, 0.0), re(L.in, 0.0);
      for (std::size_t i = 0; i < L.out; ++i) {
        const std::size_t row = L.weight_offset + i * L.in;
        for (std::size_t j = 0; j < L.in; ++j) {
          e[j] += theta[row + j] * delta[i];
          if (v) re[j] += (*v)[row + j] * delta[i] + theta[row + j] * rdelta[i];
        }
      }
      const std::vector<double>& ra = act.ra[l];
      std::vector<double> next(L.in), rnext(L.in, 0.0);
      for (std::size_t j = 0; j < L.in; ++j) {
        const double h = hin[j];
        const double d1 = 1.0 - h * h;    // tanh'
        const double d2 = -2.0 * h * d1;  // tanh''
        next[j] = d1 * e[j];
        if (v) rnext[j] = d2 * ra[j] * e[j] + d1 * re[j];
      }
      delta = std::move(next);
      rdelta = std::move(rnext);
    }
  }

  std::vector<Sample> dataset_;
  std::vector<LayerShape> layers_;
  std::size_t dim_ = 0;
  double loss_scale_ = 1.0;
};

}  // namespace

std::size_t mlp_parameter_count(const std::vector<std::size_t>& layer_sizes) {
  std::size_t n = 0;
  for (std::size_t l = 1; l < layer_sizes.size(); ++l)
    n += layer_sizes[l] * layer_sizes[l - 1] + layer_sizes[l];
  return n;
}

std::vector<Sample> xor_dataset() {
  return {{{0.0, 0.0}, {0.0}}, {{0.0, 1.0}, {1.0}}, {{1.0, 0.0}, {1.0}}, {{1.0, 1.0}, {0.0}}};
}

ObjectivePtr make_mlp(const MlpSpec& spec) { return std::make_shared<Mlp>(spec); }

}  // namespace sfhf
