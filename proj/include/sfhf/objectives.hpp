#pragma once
//
// Benchmark objectives with exact gradients and Hessian-vector products.
//
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfhf/operator.hpp"
#include "sfhf/vector.hpp"

namespace sfhf {

/// f, grad f and H(theta)v for one problem. Immutable after construction;
/// all queries are pure and may be called concurrently.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dim() const = 0;
  virtual std::string_view name() const = 0;
  virtual double eval(const Vector& theta) const = 0;
  virtual Vector grad(const Vector& theta) const = 0;
  /// out = H(theta) v.
  virtual void hvp(const Vector& theta, const Vector& v, Vector& out) const = 0;

  Vector hvp(const Vector& theta, const Vector& v) const;

 protected:
  void check_point(const Vector& theta, const char* what) const;
};

using ObjectivePtr = std::shared_ptr<const Objective>;

/// f(theta) = 1/2 theta'H theta - b'theta with H = U diag(eigenvalues) U'.
struct QuadraticSpec {
  Vector eigenvalues;
  /// Seeds a random orthogonal U; nullopt means U = I.
  std::optional<std::uint64_t> rotation_seed;
  /// b; empty means zero.
  Vector linear_term;
};

ObjectivePtr make_quadratic(const QuadraticSpec& spec);

/// f(theta) = 1/2 theta'H theta - b'theta with H = diag(d) + sigma u u'.
/// O(m) per query; used for the large-m scaling checks.
ObjectivePtr make_diag_rank_one(const Vector& diag, const Vector& u, double sigma,
                                const Vector& linear_term);

/// Chained Rosenbrock: sum over pairs of 100(y - x^2)^2 + (1 - x)^2.
ObjectivePtr make_rosenbrock(std::size_t dim);

struct Sample {
  std::vector<double> input;
  std::vector<double> target;
};

/// Fully-connected network, tanh on hidden layers, identity output, mean
/// squared error over samples and outputs.
///
/// Parameter layout (layer-major): for each layer l, the weight matrix W_l
/// (rows = units of layer l, row-major) followed by the bias b_l.
struct MlpSpec {
  std::vector<std::size_t> layer_sizes;
  std::vector<Sample> dataset;
};

ObjectivePtr make_mlp(const MlpSpec& spec);

/// The 4-point XOR dataset with inputs in {0,1}^2 and scalar targets.
std::vector<Sample> xor_dataset();

/// Total parameter count of an MLP with these layer sizes.
std::size_t mlp_parameter_count(const std::vector<std::size_t>& layer_sizes);

/// apply(v) = obj.hvp(theta, v) with theta copied at call time.
SymmetricOperator as_hessian_operator(ObjectivePtr obj, const Vector& theta);

}  // namespace sfhf
