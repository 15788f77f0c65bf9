#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdm {

struct ContractViolation : std::runtime_error {
  explicit ContractViolation(const std::string& what) : std::runtime_error(what) {}
};
struct UnsupportedConfig : std::runtime_error {
  explicit UnsupportedConfig(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateInput : std::runtime_error {
  explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};
struct NumericFailure : std::runtime_error {
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

using Shape = std::vector<int>;

std::size_t numel(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {
struct TensorNode {
  Shape shape;
  std::vector<double> values;
  std::vector<double> grad;  // allocated on first access
  bool requires_grad = false;
};
}  // namespace detail

/// Dense tensor of doubles with an optional gradient buffer. A Tensor is a
/// cheap handle; copies share storage. Ops never mutate their inputs.
/// mutable_values() exists for the optimizer and finite-difference probes.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape);
  static Tensor full(Shape shape, double value);
  static Tensor from(Shape shape, std::vector<double> values);
  static Tensor scalar(double value);  // rank-0
  static Tensor param(Shape shape, std::vector<double> values);

  bool defined() const { return static_cast<bool>(node_); }
  const Shape& shape() const { return node().shape; }
  int rank() const { return static_cast<int>(node().shape.size()); }
  int extent(int axis) const;
  std::size_t size() const { return node().values.size(); }

  const std::vector<double>& values() const { return node().values; }
  std::vector<double>& mutable_values() { return node().values; }
  double item() const;

  bool requires_grad() const { return node().requires_grad; }
  Tensor& set_requires_grad(bool on) {
    node().requires_grad = on;
    return *this;
  }

  /// Gradient, zero-filled if backward never reached this tensor.
  const std::vector<double>& grad() const { return mutable_grad(); }
  std::vector<double>& mutable_grad() const;
  void zero_grad();

  bool same_node(const Tensor& other) const { return node_ == other.node_; }

 private:
  detail::TensorNode& node() const;
  std::shared_ptr<detail::TensorNode> node_;
};

/// Ordered record of executed differentiable operations. Ops append a
/// backward step as they run; backward() replays the steps in exact reverse
/// execution order, accumulating gradients additively.
class Tape {
 public:
  void record(std::function<void()> step) { steps_.push_back(std::move(step)); }
  void replay_reverse();
  void clear() { steps_.clear(); }
  std::size_t size() const { return steps_.size(); }

 private:
  std::vector<std::function<void()>> steps_;
};

/// The tape new operations record onto. One per thread; rebuilt each forward
/// pass (define-by-run).
Tape& active_tape();

/// Swaps a fresh tape in for the current scope and restores the previous one
/// on exit. Keeps throwaway graphs (grad checks, evaluation) from polluting
/// the caller's tape.
class TapeScope {
 public:
  TapeScope();
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;
  Tape& tape() { return local_; }

 private:
  Tape local_;
  Tape* saved_;
};

/// Seeds d(loss)/d(loss) = 1 and replays the active tape backwards. Every
/// requires_grad leaf reachable from loss receives its gradient; unreachable
/// leaves read as zero.
void backward(const Tensor& loss);

/// Central-difference check of the reverse-mode gradient of f at x.
/// Returns max over coordinates of
///   |analytic - (f(x+eps*e_i) - f(x-eps*e_i)) / (2*eps)| / max(1, |analytic|).
/// f must be smooth at x; callers sample away from hinge kinks.
double grad_check(const std::function<Tensor(const Tensor&)>& f, Tensor x,
                  double eps = 1e-5);

/// Deterministic, portable 64-bit generator: splitmix64 for the integer
/// stream, Box-Muller on top for normals. Identical sequences for identical
/// seeds regardless of the standard library.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64+box-muller";

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  std::size_t index(std::size_t n);  // uniform in [0, n)
  double uniform();                  // [0, 1)
  double uniform(double lo, double hi);
  double normal();  // standard normal
  double normal(double mean, double stddev);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Tensor random_uniform(Shape shape, double lo, double hi, Rng& rng,
                      bool requires_grad = false);
Tensor random_normal(Shape shape, double mean, double stddev, Rng& rng,
                     bool requires_grad = false);

}  // namespace pdm
