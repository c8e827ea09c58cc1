#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "geo/errors.hpp"
#include "geo/rng.hpp"

namespace geo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Element of an ambient product of matrix spaces E = R^{r1xc1} x ... x R^{rmxcm}.
// scale_hint feeds finite-difference step sizing for quantities whose natural
// magnitude differs from O(1).
struct AmbientVector {
  std::vector<MatrixXd> blocks;
  double scale_hint = 1.0;

  AmbientVector() = default;
  explicit AmbientVector(std::vector<MatrixXd> b, double hint = 1.0)
      : blocks(std::move(b)), scale_hint(hint) {}
  // convenience: single-block vector
  explicit AmbientVector(MatrixXd b, double hint = 1.0) : scale_hint(hint) {
    blocks.push_back(std::move(b));
  }

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  const MatrixXd& operator[](int i) const { return blocks[static_cast<size_t>(i)]; }
  MatrixXd& operator[](int i) { return blocks[static_cast<size_t>(i)]; }

  AmbientVector& operator+=(const AmbientVector& o);
  AmbientVector& operator-=(const AmbientVector& o);
  AmbientVector& operator*=(double c);
};

AmbientVector operator+(AmbientVector a, const AmbientVector& b);
AmbientVector operator-(AmbientVector a, const AmbientVector& b);
AmbientVector operator*(double c, AmbientVector a);
AmbientVector operator-(AmbientVector a);

// trace (Frobenius) inner product summed over blocks
double dot(const AmbientVector& a, const AmbientVector& b);
double norm(const AmbientVector& a);
double inf_norm(const AmbientVector& a);
bool is_finite(const AmbientVector& a);
// throws NonFiniteError when a has a NaN/Inf entry
void ensure_finite(const AmbientVector& a, const char* where);

// Shape descriptor for an ambient product space; provides the standard
// orthonormal basis (block entries) and flattening used for dense assembly.
struct AmbientSpace {
  std::vector<std::pair<int, int>> shapes;

  AmbientSpace() = default;
  explicit AmbientSpace(std::vector<std::pair<int, int>> s) : shapes(std::move(s)) {}

  int num_blocks() const { return static_cast<int>(shapes.size()); }
  int dim() const;
  AmbientVector zero() const;
  AmbientVector basis(int i) const;
  AmbientVector from_flat(const VectorXd& v) const;
  VectorXd to_flat(const AmbientVector& a) const;
  AmbientVector random_gaussian(Rng& rng) const;
  bool matches(const AmbientVector& a) const;

  static AmbientSpace product(const AmbientSpace& a, const AmbientSpace& b);
};

// concatenate blocks of two vectors (element of the product space)
AmbientVector concat(const AmbientVector& a, const AmbientVector& b);
// split a product-space vector at the end of subspace `a`
std::pair<AmbientVector, AmbientVector> split(const AmbientVector& v,
                                              const AmbientSpace& a);

// Finite-difference policy. Central differences with step
// h = coeff * max(scale_hint, |q|_inf); one Richardson level (4 D(h/2) - D(h))/3
// when `richardson` is set, with a larger base step since the scheme is O(h^4).
struct DiffConfig {
  double step_coeff = 6.0554544523933395e-06;       // cbrt(machine eps)
  double richardson_step_coeff = 7.4009597974140505e-04;  // eps^(1/5)
  bool richardson = false;
  // when > 0 and an analytic derivative is available, cross-check it against
  // the FD probe and throw AnalyticNumericMismatch past this relative error
  double check_tolerance = 0.0;

  double step(const AmbientVector& q) const {
    double s = std::max(q.scale_hint, inf_norm(q));
    double c = richardson ? richardson_step_coeff : step_coeff;
    return c * std::max(s, 1e-8);
  }
};

using VectorFieldFn = std::function<AmbientVector(const AmbientVector&)>;
using ScalarFieldFn = std::function<double(const AmbientVector&)>;

// D F(q; xi), central differences (optionally Richardson-extrapolated)
AmbientVector directional_derivative(const VectorFieldFn& F, const AmbientVector& q,
                                     const AmbientVector& xi, const DiffConfig& cfg);
double directional_derivative(const ScalarFieldFn& f, const AmbientVector& q,
                              const AmbientVector& xi, const DiffConfig& cfg);

// D^2 F(q; xi1, xi2): FD along xi2 of the xi1-derivative. When
// cfg.check_tolerance > 0, verifies symmetry in (xi1, xi2) and throws
// SymmetryViolation on failure.
AmbientVector second_directional_derivative(const VectorFieldFn& F,
                                            const AmbientVector& q,
                                            const AmbientVector& xi1,
                                            const AmbientVector& xi2,
                                            const DiffConfig& cfg);

// ambient (Euclidean) gradient of a scalar field, assembled over the basis
AmbientVector euclidean_gradient(const ScalarFieldFn& f, const AmbientSpace& space,
                                 const AmbientVector& q, const DiffConfig& cfg);

// Sum_i fn(b_i) b_i over the standard basis of `space`: the vector representing
// the linear functional fn in the trace inner product.
AmbientVector dual_pairing_vector(const AmbientSpace& space,
                                  const std::function<double(const AmbientVector&)>& fn);

// q-dependent linear operator on E given by closures; optional analytic
// pieces. `space` enables dense assembly fallbacks for missing closures.
struct OperatorField {
  AmbientSpace space;
  // v -> Psi(q) v
  std::function<AmbientVector(const AmbientVector& q, const AmbientVector& v)> apply;
  // v -> Psi(q)^T v; assembled from `apply` when absent
  std::function<AmbientVector(const AmbientVector& q, const AmbientVector& v)> adjoint;
  // (q, dq, v) -> Psi'(q; dq) v
  std::function<AmbientVector(const AmbientVector& q, const AmbientVector& dq,
                              const AmbientVector& v)>
      derivative;
  // (q, dq, v) -> Psi'(q; dq)^T v
  std::function<AmbientVector(const AmbientVector& q, const AmbientVector& dq,
                              const AmbientVector& v)>
      derivative_adjoint;
  int rank = -1;            // expected rank of Psi(q) when it is a projector, -1 unknown
  bool self_adjoint = false;

  bool valid() const { return static_cast<bool>(apply); }

  AmbientVector operator()(const AmbientVector& q, const AmbientVector& v) const {
    return apply(q, v);
  }
  // Psi(q)^T v
  AmbientVector adj(const AmbientVector& q, const AmbientVector& v) const;
  // Psi'(q; dq) v, analytic when available (cross-checked per cfg), FD otherwise
  AmbientVector deriv(const AmbientVector& q, const AmbientVector& dq,
                      const AmbientVector& v, const DiffConfig& cfg) const;
  // Psi'(q; dq)^T v; falls back to FD of the adjoint field ((Psi^T)' = (Psi')^T)
  AmbientVector deriv_adj(const AmbientVector& q, const AmbientVector& dq,
                          const AmbientVector& v, const DiffConfig& cfg) const;
  // dense matrix of Psi(q) on flattened coordinates
  MatrixXd matrix(const AmbientVector& q) const;
};

// Pi(q) {X -> Psi'(q; X) e1}^T e2 : the tangent representative of the linear
// functional X -> <e2, Psi'(q; X) e1>, assembled over the basis with the
// direction pre-projected by Pi.
AmbientVector raise_index(const OperatorField& Psi, const AmbientVector& q,
                          const AmbientVector& e1, const AmbientVector& e2,
                          const OperatorField& Pi, const DiffConfig& cfg);

// dense matrix of any linear map on `space` (column i = op(basis(i)))
MatrixXd assemble_matrix(const AmbientSpace& space,
                         const std::function<AmbientVector(const AmbientVector&)>& op);

// identity operator field on `space`
OperatorField identity_field(const AmbientSpace& space);

// operator field defined by a dense matrix factory at each point
OperatorField matrix_field(const AmbientSpace& space,
                           const std::function<MatrixXd(const AmbientVector&)>& factory);

}  // namespace geo
