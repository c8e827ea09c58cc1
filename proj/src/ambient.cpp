#include "geo/ambient.hpp"

#include <cmath>

namespace geo {

static void check_same_layout(const AmbientVector& a, const AmbientVector& b) {
  if (a.blocks.size() != b.blocks.size()) throw SpecInvalid("block count mismatch");
}

AmbientVector& AmbientVector::operator+=(const AmbientVector& o) {
  check_same_layout(*this, o);
  for (size_t i = 0; i < blocks.size(); ++i) blocks[i] += o.blocks[i];
  scale_hint = std::max(scale_hint, o.scale_hint);
  return *this;
}

AmbientVector& AmbientVector::operator-=(const AmbientVector& o) {
  check_same_layout(*this, o);
  for (size_t i = 0; i < blocks.size(); ++i) blocks[i] -= o.blocks[i];
  scale_hint = std::max(scale_hint, o.scale_hint);
  return *this;
}

AmbientVector& AmbientVector::operator*=(double c) {
  for (auto& b : blocks) b *= c;
  return *this;
}

AmbientVector operator+(AmbientVector a, const AmbientVector& b) { return a += b; }
AmbientVector operator-(AmbientVector a, const AmbientVector& b) { return a -= b; }
AmbientVector operator*(double c, AmbientVector a) { return a *= c; }
AmbientVector operator-(AmbientVector a) { return a *= -1.0; }

double dot(const AmbientVector& a, const AmbientVector& b) {
  check_same_layout(a, b);
  double s = 0.0;
  for (size_t i = 0; i < a.blocks.size(); ++i)
    s += a.blocks[i].cwiseProduct(b.blocks[i]).sum();
  return s;
}

double norm(const AmbientVector& a) { return std::sqrt(dot(a, a)); }

double inf_norm(const AmbientVector& a) {
  double m = 0.0;
  for (const auto& b : a.blocks)
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

bool is_finite(const AmbientVector& a) {
  for (const auto& b : a.blocks)
    if (!b.allFinite()) return false;
  return true;
}

void ensure_finite(const AmbientVector& a, const char* where) {
  if (!is_finite(a)) throw NonFiniteError(std::string("non-finite value in ") + where);
}

int AmbientSpace::dim() const {
  int d = 0;
  for (auto& s : shapes) d += s.first * s.second;
  return d;
}

AmbientVector AmbientSpace::zero() const {
  AmbientVector v;
  v.blocks.reserve(shapes.size());
  for (auto& s : shapes) v.blocks.emplace_back(MatrixXd::Zero(s.first, s.second));
  return v;
}

AmbientVector AmbientSpace::basis(int i) const {
  AmbientVector v = zero();
  int off = 0;
  for (size_t b = 0; b < shapes.size(); ++b) {
    int n = shapes[b].first * shapes[b].second;
    if (i < off + n) {
      int local = i - off;
      // column-major within a block, matching Eigen's default layout
      v.blocks[b](local % shapes[b].first, local / shapes[b].first) = 1.0;
      return v;
    }
    off += n;
  }
  throw SpecInvalid("basis index out of range");
}

AmbientVector AmbientSpace::from_flat(const VectorXd& v) const {
  if (v.size() != dim()) throw SpecInvalid("flat vector size mismatch");
  AmbientVector a = zero();
  int off = 0;
  for (size_t b = 0; b < shapes.size(); ++b) {
    int r = shapes[b].first, c = shapes[b].second;
    a.blocks[b] = Eigen::Map<const MatrixXd>(v.data() + off, r, c);
    off += r * c;
  }
  return a;
}

VectorXd AmbientSpace::to_flat(const AmbientVector& a) const {
  VectorXd v(dim());
  int off = 0;
  for (size_t b = 0; b < a.blocks.size(); ++b) {
    int n = static_cast<int>(a.blocks[b].size());
    v.segment(off, n) = Eigen::Map<const VectorXd>(a.blocks[b].data(), n);
    off += n;
  }
  return v;
}

AmbientVector AmbientSpace::random_gaussian(Rng& rng) const {
  AmbientVector a = zero();
  for (auto& b : a.blocks)
    for (int j = 0; j < b.cols(); ++j)
      for (int i = 0; i < b.rows(); ++i) b(i, j) = rng.gaussian();
  return a;
}

bool AmbientSpace::matches(const AmbientVector& a) const {
  if (a.num_blocks() != num_blocks()) return false;
  for (int i = 0; i < num_blocks(); ++i)
    if (a[i].rows() != shapes[size_t(i)].first || a[i].cols() != shapes[size_t(i)].second)
      return false;
  return true;
}

AmbientSpace AmbientSpace::product(const AmbientSpace& a, const AmbientSpace& b) {
  AmbientSpace p = a;
  p.shapes.insert(p.shapes.end(), b.shapes.begin(), b.shapes.end());
  return p;
}

AmbientVector concat(const AmbientVector& a, const AmbientVector& b) {
  AmbientVector v = a;
  v.blocks.insert(v.blocks.end(), b.blocks.begin(), b.blocks.end());
  v.scale_hint = std::max(a.scale_hint, b.scale_hint);
  return v;
}

std::pair<AmbientVector, AmbientVector> split(const AmbientVector& v,
                                              const AmbientSpace& a) {
  size_t na = a.shapes.size();
  if (v.blocks.size() < na) throw SpecInvalid("split: vector too short");
  AmbientVector x, y;
  x.blocks.assign(v.blocks.begin(), v.blocks.begin() + static_cast<long>(na));
  y.blocks.assign(v.blocks.begin() + static_cast<long>(na), v.blocks.end());
  x.scale_hint = y.scale_hint = v.scale_hint;
  return {x, y};
}

// --- finite differences ----------------------------------------------------

namespace {

AmbientVector central_diff(const VectorFieldFn& F, const AmbientVector& q,
                           const AmbientVector& u, double h) {
  AmbientVector qp = q, qm = q;
  qp += h * u;
  qm += (-h) * u;
  AmbientVector d = F(qp) - F(qm);
  d *= 1.0 / (2.0 * h);
  return d;
}

double central_diff(const ScalarFieldFn& f, const AmbientVector& q,
                    const AmbientVector& u, double h) {
  AmbientVector qp = q, qm = q;
  qp += h * u;
  qm += (-h) * u;
  return (f(qp) - f(qm)) / (2.0 * h);
}

}  // namespace

AmbientVector directional_derivative(const VectorFieldFn& F, const AmbientVector& q,
                                     const AmbientVector& xi, const DiffConfig& cfg) {
  double s = norm(xi);
  if (s == 0.0) {
    AmbientVector z = F(q);
    z *= 0.0;
    return z;
  }
  AmbientVector u = (1.0 / s) * xi;
  double h = cfg.step(q);
  AmbientVector d;
  if (cfg.richardson) {
    AmbientVector dh = central_diff(F, q, u, h);
    AmbientVector dh2 = central_diff(F, q, u, h / 2.0);
    d = (4.0 / 3.0) * dh2 - (1.0 / 3.0) * dh;
  } else {
    d = central_diff(F, q, u, h);
  }
  d *= s;
  ensure_finite(d, "directional_derivative");
  return d;
}

double directional_derivative(const ScalarFieldFn& f, const AmbientVector& q,
                              const AmbientVector& xi, const DiffConfig& cfg) {
  double s = norm(xi);
  if (s == 0.0) return 0.0;
  AmbientVector u = (1.0 / s) * xi;
  double h = cfg.step(q);
  double d;
  if (cfg.richardson) {
    double dh = central_diff(f, q, u, h);
    double dh2 = central_diff(f, q, u, h / 2.0);
    d = (4.0 * dh2 - dh) / 3.0;
  } else {
    d = central_diff(f, q, u, h);
  }
  d *= s;
  if (!std::isfinite(d)) throw NonFiniteError("non-finite scalar derivative");
  return d;
}

AmbientVector second_directional_derivative(const VectorFieldFn& F,
                                            const AmbientVector& q,
                                            const AmbientVector& xi1,
                                            const AmbientVector& xi2,
                                            const DiffConfig& cfg) {
  // the outer step differences a field that already carries inner-FD noise of
  // order eps^(2/3); balancing noise/h + h^2 puts the outer step near eps^(2/9)
  DiffConfig outer = cfg;
  outer.step_coeff = std::max(cfg.step_coeff, 3.5e-4);
  auto inner = [&](const AmbientVector& x) {
    return directional_derivative(F, x, xi1, cfg);
  };
  AmbientVector d12 = directional_derivative(VectorFieldFn(inner), q, xi2, outer);
  if (cfg.check_tolerance > 0.0) {
    auto inner21 = [&](const AmbientVector& x) {
      return directional_derivative(F, x, xi2, cfg);
    };
    AmbientVector d21 = directional_derivative(VectorFieldFn(inner21), q, xi1, outer);
    double scale = std::max({norm(d12), norm(d21), 1.0});
    if (norm(d12 - d21) > cfg.check_tolerance * scale)
      throw SymmetryViolation("second derivative asymmetry beyond tolerance");
  }
  return d12;
}

AmbientVector euclidean_gradient(const ScalarFieldFn& f, const AmbientSpace& space,
                                 const AmbientVector& q, const DiffConfig& cfg) {
  AmbientVector g = space.zero();
  int n = space.dim();
  VectorXd flat(n);
  for (int i = 0; i < n; ++i)
    flat[i] = directional_derivative(f, q, space.basis(i), cfg);
  return space.from_flat(flat);
}

AmbientVector dual_pairing_vector(const AmbientSpace& space,
                                  const std::function<double(const AmbientVector&)>& fn) {
  int n = space.dim();
  VectorXd flat(n);
  for (int i = 0; i < n; ++i) flat[i] = fn(space.basis(i));
  return space.from_flat(flat);
}

// --- OperatorField ----------------------------------------------------------

AmbientVector OperatorField::adj(const AmbientVector& q, const AmbientVector& v) const {
  if (self_adjoint) return apply(q, v);
  if (adjoint) return adjoint(q, v);
  // dense fallback: transpose of the assembled matrix
  MatrixXd m = matrix(q);
  return space.from_flat(m.transpose() * space.to_flat(v));
}

AmbientVector OperatorField::deriv(const AmbientVector& q, const AmbientVector& dq,
                                   const AmbientVector& v, const DiffConfig& cfg) const {
  auto fd = [&]() {
    auto field = [&](const AmbientVector& x) { return apply(x, v); };
    return directional_derivative(VectorFieldFn(field), q, dq, cfg);
  };
  if (derivative) {
    AmbientVector a = derivative(q, dq, v);
    if (cfg.check_tolerance > 0.0) {
      AmbientVector f = fd();
      double scale = std::max({norm(a), norm(f), 1.0});
      double res = norm(a - f);
      if (res > cfg.check_tolerance * scale)
        throw AnalyticNumericMismatch("operator derivative", norm(a), norm(f), res);
    }
    return a;
  }
  return fd();
}

AmbientVector OperatorField::deriv_adj(const AmbientVector& q, const AmbientVector& dq,
                                       const AmbientVector& v,
                                       const DiffConfig& cfg) const {
  auto fd = [&]() {
    // (Psi^T)'(q; dq) = (Psi'(q; dq))^T, so differentiate the adjoint field
    auto field = [&](const AmbientVector& x) { return adj(x, v); };
    return directional_derivative(VectorFieldFn(field), q, dq, cfg);
  };
  if (derivative_adjoint) {
    AmbientVector a = derivative_adjoint(q, dq, v);
    if (cfg.check_tolerance > 0.0) {
      AmbientVector f = fd();
      double scale = std::max({norm(a), norm(f), 1.0});
      double res = norm(a - f);
      if (res > cfg.check_tolerance * scale)
        throw AnalyticNumericMismatch("operator derivative adjoint", norm(a), norm(f), res);
    }
    return a;
  }
  if (self_adjoint && derivative) return derivative(q, dq, v);
  return fd();
}

MatrixXd OperatorField::matrix(const AmbientVector& q) const {
  return assemble_matrix(space,
                         [&](const AmbientVector& b) { return apply(q, b); });
}

AmbientVector raise_index(const OperatorField& Psi, const AmbientVector& q,
                          const AmbientVector& e1, const AmbientVector& e2,
                          const OperatorField& Pi, const DiffConfig& cfg) {
  AmbientVector w = dual_pairing_vector(Psi.space, [&](const AmbientVector& b) {
    return dot(e2, Psi.deriv(q, Pi.apply(q, b), e1, cfg));
  });
  w = Pi.apply(q, w);
  ensure_finite(w, "raise_index");
  return w;
}

MatrixXd assemble_matrix(const AmbientSpace& space,
                         const std::function<AmbientVector(const AmbientVector&)>& op) {
  int n = space.dim();
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) m.col(i) = space.to_flat(op(space.basis(i)));
  return m;
}

OperatorField identity_field(const AmbientSpace& space) {
  OperatorField f;
  f.space = space;
  f.apply = [](const AmbientVector&, const AmbientVector& v) { return v; };
  f.adjoint = f.apply;
  f.derivative = [](const AmbientVector&, const AmbientVector&, const AmbientVector& v) {
    AmbientVector z = v;
    z *= 0.0;
    return z;
  };
  f.derivative_adjoint = f.derivative;
  f.self_adjoint = true;
  return f;
}

OperatorField matrix_field(const AmbientSpace& space,
                           const std::function<MatrixXd(const AmbientVector&)>& factory) {
  OperatorField f;
  f.space = space;
  f.apply = [space, factory](const AmbientVector& q, const AmbientVector& v) {
    return space.from_flat(factory(q) * space.to_flat(v));
  };
  f.adjoint = [space, factory](const AmbientVector& q, const AmbientVector& v) {
    return space.from_flat(factory(q).transpose() * space.to_flat(v));
  };
  return f;
}

}  // namespace geo
