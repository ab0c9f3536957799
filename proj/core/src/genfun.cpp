// Copyright 2026 The zoll-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zoll/genfun.hpp"

#include <algorithm>
#include <memory>
#include <random>

#include "zoll/quadrature.hpp"

namespace zoll {

namespace {

Vec random_in_ball(std::mt19937_64& rng, int dim, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec v(dim);
  for (int j = 0; j < dim; ++j) v[j] = normal(rng);
  return v * (radius * std::pow(unit(rng), 1.0 / dim) / v.norm());
}

std::vector<Vec> probe_set(const GenfunOptions& opt, int dim, double support) {
  if (!opt.probe_points.empty()) return opt.probe_points;
  std::mt19937_64 rng(opt.probe_seed);
  const double radius = std::min(opt.probe_radius, support);
  std::vector<Vec> pts{Vec::Zero(dim)};
  for (int i = 0; i < opt.probes; ++i) pts.push_back(random_in_ball(rng, dim, radius));
  return pts;
}

// Composite Gauss-Legendre rule on [0, 1].
const GaussRule& segment_rule() {
  static const GaussRule rule = [] {
    const int panels = 4, per = 10;
    GaussRule r{Vec(panels * per), Vec(panels * per)};
    for (int p = 0; p < panels; ++p) {
      const GaussRule g = gauss_legendre(per, double(p) / panels, double(p + 1) / panels);
      r.nodes.segment(p * per, per) = g.nodes;
      r.weights.segment(p * per, per) = g.weights;
    }
    return r;
  }();
  return rule;
}

double line_integral(const std::function<Vec(const Vec&)>& grad, const Vec& a,
                     const Vec& b) {
  const GaussRule& rule = segment_rule();
  const Vec d = b - a;
  double s = 0.0;
  for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
    s += rule.weights[k] * grad(a + rule.nodes[k] * d).dot(d);
  }
  return s;
}

}  // namespace

//---------------------------------------------------------------------------//
// ScalarField2n
//---------------------------------------------------------------------------//

ScalarField2n::ScalarField2n(int n, ValueFn value, GradFn gradient)
    : n_(n), value_(std::move(value)), grad_(std::move(gradient)) {
  if (n < 1) throw PreconditionError("ScalarField2n needs n >= 1");
  if (!value_) throw PreconditionError("ScalarField2n needs a value callback");
}

ScalarField2n ScalarField2n::zero(int n) {
  return ScalarField2n(
      n, [](const Vec&) { return 0.0; }, [](const Vec& z) { return Vec(Vec::Zero(z.size())); });
}

ScalarField2n ScalarField2n::quadratic(int n, double c) {
  return ScalarField2n(
      n, [c](const Vec& z) { return c * z.squaredNorm(); },
      [c](const Vec& z) { return Vec(2.0 * c * z); });
}

ScalarField2n& ScalarField2n::with_support(double radius) {
  support_radius_ = radius;
  return *this;
}

double ScalarField2n::value(const Vec& z) const {
  if (z.size() != 2 * n_) throw DimensionError("ScalarField2n: wrong point size");
  return value_(z);
}

Vec ScalarField2n::gradient(const Vec& z) const {
  if (z.size() != 2 * n_) throw DimensionError("ScalarField2n: wrong point size");
  if (grad_) return grad_(z);
  const double h = fd_step(z);
  Vec g(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    Vec zp = z, zm = z;
    zp[k] += h;
    zm[k] -= h;
    g[k] = (value_(zp) - value_(zm)) / (2.0 * h);
  }
  return g;
}

Mat ScalarField2n::hessian(const Vec& z) const {
  const double h = fd_step(z);
  const int d = static_cast<int>(z.size());
  Mat H(d, d);
  for (int k = 0; k < d; ++k) {
    Vec zp = z, zm = z;
    zp[k] += h;
    zm[k] -= h;
    H.col(k) = (gradient(zp) - gradient(zm)) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

double ScalarField2n::gradient_consistency(int probes, double radius,
                                           std::uint64_t seed) const {
  if (!grad_) return 0.0;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const Vec z = random_in_ball(rng, 2 * n_, radius);
    const double h = fd_step(z);
    const Vec g = grad_(z);
    Vec fd(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      Vec zp = z, zm = z;
      zp[k] += h;
      zm[k] -= h;
      fd[k] = (value_(zp) - value_(zm)) / (2.0 * h);
    }
    worst = std::max(worst, (g - fd).norm() / (1.0 + g.norm()));
  }
  return worst;
}

//---------------------------------------------------------------------------//
// NonlinearSymplectomorphism
//---------------------------------------------------------------------------//

NonlinearSymplectomorphism::NonlinearSymplectomorphism(int n, MapFn map, JacFn jacobian,
                                                       MapFn inverse,
                                                       GenfunProvenance provenance)
    : n_(n), map_(std::move(map)), jac_(std::move(jacobian)),
      inverse_(std::move(inverse)), provenance_(std::move(provenance)) {
  if (!map_) throw PreconditionError("symplectomorphism needs a map callback");
}

NonlinearSymplectomorphism NonlinearSymplectomorphism::from_linear(
    const LinearSymplectomorphism& phi) {
  const Mat M = phi.matrix();
  const Mat Minv = phi.inverse();
  GenfunProvenance p;
  p.kind = "linear";
  return NonlinearSymplectomorphism(
      phi.n(), [M](const Vec& z) { return Vec(M * z); }, [M](const Vec&) { return M; },
      [Minv](const Vec& w) { return Vec(Minv * w); }, p);
}

Vec NonlinearSymplectomorphism::operator()(const Vec& z) const {
  if (z.size() != 2 * n_) throw DimensionError("symplectomorphism: wrong point size");
  return map_(z);
}

Mat NonlinearSymplectomorphism::fd_jacobian(const Vec& z) const {
  // Fourth-order central stencil.
  const double h = 1e-4 * (1.0 + z.norm());
  const int d = static_cast<int>(z.size());
  Mat D(d, d);
  for (int k = 0; k < d; ++k) {
    auto at = [&](double s) {
      Vec p = z;
      p[k] += s * h;
      return (*this)(p);
    };
    D.col(k) = (8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12.0 * h);
  }
  return D;
}

Mat NonlinearSymplectomorphism::jacobian(const Vec& z) const {
  if (jac_) return jac_(z);
  return fd_jacobian(z);
}

Vec NonlinearSymplectomorphism::inverse(const Vec& w) const {
  if (!inverse_) throw PreconditionError("symplectomorphism has no inverse callback");
  return inverse_(w);
}

double symplecticity_residual(const NonlinearSymplectomorphism& phi, const Vec& z,
                              bool finite_difference) {
  const Mat D = finite_difference ? phi.fd_jacobian(z) : phi.jacobian(z);
  const Mat J = J_matrix(phi.n());
  return (D.transpose() * J * D - J).cwiseAbs().maxCoeff();
}

//---------------------------------------------------------------------------//
// Generating functions
//---------------------------------------------------------------------------//

double hessian_bound(const ScalarField2n& S, const GenfunOptions& options) {
  double sup = 0.0;
  for (const Vec& z : probe_set(options, 2 * S.n(), S.support_radius())) {
    const Eigen::SelfAdjointEigenSolver<Mat> es(S.hessian(z), Eigen::EigenvaluesOnly);
    sup = std::max(sup, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return sup;
}

namespace {

// Fixed point of w -> base + sign * J grad S((z + w) / 2).
Vec midpoint_picard(const ScalarField2n& S, const Vec& z, double sign,
                    const GenfunOptions& opt, std::vector<double>* trace) {
  Vec w = z;
  double prev = std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, z.norm());
  for (int it = 0; it < opt.max_iter; ++it) {
    const Vec next = z + sign * apply_J(S.gradient(0.5 * (z + w)));
    const double inc = (next - w).norm();
    if (trace) trace->push_back(inc);
    w = next;
    // The second test stops at the roundoff floor.
    if (inc <= opt.tol * scale || (inc >= prev && inc < 1e-12 * scale)) return w;
    prev = inc;
  }
  throw ConvergenceError("generating function fixed point did not converge");
}

}  // namespace

std::vector<double> genfun_picard_trace(const ScalarField2n& S, const Vec& z,
                                        const GenfunOptions& options) {
  std::vector<double> trace;
  midpoint_picard(S, z, 1.0, options, &trace);
  return trace;
}

NonlinearSymplectomorphism phi_from_genfun(const ScalarField2n& S,
                                           const GenfunOptions& options) {
  const double bound = hessian_bound(S, options);
  if (!(bound < 2.0)) {
    throw PreconditionError("generating function Hessian bound " + std::to_string(bound) +
                            " is not below 2");
  }
  GenfunProvenance prov;
  prov.kind = "generating function";
  prov.tol = options.tol;
  prov.max_iter = options.max_iter;
  prov.hessian_bound = bound;
  prov.support_radius = S.support_radius();
  const int n = S.n();
  // Forward: J(z - w) = grad S(q), i.e. w = z + J grad S(q). Inverse swaps
  // the roles: z = w - J grad S(q).
  auto forward = [S, options](const Vec& z) { return midpoint_picard(S, z, 1.0, options, nullptr); };
  auto inverse = [S, options](const Vec& w) { return midpoint_picard(S, w, -1.0, options, nullptr); };
  auto jac = [S, options, n](const Vec& z) {
    const Vec w = midpoint_picard(S, z, 1.0, options, nullptr);
    const Mat H = S.hessian(0.5 * (z + w));
    const Mat J = J_matrix(n);
    // Differentiating J(z - w) = grad S(q): (J + H/2) Dw = J - H/2.
    return Mat((J + 0.5 * H).partialPivLu().solve(J - 0.5 * H));
  };
  return NonlinearSymplectomorphism(n, forward, jac, inverse, prov);
}

ScalarField2n genfun_from_phi(const NonlinearSymplectomorphism& phi,
                              const Vec& basepoint, const GenfunOptions& options,
                              GenfunAudit* audit) {
  const int n = phi.n();
  const int d = 2 * n;
  if (basepoint.size() != d) throw DimensionError("genfun_from_phi: wrong basepoint size");
  GenfunAudit local;
  const std::vector<Vec> probes = probe_set(options, d, phi.provenance().support_radius);
  for (const Vec& z : probes) {
    const Mat D = phi.jacobian(z) - Mat::Identity(d, d);
    const Eigen::JacobiSVD<Mat> svd(D);
    local.jacobian_bound = std::max(local.jacobian_bound, svd.singularValues()[0]);
  }
  if (!(local.jacobian_bound < 2.0)) {
    throw PreconditionError("genfun_from_phi: sup |D phi - id| is not below 2");
  }

  auto inversion_residual = std::make_shared<double>(0.0);
  const double tol = options.tol;
  const int max_iter = options.max_iter;
  // grad S(q) = J (z - phi(z)) where q = (z + phi(z)) / 2; z solves
  // z = q - (phi(z) - z) / 2, a contraction with ratio sup|D phi - id| / 2.
  auto grad = [phi, tol, max_iter, inversion_residual](const Vec& q) {
    Vec z = q;
    Vec pz = phi(z);
    double prev = std::numeric_limits<double>::infinity();
    const double scale = std::max(1.0, q.norm());
    bool done = false;
    for (int it = 0; it < max_iter; ++it) {
      const Vec next = q - 0.5 * (pz - z);
      const double inc = (next - z).norm();
      z = next;
      pz = phi(z);
      if (inc <= tol * scale || (inc >= prev && inc < 1e-12 * scale)) {
        done = true;
        break;
      }
      prev = inc;
    }
    if (!done) throw ConvergenceError("genfun_from_phi: midpoint inversion did not converge");
    *inversion_residual = std::max(*inversion_residual, (0.5 * (z + pz) - q).norm());
    return Vec(apply_J(z - pz));
  };
  const Vec base = basepoint;
  auto value = [grad, base](const Vec& q) { return line_integral(grad, base, q); };

  std::mt19937_64 rng(options.probe_seed + 1);
  const double radius = std::min(options.probe_radius, phi.provenance().support_radius);
  for (int t = 0; t < 20; ++t) {
    const Vec a = random_in_ball(rng, d, radius);
    const Vec b = random_in_ball(rng, d, radius);
    const Vec c = random_in_ball(rng, d, radius);
    const double loop = line_integral(grad, a, b) + line_integral(grad, b, c) +
                        line_integral(grad, c, a);
    local.loop_residual = std::max(local.loop_residual, std::abs(loop));
  }
  local.inversion_residual = *inversion_residual;
  if (audit) *audit = local;
  if (local.loop_residual > 1e-8) {
    throw PreconditionError("genfun_from_phi: loop integral " +
                            std::to_string(local.loop_residual) +
                            " exceeds 1e-8; the map is not symplectic");
  }
  ScalarField2n S(n, value, grad);
  S.with_support(phi.provenance().support_radius);
  return S;
}

//---------------------------------------------------------------------------//
// Loops
//---------------------------------------------------------------------------//

LoopR2n::LoopR2n(int n, int degree)
    : n_(n), cos_(degree + 1, Vec::Zero(2 * n)), sin_(degree + 1, Vec::Zero(2 * n)) {
  if (n < 1 || degree < 0) throw PreconditionError("LoopR2n: bad n or degree");
}

LoopR2n LoopR2n::gamma0(int n) {
  LoopR2n g(n, 1);
  g.cos_coeff(1)[0] = 1.0;
  g.sin_coeff(1)[1] = 1.0;
  return g;
}

Vec LoopR2n::derivative(double t, int order) const {
  Vec v = order == 0 ? cos_[0] : Vec(Vec::Zero(2 * n_));
  for (int k = 1; k <= degree(); ++k) {
    const double w = 2.0 * kPi * k;
    const double c = std::cos(w * t), s = std::sin(w * t);
    // d^m/dt^m of (A cos + B sin) cycles with period 4 in m.
    const double f = std::pow(w, order);
    switch (order % 4) {
      case 0: v += f * (c * cos_[k] + s * sin_[k]); break;
      case 1: v += f * (-s * cos_[k] + c * sin_[k]); break;
      case 2: v += f * (-c * cos_[k] - s * sin_[k]); break;
      default: v += f * (s * cos_[k] - c * sin_[k]); break;
    }
  }
  return v;
}

double LoopR2n::action() const {
  const int m = 4 * degree() + 4;
  double a = 0.0;
  for (int j = 0; j < m; ++j) {
    const double t = double(j) / m;
    a += 0.5 * apply_J((*this)(t)).dot(derivative(t, 1));
  }
  return a / m;
}

LoopR2n LoopR2n::scaled(double c) const {
  LoopR2n out = *this;
  for (int k = 0; k <= degree(); ++k) {
    out.cos_[k] *= c;
    out.sin_[k] *= c;
  }
  return out;
}

double c2_distance(const LoopR2n& a, const LoopR2n& b) {
  double worst = 0.0;
  for (int j = 0; j < 1024; ++j) {
    const double t = j / 1024.0;
    for (int order = 0; order <= 2; ++order) {
      worst = std::max(worst, (a.derivative(t, order) - b.derivative(t, order)).norm());
    }
  }
  return worst;
}

//---------------------------------------------------------------------------//
// Straightening
//---------------------------------------------------------------------------//

namespace {

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double bump_derivative(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

// Data of the straightening construction: gamma1 = (gamma + gamma0) / 2,
// the action primitive s(t) and the coordinates (r, t, w) with
// p = r gamma1(t) + (0, w).
struct Straightener {
  LoopR2n gamma;
  LoopR2n gamma0;
  Cutoffs cut;
  int n;
  // s(t) = sum_m (A_m sin(2 pi m t) + B_m (1 - cos(2 pi m t))) / (2 pi m).
  std::vector<double> sA, sB;
  // Unwrapped arg P1 gamma1 on a uniform table.
  std::vector<double> arg_table;

  Straightener(const LoopR2n& g, const Cutoffs& c)
      : gamma(g), gamma0(LoopR2n::gamma0(g.n())), cut(c), n(g.n()) {}

  Vec g1(double t, int order) const {
    return 0.5 * (gamma.derivative(t, order) + gamma0.derivative(t, order));
  }
  Vec diff(double t, int order) const {
    return gamma.derivative(t, order) - gamma0.derivative(t, order);
  }
  double s(double t) const {
    double v = 0.0;
    for (std::size_t m = 1; m < sA.size(); ++m) {
      const double w = 2.0 * kPi * m;
      v += (sA[m] * std::sin(w * t) + sB[m] * (1.0 - std::cos(w * t))) / w;
    }
    return v;
  }
  double s_prime(double t) const { return apply_J(diff(t, 0)).dot(g1(t, 1)); }

  void build() {
    const int K = std::max(gamma.degree(), 1);
    const int M = 8 * K + 8;
    sA.assign(2 * K + 1, 0.0);
    sB.assign(2 * K + 1, 0.0);
    double mean = 0.0;
    for (int j = 0; j < M; ++j) {
      const double t = double(j) / M;
      const double v = s_prime(t);
      mean += v / M;
      for (int m = 1; m <= 2 * K; ++m) {
        sA[m] += 2.0 * v * std::cos(2.0 * kPi * m * t) / M;
        sB[m] += 2.0 * v * std::sin(2.0 * kPi * m * t) / M;
      }
    }
    if (std::abs(mean) > 1e-9) {
      throw PreconditionError("straighten_curve: the action primitive does not close up");
    }
    const int T = 1024;
    arg_table.resize(T + 1);
    double prev = 0.0;
    for (int j = 0; j <= T; ++j) {
      const Vec p = g1(double(j) / T, 0);
      double a = std::atan2(p[1], p[0]);
      if (j > 0) {
        while (a - prev > kPi) a -= 2.0 * kPi;
        while (a - prev < -kPi) a += 2.0 * kPi;
        if (a <= prev) {
          throw PreconditionError(
              "straighten_curve: first coordinate of the mean curve is not transverse to rays");
        }
      }
      arg_table[j] = a;
      prev = a;
    }
    if (std::abs(arg_table[T] - arg_table[0] - 2.0 * kPi) > 1e-6) {
      throw PreconditionError("straighten_curve: mean curve does not wind once around 0");
    }
  }

  double chi1(double r) const {
    return smoothstep((r - cut.support_lo) / (cut.plateau_lo - cut.support_lo)) *
           smoothstep((cut.support_hi - r) / (cut.support_hi - cut.plateau_hi));
  }
  double chi1_prime(double r) const {
    const double a = 1.0 / (cut.plateau_lo - cut.support_lo);
    const double b = 1.0 / (cut.support_hi - cut.plateau_hi);
    const double x = (r - cut.support_lo) * a, y = (cut.support_hi - r) * b;
    return a * smoothstep_derivative(x) * smoothstep(y) -
           b * smoothstep(x) * smoothstep_derivative(y);
  }
  double chi2(double rho) const {
    return smoothstep((cut.w_support - rho) / (cut.w_support - cut.w_plateau));
  }
  double chi2_prime(double rho) const {
    const double a = 1.0 / (cut.w_support - cut.w_plateau);
    return -a * smoothstep_derivative((cut.w_support - rho) * a);
  }

  // (r, t, w) with p = r gamma1(t) + (0, w); false when P1 p = 0.
  bool invert(const Vec& p, double* r, double* t, Vec* w) const {
    const double rho = std::hypot(p[0], p[1]);
    if (rho < 1e-300) return false;
    const int T = static_cast<int>(arg_table.size()) - 1;
    double alpha = std::atan2(p[1], p[0]);
    while (alpha < arg_table[0]) alpha += 2.0 * kPi;
    while (alpha >= arg_table[0] + 2.0 * kPi) alpha -= 2.0 * kPi;
    const int j = static_cast<int>(
        std::upper_bound(arg_table.begin(), arg_table.end(), alpha) - arg_table.begin()) - 1;
    const int jj = std::clamp(j, 0, T - 1);
    double tt = (jj + (alpha - arg_table[jj]) / (arg_table[jj + 1] - arg_table[jj])) / T;
    const Complex target = std::polar(1.0, -alpha);
    for (int it = 0; it < 30; ++it) {
      const Vec q = g1(tt, 0), dq = g1(tt, 1);
      const Complex c(q[0], q[1]), dc(dq[0], dq[1]);
      const double F = std::arg(c * target);
      const double dF = (dc / c).imag();
      const double step = F / dF;
      tt -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const Vec q = g1(tt, 0);
    *t = tt;
    *r = rho / std::hypot(q[0], q[1]);
    *w = p.tail(2 * n - 2) - (*r) * q.tail(2 * n - 2);
    return true;
  }

  bool in_support(double r, const Vec& w) const {
    return r > cut.support_lo && r < cut.support_hi && w.norm() < cut.w_support;
  }

  double value(const Vec& p) const {
    double r, t;
    Vec w;
    if (!invert(p, &r, &t, &w) || !in_support(r, w)) return 0.0;
    const Vec dv = diff(t, 0);
    const Vec idv = apply_J(dv);
    const double a = idv.dot(g1(t, 0));
    const double sigma = s(t) + (r - 1.0) * a + idv.tail(2 * n - 2).dot(w);
    return chi1(r) * chi2(w.norm()) * sigma;
  }

  Vec gradient(const Vec& p) const {
    double r, t;
    Vec w;
    if (!invert(p, &r, &t, &w) || !in_support(r, w)) return Vec::Zero(2 * n);
    const Vec q = g1(t, 0), dq = g1(t, 1);
    const Vec idv = apply_J(diff(t, 0));
    const Vec didv = apply_J(diff(t, 1));
    const double a = idv.dot(q);
    const double da = didv.dot(q) + idv.dot(dq);
    const Vec b = idv.tail(2 * n - 2);
    const Vec db = didv.tail(2 * n - 2);
    const double sigma = s(t) + (r - 1.0) * a + b.dot(w);
    const double wn = w.norm();
    const double c1 = chi1(r), c2 = chi2(wn);
    Vec grad_rtw(2 * n);
    grad_rtw[0] = chi1_prime(r) * c2 * sigma + c1 * c2 * a;
    grad_rtw[1] = c1 * c2 * (s_prime(t) + (r - 1.0) * da + db.dot(w));
    Vec gw = c1 * c2 * b;
    if (wn > 0.0) gw += c1 * chi2_prime(wn) * sigma * (w / wn);
    grad_rtw.tail(2 * n - 2) = gw;
    // grad S = D psi^{-T} grad_(r,t,w) G.
    Mat Dpsi = Mat::Zero(2 * n, 2 * n);
    Dpsi.col(0) = q;
    Dpsi.col(1) = r * dq;
    Dpsi.bottomRightCorner(2 * n - 2, 2 * n - 2).setIdentity();
    return Dpsi.transpose().partialPivLu().solve(grad_rtw);
  }

  double support_radius() const {
    double m = 0.0;
    for (int j = 0; j < 256; ++j) m = std::max(m, g1(j / 256.0, 0).norm());
    return cut.support_hi * m + cut.w_support;
  }

  std::vector<Vec> support_probes(int count, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(cut.support_lo, cut.support_hi);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    std::vector<Vec> pts;
    for (int i = 0; i < count; ++i) {
      const double r = ur(rng), t = ut(rng);
      Vec p = r * g1(t, 0);
      if (n > 1) p.tail(2 * n - 2) += random_in_ball(rng, 2 * n - 2, cut.w_support);
      pts.push_back(p);
    }
    return pts;
  }
};

}  // namespace

double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = bump(x), b = bump(1.0 - x);
  return a / (a + b);
}

double smoothstep_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = bump(x), b = bump(1.0 - x);
  const double da = bump_derivative(x), db = -bump_derivative(1.0 - x);
  return (da * b - a * db) / ((a + b) * (a + b));
}

ScalarField2n straightening_genfun(const LoopR2n& gamma, const Cutoffs& cutoffs) {
  if (std::abs(gamma.action() - kPi) > 1e-9) {
    throw PreconditionError("straighten_curve: action of the loop differs from pi");
  }
  if (gamma.n() < 2) throw PreconditionError("straighten_curve: needs n >= 2");
  auto st = std::make_shared<Straightener>(gamma, cutoffs);
  st->build();
  ScalarField2n S(
      gamma.n(), [st](const Vec& p) { return st->value(p); },
      [st](const Vec& p) { return st->gradient(p); });
  S.with_support(st->support_radius());
  return S;
}

NonlinearSymplectomorphism straighten_curve(const LoopR2n& gamma, const Cutoffs& cutoffs,
                                            const GenfunOptions& options) {
  const ScalarField2n S = straightening_genfun(gamma, cutoffs);
  GenfunOptions opt = options;
  if (opt.probe_points.empty()) {
    Straightener st(gamma, cutoffs);
    st.build();
    opt.probe_points = st.support_probes(std::max(opt.probes, 400), opt.probe_seed);
    // Points on and near the mean curve, where the gradient is prescribed.
    for (int j = 0; j < 64; ++j) opt.probe_points.push_back(st.g1(j / 64.0, 0));
  }
  return phi_from_genfun(S, opt);
}

}  // namespace zoll
