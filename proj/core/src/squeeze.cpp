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

#include "zoll/squeeze.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>
#include <vector>

#include "zoll/parallel.hpp"

namespace zoll {

namespace {

constexpr long kChunk = 1L << 16;

std::mt19937_64 chunk_rng(std::uint64_t seed, long chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

// Uniform point of the unit ball (on_sphere = false) or sphere in R^d.
Vec ball_point(std::mt19937_64& rng, int d, bool on_sphere) {
  std::normal_distribution<double> normal;
  Vec v(d);
  for (int j = 0; j < d; ++j) v[j] = normal(rng);
  v /= v.norm();
  if (on_sphere) return v;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return v * std::pow(unit(rng), 1.0 / d);
}

// Least-squares coordinates in the symplectic basis B: c = (B^T B)^{-1} B^T m.
Mat coordinate_map(const Mat& B) {
  return (B.transpose() * B).ldlt().solve(B.transpose());
}

}  // namespace

double shadow_volume_exact(const LinearSymplectomorphism& Phi, const Subspace2k& V) {
  if (V.n() != Phi.n()) throw DimensionError("shadow: subspace and map differ in n");
  if (wirtinger(V) < 1e-10) throw DegenerateSubspaceError("shadow: V is not symplectic");
  const double w = wirtinger(transform(Phi.inverse(), V));
  if (w < 1e-12) return kUnboundedShadow;
  return std::pow(kPi, V.k()) / w;
}

ShadowReport shadow_volume_mc(const LinearSymplectomorphism& Phi, const Subspace2k& V,
                              long samples, std::uint64_t seed) {
  if (samples < 10000) throw PreconditionError("shadow_volume_mc needs at least 10^4 samples");
  ShadowReport rep;
  rep.method = "linear hit-or-miss";
  rep.sample_count = samples;
  rep.seed = seed;
  rep.exact_volume = shadow_volume_exact(Phi, V);
  const Mat Phinv = Phi.inverse();
  rep.wirtinger_value = wirtinger(transform(Phinv, V));
  const int k = V.k();
  const Mat B = symplectic_basis(V);            // 2n x 2k
  const Mat K = symplectic_complement(V);       // 2n x (2n - 2k)
  // m = B c lies in the shadow iff min_w |Phi^{-1}(B c + K w)| <= 1, i.e.
  // |(I - P_A) Phi^{-1} B c| <= 1 with A = Phi^{-1} K.
  const Mat A = Phinv * K;
  Mat M = Phinv * B;
  if (A.cols() > 0) {
    Eigen::HouseholderQR<Mat> qr(A);
    const Mat Q = qr.householderQ() * Mat::Identity(A.rows(), A.cols());
    M -= Q * (Q.transpose() * M);
  }
  const Mat Qf = M.transpose() * M;
  Eigen::SelfAdjointEigenSolver<Mat> es(Qf);
  if (es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff()) {
    rep.unbounded = true;
    rep.mc_volume = kUnboundedShadow;
    rep.mc_stderr = kUnboundedShadow;
    return rep;
  }
  // Exact bounding box of the ellipsoid {c : c^T Qf c <= 1}.
  const Mat Qinv = Qf.inverse();
  Vec half(2 * k);
  double box = 1.0;
  for (int i = 0; i < 2 * k; ++i) {
    half[i] = std::sqrt(Qinv(i, i));
    box *= 2.0 * half[i];
  }
  const long chunks = (samples + kChunk - 1) / kChunk;
  std::vector<long> hits(chunks, 0);
  parallel_for(static_cast<int>(chunks), [&](int c) {
    std::mt19937_64 rng = chunk_rng(seed, c);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const long count = std::min(kChunk, samples - c * kChunk);
    Vec x(2 * k);
    long h = 0;
    for (long s = 0; s < count; ++s) {
      for (int i = 0; i < 2 * k; ++i) x[i] = half[i] * unit(rng);
      if ((M * x).squaredNorm() <= 1.0) ++h;
    }
    hits[c] = h;
  });
  long total = 0;
  for (long h : hits) total += h;
  const double p = double(total) / double(samples);
  const double scale = factorial(k) * box;
  rep.mc_volume = scale * p;
  rep.mc_stderr = scale * std::sqrt(p * (1.0 - p) / double(samples));
  return rep;
}

ShadowReport shadow_volume_nonlinear_mc(const NonlinearSymplectomorphism& phi,
                                        const Subspace2k& V, long samples,
                                        std::uint64_t seed, int resolution) {
  if (V.n() != phi.n()) throw DimensionError("shadow: subspace and map differ in n");
  if (samples < 10000) throw PreconditionError("shadow_volume_nonlinear_mc needs at least 10^4 samples");
  if (resolution < 2) throw PreconditionError("box counting needs resolution >= 2");
  const int k = V.k();
  const int dim = 2 * k;
  const int d = 2 * V.n();
  ShadowReport rep;
  rep.method = "box counting";
  rep.sample_count = samples;
  rep.seed = seed;
  rep.wirtinger_value = std::numeric_limits<double>::quiet_NaN();
  rep.exact_volume = std::numeric_limits<double>::quiet_NaN();

  const Mat P = symplectic_projector(V);
  const Mat C = coordinate_map(symplectic_basis(V));
  const Mat CP = C * P;
  std::vector<double> coords(static_cast<std::size_t>(samples) * dim);
  const long chunks = (samples + kChunk - 1) / kChunk;
  parallel_for(static_cast<int>(chunks), [&](int c) {
    std::mt19937_64 rng = chunk_rng(seed, c);
    const long begin = c * kChunk;
    const long count = std::min(kChunk, samples - begin);
    for (long s = 0; s < count; ++s) {
      const long idx = begin + s;
      const Vec z = ball_point(rng, d, idx % 2 == 1);
      const Vec w = phi(z);
      if (!w.allFinite() || w.norm() > 1e6) {
        throw PreconditionError("shadow: unbounded image probe");
      }
      const Vec x = CP * w;
      for (int i = 0; i < dim; ++i) coords[idx * dim + i] = x[i];
    }
  });
  Vec lo = Vec::Constant(dim, std::numeric_limits<double>::infinity());
  Vec hi = -lo;
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < dim; ++i) {
      lo[i] = std::min(lo[i], coords[s * dim + i]);
      hi[i] = std::max(hi[i], coords[s * dim + i]);
    }
  }
  Vec width = (hi - lo) * (1.0 + 1e-9) + Vec::Constant(dim, 1e-12);
  auto cell_of = [&](long s) {
    std::uint64_t key = 0;
    for (int i = 0; i < dim; ++i) {
      const long j = std::clamp(
          static_cast<long>((coords[s * dim + i] - lo[i]) / width[i] * resolution), 0L,
          static_cast<long>(resolution - 1));
      key = key * resolution + static_cast<std::uint64_t>(j);
    }
    return key;
  };
  std::unordered_set<std::uint64_t> occupied;
  occupied.reserve(static_cast<std::size_t>(std::min<long>(samples, 1L << 22)));
  for (long s = 0; s < samples; ++s) occupied.insert(cell_of(s));

  long boundary = 0;
  std::vector<long> idx(dim);
  for (std::uint64_t key : occupied) {
    std::uint64_t rest = key;
    for (int i = dim - 1; i >= 0; --i) {
      idx[i] = static_cast<long>(rest % resolution);
      rest /= resolution;
    }
    bool edge = false;
    std::uint64_t stride = 1;
    for (int i = dim - 1; i >= 0 && !edge; --i) {
      if (idx[i] == 0 || idx[i] == resolution - 1 || !occupied.count(key - stride) ||
          !occupied.count(key + stride)) {
        edge = true;
      }
      stride *= resolution;
    }
    if (edge) ++boundary;
  }
  double cell = factorial(k);
  for (int i = 0; i < dim; ++i) cell *= width[i] / resolution;
  rep.mc_volume = cell * double(occupied.size());
  rep.mc_stderr = 0.5 * cell * double(boundary);
  return rep;
}

EqualityReport equality_case_check(const LinearSymplectomorphism& Phi, const Subspace2k& V,
                                   int probes, std::uint64_t seed, double tol) {
  const Mat Phinv = Phi.inverse();
  const Subspace2k W = transform(Phinv, V);
  if (complex_subspace_distance(W) >= 1e-8) {
    throw PreconditionError("equality_case_check: Phi^{-1} V is not a complex subspace");
  }
  EqualityReport rep;
  rep.probes = probes;
  const int k = V.k();
  const int d = 2 * V.n();
  const Mat P = symplectic_projector(V);
  const Mat M = Phi.matrix();
  const Mat Wo = W.orthonormal();
  const Mat PiW = W.orthogonal_projector();
  std::mt19937_64 rng(seed);
  for (int i = 0; i < probes; ++i) {
    // Forward: z in B cap Phi^{-1} V.
    const Vec z = Wo * ball_point(rng, 2 * k, false);
    const Vec pz = M * z;
    rep.forward_error = std::max(rep.forward_error, (P * pz - pz).norm());
    // Reverse: m in the shadow comes from B cap Phi^{-1} V.
    const Vec y = ball_point(rng, d, i % 2 == 1);
    const Vec m = P * (M * y);
    const Vec back = Phinv * m;
    rep.reverse_error = std::max({rep.reverse_error, back.norm() - 1.0,
                                  (back - PiW * back).norm()});
  }
  rep.exact_minus_pik = shadow_volume_exact(Phi, V) - std::pow(kPi, k);
  rep.holds = rep.forward_error <= tol && rep.reverse_error <= tol &&
              std::abs(rep.exact_minus_pik) <= std::max(tol, 1e-9) * std::pow(kPi, k);
  return rep;
}

}  // namespace zoll
