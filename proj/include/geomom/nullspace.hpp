#pragma once

// Constant-potential solve: the wedge condition is linear in V, so each of
// the four constant generators contributes one column of a real matrix whose
// nullspace is the admissible potential space.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geomom/quantize.hpp"

namespace geomom {

inline constexpr int kWedgeMaxOrder = 2;
inline constexpr std::uint64_t kSecondSampleMix = 0x9e3779b97f4a7c15ULL;
inline constexpr int kResampleAttempts = 3;
inline constexpr double kStabilityAngle = 1e-6;

struct ConstraintMap {
  Eigen::MatrixXd matrix;        // rows: point x component x multi-index x Pauli x (re, im)
  double hamiltonian_residual = 0.0;
  std::size_t points = 0;
};

/// Linear part of the wedge condition for the potential G: the H-independent
/// terms eps_ijk (n_j [p_k, G] - [p_j, G] n_k).
inline std::array<OpVec, 4> generator_wedges(const SurfaceGeometry& g, DerivativeCache& cache) {
  const OpVec p = covariant_momentum(g);
  std::array<OpVec, 4> w;
  for (int k = 0; k < 4; ++k) w[k] = wedge_operator(g, p, DiffOp::multiplication(VGAnsatz::generator(k).matrix()), cache);
  return w;
}

inline ConstraintMap vg_constraint_map(const SurfaceGeometry& g, const std::vector<ParamPoint>& points) {
  DerivativeCache cache;
  const auto w = generator_wedges(g, cache);
  const OpVec wh = wedge_operator(g, covariant_momentum(g), dirac_hamiltonian(g), cache);

  std::vector<MultiIndex> idx;
  for (int o = 0; o <= kWedgeMaxOrder; ++o)
    for (int du = o; du >= 0; --du) idx.push_back({du, o - du});

  ConstraintMap map;
  map.points = points.size();
  const Eigen::Index rows = static_cast<Eigen::Index>(points.size() * 3 * idx.size() * 4 * 2);
  map.matrix = Eigen::MatrixXd::Zero(rows, 4);
  Eigen::Index row = 0;
  for (const auto& pt : points) {
    Evaluator ev(pt, g.constants);
    for (int comp = 0; comp < 3; ++comp) {
      map.hamiltonian_residual = std::max(map.hamiltonian_residual, coefficient_max_norm(wh[comp], ev));
      for (const auto& mi : idx) {
        for (int col = 0; col < 4; ++col) {
          const CMat* c = w[col][comp].coefficient(mi);
          if (!c) continue;
          const auto v = evaluate_coeffs(*c, ev);
          for (int q = 0; q < 4; ++q) {
            map.matrix(row + 2 * q, col) = v[q].real();
            map.matrix(row + 2 * q + 1, col) = v[q].imag();
          }
        }
        row += 8;
      }
    }
  }
  return map;
}

struct NullspaceResult {
  std::vector<double> singular_values;
  std::vector<Eigen::Vector4d> basis;
};

/// Projects e_0..e_3 onto the span of `null` and orthonormalises in order,
/// so coordinate-aligned spaces come out as coordinate vectors.
inline std::vector<Eigen::Vector4d> canonical_basis(const Eigen::MatrixXd& null) {
  std::vector<Eigen::Vector4d> out;
  if (null.cols() == 0) return out;
  const Eigen::Matrix4d proj = null * null.transpose();
  for (int k = 0; k < 4 && static_cast<Eigen::Index>(out.size()) < null.cols(); ++k) {
    Eigen::Vector4d v = proj.col(k);
    for (const auto& b : out) v -= b.dot(v) * b;
    if (v.norm() < 1e-6) continue;
    v.normalize();
    for (const auto& b : out) v -= b.dot(v) * b;  // second pass for orthogonality
    out.push_back(v.normalized());
  }
  for (auto& b : out)
    for (int k = 0; k < 4; ++k)
      if (std::abs(b[k]) < 1e-15) b[k] = 0.0;
  return out;
}

/// Right-singular vectors with sigma < tol * sigma_max (every vector when the
/// matrix vanishes).
inline NullspaceResult vg_nullspace(const Eigen::MatrixXd& m, double tol = kNullspaceTolerance) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  NullspaceResult r;
  const auto& s = svd.singularValues();
  for (Eigen::Index k = 0; k < s.size(); ++k) r.singular_values.push_back(s[k]);
  while (r.singular_values.size() < 4) r.singular_values.push_back(0.0);
  const double smax = r.singular_values.front();
  std::vector<int> cols;
  for (int k = 0; k < 4; ++k)
    if (smax == 0.0 || r.singular_values[k] < tol * smax) cols.push_back(k);
  Eigen::MatrixXd null(4, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) null.col(static_cast<Eigen::Index>(k)) = svd.matrixV().col(cols[k]);
  r.basis = canonical_basis(null);
  return r;
}

/// Largest principal angle between two subspaces; pi/2 if dimensions differ.
inline double principal_angle(const std::vector<Eigen::Vector4d>& a, const std::vector<Eigen::Vector4d>& b) {
  if (a.size() != b.size()) return std::acos(0.0);
  if (a.empty()) return 0.0;
  Eigen::MatrixXd qa(4, a.size()), qb(4, b.size());
  for (std::size_t k = 0; k < a.size(); ++k) qa.col(k) = a[k];
  for (std::size_t k = 0; k < b.size(); ++k) qb.col(k) = b[k];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(qa.transpose() * qb);
  const double c = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  return std::acos(c);
}

/// "span{I, sigma_z}" style description of a basis.
inline std::string describe_span(const std::vector<Eigen::Vector4d>& basis) {
  std::string out = "span{";
  for (std::size_t b = 0; b < basis.size(); ++b) {
    if (b) out += ", ";
    std::string term;
    for (int k = 0; k < 4; ++k) {
      const double c = basis[b][k];
      if (std::abs(c) < 1e-9) continue;
      if (!term.empty()) term += c < 0 ? " - " : " + ";
      else if (c < 0) term += "-";
      if (std::abs(std::abs(c) - 1.0) > 1e-9) term += detail::format_real(std::abs(c)) + "*";
      term += pauli_label(k);
    }
    out += term;
  }
  return out + "}";
}

/// Solves on one seeded sample, re-solves on a disjoint sample and compares
/// the two spaces; an unstable pair triggers a fresh pair of samples.
inline NullspaceReport vg_nullspace_solve(const SurfaceGeometry& g, const SampleSpec& s = {},
                                          double tol = kNullspaceTolerance) {
  NullspaceReport rep;
  rep.surface = g.spec.name;
  rep.convention = g.config.convention.to_string();
  rep.seed = s.seed;
  rep.points = s.count;
  rep.tolerance = tol;

  std::uint64_t seed = s.seed;
  for (int attempt = 0; attempt < kResampleAttempts; ++attempt) {
    const ConstraintMap first = vg_constraint_map(g, sample_points(g.spec.domain, s.count, seed));
    const ConstraintMap second = vg_constraint_map(g, sample_points(g.spec.domain, s.count, seed ^ kSecondSampleMix));
    const NullspaceResult a = vg_nullspace(first.matrix, tol);
    const NullspaceResult b = vg_nullspace(second.matrix, tol);

    rep.rows = static_cast<std::size_t>(first.matrix.rows());
    rep.cols = static_cast<std::size_t>(first.matrix.cols());
    rep.singular_values = a.singular_values;
    rep.dimension = a.basis.size();
    rep.basis.clear();
    rep.max_basis_residual = 0.0;
    for (const auto& v : a.basis) {
      rep.basis.push_back({v[0], v[1], v[2], v[3]});
      rep.max_basis_residual = std::max(rep.max_basis_residual, (first.matrix * v).cwiseAbs().maxCoeff());
    }
    rep.hamiltonian_residual = std::max(first.hamiltonian_residual, second.hamiltonian_residual);
    rep.stability_angle = principal_angle(a.basis, b.basis);
    rep.stable = rep.stability_angle < kStabilityAngle;
    rep.span = describe_span(a.basis);
    if (rep.stable) break;
    rep.warnings.push_back("nullspace differs between disjoint samples (seed " + std::to_string(seed) +
                           "), resampling");
    seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  }
  if (!rep.stable) rep.warnings.push_back("nullspace unstable after resampling");
  return rep;
}

}  // namespace geomom
