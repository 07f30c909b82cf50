#pragma once

#include <optional>
#include <vector>

#include "beltrami/common.hpp"
#include "beltrami/field.hpp"
#include "beltrami/transforms.hpp"

namespace beltrami {

struct JacobianReport {
  double min = 0.0;
  double median = 0.0;
  std::size_t negative_cells = 0;  ///< cells with J <= 0
  std::size_t fold_cells = 0;      ///< image quadrilaterals with non-positive signed area
  std::size_t cells = 0;
  double positive_fraction = 1.0;
};

struct ResidualReport {
  double residual = 0.0;           ///< L2 norm of f_zbar - mu f_z (area measure)
  double relative = 0.0;           ///< residual / L2 norm of f_z
  double median_mu_error = 0.0;    ///< median |f_zbar/f_z - mu| where 0 < |mu| <= 0.9
  JacobianReport jacobian;
};

/// Grid solution of the Beltrami equation.
struct QcMap {
  MuField mu;
  ComplexGrid w;
  int iterations = 0;
  bool converged = false;
  double truncation = 0.0;
  /// Largest observed ratio of successive iteration increments.
  double contraction = 0.0;
  std::vector<double> increments;
  bool margin_warning = false;
  ResidualReport report;

  const Grid& grid() const { return mu.grid; }
  /// Bilinear interpolation of F.
  cplx operator()(cplx z) const { return bilinear(grid(), w, z); }
  /// Solves F(z) = target for z; nullopt when no cell contains the target.
  std::optional<cplx> inverse(cplx target, std::optional<cplx> guess = std::nullopt) const;
};

struct SolverOptions {
  double tol = 1e-10;
  double truncation = 0.0;
  int max_iter = 200;
};

/// Principal solution F = z + C(omega), omega = mu S(omega) + mu.
QcMap principal_solution(const MuField& mu, const SolverOptions& options = {});

/// Central-difference residual and Jacobian diagnostics of a sampled map.
/// Cells counted are those where all four neighbours lie on the grid and, when
/// `interior` is set, those it accepts.
ResidualReport beltrami_residual(const Grid& grid, const ComplexGrid& w, const ComplexGrid& mu,
                                 const std::function<bool(cplx)>& interior = {});

void update_residual(QcMap& map);

}  // namespace beltrami
