#pragma once

#include <memory>
#include <vector>

#include "beltrami/common.hpp"

namespace beltrami {

using ComplexGrid = std::vector<cplx>;

struct TransformResult {
  ComplexGrid values;
  /// Set when the input has support inside the outer 25% band of the box.
  bool margin_warning = false;
};

/// Periodic spectral operators on a square grid. Plans are owned per
/// instance; one instance must not be used from two threads at once.
///
/// Multipliers, with xi = kx + i ky:
///   d/dzbar -> (i/2) xi,   d/dz -> (i/2) conj(xi),
///   Beurling -> conj(xi)/xi,   Cauchy -> 2/(i xi),   all 0 at xi = 0.
///
/// `beurling` and `cauchy` additionally remove the leading periodisation
/// defect of the square-lattice kernel, so for compactly supported input they
/// approximate the free-space operators (error O(L^-8) in the box side L).
class SpectralGrid {
 public:
  explicit SpectralGrid(Grid grid);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  const Grid& grid() const { return grid_; }

  TransformResult beurling(const ComplexGrid& field) const;
  TransformResult cauchy(const ComplexGrid& field) const;
  ComplexGrid beurling_periodic(const ComplexGrid& field) const;
  ComplexGrid cauchy_periodic(const ComplexGrid& field) const;
  ComplexGrid dz(const ComplexGrid& field) const;
  ComplexGrid dzbar(const ComplexGrid& field) const;

  /// Forward then inverse FFT (normalised); used to check Parseval.
  ComplexGrid round_trip(const ComplexGrid& field) const;
  /// Sum |f|^2 over the grid divided by the sum over its DFT / N^2.
  double parseval_ratio(const ComplexGrid& field) const;

  bool margin_violated(const ComplexGrid& field) const;

 private:
  ComplexGrid apply_multiplier(const ComplexGrid& field, int which) const;
  cplx xi(int i, int j) const;

  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
};

double l2_norm(const ComplexGrid& f);

/// Eisenstein sum G4 of the Gaussian integer lattice, sum' (m + i n)^-4.
inline constexpr double kSquareLatticeG4 = 3.151212002153897;

}  // namespace beltrami
