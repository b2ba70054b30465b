#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"

namespace qhfmp {

using Amplitude = std::complex<double>;

// Internal register index: j = 4*d2 + 2*d1 + c, where d1 and d2 record the
// last two movement directions (0 = left, 1 = right) and c is the coin bit.
inline constexpr int kRegisters = 8;

// States evolved by this module stay normalized far tighter than this; the
// gate only rejects clearly broken inputs.
inline constexpr double kNormTolerance = 1e-9;

// Symmetric 2x2 coin ((cos t, sin t), (sin t, -cos t)), entries row-major.
struct CoinMatrix {
  double a, b, c, d;
};

// Accepts any finite angle; range policy lives with the hash parameters.
CoinMatrix coin_matrix(double theta);

enum class MemoryLength { one = 1, two = 2 };

// One controlled-walk step flavour: which direction rule runs, and its coin angle.
struct StepKind {
  MemoryLength memory;
  double theta;

  static StepKind mem1(double theta) { return {MemoryLength::one, theta}; }
  static StepKind mem2(double theta) { return {MemoryLength::two, theta}; }
};

// Walker state on a cycle: 8n amplitudes laid out as amps[8*x + j].
struct WalkState {
  int node_count = 0;
  std::vector<Amplitude> amps;

  static WalkState zeroed(int node_count);

  double total_probability() const;

  // Throws when the layout is wrong, an amplitude is non-finite, or the
  // state is not normalized.
  void validate() const;
};

// 1 iff the number of zeros in dirs is even. dirs holds d_m..d_1, oldest first.
int ifeven(std::span<const uint8_t> dirs);

struct DirectionUpdate {
  std::vector<uint8_t> dirs;
  uint8_t coin = 0;
};

// Direction-determine mapping on |d_m..d_1, c>: the memory shifts one slot,
// the new most-recent direction is c ^ 1 ^ ifeven(d_m..d_1), coin unchanged.
DirectionUpdate direction_determine_general(std::span<const uint8_t> dirs, uint8_t coin);

// Same rule restricted to the trailing `memory` direction bits; leading
// (redundant) bits pass through unchanged so walks with shorter memory can
// run in the full register space.
DirectionUpdate direction_determine_padded(std::span<const uint8_t> dirs, std::size_t memory,
                                           uint8_t coin);

// Gather-form single-step update of all 8n amplitudes; `out` must not alias
// `in`. Every output slot reads two inputs from a neighbouring node, so one
// step costs exactly 16 coefficient-amplitude multiplications and 8 additions
// per node. The two-step-memory rows are the closed form of
// shift . direction . coin in this register layout; the one-step rows are
// derived the same way with the oldest direction bit held fixed and are
// pinned against the dense operator by tests. Evaluation order is fixed
// (ascending x, ascending j) so digests are reproducible on one platform.
template <class Amp, class Coeff>
void step_amplitudes(MemoryLength memory, std::span<const Amp> in, std::span<Amp> out,
                     int node_count, Coeff a, Coeff b, Coeff c, Coeff d) {
  const int n = node_count;
  if (memory == MemoryLength::two) {
    for (int x = 0; x < n; ++x) {
      const Amp* r = &in[static_cast<std::size_t>(kRegisters) * (x + 1 == n ? 0 : x + 1)];
      const Amp* l = &in[static_cast<std::size_t>(kRegisters) * (x == 0 ? n - 1 : x - 1)];
      Amp* o = &out[static_cast<std::size_t>(kRegisters) * x];
      o[0] = a * r[0] + b * r[1];
      o[1] = c * r[4] + d * r[5];
      o[2] = a * l[4] + b * l[5];
      o[3] = c * l[0] + d * l[1];
      o[4] = a * r[6] + b * r[7];
      o[5] = c * r[2] + d * r[3];
      o[6] = a * l[2] + b * l[3];
      o[7] = c * l[6] + d * l[7];
    }
  } else {
    for (int x = 0; x < n; ++x) {
      const Amp* r = &in[static_cast<std::size_t>(kRegisters) * (x + 1 == n ? 0 : x + 1)];
      const Amp* l = &in[static_cast<std::size_t>(kRegisters) * (x == 0 ? n - 1 : x - 1)];
      Amp* o = &out[static_cast<std::size_t>(kRegisters) * x];
      o[0] = a * r[2] + b * r[3];
      o[1] = c * r[0] + d * r[1];
      o[2] = a * l[0] + b * l[1];
      o[3] = c * l[2] + d * l[3];
      o[4] = a * r[6] + b * r[7];
      o[5] = c * r[4] + d * r[5];
      o[6] = a * l[4] + b * l[5];
      o[7] = c * l[6] + d * l[7];
    }
  }
}

WalkState step(const WalkState& state, StepKind kind);

// p_x = sum_j |A^{x,j}|^2 for each node.
std::vector<double> probability_distribution(const WalkState& state);

// Dense complex matrix, row-major; oracle-scale only.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(int dim)
      : dim_(dim), entries_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {}

  int dim() const { return dim_; }

  Amplitude& at(int row, int col) {
    return entries_[static_cast<std::size_t>(row) * dim_ + col];
  }
  const Amplitude& at(int row, int col) const {
    return entries_[static_cast<std::size_t>(row) * dim_ + col];
  }

  static DenseMatrix identity(int dim);

  DenseMatrix multiply(const DenseMatrix& rhs) const;
  DenseMatrix adjoint() const;
  std::vector<Amplitude> apply(std::span<const Amplitude> vec) const;

  // max |entry - delta_rc|; zero for the identity.
  double max_deviation_from_identity() const;

 private:
  int dim_ = 0;
  std::vector<Amplitude> entries_;
};

// Explicit one-step operator shift . (I x direction) . (I x coin), built from
// the generic mapping functions above. This is the reference the fused
// step_amplitudes kernel is validated against.
DenseMatrix build_step_unitary(int node_count, StepKind kind);

}  // namespace qhfmp
