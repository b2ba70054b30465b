#include "walk.hpp"

#include <cmath>

namespace qhfmp {

CoinMatrix coin_matrix(double theta) {
  if (!std::isfinite(theta)) raise(Errc::invalid_argument, "coin angle must be finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return CoinMatrix{c, s, s, -c};
}

WalkState WalkState::zeroed(int node_count) {
  if (node_count < 3 || node_count % 2 == 0)
    raise(Errc::invalid_argument, "node count must be an odd integer >= 3");
  WalkState state;
  state.node_count = node_count;
  state.amps.assign(static_cast<std::size_t>(kRegisters) * node_count, Amplitude{});
  return state;
}

double WalkState::total_probability() const {
  double sum = 0.0;
  for (const Amplitude& a : amps) sum += std::norm(a);
  return sum;
}

void WalkState::validate() const {
  if (node_count < 3 || node_count % 2 == 0)
    raise(Errc::invalid_argument, "node count must be an odd integer >= 3");
  if (amps.size() != static_cast<std::size_t>(kRegisters) * node_count)
    raise(Errc::invalid_argument, "amplitude buffer must hold 8 entries per node");
  for (const Amplitude& a : amps)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      raise(Errc::numeric, "non-finite amplitude in walk state");
  const double total = total_probability();
  if (std::abs(total - 1.0) > kNormTolerance)
    raise(Errc::numeric, "walk state is not normalized: |psi|^2 = " + std::to_string(total));
}

int ifeven(std::span<const uint8_t> dirs) {
  if (dirs.empty()) raise(Errc::invalid_argument, "ifeven needs at least one direction bit");
  int zeros = 0;
  for (uint8_t d : dirs) {
    if (d > 1) raise(Errc::invalid_argument, "direction bits must be 0 or 1");
    zeros += (d == 0);
  }
  return zeros % 2 == 0 ? 1 : 0;
}

DirectionUpdate direction_determine_general(std::span<const uint8_t> dirs, uint8_t coin) {
  if (coin > 1) raise(Errc::invalid_argument, "coin bit must be 0 or 1");
  const int even = ifeven(dirs);  // also validates dirs
  DirectionUpdate out;
  out.dirs.assign(dirs.begin() + 1, dirs.end());
  out.dirs.push_back(static_cast<uint8_t>(coin ^ 1u ^ static_cast<unsigned>(even)));
  out.coin = coin;
  return out;
}

DirectionUpdate direction_determine_padded(std::span<const uint8_t> dirs, std::size_t memory,
                                           uint8_t coin) {
  if (memory == 0 || memory > dirs.size())
    raise(Errc::invalid_argument, "memory window must lie within the direction register");
  DirectionUpdate inner = direction_determine_general(dirs.subspan(dirs.size() - memory), coin);
  DirectionUpdate out;
  out.dirs.assign(dirs.begin(), dirs.end() - memory);
  out.dirs.insert(out.dirs.end(), inner.dirs.begin(), inner.dirs.end());
  out.coin = coin;
  return out;
}

WalkState step(const WalkState& state, StepKind kind) {
  state.validate();
  const CoinMatrix k = coin_matrix(kind.theta);
  WalkState out;
  out.node_count = state.node_count;
  out.amps.resize(state.amps.size());
  step_amplitudes<Amplitude, double>(kind.memory, state.amps, out.amps, state.node_count, k.a,
                                     k.b, k.c, k.d);
  return out;
}

std::vector<double> probability_distribution(const WalkState& state) {
  state.validate();
  std::vector<double> probs(state.node_count, 0.0);
  for (int x = 0; x < state.node_count; ++x) {
    double p = 0.0;
    for (int j = 0; j < kRegisters; ++j)
      p += std::norm(state.amps[static_cast<std::size_t>(kRegisters) * x + j]);
    probs[x] = p;
  }
  return probs;
}

DenseMatrix DenseMatrix::identity(int dim) {
  DenseMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& rhs) const {
  if (dim_ != rhs.dim_) raise(Errc::invalid_argument, "matrix dimensions differ");
  DenseMatrix out(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int k = 0; k < dim_; ++k) {
      const Amplitude v = at(r, k);
      if (v == Amplitude{}) continue;
      for (int col = 0; col < dim_; ++col) out.at(r, col) += v * rhs.at(k, col);
    }
  return out;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix out(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int col = 0; col < dim_; ++col) out.at(col, r) = std::conj(at(r, col));
  return out;
}

std::vector<Amplitude> DenseMatrix::apply(std::span<const Amplitude> vec) const {
  if (vec.size() != static_cast<std::size_t>(dim_))
    raise(Errc::invalid_argument, "vector length does not match matrix dimension");
  std::vector<Amplitude> out(dim_);
  for (int r = 0; r < dim_; ++r) {
    Amplitude sum{};
    for (int col = 0; col < dim_; ++col) sum += at(r, col) * vec[col];
    out[r] = sum;
  }
  return out;
}

double DenseMatrix::max_deviation_from_identity() const {
  double worst = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int col = 0; col < dim_; ++col) {
      const Amplitude want = r == col ? Amplitude{1.0} : Amplitude{};
      worst = std::max(worst, std::abs(at(r, col) - want));
    }
  return worst;
}

DenseMatrix build_step_unitary(int node_count, StepKind kind) {
  if (node_count < 3 || node_count % 2 == 0)
    raise(Errc::invalid_argument, "node count must be an odd integer >= 3");
  const int n = node_count;
  const int dim = kRegisters * n;
  const CoinMatrix k = coin_matrix(kind.theta);
  const std::size_t memory = kind.memory == MemoryLength::two ? 2 : 1;

  DenseMatrix coin(dim);
  for (int x = 0; x < n; ++x)
    for (int high = 0; high < 4; ++high) {
      const int base = kRegisters * x + 2 * high;
      coin.at(base, base) = k.a;
      coin.at(base, base + 1) = k.b;
      coin.at(base + 1, base) = k.c;
      coin.at(base + 1, base + 1) = k.d;
    }

  DenseMatrix direction(dim);
  for (int x = 0; x < n; ++x)
    for (int j = 0; j < kRegisters; ++j) {
      const uint8_t dirs[2] = {static_cast<uint8_t>((j >> 2) & 1),
                               static_cast<uint8_t>((j >> 1) & 1)};
      const DirectionUpdate upd =
          direction_determine_padded(dirs, memory, static_cast<uint8_t>(j & 1));
      const int target = (upd.dirs[0] << 2) | (upd.dirs[1] << 1) | upd.coin;
      direction.at(kRegisters * x + target, kRegisters * x + j) = 1.0;
    }

  DenseMatrix shift(dim);
  for (int x = 0; x < n; ++x)
    for (int j = 0; j < kRegisters; ++j) {
      const int d1 = (j >> 1) & 1;
      const int target_x = d1 ? (x + 1) % n : (x + n - 1) % n;
      shift.at(kRegisters * target_x + j, kRegisters * x + j) = 1.0;
    }

  return shift.multiply(direction).multiply(coin);
}

}  // namespace qhfmp
