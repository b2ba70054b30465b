#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "hash.hpp"
#include "rng.hpp"
#include "walk.hpp"

using namespace qhfmp;

namespace {

WalkState start_state(int n, double alpha) {
  WalkState state = WalkState::zeroed(n);
  state.amps[4] = std::cos(alpha);
  state.amps[5] = std::sin(alpha);
  return state;
}

double random_open_angle(SplitMix64& rng) {
  // strictly inside (0, pi/2)
  return (0.5 + static_cast<double>(rng.next_below(1000000))) / 1000000.0 *
         (std::numbers::pi / 2.0);
}

BitMessage random_bits(SplitMix64& rng, std::size_t count) {
  BitMessage msg;
  msg.bits.reserve(count);
  for (std::size_t i = 0; i < count; ++i) msg.bits.push_back(rng.next_bit());
  return msg;
}

int nonzero_count_in_column(const DenseMatrix& u, int col) {
  int count = 0;
  for (int row = 0; row < u.dim(); ++row)
    if (std::abs(u.at(row, col)) > 1e-14) ++count;
  return count;
}

// Counting scalar types for the cost instrumentation of step_amplitudes.
struct OpCounters {
  static inline long mults = 0;
  static inline long adds = 0;
  static void reset() { mults = adds = 0; }
};

struct CountedAmp {
  double re = 0.0, im = 0.0;
};

struct CountedCoeff {
  double v = 0.0;
};

CountedAmp operator*(CountedCoeff c, const CountedAmp& a) {
  ++OpCounters::mults;
  return {c.v * a.re, c.v * a.im};
}

CountedAmp operator+(const CountedAmp& x, const CountedAmp& y) {
  ++OpCounters::adds;
  return {x.re + y.re, x.im + y.im};
}

}  // namespace

TEST_CASE("coin matrix entries") {
  const CoinMatrix third = coin_matrix(std::numbers::pi / 3.0);
  CHECK(third.a == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(third.b == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(third.c == third.b);
  CHECK(third.d == doctest::Approx(-0.5).epsilon(1e-12));

  const CoinMatrix quarter = coin_matrix(std::numbers::pi / 4.0);
  CHECK(quarter.a == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(quarter.b == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(quarter.b == quarter.c);
  CHECK(quarter.d == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-12));

  const CoinMatrix degenerate = coin_matrix(0.0);
  CHECK(degenerate.a == 1.0);
  CHECK(degenerate.b == 0.0);
  CHECK(degenerate.c == 0.0);
  CHECK(degenerate.d == -1.0);

  CHECK_THROWS_AS(coin_matrix(std::numeric_limits<double>::quiet_NaN()), Error);
  CHECK_THROWS_AS(coin_matrix(std::numeric_limits<double>::infinity()), Error);
}

TEST_CASE("coin matrix is orthogonal and symmetric for random angles") {
  SplitMix64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const CoinMatrix k = coin_matrix(random_open_angle(rng));
    CHECK(std::abs(k.a * k.b + k.c * k.d) < 1e-12);
    CHECK(std::abs(k.a * k.a + k.c * k.c - 1.0) < 1e-12);
    CHECK(k.b == k.c);
  }
}

TEST_CASE("ifeven counts zeros") {
  const uint8_t two_zeros[] = {0, 0};
  const uint8_t one_zero[] = {1, 0};
  const uint8_t no_zero[] = {1, 1};
  CHECK(ifeven(two_zeros) == 1);
  CHECK(ifeven(one_zero) == 0);
  CHECK(ifeven(no_zero) == 1);
  CHECK_THROWS_AS(ifeven({}), Error);
  const uint8_t bad[] = {2};
  CHECK_THROWS_AS(ifeven(bad), Error);
}

TEST_CASE("direction determine, general rule") {
  {
    const uint8_t dirs[] = {0};
    const DirectionUpdate upd = direction_determine_general(dirs, 0);
    REQUIRE(upd.dirs.size() == 1);
    CHECK(upd.dirs[0] == 1);
    CHECK(upd.coin == 0);
  }
  {
    const uint8_t dirs[] = {1, 0};  // d2 = 1, d1 = 0
    const DirectionUpdate upd = direction_determine_general(dirs, 0);
    REQUIRE(upd.dirs.size() == 2);
    CHECK(upd.dirs[0] == 0);
    CHECK(upd.dirs[1] == 1);
    CHECK(upd.coin == 0);
  }
  {
    const uint8_t dirs[] = {0, 0};
    const DirectionUpdate upd = direction_determine_general(dirs, 1);
    CHECK(upd.dirs[0] == 0);
    CHECK(upd.dirs[1] == 1);
    CHECK(upd.coin == 1);
  }
  const uint8_t dirs[] = {0};
  CHECK_THROWS_AS(direction_determine_general(dirs, 2), Error);
}

TEST_CASE("general rule specializes to the fixed one- and two-step tables") {
  // one-step: |d1, c> -> |c ^ 1 ^ d1, c>
  for (uint8_t d1 = 0; d1 <= 1; ++d1)
    for (uint8_t c = 0; c <= 1; ++c) {
      const uint8_t dirs[] = {d1};
      const DirectionUpdate upd = direction_determine_general(dirs, c);
      CHECK(upd.dirs[0] == (c ^ 1u ^ d1));
      CHECK(upd.coin == c);
    }
  // two-step: |d2, d1, c> -> |d1, c ^ (d1 ^ d2), c>
  for (uint8_t d2 = 0; d2 <= 1; ++d2)
    for (uint8_t d1 = 0; d1 <= 1; ++d1)
      for (uint8_t c = 0; c <= 1; ++c) {
        const uint8_t dirs[] = {d2, d1};
        const DirectionUpdate upd = direction_determine_general(dirs, c);
        CHECK(upd.dirs[0] == d1);
        CHECK(upd.dirs[1] == (c ^ (d1 ^ d2)));
        CHECK(upd.coin == c);
      }
}

TEST_CASE("padded rule keeps leading bits invariant") {
  for (uint8_t d2 = 0; d2 <= 1; ++d2)
    for (uint8_t d1 = 0; d1 <= 1; ++d1)
      for (uint8_t c = 0; c <= 1; ++c) {
        const uint8_t dirs[] = {d2, d1};
        const DirectionUpdate upd = direction_determine_padded(dirs, 1, c);
        CHECK(upd.dirs[0] == d2);
        CHECK(upd.dirs[1] == (c ^ 1u ^ d1));
        CHECK(upd.coin == c);
      }
  const uint8_t dirs[] = {0, 1};
  CHECK_THROWS_AS(direction_determine_padded(dirs, 3, 0), Error);
  CHECK_THROWS_AS(direction_determine_padded(dirs, 0, 0), Error);
}

TEST_CASE("dense one-step operator is unitary") {
  SplitMix64 rng(11);
  for (int n : {3, 5, 7, 9}) {
    for (MemoryLength memory : {MemoryLength::one, MemoryLength::two}) {
      const StepKind kind{memory, random_open_angle(rng)};
      const DenseMatrix u = build_step_unitary(n, kind);
      CHECK(u.multiply(u.adjoint()).max_deviation_from_identity() < 1e-12);
    }
  }
  CHECK_THROWS_AS(build_step_unitary(4, StepKind::mem2(1.0)), Error);
  CHECK_THROWS_AS(build_step_unitary(1, StepKind::mem1(1.0)), Error);
}

TEST_CASE("dense operator column structure") {
  // two-step memory, n = 5, theta = pi/3: the column of |x=0, j=0> holds
  // cos(theta) at |x-1 mod 5 = 4, j=0> and sin(theta) at |x=1, j=3>.
  const DenseMatrix u = build_step_unitary(5, StepKind::mem2(std::numbers::pi / 3.0));
  CHECK(std::abs(u.at(8 * 4 + 0, 0) - Amplitude{0.5}) < 1e-12);
  CHECK(std::abs(u.at(8 * 1 + 3, 0) - Amplitude{std::sqrt(3.0) / 2.0}) < 1e-12);
  CHECK(nonzero_count_in_column(u, 0) == 2);

  // every column of both flavours has exactly two nonzeros whose squared
  // magnitudes sum to one
  for (MemoryLength memory : {MemoryLength::one, MemoryLength::two}) {
    const DenseMatrix v = build_step_unitary(5, StepKind{memory, std::numbers::pi / 4.0});
    for (int col = 0; col < v.dim(); ++col) {
      CHECK(nonzero_count_in_column(v, col) == 2);
      double mag = 0.0;
      for (int row = 0; row < v.dim(); ++row) mag += std::norm(v.at(row, col));
      CHECK(mag == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("single one-step-memory step from the standard start") {
  const int n = 37;
  const WalkState after =
      step(start_state(n, std::numbers::pi / 4.0), StepKind::mem1(std::numbers::pi / 4.0));
  const std::vector<double> probs = probability_distribution(after);
  CHECK(std::abs(probs[1] - 1.0) < 1e-12);
  for (int x = 0; x < n; ++x)
    if (x != 1) CHECK(probs[x] < 1e-12);
  // all weight sits on register j = 6 of node 1
  CHECK(std::abs(after.amps[8 * 1 + 6] - Amplitude{1.0}) < 1e-12);
}

TEST_CASE("single two-step-memory step from the standard start") {
  const int n = 37;
  const WalkState after =
      step(start_state(n, std::numbers::pi / 4.0), StepKind::mem2(std::numbers::pi / 3.0));
  const std::vector<double> probs = probability_distribution(after);
  const double expected_right = 0.5 + std::sqrt(3.0) / 4.0;
  const double expected_left = 0.5 - std::sqrt(3.0) / 4.0;
  CHECK(std::abs(probs[1] - expected_right) < 1e-12);
  CHECK(std::abs(probs[n - 1] - expected_left) < 1e-12);
  for (int x = 2; x < n - 1; ++x) CHECK(probs[x] < 1e-12);
}

TEST_CASE("fused step equals the dense operator") {
  SplitMix64 rng(23);
  for (int n : {3, 5, 7}) {
    for (int trial = 0; trial < 8; ++trial) {
      const StepKind kinds[2] = {StepKind::mem1(random_open_angle(rng)),
                                 StepKind::mem2(random_open_angle(rng))};
      const DenseMatrix dense[2] = {build_step_unitary(n, kinds[0]),
                                    build_step_unitary(n, kinds[1])};
      WalkState fused = start_state(n, std::numbers::pi / 4.0);
      std::vector<Amplitude> reference = fused.amps;
      const BitMessage msg = random_bits(rng, 1 + rng.next_below(20));
      for (uint8_t bit : msg.bits) {
        fused = step(fused, kinds[bit]);
        reference = dense[bit].apply(reference);
      }
      double worst = 0.0;
      for (std::size_t i = 0; i < reference.size(); ++i)
        worst = std::max(worst, std::abs(fused.amps[i] - reference[i]));
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("norm is preserved over long runs") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    const HashParams params{.node_count = 37,
                            .block_bits = 8,
                            .prob_digits = 8,
                            .theta0 = random_open_angle(rng),
                            .theta1 = random_open_angle(rng),
                            .alpha = random_open_angle(rng)};
    const WalkState out = evolve(initial_state(params), random_bits(rng, 2000), params);
    const std::vector<double> probs = probability_distribution(out);
    double total = 0.0;
    for (double p : probs) total += p;
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("probability distribution of the start state") {
  const std::vector<double> probs = probability_distribution(start_state(5, 1.0));
  CHECK(probs[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (int x = 1; x < 5; ++x) CHECK(probs[x] == 0.0);

  const WalkState empty = WalkState::zeroed(5);
  CHECK_THROWS_AS(probability_distribution(empty), Error);
}

TEST_CASE("one step costs 16 multiplications and 8 additions per node") {
  const int n = 37;
  std::vector<CountedAmp> in(static_cast<std::size_t>(8) * n);
  std::vector<CountedAmp> out(in.size());
  for (MemoryLength memory : {MemoryLength::one, MemoryLength::two}) {
    OpCounters::reset();
    step_amplitudes<CountedAmp, CountedCoeff>(memory, in, out, n, CountedCoeff{1.0},
                                              CountedCoeff{0.0}, CountedCoeff{0.0},
                                              CountedCoeff{-1.0});
    CHECK(OpCounters::mults == 16 * n);
    CHECK(OpCounters::adds == 8 * n);
  }
}

TEST_CASE("walk state validation") {
  CHECK_THROWS_AS(WalkState::zeroed(4), Error);
  CHECK_THROWS_AS(WalkState::zeroed(1), Error);

  WalkState bad = start_state(5, 0.5);
  bad.amps.pop_back();
  CHECK_THROWS_AS(bad.validate(), Error);

  WalkState nan_state = start_state(5, 0.5);
  nan_state.amps[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(nan_state.validate(), Error);

  WalkState scaled = start_state(5, 0.5);
  for (Amplitude& a : scaled.amps) a *= 2.0;
  CHECK_THROWS_AS(scaled.validate(), Error);
}
