#include <cmath>
#include <set>
#include <vector>

#include "catch_amalgamated.hpp"
#include "vacuous/random.hpp"

using Catch::Matchers::WithinAbs;
using vacuous::CounterStream;
using vacuous::Philox4x32;

TEST_CASE("Philox4x32-10 known-answer vectors", "[random]") {
  using C = Philox4x32::counter_type;
  using K = Philox4x32::key_type;
  CHECK(Philox4x32::apply(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::apply(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::apply(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are deterministic and distinct", "[random]") {
  CounterStream a(42, 3);
  CounterStream b(42, 3);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u32() == b.next_u32());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t stream = 0; stream < 1000; ++stream) firsts.insert(CounterStream(42, stream).next_u64());
  for (std::uint64_t seed = 1; seed < 1000; ++seed) firsts.insert(CounterStream(seed, 0).next_u64());
  // (42, 0) appears in both loops
  CHECK(firsts.size() == 1998);
}

TEST_CASE("uniform draws stay inside (0, 1) with the right moments", "[random][property]") {
  CounterStream stream(7, 0);
  constexpr int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = stream.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / n;
  CHECK_THAT(mean, WithinAbs(0.5, 4.0 * std::sqrt(1.0 / 12.0 / n)));
  CHECK_THAT(sum_sq / n - mean * mean, WithinAbs(1.0 / 12.0, 0.002));
}

TEST_CASE("normal and chi-squared draws have the right moments", "[random][property]") {
  CounterStream stream(8, 1);
  constexpr int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  double chi_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = stream.normal();
    sum += z;
    sum_sq += z * z;
    chi_sum += stream.chi_squared(5);
  }
  CHECK_THAT(sum / n, WithinAbs(0.0, 4.0 / std::sqrt(n)));
  CHECK_THAT(sum_sq / n, WithinAbs(1.0, 4.0 * std::sqrt(2.0 / n)));
  CHECK_THAT(chi_sum / n, WithinAbs(5.0, 4.0 * std::sqrt(10.0 / n)));
}
