#include <catch2/catch_amalgamated.hpp>

#include "hds/engine.hpp"
#include "hds/hard_instance.hpp"
#include "hds/rng.hpp"
#include "hds/verify.hpp"

using namespace hds;

namespace {

SymbolString random_string(Rng& rng, AlphabetSpec alphabet, std::size_t len) {
  std::vector<std::uint32_t> syms(len);
  for (auto& s : syms) s = rng.symbol(alphabet.size());
  return SymbolString(alphabet, std::move(syms));
}

}  // namespace

TEST_CASE("fresh engine holds an all-zero window") {
  CellStore store(64);
  StreamEngine engine(SymbolString(make_alphabet(4), {1, 2}),
                      BackendKind::naive, store);
  CHECK(engine.window_snapshot() == std::vector<std::uint32_t>{0, 0});
  CHECK(engine.clock() == 0);
}

TEST_CASE("empty fixed string is rejected") {
  CellStore store(64);
  CHECK_THROWS_AS(
      StreamEngine(SymbolString(make_alphabet(4), {}), BackendKind::naive, store),
      std::invalid_argument);
}

TEST_CASE("arrive outputs hand-checked distances") {
  CellStore store(64);
  StreamEngine engine(SymbolString(make_alphabet(4), {1, 2}),
                      BackendKind::naive, store);
  CHECK(engine.arrive(1) == 2);  // window [0,1] vs [1,2]
  CHECK(engine.arrive(2) == 0);  // window [1,2]
}

TEST_CASE("out-of-range symbols are rejected without touching state") {
  CellStore store(64);
  StreamEngine engine(SymbolString(make_alphabet(2), {1, 2}),
                      BackendKind::naive, store);
  CHECK(engine.arrive(1) == 2);
  CHECK_THROWS_AS(engine.arrive(4), std::invalid_argument);
  CHECK(engine.clock() == 1);
  CHECK(engine.arrive(2) == 0);
}

TEST_CASE("run_sequence basics") {
  const SymbolString fixed(make_alphabet(4), {3, 1, 4, 1});

  SECTION("feeding the fixed string itself ends at distance zero") {
    CellStore store(64);
    StreamEngine engine(fixed, BackendKind::naive, store);
    const CountArray d = engine.run_sequence(fixed);
    CHECK(d.back() == 0);
  }

  SECTION("a symbol absent from the fixed string keeps the distance at n") {
    CellStore store(64);
    StreamEngine engine(fixed, BackendKind::naive, store);
    const SymbolString updates(make_alphabet(4),
                               std::vector<std::uint32_t>(16, 9));
    for (std::uint32_t d : engine.run_sequence(updates)) CHECK(d == 4);
  }

  SECTION("run_sequence requires a fresh engine") {
    CellStore store(64);
    StreamEngine engine(fixed, BackendKind::naive, store);
    engine.arrive(1);
    CHECK_THROWS_AS(engine.run_sequence(fixed), std::invalid_argument);
  }
}

TEST_CASE("naive outputs equal the definitional oracle at n = 1024") {
  Rng rng(21);
  const AlphabetSpec alphabet = make_alphabet(8);
  const SymbolString fixed = random_string(rng, alphabet, 1024);
  const SymbolString updates = random_string(rng, alphabet, 4096);
  CellStore store(64);
  StreamEngine engine(fixed, BackendKind::naive, store);
  CHECK(engine.run_sequence(updates) ==
        oracle::stream_distances(fixed, updates));
}

TEST_CASE("backends agree on random inputs") {
  Rng rng(22);
  for (int trial = 0; trial < 8; ++trial) {
    const AlphabetSpec alphabet =
        make_alphabet(2 + static_cast<std::uint32_t>(rng.below(7)));
    const std::size_t n = 1 + rng.below(300);  // exercises padding too
    const SymbolString fixed = random_string(rng, alphabet, n);
    const SymbolString updates = random_string(rng, alphabet, 2 * n);
    CellStore s1(64), s2(64), s3(64);
    StreamEngine naive(fixed, BackendKind::naive, s1);
    StreamEngine conv(fixed, BackendKind::blackbox, s2);
    StreamEngine scan(fixed, BackendKind::blackbox, s3,
                      OfflineAlgo::window_scan);
    const CountArray expected = naive.run_sequence(updates);
    CHECK(conv.run_sequence(updates) == expected);
    CHECK(scan.run_sequence(updates) == expected);
    CHECK(expected == oracle::stream_distances(fixed, updates));
  }
}

TEST_CASE("blackbox equals naive at n = 2") {
  const SymbolString fixed(make_alphabet(3), {5, 2});
  const SymbolString updates(make_alphabet(3), {1, 5, 2, 2, 5, 0, 7, 2});
  CellStore s1(64), s2(64);
  StreamEngine naive(fixed, BackendKind::naive, s1);
  StreamEngine blackbox(fixed, BackendKind::blackbox, s2);
  CHECK(naive.run_sequence(updates) == blackbox.run_sequence(updates));
}

TEST_CASE("backends agree on a hard instance") {
  const HardInstance inst = make_hard_instance(3, 256, 99);
  const BlockDictionary dict = build_dictionary(inst.vectors, 4, 100);
  const UpdateSequence seq = build_update_sequence(dict, 256, 64, 191,
                                                   inst.block_filler, 101);
  CellStore s1(64), s2(64);
  StreamEngine naive(inst.fixed, BackendKind::naive, s1);
  StreamEngine blackbox(inst.fixed, BackendKind::blackbox, s2);
  CHECK(naive.run_sequence(seq.updates) ==
        blackbox.run_sequence(seq.updates));
}

TEST_CASE("window tracks the last n symbols of fill plus updates") {
  Rng rng(23);
  const AlphabetSpec alphabet = make_alphabet(4);
  const std::size_t n = 16;
  const SymbolString fixed = random_string(rng, alphabet, n);
  CellStore store(64);
  StreamEngine engine(fixed, BackendKind::naive, store);
  std::vector<std::uint32_t> shadow(n, 0);
  for (int t = 0; t < 40; ++t) {
    const std::uint32_t x = rng.symbol(alphabet.size());
    engine.arrive(x);
    shadow.erase(shadow.begin());
    shadow.push_back(x);
    CHECK(engine.window_snapshot() == shadow);
  }
}

TEST_CASE("level flush counts follow the power-of-two schedule") {
  Rng rng(24);
  const AlphabetSpec alphabet = make_alphabet(6);
  const std::size_t n = 256;
  const SymbolString fixed = random_string(rng, alphabet, n);
  const SymbolString updates = random_string(rng, alphabet, n);
  CellStore store(64);
  StreamEngine engine(fixed, BackendKind::blackbox, store);
  engine.run_sequence(updates);
  const auto& stats = engine.level_stats();
  REQUIRE(stats.size() == 8);
  for (std::uint32_t j = 0; j < 8; ++j)
    CHECK(stats[j].flushes == n >> j);
}

TEST_CASE("a constant stream settles to a constant output") {
  Rng rng(25);
  const AlphabetSpec alphabet = make_alphabet(5);
  const std::size_t n = 64;
  const SymbolString fixed = random_string(rng, alphabet, n);
  const SymbolString updates(alphabet, std::vector<std::uint32_t>(3 * n, 13));
  CellStore s1(64), s2(64);
  StreamEngine naive(fixed, BackendKind::naive, s1);
  StreamEngine blackbox(fixed, BackendKind::blackbox, s2);
  const CountArray a = naive.run_sequence(updates);
  const CountArray b = blackbox.run_sequence(updates);
  CHECK(a == b);
  for (std::size_t t = n; t < a.size(); ++t) CHECK(a[t] == a[n - 1]);
}

TEST_CASE("padded engines stay exact for any update content") {
  Rng rng(26);
  const AlphabetSpec alphabet = make_alphabet(3);
  const SymbolString fixed = random_string(rng, alphabet, 5);
  // Updates deliberately include the top alphabet value.
  std::vector<std::uint32_t> syms(30);
  for (auto& s : syms) s = 7 - static_cast<std::uint32_t>(rng.below(3));
  const SymbolString updates(alphabet, syms);
  CellStore store(64);
  StreamEngine engine(fixed, BackendKind::blackbox, store);
  CHECK(engine.padded_length() == 8);
  CHECK(engine.pad_amount() == 3);
  CHECK(engine.run_sequence(updates) ==
        oracle::stream_distances(fixed, updates));
}

TEST_CASE("engine rejects unusable cell widths") {
  const SymbolString fixed(make_alphabet(8),
                           std::vector<std::uint32_t>(256, 1));
  CellStore narrow(6);
  CHECK_THROWS_AS(StreamEngine(fixed, BackendKind::naive, narrow),
                  std::invalid_argument);  // 2^6 < 256 addresses of time axis
  CellStore tiny(4);
  CHECK_THROWS_AS(StreamEngine(fixed, BackendKind::naive, tiny),
                  std::invalid_argument);  // symbol does not fit a cell
}
