#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "hds/engine.hpp"
#include "hds/hard_instance.hpp"
#include "hds/mismatch.hpp"
#include "hds/rng.hpp"

using namespace hds;

TEST_CASE("sample_vectors shape and determinism") {
  const VectorMultiset a = sample_vectors(4, 77);
  const VectorMultiset b = sample_vectors(4, 77);
  REQUIRE(a.vectors.size() == 16);
  for (const auto& v : a.vectors) CHECK(v.size() == 4);
  CHECK(a.vectors == b.vectors);
  CHECK(sample_vectors(4, 78).vectors != a.vectors);
  CHECK_THROWS_AS(sample_vectors(1, 0), std::invalid_argument);
}

TEST_CASE("sampled bits are fair coins") {
  std::uint64_t ones = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const VectorMultiset v = sample_vectors(10, seed);
    for (const auto& vec : v.vectors)
      for (std::uint8_t bit : vec) {
        ones += bit;
        ++total;
      }
  }
  const double freq = static_cast<double>(ones) / static_cast<double>(total);
  CHECK(freq > 0.48);
  CHECK(freq < 0.52);
}

TEST_CASE("encode_rho worked examples") {
  // mu = 3: star = 9.
  CHECK(encode_rho({0, 1, 0}, 2, 3).symbols() ==
        std::vector<std::uint32_t>{9, 2, 9});
  CHECK(encode_rho({1, 1, 0}, 7, 3).symbols() ==
        std::vector<std::uint32_t>{7, 7, 9});
  CHECK(encode_rho({0, 0, 0}, 5, 3).symbols() ==
        std::vector<std::uint32_t>{9, 9, 9});
  CHECK_THROWS_AS(encode_rho({0, 1}, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(encode_rho({0, 1, 0}, 9, 3), std::invalid_argument);
}

TEST_CASE("base string structure") {
  const VectorMultiset v = sample_vectors(2, 5);
  const SymbolString base = build_base_string(v);
  CHECK(base.size() == 8);

  const VectorMultiset w = sample_vectors(5, 6);
  const SymbolString big = build_base_string(w);
  REQUIRE(big.size() == 125);
  std::uint64_t stars = 0, zero_bits = 0;
  for (std::size_t k = 0; k < big.size(); ++k) {
    const std::uint32_t sym = big[k];
    if (sym == star_symbol(5)) {
      ++stars;
    } else {
      // Block symbol i may appear only inside block i.
      CHECK(k / 5 == sym);
    }
  }
  for (const auto& vec : w.vectors)
    for (std::uint8_t bit : vec) zero_bits += (bit == 0);
  CHECK(stars == zero_bits);
}

TEST_CASE("fixed string places copies at power-of-two suffixes") {
  const SymbolString base(make_alphabet(4), {10, 11});
  const SymbolString fixed = build_fixed_string(base, 8, 15);
  CHECK(fixed.symbols() ==
        std::vector<std::uint32_t>{10, 11, 15, 15, 10, 11, 15, 15});
  CHECK_THROWS_AS(build_fixed_string(base, 3, 15), std::invalid_argument);
}

TEST_CASE("fixed string copy placement scan") {
  for (std::uint32_t mu : {2u, 3u}) {
    const std::uint64_t n = 1u << 11;
    const HardInstance inst = make_hard_instance(mu, n, 31 + mu);
    const std::uint64_t r = inst.base_len;

    // Re-derive placements by scanning for base-string copies.
    std::uint64_t copies = 0;
    std::set<std::uint64_t> starts;
    for (std::uint64_t p = 0; p + r <= n; ++p) {
      if (inst.fixed.substr(p, r) == inst.base) {
        ++copies;
        starts.insert(p);
      }
    }
    std::uint64_t expected = 0;
    for (std::uint64_t q = 1; q <= n; q <<= 1) expected += (q > r);
    CHECK(copies == expected);
    for (std::uint64_t q = 1; q <= n; q <<= 1)
      if (q > r) CHECK(starts.count(n - q) == 1);
    // Everything outside the copies is the fixed filler.
    std::vector<bool> covered(n, false);
    for (std::uint64_t s : starts)
      for (std::uint64_t k = 0; k < r; ++k) covered[s + k] = true;
    for (std::uint64_t p = 0; p < n; ++p)
      if (!covered[p]) CHECK(inst.fixed[p] == inst.fixed_filler);
  }
}

TEST_CASE("vsum") {
  VectorMultiset v;
  v.mu = 2;
  v.vectors = {{0, 0}, {0, 0}, {1, 0}, {1, 1}};
  CHECK(vsum(v, {0, 1}) == std::vector<std::uint32_t>{0, 0});
  CHECK(vsum(v, {2, 3}) == std::vector<std::uint32_t>{2, 1});
  CHECK_THROWS_AS(vsum(v, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(vsum(v, {2}), std::invalid_argument);
  CHECK_THROWS_AS(vsum(v, {2, 9}), std::invalid_argument);

  Rng rng(41);
  const VectorMultiset big = sample_vectors(5, 42);
  for (int trial = 0; trial < 10; ++trial) {
    std::set<std::uint32_t> picked;
    while (picked.size() < 5)
      picked.insert(static_cast<std::uint32_t>(rng.below(25)));
    const std::vector<std::uint32_t> indices(picked.begin(), picked.end());
    std::vector<std::uint32_t> expected(5, 0);
    for (std::uint32_t idx : indices)
      for (std::uint32_t k = 0; k < 5; ++k)
        expected[k] += big.vectors[idx][k];
    CHECK(vsum(big, indices) == expected);
  }
}

TEST_CASE("count_distinct_vsums") {
  VectorMultiset same;
  same.mu = 2;
  same.vectors = {{1, 0}, {1, 0}, {1, 0}, {1, 0}};
  const std::vector<bool> all4(4, true);
  CHECK(count_distinct_vsums(same, all4, 1000).count == 1);

  VectorMultiset canon;
  canon.mu = 2;
  canon.vectors = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const VsumCount full = count_distinct_vsums(canon, all4, 1000);
  CHECK(full.exact);
  CHECK(full.count == 5);

  // Subsets can only lose sums.
  const VsumCount sub =
      count_distinct_vsums(canon, {true, true, true, false}, 1000);
  CHECK(sub.exact);
  CHECK(sub.count <= full.count);

  // Tiny cap forces the sampled lower bound.
  const VectorMultiset big = sample_vectors(4, 7);
  const std::vector<bool> all16(16, true);
  const VsumCount sampled = count_distinct_vsums(big, all16, 50, 3);
  const VsumCount exact = count_distinct_vsums(big, all16, 1 << 20, 3);
  CHECK(exact.exact);
  CHECK_FALSE(sampled.exact);
  CHECK(sampled.count <= exact.count);

  CHECK_THROWS_AS(count_distinct_vsums(canon, all4, 0), std::invalid_argument);
}

TEST_CASE("empty schedule leaves the block all filler") {
  const VectorMultiset v = sample_vectors(3, 9);
  ChoiceSchedule empty;
  empty.mu = 3;
  empty.rounds_per_process = 1;
  const UpdateBlock built = build_update_block(v, empty);
  CHECK(built.block.size() == 54);
  for (std::size_t k = 0; k < built.block.size(); ++k)
    CHECK(built.block[k] == block_filler_symbol(3));
  const SymbolString base = build_base_string(v);
  for (std::uint32_t d : sliding_mismatch_counts(base, built.block))
    CHECK(d == 27);
  for (std::uint32_t p : built.profile) CHECK(p == 0);
}

TEST_CASE("one-round profile equals the reversed vector sum") {
  VectorMultiset v;
  v.mu = 3;
  v.vectors.assign(9, std::vector<std::uint8_t>{0, 0, 0});
  v.vectors[0] = {1, 0, 0};
  v.vectors[1] = {0, 1, 0};
  v.vectors[2] = {1, 1, 1};

  ChoiceSchedule schedule;
  schedule.mu = 3;
  schedule.rounds_per_process = 1;
  schedule.rounds = {{0, 1, 2}};
  validate_schedule(schedule);

  const UpdateBlock built = build_update_block(v, schedule);
  // vsum = (2,2,1); the three slide alignments read it in reverse.
  CHECK(built.profile[1] == 1);
  CHECK(built.profile[2] == 2);
  CHECK(built.profile[3] == 2);

  const SymbolString base = build_base_string(v);
  const CountArray mismatches = sliding_mismatch_counts(base, built.block);
  for (std::size_t d = 0; d < built.profile.size(); ++d)
    CHECK(27 - mismatches[d] == built.profile[d]);
}

TEST_CASE("a written symbol matches only inside its own alignments") {
  const VectorMultiset v = sample_vectors(4, 55);
  const SymbolString base = build_base_string(v);
  const std::uint32_t idx = 5;
  // Write the single symbol idx directly right of its block at offset 0.
  std::vector<std::uint32_t> symbols(128, block_filler_symbol(4));
  symbols[(idx + 1) * 4] = idx;
  const SymbolString block(alphabet_for_mu(4), symbols);
  const CountArray mismatches = sliding_mismatch_counts(base, block);
  for (std::size_t d = 0; d < mismatches.size(); ++d) {
    const std::uint32_t matches = 64 - mismatches[d];
    if (d >= 1 && d <= 4) {
      CHECK(matches == v.vectors[idx][4 - d]);
    } else {
      CHECK(matches == 0);
    }
  }
}

TEST_CASE("occupied positions are rejected with the round index") {
  const VectorMultiset v = sample_vectors(3, 66);
  ChoiceSchedule bad;
  bad.mu = 3;
  bad.rounds_per_process = 2;
  // Round 0 writes position (7+1)*3 = 24; round 1 at offset 3 writes
  // (6+1)*3 + 3 = 24 as well.
  bad.rounds = {{1, 4, 7}, {0, 2, 6}};
  CHECK_THROWS_WITH(validate_schedule(bad),
                    Catch::Matchers::ContainsSubstring("round 1"));
  CHECK_THROWS_WITH(build_update_block(v, bad),
                    Catch::Matchers::ContainsSubstring("round 1"));
}

TEST_CASE("distinct vector sums give distinct profiles") {
  VectorMultiset v = sample_vectors(3, 67);
  v.vectors[0] = {1, 1, 1};
  v.vectors[1] = {0, 0, 0};
  ChoiceSchedule a, b;
  a.mu = b.mu = 3;
  a.rounds_per_process = b.rounds_per_process = 1;
  a.rounds = {{0, 3, 4}};
  b.rounds = {{1, 3, 4}};
  CHECK(vsum(v, a.rounds[0]) != vsum(v, b.rounds[0]));
  CHECK(build_update_block(v, a).profile != build_update_block(v, b).profile);
}

TEST_CASE("random schedules validate and stay within budget") {
  Rng rng(68);
  for (std::uint32_t mu : {3u, 4u, 6u}) {
    const VectorMultiset v = sample_vectors(mu, mu * 13);
    for (int trial = 0; trial < 5; ++trial) {
      const ChoiceSchedule s = make_random_schedule(v, 2, 2, rng);
      validate_schedule(s);
      CHECK(s.total_slides() <= base_length(mu));
    }
  }
}

TEST_CASE("strict validation enforces the slide budget") {
  const VectorMultiset v = sample_vectors(3, 70);
  Rng rng(71);
  const ChoiceSchedule s = make_random_schedule(v, 1, 1, rng);
  validate_schedule(s);  // structurally fine
  // r/32 < mu for mu = 3, so any non-empty schedule breaks the budget.
  CHECK_THROWS_AS(validate_schedule(s, true), std::invalid_argument);
}

TEST_CASE("dictionary collects pairwise-distinct keys") {
  const VectorMultiset v = sample_vectors(4, 80);
  const BlockDictionary one = build_dictionary(v, 1, 81);
  CHECK(one.blocks.size() == 1);
  CHECK_FALSE(one.incomplete);

  const BlockDictionary dict = build_dictionary(v, 16, 82);
  REQUIRE(dict.blocks.size() == 16);
  CHECK_FALSE(dict.incomplete);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(dict.keys[i] == ham_array(dict.base, dict.blocks[i]));
    for (std::size_t j = i + 1; j < 16; ++j) CHECK(dict.keys[i] != dict.keys[j]);
    const auto found = dict.lookup(dict.keys[i]);
    REQUIRE(found.has_value());
    CHECK(*found == i);
  }
  CHECK_FALSE(dict.lookup(CountArray(65, 1)).has_value());
  CHECK_THROWS_AS(build_dictionary(v, 0, 0), std::invalid_argument);
}

TEST_CASE("an impossible budget yields a flagged partial dictionary") {
  const VectorMultiset v = sample_vectors(2, 83);
  const BlockDictionary dict = build_dictionary(v, 1000, 84, 8);
  CHECK(dict.incomplete);
  CHECK(dict.blocks.size() < 1000);
}

TEST_CASE("update sequences embed blocks right-aligned") {
  const VectorMultiset v = sample_vectors(3, 90);
  const BlockDictionary dict = build_dictionary(v, 4, 91);
  const std::uint32_t outside = block_filler_symbol(3);

  const UpdateSequence seq =
      build_update_sequence(dict, 256, 100, 153, outside, 92);  // span 54 = 2r
  REQUIRE(seq.layout.block_starts.size() == 1);
  CHECK(seq.layout.pad == 0);
  CHECK(seq.layout.block_starts[0] == 100);
  for (std::uint64_t t = 0; t < 256; ++t) {
    if (t >= 100 && t <= 153) continue;
    CHECK(seq.updates[static_cast<std::size_t>(t)] == outside);
  }
  const SymbolString& block = dict.blocks[seq.ground_truth[0]];
  CHECK(seq.updates.substr(100, 54) == block);

  // Non-multiple spans are left-padded with the outside symbol.
  const UpdateSequence padded =
      build_update_sequence(dict, 256, 100, 163, outside, 92);
  CHECK(padded.layout.pad == 10);
  CHECK(padded.layout.block_starts[0] == 110);

  // Reproducibility under the seed.
  const UpdateSequence again =
      build_update_sequence(dict, 256, 100, 153, outside, 92);
  CHECK(again.updates == seq.updates);
  CHECK(again.ground_truth == seq.ground_truth);

  BlockDictionary empty;
  empty.mu = 3;
  CHECK_THROWS_AS(build_update_sequence(empty, 256, 100, 153, outside, 0),
                  std::invalid_argument);
}

namespace {

struct DecodeFixture {
  HardInstance inst;
  BlockDictionary dict;
  UpdateSequence seq;
  IntervalGeometry geo;
  std::vector<DecodedBlock> decoded;
};

DecodeFixture run_decode(std::uint32_t mu, std::uint64_t n,
                         std::uint64_t interval, std::uint64_t seed,
                         std::size_t dict_blocks) {
  DecodeFixture f;
  f.inst = make_hard_instance(mu, n, seed);
  f.dict = build_dictionary(f.inst.vectors, dict_blocks, seed + 1);
  f.geo = IntervalGeometry{n - 2 * interval, n - interval - 1, n - 1};
  f.seq = build_update_sequence(f.dict, n, f.geo.t0, f.geo.t1,
                                f.inst.block_filler, seed + 2);
  CellStore store(64);
  StreamEngine engine(f.inst.fixed, BackendKind::naive, store);
  const CountArray outputs = engine.run_sequence(f.seq.updates);
  const CountArray window(
      outputs.begin() + static_cast<std::ptrdiff_t>(f.geo.t1 + 1),
      outputs.begin() + static_cast<std::ptrdiff_t>(f.geo.t2 + 1));
  f.decoded = decode_blocks(window, f.inst, f.dict, f.seq.updates,
                            f.seq.layout, f.geo);
  return f;
}

}  // namespace

TEST_CASE("decoding with no embedded blocks recovers nothing") {
  const HardInstance inst = make_hard_instance(3, 512, 7);
  const BlockDictionary dict = build_dictionary(inst.vectors, 2, 8);
  const IntervalGeometry geo{256, 383, 511};
  UpdateLayout layout;
  layout.t0 = geo.t0;
  layout.t1 = geo.t1;
  layout.outside_symbol = inst.block_filler;
  const SymbolString updates(inst.alphabet,
                             std::vector<std::uint32_t>(512, inst.block_filler));
  CellStore store(64);
  StreamEngine engine(inst.fixed, BackendKind::naive, store);
  const CountArray outputs = engine.run_sequence(updates);
  const CountArray window(outputs.begin() + 384, outputs.end());
  CHECK(decode_blocks(window, inst, dict, updates, layout, geo).empty());
}

TEST_CASE("a single embedded block is recovered at minimal scale") {
  // mu = 4: r = 64, blocks of 128, interval 2^9 holds 4 slots.
  const DecodeFixture f = run_decode(4, 2048, 512, 300, 8);
  REQUIRE(f.decoded.size() == 4);
  bool any = false;
  for (const auto& d : f.decoded) {
    CHECK(d.status != DecodeStatus::undecodable);
    if (d.status == DecodeStatus::recovered) {
      any = true;
      CHECK(d.dict_index == f.seq.ground_truth[d.slot]);
    }
  }
  CHECK(any);
}

TEST_CASE("eight embedded blocks: the sixth and seventh decode") {
  // interval = 16r so the block segment holds exactly eight slots.
  const DecodeFixture f = run_decode(4, 4096, 1024, 301, 8);
  REQUIRE(f.decoded.size() == 8);
  std::set<std::size_t> recovered;
  for (const auto& d : f.decoded) {
    CHECK(d.status != DecodeStatus::undecodable);
    if (d.status == DecodeStatus::recovered) {
      recovered.insert(d.slot);
      CHECK(d.dict_index == f.seq.ground_truth[d.slot]);
    }
  }
  // Slots 5 and 6 (the sixth and seventh blocks) slide cleanly across the
  // target copy in the second half of the window.
  CHECK(recovered.count(5) == 1);
  CHECK(recovered.count(6) == 1);
}

TEST_CASE("decode validates its geometry") {
  const HardInstance inst = make_hard_instance(3, 512, 9);
  const BlockDictionary dict = build_dictionary(inst.vectors, 2, 10);
  UpdateLayout layout;
  layout.outside_symbol = inst.block_filler;
  const SymbolString updates(inst.alphabet,
                             std::vector<std::uint32_t>(512, inst.block_filler));
  const CountArray window(128, 0);
  CHECK_THROWS_AS(decode_blocks(window, inst, dict, updates, layout,
                                IntervalGeometry{10, 20, 30}),
                  std::invalid_argument);
  CHECK_THROWS_AS(decode_blocks(window, inst, dict, updates, layout,
                                IntervalGeometry{256, 287, 319}),
                  std::invalid_argument);  // 2^ell = 32 < 2r
}
