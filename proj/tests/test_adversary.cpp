#include <gtest/gtest.h>

#include "mqsr/adversary.hpp"
#include "mqsr/ghzkey.hpp"
#include "mqsr/protocol/session.hpp"
#include "oracle.hpp"

using namespace mqsr;
using namespace mqsr::adversary;
using protocol::ProtocolConfig;
using qsim::Basis;
using qsim::BellOutcome;

TEST(StrategyDescriptor, ParseAndRender) {
  for (const char* text : {"none", "eve:Z:travelling", "eve:X:key", "eve:Y:travelling", "dishonest:0:1",
                           "dishonest:2:0"}) {
    EXPECT_EQ(StrategyDescriptor::parse(text).to_string(), text);
  }
  EXPECT_EQ(StrategyDescriptor::parse("eve:X:key"),
            StrategyDescriptor::intercept_resend(Basis::X, TapTarget::KeyParticles));
  for (const char* bad : {"", "eve", "eve:Q:key", "eve:X:wire", "dishonest:0", "dishonest:1:1",
                          "dishonest:-1:0", "dishonest:a:b", "nobody"}) {
    EXPECT_THROW(StrategyDescriptor::parse(bad), std::invalid_argument) << bad;
  }
}

// Derives the cheater's flip table from scratch: GHZ on (A, B1, B2) and a psi-
// pair (b1, b2); B2 is captured and Bell-measured with b1, b2 travels on to the
// victim. For every branch, label and deterministic basis assignment, compare
// the certain parity of (A, B1, b2) with the parity Alice expects.
TEST(CheatRule, MatchesExhaustiveDerivation) {
  const std::array<std::string, 4> labels{"00", "01", "10", "11"};
  for (int k = 0; k < 4; ++k) {
    for (int victim_y = 0; victim_y < 2; ++victim_y) {
      std::optional<bool> flip;
      for (const std::string& corr : labels) {
        for (int sign : {1, -1}) {
          const auto full = oracle::kron(oracle::ghz(corr, sign), oracle::bell(3));
          const auto rest = oracle::normalized(oracle::contract_pair(full, 5, 2, 3, oracle::bell(k)));
          for (int cheater_y = 0; cheater_y < 2; ++cheater_y) {
            const std::vector<Basis> agents{cheater_y ? Basis::Y : Basis::X, victim_y ? Basis::Y : Basis::X};
            auto label = ghz::GhzLabel::parse(corr, sign == 1 ? ghz::Sign::Plus : ghz::Sign::Minus);
            std::vector<Basis> all{ghz::alice_basis_choice(label, agents)};
            all.insert(all.end(), agents.begin(), agents.end());
            std::string bases;
            for (Basis b : all) bases += b == Basis::X ? 'X' : 'Y';
            const int actual = oracle::certain_parity(rest, bases);
            ASSERT_GE(actual, 0);
            const int expected = ghz::expected_parity(label, all) == ghz::Parity::Odd ? 1 : 0;
            const bool f = actual != expected;
            if (flip) {
              EXPECT_EQ(*flip, f) << "branch " << k << " not label independent";
            }
            flip = f;
          }
        }
      }
      EXPECT_EQ(kCheatRule.flip_for(static_cast<BellOutcome>(k), victim_y ? Basis::Y : Basis::X), *flip)
          << "branch " << k << " victim " << (victim_y ? 'Y' : 'X');
    }
  }
}

TEST(Adversary, NoneLeavesParticlesAlone) {
  Adversary none;
  protocol::World w;
  Rng rng(1);
  const auto ids = w.create(ghz::make_ghz(ghz::GhzLabel::parse("0")));
  EXPECT_EQ(none.tap_key_line(w, 0, 0, ids[1], rng), ids[1]);
  EXPECT_EQ(none.tap_travelling(w, 0, ids[1], rng), ids[1]);
  EXPECT_TRUE(w.same_system(ids[0], ids[1]));
  EXPECT_TRUE(none.key_taps().empty());
}

TEST(Adversary, InterceptResendCollapsesTarget) {
  Adversary eve(StrategyDescriptor::intercept_resend(Basis::Z, TapTarget::KeyParticles));
  protocol::World w;
  Rng rng(2);
  const auto ids = w.create(ghz::make_ghz(ghz::GhzLabel::parse("0")));
  const auto out = eve.tap_key_line(w, 0, 3, ids[1], rng);
  EXPECT_EQ(out, ids[1]);
  EXPECT_FALSE(w.same_system(ids[0], ids[1]));
  ASSERT_EQ(eve.key_taps().size(), 1u);
  EXPECT_EQ(eve.key_taps()[0].index, 3u);
  // Travelling qubits pass untouched when Eve targets the key.
  const auto t = w.create_single(qsim::eigenstate(Basis::X, 0));
  eve.tap_travelling(w, 0, t, rng);
  EXPECT_TRUE(eve.travelling_taps().empty());
}

TEST(Adversary, BellSubstitutionKeepsPairsIndependent) {
  Adversary cheat(StrategyDescriptor::dishonest_agent(0, 1));
  protocol::World w;
  const auto g1 = w.create(ghz::make_ghz(ghz::GhzLabel::parse("00")));
  const auto g2 = w.create(ghz::make_ghz(ghz::GhzLabel::parse("11")));
  const auto b2a = cheat.tap_bell_substitute(w, 0, g1[2]);
  const auto b2b = cheat.tap_bell_substitute(w, 1, g2[2]);
  ASSERT_EQ(cheat.held().size(), 2u);
  EXPECT_FALSE(w.same_system(b2a, b2b));
  EXPECT_FALSE(w.same_system(b2a, g1[0]));
  const std::array pair{cheat.held().at(0).b1, b2a};
  EXPECT_TRUE(qsim::equal_up_to_global_phase(qsim::bell_state(BellOutcome::PsiMinus), w.joint_state(pair)));
  EXPECT_TRUE(w.same_system(cheat.held().at(1).captured, g2[0]));
}

TEST(Adversary, CheatPublishRequiresAttackedPosition) {
  Adversary cheat(StrategyDescriptor::dishonest_agent(0, 1));
  protocol::World w;
  Rng rng(3);
  const auto p = w.create_single(qsim::eigenstate(Basis::X, 0));
  EXPECT_FALSE(cheat.attacked(0));
  EXPECT_THROW(cheat.cheat_publish(w, 0, p, Basis::X, Basis::X, rng), std::out_of_range);
}

TEST(Adversary, CheaterPassesGhzChecksWithoutDecoys) {
  std::size_t checks = 0;
  std::array<std::size_t, 4> branches{};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ProtocolConfig c;
    c.key_len = 16;
    c.decoy_rate = 0.0;
    c.sample_rate_e1 = 0.5;
    c.rng_seed = seed;
    Adversary cheat(StrategyDescriptor::dishonest_agent(0, 1));
    protocol::Session s(c, cheat);
    EXPECT_EQ(s.distribute_key(), protocol::Verdict::Secure);
    EXPECT_EQ(s.transcript().e1.errors, 0u);
    checks += s.transcript().e1.total;
    for (const auto& sw : cheat.swaps()) ++branches[static_cast<std::size_t>(sw.outcome)];
  }
  EXPECT_EQ(checks, 30u * 8u);
  for (auto b : branches) EXPECT_GT(b, 0u);
}

TEST(Adversary, DecoysExposeTheCheater) {
  std::size_t detected = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ProtocolConfig c;
    c.key_len = 16;
    c.decoy_rate = 0.25;
    c.max_retries = 0;
    c.rng_seed = seed;
    Adversary cheat(StrategyDescriptor::dishonest_agent(0, 1));
    protocol::Session s(c, cheat);
    if (s.distribute_key() == protocol::Verdict::Compromised) ++detected;
    EXPECT_EQ(s.transcript().e1.errors, 0u);
  }
  // 4 decoys on the victim line: detection 1 - 2^-4 per run.
  EXPECT_GE(detected, 40u);
}

TEST(Adversary, ZTapOnTravellingQubitsIsInvisibleToTransmissionCheck) {
  ProtocolConfig c;
  c.key_len = 32;
  c.sample_rate_e3 = 0.5;
  c.reuse_check_rate = 0.0;
  c.rng_seed = 4;
  const auto t = protocol::run_protocol(c, StrategyDescriptor::intercept_resend(Basis::Z, TapTarget::Travelling), 1);
  EXPECT_GT(t.e3.total, 0u);
  EXPECT_EQ(t.e3.errors, 0u);
  EXPECT_EQ(t.message_fidelity(), 1.0);
}

TEST(Adversary, XTapOnTravellingQubitsCorruptsSamples) {
  ProtocolConfig c;
  c.key_len = 32;
  c.sample_rate_e3 = 0.5;
  c.rng_seed = 5;
  const auto t = protocol::run_protocol(c, StrategyDescriptor::intercept_resend(Basis::X, TapTarget::Travelling), 1);
  EXPECT_GT(t.e3.errors, 0u);
  EXPECT_TRUE(t.detected());
}

TEST(Adversary, KeyLineTappingIsCaughtByParityCheck) {
  std::size_t detected = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ProtocolConfig c;
    c.key_len = 16;
    c.decoy_rate = 0.0;
    c.sample_rate_e1 = 0.5;
    c.max_retries = 0;
    c.rng_seed = seed;
    const auto t = protocol::run_protocol(c, StrategyDescriptor::intercept_resend(Basis::Z, TapTarget::KeyParticles), 0);
    detected += t.detected();
  }
  EXPECT_GE(detected, 18u);
}
