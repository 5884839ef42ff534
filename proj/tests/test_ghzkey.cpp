#include <gtest/gtest.h>

#include "mqsr/ghzkey.hpp"
#include "mqsr/qsim/operations.hpp"
#include "oracle.hpp"

using namespace mqsr;
using namespace mqsr::ghz;
using qsim::Basis;

namespace {

std::vector<GhzLabel> all_labels(int m) {
  std::vector<GhzLabel> out;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::string bits;
    for (int r = 0; r < m; ++r) bits += ((mask >> r) & 1u) ? '1' : '0';
    out.push_back(GhzLabel::parse(bits, Sign::Plus));
    out.push_back(GhzLabel::parse(bits, Sign::Minus));
  }
  return out;
}

std::string corr_string(const GhzLabel& l) {
  std::string s;
  for (auto b : l.corr_bits) s += b ? '1' : '0';
  return s;
}

oracle::Vec oracle_ghz(const GhzLabel& l) {
  return oracle::ghz(corr_string(l), l.sign == Sign::Plus ? 1 : -1);
}

std::vector<Basis> decode(unsigned code, int n) {
  std::vector<Basis> b;
  for (int i = 0; i < n; ++i) {
    b.push_back(static_cast<Basis>(code % 3));
    code /= 3;
  }
  return b;
}

std::string basis_string(const std::vector<Basis>& b) {
  std::string s;
  for (Basis x : b) s += x == Basis::Z ? 'Z' : x == Basis::X ? 'X' : 'Y';
  return s;
}

}  // namespace

TEST(GhzLabel, ParseAndRender) {
  const auto l = GhzLabel::parse("01", Sign::Minus);
  EXPECT_EQ(l.num_agents(), 2);
  EXPECT_EQ(l.to_string(), "01-");
  EXPECT_THROW(GhzLabel::parse("0a"), std::invalid_argument);
}

TEST(GhzKey, MakeGhzMatchesOracle) {
  for (int m = 1; m <= 4; ++m) {
    for (const auto& l : all_labels(m)) {
      const auto s = make_ghz(l);
      const auto want = oracle_ghz(l);
      ASSERT_EQ(s.dimension(), want.size());
      for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(std::abs(s[i] - want[i]), 0.0, 1e-12);
    }
  }
}

TEST(GhzKey, WorkedExampleFromTwoAgents) {
  // |G01+> = (|001> + |110>)/sqrt2
  const auto s = make_ghz(GhzLabel::parse("01"));
  EXPECT_NEAR(std::abs(s[0b001]), oracle::kS, 1e-12);
  EXPECT_NEAR(std::abs(s[0b110]), oracle::kS, 1e-12);
}

TEST(GhzKey, LabelRoundTrip) {
  for (int m = 1; m <= 5; ++m) {
    for (const auto& l : all_labels(m)) {
      const auto back = label_from_state(make_ghz(l));
      ASSERT_TRUE(back.has_value());
      EXPECT_EQ(*back, l);
    }
  }
  EXPECT_FALSE(label_from_state(qsim::make_basis_state(3, "000")).has_value());
}

// Every label and every Z/X/Y assignment for M <= 3: the analytic parity rule
// must agree with exhaustive outcome enumeration, and must refuse exactly the
// assignments whose parity is not certain.
TEST(GhzKey, ExpectedParityMatchesExhaustiveEnumeration) {
  for (int m = 1; m <= 3; ++m) {
    const int n = m + 1;
    unsigned codes = 1;
    for (int i = 0; i < n; ++i) codes *= 3;
    for (const auto& l : all_labels(m)) {
      const auto psi = oracle_ghz(l);
      for (unsigned code = 0; code < codes; ++code) {
        const auto bases = decode(code, n);
        const int certain = oracle::certain_parity(psi, basis_string(bases));
        const bool has_z = basis_string(bases).find('Z') != std::string::npos;
        if (!has_z) {
          EXPECT_EQ(is_deterministic_assignment(bases), certain >= 0) << basis_string(bases);
        }
        if (is_deterministic_assignment(bases)) {
          const int mine = expected_parity(l, bases) == Parity::Odd ? 1 : 0;
          EXPECT_EQ(mine, certain) << l.to_string() << " " << basis_string(bases);
        } else {
          EXPECT_THROW(expected_parity(l, bases), ParityUndefined);
        }
      }
    }
  }
}

TEST(GhzKey, AliceBasisMakesEveryAgentChoiceDeterministic) {
  for (int m = 1; m <= 4; ++m) {
    for (const auto& l : all_labels(m)) {
      for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<Basis> agents;
        for (int r = 0; r < m; ++r) agents.push_back(((mask >> r) & 1u) ? Basis::Y : Basis::X);
        std::vector<Basis> all{alice_basis_choice(l, agents)};
        all.insert(all.end(), agents.begin(), agents.end());
        EXPECT_GE(oracle::certain_parity(oracle_ghz(l), basis_string(all)), 0);
      }
    }
  }
  const auto l = GhzLabel::parse("00");
  const std::vector<Basis> bad{Basis::Z, Basis::X};
  EXPECT_THROW(alice_basis_choice(l, bad), std::invalid_argument);
  const std::vector<Basis> short_list{Basis::X};
  EXPECT_THROW(alice_basis_choice(l, short_list), std::invalid_argument);
}

// Decompositions of the two-agent state |G00+> used in the check step.
TEST(GhzKey, TwoAgentCheckOutcomes) {
  const auto l = GhzLabel::parse("00");
  const std::vector<Basis> xxx{Basis::X, Basis::X, Basis::X};
  const std::vector<Basis> yxy{Basis::Y, Basis::X, Basis::Y};
  const std::vector<Basis> yyx{Basis::Y, Basis::Y, Basis::X};
  EXPECT_EQ(expected_parity(l, xxx), Parity::Even);
  EXPECT_EQ(expected_parity(l, yxy), Parity::Odd);
  EXPECT_EQ(expected_parity(l, yyx), Parity::Odd);
}

TEST(GhzKey, ParityOfBits) {
  const std::vector<qsim::Bit> bits{1, 0, 1, 1};
  EXPECT_EQ(parity_of(bits), Parity::Odd);
}

TEST(KeyLedger, StatusTransitions) {
  KeyLedger ledger;
  ledger.add(0, GhzLabel::parse("01"));
  ledger.add(1, GhzLabel::parse("10"));
  ledger.add(2, GhzLabel::parse("11"));
  EXPECT_THROW(ledger.add(5, GhzLabel::parse("00")), std::invalid_argument);

  EXPECT_TRUE(ledger.usable_by(0, 0));
  ledger.mark_used(0, 0);
  EXPECT_FALSE(ledger.usable_by(0, 0));
  EXPECT_TRUE(ledger.usable_by(0, 1));
  EXPECT_THROW(ledger.mark_used(0, 0), std::logic_error);
  EXPECT_EQ(ledger.at(0).status, KeyStatus::UsedForMessage);

  ledger.mark_consumed(1);
  EXPECT_THROW(ledger.mark_used(1, 0), std::logic_error);
  EXPECT_FALSE(ledger.usable_by(1, 0));

  ledger.release_used();
  EXPECT_EQ(ledger.at(0).status, KeyStatus::Fresh);
  EXPECT_EQ(ledger.at(0).used_by, 0u);
  EXPECT_EQ(ledger.at(1).status, KeyStatus::ConsumedForCheck);
  EXPECT_EQ(ledger.positions_with(KeyStatus::Fresh), (std::vector<std::size_t>{0, 2}));
  EXPECT_THROW((void)ledger.at(9), std::out_of_range);
}
