#include "mqsr/harness/invariants.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "mqsr/adversary.hpp"
#include "mqsr/ghzkey.hpp"
#include "mqsr/harness/metrics.hpp"
#include "mqsr/protocol/session.hpp"
#include "mqsr/qsim/operations.hpp"

namespace mqsr::harness {

namespace {

using ghz::GhzLabel;
using qsim::Basis;
using qsim::Bit;
using qsim::StateVector;

constexpr double kTol = 1e-9;

std::vector<GhzLabel> all_labels(int agents) {
  std::vector<GhzLabel> out;
  for (unsigned mask = 0; mask < (1u << agents); ++mask) {
    for (ghz::Sign sign : {ghz::Sign::Plus, ghz::Sign::Minus}) {
      GhzLabel label;
      for (int r = 0; r < agents; ++r) label.corr_bits.push_back(static_cast<Bit>((mask >> r) & 1u));
      label.sign = sign;
      out.push_back(label);
    }
  }
  return out;
}

std::vector<std::vector<Basis>> xy_assignments(int qubits) {
  std::vector<std::vector<Basis>> out;
  for (unsigned mask = 0; mask < (1u << qubits); ++mask) {
    std::vector<Basis> b;
    for (int q = 0; q < qubits; ++q) b.push_back(((mask >> q) & 1u) ? Basis::Y : Basis::X);
    out.push_back(b);
  }
  return out;
}

InvariantResult norm_preservation(Rng& rng) {
  constexpr std::array gates{qsim::Gate::X, qsim::Gate::Z, qsim::Gate::H, qsim::Gate::S,
                             qsim::Gate::Sdg};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    StateVector s = qsim::random_state(5, rng);
    for (int step = 0; step < 40; ++step) {
      const int q = static_cast<int>(rng.below(5));
      if (rng.bit()) {
        s = qsim::apply_single(std::move(s), q, gates[rng.below(gates.size())]);
      } else {
        const int t = (q + 1 + static_cast<int>(rng.below(4))) % 5;
        s = qsim::apply_cnot(std::move(s), q, t);
      }
      worst = std::max(worst, std::abs(s.norm_squared() - 1.0));
    }
  }
  return {"norm_preservation", worst < kTol, "max |norm-1| = " + std::to_string(worst)};
}

InvariantResult cnot_involution(Rng& rng) {
  bool ok = true;
  for (int trial = 0; trial < 50 && ok; ++trial) {
    const StateVector s = qsim::random_state(4, rng);
    const int c = static_cast<int>(rng.below(4));
    const int t = (c + 1 + static_cast<int>(rng.below(3))) % 4;
    const StateVector twice = qsim::apply_cnot(qsim::apply_cnot(s, c, t), c, t);
    ok = qsim::fidelity(s, twice) > 1.0 - kTol;
  }
  return {"cnot_involution", ok, ok ? "CNOT^2 = I on 50 random states" : "CNOT^2 != I"};
}

InvariantResult measurement_repeatability(Rng& rng) {
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const StateVector s = qsim::random_state(3, rng);
    const int q = static_cast<int>(rng.below(3));
    const Basis basis = static_cast<Basis>(rng.below(3));
    auto first = qsim::measure(s, q, basis, rng);
    if (std::abs(first.collapsed.norm_squared() - 1.0) > kTol) ++mismatches;
    const double p1 = qsim::probability_of_one(first.collapsed, q, basis);
    if (std::abs(p1 - static_cast<double>(first.bit)) > kTol) ++mismatches;
  }
  return {"measurement_repeatability", mismatches == 0,
          std::to_string(mismatches) + " non-repeatable outcomes in 200"};
}

InvariantResult bell_completeness(Rng& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const StateVector s = qsim::random_state(4, rng);
    const auto p = qsim::bell_probabilities(s, 1, 3);
    worst = std::max(worst, std::abs(p[0] + p[1] + p[2] + p[3] - 1.0));
  }
  return {"bell_completeness", worst < kTol, "max |sum-1| = " + std::to_string(worst)};
}

InvariantResult ghz_round_trip() {
  std::size_t checked = 0;
  std::size_t bad = 0;
  for (int m = 1; m <= 4; ++m) {
    for (const GhzLabel& label : all_labels(m)) {
      ++checked;
      const auto back = ghz::label_from_state(ghz::make_ghz(label));
      if (!back || !(*back == label)) ++bad;
    }
  }
  return {"ghz_round_trip", bad == 0,
          std::to_string(bad) + " of " + std::to_string(checked) + " labels lost"};
}

// Every deterministic X/Y assignment: the sampled joint parity must equal the
// analytic prediction.
InvariantResult parity_soundness(Rng& rng) {
  std::size_t checked = 0;
  std::size_t bad = 0;
  for (int m = 1; m <= 3; ++m) {
    for (const GhzLabel& label : all_labels(m)) {
      for (const auto& bases : xy_assignments(m + 1)) {
        if (!ghz::is_deterministic_assignment(bases)) continue;
        const auto expected = ghz::expected_parity(label, bases);
        for (int sample = 0; sample < 4; ++sample) {
          StateVector s = ghz::make_ghz(label);
          std::vector<Bit> bits;
          for (int q = 0; q <= m; ++q) {
            auto out = qsim::measure(std::move(s), q, bases[static_cast<std::size_t>(q)], rng);
            bits.push_back(out.bit);
            s = std::move(out.collapsed);
          }
          ++checked;
          if (ghz::parity_of(bits) != expected) ++bad;
        }
      }
    }
  }
  return {"parity_soundness", bad == 0,
          std::to_string(bad) + " mismatches in " + std::to_string(checked) + " samples"};
}

InvariantResult basis_choice_consistency() {
  std::size_t bad = 0;
  for (int m = 1; m <= 4; ++m) {
    for (const GhzLabel& label : all_labels(m)) {
      for (const auto& agent_bases : xy_assignments(m)) {
        std::vector<Basis> all{ghz::alice_basis_choice(label, agent_bases)};
        all.insert(all.end(), agent_bases.begin(), agent_bases.end());
        if (!ghz::is_deterministic_assignment(all)) ++bad;
      }
    }
  }
  return {"basis_choice_consistency", bad == 0,
          std::to_string(bad) + " agent choices left Alice without a deterministic basis"};
}

InvariantResult honest_run_perfection(std::uint64_t seed) {
  std::size_t runs = 0;
  std::size_t bad = 0;
  for (int m = 1; m <= 4; ++m) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      protocol::ProtocolConfig c;
      c.num_agents = m;
      c.key_len = 16;
      c.rng_seed = splitmix64(seed + s * 31 + static_cast<std::uint64_t>(m));
      const auto t = protocol::run_protocol(c, adversary::StrategyDescriptor::none(), 2);
      ++runs;
      const bool clean = !t.detected() && t.e1.errors == 0 && t.decoy.errors == 0 &&
                         t.e3.errors == 0 && t.reuse.errors == 0 &&
                         t.correct_message_bits() == t.message_bits() && t.message_bits() > 0;
      if (!clean) ++bad;
    }
  }
  return {"honest_run_perfection", bad == 0,
          std::to_string(bad) + " of " + std::to_string(runs) + " honest runs imperfect"};
}

// Bus messages carry only announcements: no labels or amplitudes, and b_t is
// exactly the sum of message sizes.
InvariantResult message_schema_secrecy(std::uint64_t seed) {
  protocol::ProtocolConfig c;
  c.num_agents = 3;
  c.key_len = 16;
  c.rng_seed = seed;
  const auto t = protocol::run_protocol(c, adversary::StrategyDescriptor::none(), 1);
  std::size_t bits = 0;
  std::size_t leaks = 0;
  for (const auto& msg : t.bus_log) {
    bits += msg.bits();
    const std::string text = protocol::serialize(msg);
    for (const char* banned : {"label", "corr", "sign", "amplitude", "state"}) {
      if (text.find(banned) != std::string::npos) ++leaks;
    }
  }
  const bool ok = leaks == 0 && bits == t.b_t && !t.bus_log.empty();
  std::ostringstream d;
  d << t.bus_log.size() << " messages, " << leaks << " leaking fields, b_t " << t.b_t
    << " vs summed " << bits;
  return {"message_schema_secrecy", ok, d.str()};
}

InvariantResult ledger_conservation(std::uint64_t seed) {
  std::size_t bad = 0;
  const std::array strategies{adversary::StrategyDescriptor::none(),
                              adversary::StrategyDescriptor::intercept_resend(
                                  Basis::Z, adversary::TapTarget::Travelling),
                              adversary::StrategyDescriptor::intercept_resend(
                                  Basis::X, adversary::TapTarget::KeyParticles),
                              adversary::StrategyDescriptor::dishonest_agent(0, 1)};
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    protocol::ProtocolConfig c;
    c.key_len = 24;
    c.rng_seed = splitmix64(seed ^ i);
    const auto t = protocol::run_protocol(c, strategies[i], 3);
    const auto tally_ok = [](const protocol::CheckTally& x) { return x.errors <= x.total; };
    const bool ok = t.q_u <= t.q_t && tally_ok(t.e1) && tally_ok(t.decoy) && tally_ok(t.e3) &&
                    tally_ok(t.reuse) && t.qubit_log.size() == t.q_t;
    if (!ok) ++bad;
    const auto eff = compute_efficiency(t);
    if (!(eff.eta_t >= 0.0 && eff.eta_t <= eff.eta_q && eff.eta_q <= 1.0)) ++bad;
  }
  return {"ledger_conservation", bad == 0, std::to_string(bad) + " counter violations"};
}

InvariantResult cheat_completeness(std::uint64_t seed) {
  std::size_t checks = 0;
  std::size_t errors = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    protocol::ProtocolConfig c;
    c.num_agents = 2;
    c.key_len = 16;
    c.decoy_rate = 0.0;
    c.sample_rate_e1 = 0.5;
    c.rng_seed = splitmix64(seed + 1000 + s);
    adversary::Adversary eve(adversary::StrategyDescriptor::dishonest_agent(0, 1));
    protocol::Session session(c, eve);
    session.distribute_key();
    checks += session.transcript().e1.total;
    errors += session.transcript().e1.errors;
  }
  return {"cheat_completeness", errors == 0 && checks > 0,
          std::to_string(errors) + " parity errors in " + std::to_string(checks) +
              " cheated checks"};
}

InvariantResult reuse_soundness(std::uint64_t seed) {
  protocol::ProtocolConfig c;
  c.num_agents = 2;
  c.key_len = 16;
  c.rng_seed = seed;
  adversary::Adversary none;
  protocol::Session session(c, none);
  std::size_t checked = 0;
  std::size_t bad = 0;
  if (session.distribute_key() == protocol::Verdict::Secure) {
    session.run_round();
    for (std::size_t pos : session.key_ledger().positions_with(ghz::KeyStatus::Fresh)) {
      std::vector<protocol::ParticleId> parts{session.alice_particle(pos)};
      for (int r = 0; r < c.num_agents; ++r) parts.push_back(session.agent_particle(r, pos));
      const StateVector now = session.world().joint_state(parts);
      const StateVector want = ghz::make_ghz(session.key_ledger().at(pos).label);
      ++checked;
      if (!qsim::equal_up_to_global_phase(want, now)) ++bad;
    }
  }
  return {"reuse_soundness", checked > 0 && bad == 0,
          std::to_string(bad) + " of " + std::to_string(checked) + " reused entries disturbed"};
}

}  // namespace

std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<InvariantResult> out;
  const auto guarded = [&](const char* name, const std::function<InvariantResult()>& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("norm_preservation", [&] { return norm_preservation(rng); });
  guarded("cnot_involution", [&] { return cnot_involution(rng); });
  guarded("measurement_repeatability", [&] { return measurement_repeatability(rng); });
  guarded("bell_completeness", [&] { return bell_completeness(rng); });
  guarded("ghz_round_trip", [] { return ghz_round_trip(); });
  guarded("parity_soundness", [&] { return parity_soundness(rng); });
  guarded("basis_choice_consistency", [] { return basis_choice_consistency(); });
  guarded("honest_run_perfection", [&] { return honest_run_perfection(seed); });
  guarded("message_schema_secrecy", [&] { return message_schema_secrecy(seed); });
  guarded("ledger_conservation", [&] { return ledger_conservation(seed); });
  guarded("cheat_completeness", [&] { return cheat_completeness(seed); });
  guarded("reuse_soundness", [&] { return reuse_soundness(seed); });
  return out;
}

}  // namespace mqsr::harness
