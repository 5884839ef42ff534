#include "mqsr/protocol/session.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mqsr/qsim/operations.hpp"

namespace mqsr::protocol {

using qsim::Basis;
using qsim::Bit;

namespace {
constexpr std::uint64_t kAdversaryStream = std::uint64_t{1} << 20;

Basis random_check_basis(Rng& rng) { return rng.bit() ? Basis::Y : Basis::X; }
}  // namespace

Basis DecoyEntry::basis() const {
  return (state == DecoyState::PlusX || state == DecoyState::MinusX) ? Basis::X : Basis::Y;
}

Bit DecoyEntry::bit() const {
  return (state == DecoyState::MinusX || state == DecoyState::MinusY) ? 1 : 0;
}

std::vector<DecoyEntry> DecoyLedger::for_agent(int agent) const {
  std::vector<DecoyEntry> out;
  for (const DecoyEntry& e : entries_) {
    if (e.agent == agent) out.push_back(e);
  }
  return out;
}

Session::Session(ProtocolConfig config, adversary::Adversary& adversary)
    : config_(config),
      adversary_(adversary),
      alice_rng_(Rng(config.rng_seed).split(0)),
      adversary_rng_(Rng(config.rng_seed).split(kAdversaryStream)) {
  config_.validate();
  const Rng root(config_.rng_seed);
  for (int r = 0; r < config_.num_agents; ++r) {
    agents_.push_back(AgentState{{}, {}, root.split(static_cast<std::uint64_t>(r) + 1)});
  }
  if (adversary_.descriptor().kind == adversary::StrategyKind::DishonestAgent) {
    const auto& d = adversary_.descriptor();
    if (d.cheater >= config_.num_agents || d.victim >= config_.num_agents) {
      throw ConfigError("dishonest-agent strategy names an agent outside [0, M)");
    }
  }
}

template <class... Args>
void Session::trace(const Args&... args) {
  if (trace_ == nullptr) return;
  ((*trace_) << ... << args) << '\n';
}

void Session::send(PartyId from, PartyId to, CheckPhase phase, Payload payload) {
  transcript_.b_t += bus_.send(ClassicalMessage{from, to, phase, std::move(payload)});
}

void Session::count_qubit(QubitKind kind) {
  ++transcript_.q_t;
  transcript_.qubit_log.push_back(QubitEvent{kind, key_ready_ ? round_ : -1});
}

void Session::require_agent(int agent) const {
  if (agent < 0 || agent >= config_.num_agents) {
    throw std::out_of_range("unknown agent index " + std::to_string(agent));
  }
}

ParticleId Session::alice_particle(std::size_t position) const { return alice_particles_.at(position); }

ParticleId Session::agent_particle(int agent, std::size_t position) const {
  require_agent(agent);
  return agents_[static_cast<std::size_t>(agent)].key.at(position);
}

std::size_t Session::fresh_entries() const {
  return key_ready_ ? key_.positions_with(ghz::KeyStatus::Fresh).size() : 0;
}

Verdict Session::conclude(CheckPhase phase, std::span<const CheckTally* const> tallies) {
  bool secure = true;
  for (const CheckTally* t : tallies) secure = secure && t->rate() <= config_.error_threshold;
  send(PartyId::alice(), PartyId::broadcast(), phase, VerdictNotice{secure});
  if (!secure) {
    ++transcript_.aborts;
    send(PartyId::alice(), PartyId::broadcast(), phase, AbortNotice{});
  }
  trace("  verdict after ", to_string(phase), " check: ", secure ? "secure" : "compromised");
  return secure ? Verdict::Secure : Verdict::Compromised;
}

Verdict Session::distribute_key() {
  ++transcript_.distribution_attempts;
  world_ = World{};
  adversary_.reset();
  key_ = ghz::KeyLedger{};
  decoys_.clear();
  alice_particles_.clear();
  key_ready_ = false;
  round_ = 0;

  const std::size_t n = config_.key_len;
  const auto m = static_cast<std::size_t>(config_.num_agents);
  const std::size_t d = config_.decoys_per_agent();

  std::vector<std::vector<ParticleId>> outgoing(m);
  for (std::size_t k = 0; k < n; ++k) {
    ghz::GhzLabel label;
    for (std::size_t r = 0; r < m; ++r) label.corr_bits.push_back(alice_rng_.bit());
    label.sign = (config_.include_minus_labels && alice_rng_.bit()) ? ghz::Sign::Minus : ghz::Sign::Plus;
    const auto ids = world_.create(ghz::make_ghz(label));
    alice_particles_.push_back(ids[0]);
    for (std::size_t r = 0; r < m; ++r) outgoing[r].push_back(ids[r + 1]);
    for (std::size_t q = 0; q <= m; ++q) count_qubit(QubitKind::GhzParticle);
    trace("Alice prepares key entry ", k, " in |G_", label.to_string(), ">");
    key_.add(k, std::move(label));
  }

  const std::size_t line_len = n + d;
  for (std::size_t r = 0; r < m; ++r) {
    const auto decoy_slots = alice_rng_.choose(line_len, d);
    AgentState& agent = agents_[r];
    agent.line.assign(line_len, ParticleId{});
    std::size_t next_key = 0;
    std::size_t next_decoy = 0;
    for (std::size_t s = 0; s < line_len; ++s) {
      ParticleId particle;
      if (next_decoy < d && decoy_slots[next_decoy] == s) {
        const auto state = static_cast<DecoyState>(alice_rng_.below(4));
        DecoyEntry entry{s, state, static_cast<int>(r)};
        particle = world_.create_single(qsim::eigenstate(entry.basis(), entry.bit()));
        decoys_.add(entry);
        count_qubit(QubitKind::Decoy);
        ++next_decoy;
      } else {
        particle = outgoing[r][next_key++];
      }
      agent.line[s] = adversary_.tap_key_line(world_, static_cast<int>(r), s, particle, adversary_rng_);
    }
    trace("Alice sends line ", r, ": ", n, " key particles and ", d, " decoys");
  }

  const CheckTally decoy = run_decoy_check();

  // Once the decoy slots are public every agent knows which slot holds which key position.
  for (std::size_t r = 0; r < m; ++r) {
    AgentState& agent = agents_[r];
    std::vector<bool> is_decoy(line_len, false);
    for (const DecoyEntry& e : decoys_.for_agent(static_cast<int>(r))) is_decoy[e.slot] = true;
    std::vector<std::optional<std::size_t>> slot_to_position(line_len);
    agent.key.assign(n, ParticleId{});
    std::size_t k = 0;
    for (std::size_t s = 0; s < line_len; ++s) {
      if (is_decoy[s]) continue;
      agent.key[k] = agent.line[s];
      slot_to_position[s] = k++;
    }
    adversary_.observe_line_mapping(static_cast<int>(r), slot_to_position);
  }

  const auto samples = alice_rng_.choose(n, config_.e1_sample_count());
  const CheckTally e1 = run_parity_check(samples, CheckPhase::KeyDistribution);
  for (std::size_t k : samples) key_.mark_consumed(k);

  transcript_.decoy += decoy;
  transcript_.e1 += e1;
  trace("  decoy errors ", decoy.errors, "/", decoy.total, ", key-check errors ", e1.errors, "/", e1.total);

  const CheckTally* tallies[] = {&decoy, &e1};
  const Verdict verdict = conclude(CheckPhase::KeyDistribution, tallies);
  if (verdict == Verdict::Secure) {
    adversary_.swap_remaining(world_, adversary_rng_);
    key_ready_ = true;
  } else {
    ++transcript_.distribution_aborts;
  }
  return verdict;
}

CheckTally Session::run_decoy_check() {
  CheckTally tally;
  const std::size_t line_len = config_.key_len + config_.decoys_per_agent();
  for (int r = 0; r < config_.num_agents; ++r) {
    const auto entries = decoys_.for_agent(r);
    if (entries.empty()) continue;
    PositionReveal reveal{{}, line_len};
    BasisAnnounce bases;
    for (const DecoyEntry& e : entries) {
      reveal.positions.push_back(e.slot);
      bases.bases.push_back(e.basis());
    }
    send(PartyId::alice(), PartyId::agent(r), CheckPhase::Decoy, reveal);
    send(PartyId::alice(), PartyId::agent(r), CheckPhase::Decoy, bases);

    AgentState& agent = agents_[static_cast<std::size_t>(r)];
    ResultAnnounce results;
    for (const DecoyEntry& e : entries) {
      const ParticleId p = agent.line[e.slot];
      results.bits.push_back(world_.measure(p, e.basis(), agent.rng));
      world_.discard(p);
    }
    send(PartyId::agent(r), PartyId::alice(), CheckPhase::Decoy, results);

    for (std::size_t i = 0; i < entries.size(); ++i) tally.record(results.bits[i] != entries[i].bit());
  }
  return tally;
}

CheckTally Session::run_parity_check(std::span<const std::size_t> positions, CheckPhase phase) {
  CheckTally tally;
  if (positions.empty()) return tally;
  const auto m = static_cast<std::size_t>(config_.num_agents);
  send(PartyId::alice(), PartyId::broadcast(), phase,
       PositionReveal{{positions.begin(), positions.end()}, config_.key_len});

  // Every agent announces its bases before anybody publishes a result.
  std::vector<std::vector<Basis>> bases(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      bases[r].push_back(random_check_basis(agents_[r].rng));
    }
    send(PartyId::agent(static_cast<int>(r)), PartyId::broadcast(), phase, BasisAnnounce{bases[r]});
  }

  std::vector<Bit> alice_bits;
  std::vector<Basis> alice_bases;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    std::vector<Basis> agent_bases;
    for (std::size_t r = 0; r < m; ++r) agent_bases.push_back(bases[r][i]);
    const Basis b = ghz::alice_basis_choice(key_.at(positions[i]).label, agent_bases);
    alice_bases.push_back(b);
    alice_bits.push_back(world_.measure(alice_particles_[positions[i]], b, alice_rng_));
  }

  std::vector<std::vector<Bit>> results(m);
  for (std::size_t r = 0; r < m; ++r) {
    AgentState& agent = agents_[r];
    const int ri = static_cast<int>(r);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const std::size_t k = positions[i];
      Bit bit;
      if (adversary_.is_cheater(ri) && adversary_.attacked(k)) {
        const auto victim = static_cast<std::size_t>(adversary_.descriptor().victim);
        bit = adversary_.cheat_publish(world_, k, agent.key[k], bases[r][i], bases[victim][i], agent.rng);
      } else {
        bit = world_.measure(agent.key[k], bases[r][i], agent.rng);
      }
      results[r].push_back(bit);
    }
    send(PartyId::agent(ri), PartyId::alice(), phase, ResultAnnounce{results[r]});
  }

  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::size_t k = positions[i];
    std::vector<Basis> all_bases{alice_bases[i]};
    std::vector<Bit> bits{alice_bits[i]};
    for (std::size_t r = 0; r < m; ++r) {
      all_bases.push_back(bases[r][i]);
      bits.push_back(results[r][i]);
    }
    const bool error = ghz::parity_of(bits) != ghz::expected_parity(key_.at(k).label, all_bases);
    tally.record(error);
    trace("  ", to_string(phase), " check on entry ", k, ": ", error ? "parity error" : "ok");
  }
  return tally;
}

Bit Session::report_bit(int agent, Bit message, std::size_t position) {
  return report_impl(agent, message, position, QubitKind::MessageCarrier);
}

Bit Session::report_impl(int agent, Bit message, std::size_t position, QubitKind kind) {
  require_agent(agent);
  if (!key_ready_) throw std::logic_error("report_bit before a secure key distribution");
  if (!key_.usable_by(position, agent)) {
    throw std::logic_error("key entry " + std::to_string(position) + " is not fresh for agent " +
                           std::to_string(agent));
  }
  const auto r = static_cast<std::size_t>(agent);

  // Agent: T in |message>, CNot with its key particle as control.
  ParticleId carrier = world_.create_single(qsim::make_basis_state(1, message ? "1" : "0"));
  world_.cnot(agents_[r].key[position], carrier);
  carrier = adversary_.tap_travelling(world_, agent, carrier, adversary_rng_);
  count_qubit(kind);

  // Alice: flip A when B_r is anti-correlated, CNot A -> T, flip A back, read T.
  const ParticleId a = alice_particles_[position];
  const bool anti = key_.at(position).label.corr_bits[r] != 0;
  if (anti) world_.apply(a, qsim::Gate::X);
  world_.cnot(a, carrier);
  if (anti) world_.apply(a, qsim::Gate::X);
  const Bit recovered = world_.measure(carrier, Basis::Z, alice_rng_);
  world_.discard(carrier);

  key_.mark_used(position, agent);
  trace("  agent ", agent, " sends ", int{message}, " with entry ", position, ", Alice reads ",
        int{recovered}, anti ? " (after sigma_x)" : "");
  return recovered;
}

double Session::check_transmission_e3(int agent, std::span<const SampleRecord> samples) {
  require_agent(agent);
  const std::size_t sequence_length = key_.size();
  PositionReveal reveal{{}, sequence_length};
  ResultAnnounce announced;
  for (const SampleRecord& s : samples) {
    reveal.positions.push_back(s.slot);
    announced.bits.push_back(s.announced);
  }
  send(PartyId::agent(agent), PartyId::alice(), CheckPhase::Transmission, std::move(reveal));
  send(PartyId::agent(agent), PartyId::alice(), CheckPhase::Transmission, std::move(announced));
  CheckTally tally;
  for (const SampleRecord& s : samples) tally.record(s.announced != s.recovered);
  round_e3_ += tally;
  transcript_.e3 += tally;
  return tally.rate();
}

Verdict Session::reuse_check(double fraction) {
  const auto used = key_.positions_with(ghz::KeyStatus::UsedForMessage);
  const std::size_t count = ProtocolConfig::sample_count(fraction, used.size());

  std::vector<std::size_t> preferred;
  std::vector<std::size_t> others;
  for (std::size_t k : used) {
    const bool carried_sample = std::find(sample_positions_this_round_.begin(),
                                          sample_positions_this_round_.end(),
                                          k) != sample_positions_this_round_.end();
    (carried_sample ? preferred : others).push_back(k);
  }
  std::vector<std::size_t> chosen;
  if (count <= preferred.size()) {
    for (std::size_t i : alice_rng_.choose(preferred.size(), count)) chosen.push_back(preferred[i]);
  } else {
    chosen = preferred;
    for (std::size_t i : alice_rng_.choose(others.size(), count - preferred.size())) {
      chosen.push_back(others[i]);
    }
    std::sort(chosen.begin(), chosen.end());
  }

  const CheckTally tally = run_parity_check(chosen, CheckPhase::Reuse);
  for (std::size_t k : chosen) key_.mark_consumed(k);
  round_reuse_ += tally;
  transcript_.reuse += tally;

  const CheckTally* tallies[] = {&tally};
  const Verdict verdict = conclude(CheckPhase::Reuse, tallies);
  if (verdict == Verdict::Secure) {
    key_.release_used();
  } else {
    key_ready_ = false;
  }
  return verdict;
}

const RoundRecord& Session::run_round() {
  if (!key_ready_) throw std::logic_error("run_round without a usable key");
  const auto m = static_cast<std::size_t>(config_.num_agents);
  const auto fresh = key_.positions_with(ghz::KeyStatus::Fresh);
  if (fresh.empty()) throw std::logic_error("run_round with an exhausted key");

  RoundRecord record;
  record.index = round_;
  record.agents.resize(m);
  sample_positions_this_round_.clear();
  round_e3_ = {};
  round_reuse_ = {};
  trace("Round ", round_, " over ", fresh.size(), " key entries");

  for (std::size_t r = 0; r < m; ++r) {
    AgentState& agent = agents_[r];
    const std::size_t n_samples = ProtocolConfig::sample_count(config_.sample_rate_e3, fresh.size());
    const auto sample_slots = agent.rng.choose(fresh.size(), n_samples);
    std::vector<SampleRecord> samples;
    std::size_t next_sample = 0;
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      const bool is_sample = next_sample < sample_slots.size() && sample_slots[next_sample] == i;
      const Bit alpha = agent.rng.bit();
      const Bit got = report_impl(static_cast<int>(r), alpha, fresh[i],
                                  is_sample ? QubitKind::SampleCarrier : QubitKind::MessageCarrier);
      if (is_sample) {
        samples.push_back(SampleRecord{i, alpha, got});
        sample_positions_this_round_.push_back(fresh[i]);
        ++next_sample;
      } else {
        record.agents[r].sent.push_back(alpha);
        record.agents[r].recovered.push_back(got);
        ++record.message_qubits;
      }
    }
    check_transmission_e3(static_cast<int>(r), samples);
  }

  const CheckTally* tallies[] = {&round_e3_};
  record.verdict = conclude(CheckPhase::Transmission, tallies);
  if (record.verdict == Verdict::Secure) {
    record.verdict = reuse_check(config_.reuse_check_rate);
  } else {
    key_ready_ = false;
  }
  record.e3 = round_e3_;
  record.reuse = round_reuse_;
  if (record.verdict == Verdict::Secure) {
    transcript_.q_u += record.message_qubits;
  } else {
    transcript_.verdict = Verdict::Compromised;
  }
  transcript_.rounds.push_back(std::move(record));
  ++round_;
  return transcript_.rounds.back();
}

RoundTranscript Session::take_transcript() {
  transcript_.bus_log = bus_.log();
  return std::move(transcript_);
}

RoundTranscript run_protocol(const ProtocolConfig& config,
                             const adversary::StrategyDescriptor& strategy, int rounds,
                             std::ostream* trace) {
  adversary::Adversary adversary(strategy);
  Session session(config, adversary);
  session.set_trace(trace);

  Verdict verdict = Verdict::Compromised;
  for (int attempt = 0; attempt <= config.max_retries && verdict != Verdict::Secure; ++attempt) {
    verdict = session.distribute_key();
  }
  if (verdict != Verdict::Secure) {
    RoundTranscript t = session.take_transcript();
    t.verdict = Verdict::Compromised;
    t.distribution_aborted = true;
    return t;
  }
  for (int round = 0; round < rounds && session.fresh_entries() > 0; ++round) {
    if (session.run_round().verdict != Verdict::Secure) break;
  }
  return session.take_transcript();
}

}  // namespace mqsr::protocol
