#include "mqsr/protocol/messages.hpp"

#include <bit>

#include "json.hpp"

namespace mqsr::protocol {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

std::size_t position_bits(std::size_t sequence_length) {
  if (sequence_length <= 1) return 0;
  return static_cast<std::size_t>(std::bit_width(sequence_length - 1));
}

std::size_t ClassicalMessage::bits() const {
  return std::visit(
      Overloaded{
          [](const BasisAnnounce& m) { return m.bases.size(); },
          [](const ResultAnnounce& m) { return m.bits.size(); },
          [](const PositionReveal& m) { return m.positions.size() * position_bits(m.sequence_length); },
          [](const VerdictNotice&) { return std::size_t{1}; },
          [](const AbortNotice&) { return std::size_t{1}; },
      },
      payload);
}

std::string ClassicalMessage::kind() const {
  return std::visit(Overloaded{
                        [](const BasisAnnounce&) { return std::string("basis-announce"); },
                        [](const ResultAnnounce&) { return std::string("result-announce"); },
                        [](const PositionReveal&) { return std::string("position-reveal"); },
                        [](const VerdictNotice&) { return std::string("verdict"); },
                        [](const AbortNotice&) { return std::string("abort"); },
                    },
                    payload);
}

std::size_t ClassicalBus::send(ClassicalMessage message) {
  const std::size_t b = message.bits();
  bits_ += b;
  log_.push_back(std::move(message));
  return b;
}

std::string to_string(CheckPhase phase) {
  switch (phase) {
    case CheckPhase::Decoy: return "decoy";
    case CheckPhase::KeyDistribution: return "e1";
    case CheckPhase::Transmission: return "e3";
    case CheckPhase::Reuse: return "reuse";
  }
  return "?";
}

std::string serialize(const ClassicalMessage& message) {
  nlohmann::json j;
  j["kind"] = message.kind();
  j["from"] = message.sender.value;
  j["to"] = message.receiver.value;
  j["phase"] = to_string(message.phase);
  std::visit(Overloaded{
                 [&](const BasisAnnounce& m) {
                   auto& arr = j["bases"] = nlohmann::json::array();
                   for (auto b : m.bases) arr.push_back(std::string(qsim::to_string(b)));
                 },
                 [&](const ResultAnnounce& m) { j["bits"] = m.bits; },
                 [&](const PositionReveal& m) {
                   j["positions"] = m.positions;
                   j["length"] = m.sequence_length;
                 },
                 [&](const VerdictNotice& m) { j["secure"] = m.secure; },
                 [](const AbortNotice&) {},
             },
             message.payload);
  return j.dump();
}

}  // namespace mqsr::protocol
