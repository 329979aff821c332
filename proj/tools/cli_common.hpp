#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "escot/protocol.hpp"
#include "escot/sequence.hpp"

// Shared helpers for the escot-* binaries. Exit codes: 0 success,
// 1 protocol error, 2 usage/IO error.

namespace escot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitProtocol = 1;
inline constexpr int kExitUsage = 2;

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

inline Endpoint parse_endpoint(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos) throw std::runtime_error("endpoint must be host:port");
  Endpoint ep;
  ep.host = text.substr(0, colon);
  int port = std::stoi(text.substr(colon + 1));
  if (port < 1 || port > 65535) throw std::runtime_error("port out of range");
  ep.port = static_cast<std::uint16_t>(port);
  return ep;
}

inline SequenceFormat parse_format(const std::string& name) {
  if (name == "auto") return SequenceFormat::Auto;
  if (name == "lines") return SequenceFormat::PlainLines;
  if (name == "fasta") return SequenceFormat::Fasta;
  throw std::runtime_error("format must be auto, lines, or fasta");
}

inline BatchingMode parse_batching(const std::string& name) {
  if (name == "stripe") return BatchingMode::PerStripe;
  if (name == "band") return BatchingMode::WholeBand;
  throw std::runtime_error("batching must be stripe or band");
}

inline nlohmann::json metrics_to_json(const SessionMetrics& m) {
  nlohmann::json per_entry = nlohmann::json::array();
  for (const auto& e : m.per_entry) {
    nlohmann::json entry{
        {"id", e.id},
        {"entry_length", e.entry_length},
        {"stripes_total", e.stripes_total},
        {"stripes_executed", e.stripes_executed},
        {"comparisons", e.comparisons},
        {"payload_bits", e.payload_bits},
    };
    if (e.outcome) {
      entry["outcome"] = e.outcome->within_threshold() ? "distance" : "exceeds";
      entry["distance"] =
          e.outcome->within_threshold() ? nlohmann::json(e.outcome->value()) : nlohmann::json();
    }
    per_entry.push_back(std::move(entry));
  }
  return nlohmann::json{
      {"duration_s", m.duration_s},
      {"payload_bytes", static_cast<double>(m.payload_bits) / 8.0},
      {"payload_bits", m.payload_bits},
      {"framed_bytes", m.framed_bytes_in + m.framed_bytes_out},
      {"framed_bytes_in", m.framed_bytes_in},
      {"framed_bytes_out", m.framed_bytes_out},
      {"comparisons", m.comparisons},
      {"base_ots", m.base_ots},
      {"base_ot_payload_bits", m.base_ot_payload_bits},
      {"comparison_payload_bits", m.comparison_payload_bits},
      {"per_entry", std::move(per_entry)},
  };
}

}  // namespace escot::cli
