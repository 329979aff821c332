#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "escot/channel.hpp"
#include "escot/crypto.hpp"
#include "escot/editdist.hpp"
#include "escot/sequence.hpp"
#include "escot/wire.hpp"

// Session orchestration for the private 1-vs-N edit-distance query:
// handshake, base OTs, then per database entry a banded DP on the client
// driven by batched secure comparisons served by the database holder.
// The client alone learns the outcomes; the server learns only how many
// stripes each entry consumed.

namespace escot {

enum class BatchingMode : std::uint8_t {
  PerStripe = 0,  // one band row per round trip; preserves early abort
  WholeBand = 1,  // whole band up front; fewest round trips on high latency
};

struct SessionConfig {
  std::uint32_t phi_bits = 1024;
  std::uint32_t kappa = 80;
  std::uint32_t alphabet_size = 4;
  Threshold threshold{60};
  BatchingMode batching = BatchingMode::PerStripe;
  std::uint8_t version = wire::kProtocolVersion;

  void validate() const;
};

struct EntryReport {
  std::string id;
  std::size_t entry_length = 0;
  std::uint32_t stripes_total = 0;
  std::uint32_t stripes_executed = 0;  // wire batches for this entry
  std::uint64_t comparisons = 0;
  std::uint64_t payload_bits = 0;
  // Client side only; the server never learns outcomes.
  std::optional<EditDistanceResult> outcome;
};

struct SessionMetrics {
  double duration_s = 0.0;
  std::uint64_t framed_bytes_in = 0;
  std::uint64_t framed_bytes_out = 0;
  std::uint64_t payload_bits = 0;  // == base_ot_payload_bits + comparisons*(kappa+n)
  std::uint64_t base_ot_payload_bits = 0;
  std::uint64_t comparison_payload_bits = 0;
  std::uint64_t comparisons = 0;
  std::uint32_t base_ots = 0;
  std::vector<EntryReport> per_entry;
};

struct MatchResult {
  std::string id;
  EditDistanceResult outcome = EditDistanceResult::exceeds_threshold();
};

struct QueryOutcome {
  std::vector<MatchResult> results;  // one per database entry, in order
  SessionMetrics metrics;
};

// Shared stripe derivation (identical on both sides; cell indices never
// cross the wire).
inline std::vector<Stripe> band_schedule(std::size_t m, std::size_t m_prime, Threshold k) {
  return band_cells(m, m_prime, k);
}

// One client session over an arbitrary channel. Throws ProtocolError on
// REJECT and TransportError/ConnectionClosed on channel failure.
QueryOutcome run_client_session(const EncodedSequence& query, const SessionConfig& config,
                                wire::Channel& channel, crypto::RandomSource& rng);
QueryOutcome run_client_session(const EncodedSequence& query, const SessionConfig& config,
                                wire::Channel& channel);

// One server session over an arbitrary channel. Sends REJECT and throws
// ProtocolError on handshake mismatch.
SessionMetrics serve_session(const SequenceDatabase& db, const SessionConfig& config,
                             wire::Channel& channel, crypto::RandomSource& rng);
SessionMetrics serve_session(const SequenceDatabase& db, const SessionConfig& config,
                             wire::Channel& channel);

// TCP front ends.
QueryOutcome run_client(const EncodedSequence& query, const SessionConfig& config,
                        const std::string& host, std::uint16_t port);

struct ServerOptions {
  std::size_t max_sessions = 4;
  std::function<void(const SessionMetrics&)> on_session;
  std::function<void(const std::string&)> on_error;
};

// Accept loop; returns when the listener is closed from another thread.
void run_server(const SequenceDatabase& db, const SessionConfig& config,
                wire::TcpListener& listener, const ServerOptions& options = {});

}  // namespace escot
