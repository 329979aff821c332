#include "escot/protocol.hpp"

#include <bit>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "escot/base_ot.hpp"
#include "escot/comparison.hpp"
#include "escot/ot_extension.hpp"

namespace escot {

namespace {

constexpr std::uint8_t kRejectVersion = 1;
constexpr std::uint8_t kRejectParameter = 2;

using Clock = std::chrono::steady_clock;

std::uint64_t total_pairs(const std::vector<Stripe>& schedule) {
  std::uint64_t total = 0;
  for (const auto& stripe : schedule) total += stripe.size();
  return total;
}

std::vector<IndexPair> flatten(const std::vector<Stripe>& schedule) {
  std::vector<IndexPair> flat;
  flat.reserve(total_pairs(schedule));
  for (const auto& stripe : schedule) flat.insert(flat.end(), stripe.begin(), stripe.end());
  return flat;
}

// Largest batch that honors both the in-flight cap and the frame cap.
std::size_t batch_cap(std::uint32_t kappa) {
  const std::size_t row_bytes = kappa / 8;
  return static_cast<std::size_t>(
      std::min<std::uint64_t>(kMaxInFlightOts, (wire::kMaxFramePayload - 64) / row_bytes));
}

struct EntryInfo {
  std::string id;
  std::uint32_t length = 0;
};

struct HelloFields {
  std::uint8_t version = 0;
  std::uint32_t phi_bits = 0;
  std::uint32_t kappa = 0;
  std::uint32_t alphabet_size = 0;
  std::uint32_t threshold = 0;
  std::uint8_t batching = 0;
  std::uint32_t query_length = 0;
  SessionId session{};
};

void send_reject(wire::Channel& ch, std::uint8_t reason, const std::string& message) {
  wire::PayloadWriter w;
  w.u8(reason);
  w.string16(message);
  wire::write_frame(ch, wire::FrameType::Reject, w.data());
  ch.flush();
}

// Issues one STRIPE_REQUEST + comparison exchange per engine batch.
class WireStripeComparator final : public EqualityComparator {
 public:
  WireStripeComparator(const EncodedSequence& query, ExtensionReceiver& ext,
                       wire::CountingChannel& ch)
      : query_(query), ext_(ext), ch_(ch) {}

  std::vector<std::uint8_t> compare_batch(std::span<const IndexPair> pairs) override {
    wire::PayloadWriter w;
    w.u32(static_cast<std::uint32_t>(pairs.size()));
    wire::write_frame(ch_, wire::FrameType::StripeRequest, w.data());
    ++batches_;
    comparisons_ += pairs.size();
    return request_comparisons(query_, pairs, ext_, ch_);
  }

  std::uint32_t batches() const { return batches_; }
  std::uint64_t comparisons() const { return comparisons_; }

 private:
  const EncodedSequence& query_;
  ExtensionReceiver& ext_;
  wire::CountingChannel& ch_;
  std::uint32_t batches_ = 0;
  std::uint64_t comparisons_ = 0;
};

// Transfers the whole band in capped chunks on first use, then replays the
// cached bits to the engine. Identical results to per-stripe batching; the
// server side is agnostic to the difference.
class WholeBandComparator final : public EqualityComparator {
 public:
  WholeBandComparator(const EncodedSequence& query, ExtensionReceiver& ext,
                      wire::CountingChannel& ch, const std::vector<Stripe>& schedule,
                      std::size_t cap)
      : query_(query), ext_(ext), ch_(ch), flat_(flatten(schedule)), cap_(cap) {}

  std::vector<std::uint8_t> compare_batch(std::span<const IndexPair> pairs) override {
    fetch_all();
    if (cursor_ + pairs.size() > flat_.size())
      throw ProtocolError("band schedule overrun in whole-band replay");
    for (std::size_t t = 0; t < pairs.size(); ++t)
      if (!(flat_[cursor_ + t] == pairs[t]))
        throw ProtocolError("engine requested cells outside the shared schedule");
    std::vector<std::uint8_t> out(bits_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                                  bits_.begin() + static_cast<std::ptrdiff_t>(cursor_ + pairs.size()));
    cursor_ += pairs.size();
    return out;
  }

  void fetch_all() {
    if (fetched_) return;
    fetched_ = true;
    bits_.reserve(flat_.size());
    std::size_t done = 0;
    while (done < flat_.size()) {
      std::size_t count = std::min(cap_, flat_.size() - done);
      wire::PayloadWriter w;
      w.u32(static_cast<std::uint32_t>(count));
      wire::write_frame(ch_, wire::FrameType::StripeRequest, w.data());
      ++batches_;
      auto chunk = request_comparisons(query_, {flat_.data() + done, count}, ext_, ch_);
      bits_.insert(bits_.end(), chunk.begin(), chunk.end());
      done += count;
    }
  }

  std::uint32_t batches() const { return batches_; }
  std::uint64_t comparisons() const { return fetched_ ? flat_.size() : 0; }

 private:
  const EncodedSequence& query_;
  ExtensionReceiver& ext_;
  wire::CountingChannel& ch_;
  std::vector<IndexPair> flat_;
  std::size_t cap_;
  bool fetched_ = false;
  std::vector<std::uint8_t> bits_;
  std::size_t cursor_ = 0;
  std::uint32_t batches_ = 0;
};

}  // namespace

void SessionConfig::validate() const {
  if (phi_bits != 1024 && phi_bits != 2048) throw InvalidParameter("phi must be 1024 or 2048");
  if (kappa != 80 && kappa != 128) throw InvalidParameter("kappa must be 80 or 128");
  if (alphabet_size < 2 || alphabet_size > kappa ||
      kappa % std::bit_ceil(alphabet_size) != 0)
    throw InvalidParameter("alphabet size not supported by the codebook for this kappa");
  if (batching != BatchingMode::PerStripe && batching != BatchingMode::WholeBand)
    throw InvalidParameter("unknown batching mode");
}

QueryOutcome run_client_session(const EncodedSequence& query, const SessionConfig& config,
                                wire::Channel& channel, crypto::RandomSource& rng) {
  config.validate();
  if (query.length() == 0) throw InvalidParameter("empty query");

  wire::CountingChannel ch(channel);
  const auto t0 = Clock::now();

  SessionId session{};
  rng.fill(session);

  wire::PayloadWriter hello;
  hello.u8(config.version);
  hello.u16(static_cast<std::uint16_t>(config.phi_bits));
  hello.u16(static_cast<std::uint16_t>(config.kappa));
  hello.u16(static_cast<std::uint16_t>(config.alphabet_size));
  hello.u32(config.threshold.k);
  hello.u8(static_cast<std::uint8_t>(config.batching));
  hello.u32(static_cast<std::uint32_t>(query.length()));
  hello.bytes(session);
  wire::write_frame(ch, wire::FrameType::Hello, hello.data());
  ch.flush();

  wire::Frame resp = wire::read_frame(ch);
  if (resp.type == wire::FrameType::Reject) {
    wire::PayloadReader r(resp.payload);
    std::uint8_t reason = r.u8();
    std::string message = r.string16();
    throw ProtocolError("server rejected session (" +
                        std::string(reason == kRejectVersion ? "version" : "parameters") +
                        "): " + message);
  }
  if (resp.type != wire::FrameType::Accept)
    throw ProtocolError(std::string("expected ACCEPT, got ") + wire::frame_type_name(resp.type));

  wire::PayloadReader accept(resp.payload);
  if (accept.u8() != config.version) throw ProtocolError("ACCEPT carries wrong version");
  const std::uint32_t entry_count = accept.u32();
  std::vector<EntryInfo> entries(entry_count);
  for (auto& e : entries) {
    e.id = accept.string16();
    e.length = accept.u32();
    if (e.length == 0) throw ProtocolError("zero-length database entry announced");
  }
  accept.expect_done();

  QueryOutcome outcome;
  outcome.results.reserve(entry_count);
  outcome.metrics.per_entry.reserve(entry_count);
  if (entries.empty()) {
    // nothing to compare; the base-OT phase is skipped on both sides
    wire::expect_frame(ch, wire::FrameType::SessionDone);
    outcome.metrics.duration_s = std::chrono::duration<double>(Clock::now() - t0).count();
    outcome.metrics.framed_bytes_in = ch.bytes_in();
    outcome.metrics.framed_bytes_out = ch.bytes_out();
    return outcome;
  }

  const GroupParams& group = GroupParams::modp(config.phi_bits);
  BaseOtSenderBatch seeds = run_base_ots_sender(group, config.kappa, ch, rng, session);
  const std::uint64_t base_ot_bits = ch.payload_bits();

  std::uint64_t expected = 0;
  for (const auto& e : entries)
    expected += total_pairs(band_schedule(query.length(), e.length, config.threshold));
  CodeBook codebook = CodeBook::build(config.alphabet_size, config.kappa);
  ExtensionReceiver ext(seeds, std::move(codebook), session, std::max<std::uint64_t>(1, expected));

  const std::size_t cap = batch_cap(config.kappa);
  for (const auto& announced : entries) {
    wire::Frame begin = wire::expect_frame(ch, wire::FrameType::EntryBegin);
    wire::PayloadReader r(begin.payload);
    EntryInfo entry{r.string16(), r.u32()};
    r.expect_done();
    if (entry.id != announced.id || entry.length != announced.length)
      throw ProtocolError("ENTRY_BEGIN does not match the announced database layout");

    const auto schedule = band_schedule(query.length(), entry.length, config.threshold);
    const std::uint64_t pairs_in_band = total_pairs(schedule);
    const std::uint64_t bits_before = ch.payload_bits();

    EditDistanceResult result = EditDistanceResult::exceeds_threshold();
    std::uint32_t batches = 0;
    std::uint64_t comparisons = 0;
    if (config.batching == BatchingMode::PerStripe) {
      WireStripeComparator cmp(query, ext, ch);
      result = banded_distance(query.length(), entry.length, config.threshold, cmp);
      batches = cmp.batches();
      comparisons = cmp.comparisons();
    } else {
      WholeBandComparator cmp(query, ext, ch, schedule, cap);
      result = banded_distance(query.length(), entry.length, config.threshold, cmp);
      batches = cmp.batches();
      comparisons = cmp.comparisons();
    }

    const bool aborted = comparisons < pairs_in_band;
    wire::write_frame(ch, aborted ? wire::FrameType::EntryAbort : wire::FrameType::EntryDone, {});
    ch.flush();

    outcome.results.push_back(MatchResult{entry.id, result});
    EntryReport report;
    report.id = entry.id;
    report.entry_length = entry.length;
    report.stripes_total = static_cast<std::uint32_t>(schedule.size());
    report.stripes_executed = batches;
    report.comparisons = comparisons;
    report.payload_bits = ch.payload_bits() - bits_before;
    report.outcome = result;
    outcome.metrics.per_entry.push_back(std::move(report));
    outcome.metrics.comparisons += comparisons;
  }

  wire::expect_frame(ch, wire::FrameType::SessionDone);

  outcome.metrics.duration_s = std::chrono::duration<double>(Clock::now() - t0).count();
  outcome.metrics.framed_bytes_in = ch.bytes_in();
  outcome.metrics.framed_bytes_out = ch.bytes_out();
  outcome.metrics.payload_bits = ch.payload_bits();
  outcome.metrics.base_ot_payload_bits = base_ot_bits;
  outcome.metrics.comparison_payload_bits = ch.payload_bits() - base_ot_bits;
  outcome.metrics.base_ots = config.kappa;
  return outcome;
}

QueryOutcome run_client_session(const EncodedSequence& query, const SessionConfig& config,
                                wire::Channel& channel) {
  crypto::SystemRandom rng;
  return run_client_session(query, config, channel, rng);
}

SessionMetrics serve_session(const SequenceDatabase& db, const SessionConfig& config,
                             wire::Channel& channel, crypto::RandomSource& rng) {
  config.validate();
  if (db.alphabet.size() != config.alphabet_size)
    throw InvalidParameter("database alphabet does not match session config");

  wire::CountingChannel ch(channel);
  const auto t0 = Clock::now();

  wire::Frame hello_frame = wire::expect_frame(ch, wire::FrameType::Hello);
  wire::PayloadReader r(hello_frame.payload);
  HelloFields hello;
  hello.version = r.u8();
  hello.phi_bits = r.u16();
  hello.kappa = r.u16();
  hello.alphabet_size = r.u16();
  hello.threshold = r.u32();
  hello.batching = r.u8();
  hello.query_length = r.u32();
  auto sid = r.bytes(hello.session.size());
  std::copy(sid.begin(), sid.end(), hello.session.begin());
  r.expect_done();

  if (hello.version != config.version) {
    send_reject(ch, kRejectVersion,
                "server speaks version " + std::to_string(config.version));
    throw ProtocolError("rejected client: version mismatch");
  }
  if (hello.phi_bits != config.phi_bits || hello.kappa != config.kappa ||
      hello.alphabet_size != config.alphabet_size || hello.threshold != config.threshold.k) {
    send_reject(ch, kRejectParameter, "session parameters do not match server configuration");
    throw ProtocolError("rejected client: parameter mismatch");
  }
  if (hello.batching > 1) {
    send_reject(ch, kRejectParameter, "unknown batching mode");
    throw ProtocolError("rejected client: unknown batching mode");
  }
  if (hello.query_length == 0) {
    send_reject(ch, kRejectParameter, "empty query");
    throw ProtocolError("rejected client: empty query");
  }

  wire::PayloadWriter accept;
  accept.u8(config.version);
  accept.u32(static_cast<std::uint32_t>(db.entries.size()));
  for (const auto& entry : db.entries) {
    accept.string16(entry.id);
    accept.u32(static_cast<std::uint32_t>(entry.length()));
  }
  wire::write_frame(ch, wire::FrameType::Accept, accept.data());
  ch.flush();

  SessionMetrics metrics;
  if (db.entries.empty()) {
    wire::write_frame(ch, wire::FrameType::SessionDone, {});
    ch.flush();
    metrics.duration_s = std::chrono::duration<double>(Clock::now() - t0).count();
    metrics.framed_bytes_in = ch.bytes_in();
    metrics.framed_bytes_out = ch.bytes_out();
    return metrics;
  }

  const GroupParams& group = GroupParams::modp(config.phi_bits);
  std::vector<std::uint8_t> s_bits(config.kappa);
  rng.fill(s_bits);
  for (auto& b : s_bits) b &= 1;
  BaseOtReceiverBatch seeds =
      run_base_ots_receiver(group, config.kappa, s_bits, ch, rng, hello.session);
  const std::uint64_t base_ot_bits = ch.payload_bits();

  std::uint64_t expected = 0;
  for (const auto& entry : db.entries)
    expected += total_pairs(band_schedule(hello.query_length, entry.length(), config.threshold));
  CodeBook codebook = CodeBook::build(config.alphabet_size, config.kappa);
  ExtensionSender ext(seeds, std::move(codebook), hello.session,
                      std::max<std::uint64_t>(1, expected));

  const std::size_t cap = batch_cap(config.kappa);
  metrics.per_entry.reserve(db.entries.size());

  for (const auto& entry : db.entries) {
    wire::PayloadWriter begin;
    begin.string16(entry.id);
    begin.u32(static_cast<std::uint32_t>(entry.length()));
    wire::write_frame(ch, wire::FrameType::EntryBegin, begin.data());
    ch.flush();

    const auto schedule = band_schedule(hello.query_length, entry.length(), config.threshold);
    const std::vector<IndexPair> flat = flatten(schedule);
    const std::uint64_t bits_before = ch.payload_bits();

    std::size_t cursor = 0;
    std::uint32_t batches = 0;
    for (;;) {
      wire::Frame f = wire::read_frame(ch);
      if (f.type == wire::FrameType::StripeRequest) {
        wire::PayloadReader sr(f.payload);
        const std::size_t count = sr.u32();
        sr.expect_done();
        if (count > flat.size() - cursor)
          throw ProtocolError("stripe request exceeds the shared band schedule");
        if (count > cap) throw ProtocolError("stripe request exceeds batch cap");
        serve_comparisons(entry, {flat.data() + cursor, count}, ext, ch);
        cursor += count;
        ++batches;
      } else if (f.type == wire::FrameType::EntryAbort || f.type == wire::FrameType::EntryDone) {
        break;
      } else {
        throw ProtocolError(std::string("unexpected frame ") + wire::frame_type_name(f.type) +
                            " inside entry");
      }
    }

    EntryReport report;
    report.id = entry.id;
    report.entry_length = entry.length();
    report.stripes_total = static_cast<std::uint32_t>(schedule.size());
    report.stripes_executed = batches;
    report.comparisons = cursor;
    report.payload_bits = ch.payload_bits() - bits_before;
    metrics.per_entry.push_back(std::move(report));
    metrics.comparisons += cursor;
  }

  wire::write_frame(ch, wire::FrameType::SessionDone, {});
  ch.flush();

  metrics.duration_s = std::chrono::duration<double>(Clock::now() - t0).count();
  metrics.framed_bytes_in = ch.bytes_in();
  metrics.framed_bytes_out = ch.bytes_out();
  metrics.payload_bits = ch.payload_bits();
  metrics.base_ot_payload_bits = base_ot_bits;
  metrics.comparison_payload_bits = ch.payload_bits() - base_ot_bits;
  metrics.base_ots = config.kappa;
  return metrics;
}

SessionMetrics serve_session(const SequenceDatabase& db, const SessionConfig& config,
                             wire::Channel& channel) {
  crypto::SystemRandom rng;
  return serve_session(db, config, channel, rng);
}

QueryOutcome run_client(const EncodedSequence& query, const SessionConfig& config,
                        const std::string& host, std::uint16_t port) {
  wire::TcpChannel channel = wire::TcpChannel::connect(host, port);
  QueryOutcome outcome = run_client_session(query, config, channel);
  channel.close();
  return outcome;
}

void run_server(const SequenceDatabase& db, const SessionConfig& config,
                wire::TcpListener& listener, const ServerOptions& options) {
  config.validate();
  std::mutex mu;
  std::condition_variable cv;
  std::size_t active = 0;

  auto report = [&](const SessionMetrics& m) {
    std::lock_guard lock(mu);
    if (options.on_session) options.on_session(m);
  };
  auto report_error = [&](const std::string& what) {
    std::lock_guard lock(mu);
    if (options.on_error) options.on_error(what);
  };

  try {
    for (;;) {
      wire::TcpChannel conn = listener.accept();
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return active < std::max<std::size_t>(1, options.max_sessions); });
        ++active;
      }
      std::thread([&, conn = std::move(conn)]() mutable {
        try {
          SessionMetrics m = serve_session(db, config, conn);
          report(m);
        } catch (const std::exception& e) {
          report_error(e.what());
        }
        conn.close();
        // notify under the lock: run_server may destroy the condition
        // variable as soon as it observes active == 0
        std::lock_guard lock(mu);
        --active;
        cv.notify_all();
      }).detach();
    }
  } catch (const TransportError&) {
    // listener closed; fall through to drain running sessions
  }
  std::unique_lock lock(mu);
  cv.wait(lock, [&] { return active == 0; });
}

}  // namespace escot
