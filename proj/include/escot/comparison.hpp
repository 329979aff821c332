#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "escot/channel.hpp"
#include "escot/editdist.hpp"
#include "escot/ot_extension.hpp"
#include "escot/sequence.hpp"

// Secure character equality: the sender offers a one-hot vector per
// database character (bit k set iff (k - y_j) mod n == 0) and the receiver
// selects with its own character code, so the transferred bit is the
// equality predicate. Pair indices never cross the wire; both parties
// derive them from the shared band schedule.

namespace escot {

// Bit k = 1 iff (k - y) mod n == 0; exactly bit y is set.
std::vector<std::uint8_t> one_hot_messages(std::uint8_t y, std::size_t n);

// Serves one batch: reads EXTEND_CORRECTION, answers EXTEND_MASKED built
// from Y's characters at the scheduled pairs. Adds count*(kappa+n) logical
// payload bits to the channel counter.
void serve_comparisons(const EncodedSequence& y, std::span<const IndexPair> pairs,
                       ExtensionSender& ext, wire::CountingChannel& ch);

// Requests one batch: writes EXTEND_CORRECTION from X's characters, reads
// EXTEND_MASKED, returns the equality bits aligned with `pairs`.
std::vector<std::uint8_t> request_comparisons(const EncodedSequence& x,
                                              std::span<const IndexPair> pairs,
                                              ExtensionReceiver& ext, wire::CountingChannel& ch);

}  // namespace escot
