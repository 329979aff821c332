#include "escot/kernels.hpp"

#include <cstring>

#include "escot/wire.hpp"

namespace escot::kernels {

namespace {

constexpr std::size_t kParallelCutoff = 4096;  // rows below this run serial

const std::uint8_t kPadLabel[] = {'e', 'x', 't', '/', 'p', 'a', 'd'};

// 8x8 bit-tile transpose; bit (8r + c) of the word is row r, column c in
// little-endian bit order.
inline std::uint64_t transpose8(std::uint64_t x) {
  std::uint64_t t;
  t = (x ^ (x >> 7)) & 0x00AA00AA00AA00AAull;
  x = x ^ t ^ (t << 7);
  t = (x ^ (x >> 14)) & 0x0000CCCC0000CCCCull;
  x = x ^ t ^ (t << 14);
  t = (x ^ (x >> 28)) & 0x00000000F0F0F0F0ull;
  x = x ^ t ^ (t << 28);
  return x;
}

inline std::uint8_t pad_bit(const SessionTag& tag, std::uint64_t index, const std::uint8_t* row,
                            std::size_t row_bytes) {
  std::uint8_t idx[8];
  for (int s = 7; s >= 0; --s, index >>= 8) idx[s] = static_cast<std::uint8_t>(index & 0xFF);
  crypto::Sha256Digest d =
      crypto::sha256({std::span<const std::uint8_t>(kPadLabel, sizeof kPadLabel),
                      std::span<const std::uint8_t>(tag.data(), tag.size()),
                      std::span<const std::uint8_t>(idx, 8),
                      std::span<const std::uint8_t>(row, row_bytes)});
  return d[0] & 1;
}

// One block of output rows [c0, c1) for the tiled transpose; tiles touch
// disjoint output bytes per column block, so blocks can run concurrently.
void transpose_block(const std::uint8_t* in, std::size_t in_rows, std::size_t in_cols,
                     std::size_t in_stride, std::uint8_t* out, std::size_t out_stride,
                     std::size_t c0, std::size_t c1) {
  const std::size_t row_tiles = in_rows / 8;
  for (std::size_t cb = c0 / 8; cb * 8 < c1; ++cb) {
    const std::size_t cbase = cb * 8;
    const std::size_t cspan = std::min<std::size_t>(8, in_cols - cbase);
    for (std::size_t rb = 0; rb < row_tiles; ++rb) {
      std::uint64_t w = 0;
      const std::uint8_t* src = in + rb * 8 * in_stride + cb;
      for (int r = 0; r < 8; ++r) w |= static_cast<std::uint64_t>(src[r * in_stride]) << (8 * r);
      std::uint64_t v = transpose8(w);
      std::uint8_t* dst = out + cbase * out_stride + rb;
      for (std::size_t c = 0; c < cspan; ++c)
        dst[c * out_stride] = static_cast<std::uint8_t>(v >> (8 * c));
    }
    // leftover input rows (in_rows not a multiple of 8)
    for (std::size_t r = row_tiles * 8; r < in_rows; ++r)
      for (std::size_t c = cbase; c < cbase + cspan; ++c)
        wire::set_bit(out + c * out_stride, r, wire::get_bit(in + r * in_stride, c));
  }
}

}  // namespace

void xor_bytes(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
}

void expand_columns_serial(std::span<crypto::KeyStream> streams, std::size_t bytes_per_column,
                           std::uint8_t* out, std::size_t stride) {
  for (std::size_t i = 0; i < streams.size(); ++i)
    streams[i].next_bytes({out + i * stride, bytes_per_column});
}

void expand_columns_parallel(std::span<crypto::KeyStream> streams, std::size_t bytes_per_column,
                             std::uint8_t* out, std::size_t stride) {
  const auto count = static_cast<std::int64_t>(streams.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i)
    streams[i].next_bytes({out + static_cast<std::size_t>(i) * stride, bytes_per_column});
}

void transpose_bits_serial(const std::uint8_t* in, std::size_t in_rows, std::size_t in_cols,
                           std::size_t in_stride, std::uint8_t* out, std::size_t out_stride) {
  for (std::size_t r = 0; r < in_rows; ++r)
    for (std::size_t c = 0; c < in_cols; ++c)
      wire::set_bit(out + c * out_stride, r, wire::get_bit(in + r * in_stride, c));
}

void transpose_bits_parallel(const std::uint8_t* in, std::size_t in_rows, std::size_t in_cols,
                             std::size_t in_stride, std::uint8_t* out, std::size_t out_stride) {
  const std::size_t col_blocks = (in_cols + 7) / 8;
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(col_blocks); ++b) {
    const std::size_t c0 = static_cast<std::size_t>(b) * 8;
    transpose_block(in, in_rows, in_cols, in_stride, out, out_stride, c0,
                    std::min(in_cols, c0 + 8));
  }
}

void mask_sender_rows_serial(const SessionTag& tag, std::uint64_t base_index,
                             const std::uint8_t* rows, std::size_t count, std::size_t row_bytes,
                             const std::uint8_t* masked_codewords, std::size_t n,
                             const std::uint8_t* message_bits, std::uint8_t* out_bits) {
  std::vector<std::uint8_t> tmp(row_bytes);
  for (std::size_t j = 0; j < count; ++j) {
    const std::uint8_t* row = rows + j * row_bytes;
    for (std::size_t v = 0; v < n; ++v) {
      std::memcpy(tmp.data(), row, row_bytes);
      xor_bytes(tmp.data(), masked_codewords + v * row_bytes, row_bytes);
      std::uint8_t pad = pad_bit(tag, base_index + j, tmp.data(), row_bytes);
      std::size_t pos = j * n + v;
      wire::set_bit(out_bits, pos, wire::get_bit(message_bits, pos) ^ pad);
    }
  }
}

void mask_sender_rows_parallel(const SessionTag& tag, std::uint64_t base_index,
                               const std::uint8_t* rows, std::size_t count, std::size_t row_bytes,
                               const std::uint8_t* masked_codewords, std::size_t n,
                               const std::uint8_t* message_bits, std::uint8_t* out_bits) {
  // Threads own whole output bytes: chunk rows so that j*n stays byte-aligned
  // at chunk boundaries (lcm(8,n)/n rows per slot).
  const std::size_t rows_per_slot = n % 8 == 0 ? 1 : (8 % n == 0 ? 8 / n : 8);
  const std::size_t slots = (count + rows_per_slot - 1) / rows_per_slot;
#pragma omp parallel
  {
    std::vector<std::uint8_t> tmp(row_bytes);
#pragma omp for schedule(static)
    for (std::int64_t slot = 0; slot < static_cast<std::int64_t>(slots); ++slot) {
      const std::size_t j0 = static_cast<std::size_t>(slot) * rows_per_slot;
      const std::size_t j1 = std::min(count, j0 + rows_per_slot);
      for (std::size_t j = j0; j < j1; ++j) {
        const std::uint8_t* row = rows + j * row_bytes;
        for (std::size_t v = 0; v < n; ++v) {
          std::memcpy(tmp.data(), row, row_bytes);
          xor_bytes(tmp.data(), masked_codewords + v * row_bytes, row_bytes);
          std::uint8_t pad = pad_bit(tag, base_index + j, tmp.data(), row_bytes);
          std::size_t pos = j * n + v;
          wire::set_bit(out_bits, pos, wire::get_bit(message_bits, pos) ^ pad);
        }
      }
    }
  }
}

void unmask_receiver_rows_serial(const SessionTag& tag, std::uint64_t base_index,
                                 const std::uint8_t* rows, std::size_t count, std::size_t row_bytes,
                                 const std::uint8_t* choices, std::size_t n,
                                 const std::uint8_t* masked_bits, std::uint8_t* out) {
  for (std::size_t j = 0; j < count; ++j) {
    std::uint8_t pad = pad_bit(tag, base_index + j, rows + j * row_bytes, row_bytes);
    out[j] = static_cast<std::uint8_t>(wire::get_bit(masked_bits, j * n + choices[j]) ^ pad);
  }
}

void unmask_receiver_rows_parallel(const SessionTag& tag, std::uint64_t base_index,
                                   const std::uint8_t* rows, std::size_t count, std::size_t row_bytes,
                                   const std::uint8_t* choices, std::size_t n,
                                   const std::uint8_t* masked_bits, std::uint8_t* out) {
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(count); ++j) {
    std::uint8_t pad = pad_bit(tag, base_index + static_cast<std::uint64_t>(j),
                               rows + static_cast<std::size_t>(j) * row_bytes, row_bytes);
    out[j] = static_cast<std::uint8_t>(
        wire::get_bit(masked_bits, static_cast<std::size_t>(j) * n + choices[j]) ^ pad);
  }
}

void expand_columns(std::span<crypto::KeyStream> streams, std::size_t bytes_per_column,
                    std::uint8_t* out, std::size_t stride) {
  if (bytes_per_column * streams.size() >= kParallelCutoff)
    expand_columns_parallel(streams, bytes_per_column, out, stride);
  else
    expand_columns_serial(streams, bytes_per_column, out, stride);
}

void transpose_bits(const std::uint8_t* in, std::size_t in_rows, std::size_t in_cols,
                    std::size_t in_stride, std::uint8_t* out, std::size_t out_stride) {
  if (in_rows * in_cols >= kParallelCutoff * 8)
    transpose_bits_parallel(in, in_rows, in_cols, in_stride, out, out_stride);
  else if (in_rows % 8 == 0 || in_rows * in_cols >= 4096)
    transpose_block(in, in_rows, in_cols, in_stride, out, out_stride, 0, in_cols);
  else
    transpose_bits_serial(in, in_rows, in_cols, in_stride, out, out_stride);
}

void mask_sender_rows(const SessionTag& tag, std::uint64_t base_index, const std::uint8_t* rows,
                      std::size_t count, std::size_t row_bytes, const std::uint8_t* masked_codewords,
                      std::size_t n, const std::uint8_t* message_bits, std::uint8_t* out_bits) {
  if (count * n >= kParallelCutoff)
    mask_sender_rows_parallel(tag, base_index, rows, count, row_bytes, masked_codewords, n,
                              message_bits, out_bits);
  else
    mask_sender_rows_serial(tag, base_index, rows, count, row_bytes, masked_codewords, n,
                            message_bits, out_bits);
}

void unmask_receiver_rows(const SessionTag& tag, std::uint64_t base_index, const std::uint8_t* rows,
                          std::size_t count, std::size_t row_bytes, const std::uint8_t* choices,
                          std::size_t n, const std::uint8_t* masked_bits, std::uint8_t* out) {
  if (count >= kParallelCutoff)
    unmask_receiver_rows_parallel(tag, base_index, rows, count, row_bytes, choices, n, masked_bits,
                                  out);
  else
    unmask_receiver_rows_serial(tag, base_index, rows, count, row_bytes, choices, n, masked_bits,
                                out);
}

}  // namespace escot::kernels
