#pragma once

#include <cstdint>
#include <span>

#include "escot/crypto.hpp"

// Data-parallel inner loops of the OT extension. Each kernel has an
// OpenMP-parallel implementation and a serial reference; tests assert they
// agree bit-for-bit and bench/ compares their throughput.

namespace escot::kernels {

using SessionTag = std::array<std::uint8_t, 8>;

// Draw bytes_per_column keystream bytes from every column stream into a
// column-major buffer (column i at out + i*stride).
void expand_columns_serial(std::span<crypto::KeyStream> streams, std::size_t bytes_per_column,
                           std::uint8_t* out, std::size_t stride);
void expand_columns_parallel(std::span<crypto::KeyStream> streams, std::size_t bytes_per_column,
                             std::uint8_t* out, std::size_t stride);

// Packed bit-matrix transpose: in is in_rows x in_cols (row-major, stride
// in_stride bytes), out becomes in_cols x in_rows (stride out_stride).
// Strides must cover the bit widths; out must be zeroed by the caller.
void transpose_bits_serial(const std::uint8_t* in, std::size_t in_rows, std::size_t in_cols,
                           std::size_t in_stride, std::uint8_t* out, std::size_t out_stride);
void transpose_bits_parallel(const std::uint8_t* in, std::size_t in_rows, std::size_t in_cols,
                             std::size_t in_stride, std::uint8_t* out, std::size_t out_stride);

// Sender-side masking: for OT row j (kappa bits at rows + j*row_bytes) and
// every value v < n, the pad is the low bit of
// H(tag || base_index+j || row XOR masked_codeword[v]); the output bit at
// j*n+v is message_bits[j*n+v] XOR pad. masked_codewords holds n rows of
// row_bytes (codeword AND s, precomputed by the caller).
void mask_sender_rows_serial(const SessionTag& tag, std::uint64_t base_index,
                             const std::uint8_t* rows, std::size_t count, std::size_t row_bytes,
                             const std::uint8_t* masked_codewords, std::size_t n,
                             const std::uint8_t* message_bits, std::uint8_t* out_bits);
void mask_sender_rows_parallel(const SessionTag& tag, std::uint64_t base_index,
                               const std::uint8_t* rows, std::size_t count, std::size_t row_bytes,
                               const std::uint8_t* masked_codewords, std::size_t n,
                               const std::uint8_t* message_bits, std::uint8_t* out_bits);

// Receiver-side unmasking: result[j] = masked_bits[j*n + choices[j]] XOR
// lsb(H(tag || base_index+j || row_j)). Results are one 0/1 byte per OT.
void unmask_receiver_rows_serial(const SessionTag& tag, std::uint64_t base_index,
                                 const std::uint8_t* rows, std::size_t count, std::size_t row_bytes,
                                 const std::uint8_t* choices, std::size_t n,
                                 const std::uint8_t* masked_bits, std::uint8_t* out);
void unmask_receiver_rows_parallel(const SessionTag& tag, std::uint64_t base_index,
                                   const std::uint8_t* rows, std::size_t count, std::size_t row_bytes,
                                   const std::uint8_t* choices, std::size_t n,
                                   const std::uint8_t* masked_bits, std::uint8_t* out);

// Dispatchers: parallel for batches worth the fork, serial otherwise.
void expand_columns(std::span<crypto::KeyStream> streams, std::size_t bytes_per_column,
                    std::uint8_t* out, std::size_t stride);
void transpose_bits(const std::uint8_t* in, std::size_t in_rows, std::size_t in_cols,
                    std::size_t in_stride, std::uint8_t* out, std::size_t out_stride);
void mask_sender_rows(const SessionTag& tag, std::uint64_t base_index, const std::uint8_t* rows,
                      std::size_t count, std::size_t row_bytes, const std::uint8_t* masked_codewords,
                      std::size_t n, const std::uint8_t* message_bits, std::uint8_t* out_bits);
void unmask_receiver_rows(const SessionTag& tag, std::uint64_t base_index, const std::uint8_t* rows,
                          std::size_t count, std::size_t row_bytes, const std::uint8_t* choices,
                          std::size_t n, const std::uint8_t* masked_bits, std::uint8_t* out);

void xor_bytes(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);

}  // namespace escot::kernels
