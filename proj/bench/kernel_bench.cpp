#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "escot/editdist.hpp"
#include "escot/kernels.hpp"
#include "escot/wire.hpp"

// Throughput comparison of the serial reference kernels against the
// OpenMP-parallel implementations, on batch shapes the extension actually
// sees (kappa=80 columns, per-stripe and whole-band row counts), plus the
// cleartext DP engines for context.

using namespace escot;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_op(F&& op, int reps) {
  // one warmup
  op();
  auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) op();
  return std::chrono::duration<double>(Clock::now() - t0).count() / reps;
}

void report(const char* name, double serial_s, double parallel_s, double items,
            const char* unit) {
  std::printf("%-28s serial %9.3f ms  parallel %9.3f ms  speedup %4.2fx  (%8.1f M%s/s par)\n",
              name, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
              items / parallel_s / 1e6, unit);
}

std::vector<crypto::KeyStream> make_streams(std::size_t count) {
  std::vector<crypto::KeyStream> streams;
  streams.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint8_t seed[10] = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i >> 8),
                             7, 7, 7, 7, 7, 7, 7, 7};
    streams.emplace_back(seed);
  }
  return streams;
}

}  // namespace

int main() {
  std::printf("escot kernel benchmark, %d OpenMP threads\n\n", omp_get_max_threads());

  const std::size_t kappa = 80;
  const std::size_t row_bytes = kappa / 8;
  const std::size_t n = 4;

  for (std::size_t rows : {121ul, 4096ul, 262144ul}) {
    std::printf("--- batch of %zu transfers (kappa=%zu, n=%zu) ---\n", rows, kappa, n);
    const std::size_t stride = wire::packed_size(rows);
    std::mt19937 rng(99);

    {
      auto s = make_streams(kappa);
      auto p = make_streams(kappa);
      std::vector<std::uint8_t> out(kappa * stride);
      double serial = time_op([&] { kernels::expand_columns_serial(s, stride, out.data(), stride); },
                              rows > 100000 ? 5 : 50);
      double parallel = time_op(
          [&] { kernels::expand_columns_parallel(p, stride, out.data(), stride); },
          rows > 100000 ? 5 : 50);
      report("prg column expansion", serial, parallel,
             static_cast<double>(kappa) * stride / 1e0, "B");
    }

    std::vector<std::uint8_t> columns(kappa * stride);
    for (auto& b : columns) b = static_cast<std::uint8_t>(rng());
    {
      std::vector<std::uint8_t> out(rows * row_bytes);
      double serial = time_op(
          [&] {
            std::fill(out.begin(), out.end(), 0);
            kernels::transpose_bits_serial(columns.data(), kappa, rows, stride, out.data(),
                                           row_bytes);
          },
          rows > 100000 ? 3 : 20);
      double parallel = time_op(
          [&] {
            std::fill(out.begin(), out.end(), 0);
            kernels::transpose_bits_parallel(columns.data(), kappa, rows, stride, out.data(),
                                             row_bytes);
          },
          rows > 100000 ? 10 : 100);
      report("bit-matrix transpose", serial, parallel,
             static_cast<double>(rows) * kappa, "bit");
    }

    std::vector<std::uint8_t> otrows(rows * row_bytes);
    std::vector<std::uint8_t> codewords(n * row_bytes);
    std::vector<std::uint8_t> messages(wire::packed_size(rows * n));
    std::vector<std::uint8_t> choices(rows);
    for (auto& b : otrows) b = static_cast<std::uint8_t>(rng());
    for (auto& b : codewords) b = static_cast<std::uint8_t>(rng());
    for (auto& b : messages) b = static_cast<std::uint8_t>(rng());
    for (auto& c : choices) c = rng() % n;
    const kernels::SessionTag tag{1, 2, 3, 4, 5, 6, 7, 8};

    {
      std::vector<std::uint8_t> masked(messages.size());
      double serial = time_op(
          [&] {
            kernels::mask_sender_rows_serial(tag, 0, otrows.data(), rows, row_bytes,
                                             codewords.data(), n, messages.data(), masked.data());
          },
          rows > 100000 ? 2 : 10);
      double parallel = time_op(
          [&] {
            kernels::mask_sender_rows_parallel(tag, 0, otrows.data(), rows, row_bytes,
                                               codewords.data(), n, messages.data(),
                                               masked.data());
          },
          rows > 100000 ? 2 : 10);
      report("sender mask hashing", serial, parallel, static_cast<double>(rows) * n, "hash");
    }

    {
      std::vector<std::uint8_t> out(rows);
      double serial = time_op(
          [&] {
            kernels::unmask_receiver_rows_serial(tag, 0, otrows.data(), rows, row_bytes,
                                                 choices.data(), n, messages.data(), out.data());
          },
          rows > 100000 ? 2 : 10);
      double parallel = time_op(
          [&] {
            kernels::unmask_receiver_rows_parallel(tag, 0, otrows.data(), rows, row_bytes,
                                                   choices.data(), n, messages.data(), out.data());
          },
          rows > 100000 ? 2 : 10);
      report("receiver unmask hashing", serial, parallel, static_cast<double>(rows), "hash");
    }
    std::printf("\n");
  }

  // DP engines for scale: full table vs band at the production shape
  {
    std::mt19937 rng(5);
    EncodedSequence x, y;
    x.codes.resize(3500);
    y.codes.resize(3500);
    for (auto& c : x.codes) c = static_cast<std::uint8_t>(rng() % 4);
    y.codes = x.codes;
    for (int i = 0; i < 120; ++i) y.codes[rng() % y.codes.size()] = static_cast<std::uint8_t>(rng() % 4);

    double full = time_op([&] { (void)wagner_fischer(x, y); }, 5);
    double banded = time_op(
        [&] {
          CleartextComparator cmp(x, y);
          (void)ukkonen_banded(x, y, Threshold{60}, cmp);
        },
        5);
    std::printf("--- cleartext DP engines, m=m'=3500 ---\n");
    std::printf("%-28s %9.3f ms\n", "wagner-fischer full table", full * 1e3);
    std::printf("%-28s %9.3f ms  (k=60 band)\n", "ukkonen banded", banded * 1e3);
  }
  return 0;
}
