#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cli_common.hpp"
#include "escot/editdist.hpp"
#include "escot/sequence.hpp"

// Cleartext reference distances for verifying secure runs: exact
// Wagner-Fischer, or the banded outcome when a threshold is given.

int main(int argc, char** argv) {
  CLI::App app{"escot-oracle - cleartext edit distance"};

  std::string a_path, b_path;
  std::optional<std::uint32_t> threshold;
  std::string format_name = "auto";

  app.add_option("--a", a_path, "first sequence file")->required();
  app.add_option("--b", b_path, "second sequence file")->required();
  app.add_option("--threshold", threshold, "banded mode with threshold k");
  app.add_option("--format", format_name, "input format: auto, lines, or fasta")
      ->check(CLI::IsMember({"auto", "lines", "fasta"}));

  CLI11_PARSE(app, argc, argv);

  try {
    auto format = escot::cli::parse_format(format_name);
    auto a = escot::load_sequence(a_path, format);
    auto b = escot::load_sequence(b_path, format);

    if (threshold) {
      escot::CleartextComparator cmp(a, b);
      auto result = escot::ukkonen_banded(a, b, escot::Threshold{*threshold}, cmp);
      if (result.within_threshold())
        std::printf("%u\n", result.value());
      else
        std::printf("exceeds\n");
    } else {
      std::printf("%u\n", escot::wagner_fischer(a, b).value());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "escot-oracle: %s\n", e.what());
    return escot::cli::kExitUsage;
  }
  return escot::cli::kExitOk;
}
