#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "cli_common.hpp"
#include "escot/sequence.hpp"

// Synthetic DNA databases: mutated copies of one random ancestor, plus the
// ancestor itself as natural query material.

int main(int argc, char** argv) {
  CLI::App app{"escot-gen - synthetic DNA database generator"};

  std::string out_path;
  std::string query_path;
  std::string format_name = "lines";
  std::size_t count = 50;
  std::size_t length = 3500;
  double rate = 0.02;
  std::uint64_t seed = 1;

  app.add_option("--out", out_path, "database output file")->required();
  app.add_option("--count", count, "number of sequences")->check(CLI::PositiveNumber);
  app.add_option("--length", length, "ancestor length")->check(CLI::PositiveNumber);
  app.add_option("--rate", rate, "per-position mutation rate")->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--format", format_name, "output format: lines or fasta")
      ->check(CLI::IsMember({"lines", "fasta"}));
  app.add_option("--query-out", query_path, "also write the ancestor as a query file");

  CLI11_PARSE(app, argc, argv);

  try {
    auto format = escot::cli::parse_format(format_name);
    auto dataset = escot::generate_synthetic_dataset(count, length, rate, seed);
    escot::save_database(dataset.database, out_path, format);
    if (!query_path.empty()) {
      escot::SequenceDatabase query_db;
      query_db.alphabet = dataset.database.alphabet;
      dataset.ancestor.id = "query";
      query_db.entries.push_back(dataset.ancestor);
      escot::save_database(query_db, query_path, format);
    }
    std::fprintf(stderr, "wrote %zu sequences of ~%zu bp to %s\n", count, length,
                 out_path.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "escot-gen: %s\n", e.what());
    return escot::cli::kExitUsage;
  }
  return escot::cli::kExitOk;
}
