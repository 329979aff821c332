#include <cstdio>
#include <fstream>
#include <string>

#include "CLI11.hpp"

#include "cli_common.hpp"
#include "escot/protocol.hpp"
#include "escot/sequence.hpp"

// Runs one private query against a server. Matching entries go to stdout
// as "id<TAB>distance" lines; session metrics go to the --stats file.

int main(int argc, char** argv) {
  CLI::App app{"escot-client - private edit-distance query"};

  std::string query_path;
  std::string connect_spec;
  std::string stats_path;
  std::string format_name = "auto";
  std::string batching_name = "stripe";
  escot::SessionConfig config;

  app.add_option("--query", query_path, "query sequence file")->required();
  app.add_option("--connect", connect_spec, "server address host:port")->required();
  app.add_option("--phi", config.phi_bits, "public-key parameter in bits")
      ->check(CLI::IsMember({1024, 2048}));
  app.add_option("--kappa", config.kappa, "symmetric parameter / base-OT count")
      ->check(CLI::IsMember({80, 128}));
  app.add_option("--threshold", config.threshold.k, "edit-distance threshold k");
  app.add_option("--stats", stats_path, "write session metrics JSON here");
  app.add_option("--format", format_name, "query format: auto, lines, or fasta")
      ->check(CLI::IsMember({"auto", "lines", "fasta"}));
  app.add_option("--batching", batching_name, "comparison batching: stripe or band")
      ->check(CLI::IsMember({"stripe", "band"}));

  CLI11_PARSE(app, argc, argv);

  escot::EncodedSequence query;
  escot::cli::Endpoint endpoint;
  try {
    endpoint = escot::cli::parse_endpoint(connect_spec);
    query = escot::load_sequence(query_path, escot::cli::parse_format(format_name));
    config.batching = escot::cli::parse_batching(batching_name);
    config.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "escot-client: %s\n", e.what());
    return escot::cli::kExitUsage;
  }

  escot::QueryOutcome outcome;
  try {
    outcome = escot::run_client(query, config, endpoint.host, endpoint.port);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "escot-client: %s\n", e.what());
    return escot::cli::kExitProtocol;
  }

  for (const auto& match : outcome.results)
    if (match.outcome.within_threshold())
      std::printf("%s\t%u\n", match.id.c_str(), match.outcome.value());

  if (!stats_path.empty()) {
    std::ofstream stats(stats_path);
    if (!stats) {
      std::fprintf(stderr, "escot-client: cannot write %s\n", stats_path.c_str());
      return escot::cli::kExitUsage;
    }
    stats << escot::cli::metrics_to_json(outcome.metrics).dump(2) << '\n';
  }
  return escot::cli::kExitOk;
}
