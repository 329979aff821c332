#include <csignal>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cli_common.hpp"
#include "escot/channel.hpp"
#include "escot/protocol.hpp"
#include "escot/sequence.hpp"

// Hosts a sequence database and serves secure-comparison sessions until
// terminated. Per-session metrics are logged as JSON lines on stdout.

namespace {
escot::wire::TcpListener* g_listener = nullptr;

void handle_signal(int) {
  if (g_listener) g_listener->close();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"escot-server - private edit-distance database server"};

  std::string db_path;
  std::string listen_spec = "0.0.0.0:7212";
  std::string format_name = "auto";
  escot::SessionConfig config;
  std::size_t max_sessions = 4;

  app.add_option("--db", db_path, "database file (plain lines or FASTA)")->required();
  app.add_option("--listen", listen_spec, "listen address host:port");
  app.add_option("--phi", config.phi_bits, "public-key parameter in bits")
      ->check(CLI::IsMember({1024, 2048}));
  app.add_option("--kappa", config.kappa, "symmetric parameter / base-OT count")
      ->check(CLI::IsMember({80, 128}));
  app.add_option("--threshold", config.threshold.k, "edit-distance threshold k");
  app.add_option("--format", format_name, "database format: auto, lines, or fasta")
      ->check(CLI::IsMember({"auto", "lines", "fasta"}));
  app.add_option("--max-sessions", max_sessions, "concurrent session cap")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  escot::SequenceDatabase db;
  escot::cli::Endpoint endpoint;
  try {
    endpoint = escot::cli::parse_endpoint(listen_spec);
    db = escot::load_database(db_path, escot::cli::parse_format(format_name));
    config.alphabet_size = static_cast<std::uint32_t>(db.alphabet.size());
    config.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "escot-server: %s\n", e.what());
    return escot::cli::kExitUsage;
  }

  try {
    escot::wire::TcpListener listener =
        escot::wire::TcpListener::bind(endpoint.host, endpoint.port);
    g_listener = &listener;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    std::fprintf(stderr, "escot-server: %zu sequences, listening on %s:%u (phi=%u kappa=%u k=%u)\n",
                 db.size(), endpoint.host.c_str(), listener.port(), config.phi_bits, config.kappa,
                 config.threshold.k);

    escot::ServerOptions options;
    options.max_sessions = max_sessions;
    options.on_session = [](const escot::SessionMetrics& m) {
      std::cout << escot::cli::metrics_to_json(m).dump() << std::endl;
    };
    options.on_error = [](const std::string& what) {
      std::fprintf(stderr, "escot-server: session failed: %s\n", what.c_str());
    };
    escot::run_server(db, config, listener, options);
    g_listener = nullptr;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "escot-server: %s\n", e.what());
    return escot::cli::kExitUsage;
  }
  return escot::cli::kExitOk;
}
