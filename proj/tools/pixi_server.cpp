// Study server: flow, registration, login and export over HTTP.
#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "pixi/auth/http.hpp"
#include "pixi/auth/service.hpp"
#include "pixi/auth/store.hpp"
#include "pixi/content/catalog.hpp"

using namespace pixi;

namespace {

httplib::Server* g_server = nullptr;

void stop(int) {
  if (g_server) g_server->stop();
}

auth::ResearchVault::Key read_key(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read research key " + path);
  std::string hex;
  in >> hex;
  return auth::ResearchVault::key_from_hex(hex);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PiXi study server"};
  std::string host = "127.0.0.1", db_path = "pixi.db", catalog_dir, research_db, key_file;
  int port = 8080;
  std::uint64_t seed = 0;
  bool research = false, cheap_hash = false, new_key = false;
  std::int64_t splash_ms = 3000;
  app.add_option("--host", host, "listen address");
  app.add_option("--port", port, "listen port");
  app.add_option("--db", db_path, "SQLite store");
  app.add_option("--catalog", catalog_dir, "content catalog directory")->required();
  app.add_option("--seed", seed, "server seed for item pages and session streams");
  app.add_option("--splash-ms", splash_ms, "keyword splash duration (at least 1000)");
  app.add_flag("--research-export", research, "keep encrypted plaintext passwords and allow export");
  app.add_option("--research-db", research_db, "encrypted plaintext store (default: <db>.research)");
  app.add_option("--research-key-file", key_file, "file holding the 64-hex-digit research key");
  app.add_flag("--generate-research-key", new_key, "print a fresh research key and exit");
  app.add_flag("--cheap-hash", cheap_hash, "minimum argon2id cost (testing only)");
  CLI11_PARSE(app, argc, argv);

  try {
    if (new_key) {
      std::cout << auth::ResearchVault::key_to_hex(auth::ResearchVault::generate_key()) << "\n";
      return 0;
    }
    const auto catalog = content::load_catalog(catalog_dir);
    auth::Store store(db_path);
    std::unique_ptr<auth::ResearchVault> vault;
    if (research) {
      if (key_file.empty()) throw Error(ErrorCode::InvalidArgument, "--research-export needs --research-key-file");
      vault = std::make_unique<auth::ResearchVault>(research_db.empty() ? db_path + ".research" : research_db,
                                                    read_key(key_file));
    }
    auth::ServiceConfig config;
    config.server_seed = seed;
    config.flow.splash_duration_ms = splash_ms;
    config.research_export = research;
    if (cheap_hash) config.hash_cost = auth::HashCost::minimum();
    auth::Service service(config, catalog, store, vault.get());

    httplib::Server server;
    auth::install_routes(server, service);
    g_server = &server;
    std::signal(SIGINT, stop);
    std::signal(SIGTERM, stop);
    std::cout << "listening on " << host << ":" << port << std::endl;
    if (!server.listen(host, port)) {
      std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
      return 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
