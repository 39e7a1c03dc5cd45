// otf: command-line front end for the two OT roles, test vectors, benchmarks
// and parameter tables.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <thread>

#include "otf/bench.hpp"
#include "otf/estimates.hpp"
#include "otf/wire/session.hpp"
#include "otf/wire/testvec.hpp"

namespace {

using namespace otf;

struct Common {
  std::string backend = "elgamal";
  std::string tier = "B128";
  std::string seed_hex;
  std::string out;
  bool allow_test_groups = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--backend", c.backend, "elgamal | qcmdpc | lpn")->capture_default_str();
  app->add_option("--tier", c.tier, "TOY | B128 | B192 | B256 | MEDIUM")->capture_default_str();
  app->add_option("--seed", c.seed_hex, "hex seed for deterministic runs (testing only)");
  app->add_option("--out", c.out, "output file");
}

BackendId backend_of(const Common& c) {
  auto b = parse_backend(c.backend);
  if (!b) throw CLI::ValidationError("--backend", "unknown backend '" + c.backend + "'");
  return *b;
}

Tier tier_of(const Common& c) {
  auto t = parse_tier(c.tier);
  if (!t) throw CLI::ValidationError("--tier", "unknown tier '" + c.tier + "'");
  return *t;
}

std::optional<Bytes> seed_of(const Common& c) {
  if (c.seed_hex.empty()) return std::nullopt;
  return from_hex(c.seed_hex);
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string report_json(const wire::SessionReport& r, std::string_view role) {
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& f : r.frames)
    frames.push_back({{"dir", f.sent ? "out" : "in"}, {"type", wire::to_string(f.type)}, {"bytes", f.bytes}});
  nlohmann::json j = {{"role", role},
                      {"session_id", to_hex(r.session_id)},
                      {"bytes_sent", r.bytes_sent},
                      {"bytes_received", r.bytes_received},
                      {"handshake_s", r.handshake_seconds},
                      {"compute_s", r.compute_seconds},
                      {"total_s", r.total_seconds},
                      {"frames", frames}};
  if (role == "receiver") j["decryption_failed"] = r.decryption_failed;
  return j.dump(2) + "\n";
}

std::unique_ptr<wire::TcpTransport> open_transport(const std::string& listen, const std::string& connect,
                                                   std::unique_ptr<wire::TcpListener>& listener) {
  if (!connect.empty()) {
    auto [host, port] = wire::parse_endpoint(connect);
    return wire::TcpTransport::connect(host, port);
  }
  auto [host, port] = wire::parse_endpoint(listen);
  listener = std::make_unique<wire::TcpListener>(host, port);
  std::cerr << "listening on " << host << ":" << listener->port() << "\n";
  return listener->accept();
}

int cmd_sender(const Common& c, const std::vector<std::string>& msg_files, const std::string& listen,
               const std::string& connect, unsigned sessions) {
  SenderInput input;
  for (const auto& f : msg_files) input.messages.push_back(read_file(f));
  if (input.messages.size() < 2) throw CLI::ValidationError("--msg-file", "give at least two messages");
  for (const auto& m : input.messages)
    if (m.size() != input.messages.front().size())
      throw CLI::ValidationError("--msg-file", "all messages must have the same length");
  if (input.messages.front().size() < 16) throw CLI::ValidationError("--msg-file", "messages must be >= 16 bytes");

  wire::SenderConfig cfg{backend_of(c), tier_of(c), c.allow_test_groups, seed_of(c)};
  if (!connect.empty()) {
    auto [host, port] = wire::parse_endpoint(connect);
    auto t = wire::TcpTransport::connect(host, port);
    write_output(c.out, report_json(wire::run_sender(*t, input, cfg), "sender"));
    return 0;
  }

  auto [host, port] = wire::parse_endpoint(listen);
  wire::TcpListener listener(host, port);
  std::cerr << "listening on " << host << ":" << listener.port() << "\n";
  std::vector<std::thread> workers;
  std::mutex out_mu;
  int failures = 0;
  for (unsigned i = 0; sessions == 0 || i < sessions; ++i) {
    std::shared_ptr<wire::TcpTransport> conn = listener.accept();
    auto session_cfg = cfg;
    if (session_cfg.seed) session_cfg.seed->push_back(static_cast<std::uint8_t>(i));
    workers.emplace_back([&, conn, session_cfg] {
      try {
        auto report = report_json(wire::run_sender(*conn, input, session_cfg), "sender");
        std::lock_guard lock(out_mu);
        write_output(c.out, report);
      } catch (const std::exception& e) {
        std::lock_guard lock(out_mu);
        std::cerr << "session failed: " << e.what() << "\n";
        ++failures;
      }
    });
  }
  for (auto& w : workers) w.join();
  return failures == 0 ? 0 : 1;
}

int cmd_receiver(const Common& c, const std::string& listen, const std::string& connect, unsigned k,
                 unsigned choice, unsigned lambda, const std::string& report_path) {
  wire::ReceiverConfig cfg;
  cfg.backend = backend_of(c);
  cfg.tier = tier_of(c);
  cfg.k = static_cast<std::uint16_t>(k);
  cfg.lambda = lambda;
  cfg.choice = choice;
  cfg.allow_test_groups = c.allow_test_groups;
  cfg.seed = seed_of(c);

  std::unique_ptr<wire::TcpListener> listener;
  auto t = open_transport(listen, connect, listener);
  auto result = wire::run_receiver(*t, cfg);
  if (result.report.decryption_failed) std::cerr << "warning: decryption failed; output is random\n";
  if (c.out.empty()) {
    std::cout << to_hex(result.message) << "\n";
  } else {
    std::ofstream out(c.out, std::ios::binary);
    out.write(reinterpret_cast<const char*>(result.message.data()), static_cast<std::streamsize>(result.message.size()));
  }
  const auto report = report_json(result.report, "receiver");
  if (report_path.empty()) std::cerr << report;
  else write_output(report_path, report);
  return 0;
}

int cmd_testvec(const Common& c, unsigned k, unsigned choice, unsigned lambda, const std::string& verify) {
  if (!verify.empty()) {
    std::ifstream in(verify);
    if (!in) throw std::runtime_error("cannot open " + verify);
    auto result = wire::verify_test_vector(wire::parse_test_vector(in));
    for (const auto& m : result.mismatches) std::cerr << "mismatch: " << m << "\n";
    std::cout << (result.ok ? "OK" : "FAIL") << " " << verify << "\n";
    return result.ok ? 0 : 1;
  }
  auto seed = seed_of(c);
  if (!seed) throw CLI::ValidationError("--seed", "testvec needs --seed");
  wire::TestVectorSpec spec{backend_of(c), tier_of(c), static_cast<std::uint16_t>(k),
                            static_cast<std::uint16_t>(choice), lambda, *seed};
  write_output(c.out, wire::format_test_vector(wire::generate_test_vector(spec)));
  return 0;
}

int cmd_bench(const Common& c, unsigned iterations, bool json) {
  Rng rng = c.seed_hex.empty() ? Rng::system() : Rng::from_bytes(from_hex(c.seed_hex));
  auto table = bench::run(backend_of(c), tier_of(c), iterations, rng);
  write_output(c.out, json ? bench::to_json(table).dump(2) + "\n" : bench::to_text(table));
  return 0;
}

std::string describe(BackendId backend, Tier tier) {
  std::ostringstream os;
  os << to_string(backend) << " " << to_string(tier) << "\n";
  switch (backend) {
    case BackendId::ElGamal:
      os << "  group         " << (tier == Tier::Toy ? "order-101 subgroup of Z_607^* (test only)" : "ristretto255")
         << "\n";
      break;
    case BackendId::QcMdpc: {
      auto p = *qcmdpc::by_tier(tier);
      os << "  r             " << p.r << "\n  w             " << p.w << "\n  t             " << p.t
         << "\n  n             " << p.n() << "\n  pk bits       " << p.r << "\n  ct bits       " << p.n()
         << "\n  decoder       max " << p.decoder.max_iterations << " iterations, threshold max-"
         << p.decoder.threshold_delta << "\n";
      break;
    }
    case BackendId::Lpn: {
      auto p = *lpn::by_tier(tier);
      os << "  n             " << p.n << "\n  l1            " << p.l1 << "\n  l2            " << p.l2()
         << "\n  message bits  " << p.message_bits << "\n  repetition    " << p.repetition << "\n  rho           "
         << p.rho.num << "/" << p.rho.den << "\n";
      break;
    }
  }
  return os.str();
}

int cmd_params(const Common& c, bool all, const std::string& estimates) {
  std::string text;
  if (all) {
    for (auto b : {BackendId::ElGamal, BackendId::QcMdpc, BackendId::Lpn})
      for (auto t : registered_tiers(b)) text += describe(b, t);
  } else {
    text = describe(backend_of(c), tier_of(c));
  }
  int rc = 0;
  if (!estimates.empty()) {
    std::ifstream in(estimates);
    if (!in) throw std::runtime_error("cannot open " + estimates);
    char line[128];
    text += "\nestimates from " + estimates + "\n";
    std::snprintf(line, sizeof line, "  %-20s %16s %12s %8s  %s\n", "attack", "workfactor_bits", "target_bits",
                  "delta", "band");
    text += line;
    for (const auto& r : parse_estimates(in)) {
      std::snprintf(line, sizeof line, "  %-20s %16.2f %12.2f %8.2f  %s\n", r.attack.c_str(), r.workfactor_bits,
                    r.target_bits, r.delta, within_band(r) ? "ok" : "OUT");
      text += line;
      if (!within_band(r)) rc = 1;
    }
  }
  write_output(c.out, text);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generic two-round oblivious transfer"};
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> msg_files;
  std::string listen, connect, verify, estimates, report_path;
  unsigned k = 2, choice = 0, lambda = 32, iterations = 10, sessions = 1;
  bool json = false, all = false;

  auto* sender = app.add_subcommand("sender", "run the sender role over TCP");
  add_common(sender, common);
  sender->add_option("--msg-file", msg_files, "message file, once per choice (k times)")->required();
  auto* s_listen = sender->add_option("--listen", listen, "host:port to accept on");
  auto* s_connect = sender->add_option("--connect", connect, "host:port to dial");
  s_listen->excludes(s_connect);
  sender->add_option("--sessions", sessions, "sessions to serve when listening, 0 = forever")->capture_default_str();
  sender->add_flag("--allow-test-groups", common.allow_test_groups, "permit the toy ElGamal group");

  auto* receiver = app.add_subcommand("receiver", "run the receiver role over TCP");
  add_common(receiver, common);
  auto* r_listen = receiver->add_option("--listen", listen, "host:port to accept on");
  auto* r_connect = receiver->add_option("--connect", connect, "host:port to dial");
  r_listen->excludes(r_connect);
  receiver->add_option("--k", k, "number of sender messages")->capture_default_str()->check(CLI::Range(2, 65535));
  receiver->add_option("--choice", choice, "index of the message to receive")->capture_default_str();
  receiver->add_option("--lambda", lambda, "message length in bytes")->capture_default_str()->check(CLI::Range(16, 1 << 23));
  receiver->add_option("--report", report_path, "write the session report here instead of stderr");
  receiver->add_flag("--allow-test-groups", common.allow_test_groups, "permit the toy ElGamal group");

  auto* testvec = app.add_subcommand("testvec", "emit or verify a seeded transcript");
  add_common(testvec, common);
  testvec->add_option("--k", k, "number of sender messages")->capture_default_str()->check(CLI::Range(2, 65535));
  testvec->add_option("--choice", choice, "receiver choice")->capture_default_str();
  testvec->add_option("--lambda", lambda, "message length in bytes")->capture_default_str()->check(CLI::Range(16, 1 << 23));
  testvec->add_option("--verify", verify, "vector file to check against a fresh regeneration");

  auto* bench_cmd = app.add_subcommand("bench", "median keygen/encrypt/decrypt costs");
  add_common(bench_cmd, common);
  bench_cmd->add_option("--iterations", iterations, "key pairs to time")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--json", json, "machine-readable output");

  auto* params = app.add_subcommand("params", "show parameter sets and estimator results");
  add_common(params, common);
  params->add_flag("--all", all, "every registered backend and tier");
  params->add_option("--estimates", estimates, "estimator table (attack, workfactor_bits, target_bits, delta)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sender) {
      if (listen.empty() && connect.empty()) throw CLI::ValidationError("sender", "need --listen or --connect");
      return cmd_sender(common, msg_files, listen, connect, sessions);
    }
    if (*receiver) {
      if (listen.empty() && connect.empty()) throw CLI::ValidationError("receiver", "need --listen or --connect");
      if (choice >= k) throw CLI::ValidationError("--choice", "must be below --k");
      return cmd_receiver(common, listen, connect, k, choice, lambda, report_path);
    }
    if (*testvec) {
      if (verify.empty() && choice >= k) throw CLI::ValidationError("--choice", "must be below --k");
      return cmd_testvec(common, k, choice, lambda, verify);
    }
    if (*bench_cmd) return cmd_bench(common, iterations, json);
    if (*params) return cmd_params(common, all, estimates);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
