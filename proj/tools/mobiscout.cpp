// Copyright 2026 The MobiScout Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <signal.h>
#include <unistd.h>

#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "mobiscout/app/agent.hpp"
#include "mobiscout/app/control_api.hpp"
#include "mobiscout/app/export.hpp"
#include "mobiscout/app/run.hpp"
#include "mobiscout/app/sim_devices.hpp"
#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"
#include "mobiscout/common/http.hpp"
#include "mobiscout/ingest/http_api.hpp"
#include "mobiscout/ingest/service.hpp"
#include "mobiscout/model/revalidate.hpp"
#include "mobiscout/model/serialize.hpp"
#include "mobiscout/obd/codec.hpp"
#include "mobiscout/sim/dongle.hpp"
#include "mobiscout/sim/emitters.hpp"
#include "mobiscout/sim/truth.hpp"
#include "mobiscout/sync/upload_api.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mobiscout;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kValidation = 2, kNetwork = 3, kConflict = 4 };

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::kNetwork:
    case Errc::kObdUnavailable:
      return kNetwork;
    case Errc::kValidationFailed:
    case Errc::kTampered:
    case Errc::kDigestMismatch:
      return kValidation;
    default:
      return http::status_for(code) == 409 ? kConflict : kUsage;
  }
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

// Blocks until SIGINT or SIGTERM. The signals must already be blocked in
// every thread (see block_stop_signals).
void wait_for_stop_signal() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  int sig = 0;
  sigwait(&set, &sig);
}

void block_stop_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
}

ingest::MasterKey load_master_key(const fs::path& data_dir) {
  if (const char* hex = std::getenv("MASTER_KEY"); hex && *hex) return ingest::MasterKey::from_hex(hex);
  const fs::path key_file = data_dir / "master.key";
  if (fs::exists(key_file)) return ingest::MasterKey::from_hex(files::read_all(key_file));
  auto key = ingest::MasterKey::random();
  fs::create_directories(data_dir);
  files::write_atomic(key_file, files::to_hex({reinterpret_cast<const char*>(key.data()), ingest::MasterKey::kBytes}));
  fs::permissions(key_file, fs::perms::owner_read | fs::perms::owner_write);
  std::cerr << "generated a master key at " << key_file.string() << "; set MASTER_KEY to manage it yourself\n";
  return key;
}

model::Stream stream_arg(const std::string& name) {
  const auto s = model::parse_stream(name);
  if (!s) throw Error(Errc::kInvalidArgument, "unknown stream '" + name + "'");
  return *s;
}

// --- subcommands ----------------------------------------------------------------

struct ServeArgs {
  std::string bind = env_or("BIND_ADDR", "127.0.0.1:8080");
  std::string data = env_or("SERVER_DATA_DIR", "server-data");
  std::string console;
};

int serve(const ServeArgs& a) {
  const auto addr = http::HostPort::parse(a.bind);
  const fs::path data(a.data);
  SystemClock clock;
  ingest::SpoolOutbox outbox(data / "outbox");
  ingest::IngestionService service({data, load_master_key(data), {}}, clock, outbox);
  http::BackgroundServer server;
  ingest::mount_ingestion_api(server.routes(), service, a.console);
  const int port = server.bind(addr.host, addr.port);
  server.start();
  std::cout << "ingestion service listening on http://" << addr.host << ":" << port << std::endl;
  wait_for_stop_signal();
  server.stop();
  return kOk;
}

struct AgentArgs {
  std::string data = env_or("DATA_DIR", "agent-data");
  std::string server = "http://127.0.0.1:8080";
  std::string obd;
  std::string control = "127.0.0.1:8090";
  std::string scenario;
  std::string email = env_or("MOBISCOUT_EMAIL", "");
  std::string password = env_or("MOBISCOUT_PASSWORD", "");
  std::string token = env_or("MOBISCOUT_TOKEN", "");
};

int agent(const AgentArgs& a) {
  if (a.token.empty() && (a.email.empty() || a.password.empty()))
    throw Error(Errc::kInvalidArgument, "need --token or --email and --password");
  const auto scenario = a.scenario.empty() ? sim::Scenario::constant(40, 3600) : sim::Scenario::load(a.scenario);
  SystemClock clock;

  app::TransportFactory transport;
  if (!a.obd.empty()) {
    const auto [host, port] = obd::parse_endpoint(a.obd);
    transport = [host = host, port = port] { return std::make_unique<obd::TcpTransport>(host, port); };
  }
  app::SimDeviceHub devices(scenario, clock, transport);

  std::mutex token_mutex;
  std::string token = a.token;
  sync::HttpUploadApi api(a.server, [&] {
    std::lock_guard lock(token_mutex);
    // TODO: clear and re-login on a 401 once HttpUploadApi surfaces it; expired tokens need a restart.
    if (token.empty()) {
      httplib::Client client(a.server);
      const json body{{"email", a.email}, {"password", a.password}};
      auto res = client.Post("/v1/login", body.dump(), "application/json");
      if (!res) throw Error(Errc::kNetwork, "login: " + httplib::to_string(res.error()));
      if (res->status != 200) throw http::error_from_response(res->status, res->body);
      token = json::parse(res->body).at("token");
    }
    return token;
  });

  app::AgentConfig config;
  config.data_dir = a.data;
  app::Agent phone(config, clock, devices, api);
  phone.start();

  const auto addr = http::HostPort::parse(a.control);
  http::BackgroundServer control;
  app::mount_control_api(control.routes(), phone);
  const int port = control.bind(addr.host, addr.port);
  control.start();
  std::cout << "agent control API on http://" << addr.host << ":" << port << std::endl;
  wait_for_stop_signal();
  control.stop();
  phone.stop();
  return kOk;
}

struct SimArgs {
  std::string scenario;
  std::string listen = "127.0.0.1:35000";
  double speedup = 1;
  bool loop = false;
};

int simulate(const SimArgs& a) {
  const auto scenario = sim::Scenario::load(a.scenario);
  ScaledClock clock(scenario.start_time, a.speedup);
  auto emulator = std::make_shared<sim::DongleEmulator>(scenario, clock);
  const auto addr = http::HostPort::parse(a.listen);
  sim::DongleServer dongle(emulator, addr.host, static_cast<uint16_t>(addr.port));
  std::cout << "dongle emulator on " << dongle.endpoint() << std::endl;

  std::atomic<bool> done{false};
  std::thread emitter([&] {
    // One truth line per scenario second; the signal handler thread ends us.
    int64_t next = 0;
    while (!done) {
      const int64_t t = clock.now_ms() - scenario.start_time;
      if (t >= scenario.duration_ms() && !a.loop) break;
      if (t >= next) {
        const int64_t rel = t % std::max<int64_t>(scenario.duration_ms(), 1);
        const auto truth = sim::sample_truth(scenario, rel);
        std::cout << json{{"t", rel},
                          {"speed", truth.speed},
                          {"latitude", truth.latitude},
                          {"longitude", truth.longitude},
                          {"online", sim::online_at(scenario, rel)}}
                         .dump()
                  << std::endl;
        next += 1000;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    if (!done) ::kill(::getpid(), SIGTERM);
  });
  wait_for_stop_signal();
  done = true;
  emitter.join();
  dongle.stop();
  return kOk;
}

struct RunArgs {
  std::string scenario;
  std::string work;
  bool keep = false;
  uint64_t chunk_bytes = recorder::kDefaultChunkBytes;
  bool as_json = false;
  bool verbose = false;
};

int run(const RunArgs& a) {
  const auto scenario = sim::Scenario::load(a.scenario);
  app::RunOptions options;
  options.work_dir = a.work;
  options.keep_work_dir = a.keep;
  options.journal.max_chunk_bytes = a.chunk_bytes;
  if (a.verbose) options.log = [](const std::string& line) { std::cerr << line << '\n'; };
  const auto report = app::run_scenario(scenario, options);

  if (a.as_json) {
    json streams = json::object();
    for (const auto& s : report.streams)
      streams[std::string(model::stream_name(s.stream))] = {{"records", s.records}, {"chunks", s.chunks}};
    json zones = json::array();
    for (const auto& z : report.zones)
      zones.push_back({{"startMs", z.start_ms},
                       {"endMs", z.end_ms},
                       {"serverBytes", z.server_bytes_min},
                       {"serverStatic", z.server_static()},
                       {"localBytesAtEntry", z.local_bytes_at_entry},
                       {"localBytesAtExit", z.local_bytes_at_exit}});
    std::cout << json{{"sessionId", report.session_id},
                      {"uploadId", report.upload_id},
                      {"streams", streams},
                      {"contentDigest", report.content_digest},
                      {"localBytes", report.local_bytes},
                      {"serverBytes", report.server_bytes},
                      {"deadZones", zones},
                      {"fidelity", report.fidelity()},
                      {"problems", report.problems}}
                     .dump(2)
              << '\n';
  } else {
    for (const auto& s : report.streams)
      std::cout << model::stream_name(s.stream) << " " << s.records << " records in " << s.chunks << " chunks\n";
    for (const auto& z : report.zones)
      std::cout << "dead zone " << z.start_ms / 1000.0 << "-" << z.end_ms / 1000.0 << " s: server "
                << (z.server_static() ? "static" : "CHANGED") << " at " << z.server_bytes_min << " bytes, local "
                << z.local_bytes_at_entry << " -> " << z.local_bytes_at_exit << " bytes\n";
    std::cout << "content digest " << report.content_digest << "\n";
    for (const auto& p : report.problems) std::cout << "problem: " << p << "\n";
    std::cout << (report.fidelity() ? "fidelity ok" : "fidelity FAILED") << std::endl;
  }
  return report.fidelity() ? kOk : kValidation;
}

struct UploadsArgs {
  std::string agent = "http://127.0.0.1:8090";
  std::string action;
  std::string task_id;
};

int uploads(const UploadsArgs& a) {
  httplib::Client client(a.agent);
  client.set_connection_timeout(std::chrono::seconds(5));
  httplib::Result res = a.action == "list" ? client.Get("/control/uploads")
                                           : client.Post("/control/uploads/" + a.task_id + "/" + a.action);
  if (!res) throw Error(Errc::kNetwork, a.agent + ": " + httplib::to_string(res.error()));
  if (res->status >= 300) throw http::error_from_response(res->status, res->body);
  const json body = json::parse(res->body);
  if (a.action != "list") {
    std::cout << body.dump(2) << '\n';
    return kOk;
  }
  for (const auto& t : body)
    std::cout << t.value("taskId", "") << "  " << t.value("sessionId", "") << "  " << t.value("mode", "") << "  "
              << t.value("state", "") << "  " << static_cast<int>(t.value("progress", 0.0) * 100) << "%\n";
  return kOk;
}

struct ExportArgs {
  std::string data = env_or("DATA_DIR", "agent-data");
  std::string session;
  std::string stream = "motion";
  std::string format = "csv";
  std::string field;
  std::string out;
};

int export_series(const ExportArgs& a) {
  const auto format = app::parse_export_format(a.format);
  if (!format) throw Error(Errc::kInvalidArgument, "format must be csv or json");
  recorder::Library library(a.data);
  if (a.out.empty()) {
    app::export_stream(library, a.session, stream_arg(a.stream), *format, a.field, std::cout);
  } else {
    std::ofstream file(a.out, std::ios::binary);
    app::export_stream(library, a.session, stream_arg(a.stream), *format, a.field, file);
  }
  return kOk;
}

int validate(const std::string& path) {
  const auto manifest = recorder::read_manifest_file(path);
  recorder::DirectoryChunkReader reader(path);
  model::RevalidateOptions options;
  options.sample_every = 1;
  options.extra_check = obd::decode_check;
  const auto report = model::revalidate_manifest(manifest, reader, options);
  std::cout << json(report).dump(2) << '\n';
  return report.ok() ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  block_stop_signals();
  CLI::App cli{"MobiScout driving data platform"};
  cli.require_subcommand(1);

  ServeArgs serve_args;
  auto* serve_cmd = cli.add_subcommand("serve", "Run the ingestion service");
  serve_cmd->add_option("--bind", serve_args.bind, "HOST:PORT (env BIND_ADDR)");
  serve_cmd->add_option("--data", serve_args.data, "Server data directory (env SERVER_DATA_DIR)");
  serve_cmd->add_option("--console", serve_args.console, "Static console files served at /console");

  AgentArgs agent_args;
  auto* agent_cmd = cli.add_subcommand("agent", "Run the recorder agent with sync and control API");
  agent_cmd->add_option("--data", agent_args.data, "Agent data directory (env DATA_DIR)");
  agent_cmd->add_option("--server", agent_args.server, "Ingestion service base URL");
  agent_cmd->add_option("--obd", agent_args.obd, "Dongle HOST:PORT");
  agent_cmd->add_option("--control", agent_args.control, "Control API HOST:PORT");
  agent_cmd->add_option("--scenario", agent_args.scenario, "Scenario driving the phone sensors");
  agent_cmd->add_option("--email", agent_args.email, "Account email (env MOBISCOUT_EMAIL)");
  agent_cmd->add_option("--password", agent_args.password, "Account password (env MOBISCOUT_PASSWORD)");
  agent_cmd->add_option("--token", agent_args.token, "Bearer token (env MOBISCOUT_TOKEN)");

  SimArgs sim_args;
  auto* sim_cmd = cli.add_subcommand("sim", "Run the device simulator and dongle emulator");
  sim_cmd->add_option("--scenario", sim_args.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--obd-listen", sim_args.listen, "Dongle HOST:PORT");
  sim_cmd->add_option("--speedup", sim_args.speedup, "Time compression factor")->check(CLI::PositiveNumber);
  sim_cmd->add_flag("--loop", sim_args.loop, "Replay the scenario until stopped");

  RunArgs run_args;
  auto* run_cmd = cli.add_subcommand("run", "Record, sync and verify a scenario end to end");
  run_cmd->add_option("--scenario", run_args.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--work", run_args.work, "Working directory (default: temporary)");
  run_cmd->add_flag("--keep", run_args.keep, "Keep the working directory");
  run_cmd->add_option("--chunk-bytes", run_args.chunk_bytes, "Journal chunk size")->check(CLI::Range(1024, 1 << 30));
  run_cmd->add_flag("--json", run_args.as_json, "Print the report as JSON");
  run_cmd->add_flag("-v,--verbose", run_args.verbose, "Log progress to stderr");

  UploadsArgs uploads_args;
  auto* uploads_cmd = cli.add_subcommand("uploads", "List or steer upload tasks through the agent");
  uploads_cmd->add_option("action", uploads_args.action, "list, pause, resume or cancel")
      ->required()
      ->check(CLI::IsMember({"list", "pause", "resume", "cancel"}));
  uploads_cmd->add_option("task", uploads_args.task_id, "Task id");
  uploads_cmd->add_option("--agent", uploads_args.agent, "Agent control API base URL");

  ExportArgs export_args;
  auto* export_cmd = cli.add_subcommand("export", "Export chart data of a local session");
  export_cmd->add_option("--data", export_args.data, "Agent data directory (env DATA_DIR)");
  export_cmd->add_option("--session", export_args.session, "Session id")->required();
  export_cmd->add_option("--stream", export_args.stream, "Stream name");
  export_cmd->add_option("--format", export_args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  export_cmd->add_option("--field", export_args.field, "Numeric field for CSV");
  export_cmd->add_option("--out", export_args.out, "Output file (default stdout)");

  std::string validate_path;
  auto* validate_cmd = cli.add_subcommand("validate", "Revalidate a local session directory");
  validate_cmd->add_option("path", validate_path, "Session directory")->required()->check(CLI::ExistingDirectory);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*serve_cmd) return serve(serve_args);
    if (*agent_cmd) return agent(agent_args);
    if (*sim_cmd) return simulate(sim_args);
    if (*run_cmd) return run(run_args);
    if (*uploads_cmd) {
      if (uploads_args.action != "list" && uploads_args.task_id.empty())
        throw Error(Errc::kInvalidArgument, uploads_args.action + " needs a task id");
      return uploads(uploads_args);
    }
    if (*export_cmd) return export_series(export_args);
    if (*validate_cmd) return validate(validate_path);
  } catch (const Error& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
