// holme: server, evaluation and conversion entry points.
//
// Exit codes: 0 success, 1 usage error, 2 data or processing error.

#include "holme/errors.hpp"
#include "holme/generation.hpp"
#include "holme/io.hpp"
#include "holme/protocol.hpp"
#include "holme/report.hpp"
#include "holme/server.hpp"

#include "CLI11.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Thrown for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty())
    std::cout << text << std::flush;
  else
    holme::write_file(out, text);
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

holme::Scene read_scene(const fs::path& path) {
  auto loaded = holme::load_scene(holme::read_file(path));
  for (const auto& w : loaded.warnings) std::cerr << path.string() << ": warning: " << w << "\n";
  return std::move(loaded.scene);
}

holme::GeneratorKind generator_option(const std::string& name) {
  const auto kind = holme::parse_generator(name);
  if (!kind) throw UsageError("unknown generator '" + name + "' (expected tubes or hull)");
  return *kind;
}

std::uint16_t default_port() {
  const char* env = std::getenv("HOLME_PORT");
  if (!env || !*env) return holme::kDefaultPort;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0 || v > 65535) throw UsageError(std::string("bad HOLME_PORT '") + env + "'");
  return static_cast<std::uint16_t>(v);
}

// serve --------------------------------------------------------------------------

struct ServeOptions {
  std::optional<int> port;
  std::optional<int> ws_port;
  std::string generator = "tubes";
};

int cmd_serve(const ServeOptions& opt) {
  const auto kind = generator_option(opt.generator);
  const std::uint16_t port = opt.port ? static_cast<std::uint16_t>(*opt.port) : default_port();

  std::mutex log_mutex;
  holme::MessageHandler handler(kind, [&](const holme::RequestLog& r) {
    std::lock_guard lock(log_mutex);
    std::cerr << "request_id=" << r.request_id << " type=" << r.type
              << " generator=" << (r.generator.empty() ? "-" : r.generator)
              << " variants=" << r.variants << " elapsed_ms=" << r.elapsed_ms
              << " outcome=" << r.outcome << std::endl;
  });

  // Block termination signals before any thread starts so sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  holme::TcpServer tcp(handler);
  tcp.bind(port);
  std::optional<holme::WebSocketServer> ws;
  if (opt.ws_port) {
    std::optional<fs::path> root;
    if (const char* dir = std::getenv("HOLME_STATIC_DIR"); dir && *dir) root = fs::path(dir);
    ws.emplace(handler, root);
    ws->bind(static_cast<std::uint16_t>(*opt.ws_port));
  }

  std::cerr << "listening tcp=" << tcp.port();
  if (ws) std::cerr << " ws=" << ws->port();
  std::cerr << " generator=" << holme::to_string(kind) << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "signal " << sig << ", shutting down" << std::endl;
    tcp.stop();
    if (ws) ws->stop();
  });
  std::thread ws_thread;
  if (ws) ws_thread = std::thread([&] { ws->run(); });
  tcp.run();
  if (ws_thread.joinable()) ws_thread.join();
  waiter.join();
  return 0;
}

// eval ---------------------------------------------------------------------------

struct EvalOptions {
  std::string sketch;
  std::string truth;
  std::string batch;
  std::string out;
  double iou_threshold = holme::kDefaultIouThreshold;
  double tie_epsilon = holme::kDefaultTieEpsilon;
};

std::set<std::string> scene_names(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw holme::Error(holme::ErrorCode::kIoError, dir.string() + ": not a directory");
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") names.insert(e.path().filename().string());
  return names;
}

int cmd_eval(const EvalOptions& opt) {
  if (!opt.batch.empty() && (!opt.sketch.empty() || !opt.truth.empty()))
    throw UsageError("--batch cannot be combined with --sketch/--truth");
  if (opt.batch.empty() && (opt.sketch.empty() || opt.truth.empty()))
    throw UsageError("eval needs --sketch and --truth, or --batch");

  holme::EvalOptions eo;
  eo.iou_threshold = opt.iou_threshold;
  eo.tie_epsilon = opt.tie_epsilon;

  if (opt.batch.empty()) {
    auto e = holme::evaluate_scenes(read_scene(opt.sketch), read_scene(opt.truth), eo);
    e.name = fs::path(opt.sketch).filename().string();
    emit(dump(holme::report_json(e)), opt.out);
    return 0;
  }

  const fs::path root(opt.batch);
  const auto sketches = scene_names(root / "sketch");
  const auto truths = scene_names(root / "truth");
  std::vector<holme::SceneEvaluation> evals;
  for (const auto& name : sketches) {
    if (!truths.count(name)) {
      std::cerr << "warning: sketch/" << name << " has no truth counterpart, skipped\n";
      continue;
    }
    auto e = holme::evaluate_scenes(read_scene(root / "sketch" / name),
                                    read_scene(root / "truth" / name), eo);
    e.name = fs::path(name).stem().string();
    evals.push_back(std::move(e));
  }
  for (const auto& name : truths)
    if (!sketches.count(name)) std::cerr << "warning: truth/" << name << " has no sketch counterpart, skipped\n";
  if (evals.empty())
    throw holme::Error(holme::ErrorCode::kEmptyInput, root.string() + ": no scene pairs found");
  emit(dump(holme::batch_report_json(evals)), opt.out);
  return 0;
}

// convert / generate / scorecard ----------------------------------------------------

int cmd_convert(const std::string& in, const std::string& out, double radius, int sides) {
  if (!(radius > 0.0)) throw UsageError("--tube-radius must be > 0");
  if (sides < 3) throw UsageError("--sides must be >= 3");
  const auto sketch = holme::load_sketch(holme::read_file(in));
  emit(holme::sketch_to_obj(sketch, radius, sides), out);
  return 0;
}

struct GenerateOptions {
  std::string sketch;
  std::string generator = "tubes";
  int variants = 1;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateOptions& opt) {
  holme::GenerateRequest request;
  request.request_id = "cli";
  request.generator = generator_option(opt.generator);
  request.variants = opt.variants;
  request.seed = opt.seed;
  request.encoding = holme::encode_sketch(holme::load_sketch(holme::read_file(opt.sketch)));
  const auto response = holme::generate(request);

  const fs::path dir(opt.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw holme::Error(holme::ErrorCode::kIoError, dir.string() + ": " + ec.message());
  for (std::size_t k = 0; k < response.meshes.size(); ++k)
    holme::write_file(dir / ("variant_" + std::to_string(k) + ".obj"),
                      holme::export_obj(response.meshes[k]));
  return 0;
}

int cmd_scorecard(const std::string& in, const std::string& out) {
  const auto entries = holme::parse_scorecard_csv(holme::read_file(in));
  emit(dump(holme::scorecard_json(holme::aggregate_scorecard(entries))), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sketch-to-scene server, evaluator and converters"};
  app.require_subcommand(1);

  ServeOptions serve;
  auto* s = app.add_subcommand("serve", "Run the generation server");
  s->add_option("--port", serve.port, "TCP port (default 9475 or $HOLME_PORT)")->check(CLI::Range(0, 65535));
  s->add_option("--ws-port", serve.ws_port, "WebSocket/HTTP port; disabled when absent")
      ->check(CLI::Range(0, 65535));
  s->add_option("--generator", serve.generator, "Default generator: tubes|hull")
      ->check(CLI::IsMember({"tubes", "hull"}));

  EvalOptions eval;
  auto* e = app.add_subcommand("eval", "Score sketch scenes against ground truth");
  e->add_option("--sketch", eval.sketch, "Sketch scene JSON");
  e->add_option("--truth", eval.truth, "Ground-truth scene JSON");
  e->add_option("--batch", eval.batch, "Directory with sketch/ and truth/ subdirectories");
  e->add_option("--iou-threshold", eval.iou_threshold, "IoU binarization threshold")
      ->check(CLI::Range(0.0, 1.0));
  e->add_option("--tie-epsilon", eval.tie_epsilon, "Orientation tie tolerance in meters")
      ->check(CLI::NonNegativeNumber);
  e->add_option("--out", eval.out, "Report path (stdout when absent)");

  std::string convert_in, convert_out;
  double tube_radius = 0.005;
  int sides = 8;
  auto* c = app.add_subcommand("convert", "Render sketch strokes as OBJ tubes");
  c->add_option("--in", convert_in, "Sketch JSON")->required();
  c->add_option("--out", convert_out, "OBJ path (stdout when absent)");
  c->add_option("--tube-radius", tube_radius, "Tube radius in meters");
  c->add_option("--sides", sides, "Tube ring sides");

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Generate mesh variants offline");
  g->add_option("--sketch", gen.sketch, "Sketch JSON")->required();
  g->add_option("--generator", gen.generator, "tubes|hull")->check(CLI::IsMember({"tubes", "hull"}));
  g->add_option("--variants", gen.variants, "Number of variants")->check(CLI::Range(1, holme::kMaxVariants));
  g->add_option("--seed", gen.seed, "Jitter seed");
  g->add_option("--out", gen.out, "Output directory")->required();

  std::string score_in, score_out;
  auto* sc = app.add_subcommand("scorecard", "Aggregate questionnaire ratings per condition");
  sc->add_option("--in", score_in, "CSV: rater_id,condition,SL,OP,SR,OD")->required();
  sc->add_option("--out", score_out, "JSON path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (s->parsed()) return cmd_serve(serve);
    if (e->parsed()) return cmd_eval(eval);
    if (c->parsed()) return cmd_convert(convert_in, convert_out, tube_radius, sides);
    if (g->parsed()) return cmd_generate(gen);
    if (sc->parsed()) return cmd_scorecard(score_in, score_out);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
