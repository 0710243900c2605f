// sqlreward: batch scoring, group advantages, mutations, fixture checks and
// the scoring server.

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <thread>

#include "sqlreward/error.h"
#include "sqlreward/service/batch.h"
#include "sqlreward/service/config.h"
#include "sqlreward/service/server.h"

namespace {

using namespace sqlreward;

struct Streams {
  std::ifstream in_file;
  std::ofstream out_file;
  std::istream* in = &std::cin;
  std::ostream* out = &std::cout;
};

void open_streams(Streams& s, const std::string& input, const std::string& output) {
  if (!input.empty() && input != "-") {
    s.in_file.open(input, std::ios::binary);
    if (!s.in_file) throw IoError("cannot open input " + input);
    s.in = &s.in_file;
  }
  if (!output.empty() && output != "-") {
    s.out_file.open(output, std::ios::binary | std::ios::trunc);
    if (!s.out_file) throw IoError("cannot open output " + output);
    s.out = &s.out_file;
  }
}

service::ServiceConfig config_from(const std::string& path) {
  if (path.empty()) return service::parse_config(service::default_config_json());
  return service::load_config(path);
}

std::pair<std::string, int> split_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw InvalidArgument("--bind expects host:port");
  return {bind.substr(0, colon), std::stoi(bind.substr(colon + 1))};
}

int serve(const service::Scorer& scorer, const std::string& bind) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::ScoreServer server(scorer);
  const auto [host, port] = split_bind(bind);
  const int bound = server.bind(host, port);
  std::cerr << "sqlreward: serving " << scorer.fixtures().size() << " fixture(s) on " << host << ":" << bound
            << std::endl;

  std::thread waiter([&server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  // run() also returns when the socket fails; release the waiter.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  std::cerr << "sqlreward: stopped" << std::endl;
  return service::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sqlreward: execution-grounded rewards for NL2SQL training"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string fixtures_dir = "data/fixtures";
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "Config JSON (defaults built in)");
  app.add_option("--fixtures", fixtures_dir, "Directory of fixture manifests")->capture_default_str();
  app.add_option("--seed", seed, "Base RNG seed for mutations")->capture_default_str();

  std::string input, output;
  bool timing = false;
  auto* score = app.add_subcommand("score", "Score JSONL task samples");
  score->add_option("--input,-i", input, "Input JSONL (default stdin)");
  score->add_option("--output,-o", output, "Output JSONL (default stdout)");
  score->add_flag("--timing", timing, "Add timing_ms to each response");

  auto* group = app.add_subcommand("score-group", "Group advantages and objective");
  group->add_option("--input,-i", input, "Input JSONL (default stdin)");
  group->add_option("--output,-o", output, "Output JSONL (default stdout)");

  service::MutateOptions mopt;
  std::string error_kind, write_fixtures, merge;
  auto* mut = app.add_subcommand("mutate", "Reflection errors, degenerate rewrites, template fills");
  mut->add_option("mode", mopt.mode, "reflection | degenerate | instantiate")
      ->required()
      ->check(CLI::IsMember({"reflection", "degenerate", "instantiate"}));
  mut->add_option("--input,-i", input, "SQL or JSONL inputs (default stdin)");
  mut->add_option("--output,-o", output, "Output JSONL (default stdout)");
  mut->add_option("--error-kind", error_kind, "truncate_paren | typo_keyword | wrong_column | drop_projection");
  mut->add_option("--fixture", mopt.fixture_ref, "Fixture name or id");
  mut->add_option("--dim-table", mopt.dim_table, "Dimension table to merge");
  mut->add_option("--merge", merge, "Comma-separated columns to merge");
  mut->add_option("--inventory", mopt.inventory, "Dimension inventory JSON");
  mut->add_option("--templates", mopt.templates, "Query template JSON");
  mut->add_option("--count", mopt.count, "Fillings per template")->capture_default_str();
  mut->add_option("--write-fixtures", write_fixtures, "Write derived fixtures under this directory");

  std::vector<std::string> fixture_paths;
  auto* validate = app.add_subcommand("validate-fixture", "Load and summarize fixtures");
  validate->add_option("paths", fixture_paths, "Manifest files or fixture directories")->required();

  std::string bind = "127.0.0.1:8080";
  auto* srv = app.add_subcommand("serve", "HTTP scoring service");
  srv->add_option("--bind", bind, "host:port")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return service::cmd_validate_fixture({fixture_paths.begin(), fixture_paths.end()}, std::cout);

    const service::ServiceConfig config = config_from(config_path);
    Streams io;
    if (group->parsed()) {
      open_streams(io, input, output);
      return service::cmd_score_group(*io.in, *io.out, config.grpo);
    }

    service::FixtureRegistry fixtures = service::FixtureRegistry::load_dir(fixtures_dir);
    if (mut->parsed()) {
      open_streams(io, input, output);
      mopt.seed = seed;
      if (!error_kind.empty()) {
        mopt.error_kind = mutate::error_kind_from_string(error_kind);
        if (!mopt.error_kind) throw InvalidArgument("unknown --error-kind " + error_kind);
      }
      for (std::size_t start = 0; !merge.empty() && start <= merge.size();) {
        const auto comma = merge.find(',', start);
        const auto end = comma == std::string::npos ? merge.size() : comma;
        if (end > start) mopt.merge_columns.push_back(merge.substr(start, end - start));
        start = end + 1;
      }
      if (!write_fixtures.empty()) mopt.write_fixtures = write_fixtures;
      return service::cmd_mutate(*io.in, *io.out, mopt, fixtures);
    }

    const service::Scorer scorer(config, std::move(fixtures), service::make_embedder(config.embedder));
    if (score->parsed()) {
      open_streams(io, input, output);
      return service::cmd_score(*io.in, *io.out, scorer, timing);
    }
    return serve(scorer, bind);
  } catch (const std::exception& e) {
    std::cerr << "sqlreward: " << e.what() << std::endl;
    return service::kExitFatal;
  }
}
