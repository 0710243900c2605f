#include <httplib.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "acceptance.h"
#include "sqlreward/service/batch.h"
#include "sqlreward/service/config.h"
#include "sqlreward/service/registry.h"
#include "sqlreward/service/scorer.h"
#include "sqlreward/service/server.h"

namespace sqlreward::acceptance {
namespace {

std::filesystem::path repo_root() { return testing::data_dir().parent_path().parent_path(); }

service::Scorer make_scorer() {
  service::ServiceConfig config = service::load_config(repo_root() / "config" / "default.json");
  auto embedder = service::make_embedder(config.embedder);
  return service::Scorer(std::move(config), service::FixtureRegistry::load_dir(testing::fixture_dir()),
                         std::move(embedder));
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

// Runs the CLI binary on the corpus and returns its stdout, or nullopt when
// the binary is not available.
std::optional<std::string> run_cli(const std::filesystem::path& corpus) {
#ifdef SQLREWARD_CLI_PATH
  const std::filesystem::path cli = SQLREWARD_CLI_PATH;
  if (!std::filesystem::exists(cli)) return std::nullopt;
  const std::filesystem::path out = std::filesystem::temp_directory_path() / "sqlreward_acceptance_cli.jsonl";
  const std::string cmd = "\"" + cli.string() + "\" --config \"" + (repo_root() / "config" / "default.json").string() +
                          "\" --fixtures \"" + testing::fixture_dir().string() + "\" score -i \"" + corpus.string() +
                          "\" -o \"" + out.string() + "\"";
  if (std::system(cmd.c_str()) != 0) return std::nullopt;
  std::string text = testing::read_file(out);
  std::filesystem::remove(out);
  return text;
#else
  (void)corpus;
  return std::nullopt;
#endif
}

}  // namespace

Outcome c10_determinism() {
  Outcome out;
  const std::filesystem::path corpus = testing::data_dir() / "corpus_mixed.jsonl";
  const std::string input = testing::read_file(corpus);
  const std::vector<std::string> records = lines_of(input);
  if (records.size() != 100) out.fail("corpus has " + std::to_string(records.size()) + " records, expected 100");

  std::string runs[2];
  for (std::string& run : runs) {
    const service::Scorer scorer = make_scorer();
    if (scorer.embedder().name() != "hashed-bag") out.fail("corpus is not scored with the deterministic embedder");
    std::istringstream in(input);
    std::ostringstream os;
    const int rc = service::cmd_score(in, os, scorer, false);
    if (rc != service::kExitOk) out.fail("cmd_score exited with " + std::to_string(rc));
    run = os.str();
  }
  if (runs[0] != runs[1]) out.fail("two cmd_score runs differ");
  const std::vector<std::string> responses = lines_of(runs[0]);
  if (responses.size() != records.size()) out.fail("response count differs from record count");

  int nl = 0, sql = 0;
  for (const std::string& r : responses) {
    (r.find("\"acc_branch\":\"nl\"") != std::string::npos ? nl : sql)++;
  }
  if (nl == 0 || sql == 0) out.fail("corpus is not mixed-modality");

  bool cli_checked = false;
  if (const auto cli = run_cli(corpus)) {
    cli_checked = true;
    if (*cli != runs[0]) out.fail("CLI output differs from the in-process run");
  }

  // Serve parity on every fifth record.
  int parity = 0;
  {
    const service::Scorer scorer = make_scorer();
    service::ScoreServer server(scorer);
    const int port = server.bind("127.0.0.1", 0);
    std::thread thread([&] { server.run(); });
    for (int wait = 0; wait < 200 && !server.running(); ++wait) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(30, 0);
    for (std::size_t i = 0; i < records.size() && i < responses.size(); i += 5) {
      const auto res = client.Post("/score", records[i], "application/json");
      if (!res) {
        out.fail("POST /score failed for record " + std::to_string(i));
        continue;
      }
      if (res->status != 200) out.fail("record " + std::to_string(i) + ": HTTP " + std::to_string(res->status));
      if (res->body != responses[i]) {
        out.fail("record " + std::to_string(i) + ": served body differs from cmd_score");
      } else {
        ++parity;
      }
    }
    server.stop();
    thread.join();
  }
  if (parity != 20) out.fail("serve parity on " + std::to_string(parity) + "/20 records");

  out.detail = "2 runs over " + std::to_string(responses.size()) + " records byte-identical (" + std::to_string(sql) +
               " SQL, " + std::to_string(nl) + " NL" + (cli_checked ? ", CLI identical" : "") + "), serve parity " +
               std::to_string(parity) + "/20";
  return out;
}

}  // namespace sqlreward::acceptance
