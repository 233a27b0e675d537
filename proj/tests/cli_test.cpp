#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "folkbangla/cli.hpp"
#include "folkbangla/pipeline.hpp"
#include "test_support.hpp"

namespace fb = folkbangla;
using fb::testing::data_file;
using fb::testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::ostringstream out, err;
  std::istringstream in(stdin_text);
  const int code = fb::cli::dispatch(args, out, err, in);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fb::PipelineConfig mini_config(const std::filesystem::path& out) {
  auto c = fb::PipelineConfig::with_bundled_data();
  c.inputs = {data_file("mini_tale.txt")};
  c.out_dir = out;
  c.embed.dim = 16;
  return c;
}

}  // namespace

TEST(Cli, NoArgumentsPrintsUsage) {
  const auto r = run({});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  const auto r = run({"dance"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, BadOptionValueIsUsageError) {
  EXPECT_EQ(run({"tokenize", "--mode", "fancy"}).code, 1);
  EXPECT_EQ(run({"nn", "--word", "x"}).code, 1);
}

TEST(Cli, HelpSucceeds) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, TokenizePunctFromStdin) {
  const auto r = run({"tokenize", "--mode", "punct"}, "রাজা গেলেন।");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "রাজা\t0\t12\tWord\nগেলেন\t13\t28\tWord\n।\t28\t31\tPunct\n");
  EXPECT_NE(r.err.find("mode=\"punct\""), std::string::npos) << r.err;
}

TEST(Cli, TokenizeSentences) {
  const auto r = run({"tokenize", "--mode", "sentences"}, "ক। খ? গ!");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), 3u);
}

TEST(Cli, InvalidUtf8IsDataError) {
  const auto r = run({"tokenize"}, std::string("ab\xc3"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("byte offset 2"), std::string::npos);
}

TEST(Cli, StatsDelegatesToWordCount) {
  const auto r = run({"stats", data_file("kiranmala_standin.txt").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "kiranmala_standin\t2726\ntotal\t2726\n");
}

TEST(Cli, MissingInputFileIsDataError) {
  EXPECT_EQ(run({"stats", "/nonexistent.txt"}).code, 2);
  EXPECT_EQ(run({"train-subword", "/nonexistent.txt"}).code, 2);
}

TEST(Cli, SubwordTrainEncodeRoundtrip) {
  TempDir dir("cli");
  const auto model = (dir / "m.bpe").string();
  EXPECT_EQ(run({"train-subword", "--vocab-size", "120", "--out", model, data_file("mini_tale.txt").string()}).code, 0);
  const auto r = run({"encode", "--model", model}, "রাজকুমার");
  EXPECT_EQ(r.code, 0);
  EXPECT_FALSE(r.out.empty());
  EXPECT_EQ(run({"encode", "--model", (dir / "none.bpe").string()}, "ক").code, 2);
  EXPECT_EQ(run({"train-subword", "--vocab-size", "3", data_file("mini_tale.txt").string()}).code, 1);
}

TEST(Cli, TrainEmbedAndNearestNeighbours) {
  TempDir dir("cli");
  const auto vecs = (dir / "v.txt").string();
  const auto r = run({"train-embed", "--dim", "20", "--min-count", "2", "--epochs", "3", "--out", vecs,
                      data_file("mini_tale.txt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto nn = run({"nn", "--model", vecs, "--word", "রাজকুমার", "--k", "3"});
  EXPECT_EQ(nn.code, 0) << nn.err;
  EXPECT_EQ(lines(nn.out), 3u);
  EXPECT_EQ(run({"nn", "--model", vecs, "--word", "অজানা"}).code, 2);
  EXPECT_EQ(run({"train-embed", "--min-count", "100", data_file("mini_tale.txt").string()}).code, 2);
  EXPECT_EQ(run({"train-embed", "--dim", "0", data_file("mini_tale.txt").string()}).code, 1);
}

TEST(Cli, CharactersAndEval) {
  TempDir dir("cli");
  const auto pred = (dir / "pred.tsv").string();
  const auto r = run({"characters", "--pred-out", pred, data_file("mini_tale.txt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("রাজকুমার\tHero\t"), std::string::npos);
  const auto e = run({"eval", "--gold", data_file("mini_tale_gold.tsv").string(), "--pred", pred, "--name", "FolkBangla"});
  EXPECT_EQ(e.code, 0);
  EXPECT_EQ(e.out, "Model Name Precision F1 Recall\nFolkBangla 100.00 100.00 100.00\n");
  EXPECT_EQ(run({"characters", "--b", "0", data_file("mini_tale.txt").string()}).code, 1);
  EXPECT_EQ(run({"characters", "--matrix", "/nonexistent.tsv", data_file("mini_tale.txt").string()}).code, 2);
}

TEST(Cli, SummarizeModes) {
  const auto tale = data_file("mini_tale.txt").string();
  const auto k = run({"summarize", "--k", "2", tale});
  EXPECT_EQ(k.code, 0);
  EXPECT_EQ(lines(k.out), 1u);
  const auto scores = run({"summarize", "--scores", tale});
  EXPECT_EQ(lines(scores.out), 10u);
  EXPECT_EQ(run({"summarize", "--k", "1", "--ratio", "0.5", tale}).code, 1);
}

TEST(Pipeline, WritesFiveArtifactsAndManifest) {
  TempDir dir("pipe");
  const auto result = fb::run_pipeline(mini_config(dir.path()));
  ASSERT_EQ(result.artifacts.size(), 5u);
  for (const auto& p : result.artifacts) EXPECT_TRUE(std::filesystem::exists(p)) << p;
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
  const auto manifest = nlohmann::json::parse(fb::read_file(result.manifest));
  EXPECT_EQ(manifest["seed"], 42);
  EXPECT_EQ(manifest["artifacts"].size(), 5u);
  EXPECT_EQ(manifest["inputs"][0]["sha256"], fb::sha256_hex(fb::read_file(data_file("mini_tale.txt"))));
}

TEST(Pipeline, MinCountIsLoweredForTinyCorpusAndRecorded) {
  TempDir dir("pipe");
  const auto result = fb::run_pipeline(mini_config(dir.path()));
  EXPECT_LT(result.effective_min_count, 10u);
  EXPECT_GE(result.effective_min_count, 1u);
  const auto manifest = nlohmann::json::parse(fb::read_file(result.manifest));
  EXPECT_EQ(manifest["embeddings"]["min_count"], result.effective_min_count);
  EXPECT_EQ(manifest["embeddings"]["min_count_requested"], 10);
}

TEST(Pipeline, MissingInputFailsInTokenizeStage) {
  TempDir dir("pipe");
  auto cfg = mini_config(dir.path());
  cfg.inputs = {"/nonexistent/tale.txt"};
  try {
    fb::run_pipeline(cfg);
    FAIL() << "expected PipelineError";
  } catch (const fb::PipelineError& e) {
    EXPECT_EQ(e.stage(), "tokenize");
  }
  const auto r = run({"pipeline", "--out-dir", dir.path().string(), "/nonexistent/tale.txt"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("tokenize"), std::string::npos);
}

TEST(Pipeline, LaterStageFailureNamesStage) {
  TempDir dir("pipe");
  auto cfg = mini_config(dir.path());
  cfg.matrix = "/nonexistent/matrix.tsv";
  try {
    fb::run_pipeline(cfg);
    FAIL() << "expected PipelineError";
  } catch (const fb::PipelineError& e) {
    EXPECT_EQ(e.stage(), "characters");
  }
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(fb::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
