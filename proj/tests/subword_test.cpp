#include <gtest/gtest.h>

#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "folkbangla/error.hpp"
#include "folkbangla/subword.hpp"
#include "test_support.hpp"

namespace fb = folkbangla;
using fb::SubwordModel;
using fb::testing::corpus_of;
using fb::testing::TempDir;

namespace {

using Merge = std::pair<std::string, std::string>;

// Straightforward BPE over explicit symbol vectors: count every adjacent pair,
// take the most frequent (smallest pair on ties), rewrite, repeat.
std::vector<Merge> reference_bpe(const std::vector<std::string>& words, std::size_t max_merges) {
  std::vector<std::vector<std::string>> seqs;
  for (const auto& w : words) {
    std::vector<std::string> s;
    for (const auto& cp : fb::utf8::code_points(w)) s.push_back(fb::utf8::encode(cp.value));
    s.emplace_back("▁");
    seqs.push_back(s);
  }
  std::vector<Merge> merges;
  while (merges.size() < max_merges) {
    std::map<Merge, int> counts;
    for (const auto& s : seqs)
      for (std::size_t i = 0; i + 1 < s.size(); ++i) ++counts[{s[i], s[i + 1]}];
    Merge best;
    int best_count = 1;
    for (const auto& [p, c] : counts) {
      if (c > best_count || (c == best_count && c > 1 && p < best)) {
        best = p;
        best_count = c;
      }
    }
    if (best_count < 2) break;
    merges.push_back(best);
    for (auto& s : seqs) {
      std::vector<std::string> next;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i + 1 < s.size() && s[i] == best.first && s[i + 1] == best.second) {
          next.push_back(best.first + best.second);
          ++i;
        } else {
          next.push_back(s[i]);
        }
      }
      s = next;
    }
  }
  return merges;
}

std::vector<std::string> piece_strings(const SubwordModel& m, const fb::PieceSequence& seq) {
  std::vector<std::string> out;
  for (auto id : seq.ids) out.push_back(m.id_to_piece[id]);
  return out;
}

}  // namespace

TEST(TrainSubword, FirstMergeOnToyCorpus) {
  const auto m = fb::train_subword(corpus_of({"ababab"}), 100);
  ASSERT_FALSE(m.merges.empty());
  EXPECT_EQ(m.merges[0], Merge("a", "b"));
  // Hand-run: a b a b a b ▁ -> ab ab ab ▁ -> abab ab ▁, then every pair is unique.
  EXPECT_EQ(m.merges, (std::vector<Merge>{{"a", "b"}, {"ab", "ab"}}));
  EXPECT_EQ(m.id_to_piece, (std::vector<std::string>{"<unk>", "<s>", "</s>", "▁", "a", "b", "ab", "abab"}));
}

TEST(TrainSubword, SingleCharacterCorpus) {
  const auto m = fb::train_subword(corpus_of({"ককক"}), 100);
  EXPECT_EQ(m.alphabet, (std::set<char32_t>{U'ক'}));
  ASSERT_FALSE(m.merges.empty());
  EXPECT_EQ(m.merges[0], Merge("ক", "ক"));
}

TEST(TrainSubword, VocabOfAlphabetPlusSpecialsHasNoMerges) {
  const auto corpus = corpus_of({"ab ba ab"});
  const auto m = fb::train_subword(corpus, 2 + SubwordModel::kNumSpecials);
  EXPECT_TRUE(m.merges.empty());
  EXPECT_EQ(m.size(), 6u);
}

TEST(TrainSubword, TooSmallVocabIsConfigError) {
  EXPECT_THROW(fb::train_subword(corpus_of({"abc"}), 6), fb::ConfigError);
}

TEST(TrainSubword, EmptyCorpusIsTrainingError) {
  EXPECT_THROW(fb::train_subword(corpus_of({}), 100), fb::TrainingError);
  EXPECT_THROW(fb::train_subword(corpus_of({"   "}), 100), fb::TrainingError);
}

TEST(TrainSubword, NeverExceedsVocabSize) {
  const auto corpus = fb::load_corpus({fb::testing::data_file("mini_tale.txt")});
  for (std::size_t v : {60u, 80u, 100u, 500u}) EXPECT_LE(fb::train_subword(corpus, v).size(), v);
}

TEST(TrainSubword, MatchesReferenceImplementation) {
  const std::vector<std::string> words = {"রাজা", "রাজার", "রাজাকে", "রানী", "রানীর", "রাজা", "বনে", "বনের"};
  std::string text;
  for (const auto& w : words) text += w + " ";
  const auto m = fb::train_subword(corpus_of({text}), 1000);
  EXPECT_EQ(m.merges, reference_bpe(words, 1000));
}

TEST(TrainSubword, MergeReplayRebuildsPieceList) {
  const auto corpus = fb::load_corpus({fb::testing::data_file("mini_tale.txt")});
  const auto m = fb::train_subword(corpus, 200);
  auto rebuilt = SubwordModel::with_specials();
  for (char32_t c : m.alphabet) rebuilt.add_piece(fb::utf8::encode(c));
  for (const auto& [l, r] : m.merges) rebuilt.add_piece(l + r);
  EXPECT_EQ(rebuilt.id_to_piece, m.id_to_piece);
  for (const auto& doc : corpus.documents) {
    for (auto id : fb::encode(m, doc.normalized_text).ids) EXPECT_NE(id, SubwordModel::kUnk);
  }
}

TEST(Encode, EmptyText) { EXPECT_TRUE(fb::encode(fb::train_subword(corpus_of({"ab"}), 10), "").empty()); }

TEST(Encode, SingleCharacterIsItsPiece) {
  const auto m = fb::train_subword(corpus_of({"ab ba"}), 6);
  const auto seq = fb::encode(m, "a");
  EXPECT_EQ(piece_strings(m, seq), (std::vector<std::string>{"a", "▁"}));
  EXPECT_EQ(seq.ids[0], *m.find("a"));
}

TEST(Encode, FullyMergedTrainingWordIsOnePiece) {
  const auto m = fb::train_subword(corpus_of({"রাজা রাজা রাজা"}), 100);
  const auto seq = fb::encode(m, "রাজা");
  EXPECT_EQ(piece_strings(m, seq), (std::vector<std::string>{"রাজা▁"}));
  EXPECT_EQ(seq.spans[0], std::make_pair(std::size_t{0}, std::string("রাজা").size()));
}

TEST(Encode, OutOfAlphabetIsUnk) {
  const auto m = fb::train_subword(corpus_of({"ab ab"}), 100);
  const auto seq = fb::encode(m, "axb");
  EXPECT_EQ(seq.ids[1], SubwordModel::kUnk);
  EXPECT_EQ(fb::decode(m, seq), "a⁇b");
}

TEST(Encode, IsDeterministic) {
  const auto corpus = fb::load_corpus({fb::testing::data_file("mini_tale.txt")});
  const auto a = fb::train_subword(corpus, 150);
  const auto b = fb::train_subword(corpus, 150);
  EXPECT_EQ(a, b);
  const auto& text = corpus.documents[0].normalized_text;
  EXPECT_EQ(fb::encode(a, text).ids, fb::encode(b, text).ids);
}

TEST(Decode, Empty) { EXPECT_EQ(fb::decode(fb::train_subword(corpus_of({"ab"}), 10), std::vector<fb::PieceId>{}), ""); }

TEST(Decode, OutOfRangeIdIsDecodeError) {
  const auto m = fb::train_subword(corpus_of({"ab"}), 10);
  try {
    fb::decode(m, std::vector<fb::PieceId>{4, 99});
    FAIL() << "expected DecodeError";
  } catch (const fb::DecodeError& e) {
    EXPECT_EQ(e.byte_offset(), 1u);
  }
}

TEST(Decode, RoundtripsTrainingText) {
  const auto corpus = fb::load_corpus({fb::testing::data_file("mini_tale.txt")});
  const auto m = fb::train_subword(corpus, 120);
  std::string text = corpus.documents[0].normalized_text;
  while (!text.empty() && text.back() == '\n') text.pop_back();
  EXPECT_EQ(fb::decode(m, fb::encode(m, text)), text);
}

TEST(SubwordModelIo, SaveLoadRoundtrip) {
  TempDir dir("bpe");
  const auto corpus = fb::load_corpus({fb::testing::data_file("mini_tale.txt")});
  const auto m = fb::train_subword(corpus, 150);
  fb::save_model(m, dir / "m.bpe");
  const auto loaded = fb::load_model(dir / "m.bpe");
  EXPECT_EQ(loaded, m);
  EXPECT_EQ(fb::serialize(loaded), fb::serialize(m));
}

TEST(SubwordModelIo, TruncatedFileIsParseError) {
  const auto m = fb::train_subword(corpus_of({"ababab abab"}), 100);
  const auto text = fb::serialize(m);
  const auto cut = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  EXPECT_THROW(fb::parse_subword_model(cut), fb::ParseError);
}

TEST(SubwordModelIo, ParseErrorsCarryLineNumbers) {
  const std::vector<std::tuple<std::string, std::size_t>> cases = {
      {"bpe v0\n", 1},
      {"folkbangla-bpe v1\n#pieces x\n", 2},
      {"folkbangla-bpe v1\n#pieces 4\n0\t<unk>\n1\t<s>\n2\t</s>\n3\tX\n#merges 0\n", 6},
      {"folkbangla-bpe v1\n#pieces 5\n0\t<unk>\n1\t<s>\n2\t</s>\n3\t▁\n5\ta\n#merges 0\n", 7},
      {"folkbangla-bpe v1\n#pieces 5\n0\t<unk>\n1\t<s>\n2\t</s>\n3\t▁\n4\ta\n#merges 1\na\tb\n", 9},
  };
  for (const auto& [text, line] : cases) {
    try {
      fb::parse_subword_model(text);
      ADD_FAILURE() << "no error for: " << text;
    } catch (const fb::ParseError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
    }
  }
}

TEST(SubwordModelIo, EmptyPathIsIoError) {
  EXPECT_THROW(fb::load_model(""), fb::LoadError);
  EXPECT_THROW(fb::save_model(SubwordModel::with_specials(), ""), fb::LoadError);
}
