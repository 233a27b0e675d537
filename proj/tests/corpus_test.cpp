#include <gtest/gtest.h>

#include <random>

#include "folkbangla/corpus.hpp"
#include "folkbangla/error.hpp"
#include "test_support.hpp"

namespace fb = folkbangla;
using fb::testing::TempDir;

TEST(Normalize, EmptyStaysEmpty) { EXPECT_EQ(fb::normalize(""), ""); }

TEST(Normalize, CollapsesSpacesAndLineEndings) {
  EXPECT_EQ(fb::normalize("রাজা  গেলেন\r\n"), "রাজা গেলেন\n");
  EXPECT_EQ(fb::normalize("a\t\t b\rc"), "a b\nc");
}

TEST(Normalize, DropsSpaceBeforeDanda) {
  EXPECT_EQ(fb::normalize("রাজা গেলেন ।"), "রাজা গেলেন।");
  EXPECT_EQ(fb::normalize("শেষ   ॥"), "শেষ॥");
}

// Reference outputs from Python's unicodedata.normalize("NFC", ...), see
// tests/oracles/derive.py.
TEST(Normalize, MatchesReferenceNfc) {
  EXPECT_EQ(fb::normalize("কি"), "কি");
  EXPECT_EQ(fb::normalize("ো"), "ো");
  EXPECT_EQ(fb::normalize("কো"), "কো");
  EXPECT_EQ(fb::normalize("য়"), "য়");
  EXPECT_EQ(fb::normalize("ড়"), "ড়");
  EXPECT_EQ(fb::normalize("abc"), "abc");
}

TEST(Normalize, IdempotentOnRandomText) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto text = fb::testing::random_mixed_text(rng);
    const auto once = fb::normalize(text);
    EXPECT_EQ(fb::normalize(once), once);
    EXPECT_EQ(once.find('\r'), std::string::npos);
    EXPECT_EQ(once.find("  "), std::string::npos);
  }
}

TEST(LoadCorpus, EmptyListGivesEmptyCorpus) {
  const auto c = fb::load_corpus({});
  EXPECT_TRUE(c.empty());
  EXPECT_EQ(fb::word_count(c), 0u);
}

TEST(LoadCorpus, NormalizesAndKeepsOrder) {
  TempDir dir("corpus");
  fb::write_file(dir / "b.txt", "রাজা  গেলেন\r\n");
  fb::write_file(dir / "a.txt", "রানী এলেন।");
  const auto c = fb::load_corpus({dir / "b.txt", dir / "a.txt"});
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.documents[0].id, "b");
  EXPECT_EQ(c.documents[0].normalized_text, "রাজা গেলেন\n");
  EXPECT_EQ(c.documents[0].raw_text, "রাজা  গেলেন\r\n");
  EXPECT_EQ(c.documents[1].id, "a");
}

TEST(LoadCorpus, DuplicateStemsGetUniqueIds) {
  TempDir dir("corpus");
  std::filesystem::create_directories(dir / "x");
  fb::write_file(dir / "t.txt", "ক");
  fb::write_file(dir / "x" / "t.txt", "খ");
  const auto c = fb::load_corpus({dir / "t.txt", dir / "x" / "t.txt"});
  EXPECT_EQ(c.documents[0].id, "t");
  EXPECT_EQ(c.documents[1].id, "t#2");
}

TEST(LoadCorpus, MissingFileNamesPath) {
  try {
    fb::load_corpus({"/nonexistent/tale.txt"});
    FAIL() << "expected LoadError";
  } catch (const fb::LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/tale.txt"), std::string::npos);
  }
}

TEST(LoadCorpus, InvalidUtf8ReportsByteOffset) {
  TempDir dir("corpus");
  fb::write_file(dir / "bad.txt", std::string("ab\xff") + "cd");
  try {
    fb::load_corpus({dir / "bad.txt"});
    FAIL() << "expected DecodeError";
  } catch (const fb::DecodeError& e) {
    EXPECT_EQ(e.byte_offset(), 2u);
  }
}

TEST(LoadCorpus, ReserializedNormalizedTextRoundtrips) {
  TempDir dir("corpus");
  fb::write_file(dir / "t.txt", "এক দেশে  এক রাজা ছিল ।\r\nতার সাত রানী।");
  const auto first = fb::load_corpus({dir / "t.txt"});
  fb::write_file(dir / "t.txt", first.documents[0].normalized_text);
  const auto second = fb::load_corpus({dir / "t.txt"});
  EXPECT_EQ(second.documents[0].normalized_text, first.documents[0].normalized_text);
  EXPECT_EQ(second.documents[0].raw_text, first.documents[0].normalized_text);
}

TEST(WordCount, CountsWordTokensOnly) {
  EXPECT_EQ(fb::word_count(fb::make_document("d", "রাজা গেলেন।")), 2u);
  EXPECT_EQ(fb::word_count(fb::make_document("d", "১২ ! রাজা")), 1u);
}

TEST(WordCount, AdditiveOverDocuments) {
  const auto c = fb::testing::corpus_of({"ক খ গ।", "ঘ ঙ", "", "চ। ছ? জ"});
  std::size_t sum = 0;
  for (const auto& d : c.documents) sum += fb::word_count(d);
  EXPECT_EQ(fb::word_count(c), sum);
  EXPECT_EQ(sum, 8u);
}

TEST(WordCount, StandInCorpusMatchesTaleLength) {
  const auto c = fb::load_corpus({fb::testing::data_file("kiranmala_standin.txt")});
  const double n = static_cast<double>(fb::word_count(c));
  EXPECT_NEAR(n, 2726.0, 2726.0 * 0.05);
}

TEST(Stopwords, ParseSkipsCommentsAndBlankLines) {
  const auto s = fb::StopwordList::parse("# comment\nএবং\n\n  ও \n");
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains("এবং"));
  EXPECT_TRUE(s.contains("ও"));
  EXPECT_FALSE(s.contains("# comment"));
}

TEST(Stopwords, EntriesAreNormalized) {
  const auto s = fb::StopwordList::parse("য়া\n");
  EXPECT_TRUE(s.contains(fb::normalize("য়া")));
}

TEST(Stopwords, BundledListHasAboutAHundredWords) {
  const auto s = fb::StopwordList::bundled();
  EXPECT_GE(s.size(), 90u);
  EXPECT_TRUE(s.contains("এবং"));
  for (const auto& w : s.words) {
    EXPECT_FALSE(w.empty());
    EXPECT_EQ(fb::normalize(w), w);
  }
}

TEST(Io, EmptyPathIsAnIoError) {
  EXPECT_THROW(fb::read_file(""), fb::LoadError);
  EXPECT_THROW(fb::write_file("", "x"), fb::LoadError);
}
