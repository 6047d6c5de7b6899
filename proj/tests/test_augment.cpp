#include "augment.hpp"

#include <doctest.h>

#include <sstream>

#include "error.hpp"
#include "rng.hpp"
#include "support/tempdir.hpp"
#include "utf8.hpp"

using namespace cognate;
using augment::BpeModel;
using augment::ParallelCorpus;

namespace {

std::vector<std::string> lines(const std::string& single) {
  return {single};
}

context::WordPair cognate_pair(const std::string& s, const std::string& t) {
  return {"hi-te", s, t, 1, "p"};
}

}  // namespace

TEST_CASE("inject appends aligned single-word lines") {
  ParallelCorpus corpus;
  corpus.src_lines = {"a b c", "d e", "f"};
  corpus.tgt_lines = {"A B", "D E F", "G"};
  const std::vector<context::WordPair> cognates = {cognate_pair("x", "X"),
                                                   cognate_pair("y", "Y")};
  const auto stats = augment::inject_cognates(corpus, cognates);
  CHECK(stats.appended == 2);
  REQUIRE(corpus.src_lines.size() == 5);
  REQUIRE(corpus.tgt_lines.size() == 5);
  CHECK(corpus.src_lines[0] == "a b c");  // original prefix untouched
  CHECK(corpus.src_lines[3] == "x");
  CHECK(corpus.tgt_lines[4] == "Y");
}

TEST_CASE("inject with an empty list is the identity") {
  ParallelCorpus corpus;
  corpus.src_lines = {"a"};
  corpus.tgt_lines = {"b"};
  const auto stats = augment::inject_cognates(corpus, {});
  CHECK(stats.appended == 0);
  CHECK(corpus.src_lines.size() == 1);
}

TEST_CASE("inject skips empty words and foreign language pairs") {
  ParallelCorpus corpus;
  corpus.src_lines = {"a"};
  corpus.tgt_lines = {"b"};
  std::vector<context::WordPair> cognates = {
      cognate_pair("x", "X"), {"hi-te", "", "Y", 1, "e"},
      {"hi-gu", "z", "Z", 1, "f"}};
  const auto stats =
      augment::inject_cognates(corpus, cognates, std::string("hi-te"));
  CHECK(stats.appended == 1);
  CHECK(stats.skipped_empty == 1);
  CHECK(stats.skipped_lang_pair == 1);
  CHECK(corpus.src_lines.size() == 2);
}

TEST_CASE("a 930-pair list grows the corpus by exactly 930 aligned lines") {
  ParallelCorpus corpus;
  for (int i = 0; i < 200; ++i) {
    corpus.src_lines.push_back("src line " + std::to_string(i));
    corpus.tgt_lines.push_back("tgt line " + std::to_string(i));
  }
  std::vector<context::WordPair> cognates;
  for (int i = 0; i < 930; ++i) {
    cognates.push_back(cognate_pair("s" + std::to_string(i),
                                    "t" + std::to_string(i)));
  }
  const auto stats = augment::inject_cognates(corpus, cognates);
  CHECK(stats.appended == 930);
  CHECK(corpus.src_lines.size() == 200 + 930);
  CHECK(corpus.tgt_lines.size() == 200 + 930);
}

TEST_CASE("misaligned corpus files are rejected") {
  testutil::TempDir tmp;
  const auto src = tmp.write("s.txt", "one\ntwo\n");
  const auto tgt = tmp.write("t.txt", "one\n");
  CHECK_THROWS_AS((void)augment::load_parallel(src, tgt), Error);
}

TEST_CASE("bpe learn on the aaab micro-corpus") {
  // Pair counts in "aaab aaab": (a,a) = 4, (a,b) = 2, (b,</w>) = 2.
  const std::vector<std::string> corpus = {"aaab aaab"};
  const auto model = BpeModel::learn(corpus, 1);
  REQUIRE(model.merges().size() == 1);
  CHECK(model.merges()[0] == std::pair<std::string, std::string>{"a", "a"});
}

TEST_CASE("bpe learn with zero merges") {
  const auto model = BpeModel::learn(lines("some words"), 0);
  CHECK(model.merges().empty());
}

TEST_CASE("bpe learn stops early when no pair repeats") {
  const std::vector<std::string> corpus = {"a b c d"};
  const auto model = BpeModel::learn(corpus, 10);
  CHECK(model.merges().empty());

  // One repeated word: its pairs occur twice, all others once.
  const auto model2 = BpeModel::learn(lines("ab ab cd"), 10);
  CHECK(model2.merges().size() < 10);
  CHECK(!model2.merges().empty());
}

TEST_CASE("bpe apply renders @@ joiners") {
  const auto model = BpeModel::learn(lines("aaab aaab"), 1);
  SUBCASE("derived micro example") {
    CHECK(model.apply_token("aaab") == "aa@@ a@@ b");
  }
  SUBCASE("unseen token with no applicable merge splits to characters") {
    CHECK(model.apply_token("xyz") == "x@@ y@@ z");
  }
  SUBCASE("token fully covered by merges is emitted whole") {
    const auto full = BpeModel::learn(lines("ab ab"), 10);
    CHECK(full.apply_token("ab") == "ab");
  }
  SUBCASE("lines keep token boundaries") {
    CHECK(model.apply_line("aaab xy") == "aa@@ a@@ b x@@ y");
    CHECK(model.apply_line("") == "");
  }
}

TEST_CASE("bpe round-trip recovers every token") {
  rng::Engine eng(808);
  const auto model =
      BpeModel::learn(lines("banana bandana cabana banana"), 8);
  for (int iter = 0; iter < 10000; ++iter) {
    std::string token;
    const std::size_t len = 1 + rng::bounded(eng, 10);
    for (std::size_t i = 0; i < len; ++i) {
      token.push_back("abndc"[rng::bounded(eng, 5)]);
    }
    const std::string segmented = model.apply_token(token);
    // Removing the joiner must recover the token exactly.
    std::string joined;
    std::size_t pos = 0;
    while (pos < segmented.size()) {
      const auto hit = segmented.find("@@ ", pos);
      if (hit == std::string::npos) {
        joined += segmented.substr(pos);
        break;
      }
      joined += segmented.substr(pos, hit - pos);
      pos = hit + 3;
    }
    CHECK(joined == token);
  }
}

TEST_CASE("bpe learning is deterministic") {
  const std::vector<std::string> corpus = {"the cat sat on the mat",
                                           "the bat and the rat"};
  const auto a = BpeModel::learn(corpus, 20);
  const auto b = BpeModel::learn(corpus, 20);
  CHECK(a.merges() == b.merges());
}

TEST_CASE("more merges never produce more tokens per word") {
  const std::vector<std::string> corpus = {"banana bandana cabana",
                                           "ban can cabal banal"};
  const auto count_tokens = [](const std::string& segmented) {
    std::size_t n = 1;
    std::size_t pos = 0;
    while ((pos = segmented.find("@@ ", pos)) != std::string::npos) {
      ++n;
      pos += 3;
    }
    return n;
  };
  const auto full = BpeModel::learn(corpus, 30);
  const std::size_t max_merges = full.merges().size();
  for (std::size_t n = 1; n <= max_merges; ++n) {
    const auto fewer = BpeModel::learn(corpus, n - 1);
    const auto more = BpeModel::learn(corpus, n);
    for (const std::string word : {"banana", "cabal", "bandana", "banal"}) {
      CHECK(count_tokens(more.apply_token(word)) <=
            count_tokens(fewer.apply_token(word)));
    }
  }
}

TEST_CASE("merge files round-trip with a version header") {
  testutil::TempDir tmp;
  const auto model = BpeModel::learn(lines("banana bandana"), 6);
  const auto path = tmp.path() / "merges.txt";
  model.save(path);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "#bpe-merges v1");

  const auto loaded = BpeModel::load(path);
  CHECK(loaded.merges() == model.merges());

  const auto bad = tmp.write("bad.txt", "no header\na b\n");
  CHECK_THROWS_AS(BpeModel::load(bad), Error);
  CHECK_THROWS_AS(BpeModel::load(tmp.path() / "missing.txt"), Error);
}

TEST_CASE("bpe handles multibyte codepoints as single symbols") {
  // Devanagari "kamal" twice: merges operate on codepoints, not bytes.
  const std::vector<std::string> corpus = {
      "कमल कमल"};
  const auto model = BpeModel::learn(corpus, 1);
  REQUIRE(model.merges().size() == 1);
  CHECK(model.merges()[0] ==
        std::pair<std::string, std::string>{"क", "म"});
  CHECK(model.apply_token("कम") == "कम");
}
