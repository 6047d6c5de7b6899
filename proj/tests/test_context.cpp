#include "context.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "error.hpp"
#include "support/tempdir.hpp"

using namespace cognate;
using context::ContextDictionary;

TEST_CASE("build tokenizes gloss plus examples and filters stopwords") {
  testutil::TempDir tmp;
  // jal TAB "paanee ek taral" TAB "jal jeevan hai"
  const auto wordnet = tmp.write(
      "wn.tsv",
      "जल\tपानी एक "
      "तरल\tजल जीवन "
      "है\n");
  const auto stop = tmp.write("stop.txt", "एक\nहै\n");
  const auto dict = ContextDictionary::build(wordnet, &stop, "hi");

  const auto* tokens = dict.context_of("जल");
  REQUIRE(tokens != nullptr);
  const std::vector<std::string> expected = {
      "पानी", "तरल", "जल",
      "जीवन"};
  CHECK(*tokens == expected);
  CHECK(dict.stopwords_applied());
}

TEST_CASE("multiple records for one word merge in order") {
  testutil::TempDir tmp;
  const auto wordnet =
      tmp.write("wn.tsv", "w\tone two\nw\tthree\nother\tfour\n");
  const auto dict = ContextDictionary::build(wordnet, nullptr, "hi");
  CHECK(dict.size() == 2);
  const auto* tokens = dict.context_of("w");
  REQUIRE(tokens != nullptr);
  CHECK(*tokens == std::vector<std::string>{"one", "two", "three"});
}

TEST_CASE("empty stopword file removes nothing") {
  testutil::TempDir tmp;
  const auto wordnet = tmp.write("wn.tsv", "w\tone two\n");
  const auto stop = tmp.write("stop.txt", "");
  const auto dict = ContextDictionary::build(wordnet, &stop, "hi");
  CHECK(dict.context_of("w")->size() == 2);
}

TEST_CASE("malformed records are skipped and counted") {
  testutil::TempDir tmp;
  const auto wordnet = tmp.write("wn.tsv", "justaword\nw\tok gloss\n");
  const auto dict = ContextDictionary::build(wordnet, nullptr, "hi");
  CHECK(dict.size() == 1);
  CHECK(dict.skipped_records() == 1);
  CHECK_THROWS_AS(
      ContextDictionary::build(tmp.path() / "missing.tsv", nullptr, "hi"),
      Error);
}

TEST_CASE("context_of distinguishes missing from emptied entries") {
  testutil::TempDir tmp;
  const auto wordnet = tmp.write("wn.tsv", "w\tstopme\n");
  const auto stop = tmp.write("stop.txt", "stopme\n");
  const auto dict = ContextDictionary::build(wordnet, &stop, "hi");

  const auto* emptied = dict.context_of("w");
  REQUIRE(emptied != nullptr);  // present but empty
  CHECK(emptied->empty());
  CHECK(dict.context_of("absent") == nullptr);  // the miss case
}

TEST_CASE("tokens are transliterated and stripped of punctuation") {
  testutil::TempDir tmp;
  // Bengali word with Bengali gloss; danda and pipes must disappear.
  const auto wordnet = tmp.write(
      "wn.tsv", "কা\tকা কা। | (abc)\n");
  const auto dict = ContextDictionary::build(wordnet, nullptr, "bn");
  const auto* tokens = dict.context_of("का");  // key transliterated
  REQUIRE(tokens != nullptr);
  CHECK(*tokens == std::vector<std::string>{"का", "का",
                                            "abc"});
}

TEST_CASE("stopword filter is complete") {
  testutil::TempDir tmp;
  std::ostringstream wn;
  std::ostringstream stop;
  for (int i = 0; i < 50; ++i) {
    wn << "w" << i << "\ttok" << i << " stop" << (i % 7) << " tok" << (i + 1)
       << "\n";
  }
  for (int i = 0; i < 7; ++i) stop << "stop" << i << "\n";
  const auto wordnet = tmp.write("wn.tsv", wn.str());
  const auto stopfile = tmp.write("stop.txt", stop.str());
  const auto dict = ContextDictionary::build(wordnet, &stopfile, "hi");
  for (const auto& entry : dict.entries()) {
    for (const auto& token : entry.tokens) {
      CHECK(token.find("stop") == std::string::npos);
    }
  }
}

TEST_CASE("identical inputs build identical dictionaries") {
  testutil::TempDir tmp;
  const auto wordnet =
      tmp.write("wn.tsv", "b\tz y x\na\tw v\nb\tu\na\tt s r\n");
  const auto d1 = ContextDictionary::build(wordnet, nullptr, "hi");
  const auto d2 = ContextDictionary::build(wordnet, nullptr, "hi");
  const auto p1 = tmp.path() / "d1.tsv";
  const auto p2 = tmp.path() / "d2.tsv";
  d1.save(p1);
  d2.save(p2);
  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  CHECK(slurp(p1) == slurp(p2));
  CHECK(!slurp(p1).empty());

  // Saved dictionaries reload to the same entries (gloss-only records).
  const auto reloaded = ContextDictionary::build(p1, nullptr, "hi");
  CHECK(reloaded.size() == d1.size());
  CHECK(*reloaded.context_of("a") == *d1.context_of("a"));
  CHECK(*reloaded.context_of("b") == *d1.context_of("b"));
}

TEST_CASE("dataset loading transliterates, labels, and skips bad rows") {
  testutil::TempDir tmp;
  const auto data = tmp.write(
      "pairs.tsv",
      "hi-bn\tकमल\tকমল\t1\n"
      "hi-bn\tx\ty\t0\n"
      "short\trow\n"
      "hi-bn\t\tক\t1\n");
  const auto loaded = context::load_dataset(data);
  CHECK(loaded.pairs.size() == 2);
  CHECK(loaded.positives == 1);
  CHECK(loaded.negatives == 1);
  CHECK(loaded.skipped_rows == 2);
  CHECK(loaded.pairs[0].word_t == "कमल");  // transliterated
  CHECK(loaded.pairs[0].pair_id == "L1");

  const auto bad_label = tmp.write("bad.tsv", "hi-bn\ta\tb\t2\n");
  CHECK_THROWS_AS(context::load_dataset(bad_label), Error);

  const auto filtered = context::load_dataset(data, std::string("hi-xx"));
  CHECK(filtered.pairs.empty());
}
