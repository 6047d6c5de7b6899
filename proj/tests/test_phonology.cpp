#include "phonology.hpp"

#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "support/tempdir.hpp"
#include "utf8.hpp"

using namespace cognate;
using phonology::PhoneticFeatureTable;

TEST_CASE("builtin table covers the devanagari inventory with F = 38") {
  const auto& table = PhoneticFeatureTable::builtin();
  CHECK(table.dimension() == 38);
  CHECK(table.size() >= 80);
  CHECK(table.find(0x0915) != nullptr);  // ka
  CHECK(table.find(0x093E) != nullptr);  // aa sign
  CHECK(table.find(U'a') == nullptr);
  // All components binary; self-cosine of every entry is 1.
  for (char32_t cp = 0x0900; cp < 0x0980; ++cp) {
    const auto* vec = table.find(cp);
    if (vec == nullptr) continue;
    double norm = 0.0;
    for (const double v : *vec) {
      CHECK((v == 0.0 || v == 1.0));
      norm += v * v;
    }
    CHECK(norm > 0.0);
    CHECK(phonology::cosine_similarity(*vec, *vec) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("table csv parsing rejects malformed input") {
  testutil::TempDir tmp;
  CHECK_THROWS_AS(PhoneticFeatureTable::load_csv(tmp.path() / "missing.csv"),
                  Error);
  const auto bad_header = tmp.write("bad.csv", "cp,f1\n0915,1\n");
  CHECK_THROWS_AS(PhoneticFeatureTable::load_csv(bad_header), Error);
  const auto bad_value =
      tmp.write("bad2.csv", "codepoint_hex,f1,f2\n0915,1,2\n");
  CHECK_THROWS_AS(PhoneticFeatureTable::load_csv(bad_value), Error);
  const auto short_row =
      tmp.write("bad3.csv", "codepoint_hex,f1,f2\n0915,1\n");
  CHECK_THROWS_AS(PhoneticFeatureTable::load_csv(short_row), Error);

  const auto good = tmp.write("ok.csv", "codepoint_hex,f1,f2\n0915,1,0\n");
  const auto table = PhoneticFeatureTable::load_csv(good);
  CHECK(table.dimension() == 2);
  CHECK(table.size() == 1);
}

TEST_CASE("word vector is the mean over covered characters") {
  const auto& table = PhoneticFeatureTable::builtin();

  // Single covered character: exactly its row.
  const auto ka = phonology::word_phonetic_vector(U"क", table);
  CHECK_FALSE(ka.oov);
  CHECK(ka.values == *table.find(0x0915));

  // Two characters: componentwise mean.
  const auto two = phonology::word_phonetic_vector(U"कआ", table);
  const auto& u = *table.find(0x0915);
  const auto& v = *table.find(0x0906);
  for (std::size_t i = 0; i < two.values.size(); ++i) {
    CHECK(two.values[i] == doctest::Approx((u[i] + v[i]) / 2.0));
  }

  // Uncovered characters are skipped, not zero-imputed.
  const auto skipped = phonology::word_phonetic_vector(U"क!", table);
  CHECK(skipped.values == *table.find(0x0915));

  // Fully uncovered word: zero vector + oov flag.
  const auto oov = phonology::word_phonetic_vector(U"abc", table);
  CHECK(oov.oov);
  for (const double x : oov.values) CHECK(x == 0.0);
}

TEST_CASE("phonetic features for identical words and contexts") {
  const auto& table = PhoneticFeatureTable::builtin();
  const std::vector<std::u32string> ctx = {U"कल", U"जल"};
  const auto fs =
      phonology::phonetic_features(U"कमल", U"कमल",
                                   ctx, ctx, table);
  CHECK(fs.score1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fs.score2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fs.p_s1 == doctest::Approx(0.5));
  CHECK(fs.p_s2 == doctest::Approx(0.5));
}

TEST_CASE("phonetic features with orthogonal word vectors") {
  // Two-character toy table with orthogonal rows.
  const auto table = PhoneticFeatureTable::parse_csv(
      "codepoint_hex,f1,f2\n0915,1,0\n0916,0,1\n", "<test>");
  const std::vector<std::u32string> ctx = {U"क"};
  const auto fs =
      phonology::phonetic_features(U"क", U"ख", ctx, ctx, table);
  CHECK(fs.score1 == 0.0);
  CHECK(fs.score2 == doctest::Approx(1.0));
  CHECK(fs.p_s1 == doctest::Approx(0.0));
  CHECK(fs.p_s2 == doctest::Approx(1.0));
}

TEST_CASE("phonetic features with constructed cosine one half") {
  // cos(u, v) = 1/2 with u = (1,0,0,0), v = (1,1,1,1)/norms: dot = 1,
  // |u| = 1, |v| = 2.
  const auto table = PhoneticFeatureTable::parse_csv(
      "codepoint_hex,f1,f2,f3,f4\n"
      "0915,1,0,0,0\n"
      "0916,1,1,1,1\n",
      "<test>");
  const std::vector<std::u32string> src_ctx = {U"क"};
  const std::vector<std::u32string> tgt_ctx = {U"ख"};
  const auto fs = phonology::phonetic_features(U"क", U"ख", src_ctx,
                                               tgt_ctx, table);
  CHECK(fs.score1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fs.score2 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fs.p_s1 == doctest::Approx(0.5));
  CHECK(fs.p_s2 == doctest::Approx(0.5));
}

TEST_CASE("phonetic features are symmetric under side swap") {
  const auto& table = PhoneticFeatureTable::builtin();
  const std::vector<std::u32string> ctx_a = {U"जल"};
  const std::vector<std::u32string> ctx_b = {U"तरल"};
  const auto ab = phonology::phonetic_features(U"कमल",
                                               U"कम", ctx_a, ctx_b,
                                               table);
  const auto ba = phonology::phonetic_features(
      U"कम", U"कमल", ctx_b, ctx_a, table);
  CHECK(ab.pv_s == ba.pv_t);
  CHECK(ab.pv_t == ba.pv_s);
  CHECK(ab.pcv_s == ba.pcv_t);
  CHECK(ab.score1 == doctest::Approx(ba.score1));
  CHECK(ab.score2 == doctest::Approx(ba.score2));
  CHECK(ab.p_s1 == doctest::Approx(ba.p_s1));
}

TEST_CASE("empty context yields zero vector and flag") {
  const auto& table = PhoneticFeatureTable::builtin();
  const auto fs = phonology::phonetic_features(U"क", U"क", {}, {},
                                               table);
  CHECK(fs.context_empty_s);
  CHECK(fs.context_empty_t);
  CHECK(fs.score2 == 0.0);
  CHECK(fs.degenerate);
  // score1 = 1, score2 = 0 -> all weight on the word similarity.
  CHECK(fs.p_s1 == doctest::Approx(1.0));
}
