#include "embeddings.hpp"

#include <doctest.h>

#include <cmath>
#include <optional>

#include "error.hpp"
#include "rng.hpp"
#include "support/tempdir.hpp"

using namespace cognate;
using embeddings::EmbeddingTable;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> random_unit(rng::Engine& eng, std::size_t dim) {
  std::vector<double> v(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& x : v) {
      x = rng::normal(eng);
      norm += x * x;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

}  // namespace

TEST_CASE("load parses the word2vec text format") {
  testutil::TempDir tmp;
  const auto path =
      tmp.write("ok.vec", "2 3\nhouse 1 0 0\nघर 0.5 -1 2e-1\n");
  const auto table = EmbeddingTable::load(path, "hi", "muse");
  CHECK(table.size() == 2);
  CHECK(table.dimension() == 3);
  CHECK(table.language() == "hi");
  CHECK(table.source_tag() == "muse");

  const auto hit = table.lookup("घर");
  CHECK_FALSE(hit.oov);
  CHECK(hit.values[0] == 0.5);
  CHECK(hit.values[1] == -1.0);
  CHECK(hit.values[2] == doctest::Approx(0.2));
}

TEST_CASE("load rejects malformed files with line numbers") {
  testutil::TempDir tmp;
  CHECK_THROWS_AS(EmbeddingTable::load(tmp.path() / "missing.vec", "hi"),
                  Error);

  const auto bad_header = tmp.write("h.vec", "banana\nx 1 2\n");
  CHECK_THROWS_WITH_AS(EmbeddingTable::load(bad_header, "hi"),
                       doctest::Contains(":1:"), Error);

  const auto short_row = tmp.write("s.vec", "1 3\nword 1 2\n");
  CHECK_THROWS_WITH_AS(EmbeddingTable::load(short_row, "hi"),
                       doctest::Contains(":2:"), Error);

  const auto bad_number = tmp.write("n.vec", "1 2\nword 1 soup\n");
  CHECK_THROWS_WITH_AS(EmbeddingTable::load(bad_number, "hi"),
                       doctest::Contains("non-numeric"), Error);
}

TEST_CASE("duplicate words keep the first occurrence") {
  testutil::TempDir tmp;
  const auto path = tmp.write("d.vec", "3 2\nw 1 1\nw 9 9\nv 2 2\n");
  const auto table = EmbeddingTable::load(path, "hi");
  CHECK(table.size() == 2);
  CHECK(table.duplicate_count() == 1);
  CHECK(table.lookup("w").values[0] == 1.0);
}

TEST_CASE("lookup misses yield the zero vector") {
  testutil::TempDir tmp;
  const auto path = tmp.write("l.vec", "1 2\nword 3 4\n");
  const auto table = EmbeddingTable::load(path, "hi");

  const auto hit = table.lookup("word");
  CHECK_FALSE(hit.oov);
  CHECK(hit.values[1] == 4.0);

  for (const char* missing : {"absent", ""}) {
    const auto miss = table.lookup(missing);
    CHECK(miss.oov);
    CHECK(miss.values.size() == 2);
    CHECK(miss.values[0] == 0.0);
    CHECK(miss.values[1] == 0.0);
  }
}

TEST_CASE("angular similarity anchors") {
  rng::Engine eng(99);
  for (const std::size_t dim : {std::size_t{2}, std::size_t{100}}) {
    for (int iter = 0; iter < 50; ++iter) {
      const auto u = random_unit(eng, dim);
      CHECK(embeddings::angular_similarity(u, u) ==
            doctest::Approx(1.0).epsilon(1e-9));

      std::vector<double> neg(u);
      for (auto& x : neg) x = -x;
      CHECK(embeddings::angular_similarity(u, neg) ==
            doctest::Approx(0.0).epsilon(1e-9));

      // An orthogonal partner via Gram-Schmidt.
      auto v = random_unit(eng, dim);
      double dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += u[i] * v[i];
      double norm = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        v[i] -= dot * u[i];
        norm += v[i] * v[i];
      }
      if (norm < 1e-12) continue;
      CHECK(embeddings::angular_similarity(u, v) ==
            doctest::Approx(0.5).epsilon(1e-9));
    }
  }
}

TEST_CASE("angular similarity is scale invariant and symmetric") {
  rng::Engine eng(100);
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t dim = 2 + rng::bounded(eng, 20);
    const auto u = random_unit(eng, dim);
    const auto v = random_unit(eng, dim);
    const double sim = embeddings::angular_similarity(u, v);
    CHECK(sim >= 0.0);
    CHECK(sim <= 1.0);
    CHECK(embeddings::angular_similarity(v, u) == sim);

    auto su = u;
    auto sv = v;
    const double a = 0.01 + rng::uniform01(eng) * 100.0;
    const double b = 0.01 + rng::uniform01(eng) * 100.0;
    for (auto& x : su) x *= a;
    for (auto& x : sv) x *= b;
    CHECK(embeddings::angular_similarity(su, sv) ==
          doctest::Approx(sim).epsilon(1e-9));
  }
}

TEST_CASE("angular similarity increases with cosine on unit vectors") {
  rng::Engine eng(101);
  for (int iter = 0; iter < 200; ++iter) {
    const auto u = random_unit(eng, 5);
    const auto v = random_unit(eng, 5);
    const auto w = random_unit(eng, 5);
    const auto cosine = [&u](const std::vector<double>& x) {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += u[i] * x[i];
      return dot;
    };
    const double cv = cosine(v);
    const double cw = cosine(w);
    const double av = embeddings::angular_similarity(u, v);
    const double aw = embeddings::angular_similarity(u, w);
    if (cv > cw) {
      CHECK(av >= aw);
    } else if (cw > cv) {
      CHECK(aw >= av);
    }
  }
}

TEST_CASE("angular similarity of a zero vector is 0 with a flag") {
  const std::vector<double> zero(3, 0.0);
  const std::vector<double> unit = {1.0, 0.0, 0.0};
  bool degenerate = false;
  CHECK(embeddings::angular_similarity(zero, unit, &degenerate) == 0.0);
  CHECK(degenerate);
  CHECK_THROWS_AS(
      (void)embeddings::angular_similarity(unit, std::vector<double>(2, 1.0)),
      Error);
}

namespace {

testutil::TempDir* fixture_tables(std::optional<EmbeddingTable>& src,
                                  std::optional<EmbeddingTable>& tgt) {
  static testutil::TempDir tmp;
  // 3-dim tables: "sun" pairs at 60 degrees, contexts at 90 degrees.
  const auto src_path = tmp.write(
      "src.vec",
      "3 3\nsun 1 0 0\nctx 0 1 0\nboth 2 0 0\n");
  const auto tgt_path = tmp.write(
      "tgt.vec",
      "3 3\nsun 0.5 0.8660254037844386 0\nctx 0 0 1\nboth 2 0 0\n");
  src = EmbeddingTable::load(src_path, "hi");
  tgt = EmbeddingTable::load(tgt_path, "te");
  return &tmp;
}

}  // namespace

TEST_CASE("crosslingual features") {
  std::optional<EmbeddingTable> src, tgt;
  fixture_tables(src, tgt);

  SUBCASE("both words oov") {
    const std::vector<std::string> ctx = {"ctx"};
    const auto fs = embeddings::crosslingual_features("missing", "missing",
                                                      ctx, ctx, *src, *tgt);
    CHECK(fs.oov_word_s);
    CHECK(fs.oov_word_t);
    CHECK(fs.score1 == 0.0);
    CHECK(fs.degenerate);
    CHECK(fs.s1 == 0.0);  // score2 = 0.5 > 0 carries all the weight
    CHECK(fs.s2 == 1.0);
  }

  SUBCASE("identical stored vector and contexts") {
    const std::vector<std::string> ctx = {"both"};
    const auto fs = embeddings::crosslingual_features("both", "both", ctx, ctx,
                                                      *src, *tgt);
    CHECK(fs.score1 == doctest::Approx(1.0));
    CHECK(fs.score2 == doctest::Approx(1.0));
    CHECK(fs.s1 == doctest::Approx(0.5));
    CHECK(fs.s2 == doctest::Approx(0.5));
  }

  SUBCASE("60 degree word pair with 90 degree contexts") {
    const std::vector<std::string> ctx = {"ctx"};
    const auto fs = embeddings::crosslingual_features("sun", "sun", ctx, ctx,
                                                      *src, *tgt);
    CHECK(fs.score1 == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(fs.score2 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fs.s1 ==
          doctest::Approx((2.0 / 3.0) / (2.0 / 3.0 + 0.5)).epsilon(1e-9));
  }

  SUBCASE("oov context tokens count as zero vectors by default") {
    const std::vector<std::string> ctx_with_miss = {"ctx", "missing"};
    const auto fs = embeddings::crosslingual_features(
        "sun", "sun", ctx_with_miss, ctx_with_miss, *src, *tgt);
    CHECK(fs.oov_context_s == 1);
    CHECK(fs.oov_context_t == 1);
    // Mean halves the magnitude but not the direction: score2 unchanged.
    CHECK(fs.score2 == doctest::Approx(0.5).epsilon(1e-9));

    const auto skipped = embeddings::crosslingual_features(
        "sun", "sun", ctx_with_miss, ctx_with_miss, *src, *tgt,
        /*skip_oov_context=*/true);
    CHECK(skipped.score2 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(skipped.cv_s[1] == 1.0);  // full magnitude when oov are skipped
  }
}
