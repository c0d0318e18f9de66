#include <doctest.h>

#include <cmath>
#include <random>

#include "zsbench/errors.hpp"
#include "zsbench/features.hpp"

using namespace zsbench;

namespace {

std::vector<CleanedDocument> docs(std::vector<std::vector<std::string>> tokens) {
  std::vector<CleanedDocument> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back({i, std::move(tokens[i])});
  return out;
}

VectorizerParams min_df(std::size_t n) {
  VectorizerParams p;
  p.min_df = n;
  return p;
}

}  // namespace

TEST_CASE("idf of a two-document vocabulary") {
  const auto vec = TfidfVectorizer::fit(docs({{"spam", "win"}, {"ham"}}), min_df(1));
  CHECK(vec.dimension() == 3);
  const auto idx = vec.vocabulary().index_of("spam");
  REQUIRE(idx >= 0);
  CHECK(vec.vocabulary().document_frequencies()[idx] == 1);
  CHECK(vec.idf()[idx] == doctest::Approx(std::log(1.5) + 1.0).epsilon(1e-15));
  CHECK(vec.idf()[idx] == doctest::Approx(1.405).epsilon(1e-3));
}

TEST_CASE("min_df pruning everything is an error") {
  CHECK_THROWS_WITH_AS(TfidfVectorizer::fit(docs({{"spam", "win"}, {"ham"}}), min_df(2)), doctest::Contains("all terms pruned"),
                       TrainingError);
  CHECK_THROWS_AS(TfidfVectorizer::fit(docs({}), min_df(1)), TrainingError);
  CHECK_THROWS_AS(TfidfVectorizer::fit(docs({{}, {}}), min_df(1)), TrainingError);
}

TEST_CASE("a term in every document has idf exactly 1") {
  const auto vec = TfidfVectorizer::fit(docs({{"a", "b"}, {"a"}, {"a", "c"}}), min_df(1));
  CHECK(vec.idf()[vec.vocabulary().index_of("a")] == 1.0);
}

TEST_CASE("transform: repeated term, OOV and empty documents") {
  const auto vec = TfidfVectorizer::fit(docs({{"spam", "win"}, {"ham"}}), min_df(1));
  const auto v = vec.transform(CleanedDocument{0, {"spam", "spam"}});
  REQUIRE(v.nnz() == 1);
  CHECK(v.entries()[0].weight == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vec.transform(CleanedDocument{1, {"unknown", "words"}}).is_zero());
  CHECK(vec.transform(CleanedDocument{2, {}}).is_zero());
}

TEST_CASE("five-document table matches an independent implementation") {
  // Reference values from scikit-learn TfidfVectorizer(smooth_idf=True, norm="l2").
  const auto train = docs({{"spam", "win", "prize"},
                           {"ham", "see", "you"},
                           {"win", "win", "cash"},
                           {"see", "ham", "later"},
                           {"spam", "cash", "now", "win"}});
  const auto vec = TfidfVectorizer::fit(train, min_df(1));
  const std::vector<std::string> terms = {"cash", "ham", "later", "now", "prize", "see", "spam", "win", "you"};
  CHECK(vec.vocabulary().terms() == terms);
  const double idf[] = {1.6931471805599454, 1.6931471805599454, 2.09861228866811, 2.09861228866811,
                        2.09861228866811,   1.6931471805599454, 1.6931471805599454, 1.4054651081081644,
                        2.09861228866811};
  const double table[5][9] = {
      {0.0, 0.0, 0.0, 0.0, 0.6901592662889633, 0.0, 0.5568161504458247, 0.46220770413113277, 0.0},
      {0.0, 0.5317722537280788, 0.0, 0.0, 0.0, 0.5317722537280788, 0.0, 0.0, 0.6591180018251055},
      {0.5159714296904823, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.8566057924991867, 0.0},
      {0.0, 0.5317722537280788, 0.6591180018251055, 0.0, 0.0, 0.5317722537280788, 0.0, 0.0, 0.0},
      {0.4864843177105593, 0.0, 0.0, 0.6029847724484662, 0.0, 0.0, 0.4864843177105593, 0.40382592962643526,
       0.0},
  };
  for (std::size_t t = 0; t < 9; ++t) CHECK(std::abs(vec.idf()[t] - idf[t]) < 1e-9);
  for (std::size_t d = 0; d < 5; ++d) {
    const auto v = vec.transform(train[d]);
    for (std::uint32_t t = 0; t < 9; ++t) CHECK(std::abs(v.at(t) - table[d][t]) < 1e-9);
  }
}

TEST_CASE("vocabulary is fitted on training data only and never changes") {
  const auto vec = TfidfVectorizer::fit(docs({{"a", "b"}, {"b", "c"}}), min_df(1));
  const auto before = vec.to_json();
  (void)vec.transform(CleanedDocument{9, {"z", "a", "new"}});
  CHECK(vec.to_json() == before);
  CHECK(vec.vocabulary().index_of("z") == -1);
}

TEST_CASE("property: unit norm and sorted indices") {
  std::mt19937_64 rng(5);
  std::vector<std::vector<std::string>> raw;
  for (int d = 0; d < 200; ++d) {
    std::vector<std::string> toks;
    const int n = rng() % 12;
    for (int i = 0; i < n; ++i) toks.push_back("t" + std::to_string(rng() % 60));
    raw.push_back(std::move(toks));
  }
  const auto train = docs(raw);
  for (bool bigrams : {false, true}) {
    VectorizerParams p;
    p.max_ngram = bigrams ? 2 : 1;
    const auto vec = TfidfVectorizer::fit(train, p);
    for (const auto& d : train) {
      const auto v = vec.transform(d);
      for (std::size_t i = 1; i < v.nnz(); ++i) REQUIRE(v.entries()[i - 1].index < v.entries()[i].index);
      for (const auto& e : v.entries()) REQUIRE(e.weight >= 0.0);
      if (!v.is_zero()) REQUIRE(std::abs(v.norm() - 1.0) <= 1e-9);
    }
    for (std::size_t t = 0; t < vec.dimension(); ++t) REQUIRE(vec.vocabulary().document_frequencies()[t] >= 2);
  }
}

TEST_CASE("serialization round trip") {
  const auto train = docs({{"a", "b", "a"}, {"b", "c"}, {"c", "a"}});
  const auto vec = TfidfVectorizer::fit(train, min_df(1));
  const auto back = TfidfVectorizer::from_json(vec.to_json());
  for (const auto& d : train) CHECK(back.transform(d) == vec.transform(d));
}

TEST_CASE("feature vector validation") {
  CHECK_THROWS_AS(FeatureVector(3, {{1, 1.0}, {1, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(FeatureVector(3, {{3, 1.0}}), std::invalid_argument);
  const FeatureVector v(4, {{2, 3.0}, {0, 4.0}});
  CHECK(v.entries()[0].index == 0);
  CHECK(v.norm() == doctest::Approx(5.0));
  CHECK(v.dot(FeatureVector(4, {{2, 1.0}})) == doctest::Approx(3.0));
}
