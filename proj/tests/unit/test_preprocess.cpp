#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "test_support.hpp"
#include "zsbench/porter_stemmer.hpp"
#include "zsbench/preprocess.hpp"

using namespace zsbench;

using Tokens = std::vector<std::string>;

TEST_CASE("tweet example with the full removal policy") {
  CleaningPolicy p;
  p.apply_stemming = false;
  const std::string cleaned = clean_text("Woolies stopped all orders #coronavirus @user https://t.co/abc", p);
  CHECK(cleaned == "woolies stopped all orders");
  CHECK(normalize_tokens(cleaned, p) == Tokens{"woolies", "stopped", "orders"});
}

TEST_CASE("html, digits and punctuation in the fixed order") {
  CleaningPolicy p = CleaningPolicy::identity();
  p.remove_html_tags = true;
  p.remove_digits = true;
  CHECK(clean_text("<b>Sale 50%</b>", p) == "sale %");
  p.remove_punctuation = true;
  CHECK(clean_text("<b>Sale 50%</b>", p) == "sale");
}

TEST_CASE("degenerate input") {
  CHECK(clean_text("", CleaningPolicy{}) == "");
  CHECK(clean_text("   \t ", CleaningPolicy{}) == "");
  CHECK(clean_text("https://example.com/x", CleaningPolicy{}) == "");
}

TEST_CASE("url forms") {
  CleaningPolicy p = CleaningPolicy::identity();
  p.remove_urls = true;
  CHECK(clean_text("see http://a.b/c?d=1 now", p) == "see now");
  CHECK(clean_text("see www.example.org now", p) == "see now");
  CHECK(clean_text("link t.co/xyz end", p) == "link end");
  CHECK(clean_text("HTTPS://X.Y end", p) == "end");
  // not at a word start: left alone
  CHECK(clean_text("abchttp://x", p) == "abchttp://x");
}

TEST_CASE("mentions and hashtags are \\w+ runs") {
  CleaningPolicy p = CleaningPolicy::identity();
  p.remove_mentions = true;
  p.remove_hashtags = true;
  CHECK(clean_text("@user_1 hi #Tag2day!", p) == "hi !");
  CHECK(clean_text("lone @ and # stay", p) == "lone @ and # stay");
}

TEST_CASE("tweet cleaning policy keeps punctuation and skips stemming") {
  const auto p = CleaningPolicy::tweet_cleaning();
  CHECK(p.remove_urls);
  CHECK(p.remove_html_tags);
  CHECK(p.remove_digits);
  CHECK(p.remove_hashtags);
  CHECK(p.remove_mentions);
  CHECK(p.remove_stopwords);
  CHECK_FALSE(p.remove_punctuation);
  CHECK_FALSE(p.apply_stemming);
  CHECK(clean_for_display("@bob The flight was LATE again!!! #fail 2 hrs", p) == "flight late again!!! hrs");
}

TEST_CASE("normalize_tokens examples") {
  CleaningPolicy stem = CleaningPolicy::identity();
  stem.apply_stemming = true;
  CHECK(normalize_tokens("running quickly", stem) == Tokens{"run", "quickli"});

  CleaningPolicy stop = CleaningPolicy::identity();
  stop.remove_stopwords = true;
  CHECK(normalize_tokens("the a an", stop).empty());

  CHECK(normalize_tokens("spam spam ham", CleaningPolicy::identity()) == Tokens{"spam", "spam", "ham"});
}

TEST_CASE("policy-off identity is lowercase whitespace tokenization") {
  const auto id = CleaningPolicy::identity();
  CHECK(normalize_tokens("Hello, World!  #Tag\t@u http://x 42", id) ==
        Tokens{"hello,", "world!", "#tag", "@u", "http://x", "42"});
}

TEST_CASE("bundled stop-word list") {
  const auto& sw = default_stopwords();
  CHECK(sw.size() >= 170);
  CHECK(sw.size() <= 200);
  CHECK(sw.contains("the"));
  CHECK(sw.contains("all"));
  CHECK(sw.contains("don't"));
  CHECK_FALSE(sw.contains("spam"));
  const auto custom = StopWords::parse("# comment\nfoo\n\n  bar  \n");
  CHECK(custom.size() == 2);
  CHECK(custom.contains("bar"));
}

TEST_CASE("preprocess_corpus keeps order and counts empty documents") {
  LabeledCorpus corpus{LabelSchema("s", {"a", "b"}), {{10, "Great product!", 0}, {11, "https://t.co/abc", 1}}};
  const auto out = preprocess_corpus(corpus, CleaningPolicy{});
  REQUIRE(out.documents.size() == 2);
  CHECK(out.documents[0].id == 10);
  CHECK(out.documents[0].tokens == Tokens{"great", "product"});
  CHECK(out.documents[1].id == 11);
  CHECK(out.documents[1].tokens.empty());
  CHECK(out.empty_documents == 1);
}

TEST_CASE("policy json round trip rejects unknown flags") {
  CleaningPolicy p = CleaningPolicy::tweet_cleaning();
  nlohmann::json j = p;
  CHECK(j.get<CleaningPolicy>() == p);
  CHECK_THROWS(nlohmann::json({{"remove_emoji", true}}).get<CleaningPolicy>());
}

TEST_CASE("property: idempotence and monotone length on random strings") {
  const std::string alphabet = "aZ09 #@<>/:.!?,_-\t\nhtps w";
  const char* fragments[] = {"http://", "https://t.co/", "www.", "<b>", "</i>", "<!-- x -->", "@user",
                             "#tag",    "123",          "t.co/", "&amp;", "don't", "<a href='x'>"};
  std::mt19937_64 rng(99);
  std::vector<CleaningPolicy> policies = {CleaningPolicy{}, CleaningPolicy::identity(),
                                          CleaningPolicy::tweet_cleaning()};
  for (int mask = 0; mask < 64; mask += 7) {
    CleaningPolicy p = CleaningPolicy::identity();
    p.remove_urls = mask & 1;
    p.remove_html_tags = mask & 2;
    p.remove_digits = mask & 4;
    p.remove_hashtags = mask & 8;
    p.remove_mentions = mask & 16;
    p.remove_punctuation = mask & 32;
    policies.push_back(p);
  }
  for (int i = 0; i < 3000; ++i) {
    std::string t;
    const int parts = 1 + rng() % 12;
    for (int k = 0; k < parts; ++k) {
      if (rng() % 3 == 0) {
        t += fragments[rng() % std::size(fragments)];
      } else {
        const int len = rng() % 6;
        for (int c = 0; c < len; ++c) t += alphabet[rng() % alphabet.size()];
      }
    }
    for (const auto& p : policies) {
      const std::string once = clean_text(t, p);
      REQUIRE(clean_text(once, p) == once);
      REQUIRE(once.size() <= t.size());
    }
  }
}

TEST_CASE("Porter stemmer matches the reference sample") {
  std::ifstream in(testsupport::data_dir() / "porter_sample.txt");
  REQUIRE(in);
  std::string line;
  std::size_t checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string word, stem;
    ss >> word >> stem;
    INFO(word);
    CHECK(porter_stem(word) == stem);
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("Porter stemmer classic pairs") {
  CHECK(porter_stem("caresses") == "caress");
  CHECK(porter_stem("ponies") == "poni");
  CHECK(porter_stem("relational") == "relat");
  CHECK(porter_stem("generalizations") == "gener");
  CHECK(porter_stem("hopping") == "hop");
  CHECK(porter_stem("don't") == "don't");
  CHECK(porter_stem("") == "");
}
