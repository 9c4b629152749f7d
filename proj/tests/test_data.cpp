#include <sstream>

#include <doctest.h>

#include "subpair/data.hpp"
#include "subpair/errors.hpp"

using namespace subpair;

TEST_CASE("tokenizer splits whitespace and peels terminal punctuation") {
  const auto tokens = tokenize("Hello world. really?!", false);
  CHECK(tokens == std::vector<std::string>{"Hello", "world", ".", "really", "?", "!"});
  CHECK(tokenize("#brexit stays @user: intact.", false) ==
        std::vector<std::string>{"#brexit", "stays", "@user", ":", "intact", "."});
  CHECK(tokenize("MiXeD Case", true) == std::vector<std::string>{"mixed", "case"});
  // a lone punctuation token survives
  CHECK(tokenize(". .", false) == std::vector<std::string>{".", "."});
}

TEST_CASE("canonical three-line file loads three records") {
  std::istringstream in(
      "1\tthe cat sat\tthe cat rested\n"
      "0\tdogs bark loud\tthe sun rose\n"
      "1\ta b\ta b\n");
  LoadReport report;
  const auto records = parse_pairs(in, {}, "fixture", &report);
  REQUIRE(records.size() == 3);
  CHECK(report.loaded == 3);
  CHECK(records[0].label == 1);
  CHECK(records[1].label == 0);
  CHECK(records[0].sentence1 == std::vector<std::string>{"the", "cat", "sat"});
}

TEST_CASE("empty sentences are skipped and counted") {
  std::istringstream in(
      "1\t\tsomething here\n"
      "0\ta b\tc d\n");
  LoadReport report;
  const auto records = parse_pairs(in, {}, "fixture", &report);
  CHECK(records.size() == 1);
  CHECK(report.filtered == 1);
}

TEST_CASE("pit labels map (3, 2) to positive when strict mode is off") {
  std::istringstream in(
      "t1\tsome sentence one\tsome sentence two\t(3, 2)\n"
      "t1\tanother one here\tanother two here\t(1, 4)\n"
      "t1\tthird a b\tthird c d\t(4, 1)\n");
  LoadOptions options;
  options.format = PairFormat::kPit;
  const auto records = parse_pairs(in, options, "fixture");
  REQUIRE(records.size() == 3);
  CHECK(records[0].label == 1);  // 3 >= 3
  CHECK(records[1].label == 0);
  CHECK(records[2].label == 1);
}

TEST_CASE("strict pit mode drops debatable pairs") {
  std::istringstream in(
      "t1\tsome sentence one\tsome sentence two\t(3, 2)\n"
      "t1\tanother one here\tanother two here\t(5, 0)\n"
      "t1\tthird a b\tthird c d\t(1, 4)\n");
  LoadOptions options;
  options.format = PairFormat::kPit;
  options.strict_labels = true;
  LoadReport report;
  const auto records = parse_pairs(in, options, "fixture", &report);
  REQUIRE(records.size() == 2);
  CHECK(report.filtered == 1);
  CHECK(records[0].label == 1);
  CHECK(records[1].label == 0);
}

TEST_CASE("pit test-split numeric labels parse too") {
  std::istringstream in("t1\tone sentence a\ttwo sentence b\t4\n");
  LoadOptions options;
  options.format = PairFormat::kPit;
  const auto records = parse_pairs(in, options, "fixture");
  REQUIRE(records.size() == 1);
  CHECK(records[0].label == 1);
}

TEST_CASE("pit five-column layout skips the topic name") {
  std::istringstream in(
      "17\tWorld Cup\tthe match was great\tthe game was great\t(4, 1)\tt\tt\n");
  LoadOptions options;
  options.format = PairFormat::kPit;
  const auto records = parse_pairs(in, options, "fixture");
  REQUIRE(records.size() == 1);
  CHECK(records[0].label == 1);
  CHECK(records[0].sentence1 ==
        std::vector<std::string>{"the", "match", "was", "great"});
  CHECK(records[0].sentence2 ==
        std::vector<std::string>{"the", "game", "was", "great"});
}

TEST_CASE("url format: 4-of-6 positive, 3-of-6 debatable dropped") {
  std::istringstream in(
      "first sentence here\tsecond sentence here\t(4, 6)\turl1\n"
      "uncertain pair a\tuncertain pair b\t(3, 6)\turl2\n"
      "clear negative a\tclear negative b\t(1, 6)\turl3\n");
  LoadOptions options;
  options.format = PairFormat::kUrl;
  LoadReport report;
  const auto records = parse_pairs(in, options, "fixture", &report);
  REQUIRE(records.size() == 2);
  CHECK(report.filtered == 1);
  CHECK(records[0].label == 1);
  CHECK(records[1].label == 0);
}

TEST_CASE("over 10% malformed lines is a hard error") {
  std::istringstream in(
      "1\tgood pair a\tgood pair b\n"
      "garbage line without tabs\n"
      "2\tbad label\there\n");
  CHECK_THROWS_AS(parse_pairs(in, {}, "fixture"), DataError);
}

TEST_CASE("a few malformed lines are tolerated and counted") {
  std::ostringstream data;
  for (int i = 0; i < 30; ++i) data << "1\tpair number " << i << "\tpair text " << i << "\n";
  data << "malformed\n";
  std::istringstream in(data.str());
  LoadReport report;
  const auto records = parse_pairs(in, {}, "fixture", &report);
  CHECK(records.size() == 30);
  CHECK(report.malformed == 1);
}

TEST_CASE("unknown formats are a config error") {
  CHECK_THROWS_AS(pair_format_from_string("csv"), ConfigError);
  CHECK(to_string(pair_format_from_string("pit")) == "pit");
}

TEST_CASE("word types keep first-seen order; lm vocab applies the cutoff") {
  std::istringstream in(
      "1\tb a a\ta c\n"
      "0\tc d\td e\n");
  const auto records = parse_pairs(in, {}, "fixture");
  CHECK(word_types(records) ==
        std::vector<std::string>{"b", "a", "c", "d", "e"});
  const Vocab lm = build_lm_vocab(records, 2);
  CHECK(lm.contains("a"));   // 3 occurrences
  CHECK(lm.contains("c"));   // 2
  CHECK(lm.contains("d"));   // 2
  CHECK_FALSE(lm.contains("b"));
  CHECK_FALSE(lm.contains("e"));
  CHECK(lm.id("b") == Vocab::kUnkId);
}
