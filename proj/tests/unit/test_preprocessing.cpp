#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "gen.hpp"
#include "lemur/preprocessing.hpp"

using namespace lemur;

TEST_CASE("header pattern identity") {
  const auto p = compile_header_pattern("<Content>");
  const auto m = p.match("hello world");
  REQUIRE(m);
  CHECK(m->header_fields.empty());
  CHECK(m->content == "hello world");
}

TEST_CASE("header pattern captures hdfs fields") {
  const auto p = compile_header_pattern("<Date> <Time> <Pid> <Level> <Component> : <Content>");
  const auto m = p.match(
      "081109 203615 148 INFO dfs.DataNode$PacketResponder : PacketResponder 1 for block "
      "blk_38865049064139660 terminating");
  REQUIRE(m);
  CHECK(m->header_fields.size() == 5);
  CHECK(m->header_fields.at("Date") == "081109");
  CHECK(m->header_fields.at("Time") == "203615");
  CHECK(m->header_fields.at("Pid") == "148");
  CHECK(m->header_fields.at("Level") == "INFO");
  CHECK(m->header_fields.at("Component") == "dfs.DataNode$PacketResponder");
  CHECK(m->content == "PacketResponder 1 for block blk_38865049064139660 terminating");
}

TEST_CASE("header pattern rejects non conforming line") {
  CHECK_FALSE(compile_header_pattern("<Level>: <Content>").match("no colon here"));
}

TEST_CASE("header pattern literal metacharacters") {
  const auto p = compile_header_pattern("[<Time>] [<Level>] <Content>");
  const auto m = p.match("[Sun Dec 04 04:47:44 2005] [notice] workerEnv.init() ok");
  REQUIRE(m);
  CHECK(m->header_fields.at("Time") == "Sun Dec 04 04:47:44 2005");
  CHECK(m->header_fields.at("Level") == "notice");
  CHECK(m->content == "workerEnv.init() ok");
}

TEST_CASE("header pattern errors") {
  CHECK_THROWS_AS(compile_header_pattern("<Date> <Time>"), ConfigError);
  CHECK_THROWS_AS(compile_header_pattern("<Date <Content>"), ConfigError);
  CHECK_THROWS_AS(compile_header_pattern("Date> <Content>"), ConfigError);
  CHECK_THROWS_AS(compile_header_pattern("<Content"), ConfigError);
  CHECK_THROWS_AS(compile_header_pattern("<A> <A> <Content>"), ConfigError);
}

TEST_CASE("mask variables") {
  const auto rules = default_mask_rules();
  CHECK(mask_variables("connect 10.0.0.1:9000 ok", rules) == "connect <*> ok");
  CHECK(mask_variables("no variables here", rules) == "no variables here");
  CHECK(mask_variables("fetch http://a/b then http://c", rules) == "fetch <*> then <*>");
  CHECK(mask_variables("version 1.2.3.4.5 stays", rules) == "version 1.2.3.4.5 stays");
}

TEST_CASE("mask rules apply in declared order") {
  std::vector<MaskRule> rules = {MaskRule::make("ab", "ab"), MaskRule::make("b", "b")};
  CHECK(mask_variables("abb", rules) == "<*><*>");
  std::vector<MaskRule> reversed = {MaskRule::make("b", "b"), MaskRule::make("ab", "ab")};
  CHECK(mask_variables("abb", reversed) == "a<*><*>");
}

TEST_CASE("invalid mask rule fails at load time") {
  CHECK_THROWS_AS(MaskRule::make("bad", "(unclosed"), ConfigError);
}

TEST_CASE("masking is idempotent") {
  const auto rules = default_mask_rules();
  testing::Gen g(11);
  const std::vector<std::string> parts = {"10.0.0.1", "192.168.1.20:8080", "http://x.y/z?q=1",
                                          "word", "1.2.3", "ftp://h", "<*>", ":", "999.1.1.1"};
  for (int i = 0; i < 500; ++i) {
    std::string s;
    for (auto n = g.between(0, 8); n > 0; --n) s += parts[g.below(parts.size())] + (g.coin() ? " " : "");
    const auto once = mask_variables(s, rules);
    CHECK(mask_variables(once, rules) == once);
  }
}

TEST_CASE("strip quotes") {
  CHECK(strip_quotes("\"abc\"") == "abc");
  CHECK(strip_quotes("'abc'") == "abc");
  CHECK(strip_quotes("abc") == "abc");
  CHECK(strip_quotes("\"abc'") == "\"abc'");
  CHECK(strip_quotes("\"") == "\"");
}

TEST_CASE("tokenize") {
  CHECK(tokenize("Waited 26 seconds for Thread-20 to be killed", "") ==
        Tokens{"Waited", "26", "seconds", "for", "Thread-20", "to", "be", "killed"});
  CHECK(tokenize("a=b c", "=") == Tokens{"a", "b", "c"});
  CHECK(tokenize("", ":").empty());
  CHECK(tokenize("x=<*>:y", "=:*<>") == Tokens{"x", "<*>", "y"});
  CHECK(tokenize("  a\t\tb  ", "") == Tokens{"a", "b"});
}

TEST_CASE("tokenization is a projection") {
  testing::Gen g(5);
  const std::string alphabet = "ab=:,<*> \t";
  for (int i = 0; i < 500; ++i) {
    std::string s;
    for (auto n = g.between(0, 30); n > 0; --n) s += alphabet[g.below(alphabet.size())];
    const auto tokens = tokenize(s, "=:,");
    std::string joined;
    for (const auto& t : tokens) joined += t + " ";
    CHECK(tokenize(joined, "=:,") == tokens);
    for (const auto& t : tokens) CHECK_FALSE(t.empty());
  }
}

TEST_CASE("preprocessor keeps non matching lines and is deterministic") {
  Preprocessor pre(compile_header_pattern("<Level>: <Content>"), default_mask_rules(), "");
  const std::vector<std::string> lines = {"INFO: \"connect 10.0.0.1 ok\"", "no colon here"};
  const auto records = pre.process_all(lines);
  REQUIRE(records.size() == 2);
  CHECK(records[0].line_id == 1);
  CHECK(records[0].header_fields.at("Level") == "INFO");
  CHECK(records[0].message == "\"connect 10.0.0.1 ok\"");
  CHECK(records[0].content == "connect <*> ok");
  CHECK(records[0].tokens == Tokens{"connect", "<*>", "ok"});
  CHECK(records[1].content == "no colon here");
  CHECK(records[1].header_fields.empty());
  const auto again = pre.process_all(lines);
  CHECK(again[0].tokens == records[0].tokens);
  CHECK(again[1].content == records[1].content);
}

TEST_CASE("read lines replaces invalid utf8 and drops carriage returns") {
  const auto path = std::filesystem::temp_directory_path() / "lemur_read_lines.log";
  {
    std::ofstream out(path, std::ios::binary);
    out << "ok line\r\n" << "bad \xff byte\n" << "last";
  }
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "ok line");
  CHECK(lines[1] == "bad \xEF\xBF\xBD byte");
  CHECK(lines[2] == "last");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_lines(path), InputError);
}
