#include <doctest.h>

#include <sstream>
#include <string>

#include "commentrel/corpus.hpp"
#include "commentrel/csv.hpp"
#include "commentrel/error.hpp"

using namespace commentrel;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Format;
}

}  // namespace

TEST_CASE("csv parses quoting, embedded newlines and CRLF") {
  const auto t = csv::parse("a,b\r\n\"x, y\",\"say \"\"hi\"\"\nthere\"\r\n3,4\n");
  REQUIRE(t.header == csv::Row{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "x, y");
  CHECK(t.rows[0][1] == "say \"hi\"\nthere");
  CHECK(t.rows[1] == csv::Row{"3", "4"});
}

TEST_CASE("csv rejects width mismatch, bad quotes and invalid utf-8") {
  CHECK(kind_of([] { csv::parse("a,b\n1\n"); }) == ErrorKind::MalformedCsv);
  CHECK(kind_of([] { csv::parse("a\n\"open\n"); }) == ErrorKind::MalformedCsv);
  CHECK(kind_of([] { csv::parse("a\n\xff\xfe\n"); }) == ErrorKind::MalformedCsv);
  CHECK(kind_of([] { csv::parse(""); }) == ErrorKind::MalformedCsv);
}

TEST_CASE("utf-8 validation") {
  CHECK(csv::is_valid_utf8("plain"));
  CHECK(csv::is_valid_utf8("caf\xc3\xa9 \xe2\x82\xac \xf0\x9f\x98\x80"));
  CHECK_FALSE(csv::is_valid_utf8("\xc3"));          // truncated
  CHECK_FALSE(csv::is_valid_utf8("\xe2\x82"));      // truncated
  CHECK_FALSE(csv::is_valid_utf8("\xc0\xaf"));      // overlong
  CHECK_FALSE(csv::is_valid_utf8("\xed\xa0\x80"));  // surrogate
}

TEST_CASE("escape_field quotes only when needed") {
  CHECK(csv::escape_field("abc") == "abc");
  CHECK(csv::escape_field("a,b") == "\"a,b\"");
  CHECK(csv::escape_field("q\"") == "\"q\"\"\"");
  CHECK(csv::escape_field("l\nm") == "\"l\nm\"");
}

TEST_CASE("label surface forms") {
  CHECK(parse_label("Useful") == Label::Useful);
  CHECK(parse_label("  not   USEFUL ") == Label::NotUseful);
  CHECK(parse_label("not_useful") == Label::NotUseful);
  CHECK(parse_label("1") == Label::Useful);
  CHECK(parse_label("0") == Label::NotUseful);
  CHECK_FALSE(parse_label("maybe").has_value());
  CHECK_FALSE(parse_label("").has_value());
  CHECK(label_name(Label::Useful) == "Useful");
  CHECK(label_name(Label::NotUseful) == "Not Useful");
}

TEST_CASE("load: labeled corpus with code") {
  const auto c = parse_corpus_csv(
      "comment,code,label\n/* frees buffer */,free(p);,Useful\nx,x++;,Not Useful\n",
      {}, true);
  REQUIRE(c.size() == 2);
  CHECK(c.labeled());
  CHECK(c.has_code());
  CHECK(c.examples()[0].comment_text == "/* frees buffer */");
  CHECK(c.examples()[1].code_text == "x++;");
  CHECK(c.labels() == std::vector<Label>{Label::Useful, Label::NotUseful});
  CHECK(c.examples()[1].id == 1);
}

TEST_CASE("load: BOM, blank lines and custom columns") {
  const auto c = parse_corpus_csv("\xef\xbb\xbftext,y\n\nhello,1\n\nbye,0\n",
                                  ColumnMapping{"text", "src", "y"}, true);
  CHECK(c.size() == 2);
  CHECK_FALSE(c.has_code());
  CHECK(c.examples()[0].code_text.empty());
}

TEST_CASE("load errors") {
  SUBCASE("missing label column") {
    CHECK(kind_of([] { parse_corpus_csv("comment,code\na,b\n", {}, true); }) ==
          ErrorKind::MissingColumn);
  }
  SUBCASE("missing comment column") {
    CHECK(kind_of([] { parse_corpus_csv("code,label\na,1\n", {}, true); }) ==
          ErrorKind::MissingColumn);
  }
  SUBCASE("header only") {
    CHECK(kind_of([] { parse_corpus_csv("comment,label\n", {}, true); }) ==
          ErrorKind::EmptyCorpus);
  }
  SUBCASE("unparsable label names the row") {
    try {
      parse_corpus_csv("comment,label\nok,1\nbad,maybe\n", {}, true);
      FAIL("expected error");
    } catch (const UnparsableLabelError& e) {
      CHECK(e.row() == 2);
      CHECK(std::string(e.what()).find("maybe") != std::string::npos);
    }
  }
  SUBCASE("empty comment") {
    CHECK(kind_of([] { parse_corpus_csv("comment,label\n  ,1\n", {}, true); }) ==
          ErrorKind::MalformedCsv);
  }
  SUBCASE("missing file") {
    CHECK(kind_of([] { load_csv("/nonexistent/x.csv", {}, true); }) == ErrorKind::Io);
  }
}

TEST_CASE("unlabeled corpus refuses labels") {
  const auto c = parse_corpus_csv("comment\na\nb\nc\n", {}, false);
  CHECK(c.size() == 3);
  CHECK_FALSE(c.labeled());
  CHECK(kind_of([&] { c.labels(); }) == ErrorKind::UnlabeledCorpus);
  CHECK(kind_of([&] { corpus_stats(c); }) == ErrorKind::UnlabeledCorpus);
}

TEST_CASE("corpus invariants") {
  CHECK(kind_of([] { Corpus({}, true); }) == ErrorKind::EmptyCorpus);
  LabeledExample ex{0, "c", "", std::nullopt};
  CHECK(kind_of([&] { Corpus({ex}, true); }) == ErrorKind::UnlabeledCorpus);
}

TEST_CASE("write then load round-trips count, order and labels") {
  const auto c = parse_corpus_csv(
      "comment,code,label\n\"a, quoted\",\"x\ny\",1\n\"plain \"\"q\"\"\",,0\nthird,z,useful\n",
      {}, true);
  std::ostringstream out;
  write_corpus_csv(out, c, {});
  const auto back = parse_corpus_csv(out.str(), {}, true);
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(back.examples()[i].comment_text == c.examples()[i].comment_text);
    CHECK(back.examples()[i].code_text == c.examples()[i].code_text);
    CHECK(back.examples()[i].label == c.examples()[i].label);
  }
}

TEST_CASE("views") {
  const Corpus c({{0, "frees buffer", "free(p);", Label::Useful},
                  {1, "loop", "i++;", Label::NotUseful}},
                 true);
  const auto comments = extract_view(c, ViewMode::CommentsOnly);
  const auto both = extract_view(c, ViewMode::CodeAndComments);
  CHECK(comments.documents == std::vector<std::string>{"frees buffer", "loop"});
  CHECK(both.documents[0] == "frees buffer\nfree(p);");
  CHECK(comments.documents.size() == both.documents.size());
  CHECK(extract_view(c, ViewMode::CodeAndComments).documents == both.documents);
  CHECK(parse_view_mode("code+comments") == ViewMode::CodeAndComments);
  CHECK(parse_view_mode("comments") == ViewMode::CommentsOnly);
  CHECK_FALSE(parse_view_mode("code").has_value());
}

TEST_CASE("stats") {
  const Corpus c({{0, "aa bb", "", Label::Useful},
                  {1, "aa", "", Label::Useful},
                  {2, "cc dd ee", "", Label::Useful},
                  {3, "ff", "", Label::NotUseful}},
                 true);
  const auto s = corpus_stats(c);
  CHECK(s.total == 4);
  CHECK(s.useful == 3);
  CHECK(s.not_useful == 1);
  CHECK(s.mean_comment_tokens == doctest::Approx(7.0 / 4.0));
  const Corpus single({{0, "only", "", Label::Useful}}, true);
  CHECK(corpus_stats(single).total == 1);
}

TEST_CASE("subset keeps ids") {
  const Corpus c({{0, "a", "", Label::Useful},
                  {1, "b", "", Label::NotUseful},
                  {2, "c", "", Label::Useful}},
                 true);
  const auto s = c.subset({2, 0});
  REQUIRE(s.size() == 2);
  CHECK(s.examples()[0].id == 2);
  CHECK(s.examples()[1].comment_text == "a");
}

TEST_CASE("prediction contract") {
  std::ostringstream out;
  write_predictions(out, {{0, Label::Useful}, {1, Label::NotUseful}});
  CHECK(out.str() == "id,predicted_label\n0,Useful\n1,Not Useful\n");
  const auto back = parse_predictions(out.str());
  REQUIRE(back.size() == 2);
  CHECK(back[1].label == Label::NotUseful);

  CHECK(kind_of([] { parse_predictions("id,label\n0,Useful\n"); }) ==
        ErrorKind::SchemaMismatch);
  CHECK(kind_of([] { parse_predictions("id,predicted_label\n0,useful\n"); }) ==
        ErrorKind::SchemaMismatch);
  CHECK(kind_of([] { parse_predictions("id,predicted_label\nx,Useful\n"); }) ==
        ErrorKind::SchemaMismatch);
}
