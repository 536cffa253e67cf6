#include <gtest/gtest.h>

#include "indyforge/csv.hpp"
#include "indyforge/errors.hpp"

namespace {

using indyforge::Errc;
using indyforge::Error;
namespace csv = indyforge::csv;

TEST(Csv, PlainRowsAndLineNumbers) {
  const auto r = csv::parse("a,b,c\n1,2,3\n\n4,5,6\n");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].fields, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(r[1].line, 2u);
  EXPECT_EQ(r[2].line, 4u);
  EXPECT_EQ(r[2].fields[2], "6");
}

TEST(Csv, CrlfBomAndTrimming) {
  const auto r = csv::parse("\xEF\xBB\xBFname, did \r\n  x ,\ty\t\r\n");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].fields, (std::vector<std::string>{"name", "did"}));
  EXPECT_EQ(r[1].fields, (std::vector<std::string>{"x", "y"}));
}

TEST(Csv, QuotedFields) {
  const auto r = csv::parse("\"a,b\",\"say \"\"hi\"\"\",\" keep \"\n\"multi\nline\",z\nlast,1");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].fields, (std::vector<std::string>{"a,b", "say \"hi\"", " keep "}));
  EXPECT_EQ(r[1].fields[0], "multi\nline");
  EXPECT_EQ(r[2].line, 4u);
  EXPECT_EQ(r[2].fields, (std::vector<std::string>{"last", "1"}));
}

TEST(Csv, EmptyFieldsSurvive) {
  const auto r = csv::parse(",,\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].fields.size(), 3u);
}

TEST(Csv, ShapeErrors) {
  for (const auto* bad : {"\"open,b\n", "\"closed\"junk,b\n"}) {
    try {
      csv::parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::CsvShape);
    }
  }
}

}  // namespace
