#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace indyforge::csv {

struct Record {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader. LF and CRLF record separators are both accepted, quoted
/// fields may contain separators, quotes ("") and line breaks. Unquoted
/// fields are trimmed of surrounding spaces and tabs. Blank lines are skipped.
/// Throws Error(CsvShape) on an unterminated quote or text after a closing
/// quote.
std::vector<Record> parse(std::string_view content);

}  // namespace indyforge::csv
