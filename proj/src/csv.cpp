#include "indyforge/csv.hpp"

#include "indyforge/errors.hpp"

namespace indyforge::csv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool is_blank(const Record& r) { return r.fields.size() == 1 && r.fields.front().empty(); }

}  // namespace

std::vector<Record> parse(std::string_view content) {
  // A UTF-8 byte order mark is tolerated; spreadsheet exports add one.
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);

  std::vector<Record> records;
  std::size_t line = 1;
  std::size_t pos = 0;
  const std::size_t n = content.size();

  while (pos < n) {
    Record record;
    record.line = line;
    bool end_of_record = false;
    while (!end_of_record) {
      // Leading whitespace before an opening quote is allowed.
      std::size_t start = pos;
      while (start < n && (content[start] == ' ' || content[start] == '\t')) ++start;

      if (start < n && content[start] == '"') {
        std::string field;
        std::size_t i = start + 1;
        bool closed = false;
        while (i < n) {
          const char c = content[i];
          if (c == '"') {
            if (i + 1 < n && content[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              continue;
            }
            closed = true;
            ++i;
            break;
          }
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        if (!closed) {
          throw Error(Errc::CsvShape, "unterminated quoted field", {{"line", record.line}});
        }
        while (i < n && (content[i] == ' ' || content[i] == '\t')) ++i;
        if (i < n && content[i] != ',' && content[i] != '\n' && content[i] != '\r') {
          throw Error(Errc::CsvShape, "unexpected text after closing quote", {{"line", line}});
        }
        record.fields.push_back(std::move(field));
        pos = i;
      } else {
        std::size_t i = pos;
        while (i < n && content[i] != ',' && content[i] != '\n' && content[i] != '\r') ++i;
        record.fields.emplace_back(trim(content.substr(pos, i - pos)));
        pos = i;
      }

      if (pos >= n) {
        end_of_record = true;
      } else if (content[pos] == ',') {
        ++pos;
        if (pos >= n) record.fields.emplace_back();
      } else {
        if (content[pos] == '\r') ++pos;
        if (pos < n && content[pos] == '\n') ++pos;
        ++line;
        end_of_record = true;
      }
    }
    if (!is_blank(record)) records.push_back(std::move(record));
  }
  return records;
}

}  // namespace indyforge::csv
