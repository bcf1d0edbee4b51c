#ifndef COMMENTREL_CSV_HPP
#define COMMENTREL_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace commentrel::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;
};

// RFC-4180 reader: mandatory header, quoted fields may span lines, "" escapes
// a quote, CRLF or LF line ends. Every row must match the header width and
// the input must be valid UTF-8. Violations throw Error(MalformedCsv).
Table parse(std::string_view text);
Table read_file(const std::string& path);

bool is_valid_utf8(std::string_view text);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);
void write_row(std::ostream& out, const Row& row);

}  // namespace commentrel::csv

#endif  // COMMENTREL_CSV_HPP
