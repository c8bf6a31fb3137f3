#ifndef convmine_csv_hpp
#define convmine_csv_hpp

#include <istream>
#include <string>
#include <vector>

namespace convmine::csv {

struct Row {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line of the first character of the row
};

// RFC-4180-style reader: quoted fields may contain commas, doubled quotes,
// and newlines. Accepts \n and \r\n line endings. Blank lines are skipped.
std::vector<Row> read(std::istream& in);

std::string escape(const std::string& field);

} // namespace convmine::csv

#endif
