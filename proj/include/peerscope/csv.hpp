#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace peerscope::csv {

// A parsed CSV file: header row, data rows, and any leading `#` comment
// lines (kept verbatim, without the `#`).
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;

    // Column position for `name`, or npos.
    std::size_t column(std::string_view name) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Splits one line into fields. Double-quoted fields may contain commas;
// "" inside quotes is a literal quote. Trailing \r is stripped.
std::vector<std::string> split_line(std::string_view line);

Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);

// Quotes the field if it contains a comma, quote or newline.
std::string escape(std::string_view field);
void write_row(std::ostream& out, std::span<const std::string> fields);
void write_row(std::ostream& out, std::initializer_list<std::string> fields);

}  // namespace peerscope::csv
