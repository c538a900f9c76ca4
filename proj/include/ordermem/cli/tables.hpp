#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ordermem/signs.hpp"

namespace ordermem::cli {

/// Streams rows as delimiter-separated text with a header, or as a JSON
/// array of objects keyed by column name.
class RowWriter {
public:
    RowWriter(std::ostream& out, std::vector<std::string> columns, bool json);
    RowWriter(const RowWriter&) = delete;
    RowWriter& operator=(const RowWriter&) = delete;
    ~RowWriter();

    RowWriter& text(std::string_view value);
    RowWriter& integer(std::int64_t value);
    RowWriter& number(double value);  // NaN -> "nan" / null
    void end_row();
    /// Writes the closing bracket (JSON) and flushes. Called by the
    /// destructor if needed, but errors are only reported from here.
    void finish();

private:
    void begin_cell();
    void flush_if_large();

    std::ostream& out_;
    std::vector<std::string> columns_;
    bool json_;
    std::string buffer_;
    std::size_t cell_ = 0;
    std::size_t rows_ = 0;
    bool finished_ = false;
};

/// Small whole-file CSV: header plus string cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;  // source line of each row

    /// Throws ParseError naming the missing column.
    [[nodiscard]] std::size_t column(std::string_view name) const;
    [[nodiscard]] std::optional<std::size_t> find_column(std::string_view name) const;
};

[[nodiscard]] CsvTable read_csv(std::istream& in, char delimiter = ',');

/// Per-asset signs read from `asset,seq,sign[,label]`. seq must increase
/// within an asset; it is validated but not kept.
struct SignColumn {
    std::vector<Sign> signs;
    std::vector<std::int64_t> labels;  // filled only when labels are kept
};

struct SignTable {
    std::map<std::string, SignColumn> by_asset;
    std::optional<std::string> label_column;
    std::size_t rows = 0;
};

[[nodiscard]] SignTable read_signs(std::istream& in, bool keep_labels, char delimiter = ',');

}  // namespace ordermem::cli
