#include "ordermem/cli/tables.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "ordermem/detail/csv.hpp"
#include "ordermem/ingest.hpp"

namespace ordermem::cli {

RowWriter::RowWriter(std::ostream& out, std::vector<std::string> columns, bool json)
    : out_(out), columns_(std::move(columns)), json_(json) {
    if (json_) {
        buffer_ += '[';
    } else {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) buffer_ += ',';
            buffer_ += columns_[i];
        }
        buffer_ += '\n';
    }
}

RowWriter::~RowWriter() {
    if (!finished_) {
        try {
            finish();
        } catch (...) {
        }
    }
}

void RowWriter::begin_cell() {
    if (cell_ >= columns_.size()) throw std::logic_error("RowWriter: too many cells in row");
    if (json_) {
        buffer_ += cell_ == 0 ? (rows_ == 0 ? "\n{" : ",\n{") : ",";
        buffer_ += nlohmann::json(columns_[cell_]).dump();
        buffer_ += ':';
    } else if (cell_ > 0) {
        buffer_ += ',';
    }
    ++cell_;
}

RowWriter& RowWriter::text(std::string_view value) {
    begin_cell();
    if (json_) {
        buffer_ += nlohmann::json(std::string(value)).dump();
    } else {
        buffer_ += value;
    }
    return *this;
}

RowWriter& RowWriter::integer(std::int64_t value) {
    begin_cell();
    char buf[24];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    buffer_.append(buf, ptr);
    return *this;
}

RowWriter& RowWriter::number(double value) {
    begin_cell();
    if (std::isnan(value)) {
        buffer_ += json_ ? "null" : "nan";
    } else if (json_ && std::isinf(value)) {
        buffer_ += "null";
    } else {
        buffer_ += format_double(value);
    }
    return *this;
}

void RowWriter::end_row() {
    if (cell_ != columns_.size()) throw std::logic_error("RowWriter: row has the wrong number of cells");
    buffer_ += json_ ? "}" : "\n";
    cell_ = 0;
    ++rows_;
    flush_if_large();
}

void RowWriter::flush_if_large() {
    if (buffer_.size() >= (1u << 20)) {
        out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
        buffer_.clear();
    }
}

void RowWriter::finish() {
    if (finished_) return;
    finished_ = true;
    if (json_) buffer_ += rows_ ? "\n]\n" : "]\n";
    out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    buffer_.clear();
    out_.flush();
    if (!out_) throw std::runtime_error("write failed");
}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto index = find_column(name);
    if (!index) throw ParseError(1, "missing column '" + std::string(name) + "'");
    return *index;
}

CsvTable read_csv(std::istream& in, char delimiter) {
    CsvTable table;
    detail::LineReader reader(in);
    std::vector<std::string_view> fields;
    std::string_view line;
    bool have_header = false;
    while (reader.next(line)) {
        if (line.empty()) continue;
        detail::split_fields(line, delimiter, fields);
        if (!have_header) {
            table.header.assign(fields.begin(), fields.end());
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw ParseError(reader.line_number(), "expected " + std::to_string(table.header.size()) + " fields");
        }
        table.rows.emplace_back(fields.begin(), fields.end());
        table.lines.push_back(reader.line_number());
    }
    if (!have_header) throw ParseError(0, "empty table");
    return table;
}

SignTable read_signs(std::istream& in, bool keep_labels, char delimiter) {
    SignTable table;
    detail::LineReader reader(in);
    std::vector<std::string_view> fields;
    std::string_view line;

    while (reader.next(line)) {
        if (line.empty()) continue;
        detail::split_fields(line, delimiter, fields);
        if (fields.size() < 3 || fields.size() > 4 || fields[0] != "asset" || fields[1] != "seq" || fields[2] != "sign") {
            throw ParseError(reader.line_number(), "expected header 'asset,seq,sign[,label]'");
        }
        if (fields.size() == 4) table.label_column = std::string(fields[3]);
        break;
    }
    if (reader.line_number() == 0) return table;
    const std::size_t width = table.label_column ? 4 : 3;
    keep_labels = keep_labels && table.label_column.has_value();

    std::string last_asset;
    SignColumn* column = nullptr;
    std::int64_t last_seq = 0;
    std::map<std::string, std::int64_t> seq_of;  // last seq of assets we switched away from

    while (reader.next(line)) {
        if (line.empty()) continue;
        detail::split_fields(line, delimiter, fields);
        if (fields.size() != width) throw ParseError(reader.line_number(), "wrong field count");
        if (column == nullptr || fields[0] != last_asset) {
            if (column != nullptr) seq_of[last_asset] = last_seq;
            last_asset.assign(fields[0]);
            if (last_asset.empty()) throw ParseError(reader.line_number(), "empty asset");
            column = &table.by_asset[last_asset];
            const auto it = seq_of.find(last_asset);
            last_seq = it == seq_of.end() ? std::numeric_limits<std::int64_t>::min() : it->second;
        }
        const auto seq = detail::parse_int<std::int64_t>(fields[1]);
        if (!seq) throw ParseError(reader.line_number(), "non-numeric seq");
        if (*seq <= last_seq) throw ParseError(reader.line_number(), "seq not increasing within asset");
        last_seq = *seq;
        Sign sign;
        if (fields[2] == "1" || fields[2] == "+1") {
            sign = Sign::buy;
        } else if (fields[2] == "-1") {
            sign = Sign::sell;
        } else {
            throw ParseError(reader.line_number(), "sign must be 1 or -1");
        }
        column->signs.push_back(sign);
        if (keep_labels) {
            const auto label = detail::parse_int<std::int64_t>(fields[3]);
            if (!label) throw ParseError(reader.line_number(), "non-numeric label");
            column->labels.push_back(*label);
        }
        ++table.rows;
    }
    return table;
}

}  // namespace ordermem::cli
