#include "mflq/csv.hpp"

#include <cstdio>

#include "mflq/errors.hpp"

namespace mflq {

CsvWriter::CsvWriter(const std::string& path, const std::string& meta,
                     const std::vector<std::string>& columns)
    : out_(path), n_cols_(columns.size()) {
    if (!out_) throw Error("cannot open output file: " + path);
    out_ << "# mflq " << kToolVersion << " " << meta << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    out_ << "\n";
}

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_cols_) throw Error("CsvWriter: wrong column count");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format(values[i]) << (i + 1 < values.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::raw_row(const std::string& line) { out_ << line << "\n"; }

void CsvWriter::close() { out_.close(); }

SummaryWriter::SummaryWriter(const std::string& path) : out_(path) {
    if (!out_) throw Error("cannot open output file: " + path);
}

void SummaryWriter::kv(const std::string& key, const std::string& value) {
    out_ << key << "=" << value << "\n";
}

void SummaryWriter::kv(const std::string& key, double value) {
    out_ << key << "=" << CsvWriter::format(value) << "\n";
}

void SummaryWriter::kv(const std::string& key, long long value) {
    out_ << key << "=" << value << "\n";
}

void SummaryWriter::close() { out_.close(); }

}  // namespace mflq
