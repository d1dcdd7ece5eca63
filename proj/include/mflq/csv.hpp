#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace mflq {

inline constexpr const char* kToolVersion = "0.1.0";

/// CSV writer with a metadata comment row and full double precision.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& meta,
              const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    void raw_row(const std::string& line);
    void close();
    bool good() const { return static_cast<bool>(out_); }

    static std::string format(double v);

private:
    std::ofstream out_;
    std::size_t n_cols_;
};

/// Plain key=value writer for machine-readable summaries.
class SummaryWriter {
public:
    explicit SummaryWriter(const std::string& path);
    void kv(const std::string& key, const std::string& value);
    void kv(const std::string& key, double value);
    void kv(const std::string& key, long long value);
    void close();

private:
    std::ofstream out_;
};

}  // namespace mflq
