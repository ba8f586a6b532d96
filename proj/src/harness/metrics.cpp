#include "ssrank/harness/metrics.hpp"

#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace ssrank::harness {

std::string csv_header() {
  return "session,transaction_amount,terminal,length,moving_avg,wall_ms";
}

std::string to_csv(const MetricsRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%" PRId64 ",%.12g,%s,%d,%.12g,%" PRId64,
                row.session, row.transaction_amount,
                sim::to_string(row.terminal), row.length, row.moving_avg,
                row.wall_ms);
  return buf;
}

MetricsWriter::MetricsWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("metrics: cannot open " + path);
  out_ << csv_header() << "\n";
}

void MetricsWriter::append(const MetricsRow& row) {
  out_ << to_csv(row) << "\n";
}

void MetricsWriter::flush() { out_.flush(); }

double mean_transaction(const std::vector<MetricsRow>& rows, std::int64_t first,
                        std::int64_t last) {
  double total = 0.0;
  std::int64_t count = 0;
  for (const MetricsRow& row : rows) {
    if (row.session >= first && row.session <= last) {
      total += row.transaction_amount;
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("mean_transaction: empty range");
  return total / static_cast<double>(count);
}

}  // namespace ssrank::harness
