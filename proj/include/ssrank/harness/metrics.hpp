#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "ssrank/sim.hpp"

namespace ssrank::harness {

struct MetricsRow {
  std::int64_t session = 0;
  double transaction_amount = 0.0;
  sim::SessionTrajectory::Terminal terminal =
      sim::SessionTrajectory::Terminal::Abandon;
  int length = 0;
  double moving_avg = 0.0;
  std::int64_t wall_ms = 0;
};

// header: session,transaction_amount,terminal,length,moving_avg,wall_ms
std::string csv_header();
std::string to_csv(const MetricsRow& row);

class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string& path);
  void append(const MetricsRow& row);
  void flush();

 private:
  std::ofstream out_;
};

// Mean transaction amount over rows [first, last] (1-based session
// indices, inclusive).
double mean_transaction(const std::vector<MetricsRow>& rows,
                        std::int64_t first, std::int64_t last);

}  // namespace ssrank::harness
