#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "abm/market_sim.hpp"
#include "json.hpp"

namespace abm::io {

// Minimal CSV emitter; doubles use the shortest round-trip representation.
class CsvWriter {
public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& cell(double v);
  CsvWriter& cell(std::int64_t v);
  CsvWriter& cell(std::uint64_t v);
  CsvWriter& cell(int v) { return cell(static_cast<std::int64_t>(v)); }
  CsvWriter& cell(const std::string& v);
  CsvWriter& cell(const char* v) { return cell(std::string(v)); }
  CsvWriter& empty();
  void end_row();

private:
  void sep();
  std::ostream& out_;
  bool first_{true};
};

void write_series_csv(const RunOutput& run, std::ostream& out);
void write_trades_csv(const RunOutput& run, std::ostream& out);

nlohmann::ordered_json config_json(const std::vector<std::pair<std::string, std::string>>& entries);
nlohmann::ordered_json book_snapshot(std::int64_t t, const OrderBook& book, std::size_t depth);

std::string version_string();

void write_file(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

}  // namespace abm::io
