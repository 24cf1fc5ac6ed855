#include "abm/output.hpp"

#include <fstream>
#include <sstream>

#include "abm/config.hpp"

namespace abm::io {

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::sep() {
  if (!first_) out_ << ',';
  first_ = false;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  out_ << format_number(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::uint64_t v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  sep();
  if (v.find_first_of(",\"\n") == std::string::npos) {
    out_ << v;
  } else {
    out_ << '"';
    for (char c : v) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  return *this;
}

CsvWriter& CsvWriter::empty() {
  sep();
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

void write_series_csv(const RunOutput& run, std::ostream& out) {
  CsvWriter csv(out, {"t", "price", "p_f", "ewma_var", "dealer_q", "dealer_wealth", "wealth_fundamentalist",
                      "wealth_chartist", "wealth_noise", "dealer_trade_value", "actor"});
  for (std::size_t i = 0; i < run.size(); ++i) {
    csv.cell(run.t[i])
        .cell(run.price[i])
        .cell(run.fundamental[i])
        .cell(run.ewma_var[i])
        .cell(run.dealer_inventory[i])
        .cell(run.dealer_wealth[i])
        .cell(run.class_wealth[0][i])
        .cell(run.class_wealth[1][i])
        .cell(run.class_wealth[2][i])
        .cell(run.dealer_trade_value[i])
        .cell(run.actor[i])
        .end_row();
  }
}

void write_trades_csv(const RunOutput& run, std::ostream& out) {
  CsvWriter csv(out, {"at", "price_ticks", "quantity", "buyer", "seller", "resting_order", "incoming_order"});
  for (const Trade& tr : run.trades) {
    csv.cell(tr.at)
        .cell(tr.price.ticks)
        .cell(tr.quantity)
        .cell(static_cast<std::int64_t>(tr.buyer_id))
        .cell(static_cast<std::int64_t>(tr.seller_id))
        .cell(static_cast<std::uint64_t>(tr.resting_order_id))
        .cell(static_cast<std::uint64_t>(tr.incoming_order_id))
        .end_row();
  }
}

nlohmann::ordered_json config_json(const std::vector<std::pair<std::string, std::string>>& entries) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [k, v] : entries) doc[k] = v;
  return doc;
}

nlohmann::ordered_json book_snapshot(std::int64_t t, const OrderBook& book, std::size_t depth) {
  nlohmann::ordered_json doc;
  doc["t"] = t;
  doc["price"] = book.prev_price();
  for (Side side : {Side::bid, Side::ask}) {
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (const auto& level : book.depth(side, depth)) {
      levels.push_back({level.price.currency(book.tick_size()), level.quantity, level.orders});
    }
    doc[side == Side::bid ? "bids" : "asks"] = std::move(levels);
  }
  return doc;
}

std::string version_string() { return std::string("dealer-abm ") + ABM_VERSION; }

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

}  // namespace abm::io
