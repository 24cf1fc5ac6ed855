#include "abm/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <functional>
#include <algorithm>
#include <optional>
#include <variant>

namespace abm {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ValidationError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("config key '" + key + "': expected a boolean, got '" + text + "'");
}

static_assert(std::is_same_v<std::size_t, std::uint64_t>);
using Field = std::variant<std::uint64_t*, std::int64_t*, int*, double*, bool*, std::optional<double>*,
                           DealerKind*, prob::Variant*>;

struct Binding {
  const char* key;
  Field field;
};

void assign(const Binding& b, const std::string& text) {
  const std::string key = b.key;
  std::visit(
      [&](auto* ptr) {
        using T = std::remove_pointer_t<decltype(ptr)>;
        if constexpr (std::is_same_v<T, bool>) {
          *ptr = parse_bool(key, text);
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          const std::string v = trim(text);
          if (v.empty() || v == "default") {
            ptr->reset();
          } else {
            *ptr = parse_number<double>(key, v);
          }
        } else if constexpr (std::is_same_v<T, DealerKind>) {
          *ptr = parse_dealer_kind(trim(text));
        } else if constexpr (std::is_same_v<T, prob::Variant>) {
          *ptr = prob::parse_variant(trim(text));
        } else {
          *ptr = parse_number<T>(key, text);
        }
      },
      b.field);
}

std::string render(const Binding& b) {
  return std::visit(
      [](auto* ptr) -> std::string {
        using T = std::remove_pointer_t<decltype(ptr)>;
        if constexpr (std::is_same_v<T, bool>) {
          return *ptr ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          return *ptr ? format_number(**ptr) : "default";
        } else if constexpr (std::is_same_v<T, DealerKind>) {
          return to_string(*ptr);
        } else if constexpr (std::is_same_v<T, prob::Variant>) {
          return prob::to_string(*ptr);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(*ptr);
        } else {
          return std::to_string(*ptr);
        }
      },
      b.field);
}

std::vector<Binding> bindings(SimConfig& c) {
  return {
      {"market.steps", &c.steps},
      {"market.runs", &c.runs},
      {"market.seed", &c.seed},
      {"market.tick_size", &c.tick_size},
      {"market.expiry_count", &c.expiry_count},
      {"market.expiry_prob", &c.expiry_prob},
      {"market.ewma_alpha", &c.ewma_alpha},
      {"market.dealer_prob", &c.dealer_prob},
      {"market.book_log_depth", &c.book_log_depth},
      {"fundamental.initial", &c.fundamental.initial},
      {"fundamental.jump_size", &c.fundamental.jump_size},
      {"fundamental.jump_prob", &c.fundamental.jump_prob},
      {"fundamental.signed_jumps", &c.fundamental.signed_jumps},
      {"agents.fundamentalists", &c.population.fundamentalists},
      {"agents.chartists", &c.population.chartists},
      {"agents.noise", &c.population.noise},
      {"agents.risk_aversion", &c.stylised.risk_aversion},
      {"agents.sigma_fundamentalist", &c.stylised.sigma_fundamentalist},
      {"agents.sigma_chartist", &c.stylised.sigma_chartist},
      {"agents.sigma_noise", &c.stylised.sigma_noise},
      {"agents.sigma_epsilon", &c.stylised.sigma_epsilon},
      {"agents.lookback_max", &c.stylised.lookback_max},
      {"agents.stock_min", &c.stylised.stock_min},
      {"agents.stock_max", &c.stylised.stock_max},
      {"agents.cash_min", &c.stylised.cash_min},
      {"agents.cash_max", &c.stylised.cash_max},
      {"agents.cash_unit", &c.stylised.cash_unit},
      {"agents.lognormal_shape", &c.stylised.lognormal_shape},
      {"agents.lognormal_scale", &c.stylised.lognormal_scale},
      {"dealer.kind", &c.dealer.kind},
      {"dealer.cash", &c.dealer_cash},
      {"dealer.gamma", &c.dealer.gamma},
      {"dealer.kappa", &c.dealer.kappa},
      {"dealer.variance_scale", &c.dealer.variance_scale},
      {"dealer.phi_max_bid", &c.dealer.phi_max_bid},
      {"dealer.phi_max_ask", &c.dealer.phi_max_ask},
      {"dealer.eta_bid", &c.dealer.eta_bid},
      {"dealer.eta_ask", &c.dealer.eta_ask},
      {"dealer.naive_size", &c.dealer.naive_size},
      {"dealer.post_only", &c.dealer.post_only},
  };
}

std::vector<Binding> bindings(ProbSimSettings& s) {
  auto& p = s.params;
  return {
      {"probsim.runs", &s.runs},
      {"probsim.bins", &s.bins},
      {"probsim.seed", &s.seed},
      {"probsim.horizon", &p.horizon},
      {"probsim.dt", &p.dt},
      {"probsim.sigma", &p.sigma},
      {"probsim.intensity", &p.intensity},
      {"probsim.kappa", &p.kappa},
      {"probsim.gamma", &p.gamma},
      {"probsim.initial_price", &p.initial_price},
      {"probsim.initial_cash", &p.initial_cash},
      {"probsim.gamma_shape", &p.gamma_shape},
      {"probsim.gamma_scale", &p.gamma_scale},
      {"probsim.naive_size", &p.naive_size},
      {"probsim.ir_phi_max", &p.ir_phi_max},
      {"probsim.ir_eta", &p.ir_eta},
  };
}

template <typename Settings>
void apply(Settings& target, const ConfigMap& values, std::initializer_list<std::string_view> sections) {
  auto table = bindings(target);
  for (const auto& [key, value] : values) {
    const auto dot = key.find('.');
    const std::string_view section = std::string_view(key).substr(0, dot);
    if (std::find(sections.begin(), sections.end(), section) == sections.end()) continue;
    auto it = std::find_if(table.begin(), table.end(), [&](const Binding& b) { return key == b.key; });
    if (it == table.end()) throw ValidationError("unknown config key '" + key + "'");
    assign(*it, value);
  }
}

}  // namespace

ConfigMap read_config_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError(std::string("cannot read config: ") + e.what());
  }
  ConfigMap out;
  for (const auto& [section, children] : tree) {
    if (children.empty()) {
      out[section] = trim(children.data());
      continue;
    }
    for (const auto& [key, node] : children) out[section + "." + key] = trim(node.data());
  }
  return out;
}

std::pair<std::string, std::string> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ValidationError("override must look like section.key=value: " + text);
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

void apply_sim_config(SimConfig& config, const ConfigMap& values) {
  apply(config, values, {"market", "fundamental", "agents", "dealer"});
}

void apply_probsim_config(ProbSimSettings& settings, const ConfigMap& values) {
  apply(settings, values, {"probsim"});
  settings.params.ir_eta_set = values.count("probsim.ir_eta") > 0;
}

std::vector<std::pair<std::string, std::string>> describe(const SimConfig& config) {
  SimConfig copy = config;
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& b : bindings(copy)) out.emplace_back(b.key, render(b));
  return out;
}

std::vector<std::pair<std::string, std::string>> describe(const ProbSimSettings& settings) {
  ProbSimSettings copy = settings;
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& b : bindings(copy)) out.emplace_back(b.key, render(b));
  return out;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (start <= text.size()) {
    const auto end = text.find(sep, start);
    const std::string item = trim(text.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (!item.empty()) out.push_back(item);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace abm
