#include "adtrans/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "adtrans/errors.hpp"

namespace adtrans {

using nlohmann::json;

void Table::add_column_header(const std::string& name, const std::string& unit) {
  header.push_back(name + " [" + unit + "]");
}

void Table::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_number(v));
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

void write_csv(const std::filesystem::path& path, const Table& table) {
  auto out = open_out(path);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  json orient = json::array();
  for (auto o : s.scheme.orientation()) orient.push_back(std::string(to_string(o)));
  j["scheme"] = orient;
  j["levels"] = s.scheme.levels();
  json groups = json::array();
  for (const auto& g : s.scheme.groups()) {
    json m = json::array();
    for (int t : g) m.push_back(t + 1);
    groups.push_back(m);
  }
  j["degeneracy"] = groups;
  json tr = json::array();
  for (std::size_t i = 0; i < s.train.envelopes.size(); ++i) {
    const auto& e = s.train.envelopes[i];
    json t{{"shape", std::string(to_string(e.shape))},
           {"peak", e.peak_rabi},
           {"center", e.center},
           {"width", e.width},
           {"delta", s.detunings.one_photon()[i]}};
    if (e.on_interval) t["on"] = {e.on_interval->first, e.on_interval->second};
    if (!e.points.empty()) {
      json p = json::array();
      for (auto [a, b] : e.points) p.push_back({a, b});
      t["points"] = p;
    }
    tr.push_back(t);
  }
  j["transitions"] = tr;
  j["multiphoton_detunings"] = s.detunings.multi_photon();
  j["initial"] = s.initial_level + 1;
  j["regime"] = s.regime ? json(*s.regime) : json(nullptr);
  j["time"] = {{"start", s.grid.start},
               {"stop", s.grid.stop},
               {"step", s.grid.step},
               {"stride", s.grid.stride}};
  j["monitor"] = {{"threshold", s.monitor.threshold},
                  {"coupling_floor", s.monitor.coupling_floor},
                  {"gap_resolution", s.monitor.gap_resolution}};
  return j;
}

json to_json(const RunConfig& c) {
  json j = to_json(c.scenario);
  if (!c.propagation) return j;
  const auto& p = *c.propagation;
  json pj{{"model", p.model},
          {"closure", p.closure},
          {"q", p.medium.q},
          {"length", p.grid.length},
          {"dx", p.grid.dx},
          {"tau", {{"start", p.grid.tau_start}, {"stop", p.grid.tau_stop}, {"step", p.grid.dtau}}},
          {"store_every", p.grid.store_every}};
  if (p.medium.alpha0) pj["alpha0"] = *p.medium.alpha0;
  if (p.medium.linewidth) pj["linewidth"] = *p.medium.linewidth;
  json pairs = json::array();
  for (auto [a, b] : p.invariant_pairs) pairs.push_back({a + 1, b + 1});
  pj["invariant_pairs"] = pairs;
  if (p.mixing) {
    const auto& m = *p.mixing;
    pj["mixing"] = {{"profile", m.profile}, {"amplitude", m.amplitude}, {"center", m.center},
                    {"ramp", m.ramp},       {"peak", m.peak},           {"width", m.width}};
  }
  j["propagation"] = pj;
  return j;
}

}  // namespace adtrans
