#include "subspaces/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace subspaces {

using ordered_json = nlohmann::ordered_json;

std::string csv_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string witness_csv(const Matrix& m) {
  std::ostringstream out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << csv_double(m(i, j));
    }
    out << '\n';
  }
  return out.str();
}

namespace {

ordered_json verdict_json(const Verdict& v) {
  return ordered_json{{"relation", to_string(v.relation)},
                      {"rule", v.rule_id},
                      {"citation", v.citation},
                      {"detail", v.detail}};
}

ordered_json witness_json(const Witness& w, bool include_matrix) {
  ordered_json j{{"operator_residual", w.operator_residual},
                 {"frame_residual_e1", w.frame_residuals[0]},
                 {"frame_residual_e2", w.frame_residuals[1]},
                 {"condition", w.condition}};
  if (include_matrix) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < w.map.rows(); ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t jj = 0; jj < w.map.cols(); ++jj) row.push_back(w.map(i, jj));
      rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
  }
  return j;
}

}  // namespace

std::string render_json(const Report& report) {
  ordered_json j;
  j["command"] = report.command;
  j["ids"] = report.ids;
  if (!report.relation.empty()) j["relation_requested"] = report.relation;
  if (report.verdict) j["verdict"] = verdict_json(*report.verdict);
  if (!report.rows.empty()) {
    ordered_json rows;
    for (const auto& [k, v] : report.rows) rows[k] = v;
    j["invariants"] = std::move(rows);
  }
  if (report.witness) j["witness"] = witness_json(*report.witness, report.include_witness_matrix);
  j["timing_ms"] = report.timing_ms;
  return j.dump(2) + "\n";
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  out << report.command << ":";
  for (const auto& id : report.ids) out << ' ' << id;
  out << '\n';
  if (!report.relation.empty()) out << "  relation requested: " << report.relation << '\n';
  if (report.verdict) {
    out << "  verdict : " << to_string(report.verdict->relation) << '\n';
    out << "  rule    : " << report.verdict->rule_id << '\n';
    out << "  cites   : " << report.verdict->citation << '\n';
    if (!report.verdict->detail.empty()) out << "  detail  : " << report.verdict->detail << '\n';
  }
  if (!report.rows.empty()) {
    std::size_t width = 0;
    for (const auto& [k, v] : report.rows) width = std::max(width, k.size());
    for (const auto& [k, v] : report.rows)
      out << "  " << k << std::string(width - k.size(), ' ') << " : " << v << '\n';
  }
  if (report.witness) {
    out << "  witness residual (operator) : " << csv_double(report.witness->operator_residual)
        << '\n';
    out << "  witness residual (frames)   : " << csv_double(report.witness->frame_residuals[0])
        << ", " << csv_double(report.witness->frame_residuals[1]) << '\n';
    out << "  witness condition           : " << csv_double(report.witness->condition) << '\n';
  }
  out << "  elapsed: " << report.timing_ms << " ms\n";
  return out.str();
}

}  // namespace subspaces
