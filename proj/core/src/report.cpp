#include "nkstab/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nkstab {

namespace {

using nlohmann::json;

// JSON has no NaN or infinity; encode them as strings.
json encode(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double decode(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw std::invalid_argument("report: expected a number");
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

json stability_to_json(const StabilityReport& s) {
  json d = json::array();
  for (const auto& x : s.destabilizers)
    d.push_back({{"source", x.source},
                 {"index", x.index},
                 {"norm2", encode(x.norm2)},
                 {"q_value", encode(x.q_value)},
                 {"stability_eigenvalue", encode(x.stability_eigenvalue)},
                 {"lichnerowicz_eigenvalue", encode(x.lichnerowicz_eigenvalue)},
                 {"eh_unstable", x.eh_unstable},
                 {"nu_unstable", x.nu_unstable}});
  return {{"space", s.space},
          {"einstein_constant", encode(s.einstein_constant)},
          {"b2_sector", s.b2_sector},
          {"b3_sector", s.b3_sector},
          {"destabilizers", std::move(d)},
          {"gram_rank", s.gram_rank},
          {"q_min_eigenvalue", encode(s.q_min_eigenvalue)},
          {"coindex_lower_bound", s.coindex_lower_bound},
          {"notes", s.notes}};
}

StabilityReport stability_from_json(const json& j) {
  StabilityReport s;
  s.space = j.at("space").get<std::string>();
  s.einstein_constant = decode(j.at("einstein_constant"));
  s.b2_sector = j.at("b2_sector").get<int>();
  s.b3_sector = j.at("b3_sector").get<int>();
  for (const auto& x : j.at("destabilizers")) {
    Destabilizer d;
    d.source = x.at("source").get<std::string>();
    d.index = x.at("index").get<int>();
    d.norm2 = decode(x.at("norm2"));
    d.q_value = decode(x.at("q_value"));
    d.stability_eigenvalue = decode(x.at("stability_eigenvalue"));
    d.lichnerowicz_eigenvalue = decode(x.at("lichnerowicz_eigenvalue"));
    d.eh_unstable = x.at("eh_unstable").get<bool>();
    d.nu_unstable = x.at("nu_unstable").get<bool>();
    s.destabilizers.push_back(d);
  }
  s.gram_rank = j.at("gram_rank").get<int>();
  s.q_min_eigenvalue = decode(j.at("q_min_eigenvalue"));
  s.coindex_lower_bound = j.at("coindex_lower_bound").get<int>();
  s.notes = j.at("notes").get<std::vector<std::string>>();
  return s;
}

}  // namespace

const CheckRecord& Report::add(std::string id, double residual, double tolerance) {
  CheckRecord rec;
  rec.id = std::move(id);
  rec.residual = residual;
  rec.tolerance = tolerance;
  rec.pass = residual <= tolerance;  // false for NaN
  rec.context = context;
  checks.push_back(std::move(rec));
  return checks.back();
}

int Report::passed() const {
  int n = 0;
  for (const auto& c : checks) n += c.pass ? 1 : 0;
  return n;
}

int Report::failed() const { return static_cast<int>(checks.size()) - passed(); }

const CheckRecord* Report::find(std::string_view id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

const Finding* Report::find_finding(std::string_view id) const {
  for (const auto& f : findings)
    if (f.id == id) return &f;
  return nullptr;
}

bool operator==(const Destabilizer& a, const Destabilizer& b) {
  return a.source == b.source && a.index == b.index && same_double(a.norm2, b.norm2) &&
         same_double(a.q_value, b.q_value) && same_double(a.stability_eigenvalue, b.stability_eigenvalue) &&
         same_double(a.lichnerowicz_eigenvalue, b.lichnerowicz_eigenvalue) && a.eh_unstable == b.eh_unstable &&
         a.nu_unstable == b.nu_unstable;
}

bool operator==(const StabilityReport& a, const StabilityReport& b) {
  return a.space == b.space && same_double(a.einstein_constant, b.einstein_constant) &&
         a.b2_sector == b.b2_sector && a.b3_sector == b.b3_sector && a.destabilizers == b.destabilizers &&
         a.gram_rank == b.gram_rank && same_double(a.q_min_eigenvalue, b.q_min_eigenvalue) &&
         a.coindex_lower_bound == b.coindex_lower_bound && a.notes == b.notes;
}

bool operator==(const Report& a, const Report& b) {
  if (a.checks.size() != b.checks.size()) return false;
  for (std::size_t k = 0; k < a.checks.size(); ++k) {
    const auto& x = a.checks[k];
    const auto& y = b.checks[k];
    if (x.id != y.id || !same_double(x.residual, y.residual) || !same_double(x.tolerance, y.tolerance) ||
        x.pass != y.pass || x.context != y.context)
      return false;
  }
  if (a.findings.size() != b.findings.size()) return false;
  for (std::size_t k = 0; k < a.findings.size(); ++k) {
    const auto& x = a.findings[k];
    const auto& y = b.findings[k];
    if (x.id != y.id || x.text != y.text || x.values.size() != y.values.size()) return false;
    for (std::size_t v = 0; v < x.values.size(); ++v)
      if (x.values[v].first != y.values[v].first || !same_double(x.values[v].second, y.values[v].second)) return false;
  }
  return a.version == b.version && a.context == b.context && a.stability == b.stability;
}

std::string report_to_json(const Report& report, int indent) {
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"id", c.id},
                      {"residual", encode(c.residual)},
                      {"tolerance", encode(c.tolerance)},
                      {"pass", c.pass},
                      {"context", c.context}});
  json findings = json::array();
  for (const auto& f : report.findings) {
    json values = json::array();
    for (const auto& [k, v] : f.values) values.push_back({{"name", k}, {"value", encode(v)}});
    findings.push_back({{"id", f.id}, {"text", f.text}, {"values", std::move(values)}});
  }
  json summary = {{"passed", report.passed()}, {"failed", report.failed()}};
  if (report.stability) summary["coindex_lower_bound"] = report.stability->coindex_lower_bound;

  json doc = {{"version", report.version},
              {"context", report.context},
              {"checks", std::move(checks)},
              {"summary", std::move(summary)},
              {"findings", std::move(findings)}};
  if (report.stability) doc["stability"] = stability_to_json(*report.stability);
  return doc.dump(indent);
}

Report report_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    Report r;
    r.version = doc.at("version").get<std::string>();
    r.context = doc.at("context").get<std::string>();
    for (const auto& c : doc.at("checks")) {
      CheckRecord rec;
      rec.id = c.at("id").get<std::string>();
      rec.residual = decode(c.at("residual"));
      rec.tolerance = decode(c.at("tolerance"));
      rec.pass = c.at("pass").get<bool>();
      rec.context = c.at("context").get<std::string>();
      r.checks.push_back(std::move(rec));
    }
    if (doc.contains("findings"))
      for (const auto& f : doc.at("findings")) {
        Finding fd;
        fd.id = f.at("id").get<std::string>();
        fd.text = f.at("text").get<std::string>();
        for (const auto& v : f.at("values")) fd.values.emplace_back(v.at("name").get<std::string>(), decode(v.at("value")));
        r.findings.push_back(std::move(fd));
      }
    if (doc.contains("stability")) r.stability = stability_from_json(doc.at("stability"));
    const json& summary = doc.at("summary");
    if (summary.at("passed").get<int>() != r.passed() || summary.at("failed").get<int>() != r.failed())
      throw std::invalid_argument("report: summary does not match checks");
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  }
}

std::string format_table(const Report& report) {
  std::ostringstream os;
  std::size_t width = 5;
  for (const auto& c : report.checks) width = std::max(width, c.id.size());
  char buf[160];
  for (const auto& c : report.checks) {
    std::snprintf(buf, sizeof buf, "%-4s  %-*s  residual %-11.3e tol %.1e\n", c.pass ? "ok" : "FAIL",
                  static_cast<int>(width), c.id.c_str(), c.residual, c.tolerance);
    os << buf;
  }
  for (const auto& f : report.findings) os << "note  " << f.id << ": " << f.text << '\n';
  if (report.stability) {
    const auto& s = *report.stability;
    os << "stability: b2-sector " << s.b2_sector << ", b3-sector " << s.b3_sector << ", coindex >= "
       << s.coindex_lower_bound << '\n';
    for (const auto& d : s.destabilizers) {
      std::snprintf(buf, sizeof buf, "  %s[%d]  Q/|h|^2 = %.6f  Delta_L eigenvalue %.6f  EH-unstable %s  nu-unstable %s\n",
                    d.source.c_str(), d.index, d.norm2 > 0 ? d.q_value / d.norm2 : 0.0, d.lichnerowicz_eigenvalue,
                    d.eh_unstable ? "yes" : "no", d.nu_unstable ? "yes" : "no");
      os << buf;
    }
    for (const auto& n : s.notes) os << "  note: " << n << '\n';
  }
  os << report.passed() << " passed, " << report.failed() << " failed\n";
  return os.str();
}

}  // namespace nkstab
