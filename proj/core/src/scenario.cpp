#include "openthermo/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "openthermo/errors.hpp"
#include "openthermo/gas.hpp"

namespace openthermo {

bool RunSpec::operator==(const RunSpec& o) const {
  const auto& a = integration;
  const auto& b = o.integration;
  return t_final == o.t_final && a.method == b.method && a.h0 == b.h0 && a.h_min == b.h_min &&
         a.h_max == b.h_max && a.abs_tol == b.abs_tol && a.rel_tol == b.rel_tol &&
         a.sample_dt == b.sample_dt;
}

std::string Diagnostic::to_string() const {
  std::string s = "line " + std::to_string(where.line);
  if (where.column > 0) s += ", column " + std::to_string(where.column);
  return s + ": " + message;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& d) {
  std::string out = "scenario has " + std::to_string(d.size()) + " error(s)";
  for (const auto& x : d) out += "\n  " + x.to_string();
  return out;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

struct Token {
  std::string text;
  int column = 0;
};

struct Entry {
  std::string key;
  int line = 0;
  int column = 0;
  std::vector<Token> values;
};

struct Section {
  std::string kind;
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

const std::vector<std::string> kSectionKinds = {"gas",      "compartment", "port", "source",
                                                "coupling", "mechanics",   "run"};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }

std::vector<Token> tokenize(std::string_view s, int first_column) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i >= s.size()) break;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    out.push_back({std::string(s.substr(start, i - start)), first_column + int(start)});
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.';
  });
}

std::optional<double> to_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

class Builder {
 public:
  Builder(const std::filesystem::path& base) : base_(base) {}

  std::vector<Diagnostic> errors;

  void error(int line, int column, std::string msg) { errors.push_back({{line, column}, std::move(msg)}); }

  std::vector<Section> read(std::string_view text) {
    std::vector<Section> sections;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      std::size_t first = 0;
      while (first < line.size() && is_space(line[first])) ++first;
      if (first == line.size()) {
        if (end == text.size()) break;
        continue;
      }
      const int col0 = int(first) + 1;
      if (line[first] == '[') {
        const std::size_t close = line.find(']', first);
        if (close == std::string_view::npos) {
          error(line_no, col0, "section header: expected ']'");
        } else {
          std::size_t after = close + 1;
          while (after < line.size() && is_space(line[after])) ++after;
          if (after != line.size()) error(line_no, int(after) + 1, "unexpected text after section header");
          auto toks = tokenize(line.substr(first + 1, close - first - 1), col0 + 1);
          if (toks.empty()) {
            error(line_no, col0, "empty section header; expected one of " + list(kSectionKinds));
          } else if (std::find(kSectionKinds.begin(), kSectionKinds.end(), toks[0].text) ==
                     kSectionKinds.end()) {
            error(line_no, toks[0].column,
                  "unknown section kind '" + toks[0].text + "'; expected one of " + list(kSectionKinds));
          } else if (toks.size() > 2) {
            error(line_no, toks[2].column, "section header takes a kind and at most one name");
          } else {
            Section s;
            s.kind = toks[0].text;
            s.line = line_no;
            if (toks.size() == 2) {
              if (!is_identifier(toks[1].text)) {
                error(line_no, toks[1].column,
                      "invalid name '" + toks[1].text + "' (letters, digits, '_', '-', '.')");
              }
              s.name = toks[1].text;
            }
            sections.push_back(std::move(s));
          }
        }
      } else {
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
          error(line_no, col0, "expected 'key = value' or a section header");
        } else {
          auto key = tokenize(line.substr(0, eq), 1);
          auto values = tokenize(line.substr(eq + 1), int(eq) + 2);
          if (key.size() != 1 || !is_identifier(key[0].text)) {
            error(line_no, col0, "expected a single key before '='");
          } else if (values.empty()) {
            error(line_no, int(eq) + 1, "missing value after '='");
          } else if (sections.empty()) {
            error(line_no, key[0].column, "key '" + key[0].text + "' appears before any section");
          } else {
            sections.back().entries.push_back({key[0].text, line_no, key[0].column, std::move(values)});
          }
        }
      }
      if (end == text.size()) break;
    }
    return sections;
  }

  // Looks up keys of one section; reports unknown and duplicate keys.
  class Keys {
   public:
    Keys(Builder& b, const Section& s, std::vector<std::string> allowed) : b_(b), s_(s) {
      for (const auto& e : s.entries) {
        if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
          b.error(e.line, e.column,
                  "unknown key '" + e.key + "' in [" + s.kind + "]; expected one of " + list(allowed));
        } else if (!map_.emplace(e.key, &e).second) {
          b.error(e.line, e.column, "duplicate key '" + e.key + "'");
        }
      }
    }
    const Entry* get(const std::string& k) const {
      auto it = map_.find(k);
      return it == map_.end() ? nullptr : it->second;
    }
    bool has(const std::string& k) const { return get(k) != nullptr; }

    std::optional<double> number(const std::string& k, std::optional<double> fallback = std::nullopt) {
      const Entry* e = get(k);
      if (!e) {
        if (!fallback) b_.error(s_.line, 0, "[" + s_.kind + header() + "] is missing '" + k + "'");
        return fallback;
      }
      if (e->values.size() != 1) {
        b_.error(e->line, e->values[1].column, "'" + k + "' takes a single number");
        return std::nullopt;
      }
      auto v = to_number(e->values[0].text);
      if (!v) b_.error(e->line, e->values[0].column, "expected a finite number for '" + k + "', got '" + e->values[0].text + "'");
      return v;
    }

    std::optional<std::string> word(const std::string& k, bool required = true) {
      const Entry* e = get(k);
      if (!e) {
        if (required) b_.error(s_.line, 0, "[" + s_.kind + header() + "] is missing '" + k + "'");
        return std::nullopt;
      }
      if (e->values.size() != 1) {
        b_.error(e->line, e->values[1].column, "'" + k + "' takes a single word");
        return std::nullopt;
      }
      return e->values[0].text;
    }

    std::optional<TimeFunction> function(const std::string& k, std::optional<TimeFunction> fallback = std::nullopt) {
      const Entry* e = get(k);
      if (!e) {
        if (!fallback) b_.error(s_.line, 0, "[" + s_.kind + header() + "] is missing '" + k + "'");
        return fallback;
      }
      return b_.time_function(*e);
    }

    std::string header() const { return s_.name.empty() ? "" : " " + s_.name; }

   private:
    Builder& b_;
    const Section& s_;
    std::map<std::string, const Entry*> map_;
  };

  std::optional<TimeFunction> time_function(const Entry& e) {
    const auto& v = e.values;
    auto nums = [&](std::size_t from, std::size_t count) -> std::optional<std::vector<double>> {
      if (v.size() != from + count) {
        const int col = v.size() > from + count ? v[from + count].column : v.back().column;
        error(e.line, col, "'" + v[0].text + "' takes " + std::to_string(count) + " number(s)");
        return std::nullopt;
      }
      std::vector<double> out;
      for (std::size_t i = from; i < v.size(); ++i) {
        auto x = to_number(v[i].text);
        if (!x) {
          error(e.line, v[i].column, "expected a finite number, got '" + v[i].text + "'");
          return std::nullopt;
        }
        out.push_back(*x);
      }
      return out;
    };
    if (v[0].text == "const") {
      auto x = nums(1, 1);
      if (!x) return std::nullopt;
      return TimeFunction::constant((*x)[0]);
    }
    if (v[0].text == "ramp") {
      auto x = nums(1, 4);
      if (!x) return std::nullopt;
      if (!((*x)[3] > (*x)[2])) {
        error(e.line, v[4].column, "ramp end time must exceed its start time");
        return std::nullopt;
      }
      return TimeFunction::ramp((*x)[0], (*x)[1], (*x)[2], (*x)[3]);
    }
    if (v[0].text == "table") {
      if (v.size() != 2) {
        error(e.line, v[0].column, "'table' takes one file path");
        return std::nullopt;
      }
      return read_table(v[1], e.line);
    }
    if (v.size() == 1) {
      if (auto x = to_number(v[0].text)) return TimeFunction::constant(*x);
    }
    error(e.line, v[0].column,
          "expected a number or a time function (const <x> | ramp <x0> <x1> <t0> <t1> | table <path>), got '" +
              v[0].text + "'");
    return std::nullopt;
  }

  std::optional<TimeFunction> read_table(const Token& path_tok, int line) {
    const std::filesystem::path path = base_ / path_tok.text;
    std::ifstream in(path);
    if (!in) {
      error(line, path_tok.column, "cannot open table file '" + path.string() + "'");
      return std::nullopt;
    }
    std::vector<std::pair<double, double>> pts;
    std::string row;
    int row_no = 0;
    while (std::getline(in, row)) {
      ++row_no;
      if (auto h = row.find('#'); h != std::string::npos) row.resize(h);
      std::replace(row.begin(), row.end(), ',', ' ');
      if (!row.empty() && row.back() == '\r') row.pop_back();
      auto toks = tokenize(row, 1);
      if (toks.empty()) continue;
      std::optional<double> a, b;
      if (toks.size() == 2) {
        a = to_number(toks[0].text);
        b = to_number(toks[1].text);
      }
      if (!a || !b) {
        error(line, path_tok.column,
              "table '" + path_tok.text + "' row " + std::to_string(row_no) + ": expected two numbers");
        return std::nullopt;
      }
      if (!pts.empty() && !(*a > pts.back().first)) {
        error(line, path_tok.column,
              "table '" + path_tok.text + "' row " + std::to_string(row_no) + ": times must increase");
        return std::nullopt;
      }
      pts.emplace_back(*a, *b);
    }
    if (pts.empty()) {
      error(line, path_tok.column, "table '" + path_tok.text + "' has no rows");
      return std::nullopt;
    }
    return TimeFunction::table(std::move(pts), path_tok.text);
  }

  Scenario build(const std::vector<Section>& sections) {
    Scenario sc;
    NetworkModel& m = sc.model;
    std::map<std::string, int> header_line;  // "kind name" -> line
    std::set<std::string> names;
    const Section* gas = nullptr;
    const Section* run = nullptr;
    const Section* mech = nullptr;
    for (const auto& s : sections) {
      const bool singleton = s.kind == "gas" || s.kind == "run" || s.kind == "mechanics";
      if (singleton) {
        const Section*& slot = s.kind == "gas" ? gas : s.kind == "run" ? run : mech;
        if (slot) error(s.line, 0, "duplicate [" + s.kind + "] section");
        else slot = &s;
        header_line[s.kind] = s.line;
      } else if (s.name.empty()) {
        error(s.line, 0, "[" + s.kind + "] needs a name");
      } else if (!names.insert(s.name).second) {
        error(s.line, 0, "duplicate id '" + s.name + "'");
      } else {
        header_line[s.kind + " " + s.name] = s.line;
      }
    }

    // Gas.
    {
      static const Section empty{"gas", "", 0, {}};
      Keys k(*this, gas ? *gas : empty,
             {"R", "c_v", "T_ref", "p_ref", "u_ref", "s_ref", "molar_mass"});
      const double R0 = 8.314462618;
      auto R = k.number("R", R0);
      auto cv = k.number("c_v", 2.5 * R0);
      auto Tr = k.number("T_ref", 298.15);
      auto pr = k.number("p_ref", 1.0e5);
      auto ur = k.number("u_ref", 0.0);
      auto sr = k.number("s_ref", 0.0);
      auto mm = k.number("molar_mass", 0.028);
      if (R && cv && Tr && pr && ur && sr && mm) m.gas = GasSpec::make(*R, *cv, *Tr, *pr, *ur, *sr, *mm);
    }

    // Run.
    if (!run) {
      error(1, 0, "missing [run] section (it declares the system class)");
    } else {
      Keys k(*this, *run,
             {"class", "t_final", "method", "h0", "h_min", "h_max", "abs_tol", "rel_tol", "sample_dt"});
      if (auto c = k.word("class")) {
        if (auto cls = parse_system_class(*c)) {
          m.system_class = *cls;
        } else {
          const Entry* e = k.get("class");
          error(e->line, e->values[0].column,
                "unknown class '" + *c +
                    "'; expected simple_single, simple_mechanical, simple_diffusion or non_simple");
        }
      }
      if (auto w = k.word("method", false)) {
        if (auto me = parse_method(*w)) {
          sc.run.integration.method = *me;
        } else {
          const Entry* e = k.get("method");
          error(e->line, e->values[0].column, "unknown method '" + *w + "'; expected rk4 or rk45");
        }
      }
      auto& io = sc.run.integration;
      const IntegrationOptions d;
      if (auto x = k.number("t_final", 10.0)) sc.run.t_final = *x;
      if (auto x = k.number("h0", d.h0)) io.h0 = *x;
      if (auto x = k.number("h_min", d.h_min)) io.h_min = *x;
      if (auto x = k.number("h_max", d.h_max)) io.h_max = *x;
      if (auto x = k.number("abs_tol", d.abs_tol)) io.abs_tol = *x;
      if (auto x = k.number("rel_tol", d.rel_tol)) io.rel_tol = *x;
      if (auto x = k.number("sample_dt", d.sample_dt)) io.sample_dt = *x;
      for (const auto& v : io.violations()) error(run->line, 0, v);
      if (!(sc.run.t_final >= 0.0)) error(run->line, 0, "run: t_final must be non-negative");
    }

    struct PendingT0 {
      std::size_t index;
      double T0;
      int line;
    };
    std::vector<PendingT0> pending;
    std::vector<std::pair<std::string, TimeFunction>> velocities;
    std::vector<std::pair<std::string, int>> velocity_lines;

    for (const auto& s : sections) {
      if (s.name.empty() && (s.kind == "compartment" || s.kind == "port" || s.kind == "source" ||
                             s.kind == "coupling")) {
        continue;
      }
      if (s.kind == "compartment") {
        Keys k(*this, s, {"V", "N0", "S0", "T0"});
        CompartmentSpec c;
        c.id = s.name;
        if (auto x = k.number("V")) c.V = *x;
        if (auto x = k.number("N0")) c.N0 = *x;
        if (k.has("S0") == k.has("T0")) {
          error(s.line, 0, "[compartment " + s.name + "] needs exactly one of S0 or T0");
        } else if (k.has("S0")) {
          if (auto x = k.number("S0")) c.S0 = *x;
        } else if (auto x = k.number("T0")) {
          pending.push_back({m.compartments.size(), *x, k.get("T0")->line});
        }
        m.compartments.push_back(c);
      } else if (s.kind == "port") {
        Keys k(*this, s, {"compartment", "J", "T_in", "p_in", "velocity"});
        PortSpec p;
        p.id = s.name;
        if (auto w = k.word("compartment")) p.compartment = *w;
        if (auto f = k.function("J")) p.J = *f;
        const bool may_inflow = p.J.max_value() > 0.0;
        if (may_inflow && (!k.has("T_in") || !k.has("p_in"))) {
          error(s.line, 0, "[port " + s.name + "] can flow in and needs T_in and p_in");
        }
        if (auto f = k.function("T_in", p.T_in)) p.T_in = *f;
        if (auto f = k.function("p_in", p.p_in)) p.p_in = *f;
        if (const Entry* e = k.get("velocity")) {
          if (auto f = time_function(*e)) {
            velocities.emplace_back(p.id, *f);
            velocity_lines.emplace_back(p.id, e->line);
          }
        }
        m.ports.push_back(p);
      } else if (s.kind == "source") {
        Keys k(*this, s, {"compartment", "J_S", "T_H"});
        HeatSourceSpec h;
        h.id = s.name;
        if (auto w = k.word("compartment")) h.compartment = *w;
        if (auto f = k.function("J_S")) h.J_S = *f;
        if (auto f = k.function("T_H")) h.T_H = *f;
        m.sources.push_back(h);
      } else if (s.kind == "coupling") {
        Keys k(*this, s, {"between", "kind", "G", "L_HH", "L_HM", "L_MH", "L_MM"});
        CouplingSpec c;
        c.id = s.name;
        if (const Entry* e = k.get("between")) {
          if (e->values.size() != 2) {
            error(e->line, e->values[0].column, "'between' takes two compartment ids");
          } else {
            c.first = e->values[0].text;
            c.second = e->values[1].text;
          }
        } else {
          error(s.line, 0, "[coupling " + s.name + "] is missing 'between'");
        }
        if (auto w = k.word("kind")) {
          if (*w == "diffusion_G") {
            c.kind = CouplingKind::diffusion_G;
            if (auto x = k.number("G")) c.G = *x;
            for (const char* key : {"L_HH", "L_HM", "L_MH", "L_MM"}) {
              if (const Entry* e = k.get(key)) error(e->line, e->column, std::string("'") + key + "' belongs to onsager_2x2 couplings");
            }
          } else if (*w == "onsager_2x2") {
            c.kind = CouplingKind::onsager_2x2;
            if (auto x = k.number("L_HH")) c.L.HH = *x;
            if (auto x = k.number("L_HM")) c.L.HM = *x;
            if (auto x = k.number("L_MH")) c.L.MH = *x;
            if (auto x = k.number("L_MM")) c.L.MM = *x;
            if (const Entry* e = k.get("G")) error(e->line, e->column, "'G' belongs to diffusion_G couplings");
          } else {
            const Entry* e = k.get("kind");
            error(e->line, e->values[0].column, "unknown coupling kind '" + *w + "'; expected diffusion_G or onsager_2x2");
          }
        }
        m.couplings.push_back(c);
      } else if (s.kind == "mechanics") {
        Keys k(*this, s, {"M", "A_section", "lambda_fr", "F_ext_q", "F_ext_x", "q0", "qdot0", "x0", "xdot0"});
        MechanicsSpec ms;
        if (auto x = k.number("M")) ms.M = *x;
        if (auto x = k.number("A_section")) ms.A_section = *x;
        if (auto x = k.number("lambda_fr")) ms.lambda_fr = *x;
        if (auto f = k.function("F_ext_q", ms.F_ext_q)) ms.F_ext_q = *f;
        if (auto f = k.function("F_ext_x", ms.F_ext_x)) ms.F_ext_x = *f;
        if (auto x = k.number("q0")) ms.q0 = *x;
        if (auto x = k.number("qdot0", 0.0)) ms.qdot0 = *x;
        if (auto x = k.number("x0", 0.0)) ms.x0 = *x;
        if (auto x = k.number("xdot0", 0.0)) ms.xdot0 = *x;
        m.mechanics = ms;
      }
    }

    if (!velocities.empty()) {
      if (m.mechanics) {
        m.mechanics->port_velocities = velocities;
      } else {
        for (const auto& [id, line] : velocity_lines) {
          error(line, 0, "port " + id + ": 'velocity' needs a [mechanics] section");
        }
      }
    }

    if (!errors.empty()) return sc;

    for (const auto& p : pending) {
      auto& c = m.compartments[p.index];
      try {
        c.S0 = entropy_from_TNV(m.gas, p.T0, c.N0, c.V);
      } catch (const std::exception& e) {
        error(p.line, 0, "compartment " + c.id + ": cannot derive S0 from T0: " + e.what());
      }
    }

    for (const auto& v : validate(m)) {
      int line = 0;
      if (auto it = header_line.find(v.entity); it != header_line.end()) line = it->second;
      else if (auto it2 = header_line.find("run"); it2 != header_line.end()) line = it2->second;
      error(line, 0, v.message());
    }
    return sc;
  }

 private:
  std::filesystem::path base_;
};

}  // namespace

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  Builder b(base_dir);
  Scenario sc;
  try {
    auto sections = b.read(text);
    sc = b.build(sections);
  } catch (const std::exception& e) {
    b.error(0, 0, std::string("internal parse failure: ") + e.what());
  }
  if (!b.errors.empty()) {
    std::stable_sort(b.errors.begin(), b.errors.end(), [](const Diagnostic& a, const Diagnostic& c) {
      return a.where.line < c.where.line;
    });
    throw ScenarioError(std::move(b.errors));
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError({{{0, 0}, "cannot open scenario file '" + path.string() + "'"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

namespace {

std::string format_function(const TimeFunction& f) {
  switch (f.kind()) {
    case TimeFunction::Kind::constant:
      return "const " + format_number(f.parameters()[0]);
    case TimeFunction::Kind::ramp: {
      const auto& p = f.parameters();
      return "ramp " + format_number(p[0]) + " " + format_number(p[1]) + " " + format_number(p[2]) +
             " " + format_number(p[3]);
    }
    case TimeFunction::Kind::table:
      return "table " + f.source();
  }
  return "";
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  const NetworkModel& m = s.model;
  std::ostringstream os;
  auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
  auto num = [&](const char* k, double v) { kv(k, format_number(v)); };

  os << "[gas]\n";
  num("R", m.gas.R);
  num("c_v", m.gas.c_v);
  num("T_ref", m.gas.T_ref);
  num("p_ref", m.gas.p_ref);
  num("u_ref", m.gas.u_ref);
  num("s_ref", m.gas.s_ref);
  num("molar_mass", m.gas.molar_mass);
  for (const auto& c : m.compartments) {
    os << "\n[compartment " << c.id << "]\n";
    num("V", c.V);
    num("N0", c.N0);
    num("S0", c.S0);
  }
  for (const auto& p : m.ports) {
    os << "\n[port " << p.id << "]\n";
    kv("compartment", p.compartment);
    kv("J", format_function(p.J));
    kv("T_in", format_function(p.T_in));
    kv("p_in", format_function(p.p_in));
    if (m.mechanics) {
      if (const TimeFunction* v = m.mechanics->velocity_of(p.id)) kv("velocity", format_function(*v));
    }
  }
  for (const auto& h : m.sources) {
    os << "\n[source " << h.id << "]\n";
    kv("compartment", h.compartment);
    kv("J_S", format_function(h.J_S));
    kv("T_H", format_function(h.T_H));
  }
  for (const auto& c : m.couplings) {
    os << "\n[coupling " << c.id << "]\n";
    kv("between", c.first + " " + c.second);
    if (c.kind == CouplingKind::diffusion_G) {
      kv("kind", "diffusion_G");
      num("G", c.G);
    } else {
      kv("kind", "onsager_2x2");
      num("L_HH", c.L.HH);
      num("L_HM", c.L.HM);
      num("L_MH", c.L.MH);
      num("L_MM", c.L.MM);
    }
  }
  if (m.mechanics) {
    const auto& ms = *m.mechanics;
    os << "\n[mechanics]\n";
    num("M", ms.M);
    num("A_section", ms.A_section);
    num("lambda_fr", ms.lambda_fr);
    kv("F_ext_q", format_function(ms.F_ext_q));
    kv("F_ext_x", format_function(ms.F_ext_x));
    num("q0", ms.q0);
    num("qdot0", ms.qdot0);
    num("x0", ms.x0);
    num("xdot0", ms.xdot0);
  }
  const auto& io = s.run.integration;
  os << "\n[run]\n";
  kv("class", std::string(to_string(m.system_class)));
  num("t_final", s.run.t_final);
  kv("method", std::string(to_string(io.method)));
  num("h0", io.h0);
  num("h_min", io.h_min);
  num("h_max", io.h_max);
  num("abs_tol", io.abs_tol);
  num("rel_tol", io.rel_tol);
  num("sample_dt", io.sample_dt);
  return os.str();
}

}  // namespace openthermo
