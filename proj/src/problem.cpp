#include "optswitch/problem.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <string>

namespace optswitch {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// strips a trailing '#' comment, honoring double quotes
std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

struct RawSection {
  int line = 0;
  std::map<std::string, std::string> entries;
};

using RawFile = std::map<std::string, RawSection>;

RawFile read_sections(std::string_view text) {
  RawFile file;
  RawSection* current = nullptr;
  std::string current_name;

  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    std::string line = trim(strip_comment(raw));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw Error(ErrorCode::FormatError, "malformed section header at line " + std::to_string(lineno));
      current_name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (current_name.empty())
        throw Error(ErrorCode::FormatError, "empty section name at line " + std::to_string(lineno));
      if (file.count(current_name))
        throw Error(ErrorCode::FormatError,
                    "duplicate section [" + current_name + "] at line " + std::to_string(lineno));
      current = &file[current_name];
      current->line = lineno;
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::FormatError, "expected 'key = value' at line " + std::to_string(lineno));
    if (!current)
      throw Error(ErrorCode::FormatError,
                  "entry outside any section at line " + std::to_string(lineno));
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error(ErrorCode::FormatError, "empty key or value at line " + std::to_string(lineno));
    if (current->entries.count(key))
      throw Error(ErrorCode::FormatError, "duplicate key '" + key + "' in [" + current_name +
                                              "] at line " + std::to_string(lineno));
    current->entries[key] = value;
  }
  return file;
}

class SectionReader {
 public:
  SectionReader(const RawFile& file, const std::string& name, bool required) : name_(name) {
    auto it = file.find(name);
    if (it == file.end()) {
      if (required) throw Error(ErrorCode::FormatError, "missing section [" + name + "]");
      return;
    }
    section_ = &it->second;
  }

  bool present() const { return section_ != nullptr; }

  std::string require(const std::string& key) const {
    auto v = optional(key);
    if (!v) throw Error(ErrorCode::FormatError, "missing key '" + key + "' in [" + name_ + "]");
    used_.insert(key);
    return *v;
  }

  std::optional<std::string> optional(const std::string& key) const {
    if (!section_) return std::nullopt;
    auto it = section_->entries.find(key);
    if (it == section_->entries.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  void reject_unknown() const {
    if (!section_) return;
    for (const auto& [key, value] : section_->entries) {
      if (!used_.count(key))
        throw Error(ErrorCode::FormatError, "unknown key '" + key + "' in [" + name_ + "]");
    }
  }

 private:
  std::string name_;
  const RawSection* section_ = nullptr;
  mutable std::set<std::string> used_;
};

double parse_number(const std::string& raw, const std::string& where) {
  std::string v = unquote(raw);
  double out = 0.0;
  const char* begin = v.data();
  const char* end = v.data() + v.size();
  auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc{} || res.ptr != end)
    throw Error(ErrorCode::FormatError, "expected a number for " + where + ", got '" + raw + "'");
  return out;
}

int parse_int(const std::string& raw, const std::string& where) {
  std::string v = unquote(raw);
  int out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw Error(ErrorCode::FormatError, "expected an integer for " + where + ", got '" + raw + "'");
  return out;
}

Expr parse_expr_value(const std::string& raw, const std::string& where) {
  try {
    return Expr::parse(unquote(raw));
  } catch (const Error& e) {
    throw Error(ErrorCode::ExprError, "in " + where + ": " + e.what());
  }
}

// splits mode indices out of "mode.<j>" / "cost.<j>.<i>" section names; the
// last component must consume the rest, so stray dots fail the integer parse
std::vector<int> section_indices(const std::string& name, const std::string& prefix, int count) {
  std::vector<int> out;
  std::string rest = name.substr(prefix.size());
  for (int c = 0; c < count; ++c) {
    std::string part = rest;
    if (c + 1 < count) {
      std::size_t dot = rest.find('.');
      if (dot == std::string::npos)
        throw Error(ErrorCode::FormatError, "malformed section [" + name + "]");
      part = rest.substr(0, dot);
      rest = rest.substr(dot + 1);
    }
    int idx = 0;
    auto res = std::from_chars(part.data(), part.data() + part.size(), idx);
    if (res.ec != std::errc{} || res.ptr != part.data() + part.size())
      throw Error(ErrorCode::FormatError, "malformed section [" + name + "]");
    out.push_back(idx);
  }
  return out;
}

}  // namespace

const char* finding_code_name(FindingCode code) {
  switch (code) {
    case FindingCode::NegativeCost: return "NegativeCost";
    case FindingCode::FreeLoop: return "FreeLoop";
    case FindingCode::NotClosed: return "NotClosed";
    case FindingCode::TriangleViolated: return "TriangleViolated";
    case FindingCode::TerminalInconsistent: return "TerminalInconsistent";
    case FindingCode::StepTooCoarse: return "StepTooCoarse";
  }
  return "Unknown";
}

ProblemSpec load_spec(std::string_view text) {
  RawFile file = read_sections(text);
  ProblemSpec spec;

  SectionReader problem(file, "problem", true);
  spec.horizon = parse_number(problem.require("T"), "T");
  if (!(spec.horizon > 0.0)) throw Error(ErrorCode::RangeError, "T must be positive");
  spec.modes = parse_int(problem.require("modes"), "modes");
  if (spec.modes < 1) throw Error(ErrorCode::RangeError, "modes must be >= 1");
  int start = 1;
  if (auto v = problem.optional("start_mode")) start = parse_int(*v, "start_mode");
  if (start < 1 || start > spec.modes)
    throw Error(ErrorCode::RangeError, "start_mode must lie in 1.." + std::to_string(spec.modes));
  spec.start_mode = start - 1;
  problem.reject_unknown();

  SectionReader factor(file, "factor", true);
  std::string model = unquote(factor.require("model"));
  if (model == "arithmetic") spec.factor.kind = FactorModel::Kind::Arithmetic;
  else if (model == "geometric") spec.factor.kind = FactorModel::Kind::Geometric;
  else throw Error(ErrorCode::FormatError, "unknown factor model '" + model + "'");
  spec.factor.x0 = parse_number(factor.require("x0"), "x0");
  spec.factor.drift = parse_number(factor.require("drift"), "drift");
  spec.factor.vol = parse_number(factor.require("vol"), "vol");
  if (!(spec.factor.vol > 0.0)) throw Error(ErrorCode::RangeError, "vol must be positive");
  if (spec.factor.kind == FactorModel::Kind::Geometric && !(spec.factor.x0 > 0.0))
    throw Error(ErrorCode::RangeError, "geometric factor requires x0 > 0");
  factor.reject_unknown();

  SectionReader ambiguity(file, "ambiguity", true);
  std::string kind = unquote(ambiguity.require("kind"));
  if (kind == "kappa_ignorance") {
    spec.ambiguity.kind = AmbiguityModel::Kind::KappaIgnorance;
    spec.ambiguity.kappa = parse_number(ambiguity.require("kappa"), "kappa");
    if (spec.ambiguity.kappa < 0.0) throw Error(ErrorCode::RangeError, "kappa must be >= 0");
  } else if (kind == "finite_set") {
    spec.ambiguity.kind = AmbiguityModel::Kind::FiniteSet;
    std::string list = unquote(ambiguity.require("values"));
    std::size_t pos = 0;
    while (pos <= list.size()) {
      std::size_t comma = list.find(',', pos);
      std::string item = trim(std::string_view(list).substr(
          pos, comma == std::string::npos ? comma : comma - pos));
      if (!item.empty()) spec.ambiguity.values.push_back(parse_number(item, "values"));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (spec.ambiguity.values.empty())
      throw Error(ErrorCode::RangeError, "finite_set needs at least one drift value");
  } else {
    throw Error(ErrorCode::FormatError, "unknown ambiguity kind '" + kind + "'");
  }
  ambiguity.reject_unknown();

  spec.psi.resize(spec.modes);
  spec.xi.resize(spec.modes);
  spec.switch_sets.assign(spec.modes, {});
  spec.cost.assign(spec.modes, std::vector<std::optional<Expr>>(spec.modes));

  for (int j = 1; j <= spec.modes; ++j) {
    std::string name = "mode." + std::to_string(j);
    SectionReader mode(file, name, true);
    spec.psi[j - 1] = parse_expr_value(mode.require("psi"), "[" + name + "] psi");
    spec.xi[j - 1] = parse_expr_value(mode.require("xi"), "[" + name + "] xi");
    mode.reject_unknown();
  }

  for (const auto& [name, section] : file) {
    if (name == "problem" || name == "factor" || name == "ambiguity") continue;
    if (name.rfind("mode.", 0) == 0) {
      int j = section_indices(name, "mode.", 1)[0];
      if (j < 1 || j > spec.modes)
        throw Error(ErrorCode::RangeError, "[" + name + "] indexes a mode outside 1.." +
                                               std::to_string(spec.modes));
      continue;  // contents already consumed above
    }
    if (name.rfind("cost.", 0) == 0) {
      auto idx = section_indices(name, "cost.", 2);
      int j = idx[0], i = idx[1];
      if (j < 1 || j > spec.modes || i < 1 || i > spec.modes)
        throw Error(ErrorCode::RangeError, "[" + name + "] indexes a mode outside 1.." +
                                               std::to_string(spec.modes));
      if (j == i)
        throw Error(ErrorCode::FormatError, "[" + name + "] defines a self-switch cost");
      SectionReader cost(file, name, true);
      spec.cost[j - 1][i - 1] = parse_expr_value(cost.require("c"), "[" + name + "] c");
      cost.reject_unknown();
      spec.switch_sets[j - 1].push_back(i - 1);
      continue;
    }
    throw Error(ErrorCode::FormatError, "unknown section [" + name + "]");
  }

  for (auto& targets : spec.switch_sets) std::sort(targets.begin(), targets.end());
  return spec;
}

}  // namespace optswitch
