#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsskp/det_equiv.hpp"
#include "tsskp/mip.hpp"

namespace tsskp {

class MpsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace mps_detail {

/// Shortest decimal that round-trips the double exactly.
inline std::string number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline std::string number(const Rat& value) { return number(to_double(value)); }

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline double parse_number(const std::string& text, int line_no) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw MpsError("mps line " + std::to_string(line_no) + ": bad number '" + text + "'");
  return value;
}

}  // namespace mps_detail

/// Free-format MPS with an OBJSENSE MAX section, named rows and columns,
/// integer markers, and an explicit BOUNDS section. `negate_for_min` emits
/// the negated objective as a plain minimization instead, for solvers that
/// do not accept OBJSENSE.
inline void export_mps(const MipProblem& problem, const std::vector<std::string>& col_names,
                       const std::string& model_name, const std::string& path,
                       bool negate_for_min = false) {
  const LpProblem& lp = problem.lp;
  if (static_cast<int>(col_names.size()) != lp.var_count)
    throw std::invalid_argument("export_mps: column name count mismatch");

  std::vector<std::string> row_names;
  row_names.reserve(lp.rows.size());
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    row_names.push_back(lp.rows[r].name.empty() ? "r" + std::to_string(r + 1) : lp.rows[r].name);
  }

  // Column-major view of the row entries.
  std::vector<std::vector<std::pair<std::size_t, Rat>>> columns(
      static_cast<std::size_t>(lp.var_count));
  for (std::size_t r = 0; r < lp.rows.size(); ++r)
    for (const auto& [col, coeff] : lp.rows[r].coeffs)
      if (!(coeff == 0)) columns[static_cast<std::size_t>(col)].emplace_back(r, coeff);

  std::ostringstream out;
  out << "NAME " << model_name << "\n";
  if (!negate_for_min) out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N obj\n";
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    char rel = 'L';
    if (lp.rows[r].rel == Relation::Equal) rel = 'E';
    if (lp.rows[r].rel == Relation::GreaterEq) rel = 'G';
    out << " " << rel << " " << row_names[r] << "\n";
  }

  out << "COLUMNS\n";
  bool in_integer_block = false;
  int marker = 0;
  for (int j = 0; j < lp.var_count; ++j) {
    const bool integer = problem.integral[static_cast<std::size_t>(j)];
    if (integer != in_integer_block) {
      out << "    MARKER" << marker++ << " 'MARKER' " << (integer ? "'INTORG'" : "'INTEND'")
          << "\n";
      in_integer_block = integer;
    }
    Rat obj = lp.objective[static_cast<std::size_t>(j)];
    if (negate_for_min) obj = -obj;
    out << "    " << col_names[static_cast<std::size_t>(j)] << " obj " << mps_detail::number(obj)
        << "\n";
    for (const auto& [row, coeff] : columns[static_cast<std::size_t>(j)])
      out << "    " << col_names[static_cast<std::size_t>(j)] << " " << row_names[row] << " "
          << mps_detail::number(coeff) << "\n";
  }
  if (in_integer_block) out << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  for (std::size_t r = 0; r < lp.rows.size(); ++r)
    if (!(lp.rows[r].rhs == 0))
      out << "    rhs " << row_names[r] << " " << mps_detail::number(lp.rows[r].rhs) << "\n";

  out << "BOUNDS\n";
  for (int j = 0; j < lp.var_count; ++j) {
    const std::string& name = col_names[static_cast<std::size_t>(j)];
    const Rat& lo = lp.lower[static_cast<std::size_t>(j)];
    const auto& hi = lp.upper[static_cast<std::size_t>(j)];
    if (hi && *hi == lo) {
      out << " FX bnd " << name << " " << mps_detail::number(lo) << "\n";
      continue;
    }
    if (!(lo == 0)) out << " LO bnd " << name << " " << mps_detail::number(lo) << "\n";
    if (hi)
      out << " UP bnd " << name << " " << mps_detail::number(*hi) << "\n";
    else
      out << " PL bnd " << name << "\n";
  }
  out << "ENDATA\n";

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  file << out.str();
  if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

inline void export_mps(const MipProblem& problem, const VariableMap& map, const std::string& path,
                       bool negate_for_min = false) {
  export_mps(problem, map.names, "tsskp", path, negate_for_min);
}

struct ParsedMps {
  MipProblem problem;
  std::vector<std::string> col_names;
  std::string model_name;
  bool was_minimize = false;  // objective negated into the maximize form
};

/// Reads back free-format MPS as written by export_mps (plus the common BV,
/// UI and LI bound types). Unsupported sections are reported by name.
inline ParsedMps parse_mps(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for reading");

  ParsedMps out;
  LpProblem& lp = out.problem.lp;
  std::vector<bool>& integral = out.problem.integral;

  enum class Section { None, Objsense, Rows, Columns, Rhs, Bounds, Done };
  Section section = Section::None;
  bool maximize = false;
  bool integer_block = false;
  std::string obj_row_name;
  std::map<std::string, std::size_t> row_index;   // constraint rows only
  std::map<std::string, int> col_index;
  std::vector<Relation> row_rel;

  const auto column_of = [&](const std::string& name) {
    const auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    const int col = lp.var_count++;
    col_index.emplace(name, col);
    out.col_names.push_back(name);
    lp.objective.emplace_back(0);
    lp.lower.emplace_back(0);
    lp.upper.emplace_back(std::nullopt);
    integral.push_back(integer_block);
    return col;
  };

  std::string line;
  int line_no = 0;
  std::vector<std::vector<std::pair<int, Rat>>> row_coeffs;
  std::vector<Rat> row_rhs;
  std::vector<std::string> row_names;

  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '*') continue;  // comment
    const auto toks = mps_detail::tokens(line);
    if (toks.empty()) continue;

    const std::string& head = toks[0];
    const bool at_margin = line[0] != ' ' && line[0] != '\t';
    if (at_margin) {
      if (head == "NAME") {
        out.model_name = toks.size() > 1 ? toks[1] : "";
        continue;
      }
      if (head == "OBJSENSE") {
        section = Section::Objsense;
        if (toks.size() > 1) {
          maximize = toks[1] == "MAX" || toks[1] == "MAXIMIZE";
          section = Section::None;
        }
        continue;
      }
      if (head == "ROWS") {
        section = Section::Rows;
        continue;
      }
      if (head == "COLUMNS") {
        section = Section::Columns;
        continue;
      }
      if (head == "RHS") {
        section = Section::Rhs;
        continue;
      }
      if (head == "BOUNDS") {
        section = Section::Bounds;
        continue;
      }
      if (head == "ENDATA") {
        section = Section::Done;
        break;
      }
      if (head == "RANGES" || head == "SOS")
        throw MpsError("mps: unsupported section " + head);
      throw MpsError("mps line " + std::to_string(line_no) + ": unknown section '" + head + "'");
    }

    switch (section) {
      case Section::Objsense:
        maximize = head == "MAX" || head == "MAXIMIZE";
        section = Section::None;
        break;
      case Section::Rows: {
        if (toks.size() != 2)
          throw MpsError("mps line " + std::to_string(line_no) + ": malformed row entry");
        if (head == "N") {
          if (!obj_row_name.empty())
            throw MpsError("mps: multiple objective rows (" + obj_row_name + ", " + toks[1] + ")");
          obj_row_name = toks[1];
        } else if (head == "L" || head == "G" || head == "E") {
          row_index.emplace(toks[1], row_names.size());
          row_names.push_back(toks[1]);
          row_rel.push_back(head == "L" ? Relation::LessEq
                                        : head == "G" ? Relation::GreaterEq : Relation::Equal);
          row_coeffs.emplace_back();
          row_rhs.emplace_back(0);
        } else {
          throw MpsError("mps line " + std::to_string(line_no) + ": unknown row type '" + head +
                         "'");
        }
        break;
      }
      case Section::Columns: {
        if (toks.size() >= 3 && toks[1] == "'MARKER'") {
          if (toks[2] == "'INTORG'")
            integer_block = true;
          else if (toks[2] == "'INTEND'")
            integer_block = false;
          else
            throw MpsError("mps line " + std::to_string(line_no) + ": unknown marker");
          break;
        }
        if (toks.size() < 3 || toks.size() % 2 == 0)
          throw MpsError("mps line " + std::to_string(line_no) + ": malformed column entry");
        const int col = column_of(head);
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          const Rat value = rat_from_double(mps_detail::parse_number(toks[k + 1], line_no));
          if (toks[k] == obj_row_name) {
            lp.objective[static_cast<std::size_t>(col)] = value;
          } else {
            const auto it = row_index.find(toks[k]);
            if (it == row_index.end())
              throw MpsError("mps line " + std::to_string(line_no) + ": unknown row '" + toks[k] +
                             "'");
            row_coeffs[it->second].emplace_back(col, value);
          }
        }
        break;
      }
      case Section::Rhs: {
        if (toks.size() < 3 || toks.size() % 2 == 0)
          throw MpsError("mps line " + std::to_string(line_no) + ": malformed rhs entry");
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          if (toks[k] == obj_row_name)
            throw MpsError("mps: objective-row RHS offsets are not supported");
          const auto it = row_index.find(toks[k]);
          if (it == row_index.end())
            throw MpsError("mps line " + std::to_string(line_no) + ": unknown row '" + toks[k] +
                           "'");
          row_rhs[it->second] = rat_from_double(mps_detail::parse_number(toks[k + 1], line_no));
        }
        break;
      }
      case Section::Bounds: {
        if (toks.size() < 3)
          throw MpsError("mps line " + std::to_string(line_no) + ": malformed bound entry");
        const std::string& kind = head;
        const int col = column_of(toks[2]);
        const auto value = [&] {
          if (toks.size() < 4)
            throw MpsError("mps line " + std::to_string(line_no) + ": bound needs a value");
          return rat_from_double(mps_detail::parse_number(toks[3], line_no));
        };
        if (kind == "UP" || kind == "UI") {
          lp.upper[static_cast<std::size_t>(col)] = value();
          if (kind == "UI") integral[static_cast<std::size_t>(col)] = true;
        } else if (kind == "LO" || kind == "LI") {
          lp.lower[static_cast<std::size_t>(col)] = value();
          if (kind == "LI") integral[static_cast<std::size_t>(col)] = true;
        } else if (kind == "FX") {
          const Rat v = value();
          lp.lower[static_cast<std::size_t>(col)] = v;
          lp.upper[static_cast<std::size_t>(col)] = v;
        } else if (kind == "PL") {
          lp.upper[static_cast<std::size_t>(col)] = std::nullopt;
        } else if (kind == "BV") {
          lp.lower[static_cast<std::size_t>(col)] = 0;
          lp.upper[static_cast<std::size_t>(col)] = 1;
          integral[static_cast<std::size_t>(col)] = true;
        } else {
          throw MpsError("mps: unsupported bound type " + kind);
        }
        break;
      }
      case Section::None:
      case Section::Done:
        throw MpsError("mps line " + std::to_string(line_no) + ": data outside any section");
    }
  }
  if (section != Section::Done) throw MpsError("mps: missing ENDATA");
  if (obj_row_name.empty()) throw MpsError("mps: no objective row");

  for (std::size_t r = 0; r < row_names.size(); ++r)
    lp.rows.push_back({row_names[r], std::move(row_coeffs[r]), row_rel[r], row_rhs[r]});

  if (!maximize) {
    out.was_minimize = true;
    for (Rat& c : lp.objective) c = -c;
  }
  return out;
}

}  // namespace tsskp
