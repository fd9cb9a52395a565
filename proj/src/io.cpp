#include "adha/io.hpp"

#include <fstream>
#include <sstream>

namespace adha::io {
namespace {

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw DataError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw DataError(where + ": expected a number");
  return j.get<double>();
}

Vector vector_from(const Json& j, const std::string& where) {
  if (!j.is_array()) throw DataError(where + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], where);
  return v;
}

Matrix matrix_from(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw DataError(where + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = vector_from(j[i], where);
    if (static_cast<std::size_t>(row.size()) != cols) throw DataError(where + ": ragged matrix");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

AffineDynamics dynamics_from(const Json& j, const std::string& where) {
  AffineDynamics d(matrix_from(field(j, "A", where), where + ".A"),
                   vector_from(field(j, "b", where), where + ".b"));
  d.validate();
  return d;
}

std::string fmt_double(double x) {
  // Same shortest round-trip formatting as the JSON writer.
  return Json(x).dump();
}

}  // namespace

Json to_json(const Polytope& p) {
  Json cs = Json::array();
  for (const auto& c : p.constraints()) {
    Json e;
    e["normal"] = vector_json(c.normal);
    e["offset"] = c.offset;
    e["relation"] = c.relation == Relation::kLe ? "le" : "eq";
    cs.push_back(std::move(e));
  }
  Json j;
  j["constraints"] = std::move(cs);
  return j;
}

Json to_json(const AffineDynamics& d) {
  Json j;
  j["A"] = matrix_json(d.matrix);
  j["b"] = vector_json(d.offset);
  return j;
}

Json to_json(const PwaTrajectory& f) {
  Json j;
  j["switch_times"] = f.switch_times();
  Json pieces = Json::array();
  for (const auto& p : f.pieces()) pieces.push_back(to_json(p));
  j["pieces"] = std::move(pieces);
  j["x0"] = vector_json(f.initial_state());
  return j;
}

Json to_json(const Adha& h) {
  Json j;
  j["dimension"] = h.dimension();
  Json locs = Json::object();
  for (const auto& l : h.locations()) {
    Json e = to_json(l.flow);
    e["invariant"] = to_json(l.invariant);
    locs[l.name] = std::move(e);
  }
  j["locations"] = std::move(locs);
  Json ts = Json::array();
  for (const auto& t : h.transitions()) {
    Json e;
    e["from"] = t.from;
    e["to"] = t.to;
    e["guard"] = to_json(t.guard);
    ts.push_back(std::move(e));
  }
  j["transitions"] = std::move(ts);
  return j;
}

Polytope polytope_from_json(const Json& j, int dim) {
  const Json& cs = field(j, "constraints", "polytope");
  if (!cs.is_array()) throw DataError("polytope: constraints must be an array");
  std::vector<LinearConstraint> out;
  for (const auto& c : cs) {
    Vector normal = vector_from(field(c, "normal", "constraint"), "constraint.normal");
    const double offset = number(field(c, "offset", "constraint"), "constraint.offset");
    const Json& rel = field(c, "relation", "constraint");
    if (!rel.is_string() || (rel != "le" && rel != "eq")) {
      throw DataError("constraint: relation must be \"le\" or \"eq\"");
    }
    if (dim < 0) dim = static_cast<int>(normal.size());
    out.emplace_back(std::move(normal), offset, rel == "le" ? Relation::kLe : Relation::kEq);
  }
  if (dim < 0) throw DataError("polytope: dimension unknown for an empty constraint list");
  return Polytope(dim, std::move(out));
}

PwaTrajectory trajectory_from_json(const Json& j) {
  const Json& st = field(j, "switch_times", "trajectory");
  std::vector<double> times;
  if (!st.is_array()) throw DataError("trajectory: switch_times must be an array");
  for (const auto& t : st) times.push_back(number(t, "trajectory.switch_times"));
  const Json& ps = field(j, "pieces", "trajectory");
  if (!ps.is_array()) throw DataError("trajectory: pieces must be an array");
  std::vector<AffineDynamics> pieces;
  for (const auto& p : ps) pieces.push_back(dynamics_from(p, "trajectory.pieces"));
  return {std::move(times), std::move(pieces), vector_from(field(j, "x0", "trajectory"), "x0")};
}

Adha adha_from_json(const Json& j) {
  const Json& dim_j = field(j, "dimension", "automaton");
  if (!dim_j.is_number_integer() || dim_j.get<int>() < 1) {
    throw DataError("automaton: dimension must be a positive integer");
  }
  const int dim = dim_j.get<int>();
  Adha h(dim);
  const Json& locs = field(j, "locations", "automaton");
  if (!locs.is_object()) throw DataError("automaton: locations must be an object");
  for (const auto& [name, l] : locs.items()) {
    const std::string where = "location '" + name + "'";
    Location loc{name, dynamics_from(l, where),
                 polytope_from_json(field(l, "invariant", where), dim)};
    h.add_location(std::move(loc));
  }
  if (j.contains("transitions")) {
    for (const auto& t : j.at("transitions")) {
      const Json& from = field(t, "from", "transition");
      const Json& to = field(t, "to", "transition");
      if (!from.is_string() || !to.is_string()) throw DataError("transition: names must be strings");
      h.set_transition({from.get<std::string>(), to.get<std::string>(),
                        polytope_from_json(field(t, "guard", "transition"), dim)});
    }
  }
  return h;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

TimeSeries parse_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw EmptyInput("series CSV is empty");
  std::size_t cols = 1;
  for (char c : line) cols += c == ',' ? 1 : 0;
  if (cols < 2) throw DataError("series CSV: need a time column and at least one state column");
  TimeSeries s;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw DataError("series CSV row " + std::to_string(row) + ": bad number '" + cell + "'");
      }
    }
    if (vals.size() != cols) {
      throw DataError("series CSV row " + std::to_string(row) + ": expected " +
                      std::to_string(cols) + " columns");
    }
    s.times.push_back(vals[0]);
    s.states.push_back(Eigen::Map<const Vector>(vals.data() + 1, static_cast<Eigen::Index>(cols - 1)));
  }
  s.validate();
  return s;
}

TimeSeries read_series_csv(const std::filesystem::path& path) { return parse_series_csv(read_text(path)); }

std::string series_to_csv(const TimeSeries& s) {
  std::ostringstream out;
  out << "t";
  for (int i = 1; i <= s.dimension(); ++i) out << ",x" << i;
  out << "\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    out << fmt_double(s.times[k]);
    for (Eigen::Index i = 0; i < s.states[k].size(); ++i) out << "," << fmt_double(s.states[k](i));
    out << "\n";
  }
  return out.str();
}

std::string trajectory_to_csv(const PwaTrajectory& f, double pitch) {
  TimeSeries s;
  if (f.num_pieces() == 0) {
    s.times.push_back(0.0);
    s.states.push_back(f.initial_state());
    return series_to_csv(s);
  }
  std::vector<double> ts;
  const auto steps = static_cast<std::size_t>(std::ceil(f.duration() / pitch));
  for (std::size_t k = 0; k <= steps; ++k) ts.push_back(std::min(f.duration(), k * pitch));
  ts.insert(ts.end(), f.switch_times().begin(), f.switch_times().end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           ts.end());
  for (double t : ts) {
    s.times.push_back(t);
    s.states.push_back(evaluate(f, t));
  }
  return series_to_csv(s);
}

std::string sets_to_csv(const std::vector<SReachApprox>& sets, int dim) {
  std::ostringstream out;
  out << "piece,kind,index,relation,offset";
  for (int i = 1; i <= dim; ++i) out << ",a" << i;
  out << "\n";
  for (std::size_t k = 0; k < sets.size(); ++k) {
    for (const auto& [kind, p] :
         {std::pair<const char*, const Polytope*>{"over", &sets[k].over}, {"under", &sets[k].under}}) {
      if (is_empty(*p)) continue;
      std::size_t idx = 0;
      for (const auto& c : p->constraints()) {
        out << k + 1 << "," << kind << "," << idx++ << ","
            << (c.relation == Relation::kLe ? "le" : "eq") << "," << fmt_double(c.offset);
        for (Eigen::Index i = 0; i < c.normal.size(); ++i) out << "," << fmt_double(c.normal(i));
        out << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace adha::io
