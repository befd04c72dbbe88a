#include "sovi/serialization.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

namespace sovi {
namespace {

using nlohmann::json;

std::size_t positive_size(const json& doc, const char* key) {
  if (!doc.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  const json& v = doc.at(key);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
    throw FormatError(std::string("field '") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

const json& array_of(const json& v, std::size_t n, const std::string& where) {
  if (!v.is_array()) throw FormatError(where + " must be an array");
  if (v.size() != n) {
    throw FormatError(where + " has " + std::to_string(v.size()) + " entries, expected " +
                      std::to_string(n));
  }
  return v;
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) throw FormatError(where + " must be a number");
  return v.get<double>();
}

// Reads a nested [i][a][j] array into a flat ((i * A + a) * S + j) vector.
std::vector<double> read_tensor(const json& doc, const char* key, std::size_t s, std::size_t a) {
  if (!doc.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  std::vector<double> out;
  out.reserve(s * a * s);
  const json& t = array_of(doc.at(key), s, key);
  for (std::size_t i = 0; i < s; ++i) {
    const std::string wi = std::string(key) + "[" + std::to_string(i) + "]";
    const json& ti = array_of(t[i], a, wi);
    for (std::size_t b = 0; b < a; ++b) {
      const std::string wb = wi + "[" + std::to_string(b) + "]";
      const json& tb = array_of(ti[b], s, wb);
      for (std::size_t j = 0; j < s; ++j) {
        out.push_back(number_at(tb[j], wb + "[" + std::to_string(j) + "]"));
      }
    }
  }
  return out;
}

json write_tensor(const std::vector<double>& flat, std::size_t s, std::size_t a) {
  json t = json::array();
  for (std::size_t i = 0; i < s; ++i) {
    json ti = json::array();
    for (std::size_t b = 0; b < a; ++b) {
      const auto first = flat.begin() + static_cast<std::ptrdiff_t>((i * a + b) * s);
      ti.push_back(json(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(s))));
    }
    t.push_back(std::move(ti));
  }
  return t;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text << '\n';
  if (!out) throw FormatError("failed writing " + path.string());
}

}  // namespace

std::string mdp_to_json(const Mdp& m) {
  json doc;
  doc["num_states"] = m.num_states();
  doc["num_actions"] = m.num_actions();
  doc["gamma"] = m.gamma();
  doc["transitions"] = write_tensor(m.transitions(), m.num_states(), m.num_actions());
  doc["rewards"] = write_tensor(m.rewards(), m.num_states(), m.num_actions());
  return doc.dump();
}

Mdp mdp_from_json(const std::string& text) {
  const json doc = parse(text);
  if (!doc.is_object()) throw FormatError("MDP document must be a JSON object");
  const std::size_t s = positive_size(doc, "num_states");
  const std::size_t a = positive_size(doc, "num_actions");
  if (!doc.contains("gamma")) throw FormatError("missing field 'gamma'");
  const double gamma = number_at(doc.at("gamma"), "gamma");
  Mdp m(s, a, read_tensor(doc, "transitions", s, a), read_tensor(doc, "rewards", s, a), gamma);
  if (auto report = validate_mdp(m); !report.ok()) {
    throw FormatError("invalid MDP: " + report.summary());
  }
  return m;
}

void save_mdp(const Mdp& m, std::ostream& out) { out << mdp_to_json(m) << '\n'; }

void save_mdp(const Mdp& m, const std::filesystem::path& path) {
  write_file(path, mdp_to_json(m));
}

Mdp load_mdp(std::istream& in) {
  return mdp_from_json({std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

Mdp load_mdp(const std::filesystem::path& path) { return mdp_from_json(read_file(path)); }

std::string qtable_to_json(const QTable& q) {
  json values = json::array();
  for (std::size_t i = 0; i < q.num_states(); ++i) {
    values.push_back(json(std::vector<double>(q.row(i).begin(), q.row(i).end())));
  }
  json doc;
  doc["num_states"] = q.num_states();
  doc["num_actions"] = q.num_actions();
  doc["values"] = std::move(values);
  return doc.dump();
}

QTable qtable_from_json(const std::string& text) {
  const json doc = parse(text);
  if (!doc.is_object()) throw FormatError("Q-table document must be a JSON object");
  const std::size_t s = positive_size(doc, "num_states");
  const std::size_t a = positive_size(doc, "num_actions");
  if (!doc.contains("values")) throw FormatError("missing field 'values'");
  const json& rows = array_of(doc.at("values"), s, "values");
  QTable q(s, a);
  for (std::size_t i = 0; i < s; ++i) {
    const std::string wi = "values[" + std::to_string(i) + "]";
    const json& row = array_of(rows[i], a, wi);
    for (std::size_t b = 0; b < a; ++b) {
      q(i, b) = number_at(row[b], wi + "[" + std::to_string(b) + "]");
    }
  }
  if (!q.all_finite()) throw FormatError("Q-table has non-finite entries");
  return q;
}

void save_qtable(const QTable& q, const std::filesystem::path& path) {
  write_file(path, qtable_to_json(q));
}

QTable load_qtable(const std::filesystem::path& path) { return qtable_from_json(read_file(path)); }

}  // namespace sovi
