#include "nilsoliton/tensor_json.hpp"

#include "nilsoliton/errors.hpp"

#include <fstream>
#include <sstream>

namespace nilsoliton {

using nlohmann::json;

namespace {

double number_field(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ContractError(field + ": '" + s + "' is not a decimal number");
    }
    if (used != s.size()) throw ContractError(field + ": '" + s + "' is not a decimal number");
    return x;
  }
  throw ContractError(field + ": expected a number or decimal string");
}

int int_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ContractError(std::string("missing field \"") + key + "\"");
  const json& v = j.at(key);
  if (v.is_number_integer()) return v.get<int>();
  const double x = number_field(v, key);
  if (x != static_cast<double>(static_cast<int>(x))) throw ContractError(std::string(key) + ": expected an integer");
  return static_cast<int>(x);
}

}  // namespace

StructureTensor tensor_from_json(const json& j) {
  if (!j.is_object()) throw ContractError("tensor document must be a JSON object");
  const int p = int_field(j, "p");
  const int q = int_field(j, "q");
  if (p < 1 || q < 2) throw ContractError("tensor needs p >= 1 and q >= 2");
  if (!j.contains("matrices") || !j.at("matrices").is_array()) throw ContractError("missing array field \"matrices\"");
  const json& mats = j.at("matrices");
  if (static_cast<int>(mats.size()) != p)
    throw DimensionError("matrices: expected " + std::to_string(p) + " entries, got " + std::to_string(mats.size()));

  std::vector<Matrix> entries;
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const std::string field = "matrices[" + std::to_string(k) + "]";
    const json& flat = mats[k];
    if (!flat.is_array()) throw ContractError(field + ": expected an array of q*q numbers");
    if (static_cast<int>(flat.size()) != q * q)
      throw DimensionError(field + ": expected " + std::to_string(q * q) + " numbers, got " + std::to_string(flat.size()));
    Matrix m(q, q);
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < q; ++c) {
        const std::size_t idx = static_cast<std::size_t>(r * q + c);
        m(r, c) = number_field(flat[idx], field + "[" + std::to_string(idx) + "]");
      }
    entries.push_back(std::move(m));
  }
  StructureTensor t = new_tensor(p, q, std::move(entries));
  if (j.contains("labels")) {
    std::vector<std::string> labels;
    const json& lab = j.at("labels");
    if (lab.is_array()) {
      for (const auto& l : lab) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    } else {
      labels.push_back(lab.is_string() ? lab.get<std::string>() : lab.dump());
    }
    t = t.with_labels(std::move(labels));
  }
  return t;
}

json tensor_to_json(const StructureTensor& c) {
  json mats = json::array();
  for (int k = 0; k < c.p(); ++k) {
    json flat = json::array();
    for (int r = 0; r < c.q(); ++r)
      for (int col = 0; col < c.q(); ++col) flat.push_back(c[k](r, col));
    mats.push_back(std::move(flat));
  }
  json out = {{"p", c.p()}, {"q", c.q()}, {"matrices", std::move(mats)}};
  if (!c.labels().empty()) out["labels"] = c.labels();
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line/column for the message.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ContractError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                        ": malformed JSON: " + e.what());
  }
}

StructureTensor read_tensor_file(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    return tensor_from_json(j);
  } catch (const ContractError& e) {
    throw ContractError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ContractError(field + ": expected a non-empty array of rows");
  const std::size_t n = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw DimensionError(field + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          number_field(j[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

}  // namespace nilsoliton
