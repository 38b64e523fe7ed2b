#include "nilsoliton/family_json.hpp"

#include "nilsoliton/errors.hpp"

namespace nilsoliton {

nlohmann::json family_to_json(const FamilySpec& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind);
  j["j"] = s.j;
  j["k"] = s.k;
  j["n"] = s.n;
  j["t"] = s.t;
  j["d"] = s.d;
  j["base_is_j9"] = s.base_is_j9;
  j["adjoin_list"] = nlohmann::json::array();
  for (const auto& a : s.adjoin_list) j["adjoin_list"].push_back(family_to_json(a));
  j["dim_q"] = s.dim_q;
  j["dim_p"] = s.dim_p;
  j["lambda"] = s.lambda;
  j["mu"] = s.mu;
  return j;
}

namespace {

template <class T>
T field(const nlohmann::json& j, const char* name, T fallback, const std::string& where) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ContractError("family spec: bad field " + where + name);
  }
}

FamilySpec parse(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ContractError("family spec: " + (where.empty() ? std::string("root") : where) + " must be an object");
  if (!j.contains("kind")) throw ContractError("family spec: missing field " + where + "kind");
  const auto kind = parse_family_kind(field<std::string>(j, "kind", "", where));
  FamilySpec s;
  switch (kind) {
    case FamilyKind::HeisenbergJ: s = FamilySpec::heisenberg(field(j, "k", 1, where)); break;
    case FamilyKind::Soliton23: s = FamilySpec::soliton23(); break;
    case FamilyKind::BBlocks: s = FamilySpec::b_blocks(field(j, "j", 2, where)); break;
    case FamilyKind::J9: s = FamilySpec::j9(field(j, "j", 3, where)); break;
    case FamilyKind::MinimalD:
      s = FamilySpec::minimal_d(field(j, "dim_q", 4, where), field(j, "dim_p", 6, where), field(j, "lambda", 1.0, where),
                                field(j, "mu", 1.0, where));
      break;
    case FamilyKind::NonEinstein:
      s = FamilySpec::non_einstein(field(j, "j", 2, where), field(j, "k", 2, where), field(j, "n", 1, where),
                                   field(j, "t", std::vector<double>{}, where), field(j, "d", 0, where));
      break;
    case FamilyKind::AdjoinedNonEinstein: {
      FamilySpec base = field(j, "base_is_j9", false, where)
                            ? FamilySpec::j9(field(j, "j", 3, where))
                            : FamilySpec::non_einstein(field(j, "j", 3, where), field(j, "k", 4, where),
                                                       field(j, "n", 1, where), field(j, "t", std::vector<double>{}, where),
                                                       field(j, "d", 0, where));
      std::vector<FamilySpec> list;
      if (j.contains("adjoin_list")) {
        const auto& arr = j.at("adjoin_list");
        if (!arr.is_array()) throw ContractError("family spec: " + where + "adjoin_list must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
          list.push_back(parse(arr[i], where + "adjoin_list[" + std::to_string(i) + "]."));
      }
      s = FamilySpec::adjoined(std::move(base), std::move(list));
      break;
    }
  }
  // Explicit fields win over the kind's defaults so that a round trip is exact.
  s.j = field(j, "j", s.j, where);
  s.k = field(j, "k", s.k, where);
  s.n = field(j, "n", s.n, where);
  s.t = field(j, "t", s.t, where);
  s.d = field(j, "d", s.d, where);
  s.dim_q = field(j, "dim_q", s.dim_q, where);
  s.dim_p = field(j, "dim_p", s.dim_p, where);
  s.lambda = field(j, "lambda", s.lambda, where);
  s.mu = field(j, "mu", s.mu, where);
  s.validate();
  return s;
}

}  // namespace

FamilySpec family_from_json(const nlohmann::json& j) { return parse(j, ""); }

}  // namespace nilsoliton
