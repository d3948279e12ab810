#include "isoclass/json_io.hpp"

#include <limits>

#include "isoclass/error.hpp"

namespace isoclass::json_io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InvalidInput("malformed JSON: " + what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where + " lacks \"" + key + "\"");
  return *it;
}

int int_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) bad(where + "." + key + " must be an integer");
  auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) bad(where + "." + key + " out of range");
  return static_cast<int>(x);
}

const Json& array_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_array()) bad(where + "." + key + " must be an array");
  return v;
}

template <class F>
auto square_entries(const Json& j, F entry) {
  using T = decltype(entry(j));
  const int n = int_field(j, "n", "matrix");
  if (n < 0) bad("matrix.n must be non-negative");
  const Json& rows = array_field(j, "entries", "matrix");
  if (rows.size() != static_cast<std::size_t>(n)) bad("matrix.entries must have n rows");
  std::vector<std::vector<T>> out;
  for (const Json& row : rows) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) bad("matrix rows must have n entries");
    std::vector<T> r;
    for (const Json& x : row) r.push_back(entry(x));
    out.push_back(std::move(r));
  }
  return out;
}

Json signed_blocks_json(const std::vector<SignedBlock>& bs) {
  Json a = Json::array();
  for (const auto& b : bs) a.push_back({{"l", b.l}, {"mult", b.mult}, {"pos", b.pos}, {"neg", b.neg}});
  return a;
}

Json free_blocks_json(const std::vector<FreeBlock>& bs) {
  Json a = Json::array();
  for (const auto& b : bs) a.push_back({{"l", b.l}, {"mult", b.mult}});
  return a;
}

Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Poly& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_json(c));
  return a;
}

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"n", m.rows()}, {"entries", std::move(rows)}};
}

Json to_json(const FactorClass& f) {
  switch (f.kind) {
    case FactorKind::OMinus: return {{"type", "o_minus"}};
    case FactorKind::OPlus: return {{"type", "o_plus"}};
    case FactorKind::UnitQuad: return {{"type", "unit_quad"}, {"a", to_json(f.a)}};
    case FactorKind::RecipPair: return {{"type", "recip_pair"}, {"q", to_json(f.q)}};
  }
  return {};
}

Json to_json(const IsometryInvariant& inv) {
  Json fams = Json::array();
  for (const auto& f : inv.families)
    fams.push_back({{"factor", to_json(f.factor)},
                    {"signed_blocks", signed_blocks_json(f.signed_blocks)},
                    {"free_blocks", free_blocks_json(f.free_blocks)}});
  return {{"families", std::move(fams)}};
}

Json to_json(const GLClassSpec& spec) {
  Json fams = Json::array();
  for (const auto& e : spec.families) {
    Json layers = Json::array();
    for (const auto& c : e.layers) layers.push_back({{"l", c.l}, {"mult", c.mult}});
    fams.push_back({{"factor", to_json(e.factor)}, {"layers", std::move(layers)}});
  }
  return {{"families", std::move(fams)}};
}

Json to_json(const ExactIsometry& iso) { return {{"matrix", to_json(iso.matrix)}, {"gram", to_json(iso.gram)}}; }

Json to_json(const RigidityReport& r, bool closed_form, bool enumerative) {
  Json j;
  j["closed_form_rigid"] = closed_form ? Json(r.closed_form_rigid) : Json(nullptr);
  j["class_count"] = enumerative ? integer_json(r.class_count) : Json(nullptr);
  j["enumerative_rigid"] = enumerative ? Json(r.enumerative_rigid) : Json(nullptr);
  j["agree"] = closed_form && enumerative ? Json(r.agree) : Json(nullptr);
  Json w = Json::array();
  if (enumerative)
    for (const auto& inv : r.witnesses) w.push_back(to_json(inv));
  j["witnesses"] = enumerative ? std::move(w) : Json(nullptr);
  return j;
}

Json to_json(const AnalysisReport& r) {
  Json j = to_json(r.invariant);
  Json d = Json::array();
  for (const auto& x : r.diagnostics) d.push_back({{"quantity", x.quantity}, {"value", x.value}, {"threshold", x.threshold}});
  j["diagnostics"] = std::move(d);
  return j;
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (!j.is_string()) bad("rational must be a string such as \"-3/4\"");
  return parse_rational(j.get<std::string>());
}

Poly poly_from_json(const Json& j) {
  if (!j.is_array()) bad("polynomial must be an array of coefficients");
  std::vector<Rational> c;
  for (const Json& x : j) c.push_back(rational_from_json(x));
  return Poly(std::move(c));
}

Mat mat_from_json(const Json& j) {
  auto rows = square_entries(j, [](const Json& x) { return rational_from_json(x); });
  Mat m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows.size(); ++k) m(i, k) = rows[i][k];
  return m;
}

std::vector<std::vector<double>> float_mat_from_json(const Json& j) {
  return square_entries(j, [](const Json& x) -> double {
    if (x.is_number()) return x.get<double>();
    return rational_from_json(x).get_d();
  });
}

FactorClass factor_from_json(const Json& j) {
  const Json& t = field(j, "type", "factor");
  if (!t.is_string()) bad("factor.type must be a string");
  const auto type = t.get<std::string>();
  if (type == "o_minus") return FactorClass::o_minus();
  if (type == "o_plus") return FactorClass::o_plus();
  if (type == "unit_quad") return FactorClass::unit_quad(rational_from_json(field(j, "a", "factor")));
  if (type == "recip_pair") {
    Poly q = poly_from_json(field(j, "q", "factor"));
    if (q.degree() < 1) bad("factor.q must be non-constant");
    return FactorClass::recip_pair(q.monic());
  }
  bad("unknown factor type \"" + type + "\"");
}

IsometryInvariant invariant_from_json(const Json& j) {
  IsometryInvariant inv;
  for (const Json& f : array_field(j, "families", "invariant")) {
    Family fam{factor_from_json(field(f, "factor", "family")), {}, {}};
    if (f.contains("signed_blocks"))
      for (const Json& b : array_field(f, "signed_blocks", "family"))
        fam.signed_blocks.push_back({int_field(b, "l", "signed_block"), int_field(b, "mult", "signed_block"),
                                     int_field(b, "pos", "signed_block"), int_field(b, "neg", "signed_block")});
    if (f.contains("free_blocks"))
      for (const Json& b : array_field(f, "free_blocks", "family"))
        fam.free_blocks.push_back({int_field(b, "l", "free_block"), int_field(b, "mult", "free_block")});
    inv.families.push_back(std::move(fam));
  }
  return inv;
}

GLClassSpec glclass_from_json(const Json& j) {
  GLClassSpec spec;
  for (const Json& f : array_field(j, "families", "glclass")) {
    GLClassSpec::Entry e{factor_from_json(field(f, "factor", "family")), {}};
    for (const Json& c : array_field(f, "layers", "family"))
      e.layers.push_back({int_field(c, "l", "layer"), int_field(c, "mult", "layer")});
    spec.families.push_back(std::move(e));
  }
  return spec;
}

std::vector<Poly> factors_from_json(const Json& j) {
  if (!j.is_array()) bad("factors must be an array of coefficient arrays");
  std::vector<Poly> out;
  for (const Json& p : j) out.push_back(poly_from_json(p));
  return out;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace isoclass::json_io
