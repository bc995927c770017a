#pragma once

#include "orbichow/iso.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace orbichow {

using Json = nlohmann::ordered_json;

inline Json to_json(const Integer& z) {
  if (z >= std::numeric_limits<std::int64_t>::min() && z <= std::numeric_limits<std::int64_t>::max()) return to_int64(z);
  return z.str();
}

inline Json to_json(const Rational& q) { return to_string(q); }

inline Json to_json(const IntVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Json to_json(const RatVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Json cone_json(const Cone& c) {
  Json a = Json::array();
  for (int i : c) a.push_back(i);
  return a;
}

inline Json group_json(const AbelianGroup& G) {
  Json t = Json::array();
  for (const auto& x : G.torsion()) t.push_back(to_json(x));
  return Json{{"free_rank", G.free_rank()}, {"torsion", t}};
}

inline Json columns_json(const LatticeMap& f) {
  Json a = Json::array();
  for (std::size_t i = 0; i < f.source_rank(); ++i) a.push_back(to_json(f.column(i)));
  return a;
}

inline Json dims_json(const std::map<Rational, std::size_t>& d) {
  Json o = Json::object();
  for (const auto& [k, v] : d) o[to_string(k)] = v;
  return o;
}

struct Instance {
  AbelianGroup group;
  LatticeMap beta;
  std::size_t extra = 0;
  std::optional<std::vector<Cone>> max_cones;
  std::optional<IntVec> theta;
  std::optional<IntVec> psi;
  Json doc;

  ExtendedStackyFan stacky_fan() const {
    if (!max_cones) throw Error(ErrorCode::InvalidInput, "fan: this command needs fan.max_cones");
    return ExtendedStackyFan(beta, beta.source_rank() - extra, *max_cones);
  }

  StackyArrangement arrangement() const {
    if (!theta) throw Error(ErrorCode::InvalidInput, "theta: this command needs theta");
    return StackyArrangement(beta, *theta, psi);
  }
};

namespace io {

inline Error field_error(const std::string& field, const std::string& what) {
  return Error(ErrorCode::InvalidInput, field + ": " + what);
}

inline Integer integer(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::runtime_error&) {
    }
  }
  throw field_error(field, "expected an integer");
}

inline Rational rational(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error&) {
    }
  }
  throw field_error(field, "expected a rational \"p/q\" or an integer");
}

inline IntVec int_vec(const Json& j, const std::string& field, std::optional<std::size_t> len = std::nullopt) {
  if (!j.is_array()) throw field_error(field, "expected an array");
  if (len && j.size() != *len)
    throw field_error(field, "expected " + std::to_string(*len) + " entries, found " + std::to_string(j.size()));
  IntVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(integer(j[i], field + "[" + std::to_string(i) + "]"));
  return v;
}

inline std::size_t count(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw field_error(field, "expected a non-negative integer");
  return j.get<std::size_t>();
}

}  // namespace io

inline Instance parse_instance(const std::string& text) {
  Instance in;
  try {
    in.doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("parse error: ") + e.what());
  }
  const Json& d = in.doc;
  if (!d.is_object()) throw io::field_error("(document)", "expected an object");
  if (!d.contains("group")) throw io::field_error("group", "missing");
  const Json& g = d["group"];
  if (!g.is_object() || !g.contains("free_rank")) throw io::field_error("group.free_rank", "missing");
  IntVec torsion = g.contains("torsion") ? io::int_vec(g["torsion"], "group.torsion") : IntVec{};
  try {
    in.group = AbelianGroup(io::count(g["free_rank"], "group.free_rank"), torsion);
  } catch (const Error& e) {
    throw io::field_error("group.torsion", e.what());
  }
  if (!d.contains("beta") || !d["beta"].is_array()) throw io::field_error("beta", "expected an array of elements");
  std::vector<IntVec> cols;
  for (std::size_t i = 0; i < d["beta"].size(); ++i)
    cols.push_back(io::int_vec(d["beta"][i], "beta[" + std::to_string(i) + "]", in.group.dim()));
  in.beta = LatticeMap(in.group, cols);
  if (d.contains("extra")) in.extra = io::count(d["extra"], "extra");
  if (in.extra > in.beta.source_rank()) throw io::field_error("extra", "exceeds the number of columns");
  const std::size_t n = in.beta.source_rank() - in.extra;
  if (d.contains("fan")) {
    const Json& f = d["fan"];
    if (!f.is_object() || !f.contains("max_cones") || !f["max_cones"].is_array())
      throw io::field_error("fan.max_cones", "expected an array of ray-index lists");
    std::vector<Cone> cones;
    for (std::size_t k = 0; k < f["max_cones"].size(); ++k) {
      const std::string field = "fan.max_cones[" + std::to_string(k) + "]";
      Cone c;
      for (const auto& x : io::int_vec(f["max_cones"][k], field)) {
        if (x < 0 || x >= Integer(n)) throw io::field_error(field, "ray index " + x.str() + " out of range");
        c.push_back(static_cast<int>(to_int64(x)));
      }
      cones.push_back(c);
    }
    in.max_cones = cones;
  }
  if (d.contains("theta")) in.theta = io::int_vec(d["theta"], "theta");
  if (d.contains("psi")) in.psi = io::int_vec(d["psi"], "psi", in.beta.source_rank());
  return in;
}

inline Json box_json(const BoxElement& b) {
  return Json{{"v", to_json(b.v)}, {"cone", cone_json(b.cone)}, {"frac", to_json(b.frac)}, {"age", to_json(b.age)}};
}

inline Json mf_box_json(const MFBoxElement& b) {
  return Json{{"v", to_json(b.v)}, {"sigma", cone_json(b.sigma)}, {"frac", to_json(b.frac)}, {"shift", to_json(b.shift())}};
}

template <class T, class Key>
void sort_by(std::vector<T>& xs, Key key) {
  std::stable_sort(xs.begin(), xs.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
}

// Elements of the deformed ring as [{"coefficient": "p/q", "point": [...]}].
inline DeformedElement deformed_from_json(const ExtendedStackyFan& sf, const Json& j, const std::string& field) {
  if (!j.is_array()) throw io::field_error(field, "expected an array of monomials");
  DeformedElement x;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_object() || !j[i].contains("point")) throw io::field_error(f + ".point", "missing");
    IntVec c = io::int_vec(j[i]["point"], f + ".point", sf.group().dim());
    Rational a = j[i].contains("coefficient") ? io::rational(j[i]["coefficient"], f + ".coefficient") : Rational(1);
    try {
      for (const auto& [k, b] : monomial(sf, c, a)) accumulate(x, k, b);
    } catch (const Error& e) {
      throw io::field_error(f, e.what());
    }
  }
  return x;
}

inline MFElement mf_from_json(const LatticeMap& beta, const Json& j, const std::string& field) {
  if (!j.is_array()) throw io::field_error(field, "expected an array of monomials");
  MFElement x;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_object() || !j[i].contains("point") || !j[i].contains("support"))
      throw io::field_error(f, "expected point and support");
    IntVec c = io::int_vec(j[i]["point"], f + ".point", beta.target().dim());
    Cone s;
    for (const auto& k : io::int_vec(j[i]["support"], f + ".support")) {
      if (k < 0 || k >= Integer(beta.source_rank())) throw io::field_error(f + ".support", "index out of range");
      s.push_back(static_cast<int>(to_int64(k)));
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    Rational a = j[i].contains("coefficient") ? io::rational(j[i]["coefficient"], f + ".coefficient") : Rational(1);
    try {
      accumulate(x, mf_key(beta, c, s), a);
    } catch (const Error& e) {
      throw io::field_error(f, e.what());
    }
  }
  return x;
}

inline Json deformed_json(const DeformedElement& x) {
  Json a = Json::array();
  for (const auto& [c, q] : x) a.push_back(Json{{"coefficient", to_json(q)}, {"point", to_json(c)}});
  return a;
}

inline Json mf_json(const MFElement& x) {
  Json a = Json::array();
  for (const auto& [k, q] : x)
    a.push_back(Json{{"coefficient", to_json(q)}, {"point", to_json(k.first)}, {"support", cone_json(k.second)}});
  return a;
}

inline Json report_json(const IsoReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(Json{{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"detail", c.detail}});
  Json ages = Json::array();
  for (const auto& a : r.ages) ages.push_back(to_json(a));
  return Json{{"passed", r.passed()},
              {"checks", checks},
              {"lawrence_dims", dims_json(r.lawrence_dims)},
              {"hypertoric_dims", dims_json(r.hypertoric_dims)},
              {"box_size", r.box_size},
              {"ages", ages}};
}

}  // namespace orbichow
