#include "orbichow/orbichow.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace orbichow;

namespace {

struct Options {
  std::string file;
  int degree_cap = 64;
  bool multifan = false;
  bool hypertoric = false;
  bool quotients = false;
  int order = 1;
};

std::string read_input(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  ss << f.rdbuf();
  return ss.str();
}

Json gale(const Instance& in) {
  GaleDual g = gale_dual(in.beta);
  return Json{{"dg", group_json(g.dg)}, {"beta_dual", columns_json(g.beta_dual)}};
}

Json box(const Instance& in, const Options& o) {
  Json a = Json::array();
  if (o.multifan) {
    auto b = mf_box(in.beta);
    sort_by(b, [](const MFBoxElement& x) { return std::make_tuple(x.shift(), x.v, x.sigma); });
    for (const auto& x : b) a.push_back(mf_box_json(x));
  } else {
    auto b = box_of_fan(in.stacky_fan());
    sort_by(b, [](const BoxElement& x) { return std::make_pair(x.age, x.v); });
    for (const auto& x : b) a.push_back(box_json(x));
  }
  return Json{{"box", a}};
}

Json basis_json(const ChowPresentation& p) {
  Json a = Json::array();
  for (std::size_t i = 0; i < p.ring.size(); ++i)
    a.push_back(Json{{"degree", to_json(p.ring.basis()[i].degree)}, {"label", p.label(i)}, {"point", to_json(p.lattice_point(i))}});
  return a;
}

Json basis_json(const HypertoricPresentation& p) {
  Json a = Json::array();
  for (std::size_t i = 0; i < p.ring.size(); ++i) {
    MFKey k = p.key(i);
    a.push_back(Json{{"degree", to_json(p.ring.basis()[i].degree)}, {"point", to_json(k.first)}, {"support", cone_json(k.second)}});
  }
  return a;
}

Json betti(const Instance& in, const Options& o) {
  if (o.hypertoric) return Json{{"dims", dims_json(hypertoric_presentation(in.beta, o.degree_cap).ring.dims())}};
  return Json{{"dims", dims_json(build_presentation(in.stacky_fan(), o.degree_cap).ring.dims())}};
}

const Json& operands(const Instance& in, const char* side) {
  if (!in.doc.contains("multiply") || !in.doc["multiply"].contains(side))
    throw Error(ErrorCode::InvalidInput, std::string("multiply.") + side + ": missing");
  return in.doc["multiply"][side];
}

Json multiply(const Instance& in, const Options& o) {
  if (o.hypertoric) {
    auto p = hypertoric_presentation(in.beta, o.degree_cap);
    MFElement a = mf_from_json(in.beta, operands(in, "left"), "multiply.left");
    MFElement b = mf_from_json(in.beta, operands(in, "right"), "multiply.right");
    MFElement c = mf_multiply(in.beta, a, b);
    return Json{{"product", mf_json(c)}, {"normal_form", to_json(p.normal_form(c))}, {"basis", basis_json(p)}};
  }
  auto p = build_presentation(in.stacky_fan(), o.degree_cap);
  DeformedElement a = deformed_from_json(p.sf, operands(in, "left"), "multiply.left");
  DeformedElement b = deformed_from_json(p.sf, operands(in, "right"), "multiply.right");
  DeformedElement c = deformed_product(p.sf, a, b);
  return Json{{"product", deformed_json(c)}, {"normal_form", to_json(p.normal_form(c))}, {"basis", basis_json(p)}};
}

Json inertia(const Instance& in, const Options& o) {
  Json a = Json::array();
  for (const auto& c : inertia_components(in.stacky_fan(), o.order)) {
    Json t = Json::array();
    Rational age = 0;
    for (const auto& b : c.tuple) {
      t.push_back(to_json(b.v));
      age += b.age;
    }
    a.push_back(Json{{"tuple", t}, {"cone", cone_json(c.cone)}, {"age", to_json(age)}});
  }
  return Json{{"order", o.order}, {"components", a}};
}

Json lawrence(const Instance& in) {
  StackyArrangement arr = in.arrangement();
  LawrenceData L = lawrence_fan(arr);
  Json table = Json::array();
  for (const auto& b : L.table)
    table.push_back(Json{{"columns", cone_json(b.columns)}, {"lambda", to_json(b.lambda)}, {"sigma", cone_json(b.sigma)},
                         {"max_cone", cone_json(b.max_cone)}});
  Json cones = Json::array(), nonfaces = Json::array();
  for (const auto& c : L.fan->max_cones()) cones.push_back(cone_json(c));
  const SimplicialFan& fan = *L.fan;
  for (const auto& s : minimal_nonfaces_over(2 * arr.size(), {}, [&](const Cone& c) { return fan.is_face(c); }))
    nonfaces.push_back(cone_json(s));
  return Json{{"group", group_json(L.group)}, {"beta", columns_json(L.beta)}, {"table", table},
              {"max_cones", cones}, {"minimal_nonfaces", nonfaces}};
}

Json hypertoric(const Instance& in, const Options& o) {
  auto p = hypertoric_presentation(in.beta, o.degree_cap);
  Json ind = Json::array(), bx = Json::array();
  for (const auto& s : multifan(in.beta).independent) ind.push_back(cone_json(s));
  for (const auto& b : p.box) bx.push_back(mf_box_json(b));
  return Json{{"independent", ind}, {"box", bx}, {"dims", dims_json(p.ring.dims())}, {"basis", basis_json(p)}};
}

Json check(const Instance& in, bool& ok) {
  Json out = Json::object();
  if (in.max_cones) {
    RegularityReport rep;
    bool reg = is_semiprojective(in.stacky_fan(), &rep);
    ok = ok && reg;
    Json r{{"semiprojective", reg}};
    if (reg) r["weights"] = to_json(rep.weights);
    else r["violation"] = rep.violation;
    out["regularity"] = r;
  }
  if (in.theta) {
    GenericityReport g = check_generic(in.arrangement());
    ok = ok && g.generic;
    Json r{{"generic", g.generic}};
    if (!g.generic) r["witness"] = Json{{"basis", cone_json(g.basis)}, {"column", g.column}, {"lambda", to_json(g.lambda)}};
    out["genericity"] = r;
  }
  if (out.empty()) throw Error(ErrorCode::InvalidInput, "check: the instance has neither fan nor theta");
  return out;
}

Json verify_iso(const Instance& in, const Options& o, bool& ok) {
  StackyArrangement arr = in.arrangement();
  IsoReport r = check_isomorphism(arr, o.degree_cap);
  ok = r.passed();
  Json out = report_json(r);
  if (o.quotients) {
    std::set<Cone> sigmas;
    for (const auto& b : mf_box(arr.beta())) sigmas.insert(b.sigma);
    Json q = Json::array();
    for (const auto& s : sigmas) {
      CoherenceReport c = quotient_coherence(arr, s, o.degree_cap);
      ok = ok && c.passed();
      q.push_back(Json{{"sigma", cone_json(s)}, {"sigma_theta", cone_json(c.sigma_theta)}, {"fans_match", c.fans_match},
                       {"detail", c.detail}, {"iso", report_json(c.iso)}});
    }
    out["quotients"] = q;
  }
  return out;
}

int emit_error(const std::string& code, const std::string& reason, int status) {
  std::cerr << "orbichow: " << reason << "\n";
  std::cout << Json{{"status", "error"}, {"code", code}, {"reason", reason}}.dump(2) << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbifold Chow rings of toric and hypertoric DM stacks"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--degree-cap", o.degree_cap, "largest degree examined before giving up")->check(CLI::PositiveNumber);
  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("file", o.file, "instance document, - for stdin")->required();
    return s;
  };
  sub("gale", "Gale dual DG(beta) and the dual map");
  sub("box", "box of the fan")->add_flag("--multifan", o.multifan, "box of the multi-fan instead");
  sub("betti", "graded dimensions")->add_flag("--hypertoric", o.hypertoric, "hypertoric presentation");
  sub("multiply", "product of multiply.left and multiply.right")->add_flag("--hypertoric", o.hypertoric, "in Q[Delta_beta]");
  sub("inertia", "components of the r-th inertia stack")->add_option("--order", o.order, "r")->required()->check(CLI::PositiveNumber);
  sub("lawrence", "Lawrence lift and fan");
  sub("hypertoric", "hypertoric presentation");
  sub("verify-iso", "compare the Lawrence and hypertoric rings")->add_flag("--quotients", o.quotients, "also every quotient arrangement");
  sub("check", "regularity and genericity verdicts");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    Instance in = parse_instance(read_input(o.file));
    bool ok = true;
    Json body;
    if (cmd == "gale") body = gale(in);
    else if (cmd == "box") body = box(in, o);
    else if (cmd == "betti") body = betti(in, o);
    else if (cmd == "multiply") body = multiply(in, o);
    else if (cmd == "inertia") body = inertia(in, o);
    else if (cmd == "lawrence") body = lawrence(in);
    else if (cmd == "hypertoric") body = hypertoric(in, o);
    else if (cmd == "check") body = check(in, ok);
    else body = verify_iso(in, o, ok);
    Json out{{"command", cmd}, {"status", ok ? "ok" : cmd == "check" ? "invalid" : "failed"}};
    for (auto& [k, v] : body.items()) out[k] = v;
    std::cout << out.dump(2) << "\n";
    if (ok) return 0;
    return cmd == "check" ? 2 : 3;
  } catch (const Error& e) {
    return emit_error(to_string(e.code()), e.what(), e.code() == ErrorCode::VerificationFailed ? 3 : 2);
  }
}
