/*
 * Copyright 2026 The jetlaw Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "jetlaw/cli.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "jetlaw/calculus.hpp"
#include "jetlaw/conslaw.hpp"
#include "jetlaw/error.hpp"
#include "jetlaw/numverify/numverify.hpp"
#include "jetlaw/parser.hpp"
#include "jetlaw/selfadjoint.hpp"

namespace jetlaw::cli {

namespace {

using nlohmann::json;

struct Source {
  EquationSpec spec;
  std::string name;
  bool general_builtin = false;
  bool is_ks = false;
};

const char* pass_word(bool ok) { return ok ? "PASS" : "FAIL"; }

bool same(const NormalForm& a, const NormalForm& b) { return (a - b).is_zero(); }

ConservedVector pair(NormalForm c1, NormalForm c2) {
  ConservedVector v;
  v.c1 = std::move(c1);
  v.c2 = std::move(c2);
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open spec file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<Source> builtin(const std::string& name) {
  if (name == "ks") return Source{ks_equation(), "ks", false, true};
  if (name == "ks-general") return Source{ks_general_equation(), "ks-general", true, false};
  return std::nullopt;
}

Source load_source(const RunConfig& c) {
  if (c.equation.has_value() == c.spec_file.has_value()) {
    throw InvalidInput("give exactly one equation source: --eq <expression|ks|ks-general> or --spec <file>");
  }
  Source s;
  if (c.equation) {
    if (c.equation->find_first_not_of(" \t\n") == std::string::npos) throw InvalidInput("empty equation");
    if (auto b = builtin(*c.equation)) {
      s = *b;
    } else {
      s.spec = EquationSpec::from_expression(parse(*c.equation));
      s.name = *c.equation;
    }
  } else if (auto b = builtin(*c.spec_file)) {
    s = *b;
  } else {
    json j;
    try {
      j = json::parse(read_file(*c.spec_file));
    } catch (const json::exception& e) {
      throw InvalidInput("spec file " + *c.spec_file + " is not valid JSON: " + e.what());
    }
    for (const char* key : {"f", "g", "h"}) {
      if (!j.contains(key) || !j[key].is_string()) {
        throw InvalidInput(std::string("spec file needs a string entry '") + key + "'");
      }
    }
    s.spec = EquationSpec::from_coefficients(parse(j["f"].get<std::string>()), parse(j["g"].get<std::string>()),
                                             parse(j["h"].get<std::string>()));
    s.name = *c.spec_file;
  }
  s.is_ks = s.is_ks || same(s.spec.equation(), ks_equation().equation());
  return s;
}

std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

VectorField parse_symmetry(const std::string& text) {
  for (const VectorField& v : ks_symmetries()) {
    if (v.label == text) return v;
  }
  if (text == "Xu") return VectorField{Expr(0), Expr(0), Expr(1), "Xu"};
  const auto parts = split_top_level(text);
  if (parts.size() != 3) {
    throw InvalidInput("symmetry '" + text + "' is neither X1, X2, X3, Xu nor a triple 'xi_t, xi_x, eta'");
  }
  VectorField v{parse(parts[0]), parse(parts[1]), parse(parts[2]), text};
  v.validate();
  return v;
}

std::vector<VectorField> symmetries_for(const RunConfig& c, const Source& s) {
  std::vector<VectorField> out;
  for (const std::string& text : c.symmetries) out.push_back(parse_symmetry(text));
  if (out.empty()) {
    if (!s.is_ks) throw InvalidInput("no --symmetry given and no default symmetries for this equation");
    out = ks_symmetries();
  }
  return out;
}

NormalForm set_constants(const NormalForm& e, const std::map<std::string, int>& values) {
  return replace_atoms(e, [&](const Atom& a) -> std::optional<NormalForm> {
    if (a.kind() != AtomKind::Parameter) return std::nullopt;
    if (auto it = values.find(a->name); it != values.end()) return NormalForm(it->second);
    return std::nullopt;
  });
}

/// The substitution used for conserved vectors: --phi, or the classified
/// family with its first constant 1 and the others 0.
NormalForm substitution_for(const RunConfig& c, const Source& s) {
  if (c.phi) return normalize(parse(*c.phi));
  if (!s.spec.has_coefficients()) throw InvalidInput("equation has no (f, g, h) form; pass --phi");
  const Classification cl = classify(s.spec);
  std::map<std::string, int> values;
  for (std::size_t i = 0; i < cl.constants.size(); ++i) values[cl.constants[i]] = i == 0 ? 1 : 0;
  return set_constants(cl.phi, values);
}

json inputs_json(const RunConfig& c) {
  json j;
  if (c.equation) j["eq"] = *c.equation;
  if (c.spec_file) j["spec"] = *c.spec_file;
  if (!c.symmetries.empty()) j["symmetry"] = c.symmetries;
  if (c.phi) j["phi"] = *c.phi;
  if (c.grid) j["grid"] = *c.grid;
  if (c.refinements) j["refinements"] = *c.refinements;
  if (c.tfinal) j["tfinal"] = *c.tfinal;
  if (c.corrupt) j["corrupt"] = true;
  return j;
}

Report finish(const RunConfig& c, json results, bool pass, std::string text) {
  Report r;
  r.json = json{{"schema", kReportSchema},
                {"command", c.command},
                {"inputs", inputs_json(c)},
                {"results", std::move(results)},
                {"pass", pass}};
  r.text = std::move(text) + std::string("overall: ") + pass_word(pass) + "\n";
  return r;
}

Report cmd_adjoint(const RunConfig& c) {
  const Source s = load_source(c);
  const NormalForm adj = adjoint_function(s.spec.equation());
  json result{{"name", "adjoint"}, {"equation", s.spec.equation().to_string()}, {"adjoint", adj.to_string()}};
  std::ostringstream text;
  text << "F  = " << s.spec.equation().to_string() << "\n";
  text << "F* = " << adj.to_string() << "\n";
  bool pass = true;
  if (s.general_builtin) {
    pass = same(adj, normalize(ks_general_adjoint_reference()));
    result["reference_match"] = pass;
    text << "reference adjoint of the general equation: " << pass_word(pass) << "\n";
  }
  result["pass"] = pass;
  return finish(c, json::array({result}), pass, text.str());
}

json determining_json(const EquationSpec& spec, std::ostringstream& text) {
  const DeterminingSystem sys = determining_equations(spec);
  const auto printed = printed_determining_equations(spec);
  static const char* const kNames[] = {"phi_u equation", "phi_uu equation", "phi_xu equation", "t-x equation"};
  json items = json::array();
  text << "determining equations (lambda = " << sys.lambda.to_string() << "):\n";
  for (std::size_t i = 0; i < sys.items.size(); ++i) {
    const DeterminingEquation& d = sys.items[i];
    const auto ratio = proportionality(d.normalized, printed[i]);
    std::string status = !ratio ? "mismatch" : *ratio == 1 ? "match" : *ratio == -1 ? "sign mismatch" : "scaled";
    items.push_back({{"monomial", d.monomial},
                     {"raw_factor", d.factor.get_str()},
                     {"equation", d.normalized.to_string()},
                     {"printed", kNames[i]},
                     {"printed_status", status}});
    text << "  [" << d.monomial << "] x" << d.factor.get_str() << ": " << d.normalized.to_string() << " = 0  ("
         << kNames[i] << ": " << status << ")\n";
  }
  const NormalForm& e1 = sys.items[0].normalized;
  const bool du = same(sys.items[1].normalized, partial_derivative(e1, jet_u()));
  const bool dx = same(sys.items[2].normalized, explicit_derivative(e1, Direction::X));
  text << "  item2 = d/du item1: " << pass_word(du) << ", item3 = d/dx item1: " << pass_word(dx) << "\n";
  return json{{"lambda", sys.lambda.to_string()}, {"items", items}, {"item2_is_du_item1", du}, {"item3_is_dx_item1", dx}};
}

Report cmd_classify(const RunConfig& c) {
  const Source s = load_source(c);
  if (!s.spec.has_coefficients()) {
    throw InvalidInput("equation is not of the form u_t - f(u)u_x - g(u)u_xx + h(u)u_x^2");
  }
  const Classification cl = classify(s.spec);
  std::ostringstream text;
  json result{{"name", "classification"},
              {"kind", to_string(cl.kind)},
              {"branch", to_string(cl.branch)},
              {"wronskian", cl.wronskian.to_string()},
              {"phi", cl.phi.to_string()},
              {"constants", cl.constants},
              {"integrand", cl.factor.integrand.to_string()},
              {"closed_form_factor", cl.factor.closed_form},
              {"lambda", cl.check.lambda.to_string()},
              {"residual", cl.check.residual.to_string()},
              {"residual_zero", cl.check.holds()},
              {"strictly_self_adjoint", cl.strictly_self_adjoint}};
  if (cl.a) result["a"] = cl.a->to_string();
  if (cl.b) result["b"] = cl.b->to_string();
  text << "equation: " << s.spec.equation().to_string() << "\n";
  text << "W = f''g' - f'g'' = " << cl.wronskian.to_string() << "\n";
  text << "branch: " << to_string(cl.branch);
  if (cl.a) text << "  (a = " << cl.a->to_string() << ", b = " << cl.b->to_string() << ")";
  text << "\n" << to_string(cl.kind) << " with phi = " << cl.phi.to_string() << "\n";
  text << "residual F*|phi - lambda F: " << cl.check.residual.to_string() << "  " << pass_word(cl.check.holds()) << "\n";
  text << "strictly self-adjoint (phi = u): " << (cl.strictly_self_adjoint ? "yes" : "no") << "\n";
  bool pass = cl.check.holds();
  result["determining_equations"] = determining_json(s.spec, text);
  if (c.phi) {
    const SubstitutionCheck chk = verify_substitution(s.spec.equation(), normalize(parse(*c.phi)));
    result["phi_override"] = {{"phi", *c.phi},
                              {"lambda", chk.lambda.to_string()},
                              {"residual", chk.residual.to_string()},
                              {"residual_zero", chk.holds()}};
    text << "phi = " << *c.phi << ": residual " << chk.residual.to_string() << "  " << pass_word(chk.holds()) << "\n";
    pass = pass && chk.holds();
  }
  result["pass"] = pass;
  return finish(c, json::array({result}), pass, text.str());
}

json vector_json(const ConservedVector& v) {
  return json{{"C1", v.c1.to_string()}, {"C2", v.c2.to_string()}, {"trail", v.trail}};
}

Report cmd_conslaw(const RunConfig& c) {
  const Source s = load_source(c);
  const NormalForm& F = s.spec.equation();
  const NormalForm phi = substitution_for(c, s);
  const bool reference_setting = s.is_ks && same(phi, normalize(parse("exp(-t-x)")));
  json results = json::array();
  std::ostringstream text;
  bool pass = true;
  text << "equation: " << F.to_string() << "\nnu = " << phi.to_string() << "\n";
  for (const VectorField& field : symmetries_for(c, s)) {
    const NormalForm sym_res = symmetry_residual(field, F);
    const ConservedVector raw = conserved_vector(F, field, phi);
    const ConservedVector simple = transfer_dx_terms(raw, F);
    const bool raw_ok = divergence_residual(raw, F).is_zero();
    const bool simple_ok = divergence_residual(simple, F).is_zero();
    const TrivialityReport triv = triviality_check(raw, F);
    json r{{"name", "conserved vector"},
           {"symmetry", field.label},
           {"symmetry_residual", sym_res.to_string()},
           {"raw", vector_json(raw)},
           {"simplified", vector_json(simple)},
           {"raw_divergence_zero", raw_ok},
           {"simplified_divergence_zero", simple_ok},
           {"trivial", triv.trivial},
           {"triviality", triv.description}};
    text << "\n" << field.label << ":\n";
    if (!sym_res.is_zero()) {
      r["warning"] = "not a symmetry; vector has unverified provenance";
      text << "  warning: not a symmetry, residual " << sym_res.to_string() << "\n";
    }
    text << "  raw C1 = " << raw.c1.to_string() << "\n  raw C2 = " << raw.c2.to_string() << "\n";
    text << "  simplified C1 = " << simple.c1.to_string() << "\n  simplified C2 = " << simple.c2.to_string() << "\n";
    text << "  divergence residual zero: raw " << pass_word(raw_ok) << ", simplified " << pass_word(simple_ok) << "\n";
    text << "  triviality: " << triv.description << "\n";
    bool ok = raw_ok && simple_ok;
    if (reference_setting) {
      json refs = json::array();
      for (const ReferenceVector& ref : ks_reference_vectors()) {
        if (ref.label != field.label) continue;
        const ConservedVector p = pair(normalize(parse(ref.c1)), normalize(parse(ref.c2)));
        const bool equiv = equivalent_modulo_trivial(raw, p, F);
        const bool raw_struct = raw.c1 == p.c1 && raw.c2 == p.c2;
        const bool simple_struct = simple.c1 == p.c1 && simple.c2 == p.c2;
        refs.push_back({{"form", ref.simplified ? "simplified" : "as printed"},
                        {"C1", p.c1.to_string()},
                        {"C2", p.c2.to_string()},
                        {"equivalent_modulo_trivial", equiv},
                        {"raw_C1_structural", raw.c1 == p.c1},
                        {"simplified_C1_structural", simple.c1 == p.c1},
                        {"raw_structural", raw_struct},
                        {"simplified_structural", simple_struct}});
        text << "  reference (" << (ref.simplified ? "simplified" : "as printed")
             << "): equivalent modulo F and trivial vectors " << pass_word(equiv)
             << "; C1 structural match raw/simplified " << (raw.c1 == p.c1 ? "yes" : "no") << "/"
             << (simple.c1 == p.c1 ? "yes" : "no") << "; C2 " << (raw.c2 == p.c2 ? "yes" : "no") << "/"
             << (simple.c2 == p.c2 ? "yes" : "no") << "\n";
        ok = ok && equiv;
      }
      r["reference"] = refs;
    }
    r["pass"] = ok;
    pass = pass && ok;
    results.push_back(r);
  }
  return finish(c, results, pass, text.str());
}

Report cmd_symmetry_check(const RunConfig& c) {
  const Source s = load_source(c);
  json results = json::array();
  std::ostringstream text;
  bool pass = true;
  for (const VectorField& field : symmetries_for(c, s)) {
    const NormalForm res = symmetry_residual(field, s.spec.equation());
    const bool ok = res.is_zero();
    results.push_back({{"name", "symmetry"},
                       {"symmetry", field.label},
                       {"xi_t", print(field.xi_t)},
                       {"xi_x", print(field.xi_x)},
                       {"eta", print(field.eta)},
                       {"residual", res.to_string()},
                       {"pass", ok}});
    text << field.label << ": residual " << res.to_string() << "  " << pass_word(ok) << "\n";
    pass = pass && ok;
  }
  return finish(c, results, pass, text.str());
}

Report cmd_verify_numeric(const RunConfig& c) {
  const Source s = load_source(c);
  if (!s.is_ks) throw InvalidInput("numerical verification is implemented for the KS equation only");
  const NormalForm& F = s.spec.equation();
  const NormalForm phi = c.phi ? normalize(parse(*c.phi)) : normalize(parse("exp(-t-x)"));
  std::vector<numverify::NumericVector> vectors;
  vectors.push_back(numverify::prepare(
      "n1", pair(normalize(parse("u")), *conservation_form(F)), F));
  for (const VectorField& field : symmetries_for(c, s)) {
    vectors.push_back(numverify::prepare(field.label, transfer_dx_terms(conserved_vector(F, field, phi), F), F));
  }
  if (c.corrupt) {
    ConservedVector bad = conserved_vector(F, ks_symmetries()[1], phi);
    bad.c2 += normalize(parse("u*exp(-t-x)"));
    vectors.push_back(numverify::prepare("X2+corrupted", bad, F));
  }
  numverify::LadderConfig cfg =
      numverify::sine_benchmark(c.grid.value_or(64), c.refinements.value_or(3), c.tfinal.value_or(1.0));
  const numverify::LadderReport rep = numverify::run_ladder(cfg, vectors);
  if (c.csv) {
    const auto grid = rep.grids.back();
    const auto sol = numverify::solve(cfg.initial, grid);
    const auto res = numverify::discrete_divergence_residual(vectors.front(), sol, true);
    std::ofstream out(*c.csv);
    if (!out) throw InvalidInput("cannot write " + *c.csv);
    numverify::write_residual_csv(out, res);
  }
  json j = numverify::to_json(rep);
  j["name"] = "refinement ladder";
  j["benchmark"] = "u0 = 0.2 + 0.1 sin x, periodic [0, 2 pi]";
  std::ostringstream text;
  text << "grids:";
  for (const auto& g : rep.grids) text << " N=" << g.cells << " (dt=" << g.dt << ")";
  text << "\nkernels: " << rep.kernels << ", " << rep.seconds << " s\n";
  for (const auto& v : rep.vectors) {
    text << v.label << ": residual";
    for (double e : v.residual) text << " " << e;
    text << " orders";
    for (double o : v.residual_orders) text << " " << o;
    text << "; balance";
    for (double e : v.balance) text << " " << e;
    text << " orders";
    for (double o : v.balance_orders) text << " " << o;
    text << "  " << pass_word(v.pass()) << "\n";
  }
  return finish(c, json::array({j}), rep.pass(), text.str());
}

}  // namespace

std::vector<std::string> commands() { return {"adjoint", "classify", "conslaw", "symmetry-check", "verify-numeric"}; }

Report run(const RunConfig& config) {
  const bool numeric_flags = config.grid || config.refinements || config.tfinal || config.corrupt || config.csv;
  if (numeric_flags && config.command != "verify-numeric") {
    throw InvalidInput("--grid, --refinements, --tfinal, --csv and --corrupt apply to verify-numeric only");
  }
  if (config.command == "adjoint") return cmd_adjoint(config);
  if (config.command == "classify") return cmd_classify(config);
  if (config.command == "conslaw") return cmd_conslaw(config);
  if (config.command == "symmetry-check") return cmd_symmetry_check(config);
  if (config.command == "verify-numeric") return cmd_verify_numeric(config);
  throw InvalidInput("unknown command '" + config.command + "'");
}

}  // namespace jetlaw::cli
