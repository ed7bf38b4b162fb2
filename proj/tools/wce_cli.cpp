// Command-line front end. Talks to the core exclusively through the public
// C API, so it doubles as a living integration test of the shared library.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wce/wce.h"

namespace {

using ordered_json = nlohmann::ordered_json;

// Configuration problem: the message names the offending field. Exit 3.
struct ConfigError {
  std::string message;
};

// Failure reported by the library after configuration was accepted. Exit 4
// (3 when the library itself classified it as a configuration problem).
struct ApiError {
  int code = WCE_E_INTERNAL;
  std::string message;
};

[[noreturn]] void cfg_fail(const std::string& field, const std::string& what) {
  throw ConfigError{field + ": " + what};
}

void api_check(int rc) {
  if (rc != WCE_OK) {
    throw ApiError{rc, wce_last_error()};
  }
}

void cfg_check(int rc, const std::string& field) {
  if (rc != WCE_OK) {
    cfg_fail(field, wce_last_error());
  }
}

// ---- RAII over the opaque handles ------------------------------------

template <typename T, void (*Destroy)(T*)>
class Handle {
 public:
  Handle() = default;
  ~Handle() { reset(); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& other) noexcept : h_(other.h_) { other.h_ = nullptr; }
  Handle& operator=(Handle&& other) noexcept {
    if (this != &other) {
      reset();
      h_ = other.h_;
      other.h_ = nullptr;
    }
    return *this;
  }
  T* get() const { return h_; }
  T** out() {
    reset();
    return &h_;
  }

 private:
  void reset() {
    if (h_ != nullptr) {
      Destroy(h_);
      h_ = nullptr;
    }
  }
  T* h_ = nullptr;
};

using SpaceHandle = Handle<wce_space, wce_space_destroy>;
using AlgebraHandle = Handle<wce_algebra, wce_algebra_destroy>;
using WeightHandle = Handle<wce_weight, wce_weight_destroy>;
using AnalysisHandle = Handle<wce_analysis, wce_analysis_destroy>;
using ExampleHandle = Handle<wce_example, wce_example_destroy>;

// ---- config ingestion -------------------------------------------------

ordered_json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    cfg_fail("config", "cannot open '" + path + "'");
  }
  try {
    return ordered_json::parse(in);
  } catch (const std::exception& e) {
    cfg_fail("config", std::string("invalid JSON: ") + e.what());
  }
}

const ordered_json& need(const ordered_json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    cfg_fail(path + "." + key, "missing");
  }
  return j.at(key);
}

double need_number(const ordered_json& j, const std::string& path) {
  if (!j.is_number()) {
    cfg_fail(path, "expected a number");
  }
  return j.get<double>();
}

std::int64_t need_integer(const ordered_json& j, const std::string& path) {
  if (!j.is_number_integer()) {
    cfg_fail(path, "expected an integer");
  }
  return j.get<std::int64_t>();
}

std::string need_string(const ordered_json& j, const std::string& path) {
  if (!j.is_string()) {
    cfg_fail(path, "expected a string");
  }
  return j.get<std::string>();
}

bool need_bool(const ordered_json& j, const std::string& path) {
  if (!j.is_boolean()) {
    cfg_fail(path, "expected a boolean");
  }
  return j.get<bool>();
}

struct LoadedConfig {
  SpaceHandle space;
  AlgebraHandle algebra;
  WeightHandle u;
  WeightHandle w;
  WeightHandle f;
  bool has_u = false;
  bool has_w = false;
  bool has_f = false;
  wce_options options{};
  // kept for client-side identity checks (condexp residuals)
  std::vector<std::int64_t> cell_ids;
  std::vector<double> cell_masses;
  std::vector<std::vector<std::int64_t>> blocks;
};

WeightHandle load_weight(const ordered_json& j, const std::string& path) {
  WeightHandle h;
  const std::string type = need_string(need(j, "type", path), path + ".type");
  if (type == "table") {
    const ordered_json& values = need(j, "values", path);
    if (!values.is_array()) {
      cfg_fail(path + ".values", "expected an array of [id, value] pairs");
    }
    std::vector<std::int64_t> ids;
    std::vector<double> vals;
    ids.reserve(values.size());
    vals.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const ordered_json& pair = values.at(i);
      const std::string at = path + ".values[" + std::to_string(i) + "]";
      if (!pair.is_array() || pair.size() != 2) {
        cfg_fail(at, "expected an [id, value] pair");
      }
      ids.push_back(need_integer(pair.at(0), at + "[0]"));
      vals.push_back(need_number(pair.at(1), at + "[1]"));
    }
    cfg_check(wce_weight_table(ids.data(), vals.data(), ids.size(), h.out()), path);
  } else if (type == "expr") {
    const std::string formula = need_string(need(j, "formula", path), path + ".formula");
    cfg_check(wce_weight_expr(formula.c_str(), h.out()), path + ".formula");
  } else {
    cfg_fail(path + ".type", "expected \"table\" or \"expr\"");
  }
  return h;
}

LoadedConfig build_from_config(const ordered_json& doc) {
  LoadedConfig lc;
  wce_options_init(&lc.options);

  // -- space --
  const ordered_json& space = need(doc, "space", "");
  const ordered_json& cells = need(space, "cells", ".space");
  if (!cells.is_array() || cells.empty()) {
    cfg_fail(".space.cells", "expected a nonempty array");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string at = ".space.cells[" + std::to_string(i) + "]";
    const ordered_json& c = cells.at(i);
    lc.cell_ids.push_back(need_integer(need(c, "id", at), at + ".id"));
    lc.cell_masses.push_back(need_number(need(c, "mass", at), at + ".mass"));
  }
  cfg_check(wce_space_create(lc.cell_ids.data(), lc.cell_masses.data(), lc.cell_ids.size(),
                             lc.space.out()),
            ".space.cells");

  const ordered_json& blocks = need(space, "blocks", ".space");
  if (!blocks.is_array()) {
    cfg_fail(".space.blocks", "expected an array of id lists");
  }
  std::vector<std::int64_t> flat;
  std::vector<std::size_t> sizes;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::string at = ".space.blocks[" + std::to_string(b) + "]";
    const ordered_json& blk = blocks.at(b);
    if (!blk.is_array() || blk.empty()) {
      cfg_fail(at, "expected a nonempty array of cell ids");
    }
    std::vector<std::int64_t> ids;
    for (std::size_t i = 0; i < blk.size(); ++i) {
      ids.push_back(need_integer(blk.at(i), at + "[" + std::to_string(i) + "]"));
    }
    sizes.push_back(ids.size());
    flat.insert(flat.end(), ids.begin(), ids.end());
    lc.blocks.push_back(std::move(ids));
  }
  cfg_check(wce_algebra_create(lc.space.get(), sizes.data(), sizes.size(), flat.data(),
                               lc.algebra.out()),
            ".space.blocks");

  if (space.contains("panels")) {
    const ordered_json& panels = space.at("panels");
    if (!panels.is_array()) {
      cfg_fail(".space.panels", "expected an array");
    }
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const std::string at = ".space.panels[" + std::to_string(i) + "]";
      const ordered_json& p = panels.at(i);
      const std::string id = need_string(need(p, "id", at), at + ".id");
      const bool us = need_bool(need(p, "u_support", at), at + ".u_support");
      const bool ws = need_bool(need(p, "w_support", at), at + ".w_support");
      cfg_check(wce_algebra_add_panel(lc.algebra.get(), id.c_str(), us ? 1 : 0, ws ? 1 : 0), at);
    }
  }

  // -- weights --
  const ordered_json& weights = need(doc, "weights", "");
  if (weights.contains("u")) {
    lc.u = load_weight(weights.at("u"), ".weights.u");
    lc.has_u = true;
  }
  if (weights.contains("w")) {
    lc.w = load_weight(weights.at("w"), ".weights.w");
    lc.has_w = true;
  }
  if (weights.contains("f")) {
    lc.f = load_weight(weights.at("f"), ".weights.f");
    lc.has_f = true;
  }

  // -- analysis --
  if (doc.contains("analysis")) {
    const ordered_json& an = doc.at("analysis");
    lc.options.p = need_number(need(an, "p", ".analysis"), ".analysis.p");
    lc.options.q = need_number(need(an, "q", ".analysis"), ".analysis.q");
    if (an.contains("terms")) {
      need_integer(an.at("terms"), ".analysis.terms");  // validated, unused: the
      // atom list of an explicit space is already exactly the truncation.
    }
    if (an.contains("tail_bound")) {
      const ordered_json& tb = an.at("tail_bound");
      if (tb.is_string()) {
        if (tb.get<std::string>() != "divergent") {
          cfg_fail(".analysis.tail_bound", "expected a number >= 0 or \"divergent\"");
        }
        lc.options.has_tail = 1;
        lc.options.tail_divergent = 1;
      } else {
        const double v = need_number(tb, ".analysis.tail_bound");
        if (!(v >= 0.0)) {
          cfg_fail(".analysis.tail_bound", "expected a number >= 0 or \"divergent\"");
        }
        if (v == 0.0) {
          lc.options.complete = 1;  // exact truncation: tail 0 and complete list
        } else {
          lc.options.has_tail = 1;
          lc.options.tail_value = v;
        }
      }
    }
    if (an.contains("oracle")) {
      lc.options.run_oracle = need_bool(an.at("oracle"), ".analysis.oracle") ? 1 : 0;
    }
  }
  return lc;
}

// ---- uniform view over analysis / example results --------------------

struct SubView {
  std::string name;
  std::int64_t terms = 0;
  double partial_sum = 0.0;
  double tail_bound = 0.0;
};

struct View {
  std::string mode;    // "config" | "example"
  std::string source;  // config path | example name
  wce_exponents_info exps{};
  std::vector<wce_atom_row> rows;
  std::int64_t total_terms = 0;
  wce_verdict_info nucl{}, comp{};
  std::vector<std::string> nucl_notes, comp_notes;
  bool consistent = false;
  std::optional<double> nuclear_bound;  // config mode only
  std::optional<SubView> odd, even;     // example mode only
  std::optional<double> decay_slope;    // example mode only
  std::optional<wce_oracle_info> oracle;
};

std::vector<std::string> flag_list(unsigned flags) {
  std::vector<std::string> out;
  for (unsigned b = 0; b < 32; ++b) {
    const unsigned bit = 1u << b;
    if ((flags & bit) != 0u) {
      out.emplace_back(wce_flag_name(bit));
    }
  }
  return out;
}

View view_of_analysis(const wce_analysis* a, std::string source) {
  View v;
  v.mode = "config";
  v.source = std::move(source);
  api_check(wce_analysis_exponents(a, &v.exps));
  const std::size_t n = wce_analysis_row_count(a);
  v.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    api_check(wce_analysis_row(a, i, &v.rows[i]));
  }
  v.total_terms = static_cast<std::int64_t>(n);
  api_check(wce_analysis_verdict(a, 0, &v.nucl));
  api_check(wce_analysis_verdict(a, 1, &v.comp));
  for (int which = 0; which < 2; ++which) {
    auto& dst = which == 0 ? v.nucl_notes : v.comp_notes;
    const std::size_t count = wce_analysis_note_count(a, which);
    for (std::size_t i = 0; i < count; ++i) {
      dst.emplace_back(wce_analysis_note(a, which, i));
    }
  }
  v.consistent = wce_analysis_consistent(a) != 0;
  v.nuclear_bound = wce_analysis_nuclear_bound(a);
  wce_oracle_info oi{};
  if (wce_analysis_oracle(a, &oi) == WCE_OK) {
    v.oracle = oi;
  }
  return v;
}

View view_of_example(const wce_example* e, std::string source) {
  View v;
  v.mode = "example";
  v.source = std::move(source);
  api_check(wce_example_exponents(e, &v.exps));
  const std::size_t n = wce_example_row_count(e);
  v.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    api_check(wce_example_row(e, i, &v.rows[i]));
  }
  v.total_terms = wce_example_terms(e);
  api_check(wce_example_verdict(e, 0, &v.nucl));
  api_check(wce_example_verdict(e, 1, &v.comp));
  for (int which = 0; which < 2; ++which) {
    auto& dst = which == 0 ? v.nucl_notes : v.comp_notes;
    const std::size_t count = wce_example_note_count(e, which);
    for (std::size_t i = 0; i < count; ++i) {
      dst.emplace_back(wce_example_note(e, which, i));
    }
  }
  v.consistent = wce_example_consistent(e) != 0;
  for (int which = 0; which < 2; ++which) {
    wce_sub_series_info si{};
    api_check(wce_example_sub(e, which, &si));
    SubView sv{si.name, si.terms, si.partial_sum, si.tail_bound};
    (which == 0 ? v.odd : v.even) = std::move(sv);
  }
  double slope = 0.0;
  if (wce_example_decay(e, &slope) == WCE_OK) {
    v.decay_slope = slope;
  }
  wce_oracle_info oi{};
  if (wce_example_oracle(e, &oi) == WCE_OK) {
    v.oracle = oi;
  }
  return v;
}

// ---- rendering ---------------------------------------------------------

std::string num(double v, const char* format = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

void print_verdict(std::ostream& os, const char* label, const wce_verdict_info& v,
                   const std::vector<std::string>& notes) {
  os << label << ": " << wce_status_name(v.status) << "\n";
  os << "  partial_sum=" << num(v.partial_sum, "%.12g") << "  terms_used=" << v.terms_used;
  if (v.has_tail_bound != 0) {
    os << "  tail_bound<=" << num(v.tail_bound, "%.12g");
  }
  if (v.has_total != 0) {
    os << "  total<=" << num(v.total, "%.12g");
  }
  os << "\n";
  const std::vector<std::string> flags = flag_list(v.flags);
  if (!flags.empty()) {
    os << "  flags:";
    for (const std::string& f : flags) {
      os << " " << f;
    }
    os << "\n";
  }
  for (const std::string& note : notes) {
    os << "  note: " << note << "\n";
  }
}

void print_table(std::ostream& os, const View& v) {
  os << "weighted conditional expectation operator analysis (wce " << wce_version() << ")\n";
  os << "source: " << v.mode << " " << v.source << "\n";
  os << "p=" << num(v.exps.p) << "  q=" << num(v.exps.q) << "  regime="
     << wce_regime_name(v.exps.regime) << "  p'=" << num(v.exps.p_conj)
     << "  q'=" << num(v.exps.q_conj) << "  r=" << num(v.exps.r)
     << "  mass_exponent=" << num(v.exps.mass_exponent) << "\n";
  os << "atoms shown: " << v.rows.size() << " of " << v.total_terms << "\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%6s %13s %13s %13s %13s %13s %13s %13s %13s\n", "atom",
                "mass", "eu", "ew", "d", "term", "phi_norm", "g_norm", "product");
  os << line;
  for (const wce_atom_row& r : v.rows) {
    std::snprintf(line, sizeof(line),
                  "%6zu %13.6g %13.6g %13.6g %13.6g %13.6g %13.6g %13.6g %13.6g\n",
                  static_cast<std::size_t>(r.block_index), r.mass, r.eu, r.ew, r.d, r.term,
                  r.phi_norm, r.g_norm, r.product);
    os << line;
  }
  if (v.nuclear_bound) {
    os << "nuclear_bound=" << num(*v.nuclear_bound, "%.12g") << "\n";
  }
  print_verdict(os, "nuclearity ", v.nucl, v.nucl_notes);
  print_verdict(os, "compactness", v.comp, v.comp_notes);
  os << "consistent : " << (v.consistent ? "yes" : "no") << "\n";
  for (const auto& sub : {v.odd, v.even}) {
    if (sub) {
      os << "sub-series " << sub->name << ": terms=" << sub->terms
         << "  partial_sum=" << num(sub->partial_sum, "%.12g")
         << "  tail_bound<=" << num(sub->tail_bound, "%.12g") << "\n";
    }
  }
  if (v.decay_slope) {
    os << "decay slope (heuristic): " << num(*v.decay_slope, "%.6g") << "\n";
  }
  if (v.oracle) {
    os << "oracle: formula_norm=" << num(v.oracle->formula, "%.12g")
       << "  ascent_norm=" << num(v.oracle->ascent, "%.12g")
       << "  nuclear_bound=" << num(v.oracle->nuclear_bound, "%.12g")
       << "  max_block_residual=" << num(v.oracle->max_block_residual, "%.3g");
    if (v.oracle->has_pietsch != 0) {
      os << "  pietsch_residual=" << num(v.oracle->pietsch_residual, "%.3g");
    }
    os << "\n";
  }
}

ordered_json verdict_json(const wce_verdict_info& v, const std::vector<std::string>& notes) {
  ordered_json j;
  j["status"] = wce_status_name(v.status);
  j["partial_sum"] = v.partial_sum;
  j["terms_used"] = v.terms_used;
  if (v.has_tail_bound != 0) {
    j["tail_bound"] = v.tail_bound;
  }
  if (v.has_total != 0) {
    j["total"] = v.total;
  }
  j["flags"] = flag_list(v.flags);
  j["notes"] = notes;
  return j;
}

ordered_json report_json(const View& v, const ordered_json& overrides) {
  ordered_json j;
  j["tool"] = "wce";
  j["version"] = wce_version();
  j["mode"] = v.mode;
  j["source"] = v.source;
  j["overrides"] = overrides;
  ordered_json e;
  e["p"] = v.exps.p;
  e["q"] = v.exps.q;
  e["p_conj"] = v.exps.p_conj;
  e["q_conj"] = v.exps.q_conj;
  e["r"] = v.exps.r;
  e["inv_r"] = v.exps.inv_r;
  e["regime"] = wce_regime_name(v.exps.regime);
  e["mass_exponent"] = v.exps.mass_exponent;
  j["exponents"] = e;
  j["terms"] = v.total_terms;
  j["nuclearity"] = verdict_json(v.nucl, v.nucl_notes);
  j["compactness"] = verdict_json(v.comp, v.comp_notes);
  j["consistent"] = v.consistent;
  if (v.nuclear_bound) {
    j["nuclear_bound"] = *v.nuclear_bound;
  }
  if (v.odd && v.even) {
    ordered_json subs;
    for (const auto& sub : {v.odd, v.even}) {
      ordered_json s;
      s["terms"] = sub->terms;
      s["partial_sum"] = sub->partial_sum;
      s["tail_bound"] = sub->tail_bound;
      subs[sub->name] = s;
    }
    j["sub_series"] = subs;
  }
  if (v.decay_slope) {
    j["decay_slope"] = *v.decay_slope;
  }
  if (v.oracle) {
    ordered_json o;
    o["formula_norm"] = v.oracle->formula;
    o["ascent_norm"] = v.oracle->ascent;
    o["nuclear_bound"] = v.oracle->nuclear_bound;
    o["max_block_residual"] = v.oracle->max_block_residual;
    if (v.oracle->has_pietsch != 0) {
      o["pietsch_residual"] = v.oracle->pietsch_residual;
    }
    j["oracle"] = o;
  }
  ordered_json atoms = ordered_json::array();
  for (const wce_atom_row& r : v.rows) {
    ordered_json a;
    a["atom"] = r.block_index;
    a["mass"] = r.mass;
    a["eu"] = r.eu;
    a["ew"] = r.ew;
    a["d"] = r.d;
    a["term"] = r.term;
    a["phi_norm"] = r.phi_norm;
    a["g_norm"] = r.g_norm;
    a["product"] = r.product;
    atoms.push_back(a);
  }
  j["atoms"] = atoms;
  return j;
}

std::string render_csv(const View& v) {
  std::string out = "atom,mass,eu,ew,d,term,phi_norm,g_norm,product\n";
  char line[512];
  for (const wce_atom_row& r : v.rows) {
    std::snprintf(line, sizeof(line),
                  "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<std::size_t>(r.block_index), r.mass, r.eu, r.ew, r.d, r.term,
                  r.phi_norm, r.g_norm, r.product);
    out += line;
  }
  return out;
}

void write_report(const std::string& path, const std::string& format, const View& v,
                  const ordered_json& overrides) {
  std::string content;
  if (format == "json") {
    content = report_json(v, overrides).dump(2);
    content += "\n";
  } else if (format == "csv") {
    content = render_csv(v);
  } else {
    std::ostringstream os;
    print_table(os, v);
    content = os.str();
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ApiError{WCE_E_INTERNAL, "cannot open report path '" + path + "'"};
  }
  out << content;
  if (!out) {
    throw ApiError{WCE_E_INTERNAL, "failed writing report to '" + path + "'"};
  }
}

int exit_code_for(const View& v) {
  auto bad = [](int s) { return s == WCE_VERDICT_NOT_NUCLEAR || s == WCE_VERDICT_NOT_COMPACT; };
  auto inconclusive = [](int s) { return s == WCE_VERDICT_INCONCLUSIVE; };
  if (bad(v.nucl.status) || bad(v.comp.status)) {
    return 1;
  }
  if (inconclusive(v.nucl.status) || inconclusive(v.comp.status)) {
    return 2;
  }
  return 0;
}

// ---- subcommand drivers -----------------------------------------------

struct AnalyzeArgs {
  std::string config_path;
  std::string example_name;
  bool has_config = false;
  bool has_example = false;
  std::optional<double> p, q;
  std::optional<std::int64_t> terms;
  bool oracle = false;
  bool oracle_set = false;
  std::string report_path;
  std::string format = "table";
  bool format_set = false;
};

ordered_json overrides_json(const AnalyzeArgs& a) {
  ordered_json o = ordered_json::object();
  if (a.p) {
    o["p"] = *a.p;
  }
  if (a.q) {
    o["q"] = *a.q;
  }
  if (a.terms) {
    o["terms"] = *a.terms;
  }
  if (a.oracle_set) {
    o["oracle"] = a.oracle;
  }
  if (a.format_set) {
    o["format"] = a.format;
  }
  return o;
}

int run_analyze(const AnalyzeArgs& args) {
  View view;
  if (args.has_example) {
    if (args.example_name != "paper") {
      cfg_fail("--example", "unknown example '" + args.example_name + "'");
    }
    wce_options o;
    wce_options_init(&o);
    if (args.p) {
      o.p = *args.p;
    }
    if (args.q) {
      o.q = *args.q;
    }
    o.run_oracle = args.oracle ? 1 : 0;
    const std::int64_t terms = args.terms.value_or(1000);
    ExampleHandle ex;
    api_check(wce_example_run(&o, terms, ex.out()));
    view = view_of_example(ex.get(), args.example_name);
  } else if (args.has_config) {
    const ordered_json doc = load_config(args.config_path);
    LoadedConfig lc = build_from_config(doc);
    if (!lc.has_u) {
      cfg_fail(".weights.u", "missing");
    }
    if (!lc.has_w) {
      cfg_fail(".weights.w", "missing");
    }
    if (!doc.contains("analysis")) {
      cfg_fail(".analysis", "missing");
    }
    if (args.p) {
      lc.options.p = *args.p;
    }
    if (args.q) {
      lc.options.q = *args.q;
    }
    if (args.oracle_set) {
      lc.options.run_oracle = args.oracle ? 1 : 0;
    }
    AnalysisHandle an;
    api_check(wce_analyze(lc.space.get(), lc.algebra.get(), lc.u.get(), lc.w.get(), &lc.options,
                          an.out()));
    view = view_of_analysis(an.get(), args.config_path);
  } else {
    cfg_fail("analyze", "one of --config or --example is required");
  }
  print_table(std::cout, view);
  if (!args.report_path.empty()) {
    write_report(args.report_path, args.format, view, overrides_json(args));
  }
  return exit_code_for(view);
}

int run_condexp(const std::string& config_path) {
  const ordered_json doc = load_config(config_path);
  LoadedConfig lc = build_from_config(doc);
  if (!lc.has_f) {
    cfg_fail(".weights.f", "missing");
  }
  const std::size_t block_count = wce_algebra_block_count(lc.algebra.get());
  std::vector<double> values(block_count, 0.0);
  api_check(wce_cond_exp_blocks(lc.space.get(), lc.algebra.get(), lc.f.get(), values.data()));

  std::cout << "conditional expectation per block (wce " << wce_version() << ")\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%6s %24s %13s %13s %13s\n", "block", "cells", "mass",
                "value", "residual");
  std::cout << line;
  for (std::size_t b = 0; b < block_count; ++b) {
    double mass = 0.0;
    double integral = 0.0;  // client-side sum, checked against value * mass
    std::string cells = "{";
    for (std::size_t i = 0; i < lc.blocks[b].size(); ++i) {
      const std::int64_t id = lc.blocks[b][i];
      double fv = 0.0;
      api_check(wce_weight_eval(lc.f.get(), id, &fv));
      for (std::size_t c = 0; c < lc.cell_ids.size(); ++c) {
        if (lc.cell_ids[c] == id) {
          mass += lc.cell_masses[c];
          integral += fv * lc.cell_masses[c];
          break;
        }
      }
      if (i > 0) {
        cells += ",";
      }
      cells += std::to_string(id);
    }
    cells += "}";
    const double residual = std::abs(values[b] * mass - integral);
    std::snprintf(line, sizeof(line), "%6zu %24s %13.6g %13.6g %13.3g\n", b, cells.c_str(), mass,
                  values[b], residual);
    std::cout << line;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nuclearity and compactness analyzer for weighted conditional expectation "
               "operators between L^p spaces over atomic measure spaces"};
  app.require_subcommand(1);

  AnalyzeArgs args;
  double p_val = 0.0;
  double q_val = 0.0;
  std::int64_t terms_val = 0;

  CLI::App* analyze = app.add_subcommand("analyze", "Run the nuclearity/compactness analysis");
  CLI::Option* opt_config =
      analyze->add_option("--config", args.config_path, "Path to a JSON problem description");
  CLI::Option* opt_example =
      analyze->add_option("--example", args.example_name, "Run a built-in example (name: paper)");
  opt_config->excludes(opt_example);
  opt_example->excludes(opt_config);
  CLI::Option* opt_p = analyze->add_option("--p", p_val, "Domain exponent p (>= 1)");
  CLI::Option* opt_q = analyze->add_option("--q", q_val, "Target exponent q (>= 1)");
  CLI::Option* opt_terms =
      analyze->add_option("--terms", terms_val, "Atom count for the built-in example");
  CLI::Option* opt_oracle =
      analyze->add_flag("--oracle", args.oracle, "Run the brute-force cross-checks");
  analyze->add_option("--report", args.report_path, "Write a machine-readable report here");
  CLI::Option* opt_format = analyze->add_option("--format", args.format, "Report format")
                                ->check(CLI::IsMember({"table", "csv", "json"}));

  std::string condexp_config;
  CLI::App* condexp =
      app.add_subcommand("condexp", "Print the conditional expectation of f per block");
  condexp->add_option("--config", condexp_config, "Path to a JSON problem description")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (analyze->parsed()) {
      args.has_config = opt_config->count() > 0;
      args.has_example = opt_example->count() > 0;
      if (opt_p->count() > 0) {
        args.p = p_val;
      }
      if (opt_q->count() > 0) {
        args.q = q_val;
      }
      if (opt_terms->count() > 0) {
        args.terms = terms_val;
      }
      args.oracle_set = opt_oracle->count() > 0;
      args.format_set = opt_format->count() > 0;
      return run_analyze(args);
    }
    if (condexp->parsed()) {
      return run_condexp(condexp_config);
    }
    std::cerr << "error: no subcommand\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.message << "\n";
    return 3;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code == WCE_E_CONFIG ? 3 : 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
