#include "wce/wce.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "asymptotic.hpp"
#include "condexp.hpp"
#include "criteria.hpp"
#include "errors.hpp"
#include "exponents.hpp"
#include "measure.hpp"
#include "oracle.hpp"
#include "wce_op.hpp"

namespace {

thread_local std::string g_last_error;

int set_error(int code, const char* message) {
  g_last_error = message;
  return code;
}

int null_error() { return set_error(WCE_E_NULL_POINTER, "null pointer argument"); }

int map_code(wce::ErrorCode code) {
  switch (code) {
    case wce::ErrorCode::BadArgument: return WCE_E_BAD_ARGUMENT;
    case wce::ErrorCode::UnknownCell: return WCE_E_UNKNOWN_CELL;
    case wce::ErrorCode::Eval: return WCE_E_EVAL;
    case wce::ErrorCode::Parse: return WCE_E_PARSE;
    case wce::ErrorCode::InvalidExponent: return WCE_E_INVALID_EXPONENT;
    case wce::ErrorCode::RegimeUnsupported: return WCE_E_REGIME_UNSUPPORTED;
    case wce::ErrorCode::NonFiniteData: return WCE_E_NON_FINITE_DATA;
    case wce::ErrorCode::ZeroOperator: return WCE_E_ZERO_OPERATOR;
    case wce::ErrorCode::InsufficientData: return WCE_E_INSUFFICIENT_DATA;
    case wce::ErrorCode::Generator: return WCE_E_GENERATOR;
    case wce::ErrorCode::Config: return WCE_E_CONFIG;
  }
  return WCE_E_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const wce::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WCE_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return WCE_E_INTERNAL;
  }
}

}  // namespace

struct wce_space {
  wce::AtomicSpace space;
};

struct wce_algebra {
  const wce_space* space;
  std::vector<std::vector<std::int64_t>> block_ids;
  std::vector<wce::NonAtomicPanel> panels;
  wce::SubAlgebra alg;
};

struct wce_weight {
  wce::Weight weight;
};

struct wce_analysis {
  wce::AnalysisResult result;
};

struct wce_example {
  wce::ExampleResult result;
};

namespace {

bool same_space(const wce_space* space, const wce_algebra* algebra) {
  return algebra->space == space;
}

int space_mismatch() {
  return set_error(WCE_E_BAD_ARGUMENT, "algebra was created from a different space");
}

wce::AnalysisOptions to_options(const wce_options* o) {
  wce::AnalysisOptions a;
  a.p = o->p;
  a.q = o->q;
  if (o->has_tail) {
    a.tail = wce::TailBound{o->tail_value, o->tail_divergent != 0};
  } else if (o->complete) {
    a.tail = wce::TailBound{0.0, false};
  }
  a.compact_tail.complete = o->complete != 0;
  auto tri = [](int v) -> std::optional<bool> {
    if (v < 0) {
      return std::nullopt;
    }
    return v != 0;
  };
  a.compact_tail.series_converges = tri(o->series_converges);
  a.compact_tail.limit_vanishes = tri(o->limit_vanishes);
  a.compact_tail.sigma_limit_vanishes = tri(o->sigma_limit_vanishes);
  a.run_oracle = o->run_oracle != 0;
  return a;
}

void fill_exponents(const wce::Exponents& e, wce_exponents_info* out) {
  out->p = e.p;
  out->q = e.q;
  out->p_conj = e.p_conj;
  out->q_conj = e.q_conj;
  out->r = e.r;
  out->inv_r = e.inv_r;
  out->regime = static_cast<int>(e.regime);
  out->mass_exponent = e.mass_exponent();
}

void fill_row(const wce::AtomStats& st, const wce::Exponents& e, wce_atom_row* out) {
  out->block_index = st.block_index;
  out->mass = st.mass;
  out->eu = st.eu;
  out->ew = st.ew;
  out->d = st.d;
  out->term = st.term;
  if (e.p > 1.0) {
    out->phi_norm = std::pow(st.eu, 1.0 / e.p_conj) * std::pow(st.mass, 1.0 / e.p_conj);
  } else {
    out->phi_norm = st.eu;
  }
  out->g_norm = std::pow(st.ew, 1.0 / e.q) * std::pow(st.mass, 1.0 / e.q - 1.0);
  out->product = out->phi_norm * out->g_norm;
}

void fill_verdict(const wce::Verdict& v, wce_verdict_info* out) {
  out->status = static_cast<int>(v.status);
  out->partial_sum = v.partial_sum;
  out->terms_used = v.terms_used;
  out->has_tail_bound = v.tail_bound.has_value() ? 1 : 0;
  out->tail_bound = v.tail_bound.value_or(0.0);
  out->has_total = v.total.has_value() ? 1 : 0;
  out->total = v.total.value_or(0.0);
  out->flags = v.flags;
}

void fill_oracle(const wce::OracleReport& o, wce_oracle_info* out) {
  out->formula = o.formula;
  out->ascent = o.ascent;
  out->nuclear_bound = o.nuclear_bound;
  out->max_block_residual = o.max_block_residual;
  out->has_pietsch = o.pietsch_residual.has_value() ? 1 : 0;
  out->pietsch_residual = o.pietsch_residual.value_or(0.0);
}

const wce::Verdict* pick_verdict(const wce::Verdict& nuclearity, const wce::Verdict& compactness,
                                 int which) {
  if (which == 0) {
    return &nuclearity;
  }
  if (which == 1) {
    return &compactness;
  }
  return nullptr;
}

}  // namespace

extern "C" {

const char* wce_status_name(int verdict_status) {
  if (verdict_status < 0 || verdict_status > static_cast<int>(wce::Status::Inconclusive)) {
    return "?";
  }
  return wce::status_name(static_cast<wce::Status>(verdict_status));
}

const char* wce_flag_name(unsigned single_flag) { return wce::flag_name(single_flag); }

const char* wce_regime_name(int regime) {
  if (regime < 0 || regime > static_cast<int>(wce::Regime::Equal)) {
    return "?";
  }
  return wce::regime_name(static_cast<wce::Regime>(regime));
}

void wce_options_init(wce_options* options) {
  if (options == nullptr) {
    return;
  }
  options->p = 2.0;
  options->q = 3.0;
  options->has_tail = 0;
  options->tail_value = 0.0;
  options->tail_divergent = 0;
  options->complete = 0;
  options->series_converges = -1;
  options->limit_vanishes = -1;
  options->sigma_limit_vanishes = -1;
  options->run_oracle = 0;
}

int wce_space_create(const int64_t* cell_ids, const double* masses, size_t cell_count,
                     wce_space** out) {
  if (cell_ids == nullptr || masses == nullptr || out == nullptr) {
    return null_error();
  }
  *out = nullptr;
  return guarded([&] {
    std::vector<wce::Cell> cells;
    cells.reserve(cell_count);
    for (size_t i = 0; i < cell_count; ++i) {
      cells.push_back(wce::Cell{cell_ids[i], masses[i]});
    }
    *out = new wce_space{wce::AtomicSpace(std::move(cells))};
    return WCE_OK;
  });
}

void wce_space_destroy(wce_space* space) { delete space; }

size_t wce_space_cell_count(const wce_space* space) {
  return space == nullptr ? 0 : space->space.cell_count();
}

double wce_space_total_mass(const wce_space* space) {
  return space == nullptr ? 0.0 : space->space.total_mass();
}

int wce_algebra_create(const wce_space* space, const size_t* block_sizes, size_t block_count,
                       const int64_t* cell_ids, wce_algebra** out) {
  if (space == nullptr || block_sizes == nullptr || cell_ids == nullptr || out == nullptr) {
    return null_error();
  }
  *out = nullptr;
  return guarded([&] {
    std::vector<std::vector<std::int64_t>> blocks;
    blocks.reserve(block_count);
    size_t at = 0;
    for (size_t b = 0; b < block_count; ++b) {
      blocks.emplace_back(cell_ids + at, cell_ids + at + block_sizes[b]);
      at += block_sizes[b];
    }
    wce::SubAlgebra alg(space->space, blocks, {});
    *out = new wce_algebra{space, std::move(blocks), {}, std::move(alg)};
    return WCE_OK;
  });
}

int wce_algebra_add_panel(wce_algebra* algebra, const char* panel_id, int u_support_positive,
                          int w_support_positive) {
  if (algebra == nullptr || panel_id == nullptr) {
    return null_error();
  }
  return guarded([&] {
    algebra->panels.push_back(
        wce::NonAtomicPanel{panel_id, u_support_positive != 0, w_support_positive != 0});
    algebra->alg = wce::SubAlgebra(algebra->space->space, algebra->block_ids, algebra->panels);
    return WCE_OK;
  });
}

void wce_algebra_destroy(wce_algebra* algebra) { delete algebra; }

size_t wce_algebra_block_count(const wce_algebra* algebra) {
  return algebra == nullptr ? 0 : algebra->alg.block_count();
}

int wce_weight_table(const int64_t* cell_ids, const double* values, size_t count,
                     wce_weight** out) {
  if (cell_ids == nullptr || values == nullptr || out == nullptr) {
    return null_error();
  }
  *out = nullptr;
  return guarded([&] {
    std::vector<std::pair<std::int64_t, double>> entries;
    entries.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      entries.emplace_back(cell_ids[i], values[i]);
    }
    *out = new wce_weight{wce::Weight::table(std::move(entries))};
    return WCE_OK;
  });
}

int wce_weight_expr(const char* formula, wce_weight** out) {
  if (formula == nullptr || out == nullptr) {
    return null_error();
  }
  *out = nullptr;
  return guarded([&] {
    *out = new wce_weight{wce::Weight::expr(formula)};
    return WCE_OK;
  });
}

void wce_weight_destroy(wce_weight* weight) { delete weight; }

int wce_weight_eval(const wce_weight* weight, int64_t cell_id, double* out) {
  if (weight == nullptr || out == nullptr) {
    return null_error();
  }
  return guarded([&] {
    *out = weight->weight.eval(cell_id);
    return WCE_OK;
  });
}

int wce_analyze(const wce_space* space, const wce_algebra* algebra, const wce_weight* u,
                const wce_weight* w, const wce_options* options, wce_analysis** out) {
  if (space == nullptr || algebra == nullptr || u == nullptr || w == nullptr ||
      options == nullptr || out == nullptr) {
    return null_error();
  }
  if (!same_space(space, algebra)) {
    return space_mismatch();
  }
  *out = nullptr;
  return guarded([&] {
    *out = new wce_analysis{
        wce::analyze_space(space->space, algebra->alg, u->weight, w->weight, to_options(options))};
    return WCE_OK;
  });
}

void wce_analysis_destroy(wce_analysis* analysis) { delete analysis; }

int wce_analysis_exponents(const wce_analysis* analysis, wce_exponents_info* out) {
  if (analysis == nullptr || out == nullptr) {
    return null_error();
  }
  fill_exponents(analysis->result.exps, out);
  return WCE_OK;
}

size_t wce_analysis_row_count(const wce_analysis* analysis) {
  return analysis == nullptr ? 0 : analysis->result.stats.size();
}

int wce_analysis_row(const wce_analysis* analysis, size_t index, wce_atom_row* out) {
  if (analysis == nullptr || out == nullptr) {
    return null_error();
  }
  if (index >= analysis->result.stats.size()) {
    return set_error(WCE_E_BAD_ARGUMENT, "row index out of range");
  }
  fill_row(analysis->result.stats[index], analysis->result.exps, out);
  return WCE_OK;
}

double wce_analysis_nuclear_bound(const wce_analysis* analysis) {
  return analysis == nullptr ? 0.0 : analysis->result.nuclear_bound;
}

int wce_analysis_verdict(const wce_analysis* analysis, int which, wce_verdict_info* out) {
  if (analysis == nullptr || out == nullptr) {
    return null_error();
  }
  const wce::Verdict* v =
      pick_verdict(analysis->result.nuclearity, analysis->result.compactness, which);
  if (v == nullptr) {
    return set_error(WCE_E_BAD_ARGUMENT, "verdict selector must be 0 or 1");
  }
  fill_verdict(*v, out);
  return WCE_OK;
}

size_t wce_analysis_note_count(const wce_analysis* analysis, int which) {
  if (analysis == nullptr) {
    return 0;
  }
  const wce::Verdict* v =
      pick_verdict(analysis->result.nuclearity, analysis->result.compactness, which);
  return v == nullptr ? 0 : v->notes.size();
}

const char* wce_analysis_note(const wce_analysis* analysis, int which, size_t index) {
  if (analysis == nullptr) {
    return nullptr;
  }
  const wce::Verdict* v =
      pick_verdict(analysis->result.nuclearity, analysis->result.compactness, which);
  if (v == nullptr || index >= v->notes.size()) {
    return nullptr;
  }
  return v->notes[index].c_str();
}

int wce_analysis_consistent(const wce_analysis* analysis) {
  return (analysis != nullptr && analysis->result.consistent) ? 1 : 0;
}

int wce_analysis_oracle(const wce_analysis* analysis, wce_oracle_info* out) {
  if (analysis == nullptr || out == nullptr) {
    return null_error();
  }
  if (!analysis->result.oracle) {
    return set_error(WCE_E_INSUFFICIENT_DATA, "analysis ran without the oracle");
  }
  fill_oracle(*analysis->result.oracle, out);
  return WCE_OK;
}

int wce_example_run(const wce_options* options, int64_t terms, wce_example** out) {
  if (options == nullptr || out == nullptr) {
    return null_error();
  }
  *out = nullptr;
  return guarded([&] {
    *out = new wce_example{wce::analyze_example(to_options(options), terms)};
    return WCE_OK;
  });
}

void wce_example_destroy(wce_example* example) { delete example; }

int wce_example_exponents(const wce_example* example, wce_exponents_info* out) {
  if (example == nullptr || out == nullptr) {
    return null_error();
  }
  fill_exponents(example->result.exps, out);
  return WCE_OK;
}

int64_t wce_example_terms(const wce_example* example) {
  return example == nullptr ? 0 : example->result.terms;
}

size_t wce_example_row_count(const wce_example* example) {
  return example == nullptr ? 0 : example->result.stats.size();
}

int wce_example_row(const wce_example* example, size_t index, wce_atom_row* out) {
  if (example == nullptr || out == nullptr) {
    return null_error();
  }
  if (index >= example->result.stats.size()) {
    return set_error(WCE_E_BAD_ARGUMENT, "row index out of range");
  }
  fill_row(example->result.stats[index], example->result.exps, out);
  return WCE_OK;
}

int wce_example_verdict(const wce_example* example, int which, wce_verdict_info* out) {
  if (example == nullptr || out == nullptr) {
    return null_error();
  }
  const wce::Verdict* v =
      pick_verdict(example->result.nuclearity, example->result.compactness, which);
  if (v == nullptr) {
    return set_error(WCE_E_BAD_ARGUMENT, "verdict selector must be 0 or 1");
  }
  fill_verdict(*v, out);
  return WCE_OK;
}

size_t wce_example_note_count(const wce_example* example, int which) {
  if (example == nullptr) {
    return 0;
  }
  const wce::Verdict* v =
      pick_verdict(example->result.nuclearity, example->result.compactness, which);
  return v == nullptr ? 0 : v->notes.size();
}

const char* wce_example_note(const wce_example* example, int which, size_t index) {
  if (example == nullptr) {
    return nullptr;
  }
  const wce::Verdict* v =
      pick_verdict(example->result.nuclearity, example->result.compactness, which);
  if (v == nullptr || index >= v->notes.size()) {
    return nullptr;
  }
  return v->notes[index].c_str();
}

int wce_example_consistent(const wce_example* example) {
  return (example != nullptr && example->result.consistent) ? 1 : 0;
}

int wce_example_sub(const wce_example* example, int which, wce_sub_series_info* out) {
  if (example == nullptr || out == nullptr) {
    return null_error();
  }
  const wce::SubSeries* s = nullptr;
  if (which == 0) {
    s = &example->result.odd;
  } else if (which == 1) {
    s = &example->result.even;
  } else {
    return set_error(WCE_E_BAD_ARGUMENT, "sub-series selector must be 0 or 1");
  }
  out->name = s->name.c_str();
  out->terms = s->terms;
  out->partial_sum = s->partial_sum;
  out->tail_bound = s->tail_bound;
  return WCE_OK;
}

int wce_example_decay(const wce_example* example, double* slope) {
  if (example == nullptr || slope == nullptr) {
    return null_error();
  }
  if (!example->result.decay_slope) {
    return set_error(WCE_E_INSUFFICIENT_DATA, "decay window held fewer than 8 positive terms");
  }
  *slope = *example->result.decay_slope;
  return WCE_OK;
}

int wce_example_oracle(const wce_example* example, wce_oracle_info* out) {
  if (example == nullptr || out == nullptr) {
    return null_error();
  }
  if (!example->result.oracle) {
    return set_error(WCE_E_INSUFFICIENT_DATA, "example ran without the oracle");
  }
  fill_oracle(*example->result.oracle, out);
  return WCE_OK;
}

int wce_block_norm(const wce_space* space, const wce_algebra* algebra, const wce_weight* u,
                   const wce_weight* w, double p, double q, size_t block_index, double* out) {
  if (space == nullptr || algebra == nullptr || u == nullptr || w == nullptr || out == nullptr) {
    return null_error();
  }
  if (!same_space(space, algebra)) {
    return space_mismatch();
  }
  return guarded([&] {
    const auto blocks = algebra->alg.blocks();
    if (block_index >= blocks.size()) {
      wce::fail(wce::ErrorCode::BadArgument, "block index out of range");
    }
    *out = wce::block_norm(u->weight, w->weight, blocks[block_index],
                           wce::Exponents::make(p, q), space->space);
    return WCE_OK;
  });
}

int wce_operator_norm(const wce_space* space, const wce_algebra* algebra, const wce_weight* u,
                      const wce_weight* w, double p, double q, double* formula, double* ascent) {
  if (space == nullptr || algebra == nullptr || u == nullptr || w == nullptr ||
      formula == nullptr || ascent == nullptr) {
    return null_error();
  }
  if (!same_space(space, algebra)) {
    return space_mismatch();
  }
  return guarded([&] {
    const wce::NormBracket nb = wce::operator_norm(u->weight, w->weight, algebra->alg,
                                                   wce::Exponents::make(p, q), space->space);
    *formula = nb.formula;
    *ascent = nb.ascent;
    return WCE_OK;
  });
}

int wce_nuclear_bound(const wce_space* space, const wce_algebra* algebra, const wce_weight* u,
                      const wce_weight* w, double p, double q, double* out) {
  if (space == nullptr || algebra == nullptr || u == nullptr || w == nullptr || out == nullptr) {
    return null_error();
  }
  if (!same_space(space, algebra)) {
    return space_mismatch();
  }
  return guarded([&] {
    *out = wce::nuclear_bound(u->weight, w->weight, algebra->alg, wce::Exponents::make(p, q),
                              space->space);
    return WCE_OK;
  });
}

int wce_trace_norm_hilbert(const wce_space* space, const wce_algebra* algebra,
                           const wce_weight* u, const wce_weight* w, double* out) {
  if (space == nullptr || algebra == nullptr || u == nullptr || w == nullptr || out == nullptr) {
    return null_error();
  }
  if (!same_space(space, algebra)) {
    return space_mismatch();
  }
  return guarded([&] {
    *out = wce::trace_norm_hilbert(u->weight, w->weight, algebra->alg, space->space);
    return WCE_OK;
  });
}

int wce_pietsch_residual(const wce_space* space, const wce_algebra* algebra, const wce_weight* u,
                         const wce_weight* w, double p, double q, double* out) {
  if (space == nullptr || algebra == nullptr || u == nullptr || w == nullptr || out == nullptr) {
    return null_error();
  }
  if (!same_space(space, algebra)) {
    return space_mismatch();
  }
  return guarded([&] {
    *out = wce::pietsch_identity_check(u->weight, w->weight, algebra->alg,
                                       wce::Exponents::make(p, q), space->space);
    return WCE_OK;
  });
}

int wce_cond_exp_blocks(const wce_space* space, const wce_algebra* algebra, const wce_weight* f,
                        double* block_values) {
  if (space == nullptr || algebra == nullptr || f == nullptr || block_values == nullptr) {
    return null_error();
  }
  if (!same_space(space, algebra)) {
    return space_mismatch();
  }
  return guarded([&] {
    const wce::Weight e = wce::cond_exp(f->weight, algebra->alg, space->space);
    const auto blocks = algebra->alg.blocks();
    for (size_t b = 0; b < blocks.size(); ++b) {
      block_values[b] = e.eval(space->space.cell_at(blocks[b].cell_indices.front()).id);
    }
    return WCE_OK;
  });
}

int wce_integrate(const wce_space* space, const wce_weight* f, double* out) {
  if (space == nullptr || f == nullptr || out == nullptr) {
    return null_error();
  }
  return guarded([&] {
    *out = wce::integrate(f->weight, space->space);
    return WCE_OK;
  });
}

int wce_lp_norm(const wce_space* space, const wce_weight* f, double p, double* out) {
  if (space == nullptr || f == nullptr || out == nullptr) {
    return null_error();
  }
  return guarded([&] {
    *out = wce::lp_norm(f->weight, p, space->space);
    return WCE_OK;
  });
}

int wce_apply(const wce_space* space, const wce_algebra* algebra, const wce_weight* u,
              const wce_weight* w, const wce_weight* f, double* cell_values) {
  if (space == nullptr || algebra == nullptr || u == nullptr || w == nullptr || f == nullptr ||
      cell_values == nullptr) {
    return null_error();
  }
  if (!same_space(space, algebra)) {
    return space_mismatch();
  }
  return guarded([&] {
    const wce::Weight g = wce::apply(u->weight, w->weight, algebra->alg, f->weight, space->space);
    const auto cells = space->space.cells();
    for (size_t i = 0; i < cells.size(); ++i) {
      cell_values[i] = g.eval(cells[i].id);
    }
    return WCE_OK;
  });
}

int wce_support_cover(const wce_space* space, const wce_algebra* algebra, const wce_weight* f,
                      size_t* block_indices, size_t capacity, size_t* out_count) {
  if (space == nullptr || algebra == nullptr || f == nullptr || out_count == nullptr) {
    return null_error();
  }
  if (capacity > 0 && block_indices == nullptr) {
    return null_error();
  }
  if (!same_space(space, algebra)) {
    return space_mismatch();
  }
  return guarded([&] {
    const std::vector<std::size_t> cover =
        wce::support_cover(f->weight, algebra->alg, space->space);
    *out_count = cover.size();
    const size_t n = std::min(capacity, cover.size());
    for (size_t i = 0; i < n; ++i) {
      block_indices[i] = cover[i];
    }
    return WCE_OK;
  });
}

const char* wce_version(void) { return "1.0.0"; }

const char* wce_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
