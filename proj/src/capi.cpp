#include "freemetric/freemetric.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "freemetric/audit.hpp"
#include "freemetric/casebook.hpp"
#include "freemetric/errors.hpp"
#include "freemetric/lipschitz.hpp"
#include "freemetric/metric.hpp"
#include "freemetric/morphism.hpp"
#include "freemetric/stallings.hpp"

struct fm_basis {
  fm::BasisPtr basis;
};
struct fm_word {
  fm::Word word;
};
struct fm_morphism {
  fm::Endomorphism phi;
};
struct fm_genset {
  fm::GeneratingSet set;
};
struct fm_frontier {
  fm::HolderFrontier f;
};

namespace {

thread_local std::string last_error;

template <class F>
fm_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return FM_OK;
  } catch (const fm::ParseError& e) {
    last_error = e.what();
    return FM_ERR_USAGE;
  } catch (const fm::DomainError& e) {
    last_error = e.what();
    return FM_ERR_DOMAIN;
  } catch (const fm::ResourceError& e) {
    last_error = e.what();
    return FM_ERR_RESOURCE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FM_ERR_RESOURCE;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return FM_ERR_USAGE;
  } catch (const std::exception& e) {
    last_error = std::string("internal error: ") + e.what();
    return FM_ERR_INTERNAL;
  } catch (...) {
    last_error = "internal error";
    return FM_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string("null argument: ") + what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fm_rational to_c(const fm::Rational& r) { return {r.numerator(), r.denominator()}; }

fm::Rational from_c(const fm_rational& r) {
  if (r.den == 0) throw std::invalid_argument("zero denominator");
  return fm::Rational(r.num, r.den);
}

std::vector<fm::Rational> grid_of(const fm_rational* grid, size_t count) {
  if (!grid || count == 0) return fm::default_grid();
  std::vector<fm::Rational> out;
  for (size_t i = 0; i < count; ++i) out.push_back(from_c(grid[i]));
  return out;
}

std::vector<unsigned> radii_of(const unsigned* radii, size_t count) {
  require(radii, "radii");
  return {radii, radii + count};
}

fm::VisualMetricSpec spec_of(const fm_metric_options* opts, const fm::BasisPtr& basis) {
  fm::VisualMetricSpec spec = fm::VisualMetricSpec::standard(basis);
  if (opts) {
    if (opts->genset) spec.genset = opts->genset->set;
    if (opts->basepoint) spec.basepoint = opts->basepoint->word;
    if (opts->gamma) spec.gamma = fm::Gamma::parse(opts->gamma);
  }
  if (!fm::same_basis(spec.genset.basis(), basis) || !fm::same_basis(spec.basepoint.basis(), basis)) {
    throw fm::DomainError("basis mismatch");
  }
  spec.validate();
  return spec;
}

fm::SearchBudget budget_of(uint64_t budget) {
  fm::SearchBudget b;
  if (budget) b.max_expansions = budget;
  return b;
}

fm::AuditOptions audit_of(const fm_audit_options* opts) {
  fm::AuditOptions o;
  if (opts) {
    o.threads = opts->threads ? opts->threads : 1;
    o.seed = opts->seed;
    o.budget = budget_of(opts->budget);
    if (opts->pair_scan) o.method = fm::ScanMethod::PairScan;
    if (opts->max_pairs) o.max_pairs = opts->max_pairs;
  }
  return o;
}

void fill_seminorm(const fm::SeminormEstimate& e, fm_seminorm* out) {
  out->divergent = e.divergent;
  out->stabilized = e.stabilized;
  out->value = e.value;
  out->has_p_hat = e.p_hat.has_value();
  out->p_hat = e.p_hat ? to_c(*e.p_hat) : fm_rational{0, 1};
}

}  // namespace

extern "C" {

const char* fm_version(void) { return "1.0.0"; }

const char* fm_last_error(void) { return last_error.c_str(); }

void fm_string_free(char* s) { std::free(s); }

fm_status fm_rational_parse(const char* text, fm_rational* out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = to_c(fm::parse_rational(text));
  });
}

fm_status fm_basis_parse(const char* names, fm_basis** out) {
  return guarded([&] {
    require(names, "names");
    require(out, "out");
    *out = new fm_basis{fm::Basis::parse(names)};
  });
}

void fm_basis_free(fm_basis* basis) { delete basis; }

size_t fm_basis_rank(const fm_basis* basis) { return basis ? basis->basis->rank() : 0; }

fm_status fm_word_parse(const fm_basis* basis, const char* text, fm_word** out) {
  return guarded([&] {
    require(basis, "basis");
    require(text, "text");
    require(out, "out");
    *out = new fm_word{fm::parse_word(basis->basis, text)};
  });
}

void fm_word_free(fm_word* w) { delete w; }

size_t fm_word_length(const fm_word* w) { return w ? w->word.size() : 0; }

fm_status fm_word_format(const fm_word* w, char** out) {
  return guarded([&] {
    require(w, "word");
    require(out, "out");
    *out = dup_string(fm::format_word(w->word));
  });
}

fm_status fm_word_multiply(const fm_word* u, const fm_word* v, fm_word** out) {
  return guarded([&] {
    require(u, "u");
    require(v, "v");
    require(out, "out");
    *out = new fm_word{u->word * v->word};
  });
}

fm_status fm_word_invert(const fm_word* u, fm_word** out) {
  return guarded([&] {
    require(u, "u");
    require(out, "out");
    *out = new fm_word{fm::invert(u->word)};
  });
}

int fm_word_equal(const fm_word* u, const fm_word* v) { return u && v && u->word == v->word; }

fm_status fm_word_cyclic_length(const fm_word* u, size_t* out) {
  return guarded([&] {
    require(u, "u");
    require(out, "out");
    *out = fm::cyclic_length(u->word);
  });
}

fm_status fm_word_is_conjugate(const fm_word* u, const fm_word* v, int* out) {
  return guarded([&] {
    require(u, "u");
    require(v, "v");
    require(out, "out");
    *out = fm::is_conjugate(u->word, v->word);
  });
}

fm_status fm_word_is_primitive(const fm_word* u, int* out) {
  return guarded([&] {
    require(u, "u");
    require(out, "out");
    *out = fm::is_primitive(u->word);
  });
}

fm_status fm_morphism_parse_json(const char* json, fm_morphism** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new fm_morphism{fm::parse_morphism_json(json)};
  });
}

fm_status fm_morphism_from_images(const fm_basis* basis, const char* const* images, size_t count,
                                  fm_morphism** out) {
  return guarded([&] {
    require(basis, "basis");
    require(images, "images");
    require(out, "out");
    if (count != basis->basis->rank()) {
      throw std::invalid_argument("expected " + std::to_string(basis->basis->rank()) +
                                  " images, got " + std::to_string(count));
    }
    std::vector<fm::Word> words;
    for (size_t i = 0; i < count; ++i) {
      require(images[i], "image");
      words.push_back(fm::parse_word(basis->basis, images[i]));
    }
    *out = new fm_morphism{fm::Endomorphism(basis->basis, std::move(words))};
  });
}

void fm_morphism_free(fm_morphism* m) { delete m; }

fm_status fm_morphism_to_json(const fm_morphism* m, char** out) {
  return guarded([&] {
    require(m, "morphism");
    require(out, "out");
    *out = dup_string(fm::format_morphism_json(m->phi));
  });
}

fm_status fm_morphism_format(const fm_morphism* m, char** out) {
  return guarded([&] {
    require(m, "morphism");
    require(out, "out");
    *out = dup_string(fm::format_morphism(m->phi));
  });
}

fm_status fm_morphism_basis(const fm_morphism* m, fm_basis** out) {
  return guarded([&] {
    require(m, "morphism");
    require(out, "out");
    *out = new fm_basis{m->phi.basis()};
  });
}

fm_status fm_morphism_compose(const fm_morphism* first, const fm_morphism* second,
                              fm_morphism** out) {
  return guarded([&] {
    require(first, "first");
    require(second, "second");
    require(out, "out");
    *out = new fm_morphism{fm::compose(first->phi, second->phi)};
  });
}

fm_status fm_morphism_apply(const fm_morphism* m, const fm_word* w, fm_word** out) {
  return guarded([&] {
    require(m, "morphism");
    require(w, "word");
    require(out, "out");
    if (!fm::same_basis(m->phi.basis(), w->word.basis())) throw fm::DomainError("basis mismatch");
    *out = new fm_word{m->phi.apply(w->word)};
  });
}

fm_status fm_morphism_invert(const fm_morphism* m, fm_morphism** out) {
  return guarded([&] {
    require(m, "morphism");
    require(out, "out");
    *out = new fm_morphism{fm::invert_automorphism(m->phi)};
  });
}

fm_status fm_morphism_is_automorphism(const fm_morphism* m, int* out) {
  return guarded([&] {
    require(m, "morphism");
    require(out, "out");
    *out = fm::is_automorphism(m->phi);
  });
}

int fm_morphism_equal(const fm_morphism* a, const fm_morphism* b) {
  return a && b && a->phi == b->phi;
}

fm_status fm_genset_parse(const char* text, fm_genset** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new fm_genset{fm::parse_genset(text)};
  });
}

fm_status fm_genset_from_basis(const fm_basis* basis, fm_genset** out) {
  return guarded([&] {
    require(basis, "basis");
    require(out, "out");
    *out = new fm_genset{fm::GeneratingSet::from_basis(basis->basis)};
  });
}

void fm_genset_free(fm_genset* s) { delete s; }

fm_status fm_dist(const fm_metric_options* opts, const fm_word* g, const fm_word* h,
                  uint64_t* out) {
  return guarded([&] {
    require(g, "g");
    require(h, "h");
    require(out, "out");
    const auto spec = spec_of(opts, g->word.basis());
    if (spec.genset.is_basis()) {
      if (!fm::same_basis(g->word.basis(), h->word.basis())) throw fm::DomainError("basis mismatch");
      *out = fm::dist_basis(g->word, h->word);
    } else {
      *out = fm::dist_genset(spec.genset, g->word, h->word, budget_of(opts ? opts->budget : 0));
    }
  });
}

fm_status fm_gromov(const fm_metric_options* opts, const fm_word* g, const fm_word* h,
                    fm_rational* out) {
  return guarded([&] {
    require(g, "g");
    require(h, "h");
    require(out, "out");
    const auto spec = spec_of(opts, g->word.basis());
    *out = to_c(fm::gromov_product(spec, g->word, h->word, budget_of(opts ? opts->budget : 0)));
  });
}

fm_status fm_sigma(const fm_metric_options* opts, const fm_word* g, const fm_word* h, char** out) {
  return guarded([&] {
    require(g, "g");
    require(h, "h");
    require(out, "out");
    const auto spec = spec_of(opts, g->word.basis());
    *out = dup_string(fm::sigma(spec, g->word, h->word, budget_of(opts ? opts->budget : 0)).to_string());
  });
}

fm_status fm_classify(const fm_morphism* m, int* in_per_inn, char** report) {
  return guarded([&] {
    require(m, "morphism");
    const auto c = fm::classify_per_inn(m->phi);
    std::string text = fm::format_classification(c, *m->phi.basis());
    if (in_per_inn) *in_per_inn = c.in_per_inn();
    if (report) *report = dup_string(text);
  });
}

fm_status fm_audit_frontier(const fm_morphism* m, const fm_metric_options* metric,
                            const fm_rational* grid, size_t grid_count, const unsigned* radii,
                            size_t radius_count, const fm_audit_options* opts, fm_frontier** out) {
  return guarded([&] {
    require(m, "morphism");
    require(out, "out");
    const auto spec = spec_of(metric, m->phi.basis());
    *out = new fm_frontier{fm::frontier(m->phi, grid_of(grid, grid_count),
                                        radii_of(radii, radius_count), spec, audit_of(opts))};
  });
}

fm_status fm_audit_qie(const fm_morphism* m, const fm_rational* grid, size_t grid_count,
                       const unsigned* radii, size_t radius_count, const fm_audit_options* opts,
                       fm_frontier** out) {
  return guarded([&] {
    require(m, "morphism");
    require(out, "out");
    *out = new fm_frontier{fm::qie_frontier(m->phi, grid_of(grid, grid_count),
                                            radii_of(radii, radius_count), audit_of(opts))};
  });
}

fm_status fm_audit_metric_equiv(const fm_genset* a, const fm_genset* a2, const fm_rational* grid,
                                size_t grid_count, const unsigned* radii, size_t radius_count,
                                const fm_audit_options* opts, fm_frontier** out) {
  return guarded([&] {
    require(a, "a");
    require(a2, "a2");
    require(out, "out");
    *out = new fm_frontier{fm::metric_equiv_audit(a->set, a2->set, grid_of(grid, grid_count),
                                                  radii_of(radii, radius_count), audit_of(opts))};
  });
}

void fm_frontier_free(fm_frontier* f) { delete f; }

size_t fm_frontier_radius_count(const fm_frontier* f) { return f ? f->f.radii.size() : 0; }

size_t fm_frontier_grid_count(const fm_frontier* f) { return f ? f->f.grid.size() : 0; }

fm_status fm_frontier_qmin(const fm_frontier* f, size_t radius_index, size_t grid_index,
                           fm_rational* out) {
  return guarded([&] {
    require(f, "frontier");
    require(out, "out");
    if (radius_index >= f->f.radii.size() || grid_index >= f->f.grid.size()) {
      throw std::invalid_argument("frontier index out of range");
    }
    *out = to_c(f->f.q_min(radius_index, grid_index));
  });
}

int fm_frontier_sampled(const fm_frontier* f) { return f && f->f.sampled; }

fm_status fm_frontier_csv(const fm_frontier* f, char** out) {
  return guarded([&] {
    require(f, "frontier");
    require(out, "out");
    *out = dup_string(f->f.to_csv());
  });
}

fm_status fm_frontier_text(const fm_frontier* f, char** out) {
  return guarded([&] {
    require(f, "frontier");
    require(out, "out");
    *out = dup_string(f->f.to_text());
  });
}

fm_status fm_audit_seminorm(const fm_morphism* m, const fm_metric_options* metric,
                            const fm_rational* grid, size_t grid_count, const unsigned* radii,
                            size_t radius_count, const fm_audit_options* opts, fm_seminorm* out,
                            char** report) {
  return guarded([&] {
    require(m, "morphism");
    const auto spec = spec_of(metric, m->phi.basis());
    const auto e = fm::estimate_seminorm(m->phi, radii_of(radii, radius_count), spec,
                                         grid_of(grid, grid_count), audit_of(opts));
    std::string text = e.to_text();
    if (out) fill_seminorm(e, out);
    if (report) *report = dup_string(text);
  });
}

fm_status fm_audit_dbar(const fm_morphism* phi, const fm_morphism* psi,
                        const fm_metric_options* metric, const fm_rational* grid, size_t grid_count,
                        const unsigned* radii, size_t radius_count, const fm_audit_options* opts,
                        fm_seminorm* out, char** report) {
  return guarded([&] {
    require(phi, "phi");
    require(psi, "psi");
    const auto spec = spec_of(metric, phi->phi.basis());
    const auto d = fm::pseudometric_dbar(phi->phi, psi->phi, radii_of(radii, radius_count), spec,
                                         grid_of(grid, grid_count), audit_of(opts));
    std::string text = d.to_text();
    if (out) *out = fm_seminorm{d.divergent, d.forward.stabilized && d.backward.stabilized,
                                d.value, 0, {0, 1}};
    if (report) *report = dup_string(text);
  });
}

fm_status fm_casebook_run(const char* case_id, unsigned n, int extended, unsigned threads,
                          char** out) {
  bool all_pass = true;
  const fm_status st = guarded([&] {
    require(out, "out");
    std::vector<std::string> ids;
    if (case_id) {
      const auto known = fm::case_ids();
      if (std::find(known.begin(), known.end(), case_id) == known.end()) {
        throw std::invalid_argument(std::string("unknown case: ") + case_id);
      }
      ids.emplace_back(case_id);
    } else {
      ids = fm::case_ids();
    }
    const unsigned t = threads ? threads : 1;
    std::string text;
    for (const std::string& id : ids) {
      fm::CaseReport rep;
      if (id == "noten") {
        rep = fm::noten_case();
      } else if (id == "fauind") {
        rep = fm::fauind_case(n ? n : 2, extended);
      } else if (id == "hnn") {
        rep = fm::hnn_case(n ? n : 2, extended);
      } else {
        rep = fm::revcon_case(case_id && n ? n : 8, t);
      }
      all_pass = all_pass && rep.pass();
      text += rep.to_line() + "\n";
    }
    *out = dup_string(text);
  });
  if (st != FM_OK) return st;
  if (!all_pass) {
    last_error = "casebook check failed";
    return FM_ERR_CASE_FAILED;
  }
  return FM_OK;
}

fm_status fm_fold(const fm_word* const* words, size_t count, char** out) {
  return guarded([&] {
    require(words, "words");
    require(out, "out");
    if (count == 0) throw std::invalid_argument("fold needs at least one word");
    std::vector<fm::Word> gens;
    for (size_t i = 0; i < count; ++i) {
      require(words[i], "word");
      gens.push_back(words[i]->word);
    }
    const fm::BasisPtr& basis = gens.front().basis();
    const auto g = fm::StallingsGraph::fold(basis, gens);
    std::string text = "vertices=" + std::to_string(g.vertex_count()) + "\n";
    text += "edges=" + std::to_string(g.edge_count()) + "\n";
    text += "rank=" + std::to_string(g.rank()) + "\n";
    bool generates = true;
    for (std::size_t a = 0; a < basis->rank(); ++a) {
      generates = generates && g.contains(fm::Word::generator(basis, a));
    }
    text += std::string("whole_group=") + (generates ? "true" : "false") + "\n";
    for (const auto& e : g.edges()) {
      text += "edge " + std::to_string(e.from) + " " + basis->name(e.label.gen()) + " " +
              std::to_string(e.to) + "\n";
    }
    *out = dup_string(text);
  });
}

}  // extern "C"
