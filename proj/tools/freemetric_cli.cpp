// Command-line front end. Talks to the library only through freemetric.h.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "freemetric/freemetric.h"

namespace {

// Thrown to unwind with a library status; main maps it to the exit code.
struct Failure {
  fm_status status;
  std::string message;
};

void check(fm_status st) {
  if (st != FM_OK) throw Failure{st, fm_last_error()};
}

[[noreturn]] void usage(const std::string& message) { throw Failure{FM_ERR_USAGE, message}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Basis = std::unique_ptr<fm_basis, Deleter<fm_basis, fm_basis_free>>;
using Word = std::unique_ptr<fm_word, Deleter<fm_word, fm_word_free>>;
using Morphism = std::unique_ptr<fm_morphism, Deleter<fm_morphism, fm_morphism_free>>;
using Genset = std::unique_ptr<fm_genset, Deleter<fm_genset, fm_genset_free>>;
using Frontier = std::unique_ptr<fm_frontier, Deleter<fm_frontier, fm_frontier_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  fm_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{FM_ERR_USAGE, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Basis load_basis(const std::string& names) {
  fm_basis* b = nullptr;
  check(fm_basis_parse(names.c_str(), &b));
  return Basis(b);
}

Word load_word(const fm_basis* basis, const std::string& text) {
  fm_word* w = nullptr;
  check(fm_word_parse(basis, text.c_str(), &w));
  return Word(w);
}

// A file path, or inline JSON when the argument starts with '{'.
Morphism load_morphism(const std::string& arg) {
  const std::string json = !arg.empty() && arg.front() == '{' ? arg : read_file(arg);
  fm_morphism* m = nullptr;
  check(fm_morphism_parse_json(json.c_str(), &m));
  return Morphism(m);
}

Basis morphism_basis(const fm_morphism* m) {
  fm_basis* b = nullptr;
  check(fm_morphism_basis(m, &b));
  return Basis(b);
}

Genset load_genset(const std::string& path) {
  const std::string text = read_file(path);
  fm_genset* s = nullptr;
  check(fm_genset_parse(text.c_str(), &s));
  return Genset(s);
}

std::vector<fm_rational> parse_grid(const std::string& list) {
  std::vector<fm_rational> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    fm_rational r{};
    check(fm_rational_parse(item.c_str(), &r));
    out.push_back(r);
  }
  if (out.empty()) usage("empty --grid");
  return out;
}

std::vector<unsigned> radii_upto(unsigned radius) {
  if (radius == 0) usage("--radius must be at least 1");
  std::vector<unsigned> out;
  for (unsigned r = 1; r <= radius; ++r) out.push_back(r);
  return out;
}

struct Common {
  std::string basis = "a,b";
  std::string genset;
  std::string p;
  std::string gamma = "ln2";
  std::uint64_t budget = 0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string format = "text";
  std::string grid;
  unsigned radius = 6;
  std::uint64_t max_pairs = 0;
};

void add_metric_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--genset", c.genset, "Generating set file (default: the basis)");
  cmd->add_option("--p", c.p, "Basepoint word (default: 1)");
  cmd->add_option("--gamma", c.gamma, "Decay rate: ln2 or a positive rational")->capture_default_str();
  cmd->add_option("--budget", c.budget, "Search budget in node expansions (0: default)");
}

void add_audit_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--grid", c.grid, "Comma-separated P values (default grid when omitted)");
  cmd->add_option("--radius", c.radius, "Largest ball radius; radii 1..N are tabulated")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for sampled scans")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads; results do not depend on it")
      ->capture_default_str();
  cmd->add_option("--max-pairs", c.max_pairs, "Sample pairs above this count (0: default)");
}

// Owns whatever the metric options point to.
struct MetricContext {
  Genset genset;
  Word basepoint;
  fm_metric_options opts{};
};

void fill_metric(MetricContext& ctx, const Common& c, const fm_basis* basis) {
  if (!c.genset.empty()) {
    ctx.genset = load_genset(c.genset);
    ctx.opts.genset = ctx.genset.get();
  }
  if (!c.p.empty()) {
    ctx.basepoint = load_word(basis, c.p);
    ctx.opts.basepoint = ctx.basepoint.get();
  }
  ctx.opts.gamma = c.gamma.c_str();
  ctx.opts.budget = c.budget;
}

// When a generating-set file is given its basis line wins over --basis.
Basis basis_for(const Common& c) {
  if (c.genset.empty()) return load_basis(c.basis);
  const std::string text = read_file(c.genset);
  const auto nl = text.find('\n');
  std::string first = text.substr(0, nl);
  const auto colon = first.find(':');
  if (colon == std::string::npos) usage("generating set file must start with `basis: ...`");
  return load_basis(first.substr(colon + 1));
}

fm_audit_options audit_options(const Common& c) {
  fm_audit_options o{};
  o.threads = c.threads;
  o.seed = c.seed;
  o.budget = c.budget;
  o.max_pairs = c.max_pairs;
  return o;
}

void print_frontier(const fm_frontier* f, const std::string& format) {
  char* s = nullptr;
  check(format == "csv" ? fm_frontier_csv(f, &s) : fm_frontier_text(f, &s));
  std::cout << take(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metrics, endomorphisms and Hoelder audits on free groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fm_version()));

  Common c;
  std::vector<std::string> words;
  std::vector<std::string> morphisms;
  std::string genset2;
  std::string case_id;
  unsigned case_n = 0;
  bool extended = false;
  std::string out_path;
  bool pair_scan = false;

  auto* dist = app.add_subcommand("dist", "Word-metric distance d(g, h)");
  dist->add_option("--basis", c.basis, "Basis names")->capture_default_str();
  add_metric_flags(dist, c);
  dist->add_option("words", words, "Two words g h")->expected(2)->required();

  auto* gromov = app.add_subcommand("gromov", "Gromov product (g|h)_p, exact");
  gromov->add_option("--basis", c.basis, "Basis names")->capture_default_str();
  add_metric_flags(gromov, c);
  gromov->add_option("words", words, "Two words g h")->expected(2)->required();

  auto* sigma = app.add_subcommand("sigma", "Visual metric value, exact or bracketed");
  sigma->add_option("--basis", c.basis, "Basis names")->capture_default_str();
  add_metric_flags(sigma, c);
  sigma->add_option("words", words, "Two words g h")->expected(2)->required();

  auto* classify = app.add_subcommand("classify", "Decide membership in Per(F)Inn(F)");
  classify->add_option("--morphism", morphisms, "Morphism JSON file")->required()->expected(1);

  auto* audit = app.add_subcommand("audit", "Hoelder and quasi-isometry audits on balls");
  audit->require_subcommand(1);
  auto* frontier = audit->add_subcommand("frontier", "Q_min(P, R) table for Gromov products");
  frontier->add_option("--morphism", morphisms, "Morphism JSON file")->required()->expected(1);
  add_metric_flags(frontier, c);
  add_audit_flags(frontier, c);
  frontier->add_option("--format", c.format, "csv or text")
      ->check(CLI::IsMember({"csv", "text"}))
      ->capture_default_str();
  frontier->add_flag("--pair-scan", pair_scan, "Enumerate pairs even where a faster exact method applies");

  auto* seminorm = audit->add_subcommand("seminorm", "Finite-radius estimate of the seminorm");
  seminorm->add_option("--morphism", morphisms, "Morphism JSON file")->required()->expected(1);
  add_metric_flags(seminorm, c);
  add_audit_flags(seminorm, c);

  auto* dbar = audit->add_subcommand("dbar", "Pseudometric estimate between two automorphisms");
  dbar->add_option("--morphism", morphisms, "Morphism JSON file, given twice")
      ->required()
      ->expected(2);
  add_metric_flags(dbar, c);
  add_audit_flags(dbar, c);

  auto* qie = audit->add_subcommand("qie", "Q_min(P, R) table for word-metric distances");
  qie->add_option("--morphism", morphisms, "Morphism JSON file")->required()->expected(1);
  add_audit_flags(qie, c);
  qie->add_option("--format", c.format, "csv or text")
      ->check(CLI::IsMember({"csv", "text"}))
      ->capture_default_str();

  auto* equiv = audit->add_subcommand("metric-equiv", "Compare Gromov products of two generating sets");
  equiv->add_option("--genset", c.genset, "First generating set file (default: the basis)");
  equiv->add_option("--genset2", genset2, "Second generating set file")->required();
  add_audit_flags(equiv, c);
  equiv->add_option("--budget", c.budget, "Search budget in node expansions (0: default)");
  equiv->add_option("--format", c.format, "csv or text")
      ->check(CLI::IsMember({"csv", "text"}))
      ->capture_default_str();

  auto* casebook = app.add_subcommand("casebook", "Worked computations with expected values");
  casebook->require_subcommand(1);
  auto* run = casebook->add_subcommand("run", "Run one case or all of them");
  run->add_option("--case", case_id, "noten, fauind, hnn or revcon (default: all)");
  run->add_option("--n", case_n, "Case size (fauind, hnn: power; revcon: word length)");
  run->add_flag("--extended", extended, "Allow the large n = 3 instances");
  run->add_option("--threads", c.threads, "Worker threads")->capture_default_str();

  auto* invert = app.add_subcommand("invert", "Inverse of an automorphism as morphism JSON");
  invert->add_option("--morphism", morphisms, "Morphism JSON file")->required()->expected(1);
  invert->add_option("--out", out_path, "Write the JSON here instead of stdout");

  auto* primitive = app.add_subcommand("primitive", "Whether a word belongs to some basis");
  primitive->add_option("--basis", c.basis, "Basis names")->capture_default_str();
  primitive->add_option("word", words, "Word")->expected(1)->required();

  auto* fold = app.add_subcommand("fold", "Stallings graph of the subgroup generated by words");
  fold->add_option("--basis", c.basis, "Basis names")->capture_default_str();
  fold->add_option("words", words, "Generators")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : FM_ERR_USAGE;
  }

  try {
    if (dist->parsed() || gromov->parsed() || sigma->parsed()) {
      const Basis basis = basis_for(c);
      MetricContext ctx;
      fill_metric(ctx, c, basis.get());
      const Word g = load_word(basis.get(), words[0]);
      const Word h = load_word(basis.get(), words[1]);
      if (dist->parsed()) {
        std::uint64_t d = 0;
        check(fm_dist(&ctx.opts, g.get(), h.get(), &d));
        std::cout << d << '\n';
      } else if (gromov->parsed()) {
        fm_rational r{};
        check(fm_gromov(&ctx.opts, g.get(), h.get(), &r));
        std::cout << r.num;
        if (r.den != 1) std::cout << '/' << r.den;
        std::cout << '\n';
      } else {
        char* s = nullptr;
        check(fm_sigma(&ctx.opts, g.get(), h.get(), &s));
        std::cout << take(s) << '\n';
      }
    } else if (classify->parsed()) {
      const Morphism m = load_morphism(morphisms[0]);
      char* report = nullptr;
      check(fm_classify(m.get(), nullptr, &report));
      std::cout << take(report);
    } else if (frontier->parsed() || seminorm->parsed() || dbar->parsed()) {
      const Morphism m = load_morphism(morphisms[0]);
      const Basis basis = morphism_basis(m.get());
      MetricContext ctx;
      fill_metric(ctx, c, basis.get());
      const auto grid = c.grid.empty() ? std::vector<fm_rational>{} : parse_grid(c.grid);
      const auto radii = radii_upto(c.radius);
      fm_audit_options opts = audit_options(c);
      opts.pair_scan = pair_scan;
      if (frontier->parsed()) {
        fm_frontier* f = nullptr;
        check(fm_audit_frontier(m.get(), &ctx.opts, grid.data(), grid.size(), radii.data(),
                                radii.size(), &opts, &f));
        print_frontier(Frontier(f).get(), c.format);
      } else if (seminorm->parsed()) {
        char* report = nullptr;
        check(fm_audit_seminorm(m.get(), &ctx.opts, grid.data(), grid.size(), radii.data(),
                                radii.size(), &opts, nullptr, &report));
        std::cout << take(report);
      } else {
        const Morphism psi = load_morphism(morphisms[1]);
        char* report = nullptr;
        check(fm_audit_dbar(m.get(), psi.get(), &ctx.opts, grid.data(), grid.size(), radii.data(),
                            radii.size(), &opts, nullptr, &report));
        std::cout << take(report);
      }
    } else if (qie->parsed()) {
      const Morphism m = load_morphism(morphisms[0]);
      const auto grid = c.grid.empty() ? std::vector<fm_rational>{} : parse_grid(c.grid);
      const auto radii = radii_upto(c.radius);
      const fm_audit_options opts = audit_options(c);
      fm_frontier* f = nullptr;
      check(fm_audit_qie(m.get(), grid.data(), grid.size(), radii.data(), radii.size(), &opts, &f));
      print_frontier(Frontier(f).get(), c.format);
    } else if (equiv->parsed()) {
      const Genset a2 = load_genset(genset2);
      Genset a;
      if (c.genset.empty()) {
        Common second = c;
        second.genset = genset2;
        const Basis basis = basis_for(second);
        fm_genset* s = nullptr;
        check(fm_genset_from_basis(basis.get(), &s));
        a = Genset(s);
      } else {
        a = load_genset(c.genset);
      }
      const auto grid = c.grid.empty() ? std::vector<fm_rational>{} : parse_grid(c.grid);
      const auto radii = radii_upto(c.radius);
      const fm_audit_options opts = audit_options(c);
      fm_frontier* f = nullptr;
      check(fm_audit_metric_equiv(a.get(), a2.get(), grid.data(), grid.size(), radii.data(),
                                  radii.size(), &opts, &f));
      print_frontier(Frontier(f).get(), c.format);
    } else if (run->parsed()) {
      char* report = nullptr;
      const fm_status st = fm_casebook_run(case_id.empty() ? nullptr : case_id.c_str(), case_n,
                                           extended, c.threads, &report);
      if (st == FM_OK || st == FM_ERR_CASE_FAILED) std::cout << take(report);
      check(st);
    } else if (invert->parsed()) {
      const Morphism m = load_morphism(morphisms[0]);
      fm_morphism* inv = nullptr;
      check(fm_morphism_invert(m.get(), &inv));
      const Morphism owned(inv);
      char* json = nullptr;
      check(fm_morphism_to_json(owned.get(), &json));
      const std::string text = take(json) + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!(out << text)) throw Failure{FM_ERR_USAGE, "cannot write " + out_path};
      }
    } else if (primitive->parsed()) {
      const Basis basis = load_basis(c.basis);
      const Word w = load_word(basis.get(), words[0]);
      int prim = 0;
      check(fm_word_is_primitive(w.get(), &prim));
      std::cout << (prim ? "true" : "false") << '\n';
    } else if (fold->parsed()) {
      const Basis basis = load_basis(c.basis);
      std::vector<Word> owned;
      std::vector<const fm_word*> ptrs;
      for (const std::string& text : words) {
        owned.push_back(load_word(basis.get(), text));
        ptrs.push_back(owned.back().get());
      }
      char* report = nullptr;
      check(fm_fold(ptrs.data(), ptrs.size(), &report));
      std::cout << take(report);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.status;
  }
  return 0;
}
