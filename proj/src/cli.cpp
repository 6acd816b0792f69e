#include "twiglearn/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lexing.hpp"
#include "twiglearn/charsample.hpp"
#include "twiglearn/consistency.hpp"
#include "twiglearn/matching.hpp"
#include "twiglearn/oracle.hpp"
#include "twiglearn/pipeline.hpp"
#include "twiglearn/xml.hpp"

namespace twiglearn::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool looks_like_xml(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string_view::npos && text[first] == '<';
}

struct InputOptions {
  std::vector<std::string> files;
  std::vector<std::string> pos;
  std::vector<std::string> neg;
  std::string annot = "annot";
  bool virtual_root = false;
  std::string root_label{kDefaultVirtualRoot};

  void attach(CLI::App* app, bool signed_inputs) {
    app->add_option("files", files, "XML documents or term samples");
    if (signed_inputs) {
      app->add_option("--pos", pos, "inputs whose examples are all positive");
      app->add_option("--neg", neg, "inputs whose examples are all negative");
    }
    app->add_option("--annot", annot, "annotation attribute in XML input")->capture_default_str();
    app->add_flag("--virtual-root", virtual_root, "put a fresh root above every document");
    app->add_option("--root-label", root_label, "label of the virtual root")
        ->capture_default_str();
  }

  std::optional<Label> root() const {
    return virtual_root ? std::optional<Label>(root_label) : std::nullopt;
  }
};

SignedSample with_sign(const SignedSample& s, Sign sign) {
  SignedSample out;
  for (auto ex : s.examples()) {
    ex.sign = sign;
    out.add(std::move(ex));
  }
  return out;
}

SignedSample with_root(const SignedSample& s, const Label& label) {
  SignedSample out;
  for (const auto& ex : s.examples()) {
    if (ex.unary())
      out.add(add_virtual_root(ex.decorated(), label), ex.sign);
    else
      out.add(add_virtual_root(ex.tree, label), ex.sign);
  }
  return out;
}

SignedSample load_one(const std::string& path, bool unary, std::optional<Sign> forced,
                      const InputOptions& in) {
  auto text = read_file(path);
  if (looks_like_xml(text)) {
    XmlOptions xo;
    xo.mode = unary ? AnnotationMode::unary : AnnotationMode::boolean;
    xo.annot_attr = in.annot;
    xo.document_sign = forced.value_or(Sign::positive);
    xo.virtual_root = in.root();
    auto s = parse_xml(text, xo);
    return forced && unary ? with_sign(s, *forced) : s;
  }
  auto s = parse_term_sample(text, unary);
  if (forced) s = with_sign(s, *forced);
  return in.virtual_root ? with_root(s, in.root_label) : s;
}

SignedSample load_sample(const InputOptions& in, bool unary) {
  SignedSample out;
  for (const auto& f : in.files) out.append(load_one(f, unary, std::nullopt, in));
  for (const auto& f : in.pos) out.append(load_one(f, unary, Sign::positive, in));
  for (const auto& f : in.neg) out.append(load_one(f, unary, Sign::negative, in));
  if (in.files.empty() && in.pos.empty() && in.neg.empty()) throw UsageError("no input files");
  return out;
}

struct Document {
  std::string source;
  Tree tree;
};

// Plain documents for evaluation; selection marks and signs in term input are ignored.
std::vector<Document> load_documents(const InputOptions& in) {
  std::vector<Document> docs;
  for (const auto& path : in.files) {
    auto text = read_file(path);
    const std::size_t first_doc = docs.size();
    if (looks_like_xml(text)) {
      docs.push_back({path, read_xml(text, in.annot).tree});
    } else {
      std::istringstream lines(text);
      std::string line;
      std::size_t k = 0;
      while (std::getline(lines, line)) {
        auto body = std::string_view(line);
        auto first = body.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || body[first] == '#') continue;
        body.remove_prefix(first);
        if (body.size() > 1 && (body[0] == '+' || body[0] == '-') && (body[1] == ' ' || body[1] == '\t'))
          body.remove_prefix(2);
        docs.push_back({path + "#" + std::to_string(++k), parse_term(body).tree});
      }
    }
    if (in.virtual_root)
      for (std::size_t i = first_doc; i < docs.size(); ++i)
        docs[i].tree = add_virtual_root(docs[i].tree, in.root_label);
  }
  if (docs.empty()) throw UsageError("no input documents");
  return docs;
}

// /library/collection[1]/title[1]: positions count same-label siblings.
std::string node_path(const Tree& t, NodeId n) {
  std::vector<std::string> steps;
  for (NodeId at = n; at != t.root(); at = t.parent(at)) {
    std::size_t pos = 1;
    for (NodeId sib : t.children(t.parent(at))) {
      if (sib == at) break;
      if (t.label(sib) == t.label(at)) ++pos;
    }
    steps.push_back(detail::quote_label(t.label(at)) + "[" + std::to_string(pos) + "]");
  }
  steps.push_back(detail::quote_label(t.label(t.root())));
  std::string out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) out += "/" + *it;
  return out;
}

std::vector<Label> sample_labels(const SignedSample& s) {
  std::set<Label> labels;
  for (const auto& ex : s.examples())
    for (NodeId n = 0; n < ex.tree.size(); ++n) labels.insert(ex.tree.label(n));
  return {labels.begin(), labels.end()};
}

std::vector<Label> split_labels(const std::string& csv) {
  std::vector<Label> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

QueryClass query_class_or_throw(const std::string& name) {
  auto c = parse_query_class(name);
  if (!c) throw UsageError("unknown query class '" + name + "'");
  return *c;
}

Arity arity_flag(bool unary) { return unary ? Arity::unary : Arity::boolean; }

struct SearchOptions {
  std::string cls = "twig-boolean";
  std::size_t min_nodes = 1;
  std::size_t max_nodes = 4;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
  bool no_star = false;
  bool no_desc = false;
  std::size_t cap = 100'000;

  void attach(CLI::App* app) {
    app->add_option("--class", cls, "query class, e.g. anchored-path-boolean")
        ->capture_default_str();
    app->add_option("--min-nodes", min_nodes)->capture_default_str();
    app->add_option("--max-nodes", max_nodes)->capture_default_str();
    app->add_option("--max-depth", max_depth);
    app->add_flag("--no-star", no_star, "forbid the wildcard");
    app->add_flag("--no-desc", no_desc, "forbid descendant edges");
    app->add_option("--cap", cap, "maximum number of generated shapes")->capture_default_str();
  }

  EnumSpec spec(std::vector<Label> labels) const {
    EnumSpec s;
    s.labels = std::move(labels);
    s.cls = query_class_or_throw(cls);
    s.min_nodes = min_nodes;
    s.max_nodes = max_nodes;
    s.max_depth = max_depth;
    s.allow_star = !no_star;
    s.allow_desc = !no_desc;
    s.cap = cap;
    return s;
  }
};

class Tool {
 public:
  Tool(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Learn path and twig queries from annotated XML", "twiglearn"};
    app.require_subcommand(1);
    add_learn(app);
    add_eval(app);
    add_subsume(app);
    add_charsample(app);
    add_oracle(app);
    add_consistency(app);
    add_sat2sample(app);
    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e, out_, err_);
      return code == 0 ? ok : usage_error;
    }
    try {
      return action_();
    } catch (const UsageError& e) {
      err_ << "error: " << e.what() << '\n';
    } catch (const ParseError& e) {
      err_ << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
      err_ << "error: " << e.what() << '\n';
    } catch (const CapExceeded& e) {
      err_ << "error: " << e.what() << '\n';
      return no_result;
    }
    return usage_error;
  }

 private:
  void add_learn(CLI::App& app) {
    auto* cmd = app.add_subcommand("learn", "learn a query from a sample");
    cmd->add_option("--class", learner_, "path1, path0, conj0, twig0 or twig1")
        ->capture_default_str();
    input_.attach(cmd, true);
    cmd->add_flag("--json", json_, "print a JSON report");
    cmd->add_flag("--heuristic", learn_.heuristic, "path0: pick the conjunct rejecting most negatives");
    cmd->add_flag("--rightmost", rightmost_, "factor words rightmost first");
    cmd->add_flag("--bottommost", bottommost_, "scan edges bottommost first");
    cmd->add_option("--search-max-nodes", learn_.search_max_nodes,
                    "size bound of the separating search")
        ->capture_default_str();
    cmd->add_option("--search-cap", learn_.search_cap)->capture_default_str();
    cmd->callback([this] { action_ = [this] { return learn(); }; });
  }

  int learn() {
    auto cls = parse_learner_class(learner_);
    if (!cls) throw UsageError("unknown learner class '" + learner_ + "'");
    learn_.cls = *cls;
    if (rightmost_) learn_.paths.factor_order = FactorOrder::rightmost_first;
    if (bottommost_) learn_.paths.edge_scan = EdgeScan::bottommost_first;
    auto sample = load_sample(input_, arity_of(*cls) == Arity::unary);
    auto result = learn_sample(sample, learn_);
    if (json_) {
      nlohmann::json report;
      report["class"] = to_string(*cls);
      report["outcome"] = to_string(result.outcome);
      report["queries"] = nlohmann::json::array();
      for (const auto& q : result.queries)
        report["queries"].push_back({{"query", serialize(q)}, {"size", q.size()}});
      if (!result.message.empty()) report["message"] = result.message;
      report["examples"] = nlohmann::json::array();
      if (result.ok()) {
        auto chosen = *cls == LearnerClass::conj0 && result.outcome == Outcome::learned
                          ? ConjQuery(result.queries).to_twig()
                                                   : result.queries.front();
        for (const auto& ex : sample.examples()) {
          bool accepted = ex.unary() ? embeds(chosen, ex.decorated()) : embeds(chosen, ex.tree);
          report["examples"].push_back({{"example", ex.unary() ? to_term(ex.decorated())
                                                                : to_term(ex.tree)},
                                        {"sign", std::string(1, sign_char(ex.sign))},
                                        {"accepted", accepted}});
        }
      }
      out_ << report.dump(2) << '\n';
    } else {
      for (const auto& q : result.queries) out_ << serialize(q) << '\n';
      if (!result.ok() || result.outcome == Outcome::separated_by_search)
        err_ << to_string(result.outcome) << ": " << result.message << '\n';
    }
    return result.ok() ? ok : no_result;
  }

  void add_eval(CLI::App& app) {
    auto* cmd = app.add_subcommand("eval", "evaluate a query on documents");
    cmd->add_option("--query,-q", query_, "query text")->required();
    cmd->add_flag("--boolean", boolean_, "Boolean query: print true or false per document");
    input_.attach(cmd, false);
    cmd->callback([this] { action_ = [this] { return eval(); }; });
  }

  int eval() {
    auto q = parse_query(query_, arity_flag(!boolean_));
    auto docs = load_documents(input_);
    const bool tagged = docs.size() > 1;
    bool any = false;
    for (const auto& d : docs) {
      std::string prefix = tagged ? d.source + "\t" : "";
      if (boolean_) {
        bool hit = embeds(q, d.tree);
        any = any || hit;
        out_ << prefix << (hit ? "true" : "false") << '\n';
        continue;
      }
      for (NodeId n : answers(q, d.tree)) {
        any = true;
        out_ << prefix << node_path(d.tree, n) << '\n';
      }
    }
    return any ? ok : no_result;
  }

  void add_subsume(CLI::App& app) {
    auto* cmd = app.add_subcommand("subsume", "does Q1 embed into Q2, so that L(Q2) is within L(Q1)");
    cmd->add_option("q1", query_, "the more general query")->required();
    cmd->add_option("q2", query2_, "the more specific query")->required();
    cmd->add_flag("--unary", unary_, "parse both queries as unary");
    cmd->callback([this] { action_ = [this] { return subsume(); }; });
  }

  int subsume() {
    bool yes = subsumes(parse_query(query_, arity_flag(unary_)), parse_query(query2_, arity_flag(unary_)));
    out_ << (yes ? "true" : "false") << '\n';
    return yes ? ok : no_result;
  }

  void add_charsample(CLI::App& app) {
    auto* cmd = app.add_subcommand("charsample", "print the two characteristic trees of a query");
    cmd->add_option("query", query_)->required();
    cmd->add_flag("--unary", unary_, "parse the query as unary");
    cmd->add_option("--a0", min_label_, "minimal label replacing the wildcard")->capture_default_str();
    cmd->callback([this] { action_ = [this] { return charsample(); }; });
  }

  int charsample() {
    auto cs = char_sample(parse_query(query_, arity_flag(unary_)), min_label_);
    out_ << to_term(cs.t0, cs.sel0) << '\n' << to_term(cs.t1, cs.sel1) << '\n';
    return ok;
  }

  void add_oracle(CLI::App& app) {
    auto* cmd = app.add_subcommand("oracle", "brute-force reference procedures");
    cmd->require_subcommand(1);

    auto* en = cmd->add_subcommand("enumerate", "list every query of a bounded class");
    en->add_option("--labels", labels_csv_, "comma separated alphabet")->required();
    search_.attach(en);
    en->callback([this] { action_ = [this] { return enumerate(); }; });

    auto* mi = cmd->add_subcommand("minimal", "minimal queries consistent with a sample");
    search_.attach(mi);
    input_.attach(mi, true);
    mi->callback([this] { action_ = [this] { return minimal(); }; });

    auto* re = cmd->add_subcommand("refute", "search a tree in L(Q1) outside L(Q2)");
    re->add_option("q1", query_)->required();
    re->add_option("q2", query2_)->required();
    re->add_flag("--unary", unary_, "parse both queries as unary");
    re->add_option("--budget", budget_, "number of trees to try")->capture_default_str();
    re->callback([this] { action_ = [this] { return refute(); }; });
  }

  int enumerate() {
    std::size_t count = 0;
    enumerate_queries(search_.spec(split_labels(labels_csv_)), [&](const TwigQuery& q) {
      out_ << serialize(q) << '\n';
      ++count;
      return true;
    });
    return count ? ok : no_result;
  }

  int minimal() {
    auto spec = search_.spec({});
    auto sample = load_sample(input_, arity_of(spec.cls) == Arity::unary);
    spec.labels = sample_labels(sample);
    std::vector<std::string> lines;
    for (const auto& q : minimal_consistent(sample, spec)) lines.push_back(serialize(q));
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out_ << l << '\n';
    return lines.empty() ? no_result : ok;
  }

  int refute() {
    auto r = refute_contains(parse_query(query_, arity_flag(unary_)), parse_query(query2_, arity_flag(unary_)),
                             budget_);
    if (!r.refuted) {
      out_ << "not refuted after " << r.trees_tried << " trees\n";
      return no_result;
    }
    out_ << to_term(*r.witness, r.selected) << '\n';
    return ok;
  }

  void add_consistency(CLI::App& app) {
    auto* cmd = app.add_subcommand("consistency", "is some bounded query consistent with a sample");
    search_.attach(cmd);
    cmd->add_flag("--reduction", reduction_,
                  "child-only wildcard-free twigs of depth at most 4, any size");
    input_.attach(cmd, true);
    cmd->callback([this] { action_ = [this] { return consistency(); }; });
  }

  int consistency() {
    auto spec = search_.spec({});
    auto sample = load_sample(input_, arity_of(spec.cls) == Arity::unary);
    if (reduction_)
      spec = reduction_spec(sample);
    else
      spec.labels = sample_labels(sample);
    auto q = check_consistency(sample, spec);
    if (!q) {
      out_ << "inconsistent\n";
      return no_result;
    }
    out_ << serialize(*q) << '\n';
    return ok;
  }

  void add_sat2sample(CLI::App& app) {
    auto* cmd = app.add_subcommand("sat2sample", "turn a DIMACS CNF formula into a Boolean sample");
    cmd->add_option("file", cnf_file_, "DIMACS file")->required();
    cmd->add_flag("--check", check_, "also decide the sample and compare with a truth table");
    cmd->callback([this] { action_ = [this] { return sat2sample(); }; });
  }

  int sat2sample() {
    auto f = parse_dimacs(read_file(cnf_file_));
    auto sample = sat_to_sample(f);
    out_ << write_term_sample(sample);
    if (!check_) return ok;
    bool sat = satisfiable(f);
    bool consistent = check_consistency(sample, reduction_spec(sample)).has_value();
    err_ << "satisfiable=" << sat << " consistent=" << consistent << '\n';
    return sat == consistent ? ok : no_result;
  }

  std::ostream& out_;
  std::ostream& err_;
  std::function<int()> action_;

  InputOptions input_;
  SearchOptions search_;
  LearnOptions learn_;
  std::string learner_ = "twig1";
  bool json_ = false;
  bool rightmost_ = false;
  bool bottommost_ = false;
  std::string query_;
  std::string query2_;
  bool boolean_ = false;
  bool unary_ = false;
  std::string min_label_{kDefaultMinLabel};
  std::string labels_csv_;
  std::size_t budget_ = 10'000;
  bool reduction_ = false;
  std::string cnf_file_;
  bool check_ = false;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Tool(out, err).run(args);
}

}  // namespace twiglearn::cli
