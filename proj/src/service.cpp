#include "twiglearn/service.hpp"

#include <httplib.h>

#include <charconv>
#include <iomanip>
#include <random>
#include <sstream>

#include "twiglearn/matching.hpp"
#include "twiglearn/xml.hpp"

namespace twiglearn::service {

using nlohmann::json;

std::string SessionStore::create(std::optional<Label> virtual_root) {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  auto session = std::make_shared<Session>();
  session->virtual_root = std::move(virtual_root);
  std::lock_guard lock(mutex_);
  std::string id;
  do {
    std::ostringstream hex;
    hex << std::hex << std::setfill('0') << std::setw(16) << rng() << std::setw(16) << rng();
    id = hex.str();
  } while (sessions_.contains(id));
  sessions_.emplace(id, std::move(session));
  return id;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

bool SessionStore::erase(const std::string& id) {
  std::lock_guard lock(mutex_);
  return sessions_.erase(id) > 0;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

json tree_json(const Tree& t, NodeId n) {
  json kids = json::array();
  for (NodeId c : t.children(n)) kids.push_back(tree_json(t, c));
  return {{"label", t.label(n)}, {"id", n}, {"children", std::move(kids)}};
}

namespace {

Reply error(int status, std::string message, json extra = json::object()) {
  extra["error"] = std::move(message);
  return {status, std::move(extra)};
}

std::optional<std::size_t> parse_index(const std::string& text) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<json> parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  auto parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
  return parsed;
}

std::string query_text(const LearnedState& s) { return serialize(s.query); }

// Answers in document ids: node n of a Boolean class matches when the query
// holds in the subtree rooted at n.
std::vector<NodeId> matches(const LearnedState& learned, const Document& doc,
                            const std::optional<Label>& virtual_root) {
  std::vector<NodeId> out;
  if (arity_of(learned.cls) == Arity::unary) {
    if (!virtual_root) return answers(learned.query, doc.tree);
    for (NodeId n : answers(learned.query, add_virtual_root(doc.tree, *virtual_root)))
      if (n > 0) out.push_back(n - 1);
    return out;
  }
  for (NodeId n = 0; n < doc.tree.size(); ++n)
    if (embeds(learned.query, doc.tree.subtree(n).first)) out.push_back(n);
  return out;
}

SignedSample collect(const Session& s, LearnerClass cls) {
  SignedSample sample;
  const bool unary = arity_of(cls) == Arity::unary;
  for (const auto& doc : s.documents)
    for (const auto& [node, sign] : doc.annotations) {
      if (!unary) {
        sample.add(doc.tree.subtree(node).first, sign);
      } else if (s.virtual_root) {
        sample.add(DecoratedTree(add_virtual_root(doc.tree, *s.virtual_root), node + 1), sign);
      } else {
        sample.add(DecoratedTree(doc.tree, node), sign);
      }
    }
  return sample;
}

}  // namespace

Reply Api::create_session(const std::string& body) {
  auto req = parse_body(body);
  if (!req) return error(400, "body must be a JSON object");
  std::optional<Label> root;
  if (auto it = req->find("virtual_root"); it != req->end()) {
    if (it->is_boolean()) {
      if (it->get<bool>()) root = Label(kDefaultVirtualRoot);
    } else if (it->is_string()) {
      root = it->get<std::string>();
    } else {
      return error(400, "virtual_root must be a boolean or a label");
    }
  }
  auto id = store_.create(root);
  json out{{"session", id}};
  out["virtual_root"] = root ? json(*root) : json(nullptr);
  return {201, out};
}

Reply Api::delete_session(const std::string& sid) {
  if (!store_.erase(sid)) return error(404, "unknown session");
  return {200, {{"deleted", sid}}};
}

Reply Api::upload(const std::string& sid, const std::string& body) {
  auto session = store_.find(sid);
  if (!session) return error(404, "unknown session");
  auto req = parse_body(body);
  if (!req || !req->contains("xml") || !(*req)["xml"].is_string())
    return error(400, "expected {\"xml\": \"...\"}");
  std::optional<XmlDocument> parsed;
  try {
    parsed = read_xml((*req)["xml"].get<std::string>(), config_.annot_attr);
  } catch (const XmlError& e) {
    return error(400, e.what(), {{"line", e.line()}, {"column", e.column()}});
  } catch (const ParseError& e) {
    return error(400, e.what());
  }
  std::lock_guard lock(session->mutex);
  Document doc{std::move(parsed->tree), {}};
  json annotations = json::array();
  for (auto [node, sign] : parsed->annotations) {
    if (node == doc.tree.root() && !session->virtual_root)
      return error(409, "the document root is annotated but the session has no virtual root");
    doc.annotations[node] = sign;
    annotations.push_back({{"node", node}, {"sign", std::string(1, sign_char(sign))}});
  }
  json tree = tree_json(doc.tree);
  session->documents.push_back(std::move(doc));
  return {201,
          {{"doc", session->documents.size() - 1}, {"tree", std::move(tree)}, {"annotations", annotations}}};
}

Reply Api::document(const std::string& sid, const std::string& doc_id) {
  auto session = store_.find(sid);
  if (!session) return error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  auto d = parse_index(doc_id);
  if (!d || *d >= session->documents.size()) return error(404, "unknown document");
  const auto& doc = session->documents[*d];
  json annotations = json::array();
  for (auto [node, sign] : doc.annotations)
    annotations.push_back({{"node", node}, {"sign", std::string(1, sign_char(sign))}});
  return {200, {{"doc", *d}, {"tree", tree_json(doc.tree)}, {"annotations", annotations}}};
}

Reply Api::annotate(const std::string& sid, const std::string& doc_id, const std::string& node_id,
                    const std::string& body) {
  auto session = store_.find(sid);
  if (!session) return error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  auto d = parse_index(doc_id);
  if (!d || *d >= session->documents.size()) return error(404, "unknown document");
  auto& doc = session->documents[*d];
  auto n = parse_index(node_id);
  if (!n || *n >= doc.tree.size()) return error(404, "unknown node");
  auto req = parse_body(body);
  if (!req || !req->contains("sign") || !(*req)["sign"].is_string())
    return error(400, "expected {\"sign\": \"+\" or \"-\"}");
  Sign sign;
  try {
    sign = parse_sign((*req)["sign"].get<std::string>());
  } catch (const std::exception& e) {
    return error(400, e.what());
  }
  if (*n == doc.tree.root() && !session->virtual_root)
    return error(409, "cannot annotate the document root without a virtual root");
  doc.annotations[static_cast<NodeId>(*n)] = sign;
  return {200, {{"doc", *d}, {"node", *n}, {"sign", std::string(1, sign_char(sign))}}};
}

Reply Api::clear_annotation(const std::string& sid, const std::string& doc_id,
                            const std::string& node_id) {
  auto session = store_.find(sid);
  if (!session) return error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  auto d = parse_index(doc_id);
  if (!d || *d >= session->documents.size()) return error(404, "unknown document");
  auto& doc = session->documents[*d];
  auto n = parse_index(node_id);
  if (!n || *n >= doc.tree.size()) return error(404, "unknown node");
  bool removed = doc.annotations.erase(static_cast<NodeId>(*n)) > 0;
  return {200, {{"doc", *d}, {"node", *n}, {"removed", removed}}};
}

Reply Api::query(const std::string& sid, const std::string& cls_name, bool heuristic) {
  auto session = store_.find(sid);
  if (!session) return error(404, "unknown session");
  auto cls = cls_name.empty() ? std::optional(LearnerClass::twig1) : parse_learner_class(cls_name);
  if (!cls) return error(400, "unknown class '" + cls_name + "'");
  std::lock_guard lock(session->mutex);

  auto sample = collect(*session, *cls);
  json counts{{"positives", sample.count(Sign::positive)}, {"negatives", sample.count(Sign::negative)}};
  LearnOptions options;
  options.cls = *cls;
  options.heuristic = heuristic;
  options.search_max_nodes = config_.search_max_nodes;
  options.search_cap = config_.search_cap;
  options.time_budget = config_.time_budget;
  auto result = learn_sample(sample, options);

  json body{{"class", to_string(*cls)}, {"outcome", to_string(result.outcome)}, {"counts", counts}};
  if (!result.message.empty()) body["message"] = result.message;
  switch (result.outcome) {
    case Outcome::no_examples:
    case Outcome::inconsistent:
      session->last.reset();
      return {422, body};
    case Outcome::budget_exceeded:
      session->last.reset();
      body["retry_after"] = 1;
      return {503, body};
    case Outcome::learned:
    case Outcome::separated_by_search:
      break;
  }

  LearnedState learned{*cls,
                       *cls == LearnerClass::conj0 && result.outcome == Outcome::learned
                           ? ConjQuery(result.queries).to_twig()
                           : result.queries.front(),
                       result.queries};
  body["query"] = query_text(learned);
  body["size"] = learned.query.size();
  body["queries"] = json::array();
  for (const auto& q : result.queries) body["queries"].push_back(serialize(q));
  json highlights = json::array();
  for (const auto& doc : session->documents) highlights.push_back(matches(learned, doc, session->virtual_root));
  body["highlights"] = highlights;
  session->last = std::move(learned);
  return {200, body};
}

Reply Api::highlight(const std::string& sid, const std::string& doc_id) {
  auto session = store_.find(sid);
  if (!session) return error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  auto d = parse_index(doc_id);
  if (!d || *d >= session->documents.size()) return error(404, "unknown document");
  if (!session->last) return error(409, "no query has been learned in this session");
  const auto& learned = *session->last;
  return {200,
          {{"doc", *d},
           {"class", to_string(learned.cls)},
           {"query", query_text(learned)},
           {"nodes", matches(learned, session->documents[*d], session->virtual_root)}}};
}

void install_routes(httplib::Server& server, Api& api) {
  auto send = [](httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    if (reply.status == 503) res.set_header("Retry-After", "1");
    res.set_content(reply.body.dump(), "application/json");
  };
  auto p = [](const httplib::Request& req, const char* key) { return req.path_params.at(key); };

  server.Post("/sessions", [&api, send](const httplib::Request& req, httplib::Response& res) {
    send(res, api.create_session(req.body));
  });
  server.Delete("/sessions/:id", [&api, send, p](const httplib::Request& req, httplib::Response& res) {
    send(res, api.delete_session(p(req, "id")));
  });
  server.Post("/sessions/:id/docs", [&api, send, p](const httplib::Request& req, httplib::Response& res) {
    send(res, api.upload(p(req, "id"), req.body));
  });
  server.Get("/sessions/:id/docs/:doc", [&api, send, p](const httplib::Request& req, httplib::Response& res) {
    send(res, api.document(p(req, "id"), p(req, "doc")));
  });
  server.Put("/sessions/:id/docs/:doc/nodes/:node/annotation",
             [&api, send, p](const httplib::Request& req, httplib::Response& res) {
               send(res, api.annotate(p(req, "id"), p(req, "doc"), p(req, "node"), req.body));
             });
  server.Delete("/sessions/:id/docs/:doc/nodes/:node/annotation",
                [&api, send, p](const httplib::Request& req, httplib::Response& res) {
                  send(res, api.clear_annotation(p(req, "id"), p(req, "doc"), p(req, "node")));
                });
  server.Get("/sessions/:id/query", [&api, send, p](const httplib::Request& req, httplib::Response& res) {
    auto h = req.get_param_value("heuristic");
    send(res, api.query(p(req, "id"), req.get_param_value("class"), h == "1" || h == "true"));
  });
  server.Get("/sessions/:id/docs/:doc/highlight",
             [&api, send, p](const httplib::Request& req, httplib::Response& res) {
               send(res, api.highlight(p(req, "id"), p(req, "doc")));
             });
}

}  // namespace twiglearn::service
