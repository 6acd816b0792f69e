#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twiglearn/pipeline.hpp"
#include "twiglearn/sample.hpp"
#include "twiglearn/tree.hpp"

namespace httplib {
class Server;
}

namespace twiglearn::service {

struct ServiceConfig {
  std::chrono::milliseconds time_budget{5000};
  std::size_t search_max_nodes = 5;
  std::size_t search_cap = 200'000;
  std::string annot_attr = "annot";
};

struct Reply {
  int status = 200;
  nlohmann::json body = nlohmann::json::object();
};

struct Document {
  Tree tree;
  std::map<NodeId, Sign> annotations;
};

struct LearnedState {
  LearnerClass cls;
  TwigQuery query;
  std::vector<TwigQuery> queries;
};

struct Session {
  std::mutex mutex;
  std::optional<Label> virtual_root;
  std::vector<Document> documents;
  std::optional<LearnedState> last;
};

// Session registry; requests on one session are serialized by its mutex.
class SessionStore {
 public:
  std::string create(std::optional<Label> virtual_root);
  std::shared_ptr<Session> find(const std::string& id) const;
  bool erase(const std::string& id);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

// Request handlers, independent of the transport. Ids arrive as path text.
class Api {
 public:
  explicit Api(ServiceConfig config = {}) : config_(std::move(config)) {}

  Reply create_session(const std::string& body);
  Reply delete_session(const std::string& sid);
  Reply upload(const std::string& sid, const std::string& body);
  Reply document(const std::string& sid, const std::string& doc);
  Reply annotate(const std::string& sid, const std::string& doc, const std::string& node,
                 const std::string& body);
  Reply clear_annotation(const std::string& sid, const std::string& doc, const std::string& node);
  Reply query(const std::string& sid, const std::string& cls, bool heuristic);
  Reply highlight(const std::string& sid, const std::string& doc);

  const SessionStore& sessions() const { return store_; }

 private:
  ServiceConfig config_;
  SessionStore store_;
};

// JSON tree encoding: nested {label, id, children} with preorder ids.
nlohmann::json tree_json(const Tree& t, NodeId n = 0);

void install_routes(httplib::Server& server, Api& api);

}  // namespace twiglearn::service
