#include "lp01/session.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <list>
#include <mutex>
#include <thread>

#include "lp01/executor.hpp"
#include "lp01/tree_io.hpp"

namespace lp01 {

using nlohmann::json;

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw ProtocolError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string need_string(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_string()) throw ProtocolError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t need_count(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_unsigned()) throw ProtocolError(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::optional<std::uint64_t> maybe_count(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return need_count(j, key);
}

json parse_object(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded()) throw ProtocolError("message is not valid JSON");
  if (!j.is_object()) throw ProtocolError("message is not a JSON object");
  return j;
}

}  // namespace

SessionCommand decode_command(std::string_view line) {
  const json j = parse_object(line);
  const std::string name = need_string(j, "cmd");
  if (name == "hello") {
    const json& v = need(j, "version");
    if (!v.is_number_integer()) throw ProtocolError("field 'version' must be an integer");
    return cmd::Hello{v.get<int>()};
  }
  if (name == "load_program") return cmd::LoadProgram{need_string(j, "text")};
  if (name == "prove") return cmd::Prove{need_string(j, "goal"), maybe_count(j, "max_steps")};
  if (name == "run") {
    bool trace = false;
    if (j.contains("trace")) {
      if (!j.at("trace").is_boolean()) throw ProtocolError("field 'trace' must be a boolean");
      trace = j.at("trace").get<bool>();
    }
    return cmd::Run{need_string(j, "goal"), maybe_count(j, "max_steps"), trace};
  }
  if (name == "answer") return cmd::Answer{need_count(j, "id"), need_string(j, "constant")};
  if (name == "save_tree") return cmd::SaveTree{need_string(j, "path")};
  if (name == "quit") return cmd::Quit{};
  throw ProtocolError("unknown command '" + name + "'");
}

std::string encode_command(const SessionCommand& command) {
  json j = std::visit(
      Overloaded{
          [](const cmd::Hello& c) { return json{{"cmd", "hello"}, {"version", c.version}}; },
          [](const cmd::LoadProgram& c) { return json{{"cmd", "load_program"}, {"text", c.text}}; },
          [](const cmd::Prove& c) {
            json o{{"cmd", "prove"}, {"goal", c.goal}};
            if (c.max_steps) o["max_steps"] = *c.max_steps;
            return o;
          },
          [](const cmd::Run& c) {
            json o{{"cmd", "run"}, {"goal", c.goal}, {"trace", c.trace}};
            if (c.max_steps) o["max_steps"] = *c.max_steps;
            return o;
          },
          [](const cmd::Answer& c) { return json{{"cmd", "answer"}, {"id", c.id}, {"constant", c.constant}}; },
          [](const cmd::SaveTree& c) { return json{{"cmd", "save_tree"}, {"path", c.path}}; },
          [](const cmd::Quit&) { return json{{"cmd", "quit"}}; },
      },
      command);
  return j.dump();
}

std::string encode_event(const Envelope& envelope) {
  json j = std::visit(
      Overloaded{
          [](const ev::Hello& e) {
            return json{{"event", "hello"}, {"protocol", kProtocolName}, {"version", e.version}};
          },
          [](const ev::ReadRequest& e) {
            return json{{"event", "read_request"}, {"var", e.var},          {"generated", e.generated},
                        {"prompt", e.prompt},      {"goal", e.goal},        {"line", e.span.line},
                        {"column", e.span.column}};
          },
          [](const ev::Print& e) { return json{{"event", "print"}, {"text", e.text}}; },
          [](const ev::NodeEntered& e) {
            return json{{"event", "node_entered"}, {"index", e.index}, {"rule", to_string(e.rule)}};
          },
          [](const ev::Result& e) {
            json o{{"event", "result"}, {"outcome", e.outcome}};
            if (e.nodes) o["nodes"] = *e.nodes;
            if (e.steps) o["steps"] = *e.steps;
            if (e.clauses) o["clauses"] = *e.clauses;
            if (!e.witnesses.empty()) o["witnesses"] = e.witnesses;
            if (e.atom) o["atom"] = *e.atom;
            if (e.reads) o["reads"] = *e.reads;
            if (!e.message.empty()) o["message"] = e.message;
            return o;
          },
          [](const ev::Error& e) { return json{{"event", "error"}, {"kind", e.kind}, {"message", e.message}}; },
      },
      envelope.event);
  j["id"] = envelope.id;
  return j.dump();
}

Envelope decode_event(std::string_view line) {
  const json j = parse_object(line);
  Envelope out;
  out.id = need_count(j, "id");
  const std::string name = need_string(j, "event");
  if (name == "hello") {
    if (need_string(j, "protocol") != kProtocolName) throw ProtocolError("unknown protocol");
    out.event = ev::Hello{need(j, "version").get<int>()};
  } else if (name == "read_request") {
    out.event = ev::ReadRequest{need_string(j, "var"), need_string(j, "generated"), need_string(j, "prompt"),
                                need_string(j, "goal"),
                                SourceSpan{static_cast<std::uint32_t>(need_count(j, "line")),
                                           static_cast<std::uint32_t>(need_count(j, "column"))}};
  } else if (name == "print") {
    out.event = ev::Print{need_string(j, "text")};
  } else if (name == "node_entered") {
    auto rule = rule_from_string(need_string(j, "rule"));
    if (!rule) throw ProtocolError("unknown rule");
    out.event = ev::NodeEntered{need_count(j, "index"), *rule};
  } else if (name == "result") {
    ev::Result r;
    r.outcome = need_string(j, "outcome");
    r.nodes = maybe_count(j, "nodes");
    r.steps = maybe_count(j, "steps");
    r.clauses = maybe_count(j, "clauses");
    if (j.contains("witnesses")) r.witnesses = j.at("witnesses").get<std::vector<std::string>>();
    if (j.contains("atom")) r.atom = need_string(j, "atom");
    r.reads = maybe_count(j, "reads");
    if (j.contains("message")) r.message = need_string(j, "message");
    out.event = std::move(r);
  } else if (name == "error") {
    out.event = ev::Error{need_string(j, "kind"), need_string(j, "message")};
  } else {
    throw ProtocolError("unknown event '" + name + "'");
  }
  return out;
}

std::optional<std::string> FdChannel::read_line() {
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (eof_ || buffer_.size() > kMaxLine) {
      if (buffer_.empty() || buffer_.size() > kMaxLine) return std::nullopt;
      std::string rest = std::move(buffer_);
      buffer_.clear();
      return rest;
    }
    char chunk[4096];
    const ssize_t n = ::read(in_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      eof_ = true;
      continue;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void FdChannel::write_line(std::string_view line) {
  std::string data(line);
  data += '\n';
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::send(out_, data.data() + done, data.size() - done, MSG_NOSIGNAL);
    if (n < 0 && errno == ENOTSOCK) {
      const ssize_t w = ::write(out_, data.data() + done, data.size() - done);
      if (w <= 0) return;
      done += static_cast<std::size_t>(w);
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return;
    done += static_cast<std::size_t>(n);
  }
}

std::uint64_t default_max_steps() {
  const char* env = std::getenv("LP01_MAX_STEPS");
  if (env == nullptr) return ProverOptions::kDefaultMaxSteps;
  std::uint64_t value = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc{} || ptr != end || value == 0) return ProverOptions::kDefaultMaxSteps;
  return value;
}

namespace {

struct Closed {};

class Session {
 public:
  Session(LineChannel& channel, const SessionOptions& options) : channel_(channel), options_(options) {}

  void run() {
    send(ev::Hello{});
    try {
      while (auto line = channel_.read_line()) {
        if (line->find_first_not_of(" \t") == std::string::npos) continue;
        dispatch(decode(*line));
      }
    } catch (const Closed&) {
    }
  }

 private:
  void send(SessionEvent event) { channel_.write_line(encode_event(Envelope{next_id_++, std::move(event)})); }

  [[noreturn]] void close_with(std::string kind, std::string message) {
    send(ev::Error{std::move(kind), std::move(message)});
    throw Closed{};
  }

  SessionCommand decode(const std::string& line) {
    try {
      return decode_command(line);
    } catch (const ProtocolError& e) {
      close_with("protocol", e.what());
    }
  }

  void dispatch(const SessionCommand& command) {
    std::visit(Overloaded{
                   [&](const cmd::Hello& c) { hello(c); },
                   [&](const cmd::LoadProgram& c) { load(c); },
                   [&](const cmd::Prove& c) { prove_goal(c.goal, c.max_steps); },
                   [&](const cmd::Run& c) { run_goal(c); },
                   [&](const cmd::Answer&) { close_with("protocol", "answer without an outstanding read request"); },
                   [&](const cmd::SaveTree& c) { save(c); },
                   [&](const cmd::Quit&) {
                     send(ev::Result{.outcome = "bye"});
                     throw Closed{};
                   },
               },
               command);
  }

  void hello(const cmd::Hello& c) {
    if (c.version != kProtocolVersion) {
      close_with("version", "client speaks version " + std::to_string(c.version) + ", server speaks " +
                                std::to_string(kProtocolVersion));
    }
    send(ev::Result{.outcome = "ok"});
  }

  void load(const cmd::LoadProgram& c) {
    try {
      Program p = parse_program(c.text);
      check_levels(p);
      send(ev::Result{.outcome = "loaded", .clauses = p.clauses.size()});
      program_ = std::move(p);
      tree_.reset();
    } catch (const Error& e) {
      send(error_for(e));
    }
  }

  static ev::Error error_for(const Error& e) {
    if (dynamic_cast<const ParseError*>(&e)) return {"parse", e.what()};
    if (dynamic_cast<const CloseError*>(&e)) return {"close", e.what()};
    if (dynamic_cast<const LevelError*>(&e)) return {"level", e.what()};
    return {"error", e.what()};
  }

  // Proves `goal` and reports the outcome; returns the tree on success.
  const ProofTree* prove_goal(const std::string& goal_text, std::optional<std::uint64_t> max_steps,
                              bool report_success = true) {
    if (!program_) {
      send(ev::Error{"no-program", "load a program first"});
      return nullptr;
    }
    Formula goal = Formula::top();
    try {
      goal = parse_goal(goal_text);
      check_levels(*program_, goal);
    } catch (const Error& e) {
      send(error_for(e));
      return nullptr;
    }
    ProverOptions po;
    po.max_steps = max_steps.value_or(options_.max_steps);
    po.occurs_check = options_.occurs_check;
    ProveResult r = prove(*program_, goal, po);
    if (r.status != ProveStatus::kProved) {
      send(ev::Result{.outcome = r.status == ProveStatus::kDepthExceeded ? "depth_exceeded" : "not_provable",
                      .steps = r.steps});
      return nullptr;
    }
    tree_ = TreeDocument{program_hash(*program_), std::move(*r.tree)};
    if (report_success) send(ev::Result{.outcome = "proved", .nodes = tree_->tree.nodes.size(), .steps = r.steps});
    return &tree_->tree;
  }

  class RemoteOracle : public InteractionOracle {
   public:
    explicit RemoteOracle(Session& s) : s_(s) {}

    std::optional<std::string> request_constant(const ReadRequest& request) override {
      const std::uint64_t id = s_.next_id_;
      s_.send(ev::ReadRequest{request.variable, request.generated, "choose a value for " + request.variable,
                              request.goal, request.span});
      while (auto line = s_.channel_.read_line()) {
        if (line->find_first_not_of(" \t") == std::string::npos) continue;
        SessionCommand c;
        try {
          c = decode_command(*line);
        } catch (const ProtocolError& e) {
          violation = e.what();
          return std::nullopt;
        }
        if (std::holds_alternative<cmd::Quit>(c)) {
          quit = true;
          return std::nullopt;
        }
        const auto* a = std::get_if<cmd::Answer>(&c);
        if (a == nullptr) {
          violation = "only answer or quit is allowed while a read request is outstanding";
          return std::nullopt;
        }
        if (a->id != id) {
          violation = "answer id " + std::to_string(a->id) + " does not match read request " + std::to_string(id);
          return std::nullopt;
        }
        if (!is_constant_name(a->constant)) {
          s_.send(ev::Error{"invalid-answer", "'" + a->constant + "' is not a constant; answer again"});
          continue;
        }
        return a->constant;
      }
      disconnected = true;
      return std::nullopt;
    }

    void emit(const ExecEvent& event) override {
      if (event.kind == ExecEvent::Kind::kPrint) {
        s_.send(ev::Print{event.text});
      } else {
        s_.send(ev::NodeEntered{event.index, event.rule});
      }
    }

    std::string violation;
    bool quit = false;
    bool disconnected = false;

   private:
    Session& s_;
  };

  void run_goal(const cmd::Run& c) {
    const ProofTree* tree = prove_goal(c.goal, c.max_steps, false);
    if (tree == nullptr) return;
    RemoteOracle oracle(*this);
    ExecOptions eo;
    eo.trace = c.trace;
    const ExecOutcome out = execute(*tree, oracle, eo);
    if (!oracle.violation.empty()) close_with("protocol", oracle.violation);
    if (oracle.disconnected) throw Closed{};
    ev::Result r{.outcome = std::string(to_string(out.kind)), .witnesses = out.witnesses, .reads = out.reads};
    if (out.falsified_instance) r.atom = format(*out.falsified_instance);
    r.message = out.reason;
    send(std::move(r));
    if (oracle.quit) {
      send(ev::Result{.outcome = "bye"});
      throw Closed{};
    }
  }

  void save(const cmd::SaveTree& c) {
    if (!tree_) {
      send(ev::Error{"no-tree", "prove a goal before saving"});
      return;
    }
    std::ofstream out(c.path, std::ios::binary | std::ios::trunc);
    out << serialize_tree(*tree_);
    out.close();
    if (!out) {
      send(ev::Error{"io", "cannot write " + c.path});
      return;
    }
    send(ev::Result{.outcome = "saved"});
  }

  LineChannel& channel_;
  const SessionOptions& options_;
  std::uint64_t next_id_ = 1;
  std::optional<Program> program_;
  std::optional<TreeDocument> tree_;
};

std::pair<std::string, std::uint16_t> split_address(const std::string& address) {
  std::string host = "127.0.0.1";
  std::string port = address;
  if (auto colon = address.rfind(':'); colon != std::string::npos) {
    if (colon > 0) host = address.substr(0, colon);
    port = address.substr(colon + 1);
  }
  if (host == "localhost") host = "127.0.0.1";
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (port.empty() || ec != std::errc{} || ptr != port.data() + port.size() || value > 65535) {
    throw Error("bad listen address '" + address + "'");
  }
  return {host, static_cast<std::uint16_t>(value)};
}

}  // namespace

void run_session(LineChannel& channel, const SessionOptions& options) { Session(channel, options).run(); }

struct Server::Impl {
  int listen_fd = -1;
  int wake[2] = {-1, -1};
  std::mutex mu;
  struct Conn {
    int fd;
    std::thread thread;
  };
  std::list<Conn> conns;
};

Server::Server(SessionOptions options) : options_(options), impl_(std::make_unique<Impl>()) {
  if (::pipe(impl_->wake) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
}

Server::~Server() {
  stop();
  for (auto& c : impl_->conns) {
    if (c.thread.joinable()) c.thread.join();
  }
  if (impl_->listen_fd >= 0) ::close(impl_->listen_fd);
  ::close(impl_->wake[0]);
  ::close(impl_->wake[1]);
}

void Server::listen(const std::string& address) {
  auto [host, port] = split_address(address);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) throw Error("bad listen host '" + host + "'");
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) throw Error(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd, 16) != 0) {
    const std::string why = std::strerror(errno);
    ::close(fd);
    throw Error("cannot listen on " + address + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  impl_->listen_fd = fd;
}

void Server::serve() {
  if (impl_->listen_fd < 0) throw Error("serve() before listen()");
  while (!stopping_) {
    pollfd fds[2] = {{impl_->listen_fd, POLLIN, 0}, {impl_->wake[0], POLLIN, 0}};
    if (::poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (stopping_ || (fds[1].revents & POLLIN)) break;
    if (!(fds[0].revents & POLLIN)) continue;
    const int client = ::accept4(impl_->listen_fd, nullptr, nullptr, SOCK_CLOEXEC);
    if (client < 0) continue;
    std::lock_guard lock(impl_->mu);
    auto& conn = impl_->conns.emplace_back(Impl::Conn{client, {}});
    conn.thread = std::thread([this, client] {
      FdChannel channel(client, client);
      try {
        run_session(channel, options_);
      } catch (const std::exception&) {
      }
      ::shutdown(client, SHUT_RDWR);
      std::lock_guard lock(impl_->mu);
      for (auto& c : impl_->conns) {
        if (c.fd == client) c.fd = -1;
      }
      ::close(client);
    });
  }
}

void Server::stop() {
  if (stopping_.exchange(true)) return;
  const char byte = 1;
  [[maybe_unused]] auto n = ::write(impl_->wake[1], &byte, 1);
  std::lock_guard lock(impl_->mu);
  for (auto& c : impl_->conns) {
    if (c.fd >= 0) ::shutdown(c.fd, SHUT_RDWR);
  }
}

}  // namespace lp01
