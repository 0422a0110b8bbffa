#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lp01/error.hpp"
#include "lp01/prover.hpp"

namespace lp01 {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::string_view kProtocolName = "lp01";

namespace cmd {
struct Hello {
  int version = kProtocolVersion;
};
struct LoadProgram {
  std::string text;
};
struct Prove {
  std::string goal;
  std::optional<std::uint64_t> max_steps;
};
struct Run {
  std::string goal;
  std::optional<std::uint64_t> max_steps;
  bool trace = false;
};
struct Answer {
  std::uint64_t id = 0;
  std::string constant;
};
struct SaveTree {
  std::string path;
};
struct Quit {};
}  // namespace cmd

using SessionCommand =
    std::variant<cmd::Hello, cmd::LoadProgram, cmd::Prove, cmd::Run, cmd::Answer, cmd::SaveTree, cmd::Quit>;

namespace ev {
struct Hello {
  int version = kProtocolVersion;
};
struct ReadRequest {
  std::string var;
  std::string generated;
  std::string prompt;
  std::string goal;
  SourceSpan span;
};
struct Print {
  std::string text;
};
struct NodeEntered {
  std::size_t index = 0;
  RuleTag rule = RuleTag::kTopR;
};
/// `outcome` is one of: ok, loaded, proved, not_provable, depth_exceeded,
/// success, vacuous, aborted, saved, bye. The optional fields are filled in
/// where they mean something for that outcome.
struct Result {
  std::string outcome;
  std::optional<std::size_t> nodes;
  std::optional<std::uint64_t> steps;
  std::optional<std::size_t> clauses;
  std::vector<std::string> witnesses;
  std::optional<std::string> atom;
  std::optional<std::size_t> reads;
  std::string message;
};
struct Error {
  std::string kind;
  std::string message;
};
}  // namespace ev

using SessionEvent = std::variant<ev::Hello, ev::ReadRequest, ev::Print, ev::NodeEntered, ev::Result, ev::Error>;

struct Envelope {
  std::uint64_t id = 0;
  SessionEvent event;
};

/// A malformed or out-of-place message on the wire.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

SessionCommand decode_command(std::string_view line);
std::string encode_command(const SessionCommand& command);
Envelope decode_event(std::string_view line);
std::string encode_event(const Envelope& envelope);

/// One line in, one line out, without the trailing newline.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  /// nullopt at end of input.
  virtual std::optional<std::string> read_line() = 0;
  virtual void write_line(std::string_view line) = 0;
};

/// Reads and writes a pair of file descriptors. Lines longer than
/// `kMaxLine` bytes end the input.
class FdChannel : public LineChannel {
 public:
  static constexpr std::size_t kMaxLine = 1 << 20;

  FdChannel(int in_fd, int out_fd) : in_(in_fd), out_(out_fd) {}
  std::optional<std::string> read_line() override;
  void write_line(std::string_view line) override;

 private:
  int in_;
  int out_;
  std::string buffer_;
  bool eof_ = false;
};

struct SessionOptions {
  std::uint64_t max_steps = ProverOptions::kDefaultMaxSteps;
  bool occurs_check = true;
};

/// The step limit, or the value of LP01_MAX_STEPS when that is a positive
/// integer.
std::uint64_t default_max_steps();

/// Speaks the protocol over `channel` until the peer quits, disconnects or
/// breaks the protocol.
void run_session(LineChannel& channel, const SessionOptions& options = {});

/// TCP front end: every accepted connection gets its own thread and session.
class Server {
 public:
  explicit Server(SessionOptions options = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// `host:port`, `:port` or `port`; port 0 picks a free one. Throws Error.
  void listen(const std::string& address);
  std::uint16_t port() const { return port_; }
  /// Accepts connections until stop() is called.
  void serve();
  /// Safe to call from any thread.
  void stop();

 private:
  struct Impl;
  SessionOptions options_;
  std::unique_ptr<Impl> impl_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
};

}  // namespace lp01
