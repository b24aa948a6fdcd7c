#pragma once

// Chat-completions transports. Requests and responses follow the
// OpenAI-compatible wire shapes:
//   request  {"model", "messages": [{"role", "content"}], "temperature"}
//   response {"choices": [{"message": {"content"}}]}

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace colav::llm {

struct DecisionInputs;

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.2;
    double timeout_s = 5.0;
    // In-process context for mock transports. Never serialised.
    const DecisionInputs* context = nullptr;
};

/// Timeout, connection failure, HTTP error or malformed response body.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    /// Returns the assistant message content. Throws TransportError.
    virtual std::string complete(const ChatRequest& request) = 0;
};

nlohmann::json to_wire(const ChatRequest& request);

/// choices[0].message.content of a response body. Throws TransportError.
std::string extract_content(const std::string& response_body);

/// Response body wrapping a single assistant message.
std::string make_response_body(const std::string& content);

/// POSTs to an http:// or https:// chat-completions endpoint.
class HttpChatTransport final : public ChatTransport {
public:
    /// Throws std::invalid_argument for an unparsable URL or an https URL when
    /// the build has no TLS support.
    HttpChatTransport(const std::string& endpoint_url, std::string api_key);

    std::string complete(const ChatRequest& request) override;

private:
    std::string scheme_host_port_;
    std::string path_;
    std::string api_key_;
};

/// Replays canned response bodies in order; the last one repeats once the
/// list is exhausted.
class FixtureTransport final : public ChatTransport {
public:
    explicit FixtureTransport(std::vector<std::string> bodies);

    /// Fixture file: a JSON array, or an object with a "responses" array. A
    /// string element is an assistant message; an object element is a full
    /// response body. Throws std::runtime_error on a missing or malformed file.
    static std::unique_ptr<FixtureTransport> from_file(const std::filesystem::path& path);

    std::string complete(const ChatRequest& request) override;
    std::size_t calls() const;

private:
    std::vector<std::string> bodies_;
    mutable std::mutex mutex_;
    std::size_t next_ = 0;
};

/// Hands the request to a callable returning the assistant content.
class CallbackTransport final : public ChatTransport {
public:
    using Callback = std::function<std::string(const ChatRequest&)>;
    explicit CallbackTransport(Callback cb) : cb_(std::move(cb)) {}

    std::string complete(const ChatRequest& request) override { return cb_(request); }

private:
    Callback cb_;
};

/// Mock endpoint that answers with the rule-based decision for the request's
/// context, rendered in the model output format.
std::unique_ptr<ChatTransport> make_rule_echo_transport();

}  // namespace colav::llm
