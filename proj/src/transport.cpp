#include "colav/transport.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include <httplib.h>

#include "colav/decider.hpp"

namespace colav::llm {

using nlohmann::json;

json to_wire(const ChatRequest& request) {
    json messages = json::array();
    for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
    return {{"model", request.model}, {"messages", std::move(messages)}, {"temperature", request.temperature}};
}

std::string extract_content(const std::string& response_body) {
    json body;
    try {
        body = json::parse(response_body);
    } catch (const json::parse_error& e) {
        throw TransportError(std::string("response body is not JSON: ") + e.what());
    }
    try {
        const auto& content = body.at("choices").at(0).at("message").at("content");
        if (!content.is_string()) throw TransportError("choices[0].message.content is not a string");
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw TransportError(std::string("unexpected response shape: ") + e.what());
    }
}

std::string make_response_body(const std::string& content) {
    json body = {{"object", "chat.completion"},
                 {"choices", json::array({{{"index", 0},
                                           {"message", {{"role", "assistant"}, {"content", content}}},
                                           {"finish_reason", "stop"}}})}};
    return body.dump();
}

HttpChatTransport::HttpChatTransport(const std::string& endpoint_url, std::string api_key)
    : api_key_(std::move(api_key)) {
    static const std::regex url_re(R"(^(https?)://([^/:]+)(:[0-9]+)?(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(endpoint_url, m, url_re))
        throw std::invalid_argument("llm.endpoint_url: cannot parse '" + endpoint_url + "'");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (m[1] == "https")
        throw std::invalid_argument("llm.endpoint_url: https endpoints need a build with TLS support");
#endif
    scheme_host_port_ = m[1].str() + "://" + m[2].str() + m[3].str();
    path_ = m[4].matched ? m[4].str() : "/";
}

std::string HttpChatTransport::complete(const ChatRequest& request) {
    httplib::Client client(scheme_host_port_);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(request.timeout_s));
    const auto sec = static_cast<time_t>(timeout.count() / 1000000);
    const auto usec = static_cast<time_t>(timeout.count() % 1000000);
    client.set_connection_timeout(sec, usec);
    client.set_read_timeout(sec, usec);
    client.set_write_timeout(sec, usec);

    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto res = client.Post(path_, headers, to_wire(request).dump(), "application/json");
    if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw TransportError("endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body);
    return extract_content(res->body);
}

FixtureTransport::FixtureTransport(std::vector<std::string> bodies) : bodies_(std::move(bodies)) {
    if (bodies_.empty()) throw std::invalid_argument("fixture transport needs at least one response");
}

std::unique_ptr<FixtureTransport> FixtureTransport::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("fixture " + path.string() + " is not valid JSON: " + e.what());
    }
    const json& list = doc.is_object() && doc.contains("responses") ? doc.at("responses") : doc;
    if (!list.is_array() || list.empty())
        throw std::runtime_error("fixture " + path.string() + " must hold a non-empty array of responses");
    std::vector<std::string> bodies;
    for (const auto& item : list) {
        if (item.is_string())
            bodies.push_back(make_response_body(item.get<std::string>()));
        else if (item.is_object())
            bodies.push_back(item.dump());
        else
            throw std::runtime_error("fixture " + path.string() + ": responses must be strings or objects");
    }
    return std::make_unique<FixtureTransport>(std::move(bodies));
}

std::string FixtureTransport::complete(const ChatRequest&) {
    std::string body;
    {
        std::lock_guard lock(mutex_);
        body = bodies_[std::min(next_, bodies_.size() - 1)];
        ++next_;
    }
    return extract_content(body);
}

std::size_t FixtureTransport::calls() const {
    std::lock_guard lock(mutex_);
    return next_;
}

std::unique_ptr<ChatTransport> make_rule_echo_transport() {
    return std::make_unique<CallbackTransport>([](const ChatRequest& request) -> std::string {
        if (!request.context) throw TransportError("echo transport needs the decision context");
        const auto& in = *request.context;
        const auto d = colregs::rule_decide(in.geometry, in.risk, in.state, in.thresholds);
        return render_response({d.situation, d.action, d.reasoning});
    });
}

}  // namespace colav::llm
