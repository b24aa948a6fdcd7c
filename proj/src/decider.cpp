#include "colav/decider.hpp"

#include <chrono>

namespace colav::llm {

std::string_view to_string(Source s) {
    switch (s) {
        case Source::rule: return "rule";
        case Source::llm: return "llm";
        case Source::fallback: return "fallback";
    }
    return "?";
}

DeciderOutcome RuleDecider::decide(const DecisionInputs& in) {
    DeciderOutcome out;
    out.decision = colregs::rule_decide(in.geometry, in.risk, in.state, in.thresholds);
    out.source = Source::rule;
    return out;
}

DeciderOutcome decide(const DecisionInputs& in, const PromptTemplate& tmpl, const LlmConfig& config,
                      ChatTransport& transport) {
    const auto start = std::chrono::steady_clock::now();
    DeciderOutcome out;
    auto finish = [&]() {
        out.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    };
    auto fallback = [&]() {
        out.decision = colregs::rule_decide(in.geometry, in.risk, in.state, in.thresholds);
        out.source = Source::fallback;
        return finish();
    };

    ChatRequest request;
    try {
        request.model = config.model_name;
        request.temperature = config.temperature;
        request.timeout_s = config.timeout_s;
        request.context = &in;
        request.messages = {{"system", system_message()}, {"user", build_prompt(in.geometry, in.risk, in.state, tmpl)}};
    } catch (const std::exception& e) {
        out.errors.emplace_back(std::string("prompt: ") + e.what());
        return fallback();
    }

    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        try {
            out.raw_response = transport.complete(request);
            const ExplainableAction proposed = parse_response(out.raw_response);
            out.decision = resolve_action(proposed, in.geometry, in.risk, in.state, in.thresholds, out.discrepancies);
            out.source = Source::llm;
            return finish();
        } catch (const TransportError& e) {
            out.errors.emplace_back(std::string("transport: ") + e.what());
        } catch (const ParseError& e) {
            out.errors.emplace_back(std::string("parse: ") + e.what());
        } catch (const std::exception& e) {
            out.errors.emplace_back(std::string("unexpected: ") + e.what());
        }
    }
    return fallback();
}

LlmDecider::LlmDecider(PromptTemplate tmpl, LlmConfig config, std::unique_ptr<ChatTransport> transport)
    : template_(std::move(tmpl)), config_(std::move(config)), transport_(std::move(transport)) {
    template_.validate();
    config_.validate();
    if (!transport_) throw std::invalid_argument("LlmDecider: transport is required");
}

DeciderOutcome LlmDecider::decide(const DecisionInputs& inputs) {
    return llm::decide(inputs, template_, config_, *transport_);
}

}  // namespace colav::llm
