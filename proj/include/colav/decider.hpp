#pragma once

#include <memory>
#include <string>
#include <vector>

#include "colav/colregs.hpp"
#include "colav/llm.hpp"
#include "colav/risk.hpp"
#include "colav/transport.hpp"

namespace colav::llm {

enum class Source { rule, llm, fallback };

std::string_view to_string(Source s);

struct DecisionInputs {
    risk::EncounterGeometry geometry;
    risk::RiskBreakdown risk;
    colregs::DecisionState state;
    colregs::Thresholds thresholds;
    long cycle = 0;
};

struct DeciderOutcome {
    colregs::Decision decision;
    Source source = Source::rule;
    double latency_s = 0.0;
    std::string raw_response;                // last model answer, kept for audit
    std::vector<std::string> discrepancies;  // consistency-guard overrides
    std::vector<std::string> errors;         // failed attempts
};

class Decider {
public:
    virtual ~Decider() = default;
    virtual DeciderOutcome decide(const DecisionInputs& inputs) = 0;
};

/// rule_decide behind the Decider interface.
class RuleDecider final : public Decider {
public:
    DeciderOutcome decide(const DecisionInputs& inputs) override;
};

/// Renders the prompt, queries the transport, parses and guards the answer.
/// Transport or parse failures are retried up to config.max_retries times;
/// after that the rule-based decision is returned with Source::fallback.
/// Never throws.
DeciderOutcome decide(const DecisionInputs& inputs, const PromptTemplate& tmpl, const LlmConfig& config,
                      ChatTransport& transport);

class LlmDecider final : public Decider {
public:
    LlmDecider(PromptTemplate tmpl, LlmConfig config, std::unique_ptr<ChatTransport> transport);

    DeciderOutcome decide(const DecisionInputs& inputs) override;

    ChatTransport& transport() { return *transport_; }

private:
    PromptTemplate template_;
    LlmConfig config_;
    std::unique_ptr<ChatTransport> transport_;
};

}  // namespace colav::llm
