#pragma once

// Prompt rendering for discovered features, JSON resource-list parsing, and a
// pluggable chat transport (one HTTP implementation, mock-friendly interface).

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "molehill/dates.hpp"

namespace molehill {

struct FeatureContext {
    std::string symbol;
    CivilDate start_date;
    CivilDate end_date;
    std::string label;  // the semantic annotation word(s)

    void validate() const;  // throws InvalidContext
};

struct ResourceLink {
    std::string name;
    std::string url;
};

// "What happened between July 8, 2014 and ..." with dates in English long form.
std::string render_feature_prompt(const FeatureContext& ctx);

// The resources-request template, reproduced verbatim from its source text
// (including the "should for formatted" wording and double sentence spacing).
std::string render_resources_prompt(const FeatureContext& ctx);

// Extracts the first parseable top-level JSON array from the reply body and
// reads {name, url} items. Throws NoJsonFound / SchemaMismatch.
std::vector<ResourceLink> parse_resources(const std::string& body);

struct TransportReply {
    int status = 0;
    std::string body;  // assistant text for chat transports
    std::chrono::milliseconds elapsed{0};
};

class Transport {
  public:
    virtual ~Transport() = default;
    // One blocking prompt round-trip. Implementations must be safe to share
    // across threads and must report wall time in `elapsed`.
    virtual TransportReply send(const std::string& prompt) = 0;
};

struct QueryOptions {
    std::chrono::milliseconds timeout{30000};
    int retries = 0;  // extra attempts after the first
};

// Returns the reply body, retrying at most `retries` times on non-2xx status
// or deadline overruns; throws TransportError once attempts are exhausted.
std::string query(Transport& transport, const std::string& prompt,
                  const QueryOptions& options = {});

struct HttpConfig {
    std::string url;  // chat-completions endpoint
    std::string key;
    std::string model = "gpt-3.5-turbo";
};

// MOLEHILL_LLM_URL / MOLEHILL_LLM_KEY / MOLEHILL_LLM_MODEL.
HttpConfig http_config_from_env();

// Chat-completions client; `send` posts the prompt as one user message and
// returns choices[0].message.content as the body.
std::unique_ptr<Transport> make_http_transport(const HttpConfig& config);

}  // namespace molehill
