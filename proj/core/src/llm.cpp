#include "molehill/llm.hpp"

#include <cctype>
#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "molehill/errors.hpp"

namespace molehill {

namespace {

bool looks_like_url(const std::string& url) {
    const auto sep = url.find("://");
    if (sep == std::string::npos || sep == 0 || sep + 3 >= url.size()) return false;
    for (std::size_t i = 0; i < sep; ++i) {
        const unsigned char c = static_cast<unsigned char>(url[i]);
        if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
    }
    return true;
}

// Matching close bracket of the '[' at `open`, honoring JSON strings and
// escapes. Returns npos when unbalanced.
std::size_t matching_bracket(const std::string& text, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
        } else if (c == '"') {
            in_string = true;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            if (--depth == 0) return i;
        }
    }
    return std::string::npos;
}

}  // namespace

void FeatureContext::validate() const {
    if (symbol.empty()) throw InvalidContextError("symbol is empty");
    if (label.empty()) throw InvalidContextError("label is empty");
    if (!start_date.is_valid() || !end_date.is_valid())
        throw InvalidContextError("invalid calendar date");
    if (end_date < start_date) throw InvalidContextError("end date precedes start date");
}

std::string render_feature_prompt(const FeatureContext& ctx) {
    ctx.validate();
    return "What happened between " + ctx.start_date.long_format() + " and " +
           ctx.end_date.long_format() + " that caused the stock symbol " + ctx.symbol + " to " +
           ctx.label + "?";
}

std::string render_resources_prompt(const FeatureContext& ctx) {
    ctx.validate();
    return "Give me a json formatted list of hyperlinked internet resources that might be "
           "related to the stock " +
           ctx.symbol + " price " + ctx.label + " between " + ctx.start_date.long_format() +
           " and " + ctx.end_date.long_format() +
           ".  Include any public datasets, news sources, social media, and industry "
           "publications that are relevant to the industry.  The JSON should for formatted as a "
           "list where each item has a 'name' member and a 'url' member.";
}

std::vector<ResourceLink> parse_resources(const std::string& body) {
    for (std::size_t open = body.find('['); open != std::string::npos;
         open = body.find('[', open + 1)) {
        const std::size_t close = matching_bracket(body, open);
        if (close == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body.substr(open, close - open + 1));
        } catch (const nlohmann::json::exception&) {
            continue;
        }
        if (!j.is_array()) continue;

        std::vector<ResourceLink> links;
        for (const auto& item : j) {
            if (!item.is_object() || !item.contains("name") || !item.contains("url") ||
                !item["name"].is_string() || !item["url"].is_string())
                throw SchemaMismatchError("item missing 'name'/'url' string members");
            ResourceLink link{item["name"].get<std::string>(), item["url"].get<std::string>()};
            if (link.name.empty() || !looks_like_url(link.url))
                throw SchemaMismatchError("empty name or malformed url: '" + link.url + "'");
            links.push_back(std::move(link));
        }
        return links;
    }
    throw NoJsonFoundError();
}

std::string query(Transport& transport, const std::string& prompt, const QueryOptions& options) {
    const int attempts = std::max(0, options.retries) + 1;
    int last_status = 0;
    bool timed_out = false;
    std::string detail = "transport failed";
    for (int attempt = 0; attempt < attempts; ++attempt) {
        TransportReply reply;
        try {
            reply = transport.send(prompt);
        } catch (const std::exception& e) {
            last_status = 0;
            timed_out = false;
            detail = e.what();
            continue;
        }
        if (reply.elapsed > options.timeout) {
            last_status = reply.status;
            timed_out = true;
            detail = "reply exceeded the " + std::to_string(options.timeout.count()) +
                     " ms deadline";
            continue;
        }
        if (reply.status >= 200 && reply.status < 300) return reply.body;
        last_status = reply.status;
        timed_out = false;
        detail = "transport returned status " + std::to_string(reply.status);
    }
    throw TransportError(detail, last_status, timed_out);
}

HttpConfig http_config_from_env() {
    HttpConfig config;
    if (const char* url = std::getenv("MOLEHILL_LLM_URL")) config.url = url;
    if (const char* key = std::getenv("MOLEHILL_LLM_KEY")) config.key = key;
    if (const char* model = std::getenv("MOLEHILL_LLM_MODEL")) config.model = model;
    if (config.url.empty())
        throw TransportError("MOLEHILL_LLM_URL is not set", 0, false);
    return config;
}

namespace {

class HttpChatTransport final : public Transport {
  public:
    explicit HttpChatTransport(HttpConfig config) : config_(std::move(config)) {
        const auto scheme_end = config_.url.find("://");
        if (scheme_end == std::string::npos)
            throw TransportError("endpoint url has no scheme: " + config_.url, 0, false);
        const auto path_start = config_.url.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            base_ = config_.url;
            path_ = "/v1/chat/completions";
        } else {
            base_ = config_.url.substr(0, path_start);
            path_ = config_.url.substr(path_start);
        }
    }

    TransportReply send(const std::string& prompt) override {
        const nlohmann::json payload = {
            {"model", config_.model},
            {"messages", {{{"role", "user"}, {"content", prompt}}}}};

        const auto begin = std::chrono::steady_clock::now();
        TransportReply reply;
        try {
            httplib::Client client(base_);
            client.set_connection_timeout(30, 0);
            client.set_read_timeout(120, 0);
            httplib::Headers headers;
            if (!config_.key.empty())
                headers.emplace("Authorization", "Bearer " + config_.key);
            const auto res = client.Post(path_, headers, payload.dump(), "application/json");
            if (!res) {
                reply.status = 0;
                reply.body = httplib::to_string(res.error());
            } else {
                reply.status = res->status;
                reply.body = extract_content(res->body);
            }
        } catch (const std::exception& e) {
            reply.status = 0;
            reply.body = e.what();
        }
        reply.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - begin);
        return reply;
    }

  private:
    static std::string extract_content(const std::string& body) {
        try {
            const auto j = nlohmann::json::parse(body);
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception&) {
            return body;  // not a chat-completions envelope; pass through
        }
    }

    HttpConfig config_;
    std::string base_;
    std::string path_;
};

}  // namespace

std::unique_ptr<Transport> make_http_transport(const HttpConfig& config) {
    return std::make_unique<HttpChatTransport>(config);
}

}  // namespace molehill
