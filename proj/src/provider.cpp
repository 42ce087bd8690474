#include "provider.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "util.hpp"

namespace dmnkit {

namespace njson = nlohmann;

ProviderConfig load_provider_config(const std::string& path) {
    njson::json doc;
    try {
        doc = njson::json::parse(read_file(path));
    } catch (const njson::json::parse_error& e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("$", "provider config must be an object");

    ProviderConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "endpoint") cfg.endpoint = value.get<std::string>();
        else if (key == "model") cfg.model = value.get<std::string>();
        else if (key == "temperature") cfg.temperature = value.get<double>();
        else if (key == "json_mode") cfg.json_mode = value.get<bool>();
        else if (key == "max_attempts") cfg.max_attempts = value.get<int>();
        else if (key == "backoff_ms") cfg.backoff_ms = value.get<std::vector<int>>();
        else if (key == "credential_env") cfg.credential_env = value.get<std::string>();
        else if (key == "timeout_s") cfg.timeout_s = value.get<int>();
        else throw SchemaError(key, "unknown provider config key");
    }
    if (cfg.temperature < 0.0 || cfg.temperature > 2.0)
        throw SchemaError("temperature", "must lie in [0, 2]");
    if (cfg.max_attempts < 1) throw SchemaError("max_attempts", "must be at least 1");
    if (cfg.endpoint.empty()) throw SchemaError("endpoint", "must not be empty");
    return cfg;
}

ProviderAttempt StubProvider::attempt(const std::string&, const std::string& user_text) {
    ProviderAttempt a;
    std::optional<std::string> block = first_fenced_block(user_text);
    if (!block) {
        a.status = 0;
        a.body = "stub provider found no fenced block in the user prompt";
        return a;
    }
    a.status = 200;
    a.body = *block;
    return a;
}

ScriptedProvider::ScriptedProvider(std::vector<ProviderAttempt> script)
    : script_(std::move(script)) {}

ProviderAttempt ScriptedProvider::attempt(const std::string&, const std::string&) {
    std::size_t i = static_cast<std::size_t>(calls_);
    ++calls_;
    if (script_.empty()) return ProviderAttempt{0, "scripted provider has no script", 0, 0};
    if (i >= script_.size()) i = script_.size() - 1;
    return script_[i];
}

HttpProvider::HttpProvider(ProviderConfig cfg) : cfg_(std::move(cfg)) {}

namespace {

// "scheme://host[:port]/path" -> (scheme://host[:port], /path)
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    std::size_t scheme_end = endpoint.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    std::size_t path_start = endpoint.find('/', host_start);
    if (path_start == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

}  // namespace

ProviderAttempt HttpProvider::attempt(const std::string& system_text,
                                      const std::string& user_text) {
    ProviderAttempt a;
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (cfg_.endpoint.rfind("https://", 0) == 0) {
        a.status = 0;
        a.body = "endpoint uses https but this build lacks TLS support";
        return a;
    }
#endif
    const char* key = nullptr;
    if (!cfg_.credential_env.empty()) {
        key = std::getenv(cfg_.credential_env.c_str());
        if (!key || !*key) {
            a.status = 401;
            a.body = "credential environment variable '" + cfg_.credential_env + "' is not set";
            return a;
        }
    }

    auto [origin, path] = split_endpoint(cfg_.endpoint);
    httplib::Client client(origin);
    client.set_connection_timeout(cfg_.timeout_s, 0);
    client.set_read_timeout(cfg_.timeout_s, 0);
    client.set_write_timeout(cfg_.timeout_s, 0);

    njson::ordered_json body;
    body["model"] = cfg_.model;
    body["temperature"] = cfg_.temperature;
    if (cfg_.json_mode) body["response_format"] = {{"type", "json_object"}};
    body["messages"] = njson::json::array({
        njson::json{{"role", "system"}, {"content", system_text}},
        njson::json{{"role", "user"}, {"content", user_text}},
    });

    httplib::Headers headers;
    if (key) headers.emplace("Authorization", std::string("Bearer ") + key);

    httplib::Result res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        a.status = 0;
        a.body = "transport error: " + httplib::to_string(res.error());
        return a;
    }
    a.status = res->status;
    if (res->status < 200 || res->status >= 300) {
        a.body = res->body;
        return a;
    }

    // Chat-completion envelope; anything else passes through verbatim and the
    // downstream parser decides what to make of it.
    try {
        njson::json env = njson::json::parse(res->body);
        if (env.contains("choices") && env["choices"].is_array() && !env["choices"].empty()) {
            const njson::json& msg = env["choices"][0]["message"];
            a.body = msg.value("content", std::string());
        } else {
            a.body = res->body;
        }
        if (env.contains("usage")) {
            a.prompt_tokens = env["usage"].value("prompt_tokens", 0);
            a.completion_tokens = env["usage"].value("completion_tokens", 0);
        }
    } catch (const njson::json::parse_error&) {
        a.body = res->body;
    }
    return a;
}

namespace {

bool transient(int status) {
    return status == 0 || status == 408 || status == 429 || status >= 500;
}

}  // namespace

ProviderResult request_generation(Provider& provider, const ProviderConfig& cfg,
                                  const std::string& system_text,
                                  const std::string& user_text) {
    auto start = std::chrono::steady_clock::now();
    ProviderAttempt last;
    int attempts = 0;
    while (attempts < cfg.max_attempts) {
        last = provider.attempt(system_text, user_text);
        ++attempts;
        if (last.status >= 200 && last.status < 300) {
            ProviderResult r;
            r.text = last.body;
            r.attempts = attempts;
            r.prompt_tokens = last.prompt_tokens;
            r.completion_tokens = last.completion_tokens;
            if (!provider.deterministic()) {
                auto end = std::chrono::steady_clock::now();
                r.latency_ms =
                    std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
            }
            return r;
        }
        if (!transient(last.status))
            throw ProviderError(last.status,
                                "provider request failed with status " +
                                    std::to_string(last.status) + ": " + last.body,
                                attempts);
        if (attempts < cfg.max_attempts && !cfg.backoff_ms.empty()) {
            std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(attempts - 1),
                                                    cfg.backoff_ms.size() - 1);
            int delay = cfg.backoff_ms[idx];
            if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
    }
    throw ProviderError(last.status,
                        "provider request exhausted " + std::to_string(cfg.max_attempts) +
                            " attempts, last status " + std::to_string(last.status) + ": " +
                            last.body,
                        attempts);
}

}  // namespace dmnkit
