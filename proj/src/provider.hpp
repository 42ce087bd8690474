#ifndef DMNKIT_PROVIDER_HPP
#define DMNKIT_PROVIDER_HPP

#include <string>
#include <vector>

namespace dmnkit {

// One chat-completion endpoint. `credential_env` names the environment
// variable holding the API key; the key itself never lives in config files.
struct ProviderConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-5.1";
    double temperature = 0.1;
    bool json_mode = true;  // ask the endpoint for a JSON-object response
    int max_attempts = 4;
    std::vector<int> backoff_ms = {250, 1000, 4000};  // clamped to last entry
    std::string credential_env = "DMNKIT_API_KEY";
    int timeout_s = 120;
};

// JSON file with any subset of the fields above. Unknown keys are rejected,
// temperature outside [0, 2] and max_attempts < 1 are rejected.
ProviderConfig load_provider_config(const std::string& path);

// Outcome of a single exchange. status 0 means the failure happened below
// HTTP (DNS, connect, timeout); 2xx carries the completion text in `body`.
struct ProviderAttempt {
    int status = 0;
    std::string body;
    int prompt_tokens = 0;
    int completion_tokens = 0;
};

struct ProviderResult {
    std::string text;
    int attempts = 1;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    long long latency_ms = 0;
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual ProviderAttempt attempt(const std::string& system_text,
                                    const std::string& user_text) = 0;
    // Stubbed providers answer from local data; their records carry zero
    // latency so repeated runs stay byte-identical.
    virtual bool deterministic() const { return false; }
};

// Offline provider: answers with the first fenced block of the user prompt,
// which the prompt templates reserve for the worked example's graph.
class StubProvider : public Provider {
public:
    ProviderAttempt attempt(const std::string& system_text,
                            const std::string& user_text) override;
    bool deterministic() const override { return true; }
};

// Test double that replays a fixed attempt sequence; repeats the last entry
// once the script is exhausted.
class ScriptedProvider : public Provider {
public:
    explicit ScriptedProvider(std::vector<ProviderAttempt> script);
    ProviderAttempt attempt(const std::string& system_text,
                            const std::string& user_text) override;
    bool deterministic() const override { return true; }
    int calls() const { return calls_; }

private:
    std::vector<ProviderAttempt> script_;
    int calls_ = 0;
};

// Live chat-completion client over the configured endpoint.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(ProviderConfig cfg);
    ProviderAttempt attempt(const std::string& system_text,
                            const std::string& user_text) override;

private:
    ProviderConfig cfg_;
};

// Retry wrapper around any provider: transient failures (status 0, 408, 429,
// 5xx) retry on the backoff schedule up to cfg.max_attempts, then raise
// ProviderError with the last status. Any other non-2xx status raises
// immediately after the first attempt.
ProviderResult request_generation(Provider& provider, const ProviderConfig& cfg,
                                  const std::string& system_text,
                                  const std::string& user_text);

}  // namespace dmnkit

#endif
