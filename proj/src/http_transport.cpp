#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "reta/corpus.hpp"
#include "reta/errors.hpp"

namespace reta {

namespace {

// NCBI courtesy limit without an API key: 3 requests/second.
class RateLimiter {
public:
    explicit RateLimiter(double per_second) : interval_(1.0 / per_second) {}

    void acquire() {
        std::unique_lock lock(mu_);
        const auto now = std::chrono::steady_clock::now();
        if (now < next_) {
            auto wait = next_ - now;
            lock.unlock();
            std::this_thread::sleep_for(wait);
            lock.lock();
        }
        next_ = std::max(next_, std::chrono::steady_clock::now()) +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(interval_));
    }

private:
    std::mutex mu_;
    std::chrono::steady_clock::time_point next_ = std::chrono::steady_clock::now();
    double interval_;
};

class EntrezHttpTransport final : public Transport {
public:
    explicit EntrezHttpTransport(std::string api_key)
        : api_key_(std::move(api_key)),
          limiter_(api_key_.empty() ? 3.0 : 10.0),
          client_("https://eutils.ncbi.nlm.nih.gov") {
        client_.set_connection_timeout(10);
        client_.set_read_timeout(30);
    }

    std::string get(const std::string& path,
                    const std::map<std::string, std::string>& params) override {
        limiter_.acquire();
        httplib::Params p(params.begin(), params.end());
        if (!api_key_.empty()) p.emplace("api_key", api_key_);
        auto res = client_.Get(path, p, httplib::Headers{});
        if (!res) {
            throw transport_error("entrez: " + httplib::to_string(res.error()));
        }
        if (res->status == 429 || res->status == 503) {
            double retry_after = 1.0;
            if (res->has_header("Retry-After")) {
                retry_after = std::atof(res->get_header_value("Retry-After").c_str());
            }
            throw rate_limit_error("entrez: HTTP " + std::to_string(res->status),
                                   retry_after);
        }
        if (res->status != 200) {
            throw transport_error("entrez: HTTP " + std::to_string(res->status));
        }
        return res->body;
    }

private:
    std::string api_key_;
    RateLimiter limiter_;
    httplib::Client client_;
};

}  // namespace

std::unique_ptr<Transport> make_entrez_http_transport(const std::string& api_key) {
    std::string key = api_key;
    if (key.empty()) {
        if (const char* env = std::getenv("RETA_NCBI_API_KEY")) key = env;
    }
    return std::make_unique<EntrezHttpTransport>(std::move(key));
}

}  // namespace reta
