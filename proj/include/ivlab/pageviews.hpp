#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ivlab/data_ingest.hpp"

namespace ivlab {

struct HttpResponse {
    int status = 0;  // 0 = transport failure (no HTTP response)
    std::string body;
    std::string error;
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string& url) = 0;
};

/// HTTPS transport backed by cpp-httplib.
class HttplibTransport final : public HttpTransport {
public:
    explicit HttplibTransport(std::string user_agent = "ivol-lab/0.1 (pageviews research client)");
    HttpResponse get(const std::string& url) override;

private:
    std::string user_agent_;
};

struct PageviewsOptions {
    std::filesystem::path cache_root = "cache";
    bool allow_network = false;
    std::string project = "en.wikipedia";
    std::string access = "all-access";
    std::string agent = "all-agents";
    int max_attempts = 4;
    std::chrono::milliseconds initial_backoff{500};
    /// Injected so tests can observe backoff without sleeping.
    std::function<void(std::chrono::milliseconds)> sleep;
};

struct PageviewsResult {
    std::vector<CountObservation> observations;
    std::vector<Date> missing_days;  // calendar days in range the service did not return
    std::size_t network_requests = 0;
};

/// Percent-encoded article title as used in REST paths (spaces become '_').
std::string encode_article(const std::string& title);

std::string pageviews_url(const PageviewsOptions& options, const std::string& article, Date start,
                          Date end);

/// Parses a per-article daily pageviews JSON document.
std::vector<CountObservation> parse_pageviews_json(const std::string& body);

/// Daily Wikimedia pageviews with a per-year file cache at
/// `<cache_root>/<article>/<year>.csv`. Requests are serialized; cached
/// ranges are served without network access.
class PageviewsClient {
public:
    PageviewsClient(PageviewsOptions options, std::shared_ptr<HttpTransport> transport);

    PageviewsResult fetch(const std::string& article, Date start, Date end);

    std::filesystem::path cache_file(const std::string& article, int year) const;

private:
    HttpResponse get_with_retry(const std::string& url, std::size_t& requests);

    PageviewsOptions options_;
    std::shared_ptr<HttpTransport> transport_;
    std::mutex request_mutex_;
};

}  // namespace ivlab
