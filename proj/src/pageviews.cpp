#include "ivlab/pageviews.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "ivlab/csv.hpp"
#include "ivlab/error.hpp"
#include "ivlab/log.hpp"

namespace ivlab {

namespace {

std::string compact(Date d) {
    const auto s = d.iso();
    return s.substr(0, 4) + s.substr(5, 2) + s.substr(8, 2);
}

struct CacheEntry {
    Date covered_from;
    Date covered_to;
    std::map<Date, long long> counts;
};

std::optional<CacheEntry> read_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string text(std::istreambuf_iterator<char>(in), {});
    const auto nl = text.find('\n');
    const std::string first = text.substr(0, nl);
    const std::string tag = "# covered ";
    if (first.rfind(tag, 0) != 0 || first.size() < tag.size() + 21) {
        log::warn("ignoring cache file without coverage line: " + path.string());
        return std::nullopt;
    }
    CacheEntry entry;
    entry.covered_from = Date::parse(first.substr(tag.size(), 10));
    entry.covered_to = Date::parse(first.substr(tag.size() + 11, 10));
    for (const auto& obs : parse_counts(text, path.string())) entry.counts[obs.date] = obs.count;
    return entry;
}

void write_cache(const std::filesystem::path& path, const CacheEntry& entry) {
    std::string text = "# covered " + entry.covered_from.iso() + ' ' + entry.covered_to.iso() + '\n';
    std::vector<CountObservation> rows;
    rows.reserve(entry.counts.size());
    for (const auto& [d, c] : entry.counts) rows.push_back({d, c});
    text += format_counts(rows);
    const auto tmp = path.string() + ".tmp";
    csv::write_text(tmp, text);
    std::filesystem::rename(tmp, path);
}

}  // namespace

HttplibTransport::HttplibTransport(std::string user_agent) : user_agent_(std::move(user_agent)) {}

HttpResponse HttplibTransport::get(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return {0, {}, "malformed url " + url};
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(30, 0);
    client.set_follow_location(true);
    auto res = client.Get(path, {{"User-Agent", user_agent_}});
    if (!res) return {0, {}, httplib::to_string(res.error())};
    return {res->status, res->body, {}};
}

std::string encode_article(const std::string& title) {
    std::string out;
    for (unsigned char c : title) {
        if (c == ' ') {
            out += '_';
        } else if (std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == '~' || c == '(' ||
                   c == ')' || c == ',' || c == '\'') {
            out += static_cast<char>(c);
        } else {
            char buf[4];
            std::snprintf(buf, sizeof buf, "%%%02X", c);
            out += buf;
        }
    }
    return out;
}

std::string pageviews_url(const PageviewsOptions& o, const std::string& article, Date start,
                          Date end) {
    return "https://wikimedia.org/api/rest_v1/metrics/pageviews/per-article/" + o.project + '/' +
           o.access + '/' + o.agent + '/' + encode_article(article) + "/daily/" + compact(start) +
           "00/" + compact(end) + "00";
}

std::vector<CountObservation> parse_pageviews_json(const std::string& body) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::network, std::string("pageviews response is not JSON: ") + e.what());
    }
    if (!doc.contains("items") || !doc["items"].is_array()) {
        throw Error(ErrorKind::network, "pageviews response has no 'items' array");
    }
    std::map<Date, long long> counts;
    for (const auto& item : doc["items"]) {
        const auto ts = item.at("timestamp").get<std::string>();
        if (ts.size() < 8) throw Error(ErrorKind::network, "bad pageviews timestamp '" + ts + "'");
        const Date d = Date::parse(ts.substr(0, 4) + '-' + ts.substr(4, 2) + '-' + ts.substr(6, 2));
        counts[d] += item.at("views").get<long long>();
    }
    std::vector<CountObservation> out;
    out.reserve(counts.size());
    for (const auto& [d, c] : counts) out.push_back({d, c});
    return out;
}

PageviewsClient::PageviewsClient(PageviewsOptions options, std::shared_ptr<HttpTransport> transport)
    : options_(std::move(options)), transport_(std::move(transport)) {
    if (!options_.sleep) {
        options_.sleep = [](std::chrono::milliseconds ms) { std::this_thread::sleep_for(ms); };
    }
}

std::filesystem::path PageviewsClient::cache_file(const std::string& article, int year) const {
    return options_.cache_root / encode_article(article) / (std::to_string(year) + ".csv");
}

HttpResponse PageviewsClient::get_with_retry(const std::string& url, std::size_t& requests) {
    std::lock_guard lock(request_mutex_);
    auto delay = options_.initial_backoff;
    HttpResponse last;
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        ++requests;
        last = transport_->get(url);
        const bool retryable = last.status == 0 || last.status == 429 || last.status >= 500;
        if (!retryable) return last;
        if (attempt < options_.max_attempts) {
            log::warn("pageviews request failed (" +
                      (last.status == 0 ? last.error : "HTTP " + std::to_string(last.status)) +
                      "), retrying");
            options_.sleep(delay);
            delay *= 2;
        }
    }
    throw Error(ErrorKind::network,
                "pageviews request failed after " + std::to_string(options_.max_attempts) +
                    " attempts: " +
                    (last.status == 0 ? last.error : "HTTP " + std::to_string(last.status)));
}

PageviewsResult PageviewsClient::fetch(const std::string& article, Date start, Date end) {
    if (end < start) throw Error(ErrorKind::usage, "pageviews range end precedes start");
    PageviewsResult result;
    std::map<Date, long long> merged;

    for (int year = start.year(); year <= end.year(); ++year) {
        const Date seg_from = std::max(start, Date(year, 1, 1));
        const Date seg_to = std::min(end, Date(year, 12, 31));
        const auto path = cache_file(article, year);
        auto cached = read_cache(path);

        const bool hit = cached && cached->covered_from <= seg_from && seg_to <= cached->covered_to;
        if (!hit) {
            if (!options_.allow_network) {
                throw Error(ErrorKind::network, "pageviews for '" + article + "' " + seg_from.iso() +
                                                    ".." + seg_to.iso() +
                                                    " not cached and network access is disabled");
            }
            const auto response =
                get_with_retry(pageviews_url(options_, article, seg_from, seg_to),
                               result.network_requests);
            if (response.status == 404) {
                throw Error(ErrorKind::network, "unknown article '" + article + "' (HTTP 404)");
            }
            if (response.status != 200) {
                throw Error(ErrorKind::network,
                            "pageviews request returned HTTP " + std::to_string(response.status));
            }
            CacheEntry entry;
            const bool extend = cached && cached->covered_from <= seg_to + 1 &&
                                seg_from <= cached->covered_to + 1;
            if (extend) {
                entry = std::move(*cached);
                entry.covered_from = std::min(entry.covered_from, seg_from);
                entry.covered_to = std::max(entry.covered_to, seg_to);
            } else {
                entry.covered_from = seg_from;
                entry.covered_to = seg_to;
            }
            for (const auto& obs : parse_pageviews_json(response.body)) {
                if (obs.date < seg_from || seg_to < obs.date) continue;
                entry.counts[obs.date] = obs.count;
            }
            write_cache(path, entry);
            cached = std::move(entry);
        }
        for (auto it = cached->counts.lower_bound(seg_from);
             it != cached->counts.end() && it->first <= seg_to; ++it) {
            merged[it->first] = it->second;
        }
    }

    for (Date d = start; d <= end; d = d + 1) {
        const auto it = merged.find(d);
        if (it == merged.end()) {
            result.missing_days.push_back(d);
        } else {
            result.observations.push_back({d, it->second});
        }
    }
    if (!result.missing_days.empty()) {
        log::warn("pageviews for '" + article + "': " + std::to_string(result.missing_days.size()) +
                  " day(s) missing, first " + result.missing_days.front().iso());
    }
    return result;
}

}  // namespace ivlab
