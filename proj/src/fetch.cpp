#include <chrono>
#include <cstdlib>
#include <fstream>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "peerscope/corpus.hpp"

namespace peerscope::corpus {

namespace fs = std::filesystem;
using json = nlohmann::json;

static std::string now_iso8601() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

static void write_atomic(const fs::path& target, const std::string& data) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
    }
    fs::rename(tmp, target);
}

Document fetch_wikipedia(const CompanyMeta& meta, const std::string& page_title,
                         const fs::path& cache_dir) {
    fs::create_directories(cache_dir);
    fs::path cache_path = cache_dir / (meta.ticker + ".txt");

    if (fs::exists(cache_path)) {
        std::ifstream in(cache_path, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        Document doc;
        doc.meta = meta;
        doc.raw_text = std::move(text);
        doc.source = DocSource::local_file;
        return doc;
    }

    const char* env = std::getenv("PEERSCOPE_WIKI_BASE_URL");
    std::string base = env && *env ? env : "https://en.wikipedia.org";

    httplib::Client client(base);
    client.set_follow_location(true);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);

    httplib::Params params{{"action", "query"},      {"prop", "extracts"},
                           {"explaintext", "1"},     {"format", "json"},
                           {"redirects", "1"},       {"titles", page_title}};
    auto res = client.Get(httplib::append_query_params("/w/api.php", params));
    if (!res)
        throw FetchError(FetchError::Kind::transport, meta.ticker, 0,
                         meta.ticker + ": transport failure contacting " + base + " (" +
                             httplib::to_string(res.error()) + ")");
    if (res->status != 200)
        throw FetchError(FetchError::Kind::http_status, meta.ticker, res->status,
                         meta.ticker + ": HTTP " + std::to_string(res->status) +
                             " from " + base);

    std::string extract;
    try {
        json j = json::parse(res->body);
        const json& pages = j.at("query").at("pages");
        for (const auto& [id, page] : pages.items()) {
            if (page.contains("missing") || id == "-1")
                throw FetchError(FetchError::Kind::page_missing, meta.ticker, 0,
                                 meta.ticker + ": Wikipedia page not found: " + page_title);
            extract = page.value("extract", "");
        }
    } catch (const json::exception& e) {
        throw FetchError(FetchError::Kind::transport, meta.ticker, 0,
                         meta.ticker + ": malformed API response: " + e.what());
    }
    if (extract.empty())
        throw FetchError(FetchError::Kind::page_missing, meta.ticker, 0,
                         meta.ticker + ": empty extract for page: " + page_title);

    write_atomic(cache_path, extract);
    Document doc;
    doc.meta = meta;
    doc.raw_text = std::move(extract);
    doc.source = DocSource::wikipedia_fetch;
    doc.fetched_at = now_iso8601();
    return doc;
}

}  // namespace peerscope::corpus
