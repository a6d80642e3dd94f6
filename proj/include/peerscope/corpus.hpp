#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace peerscope::corpus {

struct CompanyMeta {
    std::string ticker;    // uppercase, non-empty
    std::string name;
    std::string sector;    // one of the 11 GICS sectors or "UNKNOWN"
    std::string industry;
};

enum class DocSource { local_file, wikipedia_fetch };

struct Document {
    CompanyMeta meta;
    std::string raw_text;  // non-empty after trim
    DocSource source = DocSource::local_file;
    std::optional<std::string> fetched_at;  // ISO-8601, fetches only
};

struct Corpus {
    std::vector<Document> documents;                  // lexicographic ticker order
    std::unordered_map<std::string, size_t> index;    // ticker -> position
    std::vector<std::string> warnings;
};

// Row of the metadata CSV: ticker,name,sector,industry,wikipedia_title.
struct MetaRow {
    CompanyMeta meta;
    std::string wikipedia_title;  // may be empty for offline corpora
};

bool is_gics_sector(const std::string& sector);

// Parses the metadata CSV. Duplicate ticker -> throws. Sectors outside the
// GICS list are replaced by "UNKNOWN" with a warning appended.
std::vector<MetaRow> load_metadata(const std::filesystem::path& meta_path,
                                   std::vector<std::string>* warnings = nullptr);

// Builds a corpus from <TICKER>.txt files in dir_path intersected with the
// metadata CSV. Tickers on only one side produce warnings, not errors.
Corpus load_corpus(const std::filesystem::path& dir_path,
                   const std::filesystem::path& meta_path);

struct FetchError : std::runtime_error {
    enum class Kind { transport, http_status, page_missing };
    Kind kind;
    std::string ticker;
    int status;  // HTTP status when kind == http_status, else 0

    FetchError(Kind k, std::string t, int s, const std::string& what)
        : std::runtime_error(what), kind(k), ticker(std::move(t)), status(s) {}
};

// Fetches the plaintext extract of a Wikipedia page and writes it to
// cache_dir/<TICKER>.txt (atomically). A warm cache short-circuits the
// network entirely. Base URL comes from $PEERSCOPE_WIKI_BASE_URL when set,
// https://en.wikipedia.org otherwise.
Document fetch_wikipedia(const CompanyMeta& meta, const std::string& page_title,
                         const std::filesystem::path& cache_dir);

}  // namespace peerscope::corpus
