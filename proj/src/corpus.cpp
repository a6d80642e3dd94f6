#include "peerscope/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "peerscope/csv.hpp"

namespace peerscope::corpus {

namespace fs = std::filesystem;

bool is_gics_sector(const std::string& sector) {
    static const std::array<const char*, 11> kSectors = {
        "Energy",
        "Materials",
        "Industrials",
        "Consumer Discretionary",
        "Consumer Staples",
        "Health Care",
        "Financials",
        "Information Technology",
        "Communication Services",
        "Utilities",
        "Real Estate",
    };
    return std::find(kSectors.begin(), kSectors.end(), sector) != kSectors.end();
}

std::vector<MetaRow> load_metadata(const fs::path& meta_path,
                                   std::vector<std::string>* warnings) {
    csv::Table table = csv::read_file(meta_path);
    size_t c_ticker = table.column("ticker");
    size_t c_name = table.column("name");
    size_t c_sector = table.column("sector");
    size_t c_industry = table.column("industry");
    size_t c_title = table.column("wikipedia_title");
    if (c_ticker == csv::Table::npos || c_name == csv::Table::npos || c_sector == csv::Table::npos ||
        c_industry == csv::Table::npos)
        throw std::runtime_error(meta_path.string() +
                                 ": metadata CSV needs columns ticker,name,sector,industry");

    std::vector<MetaRow> rows;
    std::set<std::string> seen;
    for (const auto& r : table.rows) {
        MetaRow row;
        row.meta.ticker = r[c_ticker];
        if (row.meta.ticker.empty())
            throw std::runtime_error(meta_path.string() + ": empty ticker");
        if (!seen.insert(row.meta.ticker).second)
            throw std::runtime_error(meta_path.string() + ": duplicate ticker " +
                                     row.meta.ticker);
        row.meta.name = r.size() > c_name ? r[c_name] : "";
        row.meta.sector = r.size() > c_sector ? r[c_sector] : "";
        row.meta.industry = r.size() > c_industry ? r[c_industry] : "";
        if (c_title != csv::Table::npos && r.size() > c_title) row.wikipedia_title = r[c_title];
        if (!is_gics_sector(row.meta.sector) && row.meta.sector != "UNKNOWN") {
            if (warnings)
                warnings->push_back("ticker " + row.meta.ticker + ": sector '" +
                                    row.meta.sector + "' is not a GICS sector; using UNKNOWN");
            row.meta.sector = "UNKNOWN";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

static std::string read_text_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

static bool all_whitespace(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

Corpus load_corpus(const fs::path& dir_path, const fs::path& meta_path) {
    if (!fs::is_directory(dir_path))
        throw std::runtime_error("corpus directory not found: " + dir_path.string());
    if (!fs::is_regular_file(meta_path))
        throw std::runtime_error("metadata CSV not found: " + meta_path.string());

    Corpus corpus;
    std::vector<MetaRow> meta_rows = load_metadata(meta_path, &corpus.warnings);
    std::unordered_map<std::string, const MetaRow*> by_ticker;
    for (const auto& row : meta_rows) by_ticker.emplace(row.meta.ticker, &row);

    std::set<std::string> file_tickers;  // sorted -> deterministic load order
    for (const auto& entry : fs::directory_iterator(dir_path)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        file_tickers.insert(entry.path().stem().string());
    }
    if (file_tickers.empty())
        throw std::runtime_error("no documents found in " + dir_path.string());

    for (const auto& ticker : file_tickers) {
        auto it = by_ticker.find(ticker);
        if (it == by_ticker.end()) {
            corpus.warnings.push_back("document " + ticker + ".txt has no metadata row; skipped");
            continue;
        }
        std::string text = read_text_file(dir_path / (ticker + ".txt"));
        if (text.empty() || all_whitespace(text)) {
            corpus.warnings.push_back("document " + ticker + ".txt is empty; rejected");
            continue;
        }
        Document doc;
        doc.meta = it->second->meta;
        doc.raw_text = std::move(text);
        doc.source = DocSource::local_file;
        corpus.index.emplace(ticker, corpus.documents.size());
        corpus.documents.push_back(std::move(doc));
    }
    for (const auto& row : meta_rows)
        if (!file_tickers.count(row.meta.ticker))
            corpus.warnings.push_back("metadata row " + row.meta.ticker +
                                      " has no document file; skipped");
    return corpus;
}

}  // namespace peerscope::corpus
