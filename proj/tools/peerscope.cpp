// peerscope CLI: fetch | pipeline | sweep | peers | comps | coe
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "peerscope/cluster.hpp"
#include "peerscope/corpus.hpp"
#include "peerscope/csv.hpp"
#include "peerscope/manifest.hpp"
#include "peerscope/peers.hpp"
#include "peerscope/quality.hpp"
#include "peerscope/textprep.hpp"
#include "peerscope/valuation.hpp"
#include "peerscope/vectorize.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace peerscope;

namespace {

constexpr const char* kVersion = "peerscope 0.1.0";

std::string now_iso8601() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
}

// 168041 -> "168,041" (display tables only).
std::string with_commas(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    std::string s = buf;
    bool neg = !s.empty() && s[0] == '-';
    std::string digits = neg ? s.substr(1) : s;
    std::string out;
    int count = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (count && count % 3 == 0) out += ',';
        out += *it;
        ++count;
    }
    std::reverse(out.begin(), out.end());
    return neg ? "-" + out : out;
}

size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_ticker(const std::string& wanted, const std::vector<std::string>& known) {
    std::string best;
    size_t best_d = static_cast<size_t>(-1);
    for (const auto& t : known) {
        size_t d = levenshtein(wanted, t);
        if (d < best_d || (d == best_d && t < best)) {
            best_d = d;
            best = t;
        }
    }
    return best;
}

cluster::AffinityKind affinity_from_name(const std::string& name) {
    if (name == "rbf") return cluster::AffinityKind::rbf;
    if (name == "cosine") return cluster::AffinityKind::cosine;
    if (name == "knn_graph") return cluster::AffinityKind::knn_graph;
    throw std::runtime_error("unknown affinity: " + name);
}
cluster::Assign assign_from_name(const std::string& name) {
    if (name == "kmeans") return cluster::Assign::kmeans;
    if (name == "discretize") return cluster::Assign::discretize;
    throw std::runtime_error("unknown assign mode: " + name);
}
cluster::Linkage linkage_from_name(const std::string& name) {
    if (name == "single") return cluster::Linkage::single;
    if (name == "complete") return cluster::Linkage::complete;
    if (name == "average") return cluster::Linkage::average;
    if (name == "ward") return cluster::Linkage::ward;
    throw std::runtime_error("unknown linkage: " + name);
}
cluster::Metric metric_from_name(const std::string& name) {
    if (name == "euclidean") return cluster::Metric::euclidean;
    if (name == "cosine") return cluster::Metric::cosine;
    throw std::runtime_error("unknown metric: " + name);
}

struct PipelineOptions {
    std::string corpus_dir, meta_csv, fin_csv, out_dir = "out";
    std::string stopwords_path, blocklist_path;
    std::string algorithm = "spectral", affinity = "cosine", assign = "kmeans";
    std::string linkage = "average", metric = "euclidean", criterion = "silhouette";
    double gamma = 1.0, max_df = 0.8;
    int knn_k = 10, min_df = 2, k_min = 2, k_max = 10;
    std::uint64_t seed = 0;
};

textprep::PipelineConfig make_textprep_config(const PipelineOptions& opt) {
    textprep::PipelineConfig config;
    if (!opt.stopwords_path.empty())
        config.stopwords = textprep::load_token_file(opt.stopwords_path);
    if (!opt.blocklist_path.empty())
        config.blocklist = textprep::load_token_file(opt.blocklist_path);
    return config;
}

cluster::ClusteringConfig make_cluster_config(const PipelineOptions& opt) {
    cluster::ClusteringConfig config;
    config.algorithm = opt.algorithm == "agglomerative" ? cluster::Algorithm::agglomerative
                                                        : cluster::Algorithm::spectral;
    config.affinity = affinity_from_name(opt.affinity);
    config.assign = assign_from_name(opt.assign);
    config.linkage = linkage_from_name(opt.linkage);
    config.metric = metric_from_name(opt.metric);
    config.rbf_gamma = opt.gamma;
    config.knn_k = opt.knn_k;
    config.rng_seed = opt.seed;
    return config;
}

manifest::RunManifest make_manifest(const PipelineOptions& opt,
                                    const corpus::Corpus& corpus) {
    manifest::RunManifest m;
    m.tool_version = kVersion;
    m.rng_seed = opt.seed;
    m.created_at = now_iso8601();
    m.flags = {{"corpus_dir", opt.corpus_dir},
               {"meta_csv", opt.meta_csv},
               {"fin_csv", opt.fin_csv},
               {"stopwords", opt.stopwords_path},
               {"blocklist", opt.blocklist_path},
               {"algorithm", opt.algorithm},
               {"affinity", opt.affinity},
               {"assign", opt.assign},
               {"linkage", opt.linkage},
               {"metric", opt.metric},
               {"criterion", opt.criterion},
               {"gamma", fmt_double(opt.gamma)},
               {"knn_k", std::to_string(opt.knn_k)},
               {"min_df", std::to_string(opt.min_df)},
               {"max_df", fmt_double(opt.max_df)},
               {"k_min", std::to_string(opt.k_min)},
               {"k_max", std::to_string(opt.k_max)},
               {"seed", std::to_string(opt.seed)}};
    m.inputs["meta_csv"] = manifest::sha256_file(opt.meta_csv);
    if (!opt.fin_csv.empty()) m.inputs["fin_csv"] = manifest::sha256_file(opt.fin_csv);
    if (!opt.stopwords_path.empty())
        m.inputs["stopwords"] = manifest::sha256_file(opt.stopwords_path);
    if (!opt.blocklist_path.empty())
        m.inputs["blocklist"] = manifest::sha256_file(opt.blocklist_path);
    std::string combined;
    for (const auto& doc : corpus.documents)
        combined += doc.meta.ticker + ":" + manifest::sha256_string(doc.raw_text) + "\n";
    m.inputs["corpus_dir"] = manifest::sha256_string(combined);
    return m;
}

PipelineOptions options_from_manifest(const manifest::RunManifest& m) {
    PipelineOptions opt;
    auto get = [&](const char* key, const std::string& fallback = "") {
        auto it = m.flags.find(key);
        return it != m.flags.end() ? it->second : fallback;
    };
    opt.corpus_dir = get("corpus_dir");
    opt.meta_csv = get("meta_csv");
    opt.fin_csv = get("fin_csv");
    opt.stopwords_path = get("stopwords");
    opt.blocklist_path = get("blocklist");
    opt.algorithm = get("algorithm", "spectral");
    opt.affinity = get("affinity", "cosine");
    opt.assign = get("assign", "kmeans");
    opt.linkage = get("linkage", "average");
    opt.metric = get("metric", "euclidean");
    opt.criterion = get("criterion", "silhouette");
    opt.gamma = std::stod(get("gamma", "1.0"));
    opt.knn_k = std::stoi(get("knn_k", "10"));
    opt.min_df = std::stoi(get("min_df", "2"));
    opt.max_df = std::stod(get("max_df", "0.8"));
    opt.k_min = std::stoi(get("k_min", "2"));
    opt.k_max = std::stoi(get("k_max", "10"));
    opt.seed = m.rng_seed;
    return opt;
}

void write_assignment_csv(const fs::path& path, const std::vector<std::string>& tickers,
                          const cluster::ClusterAssignment& assignment) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "ticker,cluster\n";
    for (size_t i = 0; i < tickers.size(); ++i)
        out << tickers[i] << "," << assignment.labels[i] << "\n";
}

void write_sweep_csv(const fs::path& path, const quality::SweepResult& sweep) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "k,silhouette,calinski,davies\n";
    for (const auto& entry : sweep.entries)
        out << entry.config.n_clusters << "," << fmt_double(entry.report.silhouette) << ","
            << fmt_double(entry.report.calinski_harabasz) << ","
            << fmt_double(entry.report.davies_bouldin) << "\n";
}

void write_sweep_json(const fs::path& path, const quality::SweepResult& sweep) {
    json j;
    j["criterion"] = quality::to_string(sweep.criterion);
    j["best_k"] = sweep.entries[sweep.best].config.n_clusters;
    j["entries"] = json::array();
    for (const auto& entry : sweep.entries) {
        json e;
        e["k"] = entry.config.n_clusters;
        e["silhouette"] = entry.report.silhouette;
        e["calinski"] = entry.report.calinski_harabasz;
        e["davies"] = entry.report.davies_bouldin;
        j["entries"].push_back(e);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_distribution_csv(const fs::path& path,
                            const std::vector<quality::DistributionRow>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "cluster,size,sector,count\n";
    for (const auto& row : rows) {
        if (row.sector_counts.empty()) {
            out << row.cluster << "," << row.size << ",,0\n";
            continue;
        }
        for (const auto& [sector, count] : row.sector_counts)
            out << row.cluster << "," << row.size << "," << csv::escape(sector) << ","
                << count << "\n";
    }
}

struct PipelineArtifacts {
    corpus::Corpus corpus;
    std::vector<std::string> tickers;
    vectorize::TfIdfMatrix matrix;
    vectorize::Vocabulary vocab;
};

// Re-runs prep + vectorization; shared by pipeline/sweep/peers so that
// `peers` sees exactly the rows the recorded run clustered.
PipelineArtifacts build_matrix(const PipelineOptions& opt) {
    PipelineArtifacts art;
    art.corpus = corpus::load_corpus(opt.corpus_dir, opt.meta_csv);
    for (const auto& warning : art.corpus.warnings)
        std::cerr << "warning: " << warning << "\n";
    textprep::PipelineConfig config = make_textprep_config(opt);
    textprep::PreprocessResult prep = textprep::preprocess(art.corpus, config);
    for (const auto& warning : prep.warnings) std::cerr << "warning: " << warning << "\n";
    art.vocab = vectorize::build_vocabulary(prep.documents, static_cast<size_t>(opt.min_df),
                                            opt.max_df);
    art.matrix = vectorize::tfidf(prep.documents, art.vocab);
    art.tickers = art.matrix.row_tickers;
    return art;
}

int cmd_fetch(const std::string& mapping_csv, const std::string& cache_dir) {
    std::vector<std::string> warnings;
    std::vector<corpus::MetaRow> rows = corpus::load_metadata(mapping_csv, &warnings);
    for (const auto& warning : warnings) std::cerr << "warning: " << warning << "\n";
    if (rows.empty()) {
        std::cerr << "error: mapping CSV has no rows\n";
        return 2;
    }
    int failures = 0;
    for (const auto& row : rows) {
        if (row.wikipedia_title.empty()) {
            std::cerr << "warning: " << row.meta.ticker << " has no wikipedia_title; skipped\n";
            continue;
        }
        try {
            corpus::Document doc =
                corpus::fetch_wikipedia(row.meta, row.wikipedia_title, cache_dir);
            std::cout << row.meta.ticker << ": "
                      << (doc.source == corpus::DocSource::local_file ? "cached"
                                                                      : "fetched")
                      << " (" << doc.raw_text.size() << " bytes)\n";
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

int cmd_pipeline(const PipelineOptions& opt) {
    std::string stage = "setup";
    try {
        fs::create_directories(opt.out_dir);

        stage = "load_corpus";
        PipelineArtifacts art = build_matrix(opt);
        const Eigen::Index n = static_cast<Eigen::Index>(art.matrix.n_docs);

        stage = "sweep";
        int k_max = std::min<int>(opt.k_max, static_cast<int>(n) - 1);
        int k_min = std::min(opt.k_min, k_max);
        quality::SweepResult sw =
            quality::sweep(art.matrix, make_cluster_config(opt), k_min, k_max,
                           quality::criterion_from_string(opt.criterion));
        write_sweep_csv(fs::path(opt.out_dir) / "sweep.csv", sw);

        stage = "cluster";
        cluster::ClusteringConfig best = sw.entries[sw.best].config;
        cluster::ClusterAssignment assignment = cluster::run_clustering(art.matrix, best);
        write_assignment_csv(fs::path(opt.out_dir) / "assignment.csv", art.tickers,
                             assignment);

        stage = "distribution";
        std::vector<corpus::CompanyMeta> metas;
        for (const auto& doc : art.corpus.documents) metas.push_back(doc.meta);
        write_distribution_csv(fs::path(opt.out_dir) / "distribution.csv",
                               quality::distribution_report(assignment, metas));

        stage = "manifest";
        manifest::write(make_manifest(opt, art.corpus),
                        fs::path(opt.out_dir) / "manifest.json");

        std::cout << "pipeline complete: k=" << best.n_clusters << " ("
                  << quality::to_string(sw.criterion) << "), " << art.matrix.n_docs
                  << " documents, " << art.matrix.n_terms << " terms -> " << opt.out_dir
                  << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "pipeline failed at " << stage << ": " << e.what() << "\n";
        return 1;
    }
}

int cmd_sweep(const PipelineOptions& opt) {
    try {
        fs::create_directories(opt.out_dir);
        PipelineArtifacts art = build_matrix(opt);
        int k_max = std::min<int>(opt.k_max, static_cast<int>(art.matrix.n_docs) - 1);
        int k_min = std::min(opt.k_min, k_max);
        quality::SweepResult sw =
            quality::sweep(art.matrix, make_cluster_config(opt), k_min, k_max,
                           quality::criterion_from_string(opt.criterion));
        write_sweep_csv(fs::path(opt.out_dir) / "sweep.csv", sw);
        write_sweep_json(fs::path(opt.out_dir) / "sweep.json", sw);
        std::cout << "best k = " << sw.entries[sw.best].config.n_clusters << " by "
                  << quality::to_string(sw.criterion) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "sweep failed: " << e.what() << "\n";
        return 1;
    }
}

cluster::ClusterAssignment read_assignment(const fs::path& out_dir,
                                           std::vector<std::string>& tickers) {
    csv::Table table = csv::read_file(out_dir / "assignment.csv");
    size_t c_ticker = table.column("ticker"), c_cluster = table.column("cluster");
    if (c_ticker == csv::Table::npos || c_cluster == csv::Table::npos)
        throw std::runtime_error("assignment.csv missing ticker/cluster columns");
    cluster::ClusterAssignment assignment;
    int max_label = -1;
    for (const auto& row : table.rows) {
        tickers.push_back(row[c_ticker]);
        int label = std::stoi(row[c_cluster]);
        assignment.labels.push_back(label);
        max_label = std::max(max_label, label);
    }
    assignment.n_clusters = max_label + 1;
    return assignment;
}

int cmd_peers(const std::string& out_dir, const std::string& target, int n_peers,
              const std::string& space_name, const std::string& fin_override,
              const std::string& features_arg) {
    try {
        manifest::RunManifest m = manifest::read(fs::path(out_dir) / "manifest.json");
        PipelineOptions opt = options_from_manifest(m);

        std::vector<std::string> tickers;
        cluster::ClusterAssignment assignment = read_assignment(out_dir, tickers);

        if (std::find(tickers.begin(), tickers.end(), target) == tickers.end()) {
            std::cerr << "error: unknown ticker " << target << "; did you mean "
                      << nearest_ticker(target, tickers) << "?\n";
            return 1;
        }

        peers::Space space =
            space_name == "financial" ? peers::Space::financial : peers::Space::busdesc;

        Eigen::MatrixXd features;
        std::vector<std::string> feature_names;
        if (space == peers::Space::busdesc) {
            PipelineArtifacts art = build_matrix(opt);
            if (art.tickers != tickers)
                throw std::runtime_error(
                    "corpus rows no longer match assignment.csv; re-run pipeline");
            features = vectorize::to_dense(art.matrix);
        } else {
            std::string fin_path = !fin_override.empty() ? fin_override : opt.fin_csv;
            if (fin_path.empty())
                throw std::runtime_error(
                    "financial space needs --fin (none recorded by the pipeline run)");
            peers::FinancialTable fin = peers::load_financials(fin_path);
            if (features_arg.empty()) {
                feature_names = peers::default_features();
            } else {
                std::stringstream ss(features_arg);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) feature_names.push_back(item);
            }
            // Align financial rows with assignment rows by ticker.
            std::vector<peers::FinancialRecord> aligned(tickers.size());
            std::map<std::string, const peers::FinancialRecord*> by_ticker;
            for (const auto& rec : fin.records) by_ticker[rec.ticker] = &rec;
            for (size_t i = 0; i < tickers.size(); ++i) {
                auto it = by_ticker.find(tickers[i]);
                if (it != by_ticker.end())
                    aligned[i] = *it->second;
                else
                    aligned[i].ticker = tickers[i];  // all fields missing
            }
            features = peers::financial_feature_matrix(aligned, feature_names);
        }

        peers::PeerGroup group =
            peers::knn_peers(target, assignment, features, tickers, n_peers, space);

        json j;
        j["target"] = group.target;
        j["space"] = space == peers::Space::financial ? "financial" : "busdesc";
        j["cluster_id"] = group.cluster_id;
        j["truncated"] = group.truncated;
        if (!feature_names.empty()) j["features"] = feature_names;
        j["peers"] = json::array();
        for (const auto& p : group.peers) {
            json e;
            e["ticker"] = p.ticker;
            e["distance"] = p.distance;
            e["imputed"] = p.imputed;
            if (!p.imputed_cols.empty()) {
                e["imputed_features"] = json::array();
                for (int col : p.imputed_cols)
                    e["imputed_features"].push_back(
                        feature_names.empty() ? std::to_string(col)
                                              : feature_names[static_cast<size_t>(col)]);
            }
            j["peers"].push_back(e);
        }
        fs::create_directories(fs::path(out_dir) / "peers");
        fs::path out_path = fs::path(out_dir) / "peers" / (target + ".json");
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        out << j.dump(2) << "\n";

        std::cout << "peers of " << target << " (cluster " << group.cluster_id << ", "
                  << (group.truncated ? "truncated" : "full") << "):\n";
        for (const auto& p : group.peers)
            std::cout << "  " << p.ticker << "  distance=" << p.distance
                      << (p.imputed ? "  [imputed]" : "") << "\n";
        std::cout << "written: " << out_path.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "peers failed: " << e.what() << "\n";
        return 1;
    }
}

std::vector<std::string> tickers_from_group_json(const fs::path& path,
                                                 std::string* target_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open peer group " + path.string());
    nlohmann::json j = nlohmann::json::parse(in);
    std::vector<std::string> tickers;
    if (j.contains("target")) {
        if (target_out) *target_out = j["target"].get<std::string>();
        tickers.push_back(j["target"].get<std::string>());
    }
    for (const auto& p : j.at("peers")) tickers.push_back(p.at("ticker").get<std::string>());
    return tickers;
}

void print_comps_text(const valuation::CompsTable& table,
                      const std::map<std::string, std::string>& names) {
    auto name_of = [&](const std::string& ticker) {
        auto it = names.find(ticker);
        return it != names.end() && !it->second.empty() ? it->second : ticker;
    };
    auto cell = [](const std::optional<double>& v, bool price = false) {
        if (!v) return std::string("-");
        if (price) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", *v);
            return std::string(buf);
        }
        return with_commas(*v);
    };

    std::vector<std::vector<std::string>> grid;
    grid.push_back({"Company", "Price", "Market Cap", "TEV", "Sales", "EBITDA", "EBIT",
                    "Earnings", "EV/Sales", "EV/EBITDA", "EV/EBIT", "P/E"});
    for (const auto& row : table.rows)
        grid.push_back({name_of(row.ticker), cell(row.price, true), cell(row.market_cap),
                        cell(row.enterprise_value), cell(row.sales), cell(row.ebitda),
                        cell(row.ebit), cell(row.earnings),
                        valuation::format_multiple(row.ev_sales),
                        valuation::format_multiple(row.ev_ebitda),
                        valuation::format_multiple(row.ev_ebit),
                        valuation::format_multiple(row.pe)});
    grid.push_back({"Average", "", "", "", "", "", "", "",
                    valuation::format_multiple(table.mean_row.ev_sales),
                    valuation::format_multiple(table.mean_row.ev_ebitda),
                    valuation::format_multiple(table.mean_row.ev_ebit),
                    valuation::format_multiple(table.mean_row.pe)});
    grid.push_back({"Median", "", "", "", "", "", "", "",
                    valuation::format_multiple(table.median_row.ev_sales),
                    valuation::format_multiple(table.median_row.ev_ebitda),
                    valuation::format_multiple(table.median_row.ev_ebit),
                    valuation::format_multiple(table.median_row.pe)});

    std::vector<size_t> width(grid[0].size(), 0);
    for (const auto& row : grid)
        for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    for (const auto& row : grid) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) std::cout << "  ";
            // Company column left-aligned, numbers right-aligned.
            if (c == 0)
                std::cout << row[c] << std::string(width[c] - row[c].size(), ' ');
            else
                std::cout << std::string(width[c] - row[c].size(), ' ') << row[c];
        }
        std::cout << "\n";
    }
}

void write_comps_csv(const fs::path& path, const valuation::CompsTable& table) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "ticker,price,market_cap,enterprise_value,sales,ebitda,ebit,earnings,"
           "ev_sales,ev_ebitda,ev_ebit,pe\n";
    for (const auto& row : table.rows) {
        csv::write_row(out, {row.ticker, fmt_opt(row.price), fmt_opt(row.market_cap),
                             fmt_opt(row.enterprise_value), fmt_opt(row.sales),
                             fmt_opt(row.ebitda), fmt_opt(row.ebit), fmt_opt(row.earnings),
                             fmt_opt(row.ev_sales), fmt_opt(row.ev_ebitda),
                             fmt_opt(row.ev_ebit), fmt_opt(row.pe)});
    }
    csv::write_row(out, {"mean", "", "", "", "", "", "", "",
                         fmt_opt(table.mean_row.ev_sales), fmt_opt(table.mean_row.ev_ebitda),
                         fmt_opt(table.mean_row.ev_ebit), fmt_opt(table.mean_row.pe)});
    csv::write_row(out, {"median", "", "", "", "", "", "", "",
                         fmt_opt(table.median_row.ev_sales),
                         fmt_opt(table.median_row.ev_ebitda),
                         fmt_opt(table.median_row.ev_ebit), fmt_opt(table.median_row.pe)});
}

std::vector<peers::FinancialRecord> records_for(const std::vector<std::string>& tickers,
                                                const peers::FinancialTable& fin) {
    std::map<std::string, const peers::FinancialRecord*> by_ticker;
    std::vector<std::string> known;
    for (const auto& rec : fin.records) {
        by_ticker[rec.ticker] = &rec;
        known.push_back(rec.ticker);
    }
    std::vector<peers::FinancialRecord> records;
    for (const auto& t : tickers) {
        auto it = by_ticker.find(t);
        if (it == by_ticker.end())
            throw std::runtime_error("unknown ticker " + t + "; did you mean " +
                                     nearest_ticker(t, known) + "?");
        records.push_back(*it->second);
    }
    return records;
}

int cmd_comps(const std::string& peers_json, const std::string& tickers_arg,
              const std::string& fin_csv, const std::string& meta_csv,
              const std::string& out_dir) {
    try {
        peers::FinancialTable fin = peers::load_financials(fin_csv);
        std::vector<std::string> tickers;
        std::string label = "table";
        if (!peers_json.empty()) {
            tickers = tickers_from_group_json(peers_json, &label);
        } else {
            std::stringstream ss(tickers_arg);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) tickers.push_back(item);
            if (!tickers.empty()) label = tickers.front();
        }
        if (tickers.empty()) throw std::runtime_error("no tickers given");

        valuation::CompsTable table = valuation::comps_table(records_for(tickers, fin));

        std::map<std::string, std::string> names;
        if (!meta_csv.empty()) {
            std::vector<corpus::MetaRow> rows = corpus::load_metadata(meta_csv);
            for (const auto& row : rows) names[row.meta.ticker] = row.meta.name;
        }
        print_comps_text(table, names);
        if (!fin.units.empty()) std::cout << "(units: " << fin.units << ")\n";

        fs::create_directories(fs::path(out_dir) / "comps");
        fs::path out_path = fs::path(out_dir) / "comps" / (label + ".csv");
        write_comps_csv(out_path, table);
        std::cout << "written: " << out_path.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "comps failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_coe(const std::string& peers_json, const std::string& tickers_arg,
            const std::string& fin_csv, const std::string& target,
            const std::string& method_name, double rf, double rm) {
    try {
        peers::FinancialTable fin = peers::load_financials(fin_csv);
        std::vector<std::string> tickers;
        std::string label = target;
        if (!peers_json.empty()) {
            std::string json_target;
            tickers = tickers_from_group_json(peers_json, &json_target);
            if (label.empty()) label = json_target;
            // The target's own record must not enter its peer average.
            std::erase(tickers, json_target.empty() ? target : json_target);
        } else {
            std::stringstream ss(tickers_arg);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) tickers.push_back(item);
            std::erase(tickers, target);
        }
        if (tickers.empty()) throw std::runtime_error("no peer tickers given");

        valuation::CoeMethod method = method_name == "avg_beta_capm"
                                          ? valuation::CoeMethod::avg_beta_capm
                                          : valuation::CoeMethod::avg_coe;
        valuation::PrivateCoeResult result =
            valuation::private_cost_of_equity(records_for(tickers, fin), method, rf, rm);

        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f%%", result.value * 100.0);
        std::cout << (label.empty() ? std::string("target") : label)
                  << " cost of equity (" << method_name << ", " << result.used.size()
                  << " peers): " << buf << "\n";
        for (const auto& t : result.skipped)
            std::cerr << "warning: " << t << " lacks the needed field; skipped\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "coe failed: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"peerscope: peer groups, comps tables, and cost of equity"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // fetch
    std::string mapping_csv, cache_dir = "corpus";
    CLI::App* fetch = app.add_subcommand("fetch", "fetch Wikipedia extracts into a cache");
    fetch->add_option("--mapping", mapping_csv, "metadata CSV with wikipedia_title")
        ->required();
    fetch->add_option("--cache", cache_dir, "cache directory");

    // pipeline / sweep share options
    PipelineOptions opt;
    auto add_pipeline_options = [&](CLI::App* cmd, bool require_fin) {
        cmd->add_option("--corpus", opt.corpus_dir, "directory of <TICKER>.txt files")
            ->required();
        cmd->add_option("--meta", opt.meta_csv, "metadata CSV")->required();
        auto* fin = cmd->add_option("--fin", opt.fin_csv, "financial CSV");
        if (require_fin) fin->required();
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--seed", opt.seed, "RNG seed");
        cmd->add_option("--min-df", opt.min_df, "vocabulary min document frequency");
        cmd->add_option("--max-df", opt.max_df, "vocabulary max document-frequency ratio");
        cmd->add_option("--algorithm", opt.algorithm, "spectral|agglomerative");
        cmd->add_option("--affinity", opt.affinity, "rbf|cosine|knn_graph");
        cmd->add_option("--assign", opt.assign, "kmeans|discretize");
        cmd->add_option("--linkage", opt.linkage, "single|complete|average|ward");
        cmd->add_option("--metric", opt.metric, "euclidean|cosine");
        cmd->add_option("--gamma", opt.gamma, "rbf gamma");
        cmd->add_option("--knn-k", opt.knn_k, "knn_graph neighbour count");
        cmd->add_option("--kmin", opt.k_min, "sweep lower bound");
        cmd->add_option("--kmax", opt.k_max, "sweep upper bound");
        cmd->add_option("--criterion", opt.criterion,
                        "silhouette|calinski|davies|combined_sil_cal");
        cmd->add_option("--stopwords", opt.stopwords_path, "stopword file override");
        cmd->add_option("--blocklist", opt.blocklist_path, "blocklist file override");
    };
    CLI::App* pipeline = app.add_subcommand("pipeline", "prep, vectorize, sweep, cluster");
    add_pipeline_options(pipeline, false);
    CLI::App* sweep = app.add_subcommand("sweep", "score every k in a range");
    add_pipeline_options(sweep, false);

    // peers
    std::string out_dir = "out", target, space = "busdesc", fin_override, features;
    int n_peers = 8;
    CLI::App* peers_cmd = app.add_subcommand("peers", "nearest peers within the cluster");
    peers_cmd->add_option("--out", out_dir, "pipeline output directory");
    peers_cmd->add_option("--target", target, "target ticker")->required();
    peers_cmd->add_option("--n", n_peers, "number of peers")
        ->check(CLI::PositiveNumber.description("n must be >= 1"));
    peers_cmd->add_option("--space", space, "busdesc|financial");
    peers_cmd->add_option("--fin", fin_override, "financial CSV (financial space)");
    peers_cmd->add_option("--features", features, "comma-separated financial features");

    // comps
    std::string peers_json, tickers_arg, fin_csv, meta_csv;
    CLI::App* comps = app.add_subcommand("comps", "comparable-company multiples table");
    comps->add_option("--peers", peers_json, "peer group JSON from `peers`");
    comps->add_option("--tickers", tickers_arg, "comma-separated tickers");
    comps->add_option("--fin", fin_csv, "financial CSV")->required();
    comps->add_option("--meta", meta_csv, "metadata CSV (for display names)");
    comps->add_option("--out", out_dir, "output directory");

    // coe
    std::string method = "avg_coe";
    double rf = 0.0, rm = 0.0;
    CLI::App* coe = app.add_subcommand("coe", "private-company cost of equity from peers");
    coe->add_option("--peers", peers_json, "peer group JSON from `peers`");
    coe->add_option("--tickers", tickers_arg, "comma-separated peer tickers");
    coe->add_option("--fin", fin_csv, "financial CSV")->required();
    coe->add_option("--target", target, "target ticker (reporting only)");
    coe->add_option("--method", method, "avg_coe|avg_beta_capm");
    coe->add_option("--rf", rf, "risk-free rate (avg_beta_capm)");
    coe->add_option("--rm", rm, "expected market return (avg_beta_capm)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage errors are contractually exit code 2
    }

    try {
        if (*fetch) return cmd_fetch(mapping_csv, cache_dir);
        if (*pipeline) return cmd_pipeline(opt);
        if (*sweep) return cmd_sweep(opt);
        if (*peers_cmd) return cmd_peers(out_dir, target, n_peers, space, fin_override, features);
        if (*comps) {
            if (peers_json.empty() == tickers_arg.empty()) {
                std::cerr << "usage error: give exactly one of --peers / --tickers\n";
                return 2;
            }
            return cmd_comps(peers_json, tickers_arg, fin_csv, meta_csv, out_dir);
        }
        if (*coe) {
            if (peers_json.empty() == tickers_arg.empty()) {
                std::cerr << "usage error: give exactly one of --peers / --tickers\n";
                return 2;
            }
            return cmd_coe(peers_json, tickers_arg, fin_csv, target, method, rf, rm);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
