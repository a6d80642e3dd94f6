#include <doctest.h>

#include <fstream>
#include <sstream>

#include "peerscope/stemmer.hpp"
#include "support/paths.hpp"

using peerscope::textprep::stem;

TEST_CASE("stemmer hand cases") {
    CHECK(stem("running") == "run");
    CHECK(stem("flies") == "fli");
    CHECK(stem("sky") == "sky");
    CHECK(stem("generously") == "generous");
    CHECK(stem("semiconductors") == "semiconductor");
    CHECK(stem("manufacturing") == "manufactur");
    CHECK(stem("a") == "a");
    CHECK(stem("") == "");
}

TEST_CASE("stemmer matches the bundled reference vocabulary") {
    std::ifstream in(testsupport::data_dir() / "snowball_reference.tsv");
    REQUIRE(in.good());
    std::string line;
    size_t checked = 0, mismatches = 0;
    std::string first_bad;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        std::string word = line.substr(0, tab), expected = line.substr(tab + 1);
        if (stem(word) != expected) {
            if (mismatches == 0)
                first_bad = word + " -> " + stem(word) + " (want " + expected + ")";
            ++mismatches;
        }
        ++checked;
    }
    CHECK(checked >= 1000);
    CHECK_MESSAGE(mismatches == 0, first_bad);
}
