#include "offd/corpus.hpp"
#include "offd/error.hpp"
#include "utf8.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

using namespace offd;

namespace {

const StopwordSet& shipped_stopwords()
{
    static const StopwordSet set = [] {
        std::ifstream in(OFFD_SOURCE_DIR "/assets/stopwords_en.txt");
        REQUIRE(in);
        return load_stopwords(in);
    }();
    return set;
}

LabeledCorpus load(const std::string& tsv, const std::string* labels = nullptr)
{
    std::istringstream t(tsv);
    if (labels) {
        std::istringstream l(*labels);
        return load_olid_tsv(t, &l);
    }
    return load_olid_tsv(t);
}

std::string error_of(const std::string& tsv)
{
    try {
        load(tsv);
    } catch (const DataError& e) {
        return e.what();
    }
    return {};
}

const char* kHeader = "id\ttweet\tsubtask_a\tsubtask_b\tsubtask_c\n";

}  // namespace

TEST_CASE("stopword asset has 179 distinct entries")
{
    CHECK(shipped_stopwords().size() == 179);
    CHECK(shipped_stopwords().contains("now"));
    CHECK(shipped_stopwords().contains("the"));
    CHECK_FALSE(shipped_stopwords().contains("check"));
}

TEST_CASE("load_olid_tsv: three-row fixture")
{
    const auto c = load(std::string(kHeader) + "1\tyou idiot\tOFF\tTIN\tIND\n" +
                        "2\tnice day\tNOT\tNULL\tNULL\n" + "3\tshut up\tOFF\tUNT\tNULL\n");
    REQUIRE(c.size() == 3);
    CHECK(c.count(Label::offensive) == 2);
    CHECK(c.count(Label::not_offensive) == 1);
    CHECK(c.fully_labeled());
    CHECK(c.records[1].text == "nice day");
}

TEST_CASE("load_olid_tsv: header only is an empty corpus")
{
    CHECK(load(kHeader).size() == 0);
    CHECK(load("id\ttweet\n").size() == 0);
}

TEST_CASE("load_olid_tsv: full-size training split")
{
    // 8,840 NOT and 4,400 OFF, interleaved.
    std::string tsv = kHeader;
    int off = 0;
    for (int i = 0; i < 13240; ++i) {
        const bool is_off = off < 4400 && (i % 3 == 0 || 13240 - i <= 4400 - off);
        off += is_off;
        tsv += std::to_string(i) + "\ttweet " + std::to_string(i) + '\t' + (is_off ? "OFF" : "NOT") +
               "\tNULL\tNULL\n";
    }
    const auto c = load(tsv);
    CHECK(c.size() == 13240);
    CHECK(c.count(Label::not_offensive) == 8840);
    CHECK(c.count(Label::offensive) == 4400);
}

TEST_CASE("load_olid_tsv: malformed input")
{
    SUBCASE("wrong column count names the line")
    {
        const auto msg = error_of(std::string(kHeader) + "1\ta\tOFF\tNULL\tNULL\n2\tb\tNOT\n");
        CHECK(msg.find("line 3") != std::string::npos);
    }
    SUBCASE("unknown label")
    {
        CHECK(error_of(std::string(kHeader) + "1\ta\tMAYBE\tNULL\tNULL\n").find("MAYBE") != std::string::npos);
    }
    SUBCASE("duplicate id")
    {
        CHECK(error_of(std::string(kHeader) + "7\ta\tOFF\tNULL\tNULL\n7\tb\tNOT\tNULL\tNULL\n")
                  .find("7") != std::string::npos);
    }
    SUBCASE("missing tweet column")
    {
        CHECK_FALSE(error_of("id\ttext\n1\ta\n").empty());
    }
}

TEST_CASE("load_olid_tsv: label file overrides and fills labels")
{
    const std::string tsv = "id\ttweet\n10\tfirst\n11\tsecond\n";
    const std::string labels = "11,OFF\n10,NOT\n";
    const auto c = load(tsv, &labels);
    REQUIRE(c.fully_labeled());
    CHECK(*c.records[0].label == Label::not_offensive);
    CHECK(*c.records[1].label == Label::offensive);

    const auto unlabeled = load(tsv);
    CHECK_FALSE(unlabeled.fully_labeled());

    const std::string override_tsv = std::string(kHeader) + "1\tx\tOFF\tNULL\tNULL\n";
    const std::string override_labels = "1,NOT\r\n";
    CHECK(*load(override_tsv, &override_labels).records[0].label == Label::not_offensive);

    const std::string stray = "99,OFF\n";
    CHECK_THROWS_AS(load(tsv, &stray), DataError);
}

TEST_CASE("load_olid_tsv: order and count are preserved")
{
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = static_cast<int>(gen() % 50);
        std::vector<std::string> ids;
        std::string tsv = kHeader;
        for (int i = 0; i < n; ++i) {
            ids.push_back("t" + std::to_string(gen()));
            tsv += ids.back() + "\ttext\t" + (gen() % 2 ? "OFF" : "NOT") + "\tNULL\tNULL\n";
        }
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
            continue;
        }
        const auto c = load(tsv);
        REQUIRE(c.size() == static_cast<std::size_t>(n));
        std::istringstream rows(tsv);
        std::string line;
        std::getline(rows, line);
        for (const auto& rec : c.records) {
            std::getline(rows, line);
            CHECK(line.substr(0, line.find('\t')) == rec.id);
        }
    }
}

TEST_CASE("normalize_social: examples")
{
    CHECK(normalize_social("@a @b go #x #y www.z.com") == "@MENTION go #TAG URLS");
    CHECK(normalize_social("hello world") == "hello world");
    CHECK(normalize_social("") == "");
    CHECK(normalize_social("see https://t.co/abc and HTTP://x.y now") == "see URLS and URLS now");
    CHECK(normalize_social("#a hi #b") == "#TAG hi #TAG");
    CHECK(normalize_social("@USER @USER you are #MAGA") == "@MENTION you are #TAG");
    CHECK(normalize_social("# and @ stay") == "# and @ stay");
}

TEST_CASE("normalize_social is idempotent on generated tweets")
{
    const std::vector<std::string> pieces = {
        "@USER", "@bob", "#MAGA", "#x", "#", "@", "http://t.co/x", "https://a.b/c?d=1", "www.site.org",
        "URL",   "URLS", "#TAG", "@MENTION", "hello", "WORLD", "don't", "123", "!!", "\xF0\x9F\x98\x80",
        "caf\xC3\xA9", "a#b", "x@y.com", "wwwx", "http:", "\t", "  "};
    std::mt19937_64 gen(11);
    for (int i = 0; i < 1000; ++i) {
        std::string tweet;
        const int n = static_cast<int>(gen() % 12);
        for (int k = 0; k < n; ++k) {
            tweet += pieces[gen() % pieces.size()];
            tweet += gen() % 5 == 0 ? "  " : " ";
        }
        const auto once = normalize_social(tweet);
        CHECK_MESSAGE(normalize_social(once) == once, tweet);
    }
}

TEST_CASE("tokenize_clean: examples")
{
    const auto& sw = shipped_stopwords();
    CHECK(tokenize_clean("Check http://t.co/x NOW!! 123 #lol", sw) == TokenSeq{"check"});
    CHECK(tokenize_clean("", sw).empty());
    CHECK(tokenize_clean("The the THE", sw).empty());
    CHECK(tokenize_clean("@USER you IDIOT... go2home www.x.com", sw) == TokenSeq{"idiot", "go", "home"});
    CHECK(tokenize_clean("Ça VA très BIEN", sw) == TokenSeq{"ça", "va", "très", "bien"});
    CHECK(tokenize_clean("rock\xE2\x80\x99n'roll 'quoted' ends'", sw) == TokenSeq{"rock'n'roll", "quoted", "ends"});
    CHECK(tokenize_clean("#hash_tag_1 stays gone, @m_2 too", sw) == TokenSeq{"stays", "gone"});
}

TEST_CASE("tokenize_clean output holds only lowercase letters and apostrophes")
{
    const auto& sw = shipped_stopwords();
    const std::vector<std::string> alphabet = {
        "a", "B", "z", "Q", " ", "\t", "'", "\xE2\x80\x99", "#", "@", "_", "1", "9", ".", ",", "!",
        "http://", "www.", "\xC3\x89", "\xC3\xA9", "\xD0\x96", "\xCE\xA3", "\xF0\x9F\x98\x80", "-", "$",
        "\xE4\xB8\xAD", "\xEF\xBC\xA1", "\xC2\xA0"};
    std::mt19937_64 gen(5);
    for (int i = 0; i < 2000; ++i) {
        std::string text;
        const int n = static_cast<int>(gen() % 30);
        for (int k = 0; k < n; ++k) {
            text += alphabet[gen() % alphabet.size()];
        }
        for (const auto& token : tokenize_clean(text, sw)) {
            REQUIRE_FALSE(token.empty());
            CHECK_FALSE(sw.contains(token));
            std::size_t pos = 0;
            while (pos < token.size()) {
                const char32_t cp = utf8::decode(token, pos);
                const bool ok = cp == U'\'' || (utf8::is_letter(cp) && utf8::to_lower(cp) == cp);
                CHECK_MESSAGE(ok, text);
            }
        }
    }
}

TEST_CASE("label helpers")
{
    CHECK(parse_label("OFF") == Label::offensive);
    CHECK(parse_label("NOT") == Label::not_offensive);
    CHECK_THROWS_AS(parse_label("off"), DataError);
    CHECK(label_sign(Label::offensive) == 1);
    CHECK(label_from_sign(0.0) == Label::not_offensive);
    CHECK(label_from_sign(1e-300) == Label::offensive);
}
