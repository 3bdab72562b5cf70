#include <map>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "annoprov/errors.hpp"
#include "annoprov/exchange.hpp"
#include "annoprov/stats.hpp"
#include "annoprov/synthetic.hpp"
#include "support.hpp"

using namespace annoprov;
using testing::kFixtures;

namespace
{
    void ingest_small(CorpusStore& store)
    {
        DiagnosticSink sink;
        ingest_manifest(store, read_manifest(kFixtures / "small" / "manifest.tsv"), SentenceSegmenter{}, sink);
    }

    ReleaseOrdinal ordinal(const CorpusStore& store, Section section, const char* label) { return *store.releases().find(section, label); }

    void ingest_seed(CorpusStore& store, std::uint64_t seed, synthetic::SyntheticCorpus* corpus_out = nullptr)
    {
        synthetic::GeneratorParams params;
        params.seed = seed;
        auto generated = synthetic::generate(params);
        DiagnosticSink sink;
        synthetic::ingest_corpus(store, generated.corpus, SentenceSegmenter{}, sink);
        if (corpus_out)
            *corpus_out = std::move(generated.corpus);
    }
} // namespace

TEST_SUITE("stats")
{
    TEST_CASE("hand-tallied small corpus")
    {
        CorpusStore store(CorpusStore::kInMemory);
        ingest_small(store);

        const auto sp1 = compute_release_stats(store, ordinal(store, Section::SwissProt, "1"));
        CHECK(sp1.entries_total == 3);
        CHECK(sp1.entries_annotated == 2);
        CHECK(sp1.entries_unannotated == 1);
        CHECK(sp1.total_sentences == 3);
        CHECK(sp1.unique_sentences == 2);
        CHECK(sp1.singleton_sentences == 1);
        CHECK(sp1.reuse_spectrum == std::map<std::int64_t, std::int64_t>{{1, 1}, {2, 1}});
        CHECK(sp1.avg_sentences_per_entry == Ratio{3, 2});
        CHECK(sp1.avg_entries_per_sentence == Ratio{3, 2});
        CHECK(sp1.unique_fraction == Ratio{2, 3});
        CHECK(sp1.unannotated_fraction == Ratio{1, 3});

        const auto tr1 = compute_release_stats(store, ordinal(store, Section::TrEMBL, "1"));
        CHECK(tr1.entries_total == 2);
        CHECK(tr1.total_sentences == 3);
        CHECK(tr1.unique_sentences == 2);
        CHECK(tr1.singleton_sentences == 1);

        const auto sp2 = compute_release_stats(store, ordinal(store, Section::SwissProt, "2"));
        CHECK(sp2.entries_total == 4);
        CHECK(sp2.entries_annotated == 4);
        CHECK(sp2.total_sentences == 5);
        CHECK(sp2.unique_sentences == 4);
        CHECK(sp2.singleton_sentences == 3);

        const auto repeats = compute_release_stats(store, ordinal(store, Section::SwissProt, "2"), StatsOptions{true});
        CHECK(repeats.total_sentences == 6);
        CHECK(repeats.unique_sentences == 4);
        CHECK(repeats.singleton_sentences == 2);
        CHECK(identity_violations(repeats).empty());

        const auto series = stats_series(store, Section::SwissProt);
        REQUIRE(series.size() == 2);
        CHECK(series[0].release.label == "1");
        CHECK(reuse_distribution(store, series[1].ordinal) == std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 3}, {2, 1}});
    }

    TEST_CASE("an empty release has absent ratios")
    {
        CorpusStore store(CorpusStore::kInMemory);
        const auto report = testing::ingest_text(store, testing::release(Section::SwissProt, "0", "2000-01-01"), "");
        const auto stats = compute_release_stats(store, report.ordinal);
        CHECK(stats.total_sentences == 0);
        CHECK_FALSE(stats.avg_sentences_per_entry);
        CHECK_FALSE(stats.avg_entries_per_sentence);
        CHECK_FALSE(stats.unique_fraction);
        CHECK_FALSE(stats.unannotated_fraction);
        CHECK(identity_violations(stats).empty());
        CHECK(to_json(stats)["unique_fraction"].is_null());

        std::ostringstream out;
        const std::vector<ReleaseStats> one{stats};
        write_stats_rows(out, one);
        CHECK(out.str().find("NA") != std::string::npos);
        CHECK_THROWS_AS(compute_release_stats(store, ReleaseOrdinal{5}), NotFound);
    }

    TEST_CASE("identities hold on synthetic corpora with and without repeat counting")
    {
        for (std::uint64_t seed = 1; seed <= 15; ++seed) {
            CorpusStore store(CorpusStore::kInMemory);
            ingest_seed(store, seed);
            for (const auto& info : store.releases().all())
                for (bool repeats : {false, true}) {
                    const auto stats = compute_release_stats(store, info.ordinal, StatsOptions{repeats});
                    CAPTURE(seed);
                    CHECK(identity_violations(stats).empty());
                }
        }
    }

    TEST_CASE("identity checks notice a broken record")
    {
        ReleaseStats stats;
        stats.total_sentences = 3;
        stats.unique_sentences = 4;
        stats.reuse_spectrum = {{1, 4}};
        stats.singleton_sentences = 4;
        CHECK_FALSE(identity_violations(stats).empty());
    }

    TEST_CASE("store statistics equal the brute-force count over generated entries")
    {
        for (std::uint64_t seed = 100; seed < 110; ++seed) {
            CorpusStore store(CorpusStore::kInMemory);
            synthetic::SyntheticCorpus corpus;
            ingest_seed(store, seed, &corpus);
            const auto expected = synthetic::brute_force_stats(corpus);
            REQUIRE(expected.size() == store.releases().size());
            for (const auto& reference : expected) {
                CAPTURE(describe(reference.release));
                const auto actual = compute_release_stats(store, *store.releases().find(reference.release.section, reference.release.label));
                CHECK(actual.total_sentences == reference.total_sentences);
                CHECK(actual.unique_sentences == reference.unique_sentences);
                CHECK(actual.singleton_sentences == reference.singleton_sentences);
                CHECK(actual.entries_total == reference.entries_total);
                CHECK(actual.entries_annotated == reference.entries_annotated);
                CHECK(actual.reuse_spectrum == reference.reuse_spectrum);
            }
        }
    }

    TEST_CASE("counts agree with sort and uniq over the exported relation")
    {
        testing::TempDir dir;
        CorpusStore store(CorpusStore::kInMemory);
        ingest_seed(store, 7);
        export_bundle(store, dir / "bundle");

        const auto result = testing::run_command("cut -f1,3,4 '" + (dir / "bundle" / kOccurrenceFile).string() + "' | sort | uniq -c");
        REQUIRE(result.status == 0);
        struct Tally
        {
            std::int64_t total = 0, unique = 0, singleton = 0;
        };
        std::map<std::string, Tally> tally;
        std::istringstream lines(result.output);
        std::int64_t count;
        std::string sentence, section, label;
        while (lines >> count >> sentence >> section >> label) {
            auto& t = tally[section + ":" + label];
            t.total += count;
            ++t.unique;
            t.singleton += count == 1;
        }
        for (const auto& info : store.releases().all()) {
            const auto stats = compute_release_stats(store, info.ordinal);
            const auto& t = tally[describe(info.release)];
            CAPTURE(describe(info.release));
            CHECK(stats.total_sentences == t.total);
            CHECK(stats.unique_sentences == t.unique);
            CHECK(stats.singleton_sentences == t.singleton);
        }
    }

    TEST_CASE("tabular, json and chart outputs")
    {
        testing::TempDir dir;
        CorpusStore store(CorpusStore::kInMemory);
        ingest_small(store);
        const auto series = stats_series(store, Section::SwissProt);

        std::ostringstream out;
        write_stats_header(out);
        write_stats_rows(out, series);
        std::istringstream lines(out.str());
        std::size_t rows = 0;
        for (std::string line; std::getline(lines, line);)
            ++rows;
        CHECK(rows == 1 + series.size());

        const auto json = series_json(Section::SwissProt, series);
        CHECK(json["section"] == "swissprot");
        CHECK(json["series"].size() == 2);

        const auto files = write_figure_data(store, dir.path());
        CHECK(files.size() >= 6);
        for (const auto& file : files)
            CHECK(std::filesystem::file_size(file) > 0);
    }
}
