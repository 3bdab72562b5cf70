#include <sstream>

#include <doctest.h>

#include "annoprov/errors.hpp"
#include "annoprov/ingest.hpp"
#include "support.hpp"

using namespace annoprov;
using testing::kFixtures;

TEST_SUITE("ingest")
{
    TEST_CASE("manifest rows resolve relative paths and skip comments")
    {
        const auto rows = read_manifest(kFixtures / "small" / "manifest.tsv");
        REQUIRE(rows.size() == 3);
        CHECK(describe(rows[0].release) == "swissprot:2");
        CHECK(rows[0].path == kFixtures / "small" / "swissprot_2.dat");
        CHECK(format_date(rows[1].release.date) == "2000-06-01");

        std::ostringstream out;
        write_manifest(out, rows);
        std::istringstream back(out.str());
        const auto reparsed = parse_manifest(back, "/");
        REQUIRE(reparsed.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            CHECK(reparsed[i].release == rows[i].release);

        std::istringstream bad("swissprot\t1\tnot-a-date\tx.dat\n");
        CHECK_THROWS_AS(parse_manifest(bad, "/"), InvalidArgument);
        std::istringstream bad_section("pdb\t1\t2000-01-01\tx.dat\n");
        CHECK_THROWS_AS(parse_manifest(bad_section, "/"), InvalidArgument);
    }

    TEST_CASE("releases are ingested in date order and re-runs are no-ops")
    {
        CorpusStore store(CorpusStore::kInMemory);
        const auto rows = read_manifest(kFixtures / "small" / "manifest.tsv");
        DiagnosticSink sink;
        const auto reports = ingest_manifest(store, rows, SentenceSegmenter{}, sink);
        REQUIRE(reports.size() == 3);
        CHECK(describe(reports[0].release) == "swissprot:1");
        CHECK(describe(reports[1].release) == "trembl:1");
        CHECK(describe(reports[2].release) == "swissprot:2");
        CHECK(reports[0].entries == 3);
        CHECK(reports[0].annotated_entries == 2);
        CHECK(reports[2].sentences == 6);
        CHECK(reports[2].occurrences == 5);
        CHECK(store.occurrence_count() == 11);

        const auto again = ingest_manifest(store, rows, SentenceSegmenter{}, sink);
        for (const auto& report : again)
            CHECK(report.skipped);
        CHECK(store.occurrence_count() == 11);

        std::ostringstream out;
        write_ingest_report(out, reports);
        CHECK(out.str().find("swissprot") != std::string::npos);
    }

    TEST_CASE("a release older than ingested data is refused before any write")
    {
        CorpusStore store(CorpusStore::kInMemory);
        auto rows = read_manifest(kFixtures / "small" / "manifest.tsv");
        DiagnosticSink sink;
        ingest_manifest(store, std::span(rows).first(1), SentenceSegmenter{}, sink); // swissprot 2
        const auto before = store.occurrence_count();
        CHECK_THROWS_AS(ingest_manifest(store, rows, SentenceSegmenter{}, sink), Conflict);
        CHECK(store.occurrence_count() == before);
    }

    TEST_CASE("a missing file is reported before anything is written")
    {
        CorpusStore store(CorpusStore::kInMemory);
        auto rows = read_manifest(kFixtures / "small" / "manifest.tsv");
        rows.push_back({testing::release(Section::TrEMBL, "9", "2009-01-01"), kFixtures / "small" / "missing.dat"});
        DiagnosticSink sink;
        CHECK_THROWS_AS(ingest_manifest(store, rows, SentenceSegmenter{}, sink), NotFound);
        CHECK(store.occurrence_count() == 0);
    }

    TEST_CASE("an empty manifest ingests nothing")
    {
        CorpusStore store(CorpusStore::kInMemory);
        std::istringstream empty("section\tlabel\tdate\tpath\n# nothing yet\n\n");
        const auto rows = parse_manifest(empty, "/");
        CHECK(rows.empty());
        DiagnosticSink sink;
        CHECK(ingest_manifest(store, rows, SentenceSegmenter{}, sink).empty());
        CHECK(store.releases().empty());
    }

    TEST_CASE("entries are counted and split into sentence occurrences")
    {
        CorpusStore store(CorpusStore::kInMemory);
        const auto text = testing::entry("P00001;", "Alpha. Beta. Alpha.") + testing::entry("P00002;", "") + testing::entry("P00003; P00001;", "Gamma");
        const auto report = testing::ingest_text(store, testing::release(Section::SwissProt, "1", "2000-01-01"), text);
        CHECK(report.entries == 3);
        CHECK(report.annotated_entries == 2);
        CHECK(report.sentences == 4);
        CHECK(report.occurrences == 3);
        CHECK(store.cluster_of("P00003") == store.cluster_of("P00001"));
        CHECK(store.find_sentence("gamma"));
    }
}
