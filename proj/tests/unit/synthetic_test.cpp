#include <doctest.h>
#include <nlohmann/json.hpp>

#include "annoprov/errors.hpp"
#include "annoprov/exchange.hpp"
#include "annoprov/synthetic.hpp"
#include "support.hpp"

using namespace annoprov;
using namespace annoprov::synthetic;

namespace
{
    std::size_t index(PatternKind kind) { return static_cast<std::size_t>(kind); }

    std::vector<NamedReport> store_reports(const SyntheticCorpus& corpus)
    {
        CorpusStore store(CorpusStore::kInMemory);
        DiagnosticSink sink;
        ingest_corpus(store, corpus, SentenceSegmenter{}, sink);
        auto named = detect_named(store);
        std::sort(named.begin(), named.end());
        return named;
    }
} // namespace

TEST_SUITE("synthetic")
{
    TEST_CASE("a seed fixes the corpus and the ledger")
    {
        GeneratorParams params;
        params.seed = 77;
        const auto a = generate(params), b = generate(params);
        REQUIRE(a.corpus.releases.size() == b.corpus.releases.size());
        for (std::size_t i = 0; i < a.corpus.releases.size(); ++i)
            CHECK(a.corpus.render(i) == b.corpus.render(i));
        CHECK(a.ledger.events == b.ledger.events);
        CHECK(a.ledger.counts == b.ledger.counts);

        params.seed = 78;
        const auto c = generate(params);
        CHECK(c.corpus.render(0) != a.corpus.render(0));
    }

    TEST_CASE("the calendar has the requested shape")
    {
        GeneratorParams params;
        params.swissprot_releases = 3;
        params.trembl_releases = 2;
        const auto generated = generate(params);
        CHECK(generated.corpus.releases.size() == 5);
        for (std::size_t i = 1; i < generated.corpus.releases.size(); ++i)
            CHECK(release_order(generated.corpus.releases[i - 1].release, generated.corpus.releases[i].release) == std::weak_ordering::less);
    }

    TEST_CASE("default parameters plant every pattern across a handful of seeds")
    {
        std::array<std::int64_t, 4> planted{};
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            GeneratorParams params;
            params.seed = seed;
            const auto counts = generate(params).ledger.counts;
            for (std::size_t i = 0; i < planted.size(); ++i)
                planted[i] += counts[i];
        }
        for (auto kind : kPatternKinds) {
            CAPTURE(pattern_name(kind));
            CHECK(planted[index(kind)] > 0);
        }
    }

    TEST_CASE("without removals or merges no cluster ever loses a sentence")
    {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            GeneratorParams params;
            params.seed = seed;
            params.removal_rate = 0;
            params.merge_rate = 0;
            const auto generated = generate(params);
            CHECK(generated.ledger.counts[index(PatternKind::MissingOrigin)] == 0);
            CHECK(generated.ledger.counts[index(PatternKind::ReappearingEntry)] == 0);
            CHECK(generated.ledger.counts[index(PatternKind::TransientAppearance)] == 0);
            CHECK(store_reports(generated.corpus) == brute_force_detect(generated.corpus).reports);
        }
    }

    TEST_CASE("without copies or merges every sentence stays in one entry")
    {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            GeneratorParams params;
            params.seed = seed;
            params.copy_rate = 0;
            params.merge_rate = 0;
            const auto generated = generate(params);
            CHECK(generated.ledger.counts[index(PatternKind::MissingOrigin)] == 0);
            CHECK(generated.ledger.counts[index(PatternKind::OriginatingInTrembl)] == 0);
            CHECK(store_reports(generated.corpus) == brute_force_detect(generated.corpus).reports);
        }
    }

    TEST_CASE("the ledger survives a json round trip")
    {
        const auto generated = generate(GeneratorParams{});
        const auto restored = GroundTruthLedger::from_json(nlohmann::json::parse(generated.ledger.to_json().dump()));
        CHECK(restored.events == generated.ledger.events);
        CHECK(restored.entries == generated.ledger.entries);
        CHECK(restored.labels == generated.ledger.labels);
        CHECK(restored.counts == generated.ledger.counts);
        CHECK(restored.latest_counts == generated.ledger.latest_counts);
    }

    TEST_CASE("parameters survive a json round trip and are validated")
    {
        GeneratorParams params;
        params.seed = 9;
        params.copy_rate = 0.5;
        params.entry_count = 17;
        const auto back = params_from_json(to_json(params));
        CHECK(to_json(back) == to_json(params));

        GeneratorParams bad;
        bad.copy_rate = 1.5;
        CHECK_THROWS_AS(bad.validate(), InvalidArgument);
        CHECK_THROWS_AS(generate(bad), InvalidArgument);
        bad = GeneratorParams{};
        bad.entry_count = -1;
        CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    }

    TEST_CASE("the brute-force oracle refuses oversized corpora")
    {
        const auto generated = generate(GeneratorParams{});
        CHECK_THROWS_AS(brute_force_detect(generated.corpus, 10), Refused);
    }

    TEST_CASE("written corpora ingest like in-memory ones")
    {
        testing::TempDir dir;
        GeneratorParams params;
        params.seed = 5;
        const auto generated = generate(params);
        const auto rows = write_corpus(generated, dir.path());
        CHECK(rows.size() == generated.corpus.releases.size());
        CHECK(std::filesystem::exists(dir / "ledger.json"));

        CorpusStore from_files(CorpusStore::kInMemory), from_memory(CorpusStore::kInMemory);
        DiagnosticSink sink;
        ingest_manifest(from_files, read_manifest(dir / "manifest.tsv"), SentenceSegmenter{}, sink);
        ingest_corpus(from_memory, generated.corpus, SentenceSegmenter{}, sink);
        std::ostringstream a, b;
        write_occurrence_relation(from_files, a);
        write_occurrence_relation(from_memory, b);
        CHECK(a.str() == b.str());
        CHECK(from_memory.occurrence_count() <= generated.corpus.occurrence_count());

        const auto ledger = GroundTruthLedger::from_json(nlohmann::json::parse(testing::read_file(dir / "ledger.json")));
        CHECK(ledger.counts == generated.ledger.counts);
    }
}
