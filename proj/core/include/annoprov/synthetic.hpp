#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "annoprov/ingest.hpp"
#include "annoprov/patterns.hpp"
#include "annoprov/stats.hpp"
#include "annoprov/types.hpp"

namespace annoprov::synthetic
{
    struct GeneratorParams
    {
        std::uint64_t seed = 42;
        int swissprot_releases = 8;
        int trembl_releases = 5;
        int entry_count = 40;
        int sentence_pool_size = 200;
        // per entry and release step
        double copy_rate = 0.2;
        double removal_rate = 0.12;
        double readd_rate = 0.3;
        double new_sentence_rate = 0.25;
        // per merge attempt; one attempt per ten live entries of the section, at least one
        double merge_rate = 0.3;
        double trembl_fraction = 0.35;
        int max_initial_sentences = 4;

        void validate() const; // InvalidArgument
    };

    nlohmann::json to_json(const GeneratorParams& params);
    GeneratorParams params_from_json(const nlohmann::json& value);

    struct SyntheticEntry
    {
        std::vector<std::string> accessions; // primary first
        std::vector<int> sentences;          // pool indices, in comment order
        bool banner = false;                 // carries a licence block
    };

    struct SyntheticRelease
    {
        Release release;
        std::vector<SyntheticEntry> entries;
    };

    struct SyntheticCorpus
    {
        GeneratorParams params;
        std::vector<std::string> pool;           // sentence as written in the file
        std::vector<std::string> canonical_pool; // normalized form of each
        std::vector<SyntheticRelease> releases;  // date order

        std::string render(std::size_t release_index) const; // flat-file text
        std::size_t occurrence_count() const;                // (sentence, entry, release) triples
    };

    enum class EventType : std::uint8_t { Create, Originate, Copy, Remove, Readd, Merge };

    struct LedgerEvent
    {
        EventType type{};
        int release = 0;   // index into the release list
        int entry = 0;     // target entry; survivor for merges
        int sentence = -1; // pool index
        int other = -1;    // copy source, or the absorbed entry of a merge

        bool operator==(const LedgerEvent&) const = default;
    };

    struct LedgerEntry
    {
        Section section{};
        std::string accession;
        bool operator==(const LedgerEntry&) const = default;
    };

    // Planted events and the pattern labels they imply.
    struct GroundTruthLedger
    {
        std::vector<Release> releases;
        std::vector<LedgerEntry> entries;
        std::vector<std::string> sentences; // canonical text by pool index
        std::vector<LedgerEvent> events;

        // derived by replay()
        std::map<std::string, std::set<PatternKind>> labels;
        std::set<std::string> in_latest;
        std::array<std::int64_t, 4> counts{};
        std::array<std::int64_t, 4> latest_counts{};

        // Recomputes the derived fields from the event list alone.
        void replay();

        nlohmann::json to_json() const;
        static GroundTruthLedger from_json(const nlohmann::json& value); // replays
    };

    struct Generated
    {
        SyntheticCorpus corpus;
        GroundTruthLedger ledger;
    };

    Generated generate(const GeneratorParams& params);

    // Writes one flat file per release plus "manifest.tsv" and "ledger.json"; returns the manifest rows.
    std::vector<ManifestRow> write_corpus(const Generated& generated, const std::filesystem::path& directory);

    // Feeds every release through the parser and segmenter into `store`.
    std::vector<ReleaseReport> ingest_corpus(CorpusStore& store, const SyntheticCorpus& corpus, const SentenceSegmenter& segmenter, DiagnosticSink& diagnostics);

    // ---- brute-force reference implementations ----

    // Pattern report with clusters named by their smallest accession and releases by describe(),
    // so reports from different implementations can be compared directly.
    struct NamedReport
    {
        PatternKind kind{};
        std::string sentence;
        std::string detail;

        auto operator<=>(const NamedReport&) const = default;
    };

    struct OracleResult
    {
        std::vector<NamedReport> reports; // sorted
        std::set<std::string> in_latest;
    };

    // Refused when sentences x clusters x releases exceeds `max_cells`.
    OracleResult brute_force_detect(const SyntheticCorpus& corpus, std::size_t max_cells = 50'000'000);
    std::vector<ReleaseStats> brute_force_stats(const SyntheticCorpus& corpus);

    std::vector<NamedReport> named_reports(const CorpusStore& store, const std::vector<PatternReport>& reports);
    // Every pattern report in the store's corpus, named.
    std::vector<NamedReport> detect_named(const CorpusStore& store);

    // Shared formatting of the named evidence.
    std::string name_list(std::vector<std::string> names);

} // namespace annoprov::synthetic
