#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "annoprov/corpus_store.hpp"
#include "annoprov/flatfile.hpp"
#include "annoprov/segmenter.hpp"

namespace annoprov
{
    // One row of a release manifest: "section<TAB>label<TAB>date<TAB>path".
    struct ManifestRow
    {
        Release release;
        std::filesystem::path path;
    };

    // Relative paths resolve against the manifest's directory. Blank lines,
    // '#' comments and a leading "section..." header line are skipped.
    std::vector<ManifestRow> read_manifest(const std::filesystem::path& manifest);
    std::vector<ManifestRow> parse_manifest(std::istream& input, const std::filesystem::path& base_dir);
    void write_manifest(std::ostream& output, std::span<const ManifestRow> rows);

    struct ReleaseReport
    {
        Release release;
        ReleaseOrdinal ordinal{};
        std::int64_t entries = 0;
        std::int64_t annotated_entries = 0;
        std::int64_t sentences = 0;   // sentence instances found, repeats included
        std::int64_t occurrences = 0; // distinct (sentence, entry) pairs stored
        std::size_t diagnostics = 0;
        bool skipped = false; // already ingested
    };

    // Parses, segments and stores one release inside a single write batch.
    ReleaseReport ingest_release(CorpusStore& store, const Release& release, LineSource& source, const SentenceSegmenter& segmenter, DiagnosticSink& diagnostics);

    // Ingests manifest rows in date order. Releases already ingested with the
    // same metadata are skipped; a release dated before already-ingested data
    // is refused (Conflict), as is any missing file (NotFound), before anything is written.
    std::vector<ReleaseReport> ingest_manifest(CorpusStore& store, std::span<const ManifestRow> rows, const SentenceSegmenter& segmenter, DiagnosticSink& diagnostics);

    void write_ingest_report(std::ostream& output, std::span<const ReleaseReport> reports);

} // namespace annoprov
