#pragma once

#include <filesystem>
#include <iosfwd>

#include "annoprov/corpus_store.hpp"

namespace annoprov
{
    // The occurrence relation as "sentence_id<TAB>cluster_id<TAB>section<TAB>release_label"
    // lines, sorted by sentence id, cluster id, then release order.
    void write_occurrence_relation(const CorpusStore& store, std::ostream& output);

    // Writes the whole corpus as a directory of tab-separated files:
    // releases, sentences, accessions, cluster aliases, primaries,
    // occurrences (the relation above) and multiplicities above one.
    void export_bundle(const CorpusStore& store, const std::filesystem::path& directory);

    // Restores an exported bundle into an empty store, preserving every id.
    void import_bundle(CorpusStore& store, const std::filesystem::path& directory);

    inline constexpr const char* kOccurrenceFile = "occurrences.tsv";

} // namespace annoprov
