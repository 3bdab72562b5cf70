#pragma once

#include <string>
#include <unordered_map>

#include "annoprov/corpus_store.hpp"
#include "annoprov/disjoint_set.hpp"
#include "internal/sqlite.hpp"

namespace annoprov
{
    struct CorpusStore::Impl
    {
        std::filesystem::path path;
        sql::Database db;
        ReleaseRegistry registry;
        bool batch_open = false;

        std::unordered_map<std::string, SentenceId> sentence_ids;
        std::int64_t next_sentence_id = 1;

        // accession -> cluster id as first assigned; find() on `clusters` gives the live id
        std::unordered_map<std::string, std::int64_t> accession_clusters;
        DisjointSet clusters;
        std::int64_t next_cluster_id = 1;
        std::int64_t next_accession_seq = 1;

        sql::Statement insert_sentence;
        sql::Statement insert_accession;
        sql::Statement insert_primary;
        sql::Statement upsert_occurrence;
        sql::Statement move_accessions;
        sql::Statement copy_primaries;
        sql::Statement drop_primaries;
        sql::Statement copy_occurrences;
        sql::Statement drop_occurrences;
        sql::Statement record_alias;

        void init_schema();
        void prepare();
        void load();
        void load_registry();
        ClusterId live_cluster(std::int64_t cluster) { return ClusterId{static_cast<std::int64_t>(clusters.find(static_cast<std::size_t>(cluster)))}; }
        void merge_clusters(std::int64_t survivor, std::int64_t absorbed);
    };

    namespace detail
    {
        inline sql::Database& database(const CorpusStore& store) { return store.impl().db; }
    } // namespace detail

} // namespace annoprov
