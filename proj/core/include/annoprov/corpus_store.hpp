#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "annoprov/types.hpp"

namespace annoprov
{
    struct ReleaseInfo
    {
        Release release;
        ReleaseOrdinal ordinal{};
        std::int64_t release_id = 0; // storage key, stable across re-registration
        std::int64_t entries_total = 0;
        std::int64_t entries_annotated = 0;
        bool ingested = false;
    };

    // Date-ordered view of every registered release.
    class ReleaseRegistry
    {
      public:
        ReleaseRegistry() = default;
        explicit ReleaseRegistry(std::vector<ReleaseInfo> releases); // assigns ordinals

        std::size_t size() const noexcept { return releases_.size(); }
        bool empty() const noexcept { return releases_.empty(); }
        std::span<const ReleaseInfo> all() const noexcept { return releases_; }

        bool contains(ReleaseOrdinal ordinal) const noexcept;
        const ReleaseInfo& at(ReleaseOrdinal ordinal) const; // NotFound
        Section section_of(ReleaseOrdinal ordinal) const { return at(ordinal).release.section; }
        std::optional<ReleaseOrdinal> find(Section section, std::string_view label) const noexcept;
        std::optional<ReleaseOrdinal> by_release_id(std::int64_t release_id) const noexcept;

        // registered ordinals of one section, ascending
        const std::vector<ReleaseOrdinal>& section_ordinals(Section section) const noexcept { return by_section_[static_cast<std::size_t>(section)]; }
        // 0-based position of `ordinal` within its own section
        std::size_t section_index(ReleaseOrdinal ordinal) const;
        std::optional<ReleaseOrdinal> latest(Section section) const noexcept;
        std::optional<ReleaseOrdinal> latest_at_or_before(Section section, ReleaseOrdinal bound) const noexcept;
        std::optional<ReleaseOrdinal> last() const noexcept;

        // the same registry with every release after `until` dropped
        ReleaseRegistry truncated(ReleaseOrdinal until) const;

      private:
        std::vector<ReleaseInfo> releases_; // index = ordinal - 1
        std::array<std::vector<ReleaseOrdinal>, 2> by_section_;
        std::vector<std::size_t> section_index_;
        std::vector<std::int32_t> ordinal_by_release_id_;
    };

    struct OccurrenceRecord
    {
        SentenceId sentence{};
        ClusterId cluster{};
        ReleaseOrdinal release{};
        std::int64_t multiplicity = 1; // appearances within the cluster at that release

        bool operator==(const OccurrenceRecord&) const = default;
    };

    struct ClusterTimeline
    {
        ClusterId cluster{};
        std::vector<std::string> accessions; // every accession the cluster ever carried, first-seen order
        std::vector<ReleaseOrdinal> ordinals;
    };

    struct SentenceTimeline
    {
        SentenceId sentence{};
        std::string text;
        // ordered by first appearance, then cluster id
        std::vector<ClusterTimeline> clusters;
        // (release, number of clusters holding the sentence) for releases where it occurs
        std::vector<std::pair<ReleaseOrdinal, std::size_t>> counts;
        // registered releases of each section inside the sentence's active span
        std::array<std::vector<ReleaseOrdinal>, 2> rails;
        ReleaseOrdinal first{};
        ReleaseOrdinal last{};

        std::size_t occurrence_count() const noexcept;
        const std::vector<ReleaseOrdinal>& rail(Section section) const noexcept { return rails[static_cast<std::size_t>(section)]; }
    };

    // Versioned occurrence corpus in a single embedded database file.
    // Not thread-safe; wrap in a mutex for shared use.
    class CorpusStore
    {
      public:
        static constexpr std::string_view kInMemory = ":memory:";
        static constexpr std::string_view kFormatName = "annoprov-store";
        static constexpr int kFormatVersion = 1;

        explicit CorpusStore(const std::filesystem::path& path);
        ~CorpusStore();
        CorpusStore(CorpusStore&&) noexcept;
        CorpusStore& operator=(CorpusStore&&) noexcept;

        const std::filesystem::path& path() const noexcept;
        const ReleaseRegistry& releases() const noexcept;

        // Idempotent for identical metadata; Conflict if the label is known with another date.
        ReleaseOrdinal register_release(const Release& release);

        // Groups writes into one transaction; rolled back unless committed.
        class WriteBatch
        {
          public:
            ~WriteBatch();
            WriteBatch(WriteBatch&&) noexcept;
            WriteBatch(const WriteBatch&) = delete;
            WriteBatch& operator=(const WriteBatch&) = delete;
            WriteBatch& operator=(WriteBatch&&) = delete;
            void commit();

          private:
            friend class CorpusStore;
            explicit WriteBatch(CorpusStore& store);
            CorpusStore* store_;
            bool open_ = true;
        };
        WriteBatch begin_batch();

        // Joins every cluster touching one of `accessions` and returns the merged
        // cluster; accessions.front() is recorded as primary for this release.
        ClusterId upsert_entry(ReleaseOrdinal release, std::span<const std::string> accessions);

        // Interns `canonical_text` and records the occurrence once per (sentence, cluster, release);
        // repeated adds accumulate multiplicity. InvalidArgument for non-canonical text.
        SentenceId add_occurrence(std::string_view canonical_text, ClusterId cluster, ReleaseOrdinal release, std::int64_t multiplicity = 1);

        // Raw entry counts of a parsed release; marks the release as ingested.
        void record_entry_counts(ReleaseOrdinal release, std::int64_t entries_total, std::int64_t entries_annotated);

        std::size_t sentence_count() const;
        std::size_t occurrence_count() const;
        std::size_t cluster_count() const;

        std::optional<SentenceId> find_sentence(std::string_view canonical_text) const;
        std::string sentence_text(SentenceId sentence) const; // NotFound
        std::vector<std::pair<SentenceId, std::string>> search_sentences(std::string_view needle, std::size_t limit) const;

        std::optional<ClusterId> cluster_of(std::string_view accession) const;
        std::vector<std::string> cluster_accessions(ClusterId cluster) const;
        std::optional<std::string> primary_accession(ClusterId cluster, ReleaseOrdinal release) const;

        std::size_t lifetime_cluster_count(SentenceId sentence) const;
        std::vector<OccurrenceRecord> occurrences_of(SentenceId sentence) const; // sorted by cluster, release
        SentenceTimeline timeline(SentenceId sentence) const;                   // NotFound

        // Streams the occurrence relation one sentence at a time, ascending sentence id.
        void for_each_sentence(const std::function<void(SentenceId, std::span<const OccurrenceRecord>)>& visit) const;
        // Per-sentence aggregates at one release: clusters holding it and summed multiplicity.
        void for_each_in_release(ReleaseOrdinal release, const std::function<void(SentenceId, std::int64_t clusters, std::int64_t appearances)>& visit) const;

        // Re-reads caches from the file (after external writes or a rolled-back batch).
        void reload();

        struct Impl;
        Impl& impl() const noexcept { return *impl_; }

      private:
        std::unique_ptr<Impl> impl_;
    };

    // Advisory inter-process lock on "<store>.lock". Serving takes it shared,
    // ingestion exclusive; Refused when the other side holds it.
    class StoreLock
    {
      public:
        enum class Mode { Shared, Exclusive };

        StoreLock(const std::filesystem::path& store_path, Mode mode);
        ~StoreLock();
        StoreLock(const StoreLock&) = delete;
        StoreLock& operator=(const StoreLock&) = delete;

      private:
        int fd_ = -1;
    };

} // namespace annoprov
