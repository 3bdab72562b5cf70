#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "annoprov/corpus_store.hpp"

namespace annoprov
{
    enum class PatternKind : std::uint8_t { MissingOrigin = 0, ReappearingEntry = 1, TransientAppearance = 2, OriginatingInTrembl = 3 };

    inline constexpr PatternKind kPatternKinds[] = {PatternKind::MissingOrigin, PatternKind::ReappearingEntry, PatternKind::TransientAppearance,
                                                    PatternKind::OriginatingInTrembl};

    std::string_view pattern_name(PatternKind kind) noexcept; // missing_origin, reappearing_entry, ...
    std::optional<PatternKind> parse_pattern_kind(std::string_view name) noexcept;

    struct OriginSets
    {
        ReleaseOrdinal first_release{};
        ReleaseOrdinal last_release{};
        std::vector<ClusterId> first; // clusters at the sentence's earliest release
        std::vector<ClusterId> last;  // clusters present in the snapshot at its latest release
        bool operator==(const OriginSets&) const = default;
    };

    // The cluster holds the sentence at `before`, loses it at one or more
    // releases of the same section, and holds it again at `after`.
    struct Gap
    {
        ClusterId cluster{};
        ReleaseOrdinal before{};
        ReleaseOrdinal after{};
        bool operator==(const Gap&) const = default;
    };

    struct SoleAppearance
    {
        ClusterId cluster{};
        ReleaseOrdinal release{};
        bool operator==(const SoleAppearance&) const = default;
    };

    struct TremblFirst
    {
        ReleaseOrdinal first_trembl{};
        ReleaseOrdinal first_swissprot{};
        bool operator==(const TremblFirst&) const = default;
    };

    using PatternEvidence = std::variant<OriginSets, std::vector<Gap>, std::vector<SoleAppearance>, TremblFirst>;

    struct PatternReport
    {
        PatternKind kind{};
        SentenceId sentence{};
        std::vector<ClusterId> origin_clusters; // ascending
        PatternEvidence evidence;
        bool operator==(const PatternReport&) const = default;
    };

    // What a detector needs to know about the release calendar.
    struct DetectionContext
    {
        const ReleaseRegistry* registry = nullptr;
        // Releases that count as "the latest" for the second summary column; defaults to each section's last release.
        std::vector<ReleaseOrdinal> latest;

        explicit DetectionContext(const ReleaseRegistry& releases);
        bool is_latest(ReleaseOrdinal release) const noexcept;
    };

    // Detectors are pure functions of one sentence's occurrences (any order).
    std::optional<PatternReport> detect_missing_origin(const DetectionContext& context, SentenceId sentence, std::span<const OccurrenceRecord> occurrences);
    std::optional<PatternReport> detect_reappearing(const DetectionContext& context, SentenceId sentence, std::span<const OccurrenceRecord> occurrences);
    std::optional<PatternReport> detect_transient(const DetectionContext& context, SentenceId sentence, std::span<const OccurrenceRecord> occurrences);
    std::optional<PatternReport> detect_trembl_origin(const DetectionContext& context, SentenceId sentence, std::span<const OccurrenceRecord> occurrences);
    std::vector<PatternReport> detect_all(const DetectionContext& context, SentenceId sentence, std::span<const OccurrenceRecord> occurrences);

    bool present_in_latest(const DetectionContext& context, std::span<const OccurrenceRecord> occurrences) noexcept;

    struct ScanOptions
    {
        std::optional<ReleaseOrdinal> until;       // ignore every release after this one
        std::vector<ReleaseOrdinal> latest;        // empty: each section's last release (after `until`)
    };

    struct PatternSummary
    {
        std::array<std::int64_t, 4> all{};
        std::array<std::int64_t, 4> latest{};
        std::int64_t sentences = 0;
        std::int64_t sentences_in_latest = 0;

        std::int64_t count(PatternKind kind) const noexcept { return all[static_cast<std::size_t>(kind)]; }
        std::int64_t count_latest(PatternKind kind) const noexcept { return latest[static_cast<std::size_t>(kind)]; }
    };

    using ReportSink = std::function<void(const PatternReport&, bool in_latest)>;

    // Streams every sentence through all detectors; memory is bounded by the largest single timeline.
    PatternSummary scan_corpus(const CorpusStore& store, const ScanOptions& options = {}, const ReportSink& sink = {});

    nlohmann::json to_json(const PatternReport& report, const ReleaseRegistry& registry);
    void write_summary(std::ostream& output, const PatternSummary& summary);

    // Replaces the stored pattern reports with a fresh scan of the whole corpus.
    PatternSummary materialize_patterns(CorpusStore& store, const ScanOptions& options = {});
    // Materializes only when the corpus changed since the last materialization.
    void ensure_patterns_materialized(CorpusStore& store);

    struct PatternPage
    {
        std::int64_t total = 0;
        std::vector<nlohmann::json> items;
    };
    // 1-based page of stored reports of one kind, ascending sentence id.
    PatternPage stored_patterns(const CorpusStore& store, PatternKind kind, bool latest_only, std::int64_t page, std::int64_t page_size);

} // namespace annoprov
