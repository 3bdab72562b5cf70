#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "annoprov/corpus_store.hpp"

namespace annoprov
{
    struct Ratio
    {
        std::int64_t numerator = 0;
        std::int64_t denominator = 1;

        double value() const noexcept { return static_cast<double>(numerator) / static_cast<double>(denominator); }
        bool operator==(const Ratio&) const = default;
    };

    // Empty when the denominator is zero.
    std::optional<Ratio> ratio(std::int64_t numerator, std::int64_t denominator) noexcept;

    struct StatsOptions
    {
        // Count a sentence repeated inside one entry once per repetition instead of once per entry.
        bool count_repeats = false;
    };

    struct ReleaseStats
    {
        Release release;
        ReleaseOrdinal ordinal{};

        std::int64_t total_sentences = 0;
        std::int64_t unique_sentences = 0;
        std::int64_t singleton_sentences = 0;
        std::int64_t entries_total = 0;
        std::int64_t entries_annotated = 0;
        std::int64_t entries_unannotated = 0;

        std::optional<Ratio> avg_sentences_per_entry;  // total / annotated entries
        std::optional<Ratio> avg_entries_per_sentence; // total / unique
        std::optional<Ratio> unique_fraction;          // unique / total
        std::optional<Ratio> unannotated_fraction;     // unannotated / entries

        // k -> number of sentences occurring exactly k times, ascending k
        std::map<std::int64_t, std::int64_t> reuse_spectrum;
    };

    ReleaseStats compute_release_stats(const CorpusStore& store, ReleaseOrdinal release, const StatsOptions& options = {}); // NotFound
    std::vector<ReleaseStats> stats_series(const CorpusStore& store, Section section, const StatsOptions& options = {});
    std::vector<std::pair<std::int64_t, std::int64_t>> reuse_distribution(const CorpusStore& store, ReleaseOrdinal release, const StatsOptions& options = {});

    // Lists every violated identity; empty when the record is consistent.
    std::vector<std::string> identity_violations(const ReleaseStats& stats);

    void write_stats_header(std::ostream& output);
    void write_stats_rows(std::ostream& output, std::span<const ReleaseStats> series);
    nlohmann::json to_json(const ReleaseStats& stats);
    nlohmann::json series_json(Section section, std::span<const ReleaseStats> series);

    // One plot-ready data file per chart (totals, averages, unannotated entries,
    // unique/singleton counts, reuse distribution of each section's latest release).
    // Returns the files written.
    std::vector<std::filesystem::path> write_figure_data(const CorpusStore& store, const std::filesystem::path& directory, const StatsOptions& options = {});

} // namespace annoprov
