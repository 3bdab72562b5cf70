#include "annoprov/stats.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <nlohmann/json.hpp>

#include "annoprov/errors.hpp"

namespace annoprov
{
    std::optional<Ratio> ratio(std::int64_t numerator, std::int64_t denominator) noexcept
    {
        if (denominator == 0)
            return std::nullopt;
        return Ratio{numerator, denominator};
    }

    ReleaseStats compute_release_stats(const CorpusStore& store, ReleaseOrdinal release, const StatsOptions& options)
    {
        const auto& info = store.releases().at(release);
        ReleaseStats stats;
        stats.release = info.release;
        stats.ordinal = release;
        stats.entries_total = info.entries_total;
        stats.entries_annotated = info.entries_annotated;
        stats.entries_unannotated = info.entries_total - info.entries_annotated;

        store.for_each_in_release(release, [&](SentenceId, std::int64_t clusters, std::int64_t appearances) {
            const std::int64_t k = options.count_repeats ? appearances : clusters;
            ++stats.reuse_spectrum[k];
            stats.total_sentences += k;
            ++stats.unique_sentences;
        });
        if (const auto it = stats.reuse_spectrum.find(1); it != stats.reuse_spectrum.end())
            stats.singleton_sentences = it->second;

        stats.avg_sentences_per_entry = ratio(stats.total_sentences, stats.entries_annotated);
        stats.avg_entries_per_sentence = ratio(stats.total_sentences, stats.unique_sentences);
        stats.unique_fraction = ratio(stats.unique_sentences, stats.total_sentences);
        stats.unannotated_fraction = ratio(stats.entries_unannotated, stats.entries_total);
        return stats;
    }

    std::vector<ReleaseStats> stats_series(const CorpusStore& store, Section section, const StatsOptions& options)
    {
        std::vector<ReleaseStats> series;
        for (const auto ordinal : store.releases().section_ordinals(section))
            series.push_back(compute_release_stats(store, ordinal, options));
        return series;
    }

    std::vector<std::pair<std::int64_t, std::int64_t>> reuse_distribution(const CorpusStore& store, ReleaseOrdinal release, const StatsOptions& options)
    {
        const auto stats = compute_release_stats(store, release, options);
        return {stats.reuse_spectrum.begin(), stats.reuse_spectrum.end()};
    }

    std::vector<std::string> identity_violations(const ReleaseStats& s)
    {
        std::vector<std::string> violations;
        auto require = [&](bool holds, const char* identity) {
            if (!holds)
                violations.emplace_back(identity);
        };
        std::int64_t spectrum_unique = 0;
        std::int64_t spectrum_total = 0;
        for (const auto& [k, count] : s.reuse_spectrum) {
            spectrum_unique += count;
            spectrum_total += k * count;
        }
        const auto singles = s.reuse_spectrum.find(1);
        require(s.singleton_sentences <= s.unique_sentences && s.unique_sentences <= s.total_sentences, "singleton <= unique <= total");
        require(spectrum_unique == s.unique_sentences, "sum of spectrum = unique");
        require(spectrum_total == s.total_sentences, "sum of k * spectrum = total");
        require((singles == s.reuse_spectrum.end() ? 0 : singles->second) == s.singleton_sentences, "spectrum[1] = singleton");
        require(s.entries_annotated + s.entries_unannotated == s.entries_total, "annotated + unannotated = entries");
        require(s.avg_sentences_per_entry == ratio(s.total_sentences, s.entries_annotated), "sentences per entry = total / annotated");
        require(s.avg_entries_per_sentence == ratio(s.total_sentences, s.unique_sentences), "entries per sentence = total / unique");
        return violations;
    }

    namespace
    {
        void put(std::ostream& output, const std::optional<Ratio>& value)
        {
            if (value)
                output << std::fixed << std::setprecision(6) << value->value() << std::defaultfloat;
            else
                output << "NA";
        }

        nlohmann::json ratio_json(const std::optional<Ratio>& value)
        {
            if (!value)
                return nullptr;
            return {{"numerator", value->numerator}, {"denominator", value->denominator}, {"value", value->value()}};
        }

        void release_columns(std::ostream& output, const ReleaseStats& s)
        {
            output << section_name(s.release.section) << '\t' << s.release.label << '\t' << format_date(s.release.date);
        }

        std::ofstream create(const std::filesystem::path& path)
        {
            std::ofstream output(path, std::ios::trunc);
            if (!output)
                throw Error("cannot write " + path.string());
            return output;
        }
    } // namespace

    void write_stats_header(std::ostream& output)
    {
        output << "section\tlabel\tdate\tordinal\tentries_total\tentries_annotated\tentries_unannotated\ttotal_sentences\tunique_sentences\tsingleton_sentences"
                  "\tavg_sentences_per_entry\tavg_entries_per_sentence\tunique_fraction\tunannotated_fraction\n";
    }

    void write_stats_rows(std::ostream& output, std::span<const ReleaseStats> series)
    {
        for (const auto& s : series) {
            release_columns(output, s);
            output << '\t' << raw(s.ordinal) << '\t' << s.entries_total << '\t' << s.entries_annotated << '\t' << s.entries_unannotated << '\t' << s.total_sentences << '\t'
                   << s.unique_sentences << '\t' << s.singleton_sentences << '\t';
            put(output, s.avg_sentences_per_entry);
            output << '\t';
            put(output, s.avg_entries_per_sentence);
            output << '\t';
            put(output, s.unique_fraction);
            output << '\t';
            put(output, s.unannotated_fraction);
            output << '\n';
        }
    }

    nlohmann::json to_json(const ReleaseStats& s)
    {
        nlohmann::json spectrum = nlohmann::json::array();
        for (const auto& [k, count] : s.reuse_spectrum)
            spectrum.push_back({{"k", k}, {"sentences", count}});
        return {
            {"section", section_name(s.release.section)},
            {"label", s.release.label},
            {"date", format_date(s.release.date)},
            {"ordinal", raw(s.ordinal)},
            {"entries_total", s.entries_total},
            {"entries_annotated", s.entries_annotated},
            {"entries_unannotated", s.entries_unannotated},
            {"total_sentences", s.total_sentences},
            {"unique_sentences", s.unique_sentences},
            {"singleton_sentences", s.singleton_sentences},
            {"avg_sentences_per_entry", ratio_json(s.avg_sentences_per_entry)},
            {"avg_entries_per_sentence", ratio_json(s.avg_entries_per_sentence)},
            {"unique_fraction", ratio_json(s.unique_fraction)},
            {"unannotated_fraction", ratio_json(s.unannotated_fraction)},
            {"reuse_spectrum", std::move(spectrum)},
        };
    }

    nlohmann::json series_json(Section section, std::span<const ReleaseStats> series)
    {
        nlohmann::json releases = nlohmann::json::array();
        for (const auto& s : series)
            releases.push_back(to_json(s));
        return {{"section", section_name(section)}, {"series", std::move(releases)}};
    }

    std::vector<std::filesystem::path> write_figure_data(const CorpusStore& store, const std::filesystem::path& directory, const StatsOptions& options)
    {
        std::filesystem::create_directories(directory);
        std::vector<ReleaseStats> all;
        for (const auto section : kSections) {
            auto series = stats_series(store, section, options);
            all.insert(all.end(), series.begin(), series.end());
        }
        std::sort(all.begin(), all.end(), [](const ReleaseStats& a, const ReleaseStats& b) { return raw(a.ordinal) < raw(b.ordinal); });

        std::vector<std::filesystem::path> written;
        auto table = [&](const char* name, const char* header, auto&& row) {
            const auto path = directory / name;
            auto output = create(path);
            output << "section\tlabel\tdate\t" << header << '\n';
            for (const auto& s : all) {
                release_columns(output, s);
                output << '\t';
                row(output, s);
                output << '\n';
            }
            written.push_back(path);
        };

        table("total_sentences.tsv", "total_sentences", [](std::ostream& o, const ReleaseStats& s) { o << s.total_sentences; });
        table("sentences_per_entry.tsv", "avg_sentences_per_entry", [](std::ostream& o, const ReleaseStats& s) { put(o, s.avg_sentences_per_entry); });
        table("entries_per_sentence.tsv", "avg_entries_per_sentence", [](std::ostream& o, const ReleaseStats& s) { put(o, s.avg_entries_per_sentence); });
        table("unannotated_entries.tsv", "entries_total\tentries_unannotated\tunannotated_fraction", [](std::ostream& o, const ReleaseStats& s) {
            o << s.entries_total << '\t' << s.entries_unannotated << '\t';
            put(o, s.unannotated_fraction);
        });
        table("unique_singleton.tsv", "unique_sentences\tsingleton_sentences", [](std::ostream& o, const ReleaseStats& s) { o << s.unique_sentences << '\t' << s.singleton_sentences; });

        for (const auto section : kSections) {
            const auto latest = store.releases().latest(section);
            if (!latest)
                continue;
            const auto& release = store.releases().at(*latest).release;
            const auto path = directory / ("reuse_distribution_" + std::string(section_name(section)) + "_" + release.label + ".tsv");
            auto output = create(path);
            output << "k\tsentences\n";
            for (const auto& [k, count] : reuse_distribution(store, *latest, options))
                output << k << '\t' << count << '\n';
            written.push_back(path);
        }
        return written;
    }

} // namespace annoprov
