#include "annoprov/patterns.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "annoprov/errors.hpp"
#include "internal/store_impl.hpp"

namespace annoprov
{
    namespace
    {
        constexpr std::string_view kNames[] = {"missing_origin", "reappearing_entry", "transient_appearance", "originating_in_trembl"};

        bool before(ReleaseOrdinal a, ReleaseOrdinal b) noexcept { return raw(a) < raw(b); }

        struct Span
        {
            ReleaseOrdinal first{};
            ReleaseOrdinal last{};
        };

        Span span_of(std::span<const OccurrenceRecord> occurrences)
        {
            Span result{occurrences.front().release, occurrences.front().release};
            for (const auto& o : occurrences) {
                if (before(o.release, result.first))
                    result.first = o.release;
                if (before(result.last, o.release))
                    result.last = o.release;
            }
            return result;
        }

        std::vector<ClusterId> clusters_at(std::span<const OccurrenceRecord> occurrences, ReleaseOrdinal release)
        {
            std::vector<ClusterId> clusters;
            for (const auto& o : occurrences)
                if (o.release == release)
                    clusters.push_back(o.cluster);
            std::sort(clusters.begin(), clusters.end());
            clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
            return clusters;
        }

        // Section-local presence: for each (cluster, section), the sorted positions
        // within that section's release list where the sentence is present.
        using Tracks = std::map<std::pair<ClusterId, Section>, std::vector<std::size_t>>;

        Tracks tracks_of(const ReleaseRegistry& registry, std::span<const OccurrenceRecord> occurrences)
        {
            Tracks tracks;
            for (const auto& o : occurrences)
                tracks[{o.cluster, registry.section_of(o.release)}].push_back(registry.section_index(o.release));
            for (auto& [key, positions] : tracks) {
                std::sort(positions.begin(), positions.end());
                positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
            }
            return tracks;
        }

        PatternReport make_report(PatternKind kind, SentenceId sentence, std::span<const OccurrenceRecord> occurrences, PatternEvidence evidence)
        {
            return PatternReport{kind, sentence, clusters_at(occurrences, span_of(occurrences).first), std::move(evidence)};
        }

        nlohmann::json release_json(const ReleaseRegistry& registry, ReleaseOrdinal ordinal)
        {
            const auto& release = registry.at(ordinal).release;
            return {{"ordinal", raw(ordinal)}, {"section", section_name(release.section)}, {"label", release.label}, {"date", format_date(release.date)}};
        }

        nlohmann::json id_list(const std::vector<ClusterId>& clusters)
        {
            auto list = nlohmann::json::array();
            for (const auto cluster : clusters)
                list.push_back(raw(cluster));
            return list;
        }
    } // namespace

    std::string_view pattern_name(PatternKind kind) noexcept { return kNames[static_cast<std::size_t>(kind)]; }

    std::optional<PatternKind> parse_pattern_kind(std::string_view name) noexcept
    {
        for (const auto kind : kPatternKinds)
            if (pattern_name(kind) == name)
                return kind;
        return std::nullopt;
    }

    DetectionContext::DetectionContext(const ReleaseRegistry& releases) : registry{&releases}
    {
        for (const auto section : kSections)
            if (const auto last = releases.latest(section))
                latest.push_back(*last);
    }

    bool DetectionContext::is_latest(ReleaseOrdinal release) const noexcept { return std::find(latest.begin(), latest.end(), release) != latest.end(); }

    bool present_in_latest(const DetectionContext& context, std::span<const OccurrenceRecord> occurrences) noexcept
    {
        return std::any_of(occurrences.begin(), occurrences.end(), [&](const OccurrenceRecord& o) { return context.is_latest(o.release); });
    }

    std::optional<PatternReport> detect_missing_origin(const DetectionContext& context, SentenceId sentence, std::span<const OccurrenceRecord> occurrences)
    {
        if (occurrences.empty())
            return std::nullopt;
        const auto [first, last] = span_of(occurrences);
        if (!before(first, last))
            return std::nullopt;

        // The snapshot at `last` holds every section's most recent release up to
        // that point, so an unsynchronized calendar does not hide live clusters.
        std::vector<ClusterId> last_set;
        for (const auto section : kSections) {
            const auto at = context.registry->latest_at_or_before(section, last);
            if (!at || before(*at, first))
                continue;
            const auto clusters = clusters_at(occurrences, *at);
            last_set.insert(last_set.end(), clusters.begin(), clusters.end());
        }
        std::sort(last_set.begin(), last_set.end());
        last_set.erase(std::unique(last_set.begin(), last_set.end()), last_set.end());

        auto first_set = clusters_at(occurrences, first);
        std::vector<ClusterId> common;
        std::set_intersection(first_set.begin(), first_set.end(), last_set.begin(), last_set.end(), std::back_inserter(common));
        if (!common.empty())
            return std::nullopt;
        return PatternReport{PatternKind::MissingOrigin, sentence, first_set, OriginSets{first, last, first_set, std::move(last_set)}};
    }

    std::optional<PatternReport> detect_reappearing(const DetectionContext& context, SentenceId sentence, std::span<const OccurrenceRecord> occurrences)
    {
        if (occurrences.empty())
            return std::nullopt;
        const auto& registry = *context.registry;
        std::vector<Gap> gaps;
        for (const auto& [key, positions] : tracks_of(registry, occurrences)) {
            const auto& releases = registry.section_ordinals(key.second);
            for (std::size_t i = 1; i < positions.size(); ++i)
                if (positions[i] > positions[i - 1] + 1)
                    gaps.push_back(Gap{key.first, releases[positions[i - 1]], releases[positions[i]]});
        }
        if (gaps.empty())
            return std::nullopt;
        return make_report(PatternKind::ReappearingEntry, sentence, occurrences, std::move(gaps));
    }

    std::optional<PatternReport> detect_transient(const DetectionContext& context, SentenceId sentence, std::span<const OccurrenceRecord> occurrences)
    {
        if (occurrences.empty())
            return std::nullopt;
        const auto& registry = *context.registry;
        std::vector<SoleAppearance> sole;
        for (const auto& [key, positions] : tracks_of(registry, occurrences)) {
            const auto& releases = registry.section_ordinals(key.second);
            // presence in the section's newest release cannot yet be judged
            if (positions.size() == 1 && positions.front() + 1 < releases.size())
                sole.push_back(SoleAppearance{key.first, releases[positions.front()]});
        }
        if (sole.empty())
            return std::nullopt;
        return make_report(PatternKind::TransientAppearance, sentence, occurrences, std::move(sole));
    }

    std::optional<PatternReport> detect_trembl_origin(const DetectionContext& context, SentenceId sentence, std::span<const OccurrenceRecord> occurrences)
    {
        if (occurrences.empty())
            return std::nullopt;
        const auto& registry = *context.registry;
        const auto first = span_of(occurrences).first;
        if (registry.section_of(first) != Section::TrEMBL)
            return std::nullopt;
        std::optional<ReleaseOrdinal> first_swissprot;
        for (const auto& o : occurrences)
            if (registry.section_of(o.release) == Section::SwissProt && (!first_swissprot || before(o.release, *first_swissprot)))
                first_swissprot = o.release;
        if (!first_swissprot)
            return std::nullopt;
        return make_report(PatternKind::OriginatingInTrembl, sentence, occurrences, TremblFirst{first, *first_swissprot});
    }

    std::vector<PatternReport> detect_all(const DetectionContext& context, SentenceId sentence, std::span<const OccurrenceRecord> occurrences)
    {
        std::vector<PatternReport> reports;
        for (auto detector : {detect_missing_origin, detect_reappearing, detect_transient, detect_trembl_origin})
            if (auto report = detector(context, sentence, occurrences))
                reports.push_back(std::move(*report));
        return reports;
    }

    PatternSummary scan_corpus(const CorpusStore& store, const ScanOptions& options, const ReportSink& sink)
    {
        const ReleaseRegistry registry = options.until ? store.releases().truncated(*options.until) : store.releases();
        DetectionContext context(registry);
        if (!options.latest.empty())
            context.latest = options.latest;

        PatternSummary summary;
        std::vector<OccurrenceRecord> kept;
        store.for_each_sentence([&](SentenceId sentence, std::span<const OccurrenceRecord> occurrences) {
            std::span<const OccurrenceRecord> view = occurrences;
            if (options.until) {
                kept.clear();
                std::copy_if(occurrences.begin(), occurrences.end(), std::back_inserter(kept),
                             [&](const OccurrenceRecord& o) { return !before(*options.until, o.release); });
                if (kept.empty())
                    return;
                view = kept;
            }
            const bool in_latest = present_in_latest(context, view);
            ++summary.sentences;
            summary.sentences_in_latest += in_latest ? 1 : 0;
            for (const auto& report : detect_all(context, sentence, view)) {
                const auto index = static_cast<std::size_t>(report.kind);
                ++summary.all[index];
                summary.latest[index] += in_latest ? 1 : 0;
                if (sink)
                    sink(report, in_latest);
            }
        });
        return summary;
    }

    nlohmann::json to_json(const PatternReport& report, const ReleaseRegistry& registry)
    {
        nlohmann::json evidence = std::visit(
            [&](const auto& payload) -> nlohmann::json {
                using T = std::decay_t<decltype(payload)>;
                if constexpr (std::is_same_v<T, OriginSets>) {
                    return {{"first_release", release_json(registry, payload.first_release)},
                            {"last_release", release_json(registry, payload.last_release)},
                            {"first_set", id_list(payload.first)},
                            {"last_set", id_list(payload.last)}};
                }
                else if constexpr (std::is_same_v<T, std::vector<Gap>>) {
                    auto gaps = nlohmann::json::array();
                    for (const auto& gap : payload)
                        gaps.push_back({{"cluster_id", raw(gap.cluster)}, {"before", release_json(registry, gap.before)}, {"after", release_json(registry, gap.after)}});
                    return {{"gaps", std::move(gaps)}};
                }
                else if constexpr (std::is_same_v<T, std::vector<SoleAppearance>>) {
                    auto appearances = nlohmann::json::array();
                    for (const auto& sole : payload)
                        appearances.push_back({{"cluster_id", raw(sole.cluster)}, {"release", release_json(registry, sole.release)}});
                    return {{"appearances", std::move(appearances)}};
                }
                else {
                    return {{"first_trembl", release_json(registry, payload.first_trembl)}, {"first_swissprot", release_json(registry, payload.first_swissprot)}};
                }
            },
            report.evidence);
        return {{"kind", pattern_name(report.kind)}, {"sentence_id", raw(report.sentence)}, {"origin_clusters", id_list(report.origin_clusters)}, {"evidence", std::move(evidence)}};
    }

    void write_summary(std::ostream& output, const PatternSummary& summary)
    {
        output << "pattern\tall_versions\tlatest_version\n";
        for (const auto kind : kPatternKinds)
            output << pattern_name(kind) << '\t' << summary.count(kind) << '\t' << summary.count_latest(kind) << '\n';
        output << "unique_sentences\t" << summary.sentences << '\t' << summary.sentences_in_latest << '\n';
    }

    namespace
    {
        std::string corpus_fingerprint(const CorpusStore& store)
        {
            auto& db = detail::database(store);
            sql::Statement query(db, "SELECT (SELECT count(*) FROM releases WHERE ingested = 1), (SELECT count(*) FROM occurrences), "
                                     "(SELECT count(*) FROM cluster_aliases), (SELECT count(*) FROM sentences)");
            query.step();
            return std::to_string(query.int64(0)) + "/" + std::to_string(query.int64(1)) + "/" + std::to_string(query.int64(2)) + "/" + std::to_string(query.int64(3));
        }

        constexpr const char* kFingerprintKey = "patterns_fingerprint";
    } // namespace

    PatternSummary materialize_patterns(CorpusStore& store, const ScanOptions& options)
    {
        auto& db = detail::database(store);
        const auto& registry = store.releases();
        sql::Transaction transaction(db);
        db.exec("DELETE FROM pattern_reports");
        sql::Statement insert(db, "INSERT INTO pattern_reports(kind, sentence_id, in_latest, report) VALUES(?, ?, ?, ?)");
        const auto summary = scan_corpus(store, options, [&](const PatternReport& report, bool in_latest) {
            insert.reset().bind(1, static_cast<int>(report.kind)).bind(2, raw(report.sentence)).bind(3, in_latest ? 1 : 0).bind(4, to_json(report, registry).dump()).run();
        });
        sql::Statement remember(db, "INSERT INTO meta(key, value) VALUES(?, ?) ON CONFLICT(key) DO UPDATE SET value = excluded.value");
        remember.bind(1, kFingerprintKey).bind(2, options.until || !options.latest.empty() ? std::string("partial") : corpus_fingerprint(store)).run();
        transaction.commit();
        return summary;
    }

    void ensure_patterns_materialized(CorpusStore& store)
    {
        auto& db = detail::database(store);
        sql::Statement query(db, "SELECT value FROM meta WHERE key = ?");
        query.bind(1, kFingerprintKey);
        if (query.step() && query.text(0) == corpus_fingerprint(store))
            return;
        materialize_patterns(store);
    }

    PatternPage stored_patterns(const CorpusStore& store, PatternKind kind, bool latest_only, std::int64_t page, std::int64_t page_size)
    {
        if (page < 1 || page_size < 1)
            throw InvalidArgument("page and page_size must be positive");
        auto& db = detail::database(store);
        const std::string filter = latest_only ? " AND in_latest = 1" : "";
        PatternPage result;
        {
            sql::Statement count(db, "SELECT count(*) FROM pattern_reports WHERE kind = ?" + filter);
            count.bind(1, static_cast<int>(kind));
            count.step();
            result.total = count.int64(0);
        }
        sql::Statement rows(db, "SELECT report, in_latest FROM pattern_reports WHERE kind = ?" + filter + " ORDER BY sentence_id LIMIT ? OFFSET ?");
        rows.bind(1, static_cast<int>(kind)).bind(2, page_size).bind(3, (page - 1) * page_size);
        while (rows.step()) {
            auto item = nlohmann::json::parse(rows.text(0));
            item["in_latest"] = rows.int64(1) != 0;
            result.items.push_back(std::move(item));
        }
        return result;
    }

} // namespace annoprov
