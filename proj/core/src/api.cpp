#include "annoprov/api.hpp"

#include <charconv>
#include <limits>

#include "annoprov/classification.hpp"
#include "annoprov/errors.hpp"
#include "annoprov/patterns.hpp"
#include "annoprov/segmenter.hpp"
#include "annoprov/stats.hpp"

namespace annoprov
{
    namespace
    {
        std::optional<std::int64_t> parse_int(std::string_view text)
        {
            std::int64_t value = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
                return std::nullopt;
            return value;
        }

        std::optional<std::string> param(const QueryParams& query, const std::string& key)
        {
            const auto it = query.find(key);
            if (it == query.end())
                return std::nullopt;
            return it->second;
        }

        std::optional<bool> parse_flag(std::string_view text)
        {
            if (text == "true" || text == "1" || text == "yes")
                return true;
            if (text == "false" || text == "0" || text == "no")
                return false;
            return std::nullopt;
        }

        nlohmann::json release_json(const ReleaseInfo& info)
        {
            return {{"ordinal", raw(info.ordinal)}, {"section", section_name(info.release.section)}, {"label", info.release.label}, {"date", format_date(info.release.date)}};
        }

        std::vector<std::string_view> split_path(std::string_view path)
        {
            std::vector<std::string_view> parts;
            while (!path.empty()) {
                const auto slash = path.find('/');
                const auto part = path.substr(0, slash);
                if (!part.empty())
                    parts.push_back(part);
                if (slash == std::string_view::npos)
                    break;
                path.remove_prefix(slash + 1);
            }
            return parts;
        }
    } // namespace

    ApiResponse api_error(int status, std::string_view code, std::string_view message)
    {
        return {status, {{"code", code}, {"message", message}}};
    }

    ApiService::ApiService(CorpusStore& store, ApiConfig config) : store_{store}, config_{std::move(config)} {}

    std::string ApiService::entry_url(std::string_view accession) const
    {
        std::string url = config_.entry_url_template;
        constexpr std::string_view kPlaceholder = "{accession}";
        for (auto at = url.find(kPlaceholder); at != std::string::npos; at = url.find(kPlaceholder, at + accession.size()))
            url.replace(at, kPlaceholder.size(), accession);
        return url;
    }

    ApiResponse ApiService::handle(std::string_view method, std::string_view path, const QueryParams& query, std::string_view body)
    {
        std::lock_guard lock(mutex_);
        try {
            const auto parts = split_path(path);
            if (parts.size() < 2 || parts[0] != "v1")
                return api_error(404, "not_found", "no such endpoint");
            const auto resource = parts[1];
            const bool get = method == "GET";

            if (resource == "sentences" && parts.size() == 2 && get)
                return search_sentences(query);
            if (resource == "sentences" && parts.size() == 4 && parts[3] == "timeline" && get)
                return timeline(parts[2]);
            if (resource == "patterns" && parts.size() == 3 && get)
                return patterns(parts[2], query);
            if (resource == "stats" && parts.size() == 3 && get)
                return stats(parts[2], query);
            if (resource == "classifications" && parts.size() == 2) {
                if (method == "POST")
                    return post_classification(body);
                if (get)
                    return list_classifications(query);
                return api_error(405, "method_not_allowed", "use GET or POST");
            }
            return api_error(404, "not_found", "no such endpoint");
        }
        catch (const NotFound& e) {
            return api_error(404, "not_found", e.what());
        }
        catch (const Conflict& e) {
            return api_error(409, "conflict", e.what());
        }
        catch (const InvalidArgument& e) {
            return api_error(422, "invalid_argument", e.what());
        }
        catch (const std::exception& e) {
            return api_error(500, "internal", e.what());
        }
    }

    ApiResponse ApiService::search_sentences(const QueryParams& query)
    {
        const auto q = param(query, "q");
        if (!q)
            return api_error(422, "invalid_query", "parameter 'q' is required");
        std::size_t limit = config_.default_search_limit;
        if (const auto text = param(query, "limit")) {
            const auto value = parse_int(*text);
            if (!value || *value < 1)
                return api_error(422, "invalid_query", "'limit' must be a positive integer");
            limit = std::min<std::size_t>(static_cast<std::size_t>(*value), config_.max_search_limit);
        }
        std::string needle;
        try {
            needle = normalize(*q);
        }
        catch (const InvalidArgument&) {
            return api_error(422, "invalid_query", "'q' must contain non-whitespace text");
        }

        auto results = nlohmann::json::array();
        const auto exact = store_.find_sentence(needle);
        if (exact)
            results.push_back({{"sentence_id", raw(*exact)}, {"text", needle}, {"exact", true}});
        // one extra row tells whether the cap cut the list short
        auto matches = store_.search_sentences(needle, limit + 1);
        bool truncated = false;
        for (const auto& [id, text] : matches) {
            if (exact && id == *exact)
                continue;
            if (results.size() == limit) {
                truncated = true;
                break;
            }
            results.push_back({{"sentence_id", raw(id)}, {"text", text}, {"exact", false}});
        }
        return {200, {{"query", needle}, {"limit", limit}, {"truncated", truncated}, {"results", std::move(results)}}};
    }

    nlohmann::json ApiService::timeline_json(SentenceId sentence) const
    {
        const auto line = store_.timeline(sentence);
        const auto& registry = store_.releases();

        auto clusters = nlohmann::json::array();
        std::size_t points = 0;
        for (const auto& cluster : line.clusters) {
            auto cluster_points = nlohmann::json::array();
            for (const auto ordinal : cluster.ordinals) {
                const auto& info = registry.at(ordinal);
                auto accession = store_.primary_accession(cluster.cluster, ordinal).value_or(cluster.accessions.front());
                auto point = release_json(info);
                point["url"] = entry_url(accession);
                point["accession"] = std::move(accession);
                cluster_points.push_back(std::move(point));
                ++points;
            }
            clusters.push_back({{"cluster_id", raw(cluster.cluster)}, {"accessions", cluster.accessions}, {"points", std::move(cluster_points)}});
        }

        auto counts = nlohmann::json::array();
        nlohmann::json peak;
        std::size_t peak_count = 0;
        for (const auto& [ordinal, count] : line.counts) {
            auto item = release_json(registry.at(ordinal));
            item["count"] = count;
            if (count > peak_count) {
                peak_count = count;
                peak = item;
            }
            counts.push_back(std::move(item));
        }

        nlohmann::json rails;
        for (const auto section : kSections) {
            auto rail = nlohmann::json::array();
            for (const auto ordinal : line.rail(section))
                rail.push_back(release_json(registry.at(ordinal)));
            rails[std::string(section_name(section))] = std::move(rail);
        }

        return {{"sentence_id", raw(line.sentence)},
                {"text", line.text},
                {"lifetime_clusters", line.clusters.size()},
                {"occurrences", points},
                {"first", release_json(registry.at(line.first))},
                {"last", release_json(registry.at(line.last))},
                {"clusters", std::move(clusters)},
                {"counts", std::move(counts)},
                {"peak", std::move(peak)},
                {"rails", std::move(rails)}};
    }

    ApiResponse ApiService::timeline(std::string_view id_text)
    {
        const auto id = parse_int(id_text);
        if (!id)
            return api_error(422, "invalid_query", "sentence id must be an integer");
        return {200, timeline_json(SentenceId{*id})};
    }

    ApiResponse ApiService::patterns(std::string_view kind_name, const QueryParams& query)
    {
        const auto kind = parse_pattern_kind(kind_name);
        if (!kind)
            return api_error(400, "unknown_kind",
                             "unknown pattern kind '" + std::string(kind_name) + "'; expected missing_origin, reappearing_entry, transient_appearance or originating_in_trembl");
        std::int64_t page = 1;
        std::int64_t page_size = config_.default_page_size;
        bool latest_only = false;
        if (const auto text = param(query, "page")) {
            const auto value = parse_int(*text);
            if (!value || *value < 1)
                return api_error(400, "invalid_page", "'page' must be a positive integer");
            page = *value;
        }
        if (const auto text = param(query, "page_size")) {
            const auto value = parse_int(*text);
            if (!value || *value < 1)
                return api_error(400, "invalid_page", "'page_size' must be a positive integer");
            page_size = std::min(*value, config_.max_page_size);
        }
        if (const auto text = param(query, "latest")) {
            const auto value = parse_flag(*text);
            if (!value)
                return api_error(400, "invalid_filter", "'latest' must be true or false");
            latest_only = *value;
        }

        if (!patterns_ready_) {
            if (config_.latest.empty()) {
                ensure_patterns_materialized(store_);
            }
            else {
                ScanOptions options;
                options.latest = config_.latest;
                materialize_patterns(store_, options);
            }
            patterns_ready_ = true;
        }
        if (page > (std::numeric_limits<std::int64_t>::max() / page_size))
            page = std::numeric_limits<std::int64_t>::max() / page_size;
        auto listing = stored_patterns(store_, *kind, latest_only, page, page_size);
        return {200,
                {{"kind", pattern_name(*kind)},
                 {"page", page},
                 {"page_size", page_size},
                 {"latest_only", latest_only},
                 {"total", listing.total},
                 {"items", std::move(listing.items)}}};
    }

    ApiResponse ApiService::stats(std::string_view section_text, const QueryParams& query)
    {
        const auto section = parse_section(section_text);
        if (!section)
            return api_error(400, "unknown_section", "section must be swissprot or trembl");
        StatsOptions options;
        if (const auto text = param(query, "count_repeats")) {
            const auto value = parse_flag(*text);
            if (!value)
                return api_error(400, "invalid_filter", "'count_repeats' must be true or false");
            options.count_repeats = *value;
        }
        const auto series = stats_series(store_, *section, options);
        return {200, series_json(*section, series)};
    }

    ApiResponse ApiService::post_classification(std::string_view body)
    {
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(body);
        }
        catch (const nlohmann::json::exception&) {
            return api_error(400, "malformed_json", "request body is not valid JSON");
        }
        ClassificationLog log(store_);
        const auto submission = log.submit(record_from_json(parsed));
        auto out = to_json(submission.record);
        out["q1_forced"] = submission.q1_forced;
        return {201, std::move(out)};
    }

    ApiResponse ApiService::list_classifications(const QueryParams& query)
    {
        const auto text = param(query, "sentence_id");
        if (!text)
            return api_error(422, "invalid_query", "parameter 'sentence_id' is required");
        const auto id = parse_int(*text);
        if (!id)
            return api_error(422, "invalid_query", "sentence_id must be an integer");
        const SentenceId sentence{*id};
        store_.sentence_text(sentence); // NotFound
        auto records = nlohmann::json::array();
        for (const auto& record : ClassificationLog(store_).history(sentence))
            records.push_back(to_json(record));
        return {200, {{"sentence_id", *id}, {"records", std::move(records)}}};
    }

} // namespace annoprov
