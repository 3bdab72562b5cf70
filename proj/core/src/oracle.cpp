// Deliberately naive reference implementations. They read the generated
// corpus directly and share no code with the parser, store or detectors.

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "annoprov/errors.hpp"
#include "annoprov/synthetic.hpp"

namespace annoprov::synthetic
{
    std::string name_list(std::vector<std::string> names)
    {
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        std::string out = "[";
        for (std::size_t i = 0; i < names.size(); ++i)
            out += (i ? "," : "") + names[i];
        return out + "]";
    }

    namespace
    {
        struct Components
        {
            std::vector<std::string> name;                     // smallest accession of each component
            std::unordered_map<std::string, std::size_t> of;   // accession -> component
        };

        Components accession_components(const SyntheticCorpus& corpus)
        {
            std::vector<std::string> accessions;
            std::unordered_map<std::string, std::size_t> index;
            std::vector<std::vector<std::size_t>> neighbours;
            auto node = [&](const std::string& accession) {
                auto [it, inserted] = index.try_emplace(accession, accessions.size());
                if (inserted) {
                    accessions.push_back(accession);
                    neighbours.emplace_back();
                }
                return it->second;
            };
            for (const auto& release : corpus.releases)
                for (const auto& entry : release.entries)
                    for (std::size_t i = 0; i < entry.accessions.size(); ++i) {
                        const auto a = node(entry.accessions[i]);
                        for (std::size_t j = 0; j < i; ++j) {
                            const auto b = node(entry.accessions[j]);
                            neighbours[a].push_back(b);
                            neighbours[b].push_back(a);
                        }
                    }

            Components result;
            std::vector<std::size_t> component(accessions.size(), SIZE_MAX);
            for (std::size_t start = 0; start < accessions.size(); ++start) {
                if (component[start] != SIZE_MAX)
                    continue;
                const std::size_t id = result.name.size();
                std::string smallest = accessions[start];
                std::deque<std::size_t> queue{start};
                component[start] = id;
                while (!queue.empty()) {
                    const auto current = queue.front();
                    queue.pop_front();
                    smallest = std::min(smallest, accessions[current]);
                    for (const auto next : neighbours[current])
                        if (component[next] == SIZE_MAX) {
                            component[next] = id;
                            queue.push_back(next);
                        }
                }
                result.name.push_back(smallest);
            }
            for (std::size_t i = 0; i < accessions.size(); ++i)
                result.of[accessions[i]] = component[i];
            return result;
        }

        std::string tag(const Release& release) { return describe(release); }
    } // namespace

    OracleResult brute_force_detect(const SyntheticCorpus& corpus, std::size_t max_cells)
    {
        const auto components = accession_components(corpus);
        const std::size_t n_releases = corpus.releases.size();
        const std::size_t n_clusters = components.name.size();

        // only sentences that occur somewhere get a row
        std::map<int, std::size_t> row_of;
        for (const auto& release : corpus.releases)
            for (const auto& entry : release.entries)
                for (const int s : entry.sentences)
                    row_of.try_emplace(s, 0);
        std::size_t rows = 0;
        for (auto& [s, row] : row_of)
            row = rows++;

        if (rows * n_clusters * n_releases > max_cells)
            throw Refused("corpus too large for the brute-force oracle");

        std::vector<unsigned char> present(rows * n_clusters * n_releases, 0);
        auto cell = [&](std::size_t row, std::size_t c, std::size_t r) -> unsigned char& { return present[(row * n_clusters + c) * n_releases + r]; };
        for (std::size_t r = 0; r < n_releases; ++r)
            for (const auto& entry : corpus.releases[r].entries)
                for (const int s : entry.sentences)
                    cell(row_of[s], components.of.at(entry.accessions.front()), r) = 1;

        auto section_of = [&](std::size_t r) { return corpus.releases[r].release.section; };
        auto release_name = [&](std::size_t r) { return tag(corpus.releases[r].release); };
        std::array<std::size_t, 2> latest{SIZE_MAX, SIZE_MAX};
        for (std::size_t r = 0; r < n_releases; ++r)
            latest[static_cast<std::size_t>(section_of(r))] = r;

        OracleResult result;
        for (const auto& [s, row] : row_of) {
            const auto& text = corpus.canonical_pool[static_cast<std::size_t>(s)];
            std::size_t first = SIZE_MAX;
            std::size_t last = 0;
            for (std::size_t r = 0; r < n_releases; ++r)
                for (std::size_t c = 0; c < n_clusters; ++c)
                    if (cell(row, c, r)) {
                        first = std::min(first, r);
                        last = std::max(last, r);
                    }

            std::vector<std::string> origin;
            for (std::size_t c = 0; c < n_clusters; ++c)
                if (cell(row, c, first))
                    origin.push_back(components.name[c]);
            const std::string origin_text = "origin=" + name_list(origin);

            for (const auto section : kSections) {
                const auto r = latest[static_cast<std::size_t>(section)];
                if (r == SIZE_MAX)
                    continue;
                for (std::size_t c = 0; c < n_clusters; ++c)
                    if (cell(row, c, r))
                        result.in_latest.insert(text);
            }

            // missing origin: compare the first release with the snapshot at the last one
            if (last > first) {
                std::vector<std::string> remaining;
                bool overlap = false;
                for (const auto section : kSections) {
                    std::size_t at = SIZE_MAX;
                    for (std::size_t r = 0; r <= last; ++r)
                        if (section_of(r) == section)
                            at = r;
                    if (at == SIZE_MAX || at < first)
                        continue;
                    for (std::size_t c = 0; c < n_clusters; ++c)
                        if (cell(row, c, at)) {
                            remaining.push_back(components.name[c]);
                            overlap = overlap || cell(row, c, first);
                        }
                }
                if (!overlap)
                    result.reports.push_back({PatternKind::MissingOrigin, text,
                                              origin_text + " first=" + release_name(first) + " last=" + release_name(last) + " remaining=" + name_list(remaining)});
            }

            std::vector<std::string> gaps;
            std::vector<std::string> sole;
            for (std::size_t c = 0; c < n_clusters; ++c) {
                for (const auto section : kSections) {
                    std::vector<std::size_t> releases_of_section;
                    for (std::size_t r = 0; r < n_releases; ++r)
                        if (section_of(r) == section)
                            releases_of_section.push_back(r);
                    std::size_t present_count = 0;
                    std::size_t only = 0;
                    std::size_t previous = SIZE_MAX;
                    bool absent_since = false;
                    for (const auto r : releases_of_section) {
                        if (cell(row, c, r)) {
                            if (previous != SIZE_MAX && absent_since)
                                gaps.push_back(components.name[c] + ":" + release_name(previous) + ">" + release_name(r));
                            previous = r;
                            absent_since = false;
                            ++present_count;
                            only = r;
                        }
                        else if (previous != SIZE_MAX) {
                            absent_since = true;
                        }
                    }
                    if (present_count == 1 && only != releases_of_section.back())
                        sole.push_back(components.name[c] + "@" + release_name(only));
                }
            }
            if (!gaps.empty())
                result.reports.push_back({PatternKind::ReappearingEntry, text, origin_text + " gaps=" + name_list(gaps)});
            if (!sole.empty())
                result.reports.push_back({PatternKind::TransientAppearance, text, origin_text + " sole=" + name_list(sole)});

            if (section_of(first) == Section::TrEMBL) {
                for (std::size_t r = first; r < n_releases; ++r) {
                    if (section_of(r) != Section::SwissProt)
                        continue;
                    bool here = false;
                    for (std::size_t c = 0; c < n_clusters && !here; ++c)
                        here = cell(row, c, r) != 0;
                    if (here) {
                        result.reports.push_back({PatternKind::OriginatingInTrembl, text,
                                                  origin_text + " first_trembl=" + release_name(first) + " first_swissprot=" + release_name(r)});
                        break;
                    }
                }
            }
        }
        std::sort(result.reports.begin(), result.reports.end());
        return result;
    }

    std::vector<ReleaseStats> brute_force_stats(const SyntheticCorpus& corpus)
    {
        const auto components = accession_components(corpus);
        std::vector<ReleaseStats> series;
        for (std::size_t r = 0; r < corpus.releases.size(); ++r) {
            const auto& release = corpus.releases[r];
            ReleaseStats stats;
            stats.release = release.release;
            stats.ordinal = ReleaseOrdinal{static_cast<std::int32_t>(r + 1)};
            std::map<int, std::set<std::size_t>> holders;
            for (const auto& entry : release.entries) {
                ++stats.entries_total;
                if (!entry.sentences.empty())
                    ++stats.entries_annotated;
                for (const int s : entry.sentences)
                    holders[s].insert(components.of.at(entry.accessions.front()));
            }
            stats.entries_unannotated = stats.entries_total - stats.entries_annotated;
            for (const auto& [s, clusters] : holders) {
                const auto k = static_cast<std::int64_t>(clusters.size());
                stats.total_sentences += k;
                ++stats.unique_sentences;
                ++stats.reuse_spectrum[k];
            }
            stats.singleton_sentences = stats.reuse_spectrum.count(1) ? stats.reuse_spectrum[1] : 0;
            stats.avg_sentences_per_entry = ratio(stats.total_sentences, stats.entries_annotated);
            stats.avg_entries_per_sentence = ratio(stats.total_sentences, stats.unique_sentences);
            stats.unique_fraction = ratio(stats.unique_sentences, stats.total_sentences);
            stats.unannotated_fraction = ratio(stats.entries_unannotated, stats.entries_total);
            series.push_back(std::move(stats));
        }
        return series;
    }

    // ---- naming of detector output ----

    std::vector<NamedReport> named_reports(const CorpusStore& store, const std::vector<PatternReport>& reports)
    {
        const auto& registry = store.releases();
        std::map<ClusterId, std::string> names;
        auto name = [&](ClusterId cluster) -> const std::string& {
            auto it = names.find(cluster);
            if (it == names.end()) {
                const auto accessions = store.cluster_accessions(cluster);
                it = names.emplace(cluster, *std::min_element(accessions.begin(), accessions.end())).first;
            }
            return it->second;
        };
        auto release_name = [&](ReleaseOrdinal ordinal) { return describe(registry.at(ordinal).release); };
        auto names_of = [&](const std::vector<ClusterId>& clusters) {
            std::vector<std::string> out;
            for (const auto cluster : clusters)
                out.push_back(name(cluster));
            return name_list(std::move(out));
        };

        std::vector<NamedReport> out;
        for (const auto& report : reports) {
            const std::string origin_text = "origin=" + names_of(report.origin_clusters);
            std::string detail;
            if (const auto* sets = std::get_if<OriginSets>(&report.evidence)) {
                detail = origin_text + " first=" + release_name(sets->first_release) + " last=" + release_name(sets->last_release) + " remaining=" + names_of(sets->last);
            }
            else if (const auto* gaps = std::get_if<std::vector<Gap>>(&report.evidence)) {
                std::vector<std::string> parts;
                for (const auto& gap : *gaps)
                    parts.push_back(name(gap.cluster) + ":" + release_name(gap.before) + ">" + release_name(gap.after));
                detail = origin_text + " gaps=" + name_list(std::move(parts));
            }
            else if (const auto* sole = std::get_if<std::vector<SoleAppearance>>(&report.evidence)) {
                std::vector<std::string> parts;
                for (const auto& appearance : *sole)
                    parts.push_back(name(appearance.cluster) + "@" + release_name(appearance.release));
                detail = origin_text + " sole=" + name_list(std::move(parts));
            }
            else {
                const auto& first = std::get<TremblFirst>(report.evidence);
                detail = origin_text + " first_trembl=" + release_name(first.first_trembl) + " first_swissprot=" + release_name(first.first_swissprot);
            }
            out.push_back(NamedReport{report.kind, store.sentence_text(report.sentence), std::move(detail)});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<NamedReport> detect_named(const CorpusStore& store)
    {
        std::vector<PatternReport> reports;
        scan_corpus(store, {}, [&](const PatternReport& report, bool) { reports.push_back(report); });
        return named_reports(store, reports);
    }

} // namespace annoprov::synthetic
