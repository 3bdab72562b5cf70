#include "annoprov/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "annoprov/errors.hpp"

namespace annoprov
{
    namespace
    {
        std::vector<std::string> split_tabs(const std::string& line)
        {
            std::vector<std::string> fields;
            std::string field;
            std::istringstream stream(line);
            while (std::getline(stream, field, '\t'))
                fields.push_back(field);
            return fields;
        }
    } // namespace

    std::vector<ManifestRow> parse_manifest(std::istream& input, const std::filesystem::path& base_dir)
    {
        std::vector<ManifestRow> rows;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(input, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty() || line.front() == '#')
                continue;
            const auto fields = split_tabs(line);
            if (line_no == 1 && !fields.empty() && fields[0] == "section")
                continue;
            if (fields.size() != 4)
                throw InvalidArgument("manifest line " + std::to_string(line_no) + ": expected 4 tab-separated fields");
            const auto section = parse_section(fields[0]);
            if (!section)
                throw InvalidArgument("manifest line " + std::to_string(line_no) + ": unknown section '" + fields[0] + "'");
            const auto date = parse_date(fields[2]);
            if (!date)
                throw InvalidArgument("manifest line " + std::to_string(line_no) + ": bad date '" + fields[2] + "'");
            std::filesystem::path path = fields[3];
            if (path.is_relative())
                path = base_dir / path;
            rows.push_back({Release{*section, fields[1], *date}, std::move(path)});
        }
        return rows;
    }

    std::vector<ManifestRow> read_manifest(const std::filesystem::path& manifest)
    {
        std::ifstream input(manifest);
        if (!input)
            throw NotFound("cannot open manifest " + manifest.string());
        return parse_manifest(input, manifest.parent_path());
    }

    void write_manifest(std::ostream& output, std::span<const ManifestRow> rows)
    {
        output << "section\tlabel\tdate\tpath\n";
        for (const auto& row : rows)
            output << section_name(row.release.section) << '\t' << row.release.label << '\t' << format_date(row.release.date) << '\t' << row.path.string() << '\n';
    }

    // ----------------------------------------------------------------------

    ReleaseReport ingest_release(CorpusStore& store, const Release& release, LineSource& source, const SentenceSegmenter& segmenter, DiagnosticSink& diagnostics)
    {
        ReleaseReport report;
        report.release = release;
        const std::size_t diagnostics_before = diagnostics.size();

        auto batch = store.begin_batch();
        const auto ordinal = store.register_release(release);
        if (store.releases().at(ordinal).ingested)
            throw Conflict("release " + describe(release) + " is already ingested");

        FlatFileReader reader(source, describe(release), diagnostics);
        std::vector<std::pair<std::string, std::int64_t>> entry_sentences;
        std::unordered_map<std::string, std::size_t> positions;
        while (auto entry = reader.next()) {
            ++report.entries;
            const auto cluster = store.upsert_entry(ordinal, entry->accessions);

            entry_sentences.clear();
            positions.clear();
            for (const auto& block : entry->comment_blocks) {
                for (const auto& sentence : segmenter.segment(block)) {
                    auto canonical = normalize(sentence);
                    ++report.sentences;
                    if (const auto it = positions.find(canonical); it != positions.end()) {
                        ++entry_sentences[it->second].second;
                    }
                    else {
                        positions.emplace(canonical, entry_sentences.size());
                        entry_sentences.emplace_back(std::move(canonical), 1);
                    }
                }
            }
            if (!entry_sentences.empty())
                ++report.annotated_entries;
            for (const auto& [text, multiplicity] : entry_sentences)
                store.add_occurrence(text, cluster, ordinal, multiplicity);
            report.occurrences += static_cast<std::int64_t>(entry_sentences.size());
        }
        store.record_entry_counts(ordinal, report.entries, report.annotated_entries);
        batch.commit();

        report.ordinal = store.releases().find(release.section, release.label).value();
        report.diagnostics = diagnostics.size() - diagnostics_before;
        return report;
    }

    std::vector<ReleaseReport> ingest_manifest(CorpusStore& store, std::span<const ManifestRow> rows, const SentenceSegmenter& segmenter, DiagnosticSink& diagnostics)
    {
        std::vector<ManifestRow> ordered(rows.begin(), rows.end());
        std::stable_sort(ordered.begin(), ordered.end(), [](const ManifestRow& a, const ManifestRow& b) { return release_order(a.release, b.release) < 0; });

        std::optional<Release> newest_ingested;
        for (const auto& info : store.releases().all()) {
            if (info.ingested)
                newest_ingested = info.release;
        }

        std::vector<bool> skip(ordered.size(), false);
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            const auto& row = ordered[i];
            if (const auto known = store.releases().find(row.release.section, row.release.label)) {
                const auto& info = store.releases().at(*known);
                if (info.release.date != row.release.date)
                    throw Conflict("release " + describe(row.release) + " already registered with date " + format_date(info.release.date));
                if (info.ingested) {
                    skip[i] = true;
                    continue;
                }
            }
            if (newest_ingested && release_order(row.release, *newest_ingested) < 0)
                throw Conflict("release " + describe(row.release) + " (" + format_date(row.release.date) + ") predates already ingested release " +
                               describe(*newest_ingested) + " (" + format_date(newest_ingested->date) + ")");
            if (!std::filesystem::is_regular_file(row.path))
                throw NotFound("release file not found: " + row.path.string());
        }

        std::vector<ReleaseReport> reports;
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            const auto& row = ordered[i];
            if (skip[i]) {
                ReleaseReport report;
                report.release = row.release;
                report.ordinal = *store.releases().find(row.release.section, row.release.label);
                report.skipped = true;
                reports.push_back(report);
                continue;
            }
            auto source = open_flat_file(row.path);
            reports.push_back(ingest_release(store, row.release, *source, segmenter, diagnostics));
        }
        // ordinals may have shifted while later releases were registered
        for (auto& report : reports)
            report.ordinal = *store.releases().find(report.release.section, report.release.label);
        return reports;
    }

    void write_ingest_report(std::ostream& output, std::span<const ReleaseReport> reports)
    {
        output << "section\tlabel\tdate\tordinal\tstatus\tentries\tannotated_entries\tsentences\toccurrences\tdiagnostics\n";
        for (const auto& report : reports) {
            output << section_name(report.release.section) << '\t' << report.release.label << '\t' << format_date(report.release.date) << '\t' << raw(report.ordinal)
                   << '\t' << (report.skipped ? "skipped" : "ingested") << '\t' << report.entries << '\t' << report.annotated_entries << '\t' << report.sentences << '\t'
                   << report.occurrences << '\t' << report.diagnostics << '\n';
        }
    }

} // namespace annoprov
