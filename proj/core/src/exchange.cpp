#include "annoprov/exchange.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "annoprov/errors.hpp"
#include "internal/store_impl.hpp"

namespace annoprov
{
    namespace
    {
        constexpr const char* kBundleMagic = "annoprov-bundle\t1";

        std::ofstream create(const std::filesystem::path& path)
        {
            std::ofstream output(path, std::ios::binary | std::ios::trunc);
            if (!output)
                throw Error("cannot write " + path.string());
            return output;
        }

        std::ifstream open(const std::filesystem::path& path)
        {
            std::ifstream input(path, std::ios::binary);
            if (!input)
                throw NotFound("bundle file missing: " + path.string());
            return input;
        }

        std::vector<std::string> fields_of(const std::string& line, std::size_t expected, const std::filesystem::path& file)
        {
            std::vector<std::string> fields;
            std::size_t start = 0;
            while (true) {
                const auto tab = line.find('\t', start);
                fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
                if (tab == std::string::npos)
                    break;
                start = tab + 1;
            }
            if (fields.size() != expected)
                throw InvalidArgument("malformed line in " + file.filename().string() + ": " + line);
            return fields;
        }

        std::int64_t to_int(const std::string& text)
        {
            std::int64_t value = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || ptr != text.data() + text.size())
                throw InvalidArgument("not an integer: '" + text + "'");
            return value;
        }

        template <typename Visit> void for_each_line(const std::filesystem::path& file, std::size_t fields, Visit&& visit)
        {
            auto input = open(file);
            std::string line;
            while (std::getline(input, line)) {
                if (!line.empty())
                    visit(fields_of(line, fields, file));
            }
        }

        std::int64_t release_id_for(const ReleaseRegistry& registry, const std::string& section_text, const std::string& label)
        {
            const auto section = parse_section(section_text);
            if (!section)
                throw InvalidArgument("unknown section '" + section_text + "'");
            const auto ordinal = registry.find(*section, label);
            if (!ordinal)
                throw InvalidArgument("bundle references unknown release " + section_text + ":" + label);
            return registry.at(*ordinal).release_id;
        }
    } // namespace

    void write_occurrence_relation(const CorpusStore& store, std::ostream& output)
    {
        const auto& registry = store.releases();
        std::vector<OccurrenceRecord> rows;
        store.for_each_sentence([&](SentenceId, std::span<const OccurrenceRecord> group) {
            rows.assign(group.begin(), group.end());
            std::sort(rows.begin(), rows.end(), [](const OccurrenceRecord& a, const OccurrenceRecord& b) {
                return std::tie(a.cluster, a.release) < std::tie(b.cluster, b.release);
            });
            for (const auto& row : rows) {
                const auto& release = registry.at(row.release).release;
                output << raw(row.sentence) << '\t' << raw(row.cluster) << '\t' << section_name(release.section) << '\t' << release.label << '\n';
            }
        });
    }

    void export_bundle(const CorpusStore& store, const std::filesystem::path& directory)
    {
        std::filesystem::create_directories(directory);
        auto& db = detail::database(store);
        const auto& registry = store.releases();

        create(directory / "FORMAT") << kBundleMagic << '\n';
        {
            auto out = create(directory / "releases.tsv");
            for (const auto& info : registry.all()) {
                out << section_name(info.release.section) << '\t' << info.release.label << '\t' << format_date(info.release.date) << '\t' << info.entries_total << '\t'
                    << info.entries_annotated << '\t' << (info.ingested ? 1 : 0) << '\n';
            }
        }
        {
            auto out = create(directory / "sentences.tsv");
            sql::Statement query(db, "SELECT sentence_id, text FROM sentences ORDER BY sentence_id");
            while (query.step())
                out << query.int64(0) << '\t' << query.text(1) << '\n';
        }
        {
            auto out = create(directory / "accessions.tsv");
            sql::Statement query(db, "SELECT accession, cluster_id, seq FROM accessions ORDER BY seq");
            while (query.step())
                out << query.text(0) << '\t' << query.int64(1) << '\t' << query.int64(2) << '\n';
        }
        {
            auto out = create(directory / "cluster_aliases.tsv");
            sql::Statement query(db, "SELECT absorbed, survivor FROM cluster_aliases ORDER BY absorbed");
            while (query.step())
                out << query.int64(0) << '\t' << query.int64(1) << '\n';
        }
        {
            std::vector<std::tuple<std::int64_t, ReleaseOrdinal, std::string>> rows;
            sql::Statement query(db, "SELECT cluster_id, release_id, accession FROM primaries");
            while (query.step())
                rows.emplace_back(query.int64(0), registry.by_release_id(query.int64(1)).value(), query.text(2));
            std::sort(rows.begin(), rows.end());
            auto out = create(directory / "primaries.tsv");
            for (const auto& [cluster, ordinal, accession] : rows) {
                const auto& release = registry.at(ordinal).release;
                out << cluster << '\t' << section_name(release.section) << '\t' << release.label << '\t' << accession << '\n';
            }
        }
        {
            auto out = create(directory / kOccurrenceFile);
            write_occurrence_relation(store, out);
        }
        {
            auto out = create(directory / "multiplicities.tsv");
            store.for_each_sentence([&](SentenceId, std::span<const OccurrenceRecord> group) {
                std::vector<OccurrenceRecord> rows(group.begin(), group.end());
                std::sort(rows.begin(), rows.end(), [](const OccurrenceRecord& a, const OccurrenceRecord& b) {
                    return std::tie(a.cluster, a.release) < std::tie(b.cluster, b.release);
                });
                for (const auto& row : rows) {
                    if (row.multiplicity == 1)
                        continue;
                    const auto& release = registry.at(row.release).release;
                    out << raw(row.sentence) << '\t' << raw(row.cluster) << '\t' << section_name(release.section) << '\t' << release.label << '\t' << row.multiplicity
                        << '\n';
                }
            });
        }
    }

    void import_bundle(CorpusStore& store, const std::filesystem::path& directory)
    {
        {
            auto format = open(directory / "FORMAT");
            std::string magic;
            std::getline(format, magic);
            if (magic != kBundleMagic)
                throw InvalidArgument(directory.string() + " is not a supported export bundle");
        }
        if (!store.releases().empty() || store.sentence_count() != 0)
            throw Conflict("import requires an empty store");

        auto& db = detail::database(store);
        {
            sql::Transaction transaction(db);

            sql::Statement insert_release(db, "INSERT INTO releases(section, label, date, entries_total, entries_annotated, ingested) VALUES(?, ?, ?, ?, ?, ?)");
            for_each_line(directory / "releases.tsv", 6, [&](const std::vector<std::string>& f) {
                const auto section = parse_section(f[0]);
                if (!section || !parse_date(f[2]))
                    throw InvalidArgument("malformed release row " + f[0] + ":" + f[1]);
                insert_release.reset()
                    .bind(1, static_cast<int>(*section))
                    .bind(2, f[1])
                    .bind(3, f[2])
                    .bind(4, to_int(f[3]))
                    .bind(5, to_int(f[4]))
                    .bind(6, to_int(f[5]))
                    .run();
            });
            store.impl().load_registry();
            const auto& registry = store.releases();

            sql::Statement insert_sentence(db, "INSERT INTO sentences(sentence_id, text) VALUES(?, ?)");
            for_each_line(directory / "sentences.tsv", 2, [&](const std::vector<std::string>& f) { insert_sentence.reset().bind(1, to_int(f[0])).bind(2, f[1]).run(); });

            sql::Statement insert_accession(db, "INSERT INTO accessions(accession, cluster_id, seq) VALUES(?, ?, ?)");
            for_each_line(directory / "accessions.tsv", 3,
                          [&](const std::vector<std::string>& f) { insert_accession.reset().bind(1, f[0]).bind(2, to_int(f[1])).bind(3, to_int(f[2])).run(); });

            sql::Statement insert_alias(db, "INSERT INTO cluster_aliases(absorbed, survivor) VALUES(?, ?)");
            for_each_line(directory / "cluster_aliases.tsv", 2,
                          [&](const std::vector<std::string>& f) { insert_alias.reset().bind(1, to_int(f[0])).bind(2, to_int(f[1])).run(); });

            sql::Statement insert_primary(db, "INSERT INTO primaries(cluster_id, release_id, accession) VALUES(?, ?, ?)");
            for_each_line(directory / "primaries.tsv", 4, [&](const std::vector<std::string>& f) {
                insert_primary.reset().bind(1, to_int(f[0])).bind(2, release_id_for(registry, f[1], f[2])).bind(3, f[3]).run();
            });

            sql::Statement insert_occurrence(db, "INSERT INTO occurrences(sentence_id, cluster_id, release_id, multiplicity) VALUES(?, ?, ?, 1)");
            for_each_line(directory / kOccurrenceFile, 4, [&](const std::vector<std::string>& f) {
                insert_occurrence.reset().bind(1, to_int(f[0])).bind(2, to_int(f[1])).bind(3, release_id_for(registry, f[2], f[3])).run();
            });

            sql::Statement update_multiplicity(db, "UPDATE occurrences SET multiplicity = ? WHERE sentence_id = ? AND cluster_id = ? AND release_id = ?");
            for_each_line(directory / "multiplicities.tsv", 5, [&](const std::vector<std::string>& f) {
                update_multiplicity.reset().bind(1, to_int(f[4])).bind(2, to_int(f[0])).bind(3, to_int(f[1])).bind(4, release_id_for(registry, f[2], f[3])).run();
                if (db.changes() != 1)
                    throw InvalidArgument("multiplicity row without a matching occurrence");
            });

            transaction.commit();
        }
        store.reload();
    }

} // namespace annoprov
