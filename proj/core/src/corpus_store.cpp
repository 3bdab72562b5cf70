#include "annoprov/corpus_store.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "annoprov/errors.hpp"
#include "annoprov/segmenter.hpp"
#include "internal/store_impl.hpp"

namespace annoprov
{
    namespace
    {
        // 'ANPV'
        constexpr std::int64_t kApplicationId = 0x414E5056;

        constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS meta(key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS releases(
    release_id INTEGER PRIMARY KEY,
    section INTEGER NOT NULL,
    label TEXT NOT NULL,
    date TEXT NOT NULL,
    entries_total INTEGER NOT NULL DEFAULT 0,
    entries_annotated INTEGER NOT NULL DEFAULT 0,
    ingested INTEGER NOT NULL DEFAULT 0,
    UNIQUE(section, label));
CREATE TABLE IF NOT EXISTS sentences(sentence_id INTEGER PRIMARY KEY, text TEXT NOT NULL UNIQUE);
CREATE TABLE IF NOT EXISTS accessions(
    accession TEXT PRIMARY KEY,
    cluster_id INTEGER NOT NULL,
    seq INTEGER NOT NULL) WITHOUT ROWID;
CREATE INDEX IF NOT EXISTS accessions_by_cluster ON accessions(cluster_id, seq);
CREATE TABLE IF NOT EXISTS cluster_aliases(absorbed INTEGER PRIMARY KEY, survivor INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS primaries(
    cluster_id INTEGER NOT NULL,
    release_id INTEGER NOT NULL,
    accession TEXT NOT NULL,
    PRIMARY KEY(cluster_id, release_id)) WITHOUT ROWID;
CREATE TABLE IF NOT EXISTS occurrences(
    sentence_id INTEGER NOT NULL,
    cluster_id INTEGER NOT NULL,
    release_id INTEGER NOT NULL,
    multiplicity INTEGER NOT NULL DEFAULT 1,
    PRIMARY KEY(sentence_id, cluster_id, release_id)) WITHOUT ROWID;
CREATE INDEX IF NOT EXISTS occurrences_by_cluster ON occurrences(cluster_id, release_id);
CREATE INDEX IF NOT EXISTS occurrences_by_release ON occurrences(release_id, sentence_id);
CREATE TABLE IF NOT EXISTS pattern_reports(
    kind INTEGER NOT NULL,
    sentence_id INTEGER NOT NULL,
    in_latest INTEGER NOT NULL,
    report TEXT NOT NULL,
    PRIMARY KEY(kind, sentence_id)) WITHOUT ROWID;
CREATE TABLE IF NOT EXISTS classifications(
    record_id INTEGER PRIMARY KEY,
    sentence_id INTEGER NOT NULL,
    classification TEXT NOT NULL,
    decision_path TEXT NOT NULL,
    analyst TEXT NOT NULL,
    timestamp TEXT NOT NULL,
    notes TEXT NOT NULL);
CREATE INDEX IF NOT EXISTS classifications_by_sentence ON classifications(sentence_id, record_id);
)sql";

        std::int64_t pragma_value(sql::Database& db, const char* pragma)
        {
            sql::Statement statement(db, std::string("PRAGMA ") + pragma);
            return statement.step() ? statement.int64(0) : 0;
        }
    } // namespace

    // ----------------------------------------------------------------------

    ReleaseRegistry::ReleaseRegistry(std::vector<ReleaseInfo> releases) : releases_{std::move(releases)}
    {
        std::sort(releases_.begin(), releases_.end(), [](const ReleaseInfo& a, const ReleaseInfo& b) { return release_order(a.release, b.release) < 0; });
        section_index_.resize(releases_.size());
        std::int64_t max_id = 0;
        for (std::size_t i = 0; i < releases_.size(); ++i) {
            auto& info = releases_[i];
            info.ordinal = ReleaseOrdinal{static_cast<std::int32_t>(i + 1)};
            auto& section = by_section_[static_cast<std::size_t>(info.release.section)];
            section_index_[i] = section.size();
            section.push_back(info.ordinal);
            max_id = std::max(max_id, info.release_id);
        }
        ordinal_by_release_id_.assign(static_cast<std::size_t>(max_id + 1), 0);
        for (const auto& info : releases_) {
            if (info.release_id > 0)
                ordinal_by_release_id_[static_cast<std::size_t>(info.release_id)] = raw(info.ordinal);
        }
    }

    bool ReleaseRegistry::contains(ReleaseOrdinal ordinal) const noexcept { return raw(ordinal) >= 1 && static_cast<std::size_t>(raw(ordinal)) <= releases_.size(); }

    const ReleaseInfo& ReleaseRegistry::at(ReleaseOrdinal ordinal) const
    {
        if (!contains(ordinal))
            throw NotFound("unknown release ordinal " + std::to_string(raw(ordinal)));
        return releases_[static_cast<std::size_t>(raw(ordinal) - 1)];
    }

    std::optional<ReleaseOrdinal> ReleaseRegistry::find(Section section, std::string_view label) const noexcept
    {
        for (const auto& info : releases_) {
            if (info.release.section == section && info.release.label == label)
                return info.ordinal;
        }
        return std::nullopt;
    }

    std::optional<ReleaseOrdinal> ReleaseRegistry::by_release_id(std::int64_t release_id) const noexcept
    {
        if (release_id <= 0 || static_cast<std::size_t>(release_id) >= ordinal_by_release_id_.size())
            return std::nullopt;
        const auto ordinal = ordinal_by_release_id_[static_cast<std::size_t>(release_id)];
        if (ordinal == 0)
            return std::nullopt;
        return ReleaseOrdinal{ordinal};
    }

    std::size_t ReleaseRegistry::section_index(ReleaseOrdinal ordinal) const
    {
        at(ordinal);
        return section_index_[static_cast<std::size_t>(raw(ordinal) - 1)];
    }

    std::optional<ReleaseOrdinal> ReleaseRegistry::latest(Section section) const noexcept
    {
        const auto& ordinals = section_ordinals(section);
        if (ordinals.empty())
            return std::nullopt;
        return ordinals.back();
    }

    std::optional<ReleaseOrdinal> ReleaseRegistry::latest_at_or_before(Section section, ReleaseOrdinal bound) const noexcept
    {
        const auto& ordinals = section_ordinals(section);
        const auto it = std::upper_bound(ordinals.begin(), ordinals.end(), bound);
        if (it == ordinals.begin())
            return std::nullopt;
        return *std::prev(it);
    }

    std::optional<ReleaseOrdinal> ReleaseRegistry::last() const noexcept
    {
        if (releases_.empty())
            return std::nullopt;
        return releases_.back().ordinal;
    }

    ReleaseRegistry ReleaseRegistry::truncated(ReleaseOrdinal until) const
    {
        std::vector<ReleaseInfo> kept;
        for (const auto& info : releases_) {
            if (info.ordinal <= until)
                kept.push_back(info);
        }
        return ReleaseRegistry(std::move(kept));
    }

    std::size_t SentenceTimeline::occurrence_count() const noexcept
    {
        std::size_t total = 0;
        for (const auto& [ordinal, count] : counts)
            total += count;
        return total;
    }

    // ----------------------------------------------------------------------

    void CorpusStore::Impl::init_schema()
    {
        const auto app_id = pragma_value(db, "application_id");
        const auto version = pragma_value(db, "user_version");
        if (app_id != 0 && app_id != kApplicationId)
            throw StoreError(path.string() + " is not an annoprov store");
        if (app_id == kApplicationId && version > kFormatVersion)
            throw StoreError(path.string() + " uses store format " + std::to_string(version) + ", newer than this build (" + std::to_string(kFormatVersion) + ")");
        if (app_id == 0) {
            sql::Statement tables(db, "SELECT count(*) FROM sqlite_master");
            if (tables.step() && tables.int64(0) > 0)
                throw StoreError(path.string() + " is a database but not an annoprov store");
        }

        if (path != kInMemory) {
            db.exec("PRAGMA journal_mode=WAL");
            db.exec("PRAGMA synchronous=NORMAL");
        }
        db.exec("PRAGMA cache_size=-65536");
        db.exec("PRAGMA temp_store=MEMORY");

        if (app_id == 0) {
            sql::Transaction transaction(db);
            db.exec(kSchema);
            db.exec("PRAGMA application_id=" + std::to_string(kApplicationId));
            db.exec("PRAGMA user_version=" + std::to_string(kFormatVersion));
            sql::Statement meta(db, "INSERT OR REPLACE INTO meta(key, value) VALUES(?, ?)");
            meta.bind(1, "format").bind(2, kFormatName).run();
            meta.reset().bind(1, "format_version").bind(2, std::to_string(kFormatVersion)).run();
            transaction.commit();
        }
    }

    void CorpusStore::Impl::prepare()
    {
        insert_sentence = sql::Statement(db, "INSERT INTO sentences(sentence_id, text) VALUES(?, ?)");
        insert_accession = sql::Statement(db, "INSERT INTO accessions(accession, cluster_id, seq) VALUES(?, ?, ?)");
        insert_primary = sql::Statement(db, "INSERT OR IGNORE INTO primaries(cluster_id, release_id, accession) VALUES(?, ?, ?)");
        upsert_occurrence = sql::Statement(db, "INSERT INTO occurrences(sentence_id, cluster_id, release_id, multiplicity) VALUES(?, ?, ?, ?) "
                                               "ON CONFLICT(sentence_id, cluster_id, release_id) DO UPDATE SET multiplicity = multiplicity + excluded.multiplicity");
        move_accessions = sql::Statement(db, "UPDATE accessions SET cluster_id = ?1 WHERE cluster_id = ?2");
        copy_primaries = sql::Statement(db, "INSERT INTO primaries(cluster_id, release_id, accession) SELECT ?1, release_id, accession FROM primaries "
                                            "WHERE cluster_id = ?2 ON CONFLICT(cluster_id, release_id) DO NOTHING");
        drop_primaries = sql::Statement(db, "DELETE FROM primaries WHERE cluster_id = ?1");
        copy_occurrences = sql::Statement(db, "INSERT INTO occurrences(sentence_id, cluster_id, release_id, multiplicity) "
                                              "SELECT sentence_id, ?1, release_id, multiplicity FROM occurrences WHERE cluster_id = ?2 "
                                              "ON CONFLICT(sentence_id, cluster_id, release_id) DO UPDATE SET multiplicity = multiplicity + excluded.multiplicity");
        drop_occurrences = sql::Statement(db, "DELETE FROM occurrences WHERE cluster_id = ?1");
        record_alias = sql::Statement(db, "INSERT OR REPLACE INTO cluster_aliases(absorbed, survivor) VALUES(?, ?)");
    }

    void CorpusStore::Impl::load_registry()
    {
        std::vector<ReleaseInfo> releases;
        sql::Statement query(db, "SELECT release_id, section, label, date, entries_total, entries_annotated, ingested FROM releases");
        while (query.step()) {
            ReleaseInfo info;
            info.release_id = query.int64(0);
            info.release.section = static_cast<Section>(query.int64(1));
            info.release.label = query.text(2);
            const auto date = parse_date(query.text(3));
            if (!date)
                throw StoreError("corrupt release date in store: " + query.text(3));
            info.release.date = *date;
            info.entries_total = query.int64(4);
            info.entries_annotated = query.int64(5);
            info.ingested = query.int64(6) != 0;
            releases.push_back(std::move(info));
        }
        registry = ReleaseRegistry(std::move(releases));
    }

    void CorpusStore::Impl::load()
    {
        load_registry();

        sentence_ids.clear();
        next_sentence_id = 1;
        sql::Statement sentences(db, "SELECT sentence_id, text FROM sentences");
        while (sentences.step()) {
            const auto id = sentences.int64(0);
            sentence_ids.emplace(sentences.text(1), SentenceId{id});
            next_sentence_id = std::max(next_sentence_id, id + 1);
        }

        accession_clusters.clear();
        next_cluster_id = 1;
        next_accession_seq = 1;
        sql::Statement accessions(db, "SELECT accession, cluster_id, seq FROM accessions");
        while (accessions.step()) {
            const auto cluster = accessions.int64(1);
            accession_clusters.emplace(accessions.text(0), cluster);
            next_cluster_id = std::max(next_cluster_id, cluster + 1);
            next_accession_seq = std::max(next_accession_seq, accessions.int64(2) + 1);
        }
        // ids of absorbed clusters stay reserved and keep resolving to their survivor
        std::vector<std::pair<std::int64_t, std::int64_t>> aliases;
        sql::Statement alias_query(db, "SELECT absorbed, survivor FROM cluster_aliases");
        while (alias_query.step()) {
            aliases.emplace_back(alias_query.int64(0), alias_query.int64(1));
            next_cluster_id = std::max(next_cluster_id, alias_query.int64(0) + 1);
        }
        clusters = DisjointSet(static_cast<std::size_t>(next_cluster_id));
        for (const auto& [absorbed, survivor] : aliases)
            clusters.unite(static_cast<std::size_t>(survivor), static_cast<std::size_t>(absorbed));
    }

    void CorpusStore::Impl::merge_clusters(std::int64_t survivor, std::int64_t absorbed)
    {
        move_accessions.reset().bind(1, survivor).bind(2, absorbed).run();
        copy_primaries.reset().bind(1, survivor).bind(2, absorbed).run();
        drop_primaries.reset().bind(1, absorbed).run();
        copy_occurrences.reset().bind(1, survivor).bind(2, absorbed).run();
        drop_occurrences.reset().bind(1, absorbed).run();
        record_alias.reset().bind(1, absorbed).bind(2, survivor).run();
        clusters.unite(static_cast<std::size_t>(survivor), static_cast<std::size_t>(absorbed));
    }

    // ----------------------------------------------------------------------

    CorpusStore::CorpusStore(const std::filesystem::path& path) : impl_{std::make_unique<Impl>()}
    {
        impl_->path = path;
        impl_->db = sql::Database(path.string());
        impl_->init_schema();
        impl_->prepare();
        impl_->load();
    }

    CorpusStore::~CorpusStore() = default;
    CorpusStore::CorpusStore(CorpusStore&&) noexcept = default;
    CorpusStore& CorpusStore::operator=(CorpusStore&&) noexcept = default;

    const std::filesystem::path& CorpusStore::path() const noexcept { return impl_->path; }
    const ReleaseRegistry& CorpusStore::releases() const noexcept { return impl_->registry; }

    void CorpusStore::reload() { impl_->load(); }

    ReleaseOrdinal CorpusStore::register_release(const Release& release)
    {
        if (release.label.empty())
            throw InvalidArgument("release label must not be empty");
        if (!release.date.ok())
            throw InvalidArgument("release " + describe(release) + " has an invalid date");
        if (const auto existing = impl_->registry.find(release.section, release.label)) {
            const auto& known = impl_->registry.at(*existing).release;
            if (known.date != release.date)
                throw Conflict("release " + describe(release) + " already registered with date " + format_date(known.date));
            return *existing;
        }
        sql::Statement insert(impl_->db, "INSERT INTO releases(section, label, date) VALUES(?, ?, ?)");
        insert.bind(1, static_cast<int>(release.section)).bind(2, release.label).bind(3, format_date(release.date)).run();
        impl_->load_registry();
        return *impl_->registry.find(release.section, release.label);
    }

    CorpusStore::WriteBatch::WriteBatch(CorpusStore& store) : store_{&store}
    {
        if (store.impl_->batch_open)
            throw InvalidArgument("a write batch is already open");
        store.impl_->db.exec("BEGIN IMMEDIATE");
        store.impl_->batch_open = true;
    }

    CorpusStore::WriteBatch::WriteBatch(WriteBatch&& other) noexcept : store_{other.store_}, open_{std::exchange(other.open_, false)} {}

    CorpusStore::WriteBatch::~WriteBatch()
    {
        if (!open_)
            return;
        try {
            store_->impl_->db.exec("ROLLBACK");
            store_->impl_->batch_open = false;
            store_->impl_->load();
        }
        catch (...) {
        }
    }

    void CorpusStore::WriteBatch::commit()
    {
        if (!open_)
            throw InvalidArgument("write batch already finished");
        store_->impl_->db.exec("COMMIT");
        store_->impl_->batch_open = false;
        open_ = false;
    }

    CorpusStore::WriteBatch CorpusStore::begin_batch() { return WriteBatch(*this); }

    ClusterId CorpusStore::upsert_entry(ReleaseOrdinal release, std::span<const std::string> accessions)
    {
        if (accessions.empty())
            throw InvalidArgument("an entry needs at least one accession");
        const auto& info = impl_->registry.at(release);
        auto& impl = *impl_;

        std::set<std::int64_t> touched;
        for (const auto& accession : accessions) {
            if (const auto it = impl.accession_clusters.find(accession); it != impl.accession_clusters.end())
                touched.insert(raw(impl.live_cluster(it->second)));
        }

        std::int64_t cluster = 0;
        if (touched.empty()) {
            cluster = impl.next_cluster_id++;
            impl.clusters.grow(static_cast<std::size_t>(impl.next_cluster_id));
        }
        else {
            cluster = *touched.begin();
            for (auto it = std::next(touched.begin()); it != touched.end(); ++it)
                impl.merge_clusters(cluster, *it);
        }

        for (const auto& accession : accessions) {
            if (impl.accession_clusters.contains(accession))
                continue;
            impl.insert_accession.reset().bind(1, accession).bind(2, cluster).bind(3, impl.next_accession_seq).run();
            ++impl.next_accession_seq;
            impl.accession_clusters.emplace(accession, cluster);
        }
        impl.insert_primary.reset().bind(1, cluster).bind(2, info.release_id).bind(3, accessions.front()).run();
        return ClusterId{cluster};
    }

    SentenceId CorpusStore::add_occurrence(std::string_view canonical_text, ClusterId cluster, ReleaseOrdinal release, std::int64_t multiplicity)
    {
        if (!is_canonical(canonical_text))
            throw InvalidArgument("sentence text is not canonical: '" + std::string(canonical_text) + "'");
        if (multiplicity < 1)
            throw InvalidArgument("multiplicity must be positive");
        const auto& info = impl_->registry.at(release);
        auto& impl = *impl_;
        if (raw(cluster) < 1 || raw(cluster) >= impl.next_cluster_id)
            throw NotFound("unknown cluster " + std::to_string(raw(cluster)));
        const auto live = impl.live_cluster(raw(cluster));

        SentenceId sentence{};
        if (const auto it = impl.sentence_ids.find(std::string(canonical_text)); it != impl.sentence_ids.end()) {
            sentence = it->second;
        }
        else {
            sentence = SentenceId{impl.next_sentence_id};
            impl.insert_sentence.reset().bind(1, raw(sentence)).bind(2, canonical_text).run();
            ++impl.next_sentence_id;
            impl.sentence_ids.emplace(std::string(canonical_text), sentence);
        }
        impl.upsert_occurrence.reset().bind(1, raw(sentence)).bind(2, raw(live)).bind(3, info.release_id).bind(4, multiplicity).run();
        return sentence;
    }

    void CorpusStore::record_entry_counts(ReleaseOrdinal release, std::int64_t entries_total, std::int64_t entries_annotated)
    {
        if (entries_annotated > entries_total || entries_annotated < 0)
            throw InvalidArgument("annotated entry count out of range");
        const auto release_id = impl_->registry.at(release).release_id;
        sql::Statement update(impl_->db, "UPDATE releases SET entries_total = ?, entries_annotated = ?, ingested = 1 WHERE release_id = ?");
        update.bind(1, entries_total).bind(2, entries_annotated).bind(3, release_id).run();
        impl_->load_registry();
    }

    // ----------------------------------------------------------------------

    std::size_t CorpusStore::sentence_count() const { return impl_->sentence_ids.size(); }

    std::size_t CorpusStore::occurrence_count() const
    {
        sql::Statement query(impl_->db, "SELECT count(*) FROM occurrences");
        return query.step() ? static_cast<std::size_t>(query.int64(0)) : 0;
    }

    std::size_t CorpusStore::cluster_count() const
    {
        sql::Statement query(impl_->db, "SELECT count(DISTINCT cluster_id) FROM accessions");
        return query.step() ? static_cast<std::size_t>(query.int64(0)) : 0;
    }

    std::optional<SentenceId> CorpusStore::find_sentence(std::string_view canonical_text) const
    {
        if (const auto it = impl_->sentence_ids.find(std::string(canonical_text)); it != impl_->sentence_ids.end())
            return it->second;
        return std::nullopt;
    }

    std::string CorpusStore::sentence_text(SentenceId sentence) const
    {
        sql::Statement query(impl_->db, "SELECT text FROM sentences WHERE sentence_id = ?");
        query.bind(1, raw(sentence));
        if (!query.step())
            throw NotFound("unknown sentence " + std::to_string(raw(sentence)));
        return query.text(0);
    }

    std::vector<std::pair<SentenceId, std::string>> CorpusStore::search_sentences(std::string_view needle, std::size_t limit) const
    {
        std::vector<std::pair<SentenceId, std::string>> found;
        if (limit == 0)
            return found;
        sql::Statement query(impl_->db, "SELECT sentence_id, text FROM sentences WHERE instr(text, ?) > 0 ORDER BY sentence_id LIMIT ?");
        query.bind(1, needle).bind(2, static_cast<std::int64_t>(limit));
        while (query.step())
            found.emplace_back(SentenceId{query.int64(0)}, query.text(1));
        return found;
    }

    std::optional<ClusterId> CorpusStore::cluster_of(std::string_view accession) const
    {
        const auto it = impl_->accession_clusters.find(std::string(accession));
        if (it == impl_->accession_clusters.end())
            return std::nullopt;
        return impl_->live_cluster(it->second);
    }

    std::vector<std::string> CorpusStore::cluster_accessions(ClusterId cluster) const
    {
        std::vector<std::string> accessions;
        sql::Statement query(impl_->db, "SELECT accession FROM accessions WHERE cluster_id = ? ORDER BY seq");
        query.bind(1, raw(cluster));
        while (query.step())
            accessions.push_back(query.text(0));
        return accessions;
    }

    std::optional<std::string> CorpusStore::primary_accession(ClusterId cluster, ReleaseOrdinal release) const
    {
        sql::Statement query(impl_->db, "SELECT accession FROM primaries WHERE cluster_id = ? AND release_id = ?");
        query.bind(1, raw(cluster)).bind(2, impl_->registry.at(release).release_id);
        if (!query.step())
            return std::nullopt;
        return query.text(0);
    }

    std::size_t CorpusStore::lifetime_cluster_count(SentenceId sentence) const
    {
        sql::Statement query(impl_->db, "SELECT count(DISTINCT cluster_id) FROM occurrences WHERE sentence_id = ?");
        query.bind(1, raw(sentence));
        return query.step() ? static_cast<std::size_t>(query.int64(0)) : 0;
    }

    std::vector<OccurrenceRecord> CorpusStore::occurrences_of(SentenceId sentence) const
    {
        std::vector<OccurrenceRecord> rows;
        sql::Statement query(impl_->db, "SELECT cluster_id, release_id, multiplicity FROM occurrences WHERE sentence_id = ?");
        query.bind(1, raw(sentence));
        while (query.step()) {
            const auto ordinal = impl_->registry.by_release_id(query.int64(1));
            if (!ordinal)
                throw StoreError("occurrence references an unregistered release");
            rows.push_back({sentence, ClusterId{query.int64(0)}, *ordinal, query.int64(2)});
        }
        std::sort(rows.begin(), rows.end(), [](const OccurrenceRecord& a, const OccurrenceRecord& b) {
            return std::pair(a.cluster, a.release) < std::pair(b.cluster, b.release);
        });
        return rows;
    }

    SentenceTimeline CorpusStore::timeline(SentenceId sentence) const
    {
        SentenceTimeline timeline;
        timeline.sentence = sentence;
        timeline.text = sentence_text(sentence);

        const auto rows = occurrences_of(sentence);
        if (rows.empty())
            return timeline;

        std::map<ClusterId, std::vector<ReleaseOrdinal>> by_cluster;
        std::map<ReleaseOrdinal, std::size_t> counts;
        for (const auto& row : rows) {
            by_cluster[row.cluster].push_back(row.release);
            ++counts[row.release];
        }
        for (auto& [cluster, ordinals] : by_cluster) {
            std::sort(ordinals.begin(), ordinals.end());
            timeline.clusters.push_back({cluster, cluster_accessions(cluster), std::move(ordinals)});
        }
        std::sort(timeline.clusters.begin(), timeline.clusters.end(), [](const ClusterTimeline& a, const ClusterTimeline& b) {
            return std::pair(a.ordinals.front(), a.cluster) < std::pair(b.ordinals.front(), b.cluster);
        });
        timeline.counts.assign(counts.begin(), counts.end());
        timeline.first = counts.begin()->first;
        timeline.last = counts.rbegin()->first;
        for (const auto section : kSections) {
            for (const auto ordinal : impl_->registry.section_ordinals(section)) {
                if (ordinal >= timeline.first && ordinal <= timeline.last)
                    timeline.rails[static_cast<std::size_t>(section)].push_back(ordinal);
            }
        }
        return timeline;
    }

    void CorpusStore::for_each_sentence(const std::function<void(SentenceId, std::span<const OccurrenceRecord>)>& visit) const
    {
        sql::Statement query(impl_->db, "SELECT sentence_id, cluster_id, release_id, multiplicity FROM occurrences ORDER BY sentence_id, cluster_id, release_id");
        std::vector<OccurrenceRecord> group;
        std::int64_t current = 0;
        const auto flush = [&] {
            if (!group.empty())
                visit(SentenceId{current}, group);
            group.clear();
        };
        while (query.step()) {
            const auto sentence = query.int64(0);
            if (sentence != current) {
                flush();
                current = sentence;
            }
            const auto ordinal = impl_->registry.by_release_id(query.int64(2));
            if (!ordinal)
                throw StoreError("occurrence references an unregistered release");
            group.push_back({SentenceId{sentence}, ClusterId{query.int64(1)}, *ordinal, query.int64(3)});
        }
        flush();
    }

    void CorpusStore::for_each_in_release(ReleaseOrdinal release, const std::function<void(SentenceId, std::int64_t, std::int64_t)>& visit) const
    {
        sql::Statement query(impl_->db, "SELECT sentence_id, count(*), sum(multiplicity) FROM occurrences WHERE release_id = ? GROUP BY sentence_id ORDER BY sentence_id");
        query.bind(1, impl_->registry.at(release).release_id);
        while (query.step())
            visit(SentenceId{query.int64(0)}, query.int64(1), query.int64(2));
    }

    // ----------------------------------------------------------------------

    StoreLock::StoreLock(const std::filesystem::path& store_path, Mode mode)
    {
        if (store_path == CorpusStore::kInMemory)
            return;
        const auto lock_path = store_path.string() + ".lock";
        fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0)
            throw StoreError("cannot open lock file " + lock_path);
        if (::flock(fd_, (mode == Mode::Exclusive ? LOCK_EX : LOCK_SH) | LOCK_NB) != 0) {
            ::close(fd_);
            fd_ = -1;
            throw Refused("store " + store_path.string() + " is in use (ingestion and serving cannot run at the same time)");
        }
    }

    StoreLock::~StoreLock()
    {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }

} // namespace annoprov
