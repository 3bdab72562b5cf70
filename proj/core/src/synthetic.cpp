#include "annoprov/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "annoprov/errors.hpp"
#include "annoprov/segmenter.hpp"

namespace annoprov::synthetic
{
    namespace
    {
        // None of these may collide with an abbreviation in the default lexicon.
        constexpr const char* kWords[] = {"binding",   "kinase",    "membrane",   "domain",    "activity",      "protein",         "catalyzes", "subunit",
                                          "required",  "complex",   "transport",  "cytoplasm", "nucleus",       "regulates",       "expression", "family",
                                          "enzyme",    "receptor",  "signal",     "pathway",   "oxidation",     "reduction",       "cofactor",  "magnesium",
                                          "zinc",      "heme",      "dimer",      "trimer",    "secreted",      "mitochondrion",   "degradation", "synthesis",
                                          "ribosome",  "chaperone", "helix",      "strand",    "motif",         "phosphorylation", "repeat",    "selenocysteine"};
        constexpr std::size_t kWordCount = std::size(kWords);

        constexpr const char* kTopics[] = {"FUNCTION", "SUBUNIT", "SUBCELLULAR LOCATION", "CATALYTIC ACTIVITY", "SIMILARITY", "MISCELLANEOUS"};

        // Deterministic on every platform, unlike the standard distributions.
        class Rng
        {
          public:
            explicit Rng(std::uint64_t seed) : engine_{seed} {}
            std::size_t below(std::size_t bound) { return bound == 0 ? 0 : static_cast<std::size_t>(engine_() % bound); }
            bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

          private:
            std::mt19937_64 engine_;
        };

        std::string sentence_text(std::size_t index, Rng& rng)
        {
            std::vector<std::string> words;
            for (std::size_t k = 0, rest = index; k < 4; ++k, rest /= kWordCount)
                words.emplace_back(kWords[rest % kWordCount]);
            for (std::size_t extra = rng.below(4); extra > 0; --extra)
                words.emplace_back(kWords[rng.below(kWordCount)]);

            const std::size_t variant = rng.below(14);
            if (variant == 2)
                words.push_back(std::string("(e.g. ") + kWords[rng.below(kWordCount)] + ")");
            else if (variant == 3)
                words.insert(words.end(), {"at", "pH", "7.5"});

            std::string text;
            for (const auto& word : words) {
                if (!text.empty())
                    text += ' ';
                text += word;
            }
            text[0] = static_cast<char>(text[0] - 'a' + 'A');
            if (variant >= 2)
                text += '.';
            return text;
        }

        bool terminated(const std::string& sentence) { return sentence.back() == '.'; }

        std::string accession_for(Section section, int entry)
        {
            char buffer[16];
            std::snprintf(buffer, sizeof buffer, "%c%06d", section == Section::SwissProt ? 'P' : 'Q', entry + 1);
            return buffer;
        }

        Date date_for_step(int step)
        {
            const auto months = std::chrono::months{6 * step};
            return std::chrono::year_month_day{std::chrono::year{1990} / std::chrono::January / 1} + months;
        }

        bool contains(const std::vector<int>& values, int value) { return std::find(values.begin(), values.end(), value) != values.end(); }

        void erase_value(std::vector<int>& values, int value) { values.erase(std::remove(values.begin(), values.end(), value), values.end()); }

        struct EntryState
        {
            Section section{};
            int birth = 0; // position within its section's releases
            bool alive = false;
            bool absorbed = false;
            bool banner = false;
            std::vector<std::string> accessions;
            std::vector<int> current;
            std::vector<int> removed;
        };

        class Generator
        {
          public:
            explicit Generator(const GeneratorParams& params) : params_{params}, rng_{params.seed} {}

            Generated run()
            {
                Generated out;
                out.corpus.params = params_;
                build_calendar(out);
                build_pool(out);
                build_entries(out);

                std::array<int, 2> position{};
                for (int r = 0; r < static_cast<int>(out.corpus.releases.size()); ++r) {
                    const Section section = out.corpus.releases[r].release.section;
                    step(out, r, section, position[static_cast<std::size_t>(section)]++);
                }
                out.ledger.replay();
                return out;
            }

          private:
            void build_calendar(Generated& out)
            {
                const int sp_total = params_.swissprot_releases;
                const int tr_total = params_.trembl_releases;
                int sp = 0;
                int tr = 0;
                for (int step = 0; step < sp_total + tr_total; ++step) {
                    // interleave so both sections progress at the same relative pace
                    const bool swissprot = tr == tr_total || (sp < sp_total && static_cast<long>(sp) * tr_total <= static_cast<long>(tr) * sp_total);
                    Release release{swissprot ? Section::SwissProt : Section::TrEMBL, std::to_string(swissprot ? ++sp : ++tr), date_for_step(step)};
                    out.corpus.releases.push_back(SyntheticRelease{release, {}});
                    out.ledger.releases.push_back(release);
                }
            }

            void build_pool(Generated& out)
            {
                for (int i = 0; i < params_.sentence_pool_size; ++i) {
                    out.corpus.pool.push_back(sentence_text(static_cast<std::size_t>(i), rng_));
                    out.corpus.canonical_pool.push_back(normalize(out.corpus.pool.back()));
                }
                out.ledger.sentences = out.corpus.canonical_pool;
            }

            void build_entries(Generated& out)
            {
                const std::array<int, 2> counts{params_.swissprot_releases, params_.trembl_releases};
                for (int e = 0; e < params_.entry_count; ++e) {
                    EntryState state;
                    state.section = rng_.chance(params_.trembl_fraction) ? Section::TrEMBL : Section::SwissProt;
                    if (counts[static_cast<std::size_t>(state.section)] == 0)
                        state.section = state.section == Section::TrEMBL ? Section::SwissProt : Section::TrEMBL;
                    const int available = counts[static_cast<std::size_t>(state.section)];
                    state.birth = static_cast<int>(rng_.below(static_cast<std::size_t>(std::max(1, (available + 1) / 2))));
                    state.banner = rng_.chance(0.15);
                    state.accessions.push_back(accession_for(state.section, e));
                    out.ledger.entries.push_back(LedgerEntry{state.section, state.accessions.front()});
                    entries_.push_back(std::move(state));
                }
            }

            void log(Generated& out, EventType type, int release, int entry, int sentence = -1, int other = -1)
            {
                out.ledger.events.push_back(LedgerEvent{type, release, entry, sentence, other});
            }

            int fresh_sentence()
            {
                if (next_fresh_ >= params_.sentence_pool_size)
                    return -1;
                return next_fresh_++;
            }

            void add_fresh(Generated& out, int release, int e)
            {
                const int s = fresh_sentence();
                if (s < 0)
                    return;
                entries_[e].current.push_back(s);
                log(out, EventType::Originate, release, e, s);
            }

            void copy_into(Generated& out, int release, int e)
            {
                std::vector<int> sources;
                for (int other = 0; other < static_cast<int>(entries_.size()); ++other)
                    if (other != e && entries_[other].alive && !entries_[other].absorbed && !entries_[other].current.empty())
                        sources.push_back(other);
                if (sources.empty())
                    return;
                const int source = sources[rng_.below(sources.size())];
                const auto& from = entries_[source].current;
                const int s = from[rng_.below(from.size())];
                if (contains(entries_[e].current, s))
                    return;
                erase_value(entries_[e].removed, s);
                entries_[e].current.push_back(s);
                log(out, EventType::Copy, release, e, s, source);
            }

            void step(Generated& out, int release, Section section, int position)
            {
                const int n = static_cast<int>(entries_.size());
                std::vector<int> established;
                for (int e = 0; e < n; ++e) {
                    auto& entry = entries_[e];
                    if (entry.section != section || entry.absorbed)
                        continue;
                    if (entry.alive) {
                        established.push_back(e);
                        continue;
                    }
                    if (entry.birth != position)
                        continue;
                    entry.alive = true;
                    log(out, EventType::Create, release, e);
                    for (std::size_t k = rng_.below(static_cast<std::size_t>(params_.max_initial_sentences) + 1); k > 0; --k) {
                        if (rng_.chance(params_.copy_rate))
                            copy_into(out, release, e);
                        else
                            add_fresh(out, release, e);
                    }
                }

                for (const int e : established) {
                    auto& entry = entries_[e];
                    if (rng_.chance(params_.removal_rate) && !entry.current.empty()) {
                        const int s = entry.current[rng_.below(entry.current.size())];
                        erase_value(entry.current, s);
                        entry.removed.push_back(s);
                        log(out, EventType::Remove, release, e, s);
                    }
                    if (rng_.chance(params_.readd_rate) && !entry.removed.empty()) {
                        const int s = entry.removed[rng_.below(entry.removed.size())];
                        erase_value(entry.removed, s);
                        entry.current.push_back(s);
                        log(out, EventType::Readd, release, e, s);
                    }
                    if (rng_.chance(params_.copy_rate))
                        copy_into(out, release, e);
                    if (rng_.chance(params_.new_sentence_rate))
                        add_fresh(out, release, e);
                }

                merge_step(out, release, section);

                auto& snapshot = out.corpus.releases[static_cast<std::size_t>(release)].entries;
                for (const auto& entry : entries_)
                    if (entry.section == section && entry.alive && !entry.absorbed)
                        snapshot.push_back(SyntheticEntry{entry.accessions, entry.current, entry.banner});
            }

            void merge_step(Generated& out, int release, Section section)
            {
                std::vector<int> live;
                for (int e = 0; e < static_cast<int>(entries_.size()); ++e)
                    if (entries_[e].section == section && entries_[e].alive && !entries_[e].absorbed)
                        live.push_back(e);
                for (std::size_t attempt = std::max<std::size_t>(1, live.size() / 10); attempt > 0; --attempt) {
                    if (!rng_.chance(params_.merge_rate) || live.empty())
                        continue;
                    const int survivor = live[rng_.below(live.size())];
                    // a Swiss-Prot entry may absorb entries of either section
                    std::vector<int> candidates;
                    for (int e = 0; e < static_cast<int>(entries_.size()); ++e) {
                        const auto& other = entries_[e];
                        if (e != survivor && other.alive && !other.absorbed && (section == Section::SwissProt || other.section == Section::TrEMBL))
                            candidates.push_back(e);
                    }
                    if (candidates.empty())
                        continue;
                    const int absorbed = candidates[rng_.below(candidates.size())];
                    auto& keep = entries_[survivor];
                    auto& gone = entries_[absorbed];
                    keep.accessions.insert(keep.accessions.end(), gone.accessions.begin(), gone.accessions.end());
                    for (const int s : gone.current)
                        if (!contains(keep.current, s))
                            keep.current.push_back(s);
                    for (const int s : gone.removed)
                        if (!contains(keep.current, s) && !contains(keep.removed, s))
                            keep.removed.push_back(s);
                    gone.absorbed = true;
                    gone.current.clear();
                    erase_value(live, absorbed);
                    log(out, EventType::Merge, release, survivor, -1, absorbed);
                }
            }

            GeneratorParams params_;
            Rng rng_;
            std::vector<EntryState> entries_;
            int next_fresh_ = 0;
        };

        void wrap_topic(std::ostringstream& out, const std::string& heading, const std::string& text)
        {
            constexpr std::size_t kWidth = 75;
            std::string line = "CC   -!- " + heading + ":";
            std::istringstream words(text);
            std::string word;
            while (words >> word) {
                if (line.size() + 1 + word.size() > kWidth && line.size() > 9) {
                    out << line << '\n';
                    line = "CC       " + word;
                }
                else {
                    line += ' ';
                    line += word;
                }
            }
            out << line << '\n';
        }

        const char* event_name(EventType type)
        {
            switch (type) {
            case EventType::Create: return "create";
            case EventType::Originate: return "originate";
            case EventType::Copy: return "copy";
            case EventType::Remove: return "remove";
            case EventType::Readd: return "readd";
            case EventType::Merge: return "merge";
            }
            return "?";
        }

        EventType event_type(const std::string& name)
        {
            for (const auto type : {EventType::Create, EventType::Originate, EventType::Copy, EventType::Remove, EventType::Readd, EventType::Merge})
                if (name == event_name(type))
                    return type;
            throw InvalidArgument("unknown ledger event '" + name + "'");
        }
    } // namespace

    void GeneratorParams::validate() const
    {
        for (const double p : {copy_rate, removal_rate, readd_rate, new_sentence_rate, merge_rate, trembl_fraction})
            if (!(p >= 0.0 && p <= 1.0))
                throw InvalidArgument("generator probabilities must lie in [0, 1]");
        if (swissprot_releases < 0 || trembl_releases < 0 || entry_count < 0 || sentence_pool_size < 0 || max_initial_sentences < 0)
            throw InvalidArgument("generator counts must be non-negative");
        if (entry_count > 999'999)
            throw InvalidArgument("entry_count is limited to 999999");
        if (static_cast<long long>(sentence_pool_size) > 2'560'000)
            throw InvalidArgument("sentence_pool_size is limited to 2560000");
    }

    nlohmann::json to_json(const GeneratorParams& p)
    {
        return {{"seed", p.seed},
                {"swissprot_releases", p.swissprot_releases},
                {"trembl_releases", p.trembl_releases},
                {"entry_count", p.entry_count},
                {"sentence_pool_size", p.sentence_pool_size},
                {"copy_rate", p.copy_rate},
                {"removal_rate", p.removal_rate},
                {"readd_rate", p.readd_rate},
                {"new_sentence_rate", p.new_sentence_rate},
                {"merge_rate", p.merge_rate},
                {"trembl_fraction", p.trembl_fraction},
                {"max_initial_sentences", p.max_initial_sentences}};
    }

    GeneratorParams params_from_json(const nlohmann::json& value)
    {
        GeneratorParams p;
        auto read = [&](const char* key, auto& field) {
            if (value.contains(key))
                value.at(key).get_to(field);
        };
        read("seed", p.seed);
        read("swissprot_releases", p.swissprot_releases);
        read("trembl_releases", p.trembl_releases);
        read("entry_count", p.entry_count);
        read("sentence_pool_size", p.sentence_pool_size);
        read("copy_rate", p.copy_rate);
        read("removal_rate", p.removal_rate);
        read("readd_rate", p.readd_rate);
        read("new_sentence_rate", p.new_sentence_rate);
        read("merge_rate", p.merge_rate);
        read("trembl_fraction", p.trembl_fraction);
        read("max_initial_sentences", p.max_initial_sentences);
        p.validate();
        return p;
    }

    Generated generate(const GeneratorParams& params)
    {
        params.validate();
        return Generator(params).run();
    }

    std::string SyntheticCorpus::render(std::size_t release_index) const
    {
        const auto& release = releases.at(release_index);
        const bool reviewed = release.release.section == Section::SwissProt;
        std::ostringstream out;
        for (const auto& entry : release.entries) {
            out << "ID   " << entry.accessions.front() << "_SYNTH   " << (reviewed ? "Reviewed" : "Unreviewed") << ";   60 AA.\n";
            for (std::size_t i = 0; i < entry.accessions.size(); i += 6) {
                out << "AC  ";
                for (std::size_t j = i; j < std::min(entry.accessions.size(), i + 6); ++j)
                    out << ' ' << entry.accessions[j] << ';';
                out << '\n';
            }
            out << "DT   01-JAN-1990, integrated into UniProtKB.\n";
            out << "DE   RecName: Full=Synthetic protein " << entry.accessions.front() << ";\n";

            std::size_t topic = 0;
            std::string pending;
            std::size_t pending_count = 0;
            auto flush = [&] {
                if (!pending.empty())
                    wrap_topic(out, kTopics[topic++ % std::size(kTopics)], pending);
                pending.clear();
                pending_count = 0;
            };
            for (const int s : entry.sentences) {
                const auto& text = pool[static_cast<std::size_t>(s)];
                if (!terminated(text)) {
                    // an unterminated sentence only stays whole at the end of its own topic
                    flush();
                    pending = text;
                    flush();
                    continue;
                }
                if (!pending.empty())
                    pending += ' ';
                pending += text;
                if (++pending_count == 3)
                    flush();
            }
            flush();
            if (entry.banner) {
                out << "CC   -----------------------------------------------------------------------\n"
                       "CC   Copyrighted by the UniProt Consortium, see https://www.uniprot.org/terms\n"
                       "CC   Distributed under the Creative Commons Attribution (CC BY 4.0) License\n"
                       "CC   -----------------------------------------------------------------------\n";
            }
            out << "SQ   SEQUENCE   60 AA;  6600 MW;  0000000000000000 CRC64;\n"
                   "     MKVLAAGIVG ALLAAGIVGM KVLAAGIVGA LLAAGIVGMK VLAAGIVGAL LAAGIVGMKV\n"
                   "//\n";
        }
        return out.str();
    }

    std::size_t SyntheticCorpus::occurrence_count() const
    {
        std::size_t total = 0;
        for (const auto& release : releases)
            for (const auto& entry : release.entries)
                total += entry.sentences.size();
        return total;
    }

    // ----------------------------------------------------------------------

    void GroundTruthLedger::replay()
    {
        labels.clear();
        in_latest.clear();
        counts = {};
        latest_counts = {};

        const int n_entries = static_cast<int>(entries.size());
        const int n_releases = static_cast<int>(releases.size());

        // entry identity across merges: every merged entry joins the survivor's group
        std::vector<int> group(static_cast<std::size_t>(n_entries));
        std::iota(group.begin(), group.end(), 0);
        auto root = [&](int e) {
            while (group[e] != e)
                e = group[e];
            return e;
        };
        for (const auto& event : events)
            if (event.type == EventType::Merge)
                group[root(event.other)] = root(event.entry);

        // section-local position of every release
        std::vector<int> position(static_cast<std::size_t>(n_releases));
        std::array<int, 2> section_sizes{};
        for (int r = 0; r < n_releases; ++r)
            position[r] = section_sizes[static_cast<std::size_t>(releases[r].section)]++;
        auto section_of = [&](int r) { return releases[r].section; };
        auto last_of = [&](Section s, int bound) {
            int found = -1;
            for (int r = 0; r <= bound && r < n_releases; ++r)
                if (releases[r].section == s)
                    found = r;
            return found;
        };

        // replay entry contents release by release
        std::map<int, std::map<int, std::set<int>>> presence; // sentence -> group -> releases
        std::vector<std::set<int>> contents(static_cast<std::size_t>(n_entries));
        std::vector<char> live(static_cast<std::size_t>(n_entries), 0);
        std::size_t cursor = 0;
        for (int r = 0; r < n_releases; ++r) {
            for (; cursor < events.size() && events[cursor].release == r; ++cursor) {
                const auto& event = events[cursor];
                switch (event.type) {
                case EventType::Create: live[event.entry] = 1; break;
                case EventType::Originate:
                case EventType::Copy:
                case EventType::Readd: contents[event.entry].insert(event.sentence); break;
                case EventType::Remove: contents[event.entry].erase(event.sentence); break;
                case EventType::Merge:
                    contents[event.entry].insert(contents[event.other].begin(), contents[event.other].end());
                    contents[event.other].clear();
                    live[event.other] = 0;
                    break;
                }
            }
            for (int e = 0; e < n_entries; ++e)
                if (live[e] && entries[e].section == section_of(r))
                    for (const int s : contents[e])
                        presence[s][root(e)].insert(r);
        }

        std::array<int, 2> latest{last_of(Section::SwissProt, n_releases - 1), last_of(Section::TrEMBL, n_releases - 1)};

        for (const auto& [s, by_group] : presence) {
            const auto& text = sentences.at(static_cast<std::size_t>(s));
            int first = n_releases;
            int last = -1;
            bool swissprot_seen = false;
            bool current = false;
            for (const auto& [g, rs] : by_group) {
                first = std::min(first, *rs.begin());
                last = std::max(last, *rs.rbegin());
                for (const int r : rs) {
                    swissprot_seen = swissprot_seen || section_of(r) == Section::SwissProt;
                    current = current || r == latest[0] || r == latest[1];
                }
            }

            std::set<PatternKind> found;
            if (last > first) {
                std::set<int> origin;
                std::set<int> remaining;
                for (const auto& [g, rs] : by_group) {
                    if (rs.count(first))
                        origin.insert(g);
                    for (const auto section : kSections) {
                        const int at = last_of(section, last);
                        if (at >= first && rs.count(at))
                            remaining.insert(g);
                    }
                }
                if (std::none_of(origin.begin(), origin.end(), [&](int g) { return remaining.count(g) > 0; }))
                    found.insert(PatternKind::MissingOrigin);
            }
            for (const auto& [g, rs] : by_group) {
                for (const auto section : kSections) {
                    std::vector<int> positions;
                    for (const int r : rs)
                        if (section_of(r) == section)
                            positions.push_back(position[r]);
                    for (std::size_t i = 1; i < positions.size(); ++i)
                        if (positions[i] > positions[i - 1] + 1)
                            found.insert(PatternKind::ReappearingEntry);
                    if (positions.size() == 1 && positions.front() + 1 < section_sizes[static_cast<std::size_t>(section)])
                        found.insert(PatternKind::TransientAppearance);
                }
            }
            if (section_of(first) == Section::TrEMBL && swissprot_seen)
                found.insert(PatternKind::OriginatingInTrembl);

            if (current)
                in_latest.insert(text);
            for (const auto kind : found) {
                ++counts[static_cast<std::size_t>(kind)];
                latest_counts[static_cast<std::size_t>(kind)] += current ? 1 : 0;
            }
            if (!found.empty())
                labels[text] = std::move(found);
        }
    }

    nlohmann::json GroundTruthLedger::to_json() const
    {
        nlohmann::json out;
        for (const auto& release : releases)
            out["releases"].push_back({{"section", section_name(release.section)}, {"label", release.label}, {"date", format_date(release.date)}});
        for (const auto& entry : entries)
            out["entries"].push_back({{"section", section_name(entry.section)}, {"accession", entry.accession}});
        out["sentences"] = sentences;
        for (const auto& event : events) {
            nlohmann::json item{{"type", event_name(event.type)}, {"release", event.release}, {"entry", event.entry}};
            if (event.sentence >= 0)
                item["sentence"] = event.sentence;
            if (event.other >= 0)
                item["other"] = event.other;
            out["events"].push_back(std::move(item));
        }
        nlohmann::json summary;
        for (const auto kind : kPatternKinds) {
            const auto i = static_cast<std::size_t>(kind);
            summary[std::string(pattern_name(kind))] = {{"all_versions", counts[i]}, {"latest_version", latest_counts[i]}};
        }
        out["summary"] = std::move(summary);
        nlohmann::json labelled = nlohmann::json::object();
        for (const auto& [text, kinds] : labels) {
            auto names = nlohmann::json::array();
            for (const auto kind : kinds)
                names.push_back(pattern_name(kind));
            labelled[text] = std::move(names);
        }
        out["labels"] = std::move(labelled);
        out["in_latest"] = in_latest;
        for (const char* key : {"releases", "entries", "events"})
            if (!out.contains(key))
                out[key] = nlohmann::json::array();
        return out;
    }

    GroundTruthLedger GroundTruthLedger::from_json(const nlohmann::json& value)
    {
        GroundTruthLedger ledger;
        for (const auto& item : value.at("releases")) {
            const auto section = parse_section(item.at("section").get<std::string>());
            const auto date = parse_date(item.at("date").get<std::string>());
            if (!section || !date)
                throw InvalidArgument("malformed ledger release");
            ledger.releases.push_back(Release{*section, item.at("label").get<std::string>(), *date});
        }
        for (const auto& item : value.at("entries")) {
            const auto section = parse_section(item.at("section").get<std::string>());
            if (!section)
                throw InvalidArgument("malformed ledger entry");
            ledger.entries.push_back(LedgerEntry{*section, item.at("accession").get<std::string>()});
        }
        ledger.sentences = value.at("sentences").get<std::vector<std::string>>();
        for (const auto& item : value.at("events"))
            ledger.events.push_back(LedgerEvent{event_type(item.at("type").get<std::string>()), item.at("release").get<int>(), item.at("entry").get<int>(),
                                                item.value("sentence", -1), item.value("other", -1)});
        ledger.replay();
        return ledger;
    }

    std::vector<ManifestRow> write_corpus(const Generated& generated, const std::filesystem::path& directory)
    {
        std::filesystem::create_directories(directory);
        std::vector<ManifestRow> rows;
        for (std::size_t i = 0; i < generated.corpus.releases.size(); ++i) {
            const auto& release = generated.corpus.releases[i].release;
            const std::string name = std::string(section_name(release.section)) + "_" + release.label + ".dat";
            std::ofstream file(directory / name, std::ios::binary | std::ios::trunc);
            if (!file)
                throw Error("cannot write " + (directory / name).string());
            file << generated.corpus.render(i);
            rows.push_back(ManifestRow{release, name});
        }
        {
            std::ofstream manifest(directory / "manifest.tsv", std::ios::trunc);
            write_manifest(manifest, rows);
        }
        {
            std::ofstream ledger(directory / "ledger.json", std::ios::trunc);
            auto json = generated.ledger.to_json();
            json["params"] = to_json(generated.corpus.params);
            ledger << json.dump(1) << '\n';
        }
        return rows;
    }

    std::vector<ReleaseReport> ingest_corpus(CorpusStore& store, const SyntheticCorpus& corpus, const SentenceSegmenter& segmenter, DiagnosticSink& diagnostics)
    {
        std::vector<ReleaseReport> reports;
        for (std::size_t i = 0; i < corpus.releases.size(); ++i) {
            auto source = lines_from_string(corpus.render(i));
            reports.push_back(ingest_release(store, corpus.releases[i].release, *source, segmenter, diagnostics));
        }
        return reports;
    }

} // namespace annoprov::synthetic
