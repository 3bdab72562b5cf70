// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any fails.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <random>
#include <sstream>

#include "annoprov/classification.hpp"
#include "annoprov/exchange.hpp"
#include "annoprov/patterns.hpp"
#include "annoprov/stats.hpp"
#include "annoprov/synthetic.hpp"
#include "support.hpp"

using namespace annoprov;
using Clock = std::chrono::steady_clock;

namespace
{
    struct Outcome
    {
        bool passed = true;
        std::string detail;

        void require(bool condition, const std::string& failure)
        {
            if (!condition && passed) {
                passed = false;
                detail = failure;
            }
        }
    };

    double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

    std::string fmt(const char* format, double value)
    {
        char buffer[64];
        std::snprintf(buffer, sizeof buffer, format, value);
        return buffer;
    }

    synthetic::GeneratorParams bounded_params(std::uint64_t seed)
    {
        synthetic::GeneratorParams params;
        params.seed = seed;
        std::mt19937_64 rng(seed);
        params.swissprot_releases = 4 + static_cast<int>(rng() % 12);
        params.trembl_releases = static_cast<int>(rng() % 8);
        params.entry_count = 40 + static_cast<int>(rng() % 260);
        params.sentence_pool_size = 100 + static_cast<int>(rng() % 900);
        params.removal_rate = 0.05 + 0.2 * static_cast<double>(rng() % 100) / 100.0;
        params.merge_rate = 0.4 * static_cast<double>(rng() % 100) / 100.0;
        return params;
    }

    // Shrinks the entry count until the corpus fits in 10^4 occurrences.
    synthetic::Generated bounded_corpus(std::uint64_t seed)
    {
        auto params = bounded_params(seed);
        auto generated = synthetic::generate(params);
        while (generated.corpus.occurrence_count() > 10'000) {
            params.entry_count = params.entry_count * 2 / 3;
            generated = synthetic::generate(params);
        }
        return generated;
    }

    CorpusStore ingest_generated(const synthetic::SyntheticCorpus& corpus)
    {
        CorpusStore store(CorpusStore::kInMemory);
        DiagnosticSink sink;
        synthetic::ingest_corpus(store, corpus, SentenceSegmenter{}, sink);
        return store;
    }

    Outcome oracle_equivalence()
    {
        Outcome out;
        const auto start = Clock::now();
        std::size_t largest = 0, mismatches = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const auto generated = bounded_corpus(seed);
            largest = std::max(largest, generated.corpus.occurrence_count());
            out.require(generated.corpus.occurrence_count() <= 10'000, "seed " + std::to_string(seed) + " exceeds 10^4 occurrences");

            const auto store = ingest_generated(generated.corpus);
            std::vector<PatternReport> reports;
            const auto summary = scan_corpus(store, {}, [&](const PatternReport& r, bool) { reports.push_back(r); });
            auto named = synthetic::named_reports(store, reports);
            std::sort(named.begin(), named.end());
            const auto oracle = synthetic::brute_force_detect(generated.corpus);

            std::map<std::string, std::set<PatternKind>> oracle_labels;
            for (const auto& report : oracle.reports)
                oracle_labels[report.sentence].insert(report.kind);

            const bool same = named == oracle.reports && oracle_labels == generated.ledger.labels && summary.all == generated.ledger.counts &&
                              summary.latest == generated.ledger.latest_counts && oracle.in_latest == generated.ledger.in_latest;
            if (!same) {
                ++mismatches;
                out.require(false, "seed " + std::to_string(seed) + " disagrees");
            }
        }
        const double elapsed = seconds_since(start);
        out.require(elapsed < 60.0, "took " + fmt("%.1f", elapsed) + " s");
        if (out.passed)
            out.detail = "100 corpora, largest " + std::to_string(largest) + " occurrences, " + std::to_string(mismatches) + " mismatches, " + fmt("%.1f", elapsed) + " s";
        return out;
    }

    Outcome stats_identities()
    {
        Outcome out;
        std::size_t checked = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const auto generated = bounded_corpus(seed);
            const auto store = ingest_generated(generated.corpus);
            for (const auto& info : store.releases().all())
                for (bool repeats : {false, true}) {
                    const auto violations = identity_violations(compute_release_stats(store, info.ordinal, StatsOptions{repeats}));
                    out.require(violations.empty(), "seed " + std::to_string(seed) + " " + describe(info.release) + ": " + (violations.empty() ? "" : violations.front()));
                    ++checked;
                }
        }
        if (out.passed)
            out.detail = std::to_string(checked) + " release records, 0 violations";
        return out;
    }

    Outcome selenocysteine_walkthrough()
    {
        Outcome out;
        CorpusStore store(CorpusStore::kInMemory);
        testing::ingest_fixture(store, "selenocysteine");
        const auto opal = store.find_sentence("the active-site selenocysteine is encoded by the opal codon, uga.");
        if (!opal) {
            out.require(false, "sentence not found");
            return out;
        }
        auto cluster = [&](const char* accession) { return *store.cluster_of(accession); };
        std::vector<ClusterId> origins{cluster("P07658"), cluster("P07203")};
        std::sort(origins.begin(), origins.end());

        DetectionContext context(store.releases());
        const auto rows = store.occurrences_of(*opal);
        std::size_t last_set = 0, transients = 0;
        bool p21765 = false;
        std::set<ClusterId> gap_clusters;
        for (const auto& report : detect_all(context, *opal, rows)) {
            out.require(report.origin_clusters == origins, "origin clusters differ");
            if (const auto* sets = std::get_if<OriginSets>(&report.evidence))
                last_set = sets->last.size();
            if (const auto* gaps = std::get_if<std::vector<Gap>>(&report.evidence))
                for (const auto& gap : *gaps)
                    gap_clusters.insert(gap.cluster);
            if (const auto* sole = std::get_if<std::vector<SoleAppearance>>(&report.evidence)) {
                transients = sole->size();
                p21765 = std::any_of(sole->begin(), sole->end(), [&](const auto& s) { return s.cluster == cluster("P21765"); });
            }
        }
        std::size_t peak = 0;
        for (const auto& [ordinal, count] : store.timeline(*opal).counts)
            peak = std::max(peak, count);

        out.require(last_set == 9, "last set has " + std::to_string(last_set) + " clusters");
        out.require(gap_clusters == std::set<ClusterId>{cluster("P18283"), cluster("P12079")}, "reappearing clusters differ");
        out.require(transients == 6 && p21765, "transient evidence differs");
        out.require(peak == 54, "peak is " + std::to_string(peak));
        if (out.passed)
            out.detail = "origins P07658+P07203, last set 9, reappearing P18283+P12079, 6 transient incl. P21765, peak 54";
        return out;
    }

    std::string random_text(std::mt19937& rng)
    {
        static const std::vector<std::string> words = {"Binds", "zinc.", "e.g.", "i.e.", "et", "al.", "ca.", "1.5", "pH", "7.4.", "(By", "similarity).",
                                                       "UGA.", "Q.", "x", "vs.", "approx.", "sp.", "..", "\"cf.", "end"};
        static const std::vector<std::string> gaps = {" ", "  ", "\n", "\t", " \r\n"};
        std::string text;
        const int length = static_cast<int>(rng() % 40);
        for (int i = 0; i < length; ++i)
            text += (i ? gaps[rng() % gaps.size()] : "") + words[rng() % words.size()];
        return text;
    }

    std::string visible(const std::string& text)
    {
        std::string out;
        for (char c : text)
            if (!is_sentence_space(c))
                out += c;
        return out;
    }

    Outcome segmenter_round_trip()
    {
        Outcome out;
        const SentenceSegmenter segmenter;
        std::mt19937 rng(1234);
        int failures = 0;
        for (int i = 0; i < 10'000; ++i) {
            const auto text = random_text(rng);
            std::string joined;
            for (const auto& sentence : segmenter.segment(text))
                joined += sentence;
            if (visible(joined) != visible(text))
                ++failures;
        }
        const std::string alphabet = "abcXYZ .,;:()-\t\n\r0123";
        for (int i = 0; i < 10'000; ++i) {
            std::string text;
            const int length = 1 + static_cast<int>(rng() % 30);
            for (int c = 0; c < length; ++c)
                text += alphabet[rng() % alphabet.size()];
            if (visible(text).empty())
                text += 'q';
            const auto once = normalize(text);
            if (normalize(once) != once || !is_canonical(once))
                ++failures;
        }
        out.require(failures == 0, std::to_string(failures) + " failures");
        if (out.passed)
            out.detail = "10000 texts segmented, 10000 strings normalized, 0 failures";
        return out;
    }

    Outcome parser_determinism()
    {
        Outcome out;
        std::vector<std::filesystem::path> files;
        for (const auto& dir : {testing::kFixtures, testing::kFixtures / "small", testing::kFixtures / "selenocysteine"})
            for (const auto& item : std::filesystem::directory_iterator(dir))
                if (item.path().extension() == ".dat")
                    files.push_back(item.path());
        std::sort(files.begin(), files.end());

        auto parse = [](const std::string& text) {
            DiagnosticSink sink;
            auto source = lines_from_string(text);
            auto entries = parse_release(*source, "r", sink);
            for (auto& entry : entries) {
                entry.first_line = 0;
                entry.release_ref.clear();
            }
            return entries;
        };
        std::mt19937 rng(8);
        for (const auto& file : files) {
            const auto text = testing::read_file(file);
            std::vector<std::string> records;
            std::size_t terminators = 0;
            std::istringstream lines(text);
            std::string current;
            for (std::string line; std::getline(lines, line);) {
                current += line + "\n";
                if (line.rfind("//", 0) == 0) {
                    ++terminators;
                    records.push_back(std::move(current));
                    current.clear();
                }
            }
            const auto first = parse(text);
            out.require(first == parse(text), file.filename().string() + ": re-parse differs");
            out.require(first.size() == terminators, file.filename().string() + ": entry count differs from // count");

            std::vector<std::size_t> order(records.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::shuffle(order.begin(), order.end(), rng);
            std::string shuffled;
            for (auto i : order)
                shuffled += records[i];
            const auto permuted = parse(shuffled);
            bool local = permuted.size() == first.size();
            for (std::size_t i = 0; local && i < order.size(); ++i)
                local = permuted[i] == first[order[i]];
            out.require(local, file.filename().string() + ": shuffled parse differs");
        }
        if (out.passed)
            out.detail = std::to_string(files.size()) + " fixture files";
        return out;
    }

    Outcome decision_table()
    {
        Outcome out;
        std::size_t combinations = 0;
        for (auto q1 : {Answer::Yes, Answer::No})
            for (auto q2 : kAnswers)
                for (auto q3 : kAnswers)
                    for (auto q4 : kAnswers) {
                        const auto leaf = classify_answers({q1, q2, q3, q4});
                        const auto hits = std::count(std::begin(kClassifications), std::end(kClassifications), leaf);
                        out.require(hits == 1, "combination without a unique leaf");
                        ++combinations;
                    }
        for (const auto& path : decision_paths())
            out.require(decide(path).has_value(), "canonical path without a leaf");
        const std::vector<Answer> worked{Answer::No, Answer::Yes, Answer::Yes, Answer::Yes};
        out.require(decide(worked) == Classification::Erroneous, "worked example is not erroneous");
        if (out.passed)
            out.detail = std::to_string(combinations) + " combinations, worked example -> erroneous";
        return out;
    }

    Outcome export_round_trip()
    {
        Outcome out;
        testing::TempDir dir;
        std::vector<std::pair<std::string, std::function<void(CorpusStore&)>>> sources = {
            {"selenocysteine", [](CorpusStore& s) { testing::ingest_fixture(s, "selenocysteine"); }},
            {"synthetic", [](CorpusStore& s) {
                 DiagnosticSink sink;
                 synthetic::ingest_corpus(s, synthetic::generate(synthetic::GeneratorParams{}).corpus, SentenceSegmenter{}, sink);
             }}};
        std::size_t rows = 0;
        for (const auto& [name, fill] : sources) {
            CorpusStore original(CorpusStore::kInMemory);
            fill(original);
            export_bundle(original, dir / (name + "-a"));
            CorpusStore restored(dir / (name + ".db"));
            import_bundle(restored, dir / (name + "-a"));
            export_bundle(restored, dir / (name + "-b"));
            for (const auto& item : std::filesystem::directory_iterator(dir / (name + "-a")))
                out.require(testing::read_file(item.path()) == testing::read_file(dir / (name + "-b") / item.path().filename()),
                            name + ": " + item.path().filename().string() + " differs");

            CorpusStore reingested(CorpusStore::kInMemory);
            fill(reingested);
            std::ostringstream a, b;
            write_occurrence_relation(original, a);
            write_occurrence_relation(reingested, b);
            out.require(a.str() == b.str(), name + ": re-ingest differs");
            rows += original.occurrence_count();
        }
        if (out.passed)
            out.detail = std::to_string(rows) + " occurrence rows, byte-identical";
        return out;
    }

    Outcome scale_smoke()
    {
        Outcome out;
        synthetic::GeneratorParams params;
        params.seed = 2024;
        params.swissprot_releases = 20;
        params.trembl_releases = 10;
        params.entry_count = 15'000;
        params.sentence_pool_size = 100'000;
        params.max_initial_sentences = 6;
        const auto start = Clock::now();
        const auto generated = synthetic::generate(params);
        const auto occurrences = generated.corpus.occurrence_count();

        testing::TempDir dir;
        CorpusStore store(dir / "scale.db");
        DiagnosticSink sink;
        synthetic::ingest_corpus(store, generated.corpus, SentenceSegmenter{}, sink);
        const double ingest_time = seconds_since(start);
        const auto summary = scan_corpus(store);
        const double total = seconds_since(start);

        rusage usage{};
        getrusage(RUSAGE_SELF, &usage);
        out.require(occurrences >= 1'000'000, "corpus has only " + std::to_string(occurrences) + " occurrences");
        out.require(total < 300.0, "took " + fmt("%.1f", total) + " s");
        out.require(summary.sentences > 0, "no sentences scanned");
        out.detail = std::to_string(occurrences) + " occurrences, ingest " + fmt("%.1f", ingest_time) + " s, total " + fmt("%.1f", total) + " s, peak RSS " +
                     fmt("%.0f", static_cast<double>(usage.ru_maxrss) / 1024.0) + " MiB" + (out.passed ? "" : " (" + out.detail + ")");
        return out;
    }
} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"oracle equivalence", oracle_equivalence},
        {"stats identities", stats_identities},
        {"selenocysteine walkthrough", selenocysteine_walkthrough},
        {"segmenter round trip", segmenter_round_trip},
        {"parser determinism and locality", parser_determinism},
        {"decision table totality", decision_table},
        {"export import round trip", export_round_trip},
        {"scale smoke test", scale_smoke},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome outcome;
        try {
            outcome = run();
        }
        catch (const std::exception& e) {
            outcome.passed = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s  %-34s %s\n", outcome.passed ? "PASS" : "FAIL", name, outcome.detail.c_str());
        std::fflush(stdout);
        failed += outcome.passed ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
