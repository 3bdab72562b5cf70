#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "annoprov/api.hpp"
#include "annoprov/errors.hpp"
#include "annoprov/exchange.hpp"
#include "annoprov/ingest.hpp"
#include "annoprov/patterns.hpp"
#include "annoprov/stats.hpp"
#include "annoprov/synthetic.hpp"

namespace fs = std::filesystem;
using namespace annoprov;

namespace
{
    struct Options
    {
        fs::path store;
        fs::path lexicon;
        fs::path metadata;
        fs::path output;
        fs::path input;
        fs::path figures;
        fs::path diagnostics;
        fs::path reports;
        fs::path static_dir;
        fs::path params;
        std::string bind = "127.0.0.1:8080";
        std::string until;
        std::string latest_release;
        std::string section = "all";
        std::string format = "tsv";
        std::string entry_url;
        bool count_repeats = false;
        synthetic::GeneratorParams generator;
    };

    // Opening a missing path would silently create an empty store.
    CorpusStore open_existing(const fs::path& path)
    {
        if (!fs::exists(path))
            throw NotFound("store not found: " + path.string());
        return CorpusStore(path);
    }

    // Writes to the named file, or stdout for an empty path or "-".
    class Output
    {
      public:
        explicit Output(const fs::path& path)
        {
            if (!path.empty() && path != "-") {
                file_.open(path, std::ios::trunc);
                if (!file_)
                    throw Error("cannot write " + path.string());
            }
        }
        std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

      private:
        std::ofstream file_;
    };

    SentenceSegmenter make_segmenter(const Options& o)
    {
        return o.lexicon.empty() ? SentenceSegmenter{} : SentenceSegmenter{AbbreviationLexicon::load(o.lexicon)};
    }

    ReleaseOrdinal parse_until(const CorpusStore& store, const std::string& text)
    {
        const auto colon = text.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
            throw InvalidArgument("--until expects SECTION:LABEL, got '" + text + "'");
        const auto section = parse_section(text.substr(0, colon));
        if (!section)
            throw InvalidArgument("--until: unknown section '" + text.substr(0, colon) + "'");
        const auto ordinal = store.releases().find(*section, text.substr(colon + 1));
        if (!ordinal)
            throw NotFound("--until: no release " + text);
        return *ordinal;
    }

    std::vector<ReleaseOrdinal> parse_latest(const CorpusStore& store, const std::string& label)
    {
        std::vector<ReleaseOrdinal> latest;
        for (const auto section : kSections)
            if (const auto ordinal = store.releases().find(section, label))
                latest.push_back(*ordinal);
        if (latest.empty())
            throw NotFound("--latest-release: no release labelled '" + label + "'");
        return latest;
    }

    std::vector<Section> selected_sections(const std::string& text)
    {
        if (text == "all")
            return {Section::SwissProt, Section::TrEMBL};
        const auto section = parse_section(text);
        if (!section)
            throw InvalidArgument("unknown section '" + text + "'");
        return {*section};
    }

    int run_ingest(const Options& o)
    {
        StoreLock lock(o.store, StoreLock::Mode::Exclusive);
        CorpusStore store(o.store);
        const auto rows = read_manifest(o.metadata);
        std::ofstream diagnostics_file;
        if (!o.diagnostics.empty())
            diagnostics_file.open(o.diagnostics, std::ios::trunc);
        DiagnosticSink diagnostics = diagnostics_file.is_open() ? DiagnosticSink(diagnostics_file) : DiagnosticSink(std::cerr);
        const auto reports = ingest_manifest(store, rows, make_segmenter(o), diagnostics);
        Output out(o.output);
        write_ingest_report(out.stream(), reports);
        return 0;
    }

    int run_stats(const Options& o)
    {
        StoreLock lock(o.store, StoreLock::Mode::Shared);
        const auto store = open_existing(o.store);
        StatsOptions options;
        options.count_repeats = o.count_repeats;
        Output out(o.output);
        if (o.format == "json") {
            auto document = nlohmann::json::array();
            for (const auto section : selected_sections(o.section)) {
                const auto series = stats_series(store, section, options);
                document.push_back(series_json(section, series));
            }
            out.stream() << document.dump(2) << '\n';
        }
        else if (o.format == "tsv") {
            write_stats_header(out.stream());
            for (const auto section : selected_sections(o.section)) {
                const auto series = stats_series(store, section, options);
                write_stats_rows(out.stream(), series);
            }
        }
        else {
            throw InvalidArgument("--format must be tsv or json");
        }
        if (!o.figures.empty())
            for (const auto& path : write_figure_data(store, o.figures, options))
                std::cerr << "wrote " << path.string() << '\n';
        return 0;
    }

    int run_detect(const Options& o)
    {
        StoreLock lock(o.store, StoreLock::Mode::Shared);
        const auto store = open_existing(o.store);
        ScanOptions options;
        if (!o.until.empty())
            options.until = parse_until(store, o.until);
        if (!o.latest_release.empty())
            options.latest = parse_latest(store, o.latest_release);

        std::ofstream reports;
        if (!o.reports.empty()) {
            reports.open(o.reports, std::ios::trunc);
            if (!reports)
                throw Error("cannot write " + o.reports.string());
        }
        const auto& registry = store.releases();
        const auto summary = scan_corpus(store, options, [&](const PatternReport& report, bool in_latest) {
            if (!reports.is_open())
                return;
            auto line = to_json(report, registry);
            line["in_latest"] = in_latest;
            reports << line.dump() << '\n';
        });
        Output out(o.output);
        write_summary(out.stream(), summary);
        return 0;
    }

    int run_export(const Options& o)
    {
        StoreLock lock(o.store, StoreLock::Mode::Shared);
        const auto store = open_existing(o.store);
        export_bundle(store, o.output);
        return 0;
    }

    int run_import(const Options& o)
    {
        StoreLock lock(o.store, StoreLock::Mode::Exclusive);
        CorpusStore store(o.store);
        import_bundle(store, o.input);
        return 0;
    }

    HttpServer* active_server = nullptr;

    int run_serve(const Options& o)
    {
        StoreLock lock(o.store, StoreLock::Mode::Shared);
        auto store = open_existing(o.store);
        ApiConfig config;
        if (!o.entry_url.empty())
            config.entry_url_template = o.entry_url;
        if (!o.latest_release.empty())
            config.latest = parse_latest(store, o.latest_release);
        ApiService api(store, config);

        ServerOptions server_options;
        const auto colon = o.bind.rfind(':');
        if (colon == std::string::npos)
            throw InvalidArgument("--bind expects HOST:PORT");
        server_options.host = o.bind.substr(0, colon);
        try {
            server_options.port = std::stoi(o.bind.substr(colon + 1));
        }
        catch (const std::exception&) {
            throw InvalidArgument("--bind: bad port in '" + o.bind + "'");
        }
        if (!o.static_dir.empty())
            server_options.static_dir = o.static_dir;

        HttpServer server(api, server_options);
        const int port = server.bind();
        std::cerr << "serving " << o.store.string() << " on http://" << server_options.host << ':' << port << "/v1/\n";
        active_server = &server;
        std::signal(SIGINT, [](int) {
            if (active_server)
                active_server->stop();
        });
        std::signal(SIGTERM, [](int) {
            if (active_server)
                active_server->stop();
        });
        server.listen();
        active_server = nullptr;
        return 0;
    }

    int run_generate(Options o)
    {
        if (!o.params.empty()) {
            std::ifstream file(o.params);
            if (!file)
                throw NotFound("cannot read " + o.params.string());
            o.generator = synthetic::params_from_json(nlohmann::json::parse(file));
        }
        const auto generated = synthetic::generate(o.generator);
        const auto rows = synthetic::write_corpus(generated, o.output);
        std::cerr << "wrote " << rows.size() << " releases, " << generated.corpus.occurrence_count() << " occurrences to " << o.output.string() << '\n';
        return 0;
    }
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Provenance of annotation sentences across database releases"};
    app.require_subcommand(1);
    Options o;

    auto store_option = [&](CLI::App* command) { command->add_option("--store", o.store, "corpus store file")->required(); };

    auto* ingest = app.add_subcommand("ingest", "parse releases listed in a manifest into the store");
    store_option(ingest);
    ingest->add_option("--metadata", o.metadata, "manifest: section, label, date, path per line")->required()->check(CLI::ExistingFile);
    ingest->add_option("--lexicon", o.lexicon, "abbreviation lexicon file")->check(CLI::ExistingFile);
    ingest->add_option("--diagnostics", o.diagnostics, "write parse diagnostics here instead of stderr");
    ingest->add_option("--output,-o", o.output, "ingestion report (default stdout)");

    auto* stats = app.add_subcommand("stats", "per-release reuse statistics");
    store_option(stats);
    stats->add_option("--section", o.section, "swissprot, trembl or all");
    stats->add_option("--format", o.format, "tsv or json");
    stats->add_option("--output,-o", o.output, "output file (default stdout)");
    stats->add_option("--figures", o.figures, "also write plot-ready data files into this directory");
    stats->add_flag("--count-repeats", o.count_repeats, "count a sentence repeated within one entry once per repetition");

    auto* detect = app.add_subcommand("detect", "scan for propagation patterns");
    store_option(detect);
    detect->add_option("--until", o.until, "ignore releases after SECTION:LABEL");
    detect->add_option("--latest-release", o.latest_release, "release label treated as latest");
    detect->add_option("--output,-o", o.output, "summary table (default stdout)");
    detect->add_option("--reports", o.reports, "write every report as JSON lines");

    auto* exporter = app.add_subcommand("export", "write the store as a directory of sorted TSV files");
    store_option(exporter);
    exporter->add_option("--output,-o", o.output, "bundle directory")->required();

    auto* importer = app.add_subcommand("import", "load an exported bundle into an empty store");
    store_option(importer);
    importer->add_option("--input,-i", o.input, "bundle directory")->required()->check(CLI::ExistingDirectory);

    auto* serve = app.add_subcommand("serve", "serve the JSON API");
    store_option(serve);
    serve->add_option("--bind", o.bind, "HOST:PORT (port 0 picks a free one)");
    serve->add_option("--static", o.static_dir, "directory of UI assets served at /")->check(CLI::ExistingDirectory);
    serve->add_option("--entry-url", o.entry_url, "entry link template containing {accession}");
    serve->add_option("--latest-release", o.latest_release, "release label treated as latest");

    auto* generate = app.add_subcommand("generate", "write a synthetic corpus with a ground-truth ledger");
    auto& g = o.generator;
    generate->add_option("--output,-o", o.output, "target directory")->required();
    generate->add_option("--params", o.params, "generator parameters as JSON")->check(CLI::ExistingFile);
    generate->add_option("--seed", g.seed);
    generate->add_option("--swissprot-releases", g.swissprot_releases);
    generate->add_option("--trembl-releases", g.trembl_releases);
    generate->add_option("--entries", g.entry_count);
    generate->add_option("--sentence-pool", g.sentence_pool_size);
    generate->add_option("--copy-rate", g.copy_rate);
    generate->add_option("--removal-rate", g.removal_rate);
    generate->add_option("--readd-rate", g.readd_rate);
    generate->add_option("--new-sentence-rate", g.new_sentence_rate);
    generate->add_option("--merge-rate", g.merge_rate);
    generate->add_option("--trembl-fraction", g.trembl_fraction);
    generate->add_option("--max-initial-sentences", g.max_initial_sentences);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest)
            return run_ingest(o);
        if (*stats)
            return run_stats(o);
        if (*detect)
            return run_detect(o);
        if (*exporter)
            return run_export(o);
        if (*importer)
            return run_import(o);
        if (*serve)
            return run_serve(o);
        if (*generate)
            return run_generate(o);
    }
    catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
