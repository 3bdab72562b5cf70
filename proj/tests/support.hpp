#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "annoprov/corpus_store.hpp"
#include "annoprov/ingest.hpp"

namespace testing
{
    namespace fs = std::filesystem;

    inline const fs::path kFixtures = ANNOPROV_FIXTURES;

    // Scratch directory removed on scope exit.
    class TempDir
    {
      public:
        TempDir()
        {
            std::string pattern = (fs::temp_directory_path() / "annoprov-test-XXXXXX").string();
            if (!mkdtemp(pattern.data()))
                throw std::runtime_error("mkdtemp failed");
            path_ = pattern;
        }
        ~TempDir()
        {
            std::error_code ignored;
            fs::remove_all(path_, ignored);
        }
        TempDir(const TempDir&) = delete;
        TempDir& operator=(const TempDir&) = delete;

        const fs::path& path() const noexcept { return path_; }
        fs::path operator/(const std::string& name) const { return path_ / name; }

      private:
        fs::path path_;
    };

    inline std::string read_file(const fs::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream out;
        out << in.rdbuf();
        return out.str();
    }

    inline void write_file(const fs::path& path, const std::string& text)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << text;
    }

    struct CommandResult
    {
        int status = -1;
        std::string output;
    };

    // Runs a shell command and captures stdout.
    inline CommandResult run_command(const std::string& command)
    {
        CommandResult result;
        FILE* pipe = popen(command.c_str(), "r");
        if (!pipe)
            return result;
        char buffer[4096];
        std::size_t n;
        while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0)
            result.output.append(buffer, n);
        const int status = pclose(pipe);
        result.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        return result;
    }

    inline annoprov::Release release(annoprov::Section section, std::string label, const std::string& date)
    {
        return annoprov::Release{section, std::move(label), *annoprov::parse_date(date)};
    }

    inline annoprov::ReleaseReport ingest_text(annoprov::CorpusStore& store, const annoprov::Release& release, std::string text)
    {
        annoprov::DiagnosticSink sink;
        auto source = annoprov::lines_from_string(std::move(text));
        return annoprov::ingest_release(store, release, *source, annoprov::SentenceSegmenter{}, sink);
    }

    inline std::vector<annoprov::ReleaseReport> ingest_fixture(annoprov::CorpusStore& store, const std::string& name)
    {
        annoprov::DiagnosticSink sink;
        return annoprov::ingest_manifest(store, annoprov::read_manifest(kFixtures / name / "manifest.tsv"), annoprov::SentenceSegmenter{}, sink);
    }

    // One flat-file entry with a single FUNCTION topic (or none when `comment` is empty).
    inline std::string entry(const std::string& accessions, const std::string& comment)
    {
        std::string text = "ID   TEST_ENTRY   Reviewed;   10 AA.\nAC   " + accessions + "\n";
        if (!comment.empty())
            text += "CC   -!- FUNCTION: " + comment + "\n";
        return text + "SQ   SEQUENCE   10 AA;  1100 MW;  0 CRC64;\n     MKVLAAGIVG\n//\n";
    }

} // namespace testing
