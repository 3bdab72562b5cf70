#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace annoprov
{
    struct Diagnostic
    {
        std::string release_label;
        std::size_t line_no = 0;
        std::string reason;
    };

    // Collects parse diagnostics; optionally mirrors each record as a
    // "label<TAB>line<TAB>reason" line to a stream as it arrives.
    class DiagnosticSink
    {
      public:
        DiagnosticSink() = default;
        explicit DiagnosticSink(std::ostream& mirror) : mirror_{&mirror} {}

        void report(Diagnostic diagnostic);
        const std::vector<Diagnostic>& records() const noexcept { return records_; }
        std::size_t size() const noexcept { return records_.size(); }
        void clear() noexcept { records_.clear(); }

      private:
        std::vector<Diagnostic> records_;
        std::ostream* mirror_ = nullptr;
    };

    // ----------------------------------------------------------------------

    class LineSource
    {
      public:
        virtual ~LineSource() = default;
        // false at end of input; the line excludes its terminator
        virtual bool next(std::string& line) = 0;
    };

    // Plain or gzip-compressed file; compression is detected from the magic bytes.
    std::unique_ptr<LineSource> open_flat_file(const std::filesystem::path& path);
    std::unique_ptr<LineSource> lines_from_string(std::string text);
    std::unique_ptr<LineSource> lines_from_stream(std::istream& stream);

    // Bytes are kept when they already form valid UTF-8, otherwise decoded as Latin-1.
    std::string decode_latin1_superset(std::string_view bytes);

    // ----------------------------------------------------------------------

    struct CleanedComment
    {
        // one element per topic (or untitled run of text), in file order
        std::vector<std::string> blocks;

        std::string text() const; // blocks joined with single spaces
        bool empty() const noexcept { return blocks.empty(); }
    };

    struct RemovedBlock
    {
        std::size_t first_line = 0; // indices into the cc_lines argument
        std::size_t last_line = 0;
    };

    CleanedComment clean_comment_blocks(std::span<const std::string> cc_lines, std::vector<RemovedBlock>* removed = nullptr);
    std::string clean_comment_lines(std::span<const std::string> cc_lines);

    bool is_valid_accession(std::string_view accession) noexcept;

    // ----------------------------------------------------------------------

    struct RawEntry
    {
        std::vector<std::string> accessions; // first is the primary accession
        std::string comment_text;
        std::vector<std::string> comment_blocks;
        std::string release_ref;
        std::size_t first_line = 0;

        bool operator==(const RawEntry&) const = default;
    };

    // Pull parser over one release file. Each call to next() consumes lines up
    // to and including the next "//" terminator and yields the entry they form.
    class FlatFileReader
    {
      public:
        FlatFileReader(LineSource& source, std::string release_label, DiagnosticSink& diagnostics);

        std::optional<RawEntry> next();

        std::size_t terminators_seen() const noexcept { return terminators_; }
        std::size_t lines_read() const noexcept { return line_no_; }

      private:
        void diagnose(std::size_t line_no, std::string reason);
        void reset_entry();

        LineSource& source_;
        std::string release_label_;
        DiagnosticSink& diagnostics_;
        std::size_t line_no_ = 0;
        std::size_t terminators_ = 0;

        std::string line_;
        std::vector<std::string> accessions_;
        std::vector<std::string> cc_lines_;
        std::vector<std::size_t> cc_line_numbers_;
        std::size_t entry_first_line_ = 0;
        bool in_entry_ = false;
        std::unordered_set<std::string> reported_blocks_;
    };

    std::vector<RawEntry> parse_release(LineSource& source, std::string_view release_label, DiagnosticSink& diagnostics);

} // namespace annoprov
