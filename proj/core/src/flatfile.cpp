#include "annoprov/flatfile.hpp"

#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <zlib.h>

#include "annoprov/errors.hpp"

namespace annoprov
{
    void DiagnosticSink::report(Diagnostic diagnostic)
    {
        if (mirror_)
            *mirror_ << diagnostic.release_label << '\t' << diagnostic.line_no << '\t' << diagnostic.reason << '\n';
        records_.push_back(std::move(diagnostic));
    }

    // ----------------------------------------------------------------------

    namespace
    {
        void strip_cr(std::string& line)
        {
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
        }

        class StreamLineSource final : public LineSource
        {
          public:
            explicit StreamLineSource(std::istream& stream) : stream_{stream} {}

            bool next(std::string& line) override
            {
                if (!std::getline(stream_, line))
                    return false;
                strip_cr(line);
                return true;
            }

          private:
            std::istream& stream_;
        };

        class OwningStreamLineSource final : public LineSource
        {
          public:
            template <typename Stream> explicit OwningStreamLineSource(std::unique_ptr<Stream> stream) : stream_{std::move(stream)}, lines_{*stream_} {}

            bool next(std::string& line) override { return lines_.next(line); }

          private:
            std::unique_ptr<std::istream> stream_;
            StreamLineSource lines_;
        };

        class GzipLineSource final : public LineSource
        {
          public:
            explicit GzipLineSource(const std::filesystem::path& path) : file_{gzopen(path.c_str(), "rb")}
            {
                if (!file_)
                    throw NotFound("cannot open " + path.string());
                gzbuffer(file_, 1 << 17);
            }
            ~GzipLineSource() override { gzclose(file_); }
            GzipLineSource(const GzipLineSource&) = delete;
            GzipLineSource& operator=(const GzipLineSource&) = delete;

            bool next(std::string& line) override
            {
                line.clear();
                bool any = false;
                while (gzgets(file_, buffer_.data(), static_cast<int>(buffer_.size())) != nullptr) {
                    any = true;
                    const std::size_t length = std::strlen(buffer_.data());
                    if (length > 0 && buffer_[length - 1] == '\n') {
                        line.append(buffer_.data(), length - 1);
                        strip_cr(line);
                        return true;
                    }
                    line.append(buffer_.data(), length);
                }
                int error = Z_OK;
                const char* message = gzerror(file_, &error);
                if (error != Z_OK && error != Z_BUF_ERROR)
                    throw Error(std::string("gzip read error: ") + message);
                strip_cr(line);
                return any;
            }

          private:
            gzFile file_;
            std::array<char, 1 << 16> buffer_{};
        };

        bool valid_utf8(std::string_view bytes) noexcept
        {
            std::size_t i = 0;
            while (i < bytes.size()) {
                const auto c = static_cast<unsigned char>(bytes[i]);
                std::size_t extra = 0;
                if (c < 0x80)
                    extra = 0;
                else if ((c & 0xE0) == 0xC0 && c >= 0xC2)
                    extra = 1;
                else if ((c & 0xF0) == 0xE0)
                    extra = 2;
                else if ((c & 0xF8) == 0xF0 && c <= 0xF4)
                    extra = 3;
                else
                    return false;
                if (extra > 0 && i + extra >= bytes.size())
                    return false;
                for (std::size_t k = 1; k <= extra; ++k) {
                    if ((static_cast<unsigned char>(bytes[i + k]) & 0xC0) != 0x80)
                        return false;
                }
                i += extra + 1;
            }
            return true;
        }

        std::string_view trim(std::string_view text) noexcept
        {
            while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
                text.remove_prefix(1);
            while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
                text.remove_suffix(1);
            return text;
        }

        bool is_code_char(char c) noexcept { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

        // ---------- ---------- a run of at least ten dashes opens or closes a banner
        bool is_banner_delimiter(std::string_view content) noexcept
        {
            std::size_t dashes = 0;
            while (dashes < content.size() && content[dashes] == '-')
                ++dashes;
            return dashes >= 10;
        }

        // "SUBCELLULAR LOCATION:" -> length of the heading including the colon, 0 if absent
        std::size_t topic_heading_length(std::string_view text) noexcept
        {
            std::size_t i = 0;
            bool word_start = true;
            while (i < text.size()) {
                const char c = text[i];
                if (c >= 'A' && c <= 'Z') {
                    word_start = false;
                }
                else if (c >= '0' && c <= '9') {
                    if (i == 0)
                        return 0;
                    word_start = false;
                }
                else if (c == ' ' || c == '-' || c == '/' || c == '_') {
                    if (word_start)
                        return 0;
                    word_start = true;
                }
                else if (c == ':') {
                    return (i > 0 && !word_start) ? i + 1 : 0;
                }
                else {
                    return 0;
                }
                ++i;
            }
            return 0;
        }

        std::string_view cc_content(std::string_view line) noexcept
        {
            if (line.size() >= 2 && line.substr(0, 2) == "CC")
                line.remove_prefix(2);
            return trim(line);
        }

        void append_words(std::string& block, std::string_view text)
        {
            if (text.empty())
                return;
            if (!block.empty())
                block.push_back(' ');
            block.append(text);
        }
    } // namespace

    std::unique_ptr<LineSource> open_flat_file(const std::filesystem::path& path)
    {
        std::ifstream probe(path, std::ios::binary);
        if (!probe)
            throw NotFound("cannot open " + path.string());
        std::array<unsigned char, 2> magic{};
        probe.read(reinterpret_cast<char*>(magic.data()), 2);
        const bool gzip = probe.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
        probe.close();
        if (gzip)
            return std::make_unique<GzipLineSource>(path);
        auto stream = std::make_unique<std::ifstream>(path, std::ios::binary);
        return std::make_unique<OwningStreamLineSource>(std::move(stream));
    }

    std::unique_ptr<LineSource> lines_from_string(std::string text)
    {
        return std::make_unique<OwningStreamLineSource>(std::make_unique<std::istringstream>(std::move(text)));
    }

    std::unique_ptr<LineSource> lines_from_stream(std::istream& stream) { return std::make_unique<StreamLineSource>(stream); }

    std::string decode_latin1_superset(std::string_view bytes)
    {
        if (valid_utf8(bytes))
            return std::string(bytes);
        std::string out;
        out.reserve(bytes.size() + bytes.size() / 4);
        for (const char ch : bytes) {
            const auto c = static_cast<unsigned char>(ch);
            if (c < 0x80) {
                out.push_back(ch);
            }
            else {
                out.push_back(static_cast<char>(0xC0 | (c >> 6)));
                out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
            }
        }
        return out;
    }

    // ----------------------------------------------------------------------

    std::string CleanedComment::text() const
    {
        std::string out;
        for (const auto& block : blocks)
            append_words(out, block);
        return out;
    }

    CleanedComment clean_comment_blocks(std::span<const std::string> cc_lines, std::vector<RemovedBlock>* removed)
    {
        CleanedComment result;
        std::string current;
        const auto flush = [&] {
            if (!current.empty())
                result.blocks.push_back(std::move(current));
            current.clear();
        };

        for (std::size_t i = 0; i < cc_lines.size(); ++i) {
            const std::string_view content = cc_content(cc_lines[i]);
            if (content.empty())
                continue;

            if (is_banner_delimiter(content)) {
                std::size_t close = i + 1;
                while (close < cc_lines.size() && !is_banner_delimiter(cc_content(cc_lines[close])))
                    ++close;
                if (close < cc_lines.size()) {
                    if (removed)
                        removed->push_back({i, close});
                    i = close;
                    continue;
                }
                // unbounded banner: keep it as ordinary text
            }

            if (content.starts_with("-!-")) {
                flush();
                const std::string_view rest = trim(content.substr(3));
                if (const std::size_t heading = topic_heading_length(rest); heading > 0)
                    append_words(current, trim(rest.substr(heading)));
                else
                    append_words(current, content);
                continue;
            }

            append_words(current, content);
        }
        flush();
        return result;
    }

    std::string clean_comment_lines(std::span<const std::string> cc_lines) { return clean_comment_blocks(cc_lines).text(); }

    bool is_valid_accession(std::string_view accession) noexcept
    {
        if (accession.size() < 6 || accession.size() > 10)
            return false;
        if (accession[0] < 'A' || accession[0] > 'Z')
            return false;
        for (const char c : accession.substr(1)) {
            if (!is_code_char(c))
                return false;
        }
        return true;
    }

    // ----------------------------------------------------------------------

    FlatFileReader::FlatFileReader(LineSource& source, std::string release_label, DiagnosticSink& diagnostics)
        : source_{source}, release_label_{std::move(release_label)}, diagnostics_{diagnostics}
    {
    }

    void FlatFileReader::diagnose(std::size_t line_no, std::string reason) { diagnostics_.report({release_label_, line_no, std::move(reason)}); }

    void FlatFileReader::reset_entry()
    {
        accessions_.clear();
        cc_lines_.clear();
        cc_line_numbers_.clear();
        in_entry_ = false;
    }

    std::optional<RawEntry> FlatFileReader::next()
    {
        while (source_.next(line_)) {
            ++line_no_;

            if (line_.starts_with("//") && trim(std::string_view(line_).substr(2)).empty()) {
                ++terminators_;
                if (!in_entry_ || accessions_.empty()) {
                    diagnose(line_no_, "entry without a valid accession dropped");
                    reset_entry();
                    continue;
                }
                RawEntry entry;
                entry.accessions = std::move(accessions_);
                entry.release_ref = release_label_;
                entry.first_line = entry_first_line_;

                std::vector<RemovedBlock> removed;
                auto cleaned = clean_comment_blocks(cc_lines_, &removed);
                for (const auto& block : removed) {
                    // each distinct removed text is reported once per release
                    std::string text;
                    for (std::size_t k = block.first_line; k <= block.last_line; ++k)
                        append_words(text, cc_content(cc_lines_[k]));
                    if (reported_blocks_.insert(text).second)
                        diagnose(cc_line_numbers_[block.first_line], "removed delimited comment block: " + text);
                }
                entry.comment_text = cleaned.text();
                entry.comment_blocks = std::move(cleaned.blocks);
                reset_entry();
                return entry;
            }

            if (!in_entry_) {
                in_entry_ = true;
                entry_first_line_ = line_no_;
            }

            const std::string_view line = line_;
            const bool coded = line.size() >= 2 && is_code_char(line[0]) && is_code_char(line[1]) && (line.size() == 2 || line.substr(2, 3) == "   ");
            if (!coded) {
                if (line.starts_with("     "))
                    continue; // sequence data
                diagnose(line_no_, "malformed line skipped");
                continue;
            }

            const std::string_view code = line.substr(0, 2);
            if (code == "AC") {
                std::string_view rest = line.size() > 5 ? line.substr(5) : std::string_view{};
                while (!rest.empty()) {
                    const auto semicolon = rest.find(';');
                    const std::string_view token = trim(rest.substr(0, semicolon));
                    rest = semicolon == std::string_view::npos ? std::string_view{} : rest.substr(semicolon + 1);
                    if (token.empty())
                        continue;
                    if (is_valid_accession(token))
                        accessions_.emplace_back(token);
                    else
                        diagnose(line_no_, "invalid accession '" + std::string(token) + "' ignored");
                }
            }
            else if (code == "CC") {
                cc_lines_.push_back(decode_latin1_superset(line));
                cc_line_numbers_.push_back(line_no_);
            }
        }

        if (in_entry_) {
            diagnose(entry_first_line_, "truncated entry: end of input before // terminator");
            reset_entry();
        }
        return std::nullopt;
    }

    std::vector<RawEntry> parse_release(LineSource& source, std::string_view release_label, DiagnosticSink& diagnostics)
    {
        FlatFileReader reader(source, std::string(release_label), diagnostics);
        std::vector<RawEntry> entries;
        while (auto entry = reader.next())
            entries.push_back(std::move(*entry));
        return entries;
    }

} // namespace annoprov
