#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace annoprov
{
    // Abbreviations whose trailing full stop never ends a sentence.
    // File format: one abbreviation per line, '#' starts a comment,
    // an optional "# version: N" line names the lexicon revision.
    class AbbreviationLexicon
    {
      public:
        AbbreviationLexicon() = default;
        explicit AbbreviationLexicon(std::vector<std::string> abbreviations, std::string version = "custom");

        static AbbreviationLexicon defaults();
        static AbbreviationLexicon load(const std::filesystem::path& path);
        static AbbreviationLexicon parse(std::istream& input);

        // true if `prefix` (text up to and including a full stop) ends with a
        // lexicon entry that starts at a word boundary; case-insensitive
        bool ends_with_abbreviation(std::string_view prefix) const noexcept;

        const std::vector<std::string>& entries() const noexcept { return entries_; }
        const std::string& version() const noexcept { return version_; }

      private:
        std::vector<std::string> entries_; // lowercased
        std::string version_ = "empty";
    };

    bool is_sentence_space(char c) noexcept;
    bool is_word_boundary_before(char c) noexcept;

    class SentenceSegmenter
    {
      public:
        SentenceSegmenter() : lexicon_{AbbreviationLexicon::defaults()} {}
        explicit SentenceSegmenter(AbbreviationLexicon lexicon) : lexicon_{std::move(lexicon)} {}

        // Splits at a full stop followed by whitespace or end of text, unless the
        // stop closes a lexicon abbreviation. A trailing unterminated fragment is
        // its own sentence. Segments are trimmed; empty segments are not emitted.
        std::vector<std::string> segment(std::string_view text) const;

        const AbbreviationLexicon& lexicon() const noexcept { return lexicon_; }

      private:
        AbbreviationLexicon lexicon_;
    };

    // ASCII lowercase, whitespace runs collapsed to one space, trimmed.
    // Throws InvalidArgument for blank input.
    std::string normalize(std::string_view raw_sentence);
    bool is_canonical(std::string_view text) noexcept;

} // namespace annoprov
