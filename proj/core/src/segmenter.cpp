#include "annoprov/segmenter.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "annoprov/errors.hpp"

namespace annoprov
{
    namespace
    {
        char ascii_lower(char c) noexcept { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

        std::string_view trim(std::string_view text) noexcept
        {
            while (!text.empty() && is_sentence_space(text.front()))
                text.remove_prefix(1);
            while (!text.empty() && is_sentence_space(text.back()))
                text.remove_suffix(1);
            return text;
        }

        constexpr const char* kDefaultAbbreviations[] = {"e.g.", "i.e.", "sp.", "spp.", "ca.", "cf.", "et al.", "approx.", "vs."};
    } // namespace

    bool is_sentence_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

    bool is_word_boundary_before(char c) noexcept { return is_sentence_space(c) || c == '(' || c == '[' || c == '{' || c == '"' || c == '\''; }

    AbbreviationLexicon::AbbreviationLexicon(std::vector<std::string> abbreviations, std::string version) : version_{std::move(version)}
    {
        for (auto& entry : abbreviations) {
            std::string lowered = normalize(entry);
            if (std::find(entries_.begin(), entries_.end(), lowered) == entries_.end())
                entries_.push_back(std::move(lowered));
        }
    }

    AbbreviationLexicon AbbreviationLexicon::defaults()
    {
        return AbbreviationLexicon(std::vector<std::string>(std::begin(kDefaultAbbreviations), std::end(kDefaultAbbreviations)), "builtin-1");
    }

    AbbreviationLexicon AbbreviationLexicon::load(const std::filesystem::path& path)
    {
        std::ifstream input(path);
        if (!input)
            throw NotFound("cannot open abbreviation lexicon " + path.string());
        return parse(input);
    }

    AbbreviationLexicon AbbreviationLexicon::parse(std::istream& input)
    {
        std::vector<std::string> abbreviations;
        std::string version = "unversioned";
        std::string line;
        while (std::getline(input, line)) {
            std::string_view content = trim(line);
            if (content.starts_with('#')) {
                content = trim(content.substr(1));
                if (content.starts_with("version:"))
                    version = std::string(trim(content.substr(8)));
                continue;
            }
            if (const auto hash = content.find(" #"); hash != std::string_view::npos)
                content = trim(content.substr(0, hash));
            if (!content.empty())
                abbreviations.emplace_back(content);
        }
        return AbbreviationLexicon(std::move(abbreviations), std::move(version));
    }

    bool AbbreviationLexicon::ends_with_abbreviation(std::string_view prefix) const noexcept
    {
        for (const auto& entry : entries_) {
            if (entry.size() > prefix.size())
                continue;
            const std::size_t start = prefix.size() - entry.size();
            bool match = true;
            for (std::size_t i = 0; i < entry.size(); ++i) {
                const char c = prefix[start + i];
                // a single space in the lexicon matches any whitespace run of length one
                if (entry[i] == ' ' ? !is_sentence_space(c) : ascii_lower(c) != entry[i]) {
                    match = false;
                    break;
                }
            }
            if (match && (start == 0 || is_word_boundary_before(prefix[start - 1])))
                return true;
        }
        return false;
    }

    // ----------------------------------------------------------------------

    std::vector<std::string> SentenceSegmenter::segment(std::string_view text) const
    {
        std::vector<std::string> sentences;
        std::size_t start = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] != '.')
                continue;
            // a stop inside a decimal number is followed by a digit, so never qualifies here
            if (i + 1 < text.size() && !is_sentence_space(text[i + 1]))
                continue;
            if (lexicon_.ends_with_abbreviation(text.substr(0, i + 1)))
                continue;
            if (const auto sentence = trim(text.substr(start, i + 1 - start)); !sentence.empty())
                sentences.emplace_back(sentence);
            start = i + 1;
        }
        if (const auto tail = trim(text.substr(std::min(start, text.size()))); !tail.empty())
            sentences.emplace_back(tail);
        return sentences;
    }

    std::string normalize(std::string_view raw_sentence)
    {
        std::string out;
        out.reserve(raw_sentence.size());
        bool pending_space = false;
        for (const char c : raw_sentence) {
            if (is_sentence_space(c)) {
                pending_space = !out.empty();
                continue;
            }
            if (pending_space)
                out.push_back(' ');
            pending_space = false;
            out.push_back(ascii_lower(c));
        }
        if (out.empty())
            throw InvalidArgument("cannot normalize a blank sentence");
        return out;
    }

    bool is_canonical(std::string_view text) noexcept
    {
        if (text.empty() || text.front() == ' ' || text.back() == ' ')
            return false;
        char previous = '\0';
        for (const char c : text) {
            if ((c >= 'A' && c <= 'Z') || (is_sentence_space(c) && c != ' ') || (c == ' ' && previous == ' '))
                return false;
            previous = c;
        }
        return true;
    }

} // namespace annoprov
