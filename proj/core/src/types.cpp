#include "annoprov/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace annoprov
{
    std::string_view section_name(Section section) noexcept
    {
        switch (section) {
            case Section::SwissProt:
                return "swissprot";
            case Section::TrEMBL:
                return "trembl";
        }
        return "unknown";
    }

    std::optional<Section> parse_section(std::string_view text) noexcept
    {
        std::string lowered(text);
        std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (lowered == "swissprot" || lowered == "swiss-prot" || lowered == "sp")
            return Section::SwissProt;
        if (lowered == "trembl" || lowered == "tr")
            return Section::TrEMBL;
        return std::nullopt;
    }

    namespace
    {
        std::optional<int> parse_int(std::string_view text)
        {
            int value = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
                return std::nullopt;
            return value;
        }
    } // namespace

    std::optional<Date> parse_date(std::string_view text) noexcept
    {
        if (text.size() != 7 && text.size() != 10)
            return std::nullopt;
        if (text[4] != '-' || (text.size() == 10 && text[7] != '-'))
            return std::nullopt;
        const auto year = parse_int(text.substr(0, 4));
        const auto month = parse_int(text.substr(5, 2));
        const auto day = text.size() == 10 ? parse_int(text.substr(8, 2)) : std::optional<int>{1};
        if (!year || !month || !day)
            return std::nullopt;
        const Date date{std::chrono::year{*year}, std::chrono::month{static_cast<unsigned>(*month)}, std::chrono::day{static_cast<unsigned>(*day)}};
        if (!date.ok())
            return std::nullopt;
        return date;
    }

    std::string format_date(Date date)
    {
        char buffer[16];
        std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", static_cast<int>(date.year()), static_cast<unsigned>(date.month()),
                      static_cast<unsigned>(date.day()));
        return buffer;
    }

    std::weak_ordering release_order(const Release& a, const Release& b) noexcept
    {
        if (const auto c = std::chrono::sys_days{a.date} <=> std::chrono::sys_days{b.date}; c != 0)
            return c;
        if (const auto c = a.section <=> b.section; c != 0)
            return c;
        return a.label <=> b.label;
    }

    std::string describe(const Release& release) { return std::string(section_name(release.section)) + ":" + release.label; }

} // namespace annoprov
