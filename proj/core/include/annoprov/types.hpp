#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace annoprov
{
    enum class SentenceId : std::int64_t {};
    enum class ClusterId : std::int64_t {};

    // 1-based position in the global date-ordered release sequence
    enum class ReleaseOrdinal : std::int32_t {};

    template <typename E> constexpr auto raw(E value) noexcept { return static_cast<std::underlying_type_t<E>>(value); }

    enum class Section : std::uint8_t { SwissProt = 0, TrEMBL = 1 };

    inline constexpr Section kSections[] = {Section::SwissProt, Section::TrEMBL};

    std::string_view section_name(Section section) noexcept; // "swissprot" / "trembl"
    std::optional<Section> parse_section(std::string_view text) noexcept;

    using Date = std::chrono::year_month_day;

    // accepts YYYY-MM-DD or YYYY-MM (day defaults to 1)
    std::optional<Date> parse_date(std::string_view text) noexcept;
    std::string format_date(Date date);

    struct Release
    {
        Section section = Section::SwissProt;
        std::string label;
        Date date{};

        bool operator==(const Release&) const = default;
    };

    // global release order: date, then Swiss-Prot before TrEMBL, then label
    std::weak_ordering release_order(const Release& a, const Release& b) noexcept;

    std::string describe(const Release& release); // "swissprot:44"

} // namespace annoprov
