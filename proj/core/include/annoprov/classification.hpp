#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "annoprov/corpus_store.hpp"

namespace annoprov
{
    enum class Classification : std::uint8_t { Erroneous, Inconsistent, Accurate, TooManyResults, PossiblyErroneous };
    inline constexpr Classification kClassifications[] = {Classification::Erroneous, Classification::Inconsistent, Classification::Accurate,
                                                          Classification::TooManyResults, Classification::PossiblyErroneous};

    enum class Answer : std::uint8_t { Yes, No, InsufficientEvidence };
    inline constexpr Answer kAnswers[] = {Answer::Yes, Answer::No, Answer::InsufficientEvidence};

    std::string_view classification_name(Classification value) noexcept;
    std::optional<Classification> parse_classification(std::string_view name) noexcept;
    std::string_view answer_name(Answer value) noexcept;
    std::optional<Answer> parse_answer(std::string_view name) noexcept;

    // A sentence seen in more clusters than this is too widespread to review by hand.
    inline constexpr std::size_t kTooManyResultsThreshold = 100;

    // The protocol questions, asked in order:
    //   Q1  does the sentence occur in over 100 entries?        yes -> too many results
    //   Q2  has it propagated from an origin entry?              no -> accurate
    //   Q3  was the origin updated in a relevant way?            no -> accurate
    //   Q4  does that update affect the copies' accuracy?        yes -> erroneous, no -> inconsistent
    // "insufficient evidence" at Q2-Q4 ends in possibly erroneous; Q1 is a plain yes/no count.
    //
    // Returns the leaf reached by `path`, or nothing when the path stops early,
    // continues past a leaf, or uses an answer a question does not allow.
    std::optional<Classification> decide(std::span<const Answer> path) noexcept;

    // Leaf for a complete set of answers to Q1-Q4; answers after the leaf are ignored.
    // InvalidArgument when Q1 is not a plain yes or no.
    Classification classify_answers(const std::array<Answer, 4>& answers);

    // Every answer sequence that reaches a leaf, in lexical order.
    std::vector<std::vector<Answer>> decision_paths();

    struct ClassificationRecord
    {
        std::int64_t record_id = 0; // assigned on submission
        SentenceId sentence{};
        Classification classification{};
        std::vector<Answer> decision_path;
        std::string analyst;
        std::string timestamp; // ISO-8601 UTC
        std::string notes;

        bool operator==(const ClassificationRecord&) const = default;
    };

    nlohmann::json to_json(const ClassificationRecord& record);
    // Parses a submission; InvalidArgument on missing or mistyped fields.
    ClassificationRecord record_from_json(const nlohmann::json& value);

    struct Submission
    {
        ClassificationRecord record;
        bool q1_forced = false; // the sentence exceeded the threshold, so the leaf was fixed by the server
    };

    // Append-only classification history kept inside the corpus store.
    class ClassificationLog
    {
      public:
        explicit ClassificationLog(CorpusStore& store) : store_{store} {}

        // Validates against the decision tree and the store:
        //   NotFound         unknown sentence
        //   InvalidArgument  too many results claimed for a sentence at or under the threshold
        //   Conflict         classification and decision path disagree
        // Q1 is always answered from the store's cluster count.
        Submission submit(ClassificationRecord draft);
        std::vector<ClassificationRecord> history(SentenceId sentence) const; // oldest first

      private:
        CorpusStore& store_;
    };

    std::string utc_timestamp_now();

} // namespace annoprov
