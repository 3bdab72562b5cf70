#include "annoprov/classification.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>

#include <nlohmann/json.hpp>

#include "annoprov/errors.hpp"
#include "internal/store_impl.hpp"

namespace annoprov
{
    namespace
    {
        constexpr std::string_view kClassificationNames[] = {"erroneous", "inconsistent", "accurate", "too_many_results", "possibly_erroneous"};
        constexpr std::string_view kAnswerNames[] = {"yes", "no", "insufficient_evidence"};

        std::string path_text(const std::vector<Answer>& path)
        {
            auto list = nlohmann::json::array();
            for (const auto answer : path)
                list.push_back(answer_name(answer));
            return list.dump();
        }

        std::vector<Answer> path_from_text(const std::string& text)
        {
            std::vector<Answer> path;
            for (const auto& item : nlohmann::json::parse(text))
                path.push_back(parse_answer(item.get<std::string>()).value());
            return path;
        }
    } // namespace

    std::string_view classification_name(Classification value) noexcept { return kClassificationNames[static_cast<std::size_t>(value)]; }
    std::string_view answer_name(Answer value) noexcept { return kAnswerNames[static_cast<std::size_t>(value)]; }

    std::optional<Classification> parse_classification(std::string_view name) noexcept
    {
        for (const auto value : kClassifications)
            if (classification_name(value) == name)
                return value;
        return std::nullopt;
    }

    std::optional<Answer> parse_answer(std::string_view name) noexcept
    {
        for (const auto value : kAnswers)
            if (answer_name(value) == name)
                return value;
        if (name == "insufficient evidence" || name == "insufficient")
            return Answer::InsufficientEvidence;
        return std::nullopt;
    }

    std::optional<Classification> decide(std::span<const Answer> path) noexcept
    {
        std::optional<Classification> leaf;
        std::size_t used = 0;
        if (path.empty())
            return std::nullopt;

        switch (path[0]) {
        case Answer::Yes: leaf = Classification::TooManyResults; used = 1; break;
        case Answer::InsufficientEvidence: return std::nullopt;
        case Answer::No:
            for (std::size_t q = 1; q <= 3 && !leaf; ++q) {
                if (q >= path.size())
                    return std::nullopt;
                used = q + 1;
                switch (path[q]) {
                case Answer::InsufficientEvidence: leaf = Classification::PossiblyErroneous; break;
                case Answer::No: leaf = q == 3 ? Classification::Inconsistent : Classification::Accurate; break;
                case Answer::Yes:
                    if (q == 3)
                        leaf = Classification::Erroneous;
                    break;
                }
            }
            break;
        }
        if (used != path.size())
            return std::nullopt;
        return leaf;
    }

    Classification classify_answers(const std::array<Answer, 4>& answers)
    {
        if (answers[0] == Answer::InsufficientEvidence)
            throw InvalidArgument("Q1 takes yes or no");
        for (std::size_t length = 1; length <= answers.size(); ++length)
            if (const auto leaf = decide(std::span(answers).first(length)))
                return *leaf;
        throw InvalidArgument("answers do not reach a leaf");
    }

    std::vector<std::vector<Answer>> decision_paths()
    {
        std::vector<std::vector<Answer>> found;
        std::vector<std::vector<Answer>> frontier{{}};
        while (!frontier.empty()) {
            std::vector<std::vector<Answer>> next;
            for (const auto& prefix : frontier)
                for (const auto answer : kAnswers) {
                    auto path = prefix;
                    path.push_back(answer);
                    if (decide(path))
                        found.push_back(path);
                    else if (path.size() < 4)
                        next.push_back(std::move(path));
                }
            frontier = std::move(next);
        }
        std::sort(found.begin(), found.end());
        return found;
    }

    nlohmann::json to_json(const ClassificationRecord& record)
    {
        auto path = nlohmann::json::array();
        for (const auto answer : record.decision_path)
            path.push_back(answer_name(answer));
        return {{"record_id", record.record_id},
                {"sentence_id", raw(record.sentence)},
                {"classification", classification_name(record.classification)},
                {"decision_path", std::move(path)},
                {"analyst", record.analyst},
                {"timestamp", record.timestamp},
                {"notes", record.notes}};
    }

    ClassificationRecord record_from_json(const nlohmann::json& value)
    {
        if (!value.is_object())
            throw InvalidArgument("classification must be a JSON object");
        auto string_field = [&](const char* key, bool required) -> std::string {
            if (!value.contains(key)) {
                if (required)
                    throw InvalidArgument(std::string("missing field '") + key + "'");
                return {};
            }
            if (!value.at(key).is_string())
                throw InvalidArgument(std::string("field '") + key + "' must be a string");
            return value.at(key).get<std::string>();
        };

        ClassificationRecord record;
        if (!value.contains("sentence_id") || !value.at("sentence_id").is_number_integer())
            throw InvalidArgument("field 'sentence_id' must be an integer");
        record.sentence = SentenceId{value.at("sentence_id").get<std::int64_t>()};

        const auto name = string_field("classification", true);
        const auto classification = parse_classification(name);
        if (!classification)
            throw InvalidArgument("unknown classification '" + name + "'");
        record.classification = *classification;

        if (!value.contains("decision_path") || !value.at("decision_path").is_array())
            throw InvalidArgument("field 'decision_path' must be an array of answers");
        for (const auto& item : value.at("decision_path")) {
            const auto answer = item.is_string() ? parse_answer(item.get<std::string>()) : std::nullopt;
            if (!answer)
                throw InvalidArgument("decision_path answers must be \"yes\", \"no\" or \"insufficient_evidence\"");
            record.decision_path.push_back(*answer);
        }
        record.analyst = string_field("analyst", true);
        if (record.analyst.empty())
            throw InvalidArgument("analyst must not be empty");
        record.timestamp = string_field("timestamp", false);
        record.notes = string_field("notes", false);
        return record;
    }

    Submission ClassificationLog::submit(ClassificationRecord draft)
    {
        store_.sentence_text(draft.sentence); // NotFound
        const bool over = store_.lifetime_cluster_count(draft.sentence) > kTooManyResultsThreshold;

        Submission result;
        if (over) {
            result.q1_forced = true;
            draft.classification = Classification::TooManyResults;
            draft.decision_path = {Answer::Yes};
        }
        else {
            if (draft.classification == Classification::TooManyResults)
                throw InvalidArgument("too_many_results requires more than " + std::to_string(kTooManyResultsThreshold) + " entries; this sentence has fewer");
            if (draft.decision_path.empty())
                throw Conflict("decision_path must start with the answer to Q1");
            if (draft.decision_path.front() == Answer::Yes)
                throw InvalidArgument("Q1 is answered by the server: the sentence occurs in at most " + std::to_string(kTooManyResultsThreshold) + " entries");
            const auto leaf = decide(draft.decision_path);
            if (!leaf)
                throw Conflict("decision_path does not end at a leaf of the decision tree");
            if (*leaf != draft.classification)
                throw Conflict("decision_path leads to " + std::string(classification_name(*leaf)) + ", not " + std::string(classification_name(draft.classification)));
        }
        if (draft.timestamp.empty())
            draft.timestamp = utc_timestamp_now();

        auto& db = detail::database(store_);
        sql::Statement insert(db, "INSERT INTO classifications(sentence_id, classification, decision_path, analyst, timestamp, notes) VALUES(?, ?, ?, ?, ?, ?)");
        insert.bind(1, raw(draft.sentence))
            .bind(2, classification_name(draft.classification))
            .bind(3, path_text(draft.decision_path))
            .bind(4, draft.analyst)
            .bind(5, draft.timestamp)
            .bind(6, draft.notes)
            .run();
        draft.record_id = db.last_insert_rowid();
        result.record = std::move(draft);
        return result;
    }

    std::vector<ClassificationRecord> ClassificationLog::history(SentenceId sentence) const
    {
        auto& db = detail::database(store_);
        sql::Statement query(db, "SELECT record_id, classification, decision_path, analyst, timestamp, notes FROM classifications WHERE sentence_id = ? ORDER BY record_id");
        query.bind(1, raw(sentence));
        std::vector<ClassificationRecord> records;
        while (query.step()) {
            ClassificationRecord record;
            record.record_id = query.int64(0);
            record.sentence = sentence;
            record.classification = parse_classification(query.text(1)).value();
            record.decision_path = path_from_text(query.text(2));
            record.analyst = query.text(3);
            record.timestamp = query.text(4);
            record.notes = query.text(5);
            records.push_back(std::move(record));
        }
        return records;
    }

    std::string utc_timestamp_now()
    {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm parts{};
        gmtime_r(&now, &parts);
        char buffer[32];
        std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &parts);
        return buffer;
    }

} // namespace annoprov
