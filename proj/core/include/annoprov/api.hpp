#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "annoprov/corpus_store.hpp"

namespace annoprov
{
    struct ApiResponse
    {
        int status = 200;
        nlohmann::json body;
    };

    struct ApiConfig
    {
        // {accession} is replaced by the accession shown for a point
        std::string entry_url_template = "https://www.uniprot.org/uniprot/{accession}";
        std::size_t default_search_limit = 20;
        std::size_t max_search_limit = 200;
        std::int64_t default_page_size = 50;
        std::int64_t max_page_size = 500;
        // the "latest" column of pattern listings; empty means each section's last release
        std::vector<ReleaseOrdinal> latest;
    };

    using QueryParams = std::multimap<std::string, std::string>;

    // The /v1/ JSON API, independent of any transport. Every call is serialized
    // through one mutex; only classification submissions write.
    class ApiService
    {
      public:
        explicit ApiService(CorpusStore& store, ApiConfig config = {});

        ApiResponse handle(std::string_view method, std::string_view path, const QueryParams& query, std::string_view body);

        ApiResponse search_sentences(const QueryParams& query);
        ApiResponse timeline(std::string_view id_text);
        ApiResponse patterns(std::string_view kind, const QueryParams& query);
        ApiResponse stats(std::string_view section, const QueryParams& query);
        ApiResponse post_classification(std::string_view body);
        ApiResponse list_classifications(const QueryParams& query);

        nlohmann::json timeline_json(SentenceId sentence) const;
        std::string entry_url(std::string_view accession) const;

      private:
        CorpusStore& store_;
        ApiConfig config_;
        std::mutex mutex_;
        bool patterns_ready_ = false;
    };

    ApiResponse api_error(int status, std::string_view code, std::string_view message);

    struct ServerOptions
    {
        std::string host = "127.0.0.1";
        int port = 8080; // 0 picks a free port
        std::optional<std::filesystem::path> static_dir;
    };

    // HTTP front end over ApiService.
    class HttpServer
    {
      public:
        HttpServer(ApiService& api, ServerOptions options);
        ~HttpServer();
        HttpServer(const HttpServer&) = delete;
        HttpServer& operator=(const HttpServer&) = delete;

        int bind(); // returns the bound port; Error on failure
        void listen();  // blocks until stop()
        void stop();

      private:
        struct State;
        std::unique_ptr<State> state_;
    };

} // namespace annoprov
