#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include <sqlite3.h>

#include "annoprov/errors.hpp"

namespace annoprov::sql
{
    class Database
    {
      public:
        Database() = default;
        explicit Database(const std::string& path)
        {
            const int flags = SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX;
            if (sqlite3_open_v2(path.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
                const std::string message = db_ ? sqlite3_errmsg(db_) : "out of memory";
                sqlite3_close(db_);
                db_ = nullptr;
                throw StoreError("cannot open store " + path + ": " + message);
            }
            sqlite3_busy_timeout(db_, 5000);
        }
        ~Database() { sqlite3_close(db_); }
        Database(Database&& other) noexcept : db_{std::exchange(other.db_, nullptr)} {}
        Database& operator=(Database&& other) noexcept
        {
            std::swap(db_, other.db_);
            return *this;
        }
        Database(const Database&) = delete;
        Database& operator=(const Database&) = delete;

        sqlite3* handle() const noexcept { return db_; }

        void exec(const std::string& statement)
        {
            char* error = nullptr;
            if (sqlite3_exec(db_, statement.c_str(), nullptr, nullptr, &error) != SQLITE_OK) {
                std::string message = error ? error : "unknown error";
                sqlite3_free(error);
                throw StoreError("sql error: " + message + " in: " + statement);
            }
        }

        std::int64_t changes() const noexcept { return sqlite3_changes(db_); }
        std::int64_t last_insert_rowid() const noexcept { return sqlite3_last_insert_rowid(db_); }

      private:
        sqlite3* db_ = nullptr;
    };

    class Statement
    {
      public:
        Statement() = default;
        Statement(const Database& db, std::string_view sql) : db_{db.handle()}
        {
            if (sqlite3_prepare_v3(db_, sql.data(), static_cast<int>(sql.size()), SQLITE_PREPARE_PERSISTENT, &stmt_, nullptr) != SQLITE_OK)
                throw StoreError(std::string("cannot prepare statement: ") + sqlite3_errmsg(db_) + " in: " + std::string(sql));
        }
        ~Statement() { sqlite3_finalize(stmt_); }
        Statement(Statement&& other) noexcept : db_{other.db_}, stmt_{std::exchange(other.stmt_, nullptr)} {}
        Statement& operator=(Statement&& other) noexcept
        {
            std::swap(db_, other.db_);
            std::swap(stmt_, other.stmt_);
            return *this;
        }
        Statement(const Statement&) = delete;
        Statement& operator=(const Statement&) = delete;

        Statement& reset()
        {
            sqlite3_reset(stmt_);
            sqlite3_clear_bindings(stmt_);
            return *this;
        }

        Statement& bind(int index, std::int64_t value)
        {
            check(sqlite3_bind_int64(stmt_, index, value));
            return *this;
        }
        Statement& bind(int index, int value) { return bind(index, static_cast<std::int64_t>(value)); }
        Statement& bind(int index, std::string_view value)
        {
            check(sqlite3_bind_text(stmt_, index, value.data(), static_cast<int>(value.size()), SQLITE_TRANSIENT));
            return *this;
        }
        Statement& bind(int index, const std::string& value) { return bind(index, std::string_view(value)); }
        Statement& bind(int index, const char* value) { return bind(index, std::string_view(value)); }

        // true while a row is available
        bool step()
        {
            const int rc = sqlite3_step(stmt_);
            if (rc == SQLITE_ROW)
                return true;
            if (rc == SQLITE_DONE)
                return false;
            throw StoreError(std::string("sql step failed: ") + sqlite3_errmsg(db_));
        }

        void run()
        {
            while (step()) {
            }
            sqlite3_reset(stmt_);
        }

        std::int64_t int64(int column) const noexcept { return sqlite3_column_int64(stmt_, column); }
        bool is_null(int column) const noexcept { return sqlite3_column_type(stmt_, column) == SQLITE_NULL; }
        std::string text(int column) const
        {
            const auto* data = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, column));
            return data ? std::string(data, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, column))) : std::string{};
        }

      private:
        void check(int rc) const
        {
            if (rc != SQLITE_OK)
                throw StoreError(std::string("sql bind failed: ") + sqlite3_errmsg(db_));
        }

        sqlite3* db_ = nullptr;
        sqlite3_stmt* stmt_ = nullptr;
    };

    // BEGIN IMMEDIATE on construction, ROLLBACK unless commit() was called
    class Transaction
    {
      public:
        explicit Transaction(Database& db) : db_{db} { db_.exec("BEGIN IMMEDIATE"); }
        ~Transaction()
        {
            if (!done_) {
                try {
                    db_.exec("ROLLBACK");
                }
                catch (...) {
                }
            }
        }
        Transaction(const Transaction&) = delete;
        Transaction& operator=(const Transaction&) = delete;

        void commit()
        {
            db_.exec("COMMIT");
            done_ = true;
        }

      private:
        Database& db_;
        bool done_ = false;
    };

} // namespace annoprov::sql
