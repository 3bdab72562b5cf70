#pragma once

#include <stdexcept>

namespace annoprov
{
    struct Error : public std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // lookup of an id, label or accession that the store does not know
    struct NotFound : public Error
    {
        using Error::Error;
    };

    // request contradicts data already recorded (e.g. same release label, different date)
    struct Conflict : public Error
    {
        using Error::Error;
    };

    struct InvalidArgument : public Error
    {
        using Error::Error;
    };

    // underlying storage failure or a store file this build cannot read
    struct StoreError : public Error
    {
        using Error::Error;
    };

    // operation deliberately declined (size caps, lock held by another process)
    struct Refused : public Error
    {
        using Error::Error;
    };

} // namespace annoprov
