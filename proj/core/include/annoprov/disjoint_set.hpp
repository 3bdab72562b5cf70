#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace annoprov
{
    // Growable union-find over dense indices. The representative of a set is
    // always its smallest member, so identifiers derived from it are stable
    // under any merge order. Path halving keeps finds near-constant.
    class DisjointSet
    {
      public:
        DisjointSet() = default;
        explicit DisjointSet(std::size_t size) { grow(size); }

        std::size_t size() const noexcept { return parent_.size(); }

        void grow(std::size_t size)
        {
            const std::size_t old = parent_.size();
            if (size <= old)
                return;
            parent_.resize(size);
            std::iota(parent_.begin() + static_cast<std::ptrdiff_t>(old), parent_.end(), old);
        }

        std::size_t add()
        {
            parent_.push_back(parent_.size());
            return parent_.size() - 1;
        }

        std::size_t find(std::size_t x) noexcept
        {
            while (parent_[x] != x) {
                parent_[x] = parent_[parent_[x]];
                x = parent_[x];
            }
            return x;
        }

        std::size_t find(std::size_t x) const noexcept
        {
            while (parent_[x] != x)
                x = parent_[x];
            return x;
        }

        // returns the surviving representative
        std::size_t unite(std::size_t a, std::size_t b) noexcept
        {
            a = find(a);
            b = find(b);
            if (a == b)
                return a;
            if (b < a)
                std::swap(a, b);
            parent_[b] = a;
            return a;
        }

        bool same(std::size_t a, std::size_t b) noexcept { return find(a) == find(b); }

      private:
        std::vector<std::size_t> parent_;
    };

} // namespace annoprov
