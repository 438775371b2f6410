#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace hessbound {

/// Subset of the variable indices {0, ..., n-1}, stored as a bit mask.
/// Indices are 0-based in the API; to_string() prints them 1-based.
class IndexSet {
public:
    IndexSet() = default;
    static IndexSet none(std::size_t n) { return IndexSet(n); }
    static IndexSet all(std::size_t n);
    /// {0..n-1} \ {k}
    static IndexSet all_but(std::size_t n, std::size_t k);
    static IndexSet of(std::size_t n, std::initializer_list<std::size_t> members);

    std::size_t universe() const noexcept { return n_; }
    std::size_t size() const noexcept;
    bool empty() const noexcept;
    bool is_full() const noexcept { return size() == n_; }
    bool contains(std::size_t i) const noexcept;

    void insert(std::size_t i);
    void erase(std::size_t i);

    IndexSet complement() const;
    IndexSet operator&(const IndexSet& o) const;
    IndexSet operator|(const IndexSet& o) const;

    bool subset_of(const IndexSet& o) const noexcept;
    /// Proper subset.
    bool strict_subset_of(const IndexSet& o) const noexcept { return subset_of(o) && !(*this == o); }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

    /// Members in ascending order.
    std::vector<std::size_t> members() const;
    /// "{1,3}" with 1-based indices.
    std::string to_string() const;

private:
    explicit IndexSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}
    void trim() noexcept;

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace hessbound
