#include "hessbound/index_set.hpp"

#include <bit>
#include <stdexcept>

namespace hessbound {

IndexSet IndexSet::all(std::size_t n) {
    IndexSet s(n);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
}

IndexSet IndexSet::all_but(std::size_t n, std::size_t k) {
    IndexSet s = all(n);
    s.erase(k);
    return s;
}

IndexSet IndexSet::of(std::size_t n, std::initializer_list<std::size_t> members) {
    IndexSet s(n);
    for (auto i : members) s.insert(i);
    return s;
}

void IndexSet::trim() noexcept {
    if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
}

std::size_t IndexSet::size() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool IndexSet::empty() const noexcept {
    for (auto w : words_)
        if (w != 0) return false;
    return true;
}

bool IndexSet::contains(std::size_t i) const noexcept {
    return i < n_ && ((words_[i / 64] >> (i % 64)) & 1U) != 0;
}

void IndexSet::insert(std::size_t i) {
    if (i >= n_) throw std::out_of_range("index set member out of range");
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
}

void IndexSet::erase(std::size_t i) {
    if (i >= n_) throw std::out_of_range("index set member out of range");
    words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

IndexSet IndexSet::complement() const {
    IndexSet s(n_);
    for (std::size_t w = 0; w < words_.size(); ++w) s.words_[w] = ~words_[w];
    s.trim();
    return s;
}

IndexSet IndexSet::operator&(const IndexSet& o) const {
    if (o.n_ != n_) throw std::invalid_argument("index sets over different universes");
    IndexSet s(n_);
    for (std::size_t w = 0; w < words_.size(); ++w) s.words_[w] = words_[w] & o.words_[w];
    return s;
}

IndexSet IndexSet::operator|(const IndexSet& o) const {
    if (o.n_ != n_) throw std::invalid_argument("index sets over different universes");
    IndexSet s(n_);
    for (std::size_t w = 0; w < words_.size(); ++w) s.words_[w] = words_[w] | o.words_[w];
    return s;
}

bool IndexSet::subset_of(const IndexSet& o) const noexcept {
    if (o.n_ != n_) return false;
    for (std::size_t w = 0; w < words_.size(); ++w)
        if ((words_[w] & ~o.words_[w]) != 0) return false;
    return true;
}

std::vector<std::size_t> IndexSet::members() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        auto bits = words_[w];
        while (bits != 0) {
            out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

std::string IndexSet::to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto i : members()) {
        if (!first) s += ',';
        s += std::to_string(i + 1);
        first = false;
    }
    return s + "}";
}

} // namespace hessbound
