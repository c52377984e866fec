#ifndef GRAPHON_BITMATRIX_HPP
#define GRAPHON_BITMATRIX_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace graphon {

/// Square boolean matrix stored as packed 64-bit rows. Used for support
/// graphs and sampled adjacency, where breadth-first frontiers are expanded
/// a word at a time.
class BitMatrix {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitMatrix() = default;
    explicit BitMatrix(std::size_t n) : n_(n), words_((n + kWordBits - 1) / kWordBits), bits_(n * words_, 0) {}

    std::size_t size() const { return n_; }
    std::size_t words_per_row() const { return words_; }

    bool test(std::size_t i, std::size_t j) const {
        return (bits_[i * words_ + j / kWordBits] >> (j % kWordBits)) & 1U;
    }
    void set(std::size_t i, std::size_t j, bool value = true) {
        Word& w = bits_[i * words_ + j / kWordBits];
        const Word mask = Word{1} << (j % kWordBits);
        w = value ? (w | mask) : (w & ~mask);
    }
    /// Sets (i,j) and (j,i).
    void set_symmetric(std::size_t i, std::size_t j, bool value = true) {
        set(i, j, value);
        set(j, i, value);
    }

    std::span<const Word> row(std::size_t i) const { return {bits_.data() + i * words_, words_}; }
    std::span<Word> row(std::size_t i) { return {bits_.data() + i * words_, words_}; }

    std::size_t row_count(std::size_t i) const {
        std::size_t c = 0;
        for (Word w : row(i)) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (Word w : bits_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool is_symmetric() const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (test(i, j) != test(j, i)) return false;
        return true;
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<Word> bits_;
};

/// Breadth-first hop counts from `source` over the rows of `adj`.
/// Entry `source` is 0; unreachable vertices get -1.
inline std::vector<int> bfs_hops(const BitMatrix& adj, std::size_t source) {
    const std::size_t n = adj.size();
    const std::size_t words = adj.words_per_row();
    std::vector<int> hops(n, -1);
    std::vector<BitMatrix::Word> visited(words, 0), frontier(words, 0), next(words, 0);
    auto mark = [](std::vector<BitMatrix::Word>& v, std::size_t j) {
        v[j / BitMatrix::kWordBits] |= BitMatrix::Word{1} << (j % BitMatrix::kWordBits);
    };
    mark(visited, source);
    mark(frontier, source);
    hops[source] = 0;
    for (int level = 1;; ++level) {
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t w = 0; w < words; ++w) {
            BitMatrix::Word bits = frontier[w];
            while (bits != 0) {
                const std::size_t u = w * BitMatrix::kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
                bits &= bits - 1;
                auto r = adj.row(u);
                for (std::size_t k = 0; k < words; ++k) next[k] |= r[k];
            }
        }
        bool any = false;
        for (std::size_t w = 0; w < words; ++w) {
            next[w] &= ~visited[w];
            visited[w] |= next[w];
            any = any || next[w] != 0;
            BitMatrix::Word bits = next[w];
            while (bits != 0) {
                hops[w * BitMatrix::kWordBits + static_cast<std::size_t>(std::countr_zero(bits))] = level;
                bits &= bits - 1;
            }
        }
        if (!any) break;
        frontier.swap(next);
    }
    return hops;
}

}  // namespace graphon

#endif  // GRAPHON_BITMATRIX_HPP
