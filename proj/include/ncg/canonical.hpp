#pragma once

// Canonical labeling of purchase digraphs (arc i -> j iff j in s_i), used for
// isomorphism-aware cycle detection and for symmetry reduction in the
// exhaustive enumerations. Colour refinement plus individualization with a
// brute-force search over the remaining ties; intended for n <= 12.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ncg/detail/bits.hpp"

namespace ncg {

struct CanonicalForm {
  int n = 0;
  std::vector<detail::Mask> out;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

struct CanonicalFormHash {
  std::size_t operator()(const CanonicalForm& c) const noexcept {
    std::uint64_t h = 14695981039346656037ull ^ static_cast<std::uint64_t>(c.n);
    for (auto m : c.out) {
      h ^= m + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

namespace detail {

class Canonicalizer {
 public:
  explicit Canonicalizer(std::span<const Mask> out)
      : n_(static_cast<int>(out.size())), out_(out.begin(), out.end()), in_(in_masks(out)) {}

  CanonicalForm run() {
    std::vector<int> colors(static_cast<std::size_t>(n_), 0);
    refine(colors);
    search(colors);
    return best_;
  }

 private:
  static int count_colors(const std::vector<int>& colors) {
    return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
  }

  void refine(std::vector<int>& colors) const {
    int current = count_colors(colors);
    while (true) {
      std::vector<std::vector<int>> sigs(static_cast<std::size_t>(n_));
      for (int v = 0; v < n_; ++v) {
        auto& sig = sigs[static_cast<std::size_t>(v)];
        sig.push_back(colors[static_cast<std::size_t>(v)]);
        std::vector<int> outs, ins;
        for_each_bit(out_[static_cast<std::size_t>(v)], [&](int j) { outs.push_back(colors[static_cast<std::size_t>(j)]); });
        for_each_bit(in_[static_cast<std::size_t>(v)], [&](int j) { ins.push_back(colors[static_cast<std::size_t>(j)]); });
        std::sort(outs.begin(), outs.end());
        std::sort(ins.begin(), ins.end());
        sig.push_back(static_cast<int>(outs.size()));
        sig.insert(sig.end(), outs.begin(), outs.end());
        sig.push_back(-1);
        sig.insert(sig.end(), ins.begin(), ins.end());
      }
      std::vector<std::vector<int>> distinct = sigs;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (int v = 0; v < n_; ++v)
        colors[static_cast<std::size_t>(v)] = static_cast<int>(
            std::lower_bound(distinct.begin(), distinct.end(), sigs[static_cast<std::size_t>(v)]) -
            distinct.begin());
      const int next = static_cast<int>(distinct.size());
      if (next == current) return;
      current = next;
    }
  }

  [[nodiscard]] bool twins(int u, int v) const {
    const Mask mu = ~(bit(u) | bit(v));
    if (((out_[static_cast<std::size_t>(u)] ^ out_[static_cast<std::size_t>(v)]) & mu) != 0) return false;
    if (((in_[static_cast<std::size_t>(u)] ^ in_[static_cast<std::size_t>(v)]) & mu) != 0) return false;
    const bool uv = (out_[static_cast<std::size_t>(u)] >> v) & 1;
    const bool vu = (out_[static_cast<std::size_t>(v)] >> u) & 1;
    return uv == vu;
  }

  void search(const std::vector<int>& colors) {
    // First non-singleton cell in colour order.
    std::vector<int> cell_size(static_cast<std::size_t>(n_), 0);
    for (int c : colors) ++cell_size[static_cast<std::size_t>(c)];
    int target = -1;
    for (int c = 0; c < n_; ++c)
      if (cell_size[static_cast<std::size_t>(c)] > 1) {
        target = c;
        break;
      }
    if (target < 0) {
      emit_leaf(colors);
      return;
    }
    std::vector<int> cell;
    for (int v = 0; v < n_; ++v)
      if (colors[static_cast<std::size_t>(v)] == target) cell.push_back(v);
    std::vector<int> representatives;
    for (int v : cell) {
      bool covered = false;
      for (int r : representatives)
        if (twins(r, v)) {
          covered = true;
          break;
        }
      if (!covered) representatives.push_back(v);
    }
    for (int v : representatives) {
      std::vector<int> child(colors.size());
      for (int u = 0; u < n_; ++u) child[static_cast<std::size_t>(u)] = 2 * colors[static_cast<std::size_t>(u)] + 1;
      child[static_cast<std::size_t>(v)] = 2 * target;
      compress(child);
      refine(child);
      search(child);
    }
  }

  static void compress(std::vector<int>& colors) {
    std::vector<int> distinct = colors;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (auto& c : colors)
      c = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), c) - distinct.begin());
  }

  void emit_leaf(const std::vector<int>& perm) {
    CanonicalForm form{n_, std::vector<Mask>(static_cast<std::size_t>(n_), 0)};
    for (int i = 0; i < n_; ++i) {
      Mask m = 0;
      for_each_bit(out_[static_cast<std::size_t>(i)], [&](int j) { m |= bit(perm[static_cast<std::size_t>(j)]); });
      form.out[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = m;
    }
    if (!have_best_ || form < best_) {
      best_ = std::move(form);
      have_best_ = true;
    }
  }

  int n_;
  std::vector<Mask> out_;
  std::vector<Mask> in_;
  CanonicalForm best_;
  bool have_best_ = false;
};

}  // namespace detail

inline CanonicalForm canonical_form(std::span<const detail::Mask> out) {
  return detail::Canonicalizer(out).run();
}

inline CanonicalForm canonical_form(const StrategyProfile& s) {
  const auto masks = detail::to_masks(s);
  return canonical_form(masks);
}

/// Exact (labelled) state key.
inline CanonicalForm exact_form(const StrategyProfile& s) {
  return CanonicalForm{s.n(), detail::to_masks(s)};
}

}  // namespace ncg
