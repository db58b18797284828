#pragma once

#include <cstdint>
#include <vector>

#include "xlift/embedding.hpp"
#include "xlift/rng.hpp"

namespace xlift {

/// word2vec-style negative-sampling table over unigram^power.
class NegativeSampler {
 public:
  NegativeSampler(const std::vector<std::int64_t>& counts,
                  double power = 0.75, std::size_t table_size = 10'000'000);

  std::size_t sample(Rng& rng) const {
    return table_[rng.next_below(table_.size())];
  }

 private:
  std::vector<std::uint32_t> table_;
};

}  // namespace xlift
