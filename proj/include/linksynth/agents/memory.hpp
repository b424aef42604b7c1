#pragma once

#include <algorithm>
#include <mutex>
#include <string>
#include <vector>

namespace linksynth::agents {

struct Exemplar {
  std::string intent;
  std::string linkage_json;
  double score = 0.0;
};

/// Bounded store of earlier successful designs for analogical prompting.
/// Entries are never edited. Once full, a newcomer only displaces the worst
/// entry when it scores strictly better.
class ExemplarMemory {
 public:
  explicit ExemplarMemory(std::size_t capacity = 5) : capacity_(capacity) {}

  bool add(Exemplar e) {
    std::lock_guard lock(mu_);
    if (capacity_ == 0) return false;
    if (items_.size() < capacity_) {
      items_.push_back(std::move(e));
      return true;
    }
    auto worst = std::max_element(items_.begin(), items_.end(),
                                  [](const Exemplar &a, const Exemplar &b) { return a.score < b.score; });
    if (!(e.score < worst->score)) return false;
    items_.erase(worst);
    items_.push_back(std::move(e));
    return true;
  }

  std::vector<Exemplar> items() const {
    std::lock_guard lock(mu_);
    return items_;
  }
  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::vector<Exemplar> items_;
};

}  // namespace linksynth::agents
