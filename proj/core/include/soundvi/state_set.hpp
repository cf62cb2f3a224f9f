#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace soundvi {

using StateIndex = std::size_t;

/// Fixed-size membership set over dense state indices.
class StateSet {
   public:
    StateSet() = default;
    explicit StateSet(std::size_t size, bool value = false) : bits_(size, value) {}
    StateSet(std::size_t size, std::initializer_list<StateIndex> members);

    static StateSet from_indices(std::size_t size, std::vector<StateIndex> const& members);

    std::size_t size() const noexcept { return bits_.size(); }
    bool test(StateIndex s) const { return bits_[s]; }
    bool operator[](StateIndex s) const { return bits_[s]; }
    void set(StateIndex s, bool value = true) { bits_[s] = value; }
    void reset(StateIndex s) { bits_[s] = false; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
    bool all() const { return count() == size(); }

    /// Members in increasing order.
    std::vector<StateIndex> indices() const;

    StateSet complement() const;
    StateSet& operator|=(StateSet const& other);
    StateSet& operator&=(StateSet const& other);
    friend StateSet operator|(StateSet lhs, StateSet const& rhs) { return lhs |= rhs; }
    friend StateSet operator&(StateSet lhs, StateSet const& rhs) { return lhs &= rhs; }
    bool intersects(StateSet const& other) const;
    bool is_subset_of(StateSet const& other) const;

    friend bool operator==(StateSet const&, StateSet const&) = default;

   private:
    std::vector<bool> bits_;
};

}  // namespace soundvi
