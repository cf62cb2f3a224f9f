#include "soundvi/state_set.hpp"

#include <algorithm>
#include <cassert>

namespace soundvi {

StateSet::StateSet(std::size_t size, std::initializer_list<StateIndex> members) : bits_(size, false) {
    for (auto s : members) {
        bits_.at(s) = true;
    }
}

StateSet StateSet::from_indices(std::size_t size, std::vector<StateIndex> const& members) {
    StateSet result(size);
    for (auto s : members) {
        result.bits_.at(s) = true;
    }
    return result;
}

std::size_t StateSet::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<StateIndex> StateSet::indices() const {
    std::vector<StateIndex> result;
    for (StateIndex s = 0; s < bits_.size(); ++s) {
        if (bits_[s]) {
            result.push_back(s);
        }
    }
    return result;
}

StateSet StateSet::complement() const {
    StateSet result(*this);
    result.bits_.flip();
    return result;
}

StateSet& StateSet::operator|=(StateSet const& other) {
    assert(size() == other.size());
    for (StateIndex s = 0; s < bits_.size(); ++s) {
        if (other.bits_[s]) {
            bits_[s] = true;
        }
    }
    return *this;
}

StateSet& StateSet::operator&=(StateSet const& other) {
    assert(size() == other.size());
    for (StateIndex s = 0; s < bits_.size(); ++s) {
        if (!other.bits_[s]) {
            bits_[s] = false;
        }
    }
    return *this;
}

bool StateSet::intersects(StateSet const& other) const {
    assert(size() == other.size());
    for (StateIndex s = 0; s < bits_.size(); ++s) {
        if (bits_[s] && other.bits_[s]) {
            return true;
        }
    }
    return false;
}

bool StateSet::is_subset_of(StateSet const& other) const {
    assert(size() == other.size());
    for (StateIndex s = 0; s < bits_.size(); ++s) {
        if (bits_[s] && !other.bits_[s]) {
            return false;
        }
    }
    return true;
}

}  // namespace soundvi
