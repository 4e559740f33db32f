#pragma once

/// @file space.hpp
/// Finite sample spaces generated by primitive propositions. Worlds are
/// truth assignments over an ordered proposition list; sets of worlds are
/// 64-bit masks, which caps spaces at 64 worlds.

#include "expecta/rational.hpp"

#include <bit>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace expecta {

/// Set of world indices as a bitmask. Bit i stands for world i.
using WorldSet = std::uint64_t;

inline std::size_t world_count(WorldSet set) {
    return static_cast<std::size_t>(std::popcount(set));
}

inline bool contains(WorldSet set, std::size_t world) {
    return (set >> world) & 1u;
}

inline bool subset_of(WorldSet inner, WorldSet outer) { return (inner & ~outer) == 0; }

struct World {
    std::string id;
    /// Truth assignment: bit j holds the value of the space's j-th proposition.
    std::uint64_t assign = 0;
};

/// Ordered propositions plus a nonempty list of distinct truth assignments.
/// By default a space holds all 2^N atoms over its propositions, but any
/// nonempty subset of assignments is a valid explicit model space.
class AtomSpace {
  public:
    static constexpr std::size_t max_worlds = 64;

    AtomSpace(std::vector<std::string> props, std::vector<World> worlds)
        : props_(std::move(props)), worlds_(std::move(worlds)) {
        if (worlds_.empty()) throw ModelError("world list must be nonempty");
        if (worlds_.size() > max_worlds)
            throw CapExceededError("at most 64 worlds are supported");
        if (props_.size() > max_worlds)
            throw CapExceededError("at most 64 propositions are supported");
        std::set<std::string> prop_names(props_.begin(), props_.end());
        if (prop_names.size() != props_.size())
            throw ModelError("duplicate proposition name");
        std::set<std::string> ids;
        std::set<std::uint64_t> assigns;
        const std::uint64_t assign_mask =
            props_.size() == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << props_.size()) - 1);
        for (const auto& w : worlds_) {
            if (!ids.insert(w.id).second)
                throw ModelError("duplicate world id '" + w.id + "'");
            if (!assigns.insert(w.assign).second)
                throw ModelError("worlds '" + w.id + "' and an earlier world share a truth assignment");
            if ((w.assign & ~assign_mask) != 0)
                throw ModelError("world '" + w.id + "' assigns truth beyond the proposition list");
        }
    }

    /// The full atom space over `props`: all 2^N assignments, world ids
    /// "w0".."w{2^N-1}", world i carrying assignment i.
    static std::shared_ptr<const AtomSpace> atoms_over(std::vector<std::string> props) {
        if (props.size() > 6)
            throw CapExceededError("full atom spaces support at most 6 propositions (64 worlds)");
        const std::size_t n = std::size_t(1) << props.size();
        std::vector<World> worlds(n);
        for (std::size_t i = 0; i < n; ++i)
            worlds[i] = World{"w" + std::to_string(i), i};
        return std::make_shared<const AtomSpace>(std::move(props), std::move(worlds));
    }

    std::size_t world_count() const { return worlds_.size(); }
    std::size_t prop_count() const { return props_.size(); }
    const std::vector<std::string>& props() const { return props_; }
    const std::vector<World>& worlds() const { return worlds_; }
    const std::string& world_id(std::size_t world) const { return worlds_[world].id; }

    std::size_t prop_index(const std::string& name) const {
        for (std::size_t j = 0; j < props_.size(); ++j)
            if (props_[j] == name) return j;
        throw UnknownPropositionError("unknown proposition '" + name + "'");
    }

    bool truth(std::size_t world, std::size_t prop) const {
        return (worlds_[world].assign >> prop) & 1u;
    }

    WorldSet full_mask() const {
        return worlds_.size() == 64 ? ~WorldSet(0)
                                    : ((WorldSet(1) << worlds_.size()) - 1);
    }

    bool operator==(const AtomSpace& other) const {
        if (props_ != other.props_) return false;
        if (worlds_.size() != other.worlds_.size()) return false;
        for (std::size_t i = 0; i < worlds_.size(); ++i)
            if (worlds_[i].id != other.worlds_[i].id || worlds_[i].assign != other.worlds_[i].assign)
                return false;
        return true;
    }

  private:
    std::vector<std::string> props_;
    std::vector<World> worlds_;
};

using SpacePtr = std::shared_ptr<const AtomSpace>;

inline bool same_space(const SpacePtr& a, const SpacePtr& b) {
    return a == b || (a && b && *a == *b);
}

/// Renders a world set as "{id1,id2,...}" in world order.
inline std::string format_world_set(const AtomSpace& space, WorldSet set) {
    std::string out = "{";
    bool first = true;
    for (std::size_t w = 0; w < space.world_count(); ++w) {
        if (!contains(set, w)) continue;
        if (!first) out += ',';
        out += space.world_id(w);
        first = false;
    }
    out += '}';
    return out;
}

inline void require_same_space(const SpacePtr& a, const SpacePtr& b) {
    if (!same_space(a, b)) throw SpaceMismatchError("values live on different spaces");
}

}  // namespace expecta
