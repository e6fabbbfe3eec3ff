#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqa/coref.hpp"
#include "sqa/engine.hpp"
#include "sqa/random.hpp"
#include "sqa/relation.hpp"

namespace sqa {

// Closed interval on the integer lattice.
struct Interval {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Axis 0 runs left to right, axis 1 bottom to top, axis 2 from the viewer
// into the scene (larger = further behind).
struct Box {
    std::array<Interval, 3> axes;
    friend bool operator==(const Box&, const Box&) = default;

    static Box cube(std::int64_t lo, std::int64_t hi) { return Box{{{{lo, hi}, {lo, hi}, {lo, hi}}}}; }
};

bool box_contains(const Box& outer, const Box& inner);
bool box_strictly_contains(const Box& outer, const Box& inner);
bool interiors_overlap(const Box& a, const Box& b);
bool boxes_intersect(const Box& a, const Box& b);
// Chebyshev distance between the two boxes (0 when they touch or overlap).
std::int64_t box_gap(const Box& a, const Box& b);

// Relation `r` evaluated directly on the boxes.
bool box_relation(const Box& a, RelationType r, const Box& b, std::int64_t near_threshold, std::int64_t far_threshold);

struct SceneEntity {
    EntityId id = 0;
    Attributes attributes;
    Box box;
    std::optional<EntityId> parent;
};

class SceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Scene {
    std::vector<SceneEntity> entities;
    std::int64_t near_threshold = 2;
    std::int64_t far_threshold = 6;

    std::size_t size() const { return entities.size(); }
    std::vector<EntityId> children(std::optional<EntityId> parent) const;
    bool is_container(EntityId id) const;
    // Throws SceneError describing the first violated invariant.
    void validate() const;
};

bool geometric_truth(const Scene& scene, EntityId a, RelationType r, EntityId b);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IntRange {
    std::int64_t min = 0;
    std::int64_t max = 0;
    friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct GenConfig {
    std::uint64_t seed = 42;

    IntRange blocks{2, 3};
    IntRange objects_per_block{2, 4};
    IntRange block_extent{12, 18};
    IntRange object_extent{1, 4};
    IntRange block_gap{0, 8};

    std::vector<std::string> sizes{"small", "medium", "big"};
    std::vector<std::string> colors{"black", "blue", "green", "grey", "red", "yellow", "white"};
    std::vector<std::string> shapes{"circle", "square", "triangle", "star"};

    std::int64_t near_threshold = 2;
    std::int64_t far_threshold = 6;

    double density = 0.15;                 // extra sibling truths stated beyond the spanning trees
    double tangent_probability = 0.2;      // object touches its block's boundary (TPP)
    double group_probability = 0.3;        // same-shape objects introduced as "two circles"
    double conjunction_probability = 0.3;  // same-subject clauses merged with "and"
    double pronoun_probability = 0.15;     // "It" for the entity named last

    std::size_t yn_per_story = 5;
    std::size_t fr_per_story = 3;
    std::size_t quantified_per_story = 1;
    IntRange hops{1, 8};
    std::vector<RelationType> candidates{
        RelationType::DC,   RelationType::EC,    RelationType::TPP,    RelationType::NTPP,  RelationType::TPPI,
        RelationType::NTPPI, RelationType::LEFT, RelationType::RIGHT,  RelationType::BELOW, RelationType::ABOVE,
        RelationType::BEHIND, RelationType::FRONT, RelationType::FAR,  RelationType::NEAR,
    };

    std::size_t placement_attempts = 200;

    // Throws ConfigError.
    void validate() const;

    friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

Scene generate_scene(const GenConfig& config);
Scene generate_scene(const GenConfig& config, Rng& rng);

}  // namespace sqa
