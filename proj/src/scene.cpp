#include "sqa/scene.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace sqa {

bool box_contains(const Box& outer, const Box& inner) {
    for (std::size_t k = 0; k < 3; ++k)
        if (inner.axes[k].lo < outer.axes[k].lo || inner.axes[k].hi > outer.axes[k].hi) return false;
    return true;
}

bool box_strictly_contains(const Box& outer, const Box& inner) {
    for (std::size_t k = 0; k < 3; ++k)
        if (inner.axes[k].lo <= outer.axes[k].lo || inner.axes[k].hi >= outer.axes[k].hi) return false;
    return true;
}

bool interiors_overlap(const Box& a, const Box& b) {
    for (std::size_t k = 0; k < 3; ++k)
        if (a.axes[k].lo >= b.axes[k].hi || b.axes[k].lo >= a.axes[k].hi) return false;
    return true;
}

bool boxes_intersect(const Box& a, const Box& b) {
    for (std::size_t k = 0; k < 3; ++k)
        if (a.axes[k].lo > b.axes[k].hi || b.axes[k].lo > a.axes[k].hi) return false;
    return true;
}

std::int64_t box_gap(const Box& a, const Box& b) {
    std::int64_t gap = 0;
    for (std::size_t k = 0; k < 3; ++k)
        gap = std::max({gap, b.axes[k].lo - a.axes[k].hi, a.axes[k].lo - b.axes[k].hi});
    return gap;
}

namespace {

bool before(const Box& a, const Box& b, std::size_t axis) { return a.axes[axis].hi < b.axes[axis].lo; }

bool tangential_part(const Box& inner, const Box& outer) {
    return box_contains(outer, inner) && inner != outer && !box_strictly_contains(outer, inner);
}

}  // namespace

bool box_relation(const Box& a, RelationType r, const Box& b, std::int64_t near_threshold, std::int64_t far_threshold) {
    switch (r) {
        case RelationType::LEFT: return before(a, b, 0);
        case RelationType::RIGHT: return before(b, a, 0);
        case RelationType::BELOW: return before(a, b, 1);
        case RelationType::ABOVE: return before(b, a, 1);
        case RelationType::FRONT: return before(a, b, 2);
        case RelationType::BEHIND: return before(b, a, 2);
        case RelationType::DC: return !boxes_intersect(a, b);
        case RelationType::EC: return boxes_intersect(a, b) && !interiors_overlap(a, b);
        case RelationType::PO:
            return interiors_overlap(a, b) && !box_contains(a, b) && !box_contains(b, a);
        case RelationType::EQ: return a == b;
        case RelationType::TPP: return tangential_part(a, b);
        case RelationType::TPPI: return tangential_part(b, a);
        case RelationType::NTPP: return box_strictly_contains(b, a);
        case RelationType::NTPPI: return box_strictly_contains(a, b);
        case RelationType::NEAR: return !boxes_intersect(a, b) && box_gap(a, b) <= near_threshold;
        case RelationType::FAR: return box_gap(a, b) >= far_threshold;
    }
    return false;
}

bool geometric_truth(const Scene& scene, EntityId a, RelationType r, EntityId b) {
    if (a == b || a >= scene.size() || b >= scene.size()) return false;
    return box_relation(scene.entities[a].box, r, scene.entities[b].box, scene.near_threshold, scene.far_threshold);
}

std::vector<EntityId> Scene::children(std::optional<EntityId> parent) const {
    std::vector<EntityId> out;
    for (const auto& e : entities)
        if (e.parent == parent) out.push_back(e.id);
    return out;
}

bool Scene::is_container(EntityId id) const {
    return std::any_of(entities.begin(), entities.end(), [id](const SceneEntity& e) { return e.parent == id; });
}

void Scene::validate() const {
    if (near_threshold >= far_threshold) throw SceneError("near threshold must be below far threshold");
    for (std::size_t i = 0; i < entities.size(); ++i) {
        const auto& e = entities[i];
        if (e.id != i) throw SceneError("entity ids must be dense and ordered");
        for (const auto& ax : e.box.axes)
            if (ax.lo > ax.hi) throw SceneError("entity " + std::to_string(i) + " has an inverted interval");
        if (e.parent) {
            if (*e.parent >= entities.size() || *e.parent == e.id)
                throw SceneError("entity " + std::to_string(i) + " has an invalid parent");
            if (!box_contains(entities[*e.parent].box, e.box))
                throw SceneError("entity " + std::to_string(i) + " is not inside its parent");
        }
    }
    for (std::size_t i = 0; i < entities.size(); ++i)
        for (std::size_t j = i + 1; j < entities.size(); ++j)
            if (entities[i].parent == entities[j].parent && interiors_overlap(entities[i].box, entities[j].box))
                throw SceneError("siblings " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
}

// ---------------------------------------------------------------------------
// Config

namespace {

void check_range(const IntRange& r, const char* name, std::int64_t floor) {
    if (r.min > r.max) throw ConfigError(std::string(name) + ": empty range");
    if (r.min < floor) throw ConfigError(std::string(name) + ": minimum below " + std::to_string(floor));
}

}  // namespace

void GenConfig::validate() const {
    check_range(blocks, "blocks", 1);
    check_range(objects_per_block, "objects_per_block", 0);
    check_range(block_extent, "block_extent", 3);
    check_range(object_extent, "object_extent", 1);
    check_range(block_gap, "block_gap", 0);
    check_range(hops, "hops", 1);
    if (blocks.max > 26) throw ConfigError("blocks: at most 26 blocks can be lettered");
    if (object_extent.max > block_extent.min - 2)
        throw ConfigError("object_extent must leave room inside the smallest block");
    if (near_threshold < 1) throw ConfigError("near_threshold must be positive");
    if (near_threshold >= far_threshold) throw ConfigError("near_threshold must be below far_threshold");
    if (sizes.empty() || colors.empty() || shapes.empty()) throw ConfigError("attribute pools must be non-empty");
    auto combos = static_cast<std::int64_t>(sizes.size() * colors.size() * shapes.size());
    if (combos < blocks.max * objects_per_block.max)
        throw ConfigError("attribute pools too small for unique object descriptions");
    for (double p : {density, tangent_probability, group_probability, conjunction_probability, pronoun_probability})
        if (p < 0.0 || p > 1.0) throw ConfigError("probabilities must lie in [0, 1]");
    if (candidates.empty()) throw ConfigError("candidates must be non-empty");
    if (placement_attempts == 0) throw ConfigError("placement_attempts must be positive");
}

// ---------------------------------------------------------------------------
// Scene sampling

namespace {

Box sample_object(const Box& block, const GenConfig& config, Rng& rng) {
    Box b;
    const bool tangent = rng.chance(config.tangent_probability);
    const std::size_t touch_axis = rng.index(3);
    const bool touch_low = rng.chance(0.5);
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& outer = block.axes[k];
        auto extent = rng.uniform(config.object_extent.min, config.object_extent.max);
        if (tangent && k == touch_axis) {
            b.axes[k] = touch_low ? Interval{outer.lo, outer.lo + extent} : Interval{outer.hi - extent, outer.hi};
        } else {
            // strictly inside on this axis
            auto lo = rng.uniform(outer.lo + 1, outer.hi - 1 - extent);
            b.axes[k] = {lo, lo + extent};
        }
    }
    return b;
}

}  // namespace

Scene generate_scene(const GenConfig& config) {
    Rng rng(config.seed);
    return generate_scene(config, rng);
}

Scene generate_scene(const GenConfig& config, Rng& rng) {
    config.validate();
    Scene scene;
    scene.near_threshold = config.near_threshold;
    scene.far_threshold = config.far_threshold;

    const auto block_count = static_cast<std::size_t>(rng.uniform(config.blocks.min, config.blocks.max));
    std::set<std::tuple<std::string, std::string, std::string>> used;

    std::int64_t x = 0;
    for (std::size_t bi = 0; bi < block_count; ++bi) {
        Box block;
        auto width = rng.uniform(config.block_extent.min, config.block_extent.max);
        block.axes[0] = {x, x + width};
        for (std::size_t k = 1; k < 3; ++k) {
            auto lo = rng.uniform(0, 4);
            block.axes[k] = {lo, lo + rng.uniform(config.block_extent.min, config.block_extent.max)};
        }
        x += width + rng.uniform(config.block_gap.min, config.block_gap.max);

        SceneEntity be;
        be.id = static_cast<EntityId>(scene.entities.size());
        be.attributes.noun = "block";
        be.attributes.letter = std::string(1, static_cast<char>('a' + bi));
        be.box = block;
        const auto block_id = be.id;
        scene.entities.push_back(be);

        const auto objects = static_cast<std::size_t>(rng.uniform(config.objects_per_block.min, config.objects_per_block.max));
        std::vector<Box> placed;
        for (std::size_t oi = 0; oi < objects; ++oi) {
            std::optional<Box> found;
            for (std::size_t attempt = 0; attempt < config.placement_attempts && !found; ++attempt) {
                auto cand = sample_object(block, config, rng);
                bool clash = std::any_of(placed.begin(), placed.end(),
                                         [&](const Box& p) { return interiors_overlap(p, cand); });
                if (!clash) found = cand;
            }
            if (!found)
                throw ConfigError("could not place object " + std::to_string(oi) + " in block " +
                                  std::to_string(bi) + " after " + std::to_string(config.placement_attempts) +
                                  " attempts");
            placed.push_back(*found);

            SceneEntity oe;
            oe.id = static_cast<EntityId>(scene.entities.size());
            oe.box = *found;
            oe.parent = block_id;
            for (std::size_t tries = 0;; ++tries) {
                auto key = std::make_tuple(rng.pick(config.sizes), rng.pick(config.colors), rng.pick(config.shapes));
                if (used.insert(key).second) {
                    std::tie(oe.attributes.size, oe.attributes.color, oe.attributes.noun) = key;
                    break;
                }
                if (tries > 10000) throw ConfigError("could not draw a unique object description");
            }
            scene.entities.push_back(oe);
        }
    }
    scene.validate();
    return scene;
}

}  // namespace sqa
