#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mp {

// ---------------------------------------------------------------- errors

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line = 0;
    ParseError(int line_, const std::string& reason)
        : Error("parse error at line " + std::to_string(line_) + ": " + reason), line(line_) {}
};

struct ValidationError : Error {
    using Error::Error;
};

// Infeasible problem setup (grid too small, init failed, ...): CLI exit code 2.
struct InfeasibleError : Error {
    using Error::Error;
};

struct GridTooSmall : InfeasibleError {
    using InfeasibleError::InfeasibleError;
};

struct InitFailure : InfeasibleError {
    using InfeasibleError::InfeasibleError;
};

struct DegenerateSystem : InfeasibleError {
    using InfeasibleError::InfeasibleError;
};

struct InfeasibleSpec : InfeasibleError {
    using InfeasibleError::InfeasibleError;
};

struct StaleCache : Error {
    using Error::Error;
};

// ---------------------------------------------------------------- geometry

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;
};

// Axis-aligned rectangle, closed bounds.
struct Rect {
    double lx = 0.0, ly = 0.0, ux = 0.0, uy = 0.0;

    double width() const { return ux - lx; }
    double height() const { return uy - ly; }
    double area() const { return width() * height(); }

    // Open-interval intersection: edge contact does not count.
    bool overlaps(const Rect& o) const {
        return lx < o.ux && o.lx < ux && ly < o.uy && o.ly < uy;
    }
    double overlap_area(const Rect& o) const {
        double w = std::min(ux, o.ux) - std::max(lx, o.lx);
        double h = std::min(uy, o.uy) - std::max(ly, o.ly);
        if (w <= 0.0 || h <= 0.0) return 0.0;
        return w * h;
    }
    bool contains(const Rect& o) const {
        return o.lx >= lx && o.ux <= ux && o.ly >= ly && o.uy <= uy;
    }
};

// ---------------------------------------------------------------- rng

// Deterministic stream: mt19937_64 with explicit float extraction so output
// does not depend on the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform in [0, n)
    int uniform_int(int n) { return int(uniform() * double(n)); }

    // k distinct values from [0, n), order randomized
    std::vector<int> sample_distinct(int n, int k) {
        std::vector<int> out;
        out.reserve(size_t(k));
        while (int(out.size()) < k) {
            int v = uniform_int(n);
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        }
        return out;
    }

    void shuffle_ints(std::vector<int>& v) {
        for (int i = int(v.size()) - 1; i > 0; --i) std::swap(v[size_t(i)], v[size_t(uniform_int(i + 1))]);
    }

  private:
    std::mt19937_64 gen_;
};

// ---------------------------------------------------------------- circuit model

struct Canvas {
    double width = 0.0;
    double height = 0.0;
};

enum class NodeKind : uint8_t { Macro, StdCell, FixedPad };

// N = as designed, S = rotated 180, FN = flipped about the y axis,
// FS = flipped about the x axis. Width/height never swap.
enum class Orient : uint8_t { N, S, FN, FS };

inline Vec2 orient_offset(Vec2 off, Orient o) {
    switch (o) {
        case Orient::N: return off;
        case Orient::S: return {-off.x, -off.y};
        case Orient::FN: return {-off.x, off.y};
        case Orient::FS: return {off.x, -off.y};
    }
    return off;
}

// Compose an orientation with a flip about the y axis (x negated).
inline Orient flip_y(Orient o) {
    switch (o) {
        case Orient::N: return Orient::FN;
        case Orient::FN: return Orient::N;
        case Orient::S: return Orient::FS;
        case Orient::FS: return Orient::S;
    }
    return o;
}

// Compose an orientation with a flip about the x axis (y negated).
inline Orient flip_x(Orient o) {
    switch (o) {
        case Orient::N: return Orient::FS;
        case Orient::FS: return Orient::N;
        case Orient::S: return Orient::FN;
        case Orient::FN: return Orient::S;
    }
    return o;
}

inline const char* orient_name(Orient o) {
    switch (o) {
        case Orient::N: return "N";
        case Orient::S: return "S";
        case Orient::FN: return "FN";
        case Orient::FS: return "FS";
    }
    return "N";
}

inline std::optional<Orient> orient_from_name(const std::string& s) {
    if (s == "N") return Orient::N;
    if (s == "S") return Orient::S;
    if (s == "FN") return Orient::FN;
    if (s == "FS") return Orient::FS;
    return std::nullopt;
}

struct Node {
    int id = -1;
    std::string name;
    double width = 0.0;
    double height = 0.0;
    NodeKind kind = NodeKind::StdCell;
    bool movable = true;

    double area() const { return width * height; }
};

// Pin offset (dx, dy) is measured from the owning node's center.
struct Pin {
    int node = -1;
    double dx = 0.0;
    double dy = 0.0;
};

struct Net {
    int id = -1;
    std::string name;
    std::vector<Pin> pins;
    double weight = 1.0;
};

class Netlist {
  public:
    Canvas canvas;
    std::vector<Node> nodes;
    std::vector<Net> nets;

    Netlist() = default;
    Netlist(Canvas c, std::vector<Node> ns, std::vector<Net> es)
        : canvas(c), nodes(std::move(ns)), nets(std::move(es)) {
        for (size_t i = 0; i < nodes.size(); ++i) nodes[i].id = int(i);
        for (size_t i = 0; i < nets.size(); ++i) nets[i].id = int(i);
        for (const Net& n : nets)
            for (const Pin& p : n.pins)
                if (p.node < 0 || p.node >= int(nodes.size()))
                    throw ValidationError("net " + n.name + " references unknown node index " +
                                          std::to_string(p.node));
        rebuild_index();
    }

    const std::vector<int>& nets_of(int node) const { return node_nets_[size_t(node)]; }

    int node_index(const std::string& name) const {
        auto it = name_index_.find(name);
        return it == name_index_.end() ? -1 : it->second;
    }

    size_t num_nodes() const { return nodes.size(); }
    size_t num_nets() const { return nets.size(); }

    double total_movable_area() const {
        double a = 0.0;
        for (const Node& n : nodes)
            if (n.movable) a += n.area();
        return a;
    }

    std::vector<int> macro_ids(bool movable_only = true) const {
        std::vector<int> out;
        for (const Node& n : nodes)
            if (n.kind == NodeKind::Macro && (!movable_only || n.movable)) out.push_back(n.id);
        return out;
    }

    std::vector<int> cell_ids() const {
        std::vector<int> out;
        for (const Node& n : nodes)
            if (n.kind == NodeKind::StdCell) out.push_back(n.id);
        return out;
    }

    void rebuild_index() {
        node_nets_.assign(nodes.size(), {});
        for (const Net& n : nets)
            for (const Pin& p : n.pins) {
                auto& lst = node_nets_[size_t(p.node)];
                if (lst.empty() || lst.back() != n.id) lst.push_back(n.id);
            }
        for (auto& lst : node_nets_) {
            std::sort(lst.begin(), lst.end());
            lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
        }
        name_index_.clear();
        for (const Node& n : nodes) name_index_.emplace(n.name, n.id);
    }

  private:
    std::vector<std::vector<int>> node_nets_;
    std::unordered_map<std::string, int> name_index_;
};

// Dense per-node assignment of center positions and orientations.
// Fixed nodes carry their fixed coordinates here as well.
struct Placement {
    std::vector<Vec2> pos;
    std::vector<Orient> orient;

    Placement() = default;
    explicit Placement(size_t n) : pos(n), orient(n, Orient::N) {}

    size_t size() const { return pos.size(); }
    bool covers(const Netlist& nl) const { return pos.size() == nl.num_nodes() && orient.size() == nl.num_nodes(); }
};

inline Rect node_rect(const Node& n, Vec2 center) {
    return {center.x - n.width / 2.0, center.y - n.height / 2.0,
            center.x + n.width / 2.0, center.y + n.height / 2.0};
}

inline Vec2 pin_position(const Netlist& nl, const Placement& pl, const Pin& p) {
    return pl.pos[size_t(p.node)] + orient_offset({p.dx, p.dy}, pl.orient[size_t(p.node)]);
}

// ---------------------------------------------------------------- validation

enum class ViolationKind {
    NonPositiveCanvas,
    NegativeNodeSize,
    DuplicateNodeName,
    MovableFixedPad,
    DegenerateNet,
    PinNodeOutOfRange,
    PinOffsetOutOfBounds,
    NegativeNetWeight,
    UtilizationExceedsOne,
};

struct Violation {
    ViolationKind kind;
    int node = -1;  // node or net id depending on the rule
    int net = -1;
    std::string message;
};

inline const char* violation_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::NonPositiveCanvas: return "NonPositiveCanvas";
        case ViolationKind::NegativeNodeSize: return "NegativeNodeSize";
        case ViolationKind::DuplicateNodeName: return "DuplicateNodeName";
        case ViolationKind::MovableFixedPad: return "MovableFixedPad";
        case ViolationKind::DegenerateNet: return "DegenerateNet";
        case ViolationKind::PinNodeOutOfRange: return "PinNodeOutOfRange";
        case ViolationKind::PinOffsetOutOfBounds: return "PinOffsetOutOfBounds";
        case ViolationKind::NegativeNetWeight: return "NegativeNetWeight";
        case ViolationKind::UtilizationExceedsOne: return "UtilizationExceedsOne";
    }
    return "?";
}

inline std::vector<Violation> validate(const Netlist& nl) {
    std::vector<Violation> out;
    auto add = [&](ViolationKind k, int node, int net, std::string msg) {
        out.push_back({k, node, net, std::move(msg)});
    };

    if (nl.canvas.width <= 0.0 || nl.canvas.height <= 0.0)
        add(ViolationKind::NonPositiveCanvas, -1, -1, "canvas dimensions must be positive");

    std::unordered_map<std::string, int> seen;
    for (const Node& n : nl.nodes) {
        if (n.width < 0.0 || n.height < 0.0)
            add(ViolationKind::NegativeNodeSize, n.id, -1, "node " + n.name + " has negative size");
        if (n.kind == NodeKind::FixedPad && n.movable)
            add(ViolationKind::MovableFixedPad, n.id, -1, "fixed pad " + n.name + " marked movable");
        auto [it, inserted] = seen.emplace(n.name, n.id);
        if (!inserted)
            add(ViolationKind::DuplicateNodeName, n.id, -1, "duplicate node name " + n.name);
    }

    const double tol = 1e-9;
    for (const Net& n : nl.nets) {
        if (n.pins.size() < 2)
            add(ViolationKind::DegenerateNet, -1, n.id, "net " + n.name + " has fewer than 2 pins");
        if (n.weight < 0.0)
            add(ViolationKind::NegativeNetWeight, -1, n.id, "net " + n.name + " has negative weight");
        for (const Pin& p : n.pins) {
            if (p.node < 0 || p.node >= int(nl.nodes.size())) {
                add(ViolationKind::PinNodeOutOfRange, p.node, n.id, "net " + n.name + " pin references bad node");
                continue;
            }
            const Node& owner = nl.nodes[size_t(p.node)];
            if (std::abs(p.dx) > owner.width / 2.0 + tol || std::abs(p.dy) > owner.height / 2.0 + tol)
                add(ViolationKind::PinOffsetOutOfBounds, p.node, n.id,
                    "net " + n.name + " pin offset outside node " + owner.name);
        }
    }

    double canvas_area = nl.canvas.width * nl.canvas.height;
    if (canvas_area > 0.0 && nl.total_movable_area() > canvas_area * (1.0 + 1e-9))
        add(ViolationKind::UtilizationExceedsOne, -1, -1, "total movable area exceeds canvas area");

    return out;
}

// Structural equality within a coordinate tolerance; used by round-trip checks.
inline bool netlist_equal(const Netlist& a, const Netlist& b, double tol = 1e-9) {
    auto close = [tol](double x, double y) { return std::abs(x - y) <= tol; };
    if (!close(a.canvas.width, b.canvas.width) || !close(a.canvas.height, b.canvas.height)) return false;
    if (a.nodes.size() != b.nodes.size() || a.nets.size() != b.nets.size()) return false;
    for (size_t i = 0; i < a.nodes.size(); ++i) {
        const Node& x = a.nodes[i];
        const Node& y = b.nodes[i];
        if (x.name != y.name || x.kind != y.kind || x.movable != y.movable) return false;
        if (!close(x.width, y.width) || !close(x.height, y.height)) return false;
    }
    for (size_t i = 0; i < a.nets.size(); ++i) {
        const Net& x = a.nets[i];
        const Net& y = b.nets[i];
        if (x.pins.size() != y.pins.size() || !close(x.weight, y.weight)) return false;
        for (size_t j = 0; j < x.pins.size(); ++j) {
            if (x.pins[j].node != y.pins[j].node) return false;
            if (!close(x.pins[j].dx, y.pins[j].dx) || !close(x.pins[j].dy, y.pins[j].dy)) return false;
        }
    }
    return true;
}

inline bool placement_equal(const Placement& a, const Placement& b, double tol = 1e-9) {
    if (a.pos.size() != b.pos.size() || a.orient.size() != b.orient.size()) return false;
    for (size_t i = 0; i < a.pos.size(); ++i) {
        if (std::abs(a.pos[i].x - b.pos[i].x) > tol || std::abs(a.pos[i].y - b.pos[i].y) > tol) return false;
        if (a.orient[i] != b.orient[i]) return false;
    }
    return true;
}

}  // namespace mp
