#pragma once

#include <cassert>
#include <limits>
#include <span>

#include "macroplace/core.hpp"

namespace mp {

// ---------------------------------------------------------------- hpwl

inline double hpwl_net(std::span<const Vec2> pts) {
    if (pts.empty()) return 0.0;
    double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
    for (const Vec2& p : pts) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    return (max_x - min_x) + (max_y - min_y);
}

struct NetBBox {
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    int pin_count = 0;

    double half_perimeter() const { return (max_x - min_x) + (max_y - min_y); }
};

inline NetBBox net_bbox(const Netlist& nl, const Placement& pl, const Net& net) {
    NetBBox b;
    b.pin_count = int(net.pins.size());
    bool first = true;
    for (const Pin& p : net.pins) {
        Vec2 q = pin_position(nl, pl, p);
        if (first) {
            b.min_x = b.max_x = q.x;
            b.min_y = b.max_y = q.y;
            first = false;
        } else {
            b.min_x = std::min(b.min_x, q.x);
            b.max_x = std::max(b.max_x, q.x);
            b.min_y = std::min(b.min_y, q.y);
            b.max_y = std::max(b.max_y, q.y);
        }
    }
    return b;
}

// Nets with fewer than 2 pins contribute nothing.
inline double net_hpwl_contribution(const Net& net, const NetBBox& b) {
    if (net.pins.size() < 2) return 0.0;
    return net.weight * b.half_perimeter();
}

inline double hpwl_total(const Netlist& nl, const Placement& pl) {
    double sum = 0.0;
    for (const Net& net : nl.nets) sum += net_hpwl_contribution(net, net_bbox(nl, pl, net));
    return sum;
}

// Per-net bounding-box cache with transactional updates. One transaction may
// be open at a time: apply() recomputes the nets incident to the moved nodes
// from the already-mutated placement and returns the signed HPWL change;
// commit() keeps it, revert() restores boxes and total.
class HpwlCache {
  public:
    void init(const Netlist& nl, const Placement& pl) {
        nl_ = &nl;
        boxes_.resize(nl.num_nets());
        total_ = 0.0;
        for (const Net& net : nl.nets) {
            boxes_[size_t(net.id)] = net_bbox(nl, pl, net);
            total_ += net_hpwl_contribution(net, boxes_[size_t(net.id)]);
        }
        stamp_.assign(nl.num_nets(), 0);
        stamp_gen_ = 0;
        saved_.clear();
    }

    double total() const { return total_; }
    const NetBBox& box(int net) const { return boxes_[size_t(net)]; }

    double apply(const Placement& after, std::span<const int> moved_nodes) {
        assert(saved_.empty() && "one pending transaction at a time");
        saved_total_ = total_;
        ++stamp_gen_;
        for (int node : moved_nodes) {
            for (int net_id : nl_->nets_of(node)) {
                if (stamp_[size_t(net_id)] == stamp_gen_) continue;
                stamp_[size_t(net_id)] = stamp_gen_;
                const Net& net = nl_->nets[size_t(net_id)];
                saved_.emplace_back(net_id, boxes_[size_t(net_id)]);
                total_ -= net_hpwl_contribution(net, boxes_[size_t(net_id)]);
                boxes_[size_t(net_id)] = net_bbox(*nl_, after, net);
                total_ += net_hpwl_contribution(net, boxes_[size_t(net_id)]);
            }
        }
        return total_ - saved_total_;
    }

    void commit() { saved_.clear(); }

    void revert() {
        for (auto it = saved_.rbegin(); it != saved_.rend(); ++it) boxes_[size_t(it->first)] = it->second;
        total_ = saved_total_;
        saved_.clear();
    }

    std::span<const std::pair<int, NetBBox>> pending() const { return saved_; }

    // Full-recompute consistency check; throws StaleCache on mismatch.
    void check_consistent(const Placement& pl, double rel_tol = 1e-6) const {
        double full = hpwl_total(*nl_, pl);
        double scale = std::max(1.0, std::abs(full));
        if (std::abs(full - total_) > rel_tol * scale)
            throw StaleCache("cached HPWL " + std::to_string(total_) + " vs full " + std::to_string(full));
    }

    void resync(const Placement& pl) { init(*nl_, pl); }

  private:
    const Netlist* nl_ = nullptr;
    std::vector<NetBBox> boxes_;
    std::vector<std::pair<int, NetBBox>> saved_;
    std::vector<uint32_t> stamp_;
    uint32_t stamp_gen_ = 0;
    double total_ = 0.0;
    double saved_total_ = 0.0;
};

// Single-move convenience wrapper: placement must already hold the new
// position; returns the signed change and leaves the cache committed.
inline double hpwl_delta(HpwlCache& cache, const Placement& after, int moved_node) {
    int nodes[1] = {moved_node};
    double d = cache.apply(after, nodes);
    cache.commit();
    return d;
}

// ---------------------------------------------------------------- grids

struct GridSpec {
    int nx = 32;
    int ny = 32;
    double target_util = 1.0;

    int bins() const { return nx * ny; }
};

namespace detail {

// Calls f(bin_x, bin_y, overlap_area) for every bin the rect (clipped to the
// canvas) overlaps.
template <class F>
void for_each_bin_overlap(const Canvas& canvas, const GridSpec& g, const Rect& r, F&& f) {
    double lx = std::max(r.lx, 0.0), ux = std::min(r.ux, canvas.width);
    double ly = std::max(r.ly, 0.0), uy = std::min(r.uy, canvas.height);
    if (ux <= lx || uy <= ly) return;
    double bw = canvas.width / g.nx, bh = canvas.height / g.ny;
    int i0 = std::clamp(int(lx / bw), 0, g.nx - 1);
    int i1 = std::clamp(int(ux / bw), 0, g.nx - 1);
    int j0 = std::clamp(int(ly / bh), 0, g.ny - 1);
    int j1 = std::clamp(int(uy / bh), 0, g.ny - 1);
    for (int i = i0; i <= i1; ++i) {
        double ox = std::min(ux, (i + 1) * bw) - std::max(lx, i * bw);
        if (ox <= 0.0) continue;
        for (int j = j0; j <= j1; ++j) {
            double oy = std::min(uy, (j + 1) * bh) - std::max(ly, j * bh);
            if (oy <= 0.0) continue;
            f(i, j, ox * oy);
        }
    }
}

// Per-axis fraction of a 1-D interval [a0, a1] (clipped to [0, extent])
// falling into bin i; a degenerate interval puts everything into the bin
// containing its clamped coordinate.
struct AxisSpread {
    int i0 = 0, i1 = 0;
    double lo = 0.0, len = 0.0;  // len == 0 marks the degenerate case
    double bin = 1.0;

    AxisSpread(double a0, double a1, double extent, int nbins) {
        bin = extent / nbins;
        double c0 = std::clamp(a0, 0.0, extent);
        double c1 = std::clamp(a1, 0.0, extent);
        if (c1 > c0) {
            lo = c0;
            len = c1 - c0;
            i0 = std::clamp(int(c0 / bin), 0, nbins - 1);
            i1 = std::clamp(int(c1 / bin), 0, nbins - 1);
        } else {
            lo = c0;
            len = 0.0;
            i0 = i1 = std::clamp(int(c0 / bin), 0, nbins - 1);
        }
    }

    double frac(int i) const {
        if (len == 0.0) return i == i0 ? 1.0 : 0.0;
        double o = std::min(lo + len, (i + 1) * bin) - std::max(lo, i * bin);
        return std::max(o, 0.0) / len;
    }
};

// Distributes `amount` over the bins covered by the net bounding box,
// proportionally to per-axis overlap, so the whole amount lands on the grid.
template <class F>
void spread_net_demand(const Canvas& canvas, const GridSpec& g, const NetBBox& b, double amount, F&& f) {
    AxisSpread xs(b.min_x, b.max_x, canvas.width, g.nx);
    AxisSpread ys(b.min_y, b.max_y, canvas.height, g.ny);
    for (int i = xs.i0; i <= xs.i1; ++i) {
        double fx = xs.frac(i);
        if (fx == 0.0) continue;
        for (int j = ys.i0; j <= ys.i1; ++j) {
            double fy = ys.frac(j);
            if (fy == 0.0) continue;
            f(i, j, amount * fx * fy);
        }
    }
}

}  // namespace detail

// ---------------------------------------------------------------- density

struct NodeMove {
    int node = -1;
    Vec2 old_pos, new_pos;
    Orient old_orient = Orient::N, new_orient = Orient::N;
};

// Occupancy grid over the canvas with incremental rect moves. Cost is the
// mean over bins of the occupancy overflow beyond target_util, in bin-area
// units.
class DensityField {
  public:
    void init(const Netlist& nl, const Placement& pl, const GridSpec& g) {
        nl_ = &nl;
        grid_ = g;
        occupancy_.assign(size_t(g.bins()), 0.0);
        overflow_ = 0.0;
        bin_area_ = (nl.canvas.width / g.nx) * (nl.canvas.height / g.ny);
        for (const Node& n : nl.nodes) add_rect(node_rect(n, pl.pos[size_t(n.id)]), 1.0);
        saved_.clear();
    }

    double cost() const { return overflow_ / (bin_area_ * grid_.bins()); }

    double occupancy_sum() const {
        double s = 0.0;
        for (double v : occupancy_) s += v;
        return s;
    }

    void apply(std::span<const NodeMove> moves);
    void commit() { saved_.clear(); }
    void revert() {
        for (auto it = saved_.rbegin(); it != saved_.rend(); ++it) set_bin(it->first, it->second);
        saved_.clear();
    }

    const GridSpec& grid() const { return grid_; }

  private:
    void set_bin(int idx, double value) {
        double cap = grid_.target_util * bin_area_;
        overflow_ -= std::max(0.0, occupancy_[size_t(idx)] - cap);
        occupancy_[size_t(idx)] = value;
        overflow_ += std::max(0.0, value - cap);
    }

    void change_bin(int idx, double delta, bool record) {
        if (record) saved_.emplace_back(idx, occupancy_[size_t(idx)]);
        set_bin(idx, occupancy_[size_t(idx)] + delta);
    }

    void add_rect(const Rect& r, double sign, bool record = false) {
        detail::for_each_bin_overlap(nl_->canvas, grid_, r, [&](int i, int j, double a) {
            change_bin(i + j * grid_.nx, sign * a, record);
        });
    }

    const Netlist* nl_ = nullptr;
    GridSpec grid_;
    std::vector<double> occupancy_;
    std::vector<std::pair<int, double>> saved_;
    double overflow_ = 0.0;
    double bin_area_ = 1.0;
};

inline void DensityField::apply(std::span<const NodeMove> moves) {
    assert(saved_.empty());
    for (const NodeMove& m : moves) {
        const Node& n = nl_->nodes[size_t(m.node)];
        // Orientation flips leave the rect unchanged, only position matters.
        if (m.old_pos == m.new_pos) continue;
        add_rect(node_rect(n, m.old_pos), -1.0, true);
        add_rect(node_rect(n, m.new_pos), +1.0, true);
    }
}

inline double density_cost(const Netlist& nl, const Placement& pl, const GridSpec& g) {
    DensityField f;
    f.init(nl, pl, g);
    return f.cost();
}

// ---------------------------------------------------------------- congestion

// Bounding-box routing-demand estimate: every net distributes exactly its
// weight over the bins its pin bounding box covers. Cost is the mean demand
// of the top decile of bins divided by the mean bin dimension, a rough
// demand-vs-track-capacity ratio.
class CongestionField {
  public:
    void init(const Netlist& nl, const Placement& pl, const GridSpec& g) {
        nl_ = &nl;
        grid_ = g;
        demand_.assign(size_t(g.bins()), 0.0);
        for (const Net& net : nl.nets) {
            if (net.pins.size() < 2) continue;
            add_net(net_bbox(nl, pl, net), net.weight);
        }
        saved_.clear();
        scratch_.resize(demand_.size());
    }

    double cost() const {
        int k = std::max(1, (grid_.bins() + 9) / 10);
        scratch_ = demand_;
        std::nth_element(scratch_.begin(), scratch_.begin() + (k - 1), scratch_.end(), std::greater<double>());
        double top = 0.0;
        for (int i = 0; i < k; ++i) top += scratch_[size_t(i)];
        double bin_dim = 0.5 * (nl_->canvas.width / grid_.nx + nl_->canvas.height / grid_.ny);
        return (top / k) / bin_dim;
    }

    double demand_sum() const {
        double s = 0.0;
        for (double v : demand_) s += v;
        return s;
    }

    double demand_at(int i, int j) const { return demand_[size_t(i + j * grid_.nx)]; }

    // Swaps the demand of affected nets from their old boxes to new ones.
    void apply(std::span<const std::pair<int, NetBBox>> changed, const HpwlCache& cache) {
        assert(saved_.empty());
        for (const auto& [net_id, old_box] : changed) {
            const Net& net = nl_->nets[size_t(net_id)];
            if (net.pins.size() < 2) continue;
            saved_.push_back({net_id, old_box, cache.box(net_id)});
            add_net(old_box, -net.weight);
            add_net(cache.box(net_id), net.weight);
        }
    }

    void commit() { saved_.clear(); }

    void revert() {
        for (auto it = saved_.rbegin(); it != saved_.rend(); ++it) {
            const Net& net = nl_->nets[size_t(it->net)];
            // cache has already been reverted by the caller; undo by formula
            add_net(it->new_box, -net.weight);
            add_net(it->old_box, net.weight);
        }
        saved_.clear();
    }

  private:
    struct Saved {
        int net;
        NetBBox old_box;
        NetBBox new_box;
    };

    void add_net(const NetBBox& b, double amount) {
        detail::spread_net_demand(nl_->canvas, grid_, b, amount, [&](int i, int j, double d) {
            demand_[size_t(i + j * grid_.nx)] += d;
        });
    }

    const Netlist* nl_ = nullptr;
    GridSpec grid_;
    std::vector<double> demand_;
    std::vector<Saved> saved_;
    mutable std::vector<double> scratch_;
};

inline double congestion_cost(const Netlist& nl, const Placement& pl, const GridSpec& g) {
    CongestionField f;
    f.init(nl, pl, g);
    return f.cost();
}

// ---------------------------------------------------------------- proxy

struct ProxyWeights {
    double wirelength = 1.0;
    double density = 0.5;
    double congestion = 0.5;
};

struct ProxyCost {
    double wirelength_term = 0.0;
    double density_term = 0.0;
    double congestion_term = 0.0;
    ProxyWeights weights;
    GridSpec grid;
    double total = 0.0;
};

inline double normalized_wirelength(const Netlist& nl, double hpwl) {
    if (nl.nets.empty()) return 0.0;
    return hpwl / (double(nl.nets.size()) * (nl.canvas.width + nl.canvas.height));
}

inline ProxyCost proxy_cost(const Netlist& nl, const Placement& pl, const ProxyWeights& w = {},
                            const GridSpec& g = {}) {
    ProxyCost c;
    c.weights = w;
    c.grid = g;
    c.wirelength_term = normalized_wirelength(nl, hpwl_total(nl, pl));
    c.density_term = density_cost(nl, pl, g);
    c.congestion_term = congestion_cost(nl, pl, g);
    c.total = w.wirelength * c.wirelength_term + w.density * c.density_term + w.congestion * c.congestion_term;
    return c;
}

}  // namespace mp
