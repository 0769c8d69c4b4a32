#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "strata/geometry.hpp"

namespace strata {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite ordered point set with fixed ambient dimension, stored flat.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ ? coords_.size() / dim_ : 0; }
    bool empty() const { return coords_.empty(); }

    std::span<const Scalar> operator[](std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    Point point(std::size_t i) const {
        auto s = (*this)[i];
        return Point(s.begin(), s.end());
    }

    void push_back(std::span<const Scalar> p) {
        if (dim_ == 0) dim_ = p.size();
        if (p.size() != dim_) throw dimension_mismatch("point has wrong dimension");
        for (Scalar x : p) {
            if (!std::isfinite(x)) throw std::invalid_argument("non-finite coordinate");
            coords_.push_back(x);
        }
    }

    const std::vector<Scalar>& raw() const { return coords_; }

private:
    std::size_t dim_ = 0;
    std::vector<Scalar> coords_;
};

inline void write_cloud(std::ostream& os, const PointCloud& cloud) {
    os << "dim " << cloud.dim() << " count " << cloud.size() << "\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud[i];
        for (std::size_t k = 0; k < p.size(); ++k) os << (k ? " " : "") << p[k];
        os << "\n";
    }
}

inline void save_cloud(const std::string& path, const PointCloud& cloud) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_cloud(os, cloud);
}

inline PointCloud read_cloud(std::istream& is) {
    std::string kw1, kw2;
    std::size_t dim = 0, count = 0;
    if (!(is >> kw1 >> dim >> kw2 >> count) || kw1 != "dim" || kw2 != "count")
        throw parse_error("point cloud file must start with 'dim <n> count <m>'");
    if (dim < 1) throw parse_error("ambient dimension must be >= 1");
    PointCloud cloud(dim);
    Point buf(dim);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t k = 0; k < dim; ++k)
            if (!(is >> buf[k])) throw parse_error("truncated point cloud file");
        cloud.push_back(buf);
    }
    return cloud;
}

inline PointCloud load_cloud(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error("cannot open " + path);
    return read_cloud(is);
}

/// Uniform hash grid over a cloud.  Cell size is chosen by the caller; all
/// queries are exact (candidates are distance-filtered).
class SpatialGrid {
public:
    SpatialGrid(const PointCloud& cloud, Scalar cell)
        : cloud_(&cloud), cell_(cell), inv_cell_(1.0 / cell) {
        const std::size_t n = cloud.size();
        keys_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            keys_[i] = key_of(cloud[i]);
            buckets_[keys_[i]].push_back(static_cast<std::uint32_t>(i));
        }
    }

    Scalar cell_size() const { return cell_; }

    /// Indices within closed distance r of q (includes q itself when in cloud).
    std::vector<std::uint32_t> query_ball(std::span<const Scalar> q, Scalar r) const {
        std::vector<std::uint32_t> out;
        const Scalar r2 = r * r;
        visit_cells(q, r, [&](const std::vector<std::uint32_t>& bucket) {
            for (std::uint32_t i : bucket)
                if (squared_distance((*cloud_)[i], q) <= r2) out.push_back(i);
        });
        return out;
    }

    template <class F>
    void for_each_in_ball(std::span<const Scalar> q, Scalar r, F&& f) const {
        const Scalar r2 = r * r;
        visit_cells(q, r, [&](const std::vector<std::uint32_t>& bucket) {
            for (std::uint32_t i : bucket)
                if (squared_distance((*cloud_)[i], q) <= r2) f(i);
        });
    }

private:
    // pack up to the first 3 coordinates; higher dimensions share cells, which
    // only costs extra distance filtering
    std::int64_t key_of(std::span<const Scalar> p) const {
        std::int64_t k = 0;
        const std::size_t d = std::min<std::size_t>(3, p.size());
        for (std::size_t i = 0; i < d; ++i) {
            const auto c = static_cast<std::int64_t>(std::floor(p[i] * inv_cell_)) & 0x1FFFFF;
            k |= c << (21 * i);
        }
        return k;
    }

    template <class F>
    void visit_cells(std::span<const Scalar> q, Scalar r, F&& f) const {
        const std::size_t d = std::min<std::size_t>(3, q.size());
        std::array<std::int64_t, 3> lo{0, 0, 0}, hi{0, 0, 0};
        for (std::size_t i = 0; i < d; ++i) {
            lo[i] = static_cast<std::int64_t>(std::floor((q[i] - r) * inv_cell_));
            hi[i] = static_cast<std::int64_t>(std::floor((q[i] + r) * inv_cell_));
        }
        for (std::int64_t x = lo[0]; x <= hi[0]; ++x)
            for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
                for (std::int64_t z = lo[2]; z <= hi[2]; ++z) {
                    std::int64_t k = (x & 0x1FFFFF);
                    if (d > 1) k |= (y & 0x1FFFFF) << 21;
                    if (d > 2) k |= (z & 0x1FFFFF) << 42;
                    auto it = buckets_.find(k);
                    if (it != buckets_.end()) f(it->second);
                }
    }

    const PointCloud* cloud_;
    Scalar cell_, inv_cell_;
    std::vector<std::int64_t> keys_;
    std::unordered_map<std::int64_t, std::vector<std::uint32_t>> buckets_;
};

}  // namespace strata
