#include "conjugax/sets.hpp"

#include <cmath>
#include <stdexcept>

namespace conjugax {

FiniteSet::FiniteSet(std::string id, const std::vector<std::vector<double>>& points)
    : id_(std::move(id)), size_(points.size()) {
    if (points.empty()) {
        throw std::invalid_argument("set '" + id_ + "' must have at least one point");
    }
    dim_ = points.front().size();
    coords_.reserve(size_ * dim_);
    for (const auto& p : points) {
        if (p.size() != dim_) {
            throw std::invalid_argument("set '" + id_ + "' mixes coordinate dimensions");
        }
        for (double v : p) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("set '" + id_ + "' has a non-finite coordinate");
            }
            coords_.push_back(v);
        }
    }
}

FiniteSet FiniteSet::abstract(std::string id, std::size_t size) {
    if (size == 0) {
        throw std::invalid_argument("set '" + id + "' must have at least one point");
    }
    FiniteSet s;
    s.id_ = std::move(id);
    s.size_ = size;
    return s;
}

FiniteSet FiniteSet::grid(std::string id, const std::vector<double>& coordinates) {
    std::vector<std::vector<double>> points;
    points.reserve(coordinates.size());
    for (double v : coordinates) {
        points.push_back({v});
    }
    return FiniteSet(std::move(id), points);
}

std::span<const double> FiniteSet::point(std::size_t i) const {
    if (i >= size_) {
        throw std::out_of_range("index out of range");
    }
    return {coords_.data() + i * dim_, dim_};
}

std::vector<double> FiniteSet::coordinates_1d() const {
    if (dim_ != 1) {
        throw std::invalid_argument("set '" + id_ + "' is not one-dimensional");
    }
    return coords_;
}

bool operator==(const FiniteSet& a, const FiniteSet& b) {
    return a.id_ == b.id_ && a.size_ == b.size_ && a.dim_ == b.dim_ && a.coords_ == b.coords_;
}

SetRef make_set(std::string id, const std::vector<std::vector<double>>& points) {
    return std::make_shared<const FiniteSet>(std::move(id), points);
}

SetRef make_abstract_set(std::string id, std::size_t size) {
    return std::make_shared<const FiniteSet>(FiniteSet::abstract(std::move(id), size));
}

SetRef make_grid(std::string id, const std::vector<double>& coordinates) {
    return std::make_shared<const FiniteSet>(FiniteSet::grid(std::move(id), coordinates));
}

SetRef make_uniform_grid(std::string id, double lo, double hi, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("uniform grid needs at least one point");
    }
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return make_grid(std::move(id), xs);
}

SetRef make_product(const std::vector<SetRef>& factors) {
    if (factors.empty()) {
        throw std::invalid_argument("product of zero sets");
    }
    auto prod = std::shared_ptr<FiniteSet>(new FiniteSet());
    std::vector<std::size_t> sizes;
    bool all_coords = true;
    for (const auto& f : factors) {
        if (!f) {
            throw std::invalid_argument("null factor in product");
        }
        prod->id_ += (prod->id_.empty() ? "" : "*") + f->id();
        sizes.push_back(f->size());
        prod->dim_ += f->dim();
        all_coords = all_coords && f->has_coordinates();
    }
    ProductIndexer indexer(sizes);
    prod->size_ = indexer.size();
    prod->factors_ = factors;
    if (!all_coords) {
        prod->dim_ = 0;
        return prod;
    }
    prod->coords_.reserve(prod->size_ * prod->dim_);
    for (std::size_t i = 0; i < prod->size_; ++i) {
        auto tup = indexer.tuple(i);
        for (std::size_t k = 0; k < factors.size(); ++k) {
            auto p = factors[k]->point(tup[k]);
            prod->coords_.insert(prod->coords_.end(), p.begin(), p.end());
        }
    }
    return prod;
}

bool same_set(const SetRef& a, const SetRef& b) {
    if (a == b) {
        return true;
    }
    return a && b && *a == *b;
}

ProductIndexer::ProductIndexer(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    for (auto s : sizes_) {
        if (s == 0) {
            throw std::invalid_argument("empty factor in product");
        }
        total_ *= s;
    }
}

std::size_t ProductIndexer::index(std::span<const std::size_t> tuple) const {
    if (tuple.size() != sizes_.size()) {
        throw std::invalid_argument("tuple arity mismatch");
    }
    std::size_t idx = 0;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        if (tuple[k] >= sizes_[k]) {
            throw std::out_of_range("index out of range");
        }
        idx = idx * sizes_[k] + tuple[k];
    }
    return idx;
}

std::vector<std::size_t> ProductIndexer::tuple(std::size_t index) const {
    if (index >= total_) {
        throw std::out_of_range("index out of range");
    }
    std::vector<std::size_t> t(sizes_.size());
    for (std::size_t k = sizes_.size(); k-- > 0;) {
        t[k] = index % sizes_[k];
        index /= sizes_[k];
    }
    return t;
}

}  // namespace conjugax
