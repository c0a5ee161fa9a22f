#include "conjugax/coupling.hpp"

#include <stdexcept>
#include <string>

namespace conjugax {

ExtMatrix::ExtMatrix(std::size_t rows, std::size_t cols, ExtReal fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

ExtMatrix ExtMatrix::from_rows(const std::vector<std::vector<ExtReal>>& rows) {
    if (rows.empty()) {
        return {};
    }
    ExtMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) {
            throw std::invalid_argument("ragged matrix rows");
        }
        for (std::size_t j = 0; j < m.cols_; ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

struct Coupling::Node {
    Kind kind = Kind::Table;
    SetRef primal;
    SetRef dual;
    ExtMatrix table;
    int sign = 1;
    std::vector<Coupling> children;
    std::size_t right_primal_size = 1;
    std::size_t right_dual_size = 1;
};

Coupling Coupling::table(SetRef primal, SetRef dual, ExtMatrix values) {
    if (!primal || !dual) {
        throw std::invalid_argument("coupling needs both sets");
    }
    if (values.rows() != primal->size() || values.cols() != dual->size()) {
        throw std::invalid_argument("coupling table is " + std::to_string(values.rows()) + "x" +
                                    std::to_string(values.cols()) + ", sets are " +
                                    std::to_string(primal->size()) + "x" +
                                    std::to_string(dual->size()));
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Table;
    n->primal = std::move(primal);
    n->dual = std::move(dual);
    n->table = std::move(values);
    return Coupling(std::move(n));
}

Coupling Coupling::bilinear(SetRef primal, SetRef dual, int sign) {
    if (!primal || !dual) {
        throw std::invalid_argument("coupling needs both sets");
    }
    if (!primal->has_coordinates() || !dual->has_coordinates()) {
        throw std::invalid_argument("bilinear needs coordinates");
    }
    if (primal->dim() != dual->dim()) {
        throw std::invalid_argument("bilinear needs coordinates of equal dimension");
    }
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("bilinear sign must be +1 or -1");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Bilinear;
    n->primal = std::move(primal);
    n->dual = std::move(dual);
    n->sign = sign;
    return Coupling(std::move(n));
}

Coupling Coupling::zero(SetRef primal, SetRef dual) {
    ExtMatrix m(primal->size(), dual->size(), ExtReal(0.0));
    return table(std::move(primal), std::move(dual), std::move(m));
}

Coupling Coupling::sum(const Coupling& left, const Coupling& right) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->primal = make_product({left.primal(), right.primal()});
    n->dual = make_product({left.dual(), right.dual()});
    n->right_primal_size = right.primal()->size();
    n->right_dual_size = right.dual()->size();
    n->children = {left, right};
    return Coupling(std::move(n));
}

Coupling Coupling::opposite(const Coupling& inner) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Opposite;
    n->primal = inner.primal();
    n->dual = inner.dual();
    n->children = {inner};
    return Coupling(std::move(n));
}

Coupling Coupling::transpose(const Coupling& inner) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Transpose;
    n->primal = inner.dual();
    n->dual = inner.primal();
    n->children = {inner};
    return Coupling(std::move(n));
}

Coupling::Kind Coupling::kind() const noexcept { return node_->kind; }
const SetRef& Coupling::primal() const noexcept { return node_->primal; }
const SetRef& Coupling::dual() const noexcept { return node_->dual; }

ExtReal Coupling::eval(std::size_t i, std::size_t j) const {
    if (i >= node_->primal->size() || j >= node_->dual->size()) {
        throw std::out_of_range("index out of range");
    }
    return (*this)(i, j);
}

ExtReal Coupling::operator()(std::size_t i, std::size_t j) const noexcept {
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::Table:
        return n.table(i, j);
    case Kind::Bilinear: {
        auto x = n.primal->point(i);
        auto s = n.dual->point(j);
        double acc = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            acc += x[k] * s[k];
        }
        return ExtReal(n.sign * acc);
    }
    case Kind::Sum:
        return low_add(n.children[0](i / n.right_primal_size, j / n.right_dual_size),
                       n.children[1](i % n.right_primal_size, j % n.right_dual_size));
    case Kind::Opposite:
        return neg(n.children[0](i, j));
    case Kind::Transpose:
        return n.children[0](j, i);
    }
    return ExtReal(0.0);
}

ExtMatrix Coupling::materialize(std::size_t budget) const {
    const std::size_t rows = primal()->size();
    const std::size_t cols = dual()->size();
    if (cols != 0 && rows > budget / cols) {
        throw std::length_error("materialization too large");
    }
    ExtMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = (*this)(i, j);
        }
    }
    return m;
}

bool Coupling::is_finite_valued() const {
    for (std::size_t i = 0; i < primal()->size(); ++i) {
        for (std::size_t j = 0; j < dual()->size(); ++j) {
            if (!(*this)(i, j).is_finite()) {
                return false;
            }
        }
    }
    return true;
}

int Coupling::sign() const {
    if (node_->kind != Kind::Bilinear) {
        throw std::logic_error("sign() on a non-bilinear coupling");
    }
    return node_->sign;
}

const ExtMatrix& Coupling::table_values() const {
    if (node_->kind != Kind::Table) {
        throw std::logic_error("table_values() on a non-table coupling");
    }
    return node_->table;
}

const Coupling& Coupling::left() const {
    if (node_->kind != Kind::Sum) {
        throw std::logic_error("left() on a non-sum coupling");
    }
    return node_->children[0];
}

const Coupling& Coupling::right() const {
    if (node_->kind != Kind::Sum) {
        throw std::logic_error("right() on a non-sum coupling");
    }
    return node_->children[1];
}

const Coupling& Coupling::inner() const {
    if (node_->kind != Kind::Opposite && node_->kind != Kind::Transpose) {
        throw std::logic_error("inner() on a coupling without an inner form");
    }
    return node_->children[0];
}

}  // namespace conjugax
