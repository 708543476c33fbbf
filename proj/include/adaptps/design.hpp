#ifndef ADAPTPS_DESIGN_HPP
#define ADAPTPS_DESIGN_HPP

#include "adaptps/mmtransform.hpp"
#include "adaptps/types.hpp"

#include <memory>
#include <vector>

namespace adaptps {

/// Data-side view of the mixed model [X | Z]: supplies the weighted
/// cross-products and the linear predictor without committing to scattered
/// or grid storage.
class Design {
public:
    virtual ~Design() = default;
    virtual Index n() const = 0;
    virtual Index n_fixed() const = 0;
    virtual Index n_random() const = 0;

    /// A = U^T diag(w) U and r = U^T (w .* z) for U = [X | Z].
    virtual void gram(const Vector& w, const Vector& z, Matrix& A, Vector& r) const = 0;

    /// [X | Z] (beta, alpha), in dataset row order.
    virtual Vector linear_predictor(const Vector& beta, const Vector& alpha) const = 0;

    /// Rank check of X; throws naming the offending dimension when possible.
    virtual void check_fixed_rank() const = 0;
};

/// Scattered observations with explicit X and Z.
class DenseDesign : public Design {
public:
    DenseDesign(Matrix X, Matrix Z);
    Index n() const override { return X_.rows(); }
    Index n_fixed() const override { return X_.cols(); }
    Index n_random() const override { return Z_.cols(); }
    void gram(const Vector& w, const Vector& z, Matrix& A, Vector& r) const override;
    Vector linear_predictor(const Vector& beta, const Vector& alpha) const override;
    void check_fixed_rank() const override;
    const Matrix& X() const { return X_; }
    const Matrix& Z() const { return Z_; }

private:
    Matrix X_, Z_;
};

/// Full grid data: cross-products via the array algorithms, so the n x c
/// tensor design is never materialised. Rows follow grid order (first axis
/// fastest), matching vec() of the data array.
class GridDesign : public Design {
public:
    GridDesign(std::vector<Matrix> B_margins, const Transforms& tf);
    Index n() const override { return n_; }
    Index n_fixed() const override { return tf_.n_fixed(); }
    Index n_random() const override { return tf_.n_random(); }
    void gram(const Vector& w, const Vector& z, Matrix& A, Vector& r) const override;
    Vector linear_predictor(const Vector& beta, const Vector& alpha) const override;
    void check_fixed_rank() const override;

private:
    std::vector<Matrix> B_margins_;
    const Transforms& tf_;
    Matrix T_;  ///< [T_zero | T_plus]
    std::vector<Index> extents_;
    Index n_ = 0;
};

}  // namespace adaptps

#endif
