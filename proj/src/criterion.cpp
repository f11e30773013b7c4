#include "criterion.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace mink {

namespace {

void check_weights(std::span<const double> a, std::size_t want, double p) {
    if (a.size() != want)
        throw Error(errc::invalid_argument, "weight vector has wrong length");
    for (double v : a)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw Error(errc::invalid_argument,
                        "weights must be finite and nonnegative");
    if (!(p >= 1.0) || !std::isfinite(p))
        throw Error(errc::invalid_argument, "exponent p must satisfy p >= 1");
}

} // namespace

double side_ratio(double lhs, double rhs) {
    if (lhs > 0.0) return rhs / lhs;
    if (rhs > 0.0) return std::numeric_limits<double>::infinity();
    return 1.0;
}

TripleKernel::TripleKernel(const FusionRing& ring, const DimVector& dims,
                           std::size_t i, std::size_t j, std::size_t k)
    : rank_(ring.rank()), pow_buf_(ring.rank()) {
    const std::size_t s = rank_;
    if (i >= s || j >= s || k >= s)
        throw Error(errc::invalid_argument, "triple index out of range");
    if (dims.dims.size() != s)
        throw Error(errc::invalid_argument, "dimension vector has wrong length");
    const auto& d = dims.dims;
    for (std::size_t l = 0; l < s; ++l) {
        if (int m = ring.mult(i, j, l); m != 0) {
            Row row;
            row.weight = m * d[l] / d[j];
            row.coeff.resize(s);
            for (std::size_t n = 0; n < s; ++n)
                row.coeff[n] = ring.mult(l, k, n) * d[n] / d[l];
            lhs_.push_back(std::move(row));
        }
        if (int m = ring.mult(j, k, l); m != 0) {
            Row row;
            row.weight = m * d[l] / d[j];
            row.coeff.resize(s);
            for (std::size_t n = 0; n < s; ++n)
                row.coeff[n] = ring.mult(i, l, n) * d[n] / d[l];
            rhs_.push_back(std::move(row));
        }
    }
}

TripleEvaluation TripleKernel::eval(const double* a, double p) const {
    const std::size_t s = rank_;
    const double invp = 1.0 / p;
    double lhs_acc = 0.0;
    for (const Row& row : lhs_) {
        double inner = 0.0;
        for (std::size_t n = 0; n < s; ++n) inner += row.coeff[n] * a[n];
        if (inner > 0.0) lhs_acc += std::pow(inner, p) * row.weight;
    }
    double lhs = lhs_acc > 0.0 ? std::pow(lhs_acc, invp) : 0.0;

    for (std::size_t n = 0; n < s; ++n)
        pow_buf_[n] = a[n] > 0.0 ? std::pow(a[n], p) : 0.0;
    double rhs = 0.0;
    for (const Row& row : rhs_) {
        double inner = 0.0;
        for (std::size_t n = 0; n < s; ++n) inner += row.coeff[n] * pow_buf_[n];
        if (inner > 0.0) rhs += std::pow(inner, invp) * row.weight;
    }
    return {lhs, rhs, side_ratio(lhs, rhs)};
}

TripleEvaluation cat_sides(const FusionRing& ring, const DimVector& dims,
                           std::size_t i, std::size_t j, std::size_t k,
                           std::span<const double> a, double p) {
    check_weights(a, ring.rank(), p);
    return TripleKernel(ring, dims, i, j, k).eval(a.data(), p);
}

void validate_square(const CommutingSquareSpec& spec) {
    const Eigen::Index n00 = spec.t00_01.rows();
    const Eigen::Index n01 = spec.t00_01.cols();
    const Eigen::Index n10 = spec.t00_10.cols();
    const Eigen::Index n11 = spec.t01_11.cols();
    auto fail = [](const std::string& msg) { throw Error(errc::validation, msg); };

    if (n00 < 1 || n01 < 1 || n10 < 1 || n11 < 1)
        fail("square has an empty corner");
    if (spec.t00_10.rows() != n00)
        fail("t00_01 and t00_10 disagree on the size of A00");
    if (spec.t01_11.rows() != n01)
        fail("t00_01 and t01_11 disagree on the size of A01");
    if (spec.t10_11.rows() != n10 || spec.t10_11.cols() != n11)
        fail("t10_11 shape does not match t00_10 / t01_11");
    if (spec.v11.size() != n11) fail("v11 length does not match A11");

    for (const Eigen::MatrixXi* t :
         {&spec.t00_01, &spec.t01_11, &spec.t00_10, &spec.t10_11})
        if ((t->array() < 0).any())
            fail("inclusion matrices must be nonnegative");

    if ((spec.v11.array() <= 0.0).any())
        fail("v11 must be entrywise positive");

    if (spec.t00_01 * spec.t01_11 != spec.t00_10 * spec.t10_11)
        fail("path consistency fails: t00_01*t01_11 != t00_10*t10_11");

    induced_traces(spec); // throws when an induced trace is not positive
}

InducedTraces induced_traces(const CommutingSquareSpec& spec) {
    InducedTraces tr;
    tr.v10 = spec.t10_11.cast<double>() * spec.v11;
    tr.v01 = spec.t01_11.cast<double>() * spec.v11;
    tr.v00 = spec.t00_01.cast<double>() * tr.v01;
    for (const Eigen::VectorXd* v : {&tr.v10, &tr.v01, &tr.v00})
        if ((v->array() <= 0.0).any())
            throw Error(errc::validation,
                        "induced trace vector has a nonpositive entry");
    return tr;
}

TripleEvaluation cs_sides(const CommutingSquareSpec& spec, std::size_t row,
                          std::span<const double> a, double p) {
    const std::size_t n11 = static_cast<std::size_t>(spec.t01_11.cols());
    check_weights(a, n11, p);
    if (row >= static_cast<std::size_t>(spec.t00_01.rows()))
        throw Error(errc::invalid_argument, "row index out of range");
    InducedTraces tr = induced_traces(spec);
    const Eigen::Index i = static_cast<Eigen::Index>(row);
    const double invp = 1.0 / p;

    double lhs_acc = 0.0;
    for (Eigen::Index jrow = 0; jrow < spec.t10_11.rows(); ++jrow) {
        int w = spec.t00_10(i, jrow);
        if (w == 0) continue;
        double inner = 0.0;
        for (Eigen::Index l = 0; l < spec.t10_11.cols(); ++l)
            inner += spec.t10_11(jrow, l) * a[static_cast<std::size_t>(l)] *
                     spec.v11(l);
        inner /= tr.v10(jrow);
        if (inner > 0.0)
            lhs_acc += std::pow(inner, p) * w * tr.v10(jrow) / tr.v00(i);
    }
    double lhs = lhs_acc > 0.0 ? std::pow(lhs_acc, invp) : 0.0;

    double rhs = 0.0;
    for (Eigen::Index krow = 0; krow < spec.t01_11.rows(); ++krow) {
        int w = spec.t00_01(i, krow);
        if (w == 0) continue;
        double inner = 0.0;
        for (Eigen::Index l = 0; l < spec.t01_11.cols(); ++l) {
            double av = a[static_cast<std::size_t>(l)];
            if (av > 0.0)
                inner += spec.t01_11(krow, l) * std::pow(av, p) * spec.v11(l);
        }
        inner /= tr.v01(krow);
        if (inner > 0.0)
            rhs += std::pow(inner, invp) * w * tr.v01(krow) / tr.v00(i);
    }
    return {lhs, rhs, side_ratio(lhs, rhs)};
}

CommutingSquareSpec square_from_triple(const FusionRing& ring,
                                       const DimVector& dims, std::size_t i,
                                       std::size_t j, std::size_t k) {
    const std::size_t s = ring.rank();
    if (i >= s || j >= s || k >= s)
        throw Error(errc::invalid_argument, "triple index out of range");
    if (dims.dims.size() != s)
        throw Error(errc::invalid_argument, "dimension vector has wrong length");
    const Eigen::Index n = static_cast<Eigen::Index>(s);
    CommutingSquareSpec spec;
    spec.t10_11.resize(n, n);
    spec.t01_11.resize(n, n);
    spec.t00_10.resize(1, n);
    spec.t00_01.resize(1, n);
    spec.v11.resize(n);
    for (std::size_t l = 0; l < s; ++l) {
        spec.t00_10(0, static_cast<Eigen::Index>(l)) = ring.mult(i, j, l);
        spec.t00_01(0, static_cast<Eigen::Index>(l)) = ring.mult(j, k, l);
        for (std::size_t m = 0; m < s; ++m) {
            spec.t10_11(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m)) =
                ring.mult(l, k, m);
            spec.t01_11(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m)) =
                ring.mult(i, l, m);
        }
    }
    const auto& d = dims.dims;
    const double scale = d[i] * d[j] * d[k];
    for (std::size_t l = 0; l < s; ++l)
        spec.v11(static_cast<Eigen::Index>(l)) = d[l] / scale;
    std::ostringstream os;
    os << ring.label() << ":(" << i + 1 << "," << j + 1 << "," << k + 1 << ")";
    spec.label = os.str();
    return spec;
}

namespace {

/* Perron eigenvector of G^t G, sum-normalized; empty on failure. */
bool composite_trace(const CommutingSquareSpec& spec, Eigen::VectorXd& out,
                     std::string& note) {
    Eigen::MatrixXd g = (spec.t00_01 * spec.t01_11).cast<double>();
    Eigen::MatrixXd gram = g.transpose() * g;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success) {
        note = "eigensolver failed on composite Gram matrix";
        return false;
    }
    Eigen::VectorXd v = es.eigenvectors().col(gram.cols() - 1); // largest eigenvalue
    if (v.sum() < 0.0) v = -v;
    const double top = v.cwiseAbs().maxCoeff();
    if (top <= 0.0) {
        note = "composite Gram matrix has zero Perron vector";
        return false;
    }
    for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
        if (v(idx) < -1e-9 * top) {
            note = "Perron vector of the composite is not nonnegative";
            return false;
        }
        if (v(idx) < 0.0) v(idx) = 0.0;
    }
    out = v / v.sum();
    return true;
}

SquareVariant make_variant(Eigen::MatrixXi a, Eigen::MatrixXi b,
                           Eigen::MatrixXi c, Eigen::MatrixXi d,
                           const std::string& label) {
    SquareVariant var;
    var.spec.t00_01 = std::move(a);
    var.spec.t01_11 = std::move(b);
    var.spec.t00_10 = std::move(c);
    var.spec.t10_11 = std::move(d);
    var.spec.label = label;
    Eigen::VectorXd v11;
    std::string note;
    if (!composite_trace(var.spec, v11, note)) {
        var.applicable = false;
        var.note = note;
        return var;
    }
    var.spec.v11 = v11;
    try {
        validate_square(var.spec);
        var.applicable = true;
        var.note = "trace vector: Perron eigenvector of the composite inclusion";
    } catch (const Error& e) {
        var.applicable = false;
        var.note = e.what();
    }
    return var;
}

} // namespace

std::vector<SquareVariant> transpose_variants(const CommutingSquareSpec& spec) {
    std::vector<SquareVariant> out;
    out.reserve(4);

    SquareVariant original;
    original.spec = spec;
    original.note = "input square";
    try {
        validate_square(original.spec);
        original.applicable = true;
    } catch (const Error& e) {
        original.applicable = false;
        original.note = e.what();
    }
    out.push_back(std::move(original));

    const Eigen::MatrixXi& a = spec.t00_01;
    const Eigen::MatrixXi& b = spec.t01_11;
    const Eigen::MatrixXi& c = spec.t00_10;
    const Eigen::MatrixXi& d = spec.t10_11;
    /* Swap the roles of the two intermediate algebras. */
    out.push_back(make_variant(a.transpose(), c, b, d.transpose(),
                               spec.label + ":swap-mid"));
    /* Exchange the top-left and bottom-right corners. */
    out.push_back(make_variant(d, b.transpose(), c.transpose(), a,
                               spec.label + ":swap-corners"));
    /* Full reversal: transpose every inclusion. */
    out.push_back(make_variant(d.transpose(), c.transpose(), b.transpose(),
                               a.transpose(), spec.label + ":reverse"));
    return out;
}

} // namespace mink
