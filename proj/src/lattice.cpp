#include "lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace hq::detail {

namespace {

int64_t ceil_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

std::vector<Vec4> echelon(std::vector<Vec4> rows, const std::array<int, 4>& order) {
    size_t k = 0;
    for (int col : order) {
        if (k >= rows.size()) break;
        for (;;) {
            size_t best = rows.size();
            for (size_t r = k; r < rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                if (best == rows.size() || std::llabs(rows[r][col]) < std::llabs(rows[best][col])) best = r;
            }
            if (best == rows.size()) break;
            std::swap(rows[k], rows[best]);
            bool others = false;
            for (size_t r = k + 1; r < rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                int64_t f = rows[r][col] / rows[k][col];
                for (int t = 0; t < 4; ++t) rows[r][t] = narrow(checked_sub(rows[r][t], checked_mul(f, rows[k][t])));
                if (rows[r][col] != 0) others = true;
            }
            if (!others) {
                if (rows[k][col] < 0)
                    for (auto& v : rows[k]) v = -v;
                ++k;
                break;
            }
        }
    }
    rows.resize(k);
    return rows;
}

int64_t BoxWalk::count(const Vec4& x0) const {
    for (int t = 0; t < 4; ++t)
        if (x0[t] < lo[t] || x0[t] > hi[t]) {
            bool free_coord = false;
            for (int l = 0; l < dims; ++l) free_coord |= order[l] == t;
            if (!free_coord) return 0;
        }
    int64_t total = 0;
    std::function<void(int, Vec4)> rec = [&](int l, Vec4 x) {
        int col = order[l];
        int64_t piv = basis[l][col];
        int64_t cl = ceil_div(lo[col] - x[col], piv);
        int64_t ch = floor_div(hi[col] - x[col], piv);
        if (ch < cl) return;
        if (l == dims - 1) {
            total += ch - cl + 1;
            return;
        }
        for (int64_t c = cl; c <= ch; ++c) {
            Vec4 y = x;
            for (int t = 0; t < 4; ++t) y[t] += c * basis[l][t];
            rec(l + 1, y);
        }
    };
    if (dims == 0) return 1;
    rec(0, x0);
    return total;
}

void BoxWalk::visit(const Vec4& x0, const std::function<void(const Vec4&)>& fn) const {
    std::function<void(int, Vec4)> rec = [&](int l, Vec4 x) {
        if (l == dims) {
            for (int t = 0; t < 4; ++t)
                if (x[t] < lo[t] || x[t] > hi[t]) return;
            fn(x);
            return;
        }
        int col = order[l];
        int64_t piv = basis[l][col];
        int64_t cl = ceil_div(lo[col] - x[col], piv);
        int64_t ch = floor_div(hi[col] - x[col], piv);
        for (int64_t c = cl; c <= ch; ++c) {
            Vec4 y = x;
            for (int t = 0; t < 4; ++t) y[t] += c * basis[l][t];
            rec(l + 1, y);
        }
    };
    rec(0, x0);
}

double BoxWalk::prefix_cost() const {
    double cost = 1.0;
    for (int l = 0; l + 1 < dims; ++l) {
        int col = order[l];
        cost *= static_cast<double>(hi[col] - lo[col]) / static_cast<double>(basis[l][col]) + 1.0;
    }
    return cost;
}

// ------------------------------------------------------- pair-lattice search

namespace {

constexpr int kDim = 8;

struct Gso {
    double mu[kDim][kDim];
    double B[kDim];
};

void gram_schmidt(const double b[kDim][kDim], Gso& g) {
    double bs[kDim][kDim];
    for (int i = 0; i < kDim; ++i) {
        for (int t = 0; t < kDim; ++t) bs[i][t] = b[i][t];
        for (int j = 0; j < i; ++j) {
            double dot = 0.0;
            for (int t = 0; t < kDim; ++t) dot += b[i][t] * bs[j][t];
            g.mu[i][j] = dot / g.B[j];
            for (int t = 0; t < kDim; ++t) bs[i][t] -= g.mu[i][j] * bs[j][t];
        }
        double s = 0.0;
        for (int t = 0; t < kDim; ++t) s += bs[i][t] * bs[i][t];
        g.B[i] = s;
        g.mu[i][i] = 1.0;
    }
}

void lll(double b[kDim][kDim], int64_t U[kDim][kDim], Gso& g) {
    const double delta = 0.99;
    gram_schmidt(b, g);
    int k = 1;
    int guard = 0;
    while (k < kDim && guard++ < 100000) {
        for (int j = k - 1; j >= 0; --j) {
            double r = std::nearbyint(g.mu[k][j]);
            if (r == 0.0) continue;
            auto ri = static_cast<int64_t>(r);
            for (int t = 0; t < kDim; ++t) {
                b[k][t] -= r * b[j][t];
                U[k][t] -= ri * U[j][t];
            }
            for (int i = 0; i < j; ++i) g.mu[k][i] -= r * g.mu[j][i];
            g.mu[k][j] -= r;
        }
        if (g.B[k] >= (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.B[k - 1]) {
            ++k;
        } else {
            for (int t = 0; t < kDim; ++t) {
                std::swap(b[k][t], b[k - 1][t]);
                std::swap(U[k][t], U[k - 1][t]);
            }
            gram_schmidt(b, g);
            k = std::max(k - 1, 1);
        }
    }
}

}  // namespace

bool search_pairs(const RealQuaternion& xi, double qmax, double err_max,
                  const std::function<bool(const HurwitzInt&, const HurwitzInt&)>& fn) {
    const double s = 1.0 / qmax;
    const double t = 1.0 / err_max;
    static const double h[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0.5, 0.5, 0.5, 0.5}};
    double b[kDim][kDim] = {};
    int64_t U[kDim][kDim] = {};
    for (int a = 0; a < 4; ++a) {
        RealQuaternion ha{{h[a][0], h[a][1], h[a][2], h[a][3]}};
        RealQuaternion xh = xi * ha;
        for (int c = 0; c < 4; ++c) {
            b[a][c] = s * h[a][c];
            b[a][4 + c] = t * xh.c[c];
            b[4 + a][4 + c] = -t * h[a][c];
        }
    }
    for (int i = 0; i < kDim; ++i) U[i][i] = 1;
    Gso g{};
    lll(b, U, g);

    const double R2 = 2.0 * (1.0 + 1e-9) + 1e-12;
    int64_t x[kDim] = {};
    bool stop = false;
    std::function<void(int, double)> rec = [&](int k, double partial) {
        if (stop) return;
        if (k < 0) {
            int64_t w[kDim] = {};
            bool nonzero = false;
            for (int i = 0; i < kDim; ++i) {
                if (x[i] == 0) continue;
                nonzero = true;
                for (int c = 0; c < kDim; ++c) w[c] += x[i] * U[i][c];
            }
            if (!nonzero) return;
            HurwitzInt q = HurwitzInt::doubled(2 * w[0] + w[3], 2 * w[1] + w[3], 2 * w[2] + w[3], w[3]);
            if (q.is_zero()) return;
            HurwitzInt p = HurwitzInt::doubled(2 * w[4] + w[7], 2 * w[5] + w[7], 2 * w[6] + w[7], w[7]);
            if (fn(q, p)) stop = true;
            return;
        }
        double c = 0.0;
        for (int j = k + 1; j < kDim; ++j) c -= static_cast<double>(x[j]) * g.mu[j][k];
        double rem = R2 - partial;
        if (rem < 0.0) return;
        double w = std::sqrt(rem / g.B[k]);
        auto lo = static_cast<int64_t>(std::ceil(c - w));
        auto hi = static_cast<int64_t>(std::floor(c + w));
        for (int64_t v = lo; v <= hi && !stop; ++v) {
            x[k] = v;
            double d = static_cast<double>(v) - c;
            rec(k - 1, partial + d * d * g.B[k]);
        }
        x[k] = 0;
    };
    rec(kDim - 1, 0.0);
    return stop;
}

// ------------------------------------------------------- 4-dim short vectors

int64_t count_short_vectors(const std::vector<Vec4>& gens, i128 bound) {
    auto basis = echelon(gens, {0, 1, 2, 3});
    if (basis.size() != 4) fail(Errc::internal, "lattice is not of full rank");
    constexpr int D = 4;
    double mu[D][D] = {};
    double B[D] = {};
    auto gso = [&]() {
        double bs[D][D];
        for (int i = 0; i < D; ++i) {
            for (int t = 0; t < D; ++t) bs[i][t] = static_cast<double>(basis[i][t]);
            for (int j = 0; j < i; ++j) {
                double d = 0.0;
                for (int t = 0; t < D; ++t) d += static_cast<double>(basis[i][t]) * bs[j][t];
                mu[i][j] = d / B[j];
                for (int t = 0; t < D; ++t) bs[i][t] -= mu[i][j] * bs[j][t];
            }
            B[i] = 0.0;
            for (int t = 0; t < D; ++t) B[i] += bs[i][t] * bs[i][t];
        }
    };
    gso();
    int k = 1;
    int guard = 0;
    while (k < D && guard++ < 10000) {
        for (int j = k - 1; j >= 0; --j) {
            auto r = static_cast<int64_t>(std::nearbyint(mu[k][j]));
            if (r == 0) continue;
            for (int t = 0; t < D; ++t) basis[k][t] = narrow(checked_sub(basis[k][t], checked_mul(r, basis[j][t])));
            gso();
        }
        if (B[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            ++k;
        } else {
            std::swap(basis[k], basis[k - 1]);
            gso();
            k = std::max(k - 1, 1);
        }
    }
    const double R2 = static_cast<double>(bound) * (1.0 + 1e-9) + 1.0;
    int64_t x[D] = {};
    int64_t found = 0;
    std::function<void(int, double)> rec = [&](int lv, double partial) {
        if (lv < 0) {
            i128 v[D] = {};
            bool nonzero = false;
            for (int i = 0; i < D; ++i) {
                if (x[i] != 0) nonzero = true;
                for (int t = 0; t < D; ++t) v[t] += static_cast<i128>(x[i]) * basis[i][t];
            }
            if (!nonzero) return;
            i128 n2 = 0;
            for (int t = 0; t < D; ++t) n2 += v[t] * v[t];
            if (n2 < bound) ++found;
            return;
        }
        double c = 0.0;
        for (int j = lv + 1; j < D; ++j) c -= static_cast<double>(x[j]) * mu[j][lv];
        double rem = R2 - partial;
        if (rem < 0.0) return;
        double w = std::sqrt(rem / B[lv]);
        auto lo = static_cast<int64_t>(std::ceil(c - w));
        auto hi = static_cast<int64_t>(std::floor(c + w));
        for (int64_t v = lo; v <= hi; ++v) {
            x[lv] = v;
            double d = static_cast<double>(v) - c;
            rec(lv - 1, partial + d * d * B[lv]);
        }
        x[lv] = 0;
    };
    rec(D - 1, 0.0);
    return found;
}

}  // namespace hq::detail
