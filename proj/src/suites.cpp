#include "hurwitz/suites.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "hurwitz/core.hpp"
#include "hurwitz/resonant.hpp"
#include "hurwitz/rng.hpp"
#include "lattice.hpp"
#include "parallel.hpp"

namespace hq {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

HurwitzInt random_hurwitz(CounterRng& rng, int64_t bound) {
    const auto span = static_cast<uint64_t>(2 * bound + 1);
    const int64_t parity = static_cast<int64_t>(rng.below(2));
    int64_t c[4];
    for (auto& v : c) {
        v = static_cast<int64_t>(rng.below(span)) - bound;
        if ((v & 1) != parity) v += v < bound ? 1 : -1;
    }
    return HurwitzInt::doubled(c[0], c[1], c[2], c[3]);
}

void record(SuiteResult& s, bool ok, const std::string& what) {
    ++s.cases;
    if (ok) return;
    if (s.failures++ == 0) s.witness = what;
}

std::vector<HurwitzInt> right_classes_up_to(int64_t max_norm) {
    std::set<HurwitzInt> seen;
    for (int64_t m = 1; m <= max_norm; ++m)
        for (const auto& q : enumerate_by_norm(m, Order::hurwitz)) seen.insert(right_unit_class(q));
    std::vector<HurwitzInt> out(seen.begin(), seen.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const HurwitzInt& a, const HurwitzInt& b) { return a.norm_sq() < b.norm_sq(); });
    return out;
}

// Doubled coordinates of H conj(q).
std::vector<detail::Vec4> image_lattice(const HurwitzInt& q) {
    static const std::array<detail::Vec4, 4> gens = {{{2, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {1, 1, 1, 1}}};
    std::vector<detail::Vec4> out;
    for (const auto& g : gens) {
        auto X = doubled_product(g, q.conj().d());
        out.push_back({narrow(X[0]), narrow(X[1]), narrow(X[2]), narrow(X[3])});
    }
    return out;
}

}  // namespace

std::vector<SuiteResult> arithmetic_suite(int64_t triples, uint64_t seed, int64_t coord_bound) {
    if (triples <= 0) fail(Errc::invalid_argument, "triples must be positive");
    if (coord_bound < 1 || coord_bound > 1'000'000) fail(Errc::invalid_argument, "coord_bound must be in [1, 1e6]");
    const auto t0 = Clock::now();
    SuiteResult assoc{"associativity"}, distrib{"distributivity"}, conj{"conjugation"}, norm{"norm_multiplicative"},
        right{"div_rem_right"}, left{"div_rem_left"};
    CounterRng rng(seed, 0);
    for (int64_t k = 0; k < triples; ++k) {
        const HurwitzInt a = random_hurwitz(rng, coord_bound);
        const HurwitzInt b = random_hurwitz(rng, coord_bound);
        const HurwitzInt c = random_hurwitz(rng, coord_bound);
        const std::string tag = format(a) + " ; " + format(b) + " ; " + format(c);
        record(assoc, (a * b) * c == a * (b * c), tag);
        record(distrib, a * (b + c) == a * b + a * c && (a + b) * c == a * c + b * c, tag);
        record(conj, (a * b).conj() == b.conj() * a.conj(), tag);
        record(norm, (a * b).norm_sq() == a.norm_sq() * b.norm_sq(), tag);
        if (!b.is_zero()) {
            auto dr = div_rem_right(a, b);
            record(right, dr.s * b + dr.r == a && dr.r.norm_sq() < b.norm_sq(), tag);
            auto dl = div_rem_left(a, b);
            record(left, b * dl.s + dl.r == a && dl.r.norm_sq() < b.norm_sq(), tag);
        }
    }
    std::vector<SuiteResult> out{assoc, distrib, conj, norm, right, left};
    const double secs = since(t0);
    for (auto& s : out) s.seconds = secs;
    return out;
}

SuiteResult jacobi_suite(int64_t m_max) {
    if (m_max < 1) fail(Errc::invalid_argument, "m_max must be positive");
    const auto t0 = Clock::now();
    SuiteResult s{"jacobi"};
    for (int64_t m = 1; m <= m_max; ++m) {
        const auto n = static_cast<int64_t>(enumerate_by_norm(m, Order::lipschitz).size());
        record(s, n == jacobi_r4(m),
               "m = " + std::to_string(m) + ": " + std::to_string(n) + " vs " + std::to_string(jacobi_r4(m)));
    }
    const auto units_found = static_cast<int64_t>(enumerate_by_norm(1, Order::hurwitz).size());
    record(s, units_found == 24, "hurwitz units: " + std::to_string(units_found));
    s.seconds = since(t0);
    return s;
}

SuiteResult separation_suite(int64_t max_norm, int workers) {
    if (max_norm < 1 || max_norm > 400) fail(Errc::invalid_argument, "max_norm must be in [1, 400]");
    const auto t0 = Clock::now();
    SuiteResult s{"separation"};
    const auto classes = right_classes_up_to(max_norm);
    std::vector<std::vector<detail::Vec4>> images;
    for (const auto& q : classes) images.push_back(image_lattice(q));
    std::vector<SuiteResult> parts(classes.size());
    detail::parallel_for(classes.size(), workers, [&](size_t i) {
        const int64_t ni = classes[i].norm_sq();
        for (size_t j = i; j < classes.size(); ++j) {
            const int64_t nj = classes[j].norm_sq();
            // W = n_j X_i - n_i X_j; the gap is |W| / (2 n_i n_j) in doubled units.
            std::vector<detail::Vec4> gens;
            for (const auto& g : images[i]) gens.push_back({nj * g[0], nj * g[1], nj * g[2], nj * g[3]});
            for (const auto& g : images[j]) gens.push_back({ni * g[0], ni * g[1], ni * g[2], ni * g[3]});
            const int64_t shorter = detail::count_short_vectors(gens, static_cast<i128>(4) * ni * nj);
            record(parts[i], shorter == 0, format(classes[i]) + " / " + format(classes[j]));
        }
    });
    for (const auto& p : parts) {
        s.cases += p.cases;
        if (p.failures > 0 && s.failures == 0) s.witness = p.witness;
        s.failures += p.failures;
    }
    s.seconds = since(t0);
    return s;
}

SuiteResult separation_direct(int64_t max_norm) {
    if (max_norm < 1 || max_norm > 16) fail(Errc::invalid_argument, "max_norm must be in [1, 16]");
    const auto t0 = Clock::now();
    SuiteResult s{"separation_direct"};
    std::vector<HurwitzRational> pts;
    std::set<RationalQuaternion, bool (*)(const RationalQuaternion&, const RationalQuaternion&)> values(
        [](const RationalQuaternion& a, const RationalQuaternion& b) { return a.c < b.c; });
    for (const auto& q : right_classes_up_to(max_norm))
        for (const auto& hr : enumerate_resonant(q).points)
            if (values.insert(to_rational(hr)).second) pts.push_back(hr);
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            auto g = separation_gap(pts[i], pts[j]);
            record(s, g.holds, format(pts[i]) + " vs " + format(pts[j]));
        }
    s.seconds = since(t0);
    return s;
}

}  // namespace hq
