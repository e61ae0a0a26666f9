#pragma once

// Straight-line re-implementations of the operator formulas, written
// independently of include/modde. They replay the same random draw order so
// their output can be compared with the library component by component.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "modde/bchm.hpp"
#include "modde/core.hpp"
#include "modde/mutation.hpp"

namespace oracle {

using modde::Population;
using modde::Rng;
using modde::Vector;

struct Donor {
    Vector donor;
    Vector base;
};

inline std::size_t pick_other(Rng& rng, std::size_t m, std::size_t target, const std::vector<std::size_t>& taken)
{
    for (;;) {
        const std::size_t r = rng.index(m);
        if (r == target) {
            continue;
        }
        bool seen = false;
        for (auto t : taken) {
            seen = seen || t == r;
        }
        if (!seen) {
            return r;
        }
    }
}

inline std::size_t roulette_pick(Rng& rng, const std::vector<double>& w, std::size_t target,
                                 const std::vector<std::size_t>& taken)
{
    auto ok = [&](std::size_t i) { return i != target && std::find(taken.begin(), taken.end(), i) == taken.end(); };
    double total = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (ok(i)) {
            total += w[i];
        }
    }
    if (total <= 0) {
        return pick_other(rng, w.size(), target, taken);
    }
    const double u = rng.uniform() * total;
    double acc = 0;
    std::size_t last = w.size();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!ok(i) || w[i] <= 0) {
            continue;
        }
        last = i;
        acc += w[i];
        if (u < acc) {
            return i;
        }
    }
    return last;
}

inline std::size_t argmin(const Population& pop)
{
    std::size_t b = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        if (pop[i].fitness < pop[b].fitness) {
            b = i;
        }
    }
    return b;
}

/// Replays modde::mutate's draws for `s` and evaluates the printed formula.
inline Donor mutate(modde::MutationStrategy s, const Population& pop, std::size_t i, double F, Rng& rng)
{
    using S = modde::MutationStrategy;
    const std::size_t m = pop.size();
    const std::size_t n = pop[0].x.size();
    auto X = [&](std::size_t k, std::size_t j) { return pop[k].x[j]; };
    auto f = [&](std::size_t k) { return pop[k].fitness; };
    std::vector<std::size_t> r;
    auto draw = [&](int count) {
        for (int c = 0; c < count; ++c) {
            r.push_back(pick_other(rng, m, i, r));
        }
    };
    Donor d{Vector(n), Vector(n)};
    const std::size_t best = argmin(pop);

    switch (s) {
    case S::Rand1:
        draw(3);
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(r[0], j);
            d.donor[j] = X(r[0], j) + F * (X(r[1], j) - X(r[2], j));
        }
        break;
    case S::Best1:
        draw(2);
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(best, j);
            d.donor[j] = X(best, j) + F * (X(r[0], j) - X(r[1], j));
        }
        break;
    case S::TargetToBest1:
        draw(2);
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(i, j);
            d.donor[j] = X(i, j) + F * (X(best, j) - X(i, j)) + F * (X(r[0], j) - X(r[1], j));
        }
        break;
    case S::Best2:
        draw(4);
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(best, j);
            d.donor[j] = X(best, j) + F * (X(r[0], j) - X(r[1], j)) + F * (X(r[2], j) - X(r[3], j));
        }
        break;
    case S::Rand2:
        draw(5);
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(r[0], j);
            d.donor[j] = X(r[0], j) + F * (X(r[1], j) - X(r[2], j)) + F * (X(r[3], j) - X(r[4], j));
        }
        break;
    case S::TargetToBest2:
        draw(4);
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(i, j);
            d.donor[j] = X(i, j) + F * (X(best, j) - X(i, j)) + F * (X(r[0], j) - X(r[1], j)) +
                         F * (X(r[2], j) - X(r[3], j));
        }
        break;
    case S::TargetToPBest1:
    case S::RankingPBest1: {
        std::vector<std::size_t> sorted(m);
        std::iota(sorted.begin(), sorted.end(), std::size_t{0});
        std::stable_sort(sorted.begin(), sorted.end(), [&](auto a, auto b) { return f(a) < f(b); });
        const double p = std::max(0.05, 3.0 / static_cast<double>(m));
        std::size_t pool = static_cast<std::size_t>(std::lround(p * static_cast<double>(m)));
        pool = std::max<std::size_t>(1, std::min(pool, m));
        const std::size_t pbest = sorted[rng.index(pool)];
        if (s == S::TargetToPBest1) {
            draw(2);
        } else {
            std::vector<double> w(m);
            for (std::size_t k = 0; k < m; ++k) {
                w[sorted[k]] = static_cast<double>(m - k);
            }
            r.push_back(roulette_pick(rng, w, i, r));
            draw(1);
        }
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(i, j);
            d.donor[j] = X(i, j) + F * (X(pbest, j) - X(i, j)) + F * (X(r[0], j) - X(r[1], j));
        }
        break;
    }
    case S::Rand2Dir: {
        draw(4);
        std::size_t a = r[0], b = r[1], c = r[2], e = r[3];
        if (f(b) < f(a)) {
            std::swap(a, b);
        }
        if (f(e) < f(c)) {
            std::swap(c, e);
        }
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(a, j);
            d.donor[j] = X(a, j) + F / 2 * (X(a, j) - X(b, j) + X(c, j) - X(e, j));
        }
        break;
    }
    case S::Nsde: {
        draw(3);
        double factor = 0;
        if (rng.uniform() < 0.5) {
            factor = rng.normal(0.5, 0.5);
        } else {
            factor = rng.cauchy(0.0, 1.0);
        }
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(r[0], j);
            d.donor[j] = X(r[0], j) + (X(r[1], j) - X(r[2], j)) * factor;
        }
        break;
    }
    case S::Trigonometric: {
        draw(3);
        const double pp = std::abs(f(r[0])) + std::abs(f(r[1])) + std::abs(f(r[2]));
        if (rng.uniform() < 0.05 && pp > 0) {
            const double p1 = std::abs(f(r[0])) / pp;
            const double p2 = std::abs(f(r[1])) / pp;
            const double p3 = std::abs(f(r[2])) / pp;
            for (std::size_t j = 0; j < n; ++j) {
                const double a = X(r[0], j), b = X(r[1], j), c = X(r[2], j);
                d.base[j] = (a + b + c) / 3;
                d.donor[j] = (a + b + c) / 3 + (p2 - p1) * (a - b) + (p3 - p2) * (b - c) + (p1 - p3) * (c - a);
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                d.base[j] = X(r[0], j);
                d.donor[j] = X(r[0], j) + F * (X(r[1], j) - X(r[2], j));
            }
        }
        break;
    }
    case S::TwoOpt1:
    case S::TwoOpt2: {
        draw(s == S::TwoOpt1 ? 3 : 5);
        const bool first = f(r[0]) < f(r[1]);
        const std::size_t base = first ? r[0] : r[1];
        const std::size_t other = first ? r[1] : r[0];
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(base, j);
            d.donor[j] = X(base, j) + F * (X(other, j) - X(r[2], j));
            if (s == S::TwoOpt2) {
                d.donor[j] += F * (X(r[3], j) - X(r[4], j));
            }
        }
        break;
    }
    case S::ProximityRand1: {
        std::vector<double> w(m, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            if (k == i) {
                continue;
            }
            double acc = 0;
            for (std::size_t j = 0; j < n; ++j) {
                acc += (X(k, j) - X(i, j)) * (X(k, j) - X(i, j));
            }
            w[k] = std::sqrt(acc);
        }
        for (int c = 0; c < 3; ++c) {
            r.push_back(roulette_pick(rng, w, i, r));
        }
        for (std::size_t j = 0; j < n; ++j) {
            d.base[j] = X(r[0], j);
            d.donor[j] = X(r[0], j) + F * (X(r[1], j) - X(r[2], j));
        }
        break;
    }
    }
    return d;
}

// Componentwise boundary handling, written from the printed case formulas.

inline double reflect_iterated(double v, double lo, double hi)
{
    while (v < lo || v > hi) {
        v = v < lo ? 2 * lo - v : 2 * hi - v;
    }
    return v;
}

inline double wrap_printed(double v, double lo, double hi)
{
    const double w = std::abs(hi - lo);
    if (v < lo) {
        return hi - std::fmod(lo - v, w);
    }
    if (v > hi) {
        return lo + std::fmod(v - hi, w);
    }
    return v;
}

/// Boundary transformation by explicit case analysis: reflect once about the
/// nearest preimage edge for values within two offsets, otherwise shift by
/// whole periods first.
inline double transform_cases(double v, double lo, double hi)
{
    const double al = std::min((hi - lo) / 2, 1 + std::abs(lo) / 20);
    const double au = std::min((hi - lo) / 2, 1 + std::abs(hi) / 20);
    if (v >= lo + al && v <= hi - au) {
        return v;
    }
    const double a = lo - al;
    const double b = hi + au;
    const double period = 2 * (b - a);
    while (v < a - (b - a)) {
        v += period;
    }
    while (v > b + (b - a)) {
        v -= period;
    }
    if (v < a) {
        v = 2 * a - v;
    } else if (v > b) {
        v = 2 * b - v;
    }
    if (v < lo + al) {
        return lo + (v - a) * (v - a) / (4 * al);
    }
    if (v > hi - au) {
        return hi - (v - b) * (v - b) / (4 * au);
    }
    return v;
}

/// Vector-level repair written from the case definitions. Random cases draw
/// from `rng` in ascending component order, one draw per violated component.
inline Vector repair(modde::BchmKind kind, const Vector& v, const Vector& base, const Vector& target,
                     const Vector& lo, const Vector& hi, Rng& rng)
{
    using K = modde::BchmKind;
    const std::size_t n = v.size();
    Vector out = v;
    bool infeasible = false;
    for (std::size_t j = 0; j < n; ++j) {
        infeasible = infeasible || v[j] < lo[j] || v[j] > hi[j];
    }
    auto toward = [&](const Vector& anchor) {
        double alpha = 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (v[j] > hi[j]) {
                alpha = std::min(alpha, (hi[j] - anchor[j]) / (v[j] - anchor[j]));
            } else if (v[j] < lo[j]) {
                alpha = std::min(alpha, (lo[j] - anchor[j]) / (v[j] - anchor[j]));
            }
        }
        Vector r(n);
        for (std::size_t j = 0; j < n; ++j) {
            r[j] = anchor[j] + alpha * (v[j] - anchor[j]);
        }
        return r;
    };
    switch (kind) {
    case K::Conservatism:
        return infeasible ? base : v;
    case K::ProjectionBase:
        return infeasible ? toward(base) : v;
    case K::ProjectionMidpoint: {
        Vector mid(n);
        for (std::size_t j = 0; j < n; ++j) {
            mid[j] = (lo[j] + hi[j]) / 2;
        }
        return infeasible ? toward(mid) : v;
    }
    case K::Transformation:
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = transform_cases(v[j], lo[j], hi[j]);
        }
        return out;
    default:
        break;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double x = v[j];
        const double l = lo[j];
        const double h = hi[j];
        if (x >= l && x <= h) {
            continue;
        }
        const bool below = x < l;
        switch (kind) {
        case K::Reinitialization:
            out[j] = l + (h - l) * rng.uniform();
            break;
        case K::Projection:
            out[j] = below ? l : h;
            break;
        case K::Reflection:
            out[j] = reflect_iterated(x, l, h);
            break;
        case K::Wrapping:
            out[j] = wrap_printed(x, l, h);
            break;
        case K::RandBase:
            out[j] = below ? l + (base[j] - l) * rng.uniform() : base[j] + (h - base[j]) * rng.uniform();
            break;
        case K::MidpointBase:
            out[j] = below ? (l + base[j]) / 2 : (base[j] + h) / 2;
            break;
        case K::MidpointTarget:
            out[j] = below ? (l + target[j]) / 2 : (target[j] + h) / 2;
            break;
        default:
            break;
        }
    }
    return out;
}

} // namespace oracle
