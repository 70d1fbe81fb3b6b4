#include "ncsim/gz.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>

#include "ncsim/errors.hpp"

namespace ncsim::gz {

namespace {

std::int64_t isqrt64(std::int64_t n) {
    if (n < 0) {
        return -1;
    }
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) {
        --r;
    }
    while ((r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

} // namespace

RationalUnitVector::RationalUnitVector(std::int64_t x_, std::int64_t y_,
                                       std::int64_t z_)
    : x(x_), y(y_), z(z_) {
    const std::int64_t g = std::gcd(std::gcd(std::abs(x), std::abs(y)), std::abs(z));
    if (g == 0) {
        throw ValidationError("rational unit vector: zero vector");
    }
    if (g != 1) {
        throw ValidationError("rational unit vector: components are not primitive");
    }
    const std::int64_t first = x != 0 ? x : (y != 0 ? y : z);
    if (first < 0) {
        throw ValidationError("rational unit vector: sign not normalized "
                              "(first nonzero component must be positive)");
    }
    const std::int64_t norm2 = x * x + y * y + z * z;
    norm = isqrt64(norm2);
    if (norm * norm != norm2) {
        throw ValidationError("rational unit vector: component square sum is not a "
                              "perfect square, no rational unit representative");
    }
    const int odd = int(x & 1) + int(y & 1) + int(z & 1);
    if (odd != 1) {
        // Unreachable for primitive solutions of x^2+y^2+z^2=n^2.
        throw Error("rational unit vector: parity invariant broken");
    }
}

int RationalUnitVector::odd_position() const {
    if (x & 1) {
        return 0;
    }
    if (y & 1) {
        return 1;
    }
    return 2;
}

RationalUnitVector reduce(const std::array<Rational64, 3>& raw) {
    using boost::multiprecision::cpp_int;
    for (const auto& r : raw) {
        if (r.den == 0) {
            throw ValidationError("reduce: zero denominator");
        }
    }
    cpp_int d0 = raw[0].den, d1 = raw[1].den, d2 = raw[2].den;
    const cpp_int common = lcm(lcm(abs(d0), abs(d1)), abs(d2));
    std::array<cpp_int, 3> ints;
    for (int i = 0; i < 3; ++i) {
        ints[i] = cpp_int(raw[i].num) * (common / raw[i].den);
    }
    cpp_int g = gcd(gcd(abs(ints[0]), abs(ints[1])), abs(ints[2]));
    if (g == 0) {
        throw ValidationError("reduce: zero vector");
    }
    for (auto& c : ints) {
        c /= g;
    }
    for (const auto& c : ints) {
        if (c != 0) {
            if (c < 0) {
                for (auto& x : ints) {
                    x = -x;
                }
            }
            break;
        }
    }
    std::array<std::int64_t, 3> out{};
    for (int i = 0; i < 3; ++i) {
        if (ints[i] > std::numeric_limits<std::int64_t>::max() ||
            ints[i] < std::numeric_limits<std::int64_t>::min()) {
            throw ValidationError("reduce: primitive form exceeds 64-bit range");
        }
        out[i] = static_cast<std::int64_t>(ints[i]);
    }
    return RationalUnitVector(out[0], out[1], out[2]);
}

int gz_colour(const RationalUnitVector& v) {
    return v.odd_position() == 0 ? 1 : 0;
}

std::vector<RationalUnitVector> enumerate_rational_unit_vectors(int max_component) {
    if (max_component < 1) {
        throw ValidationError("enumerate: max_component must be >= 1");
    }
    const std::int64_t m = max_component;
    std::vector<RationalUnitVector> out;
    // Sign normalization: first nonzero component positive, so x >= 0.
    for (std::int64_t x = 0; x <= m; ++x) {
        const std::int64_t ylo = x == 0 ? 0 : -m;
        for (std::int64_t y = ylo; y <= m; ++y) {
            const std::int64_t zlo = (x == 0 && y == 0) ? 0 : -m;
            for (std::int64_t z = zlo; z <= m; ++z) {
                if (x == 0 && y == 0 && z == 0) {
                    continue;
                }
                if (std::gcd(std::gcd(x, std::abs(y)), std::abs(z)) != 1) {
                    continue;
                }
                const std::int64_t norm2 = x * x + y * y + z * z;
                const std::int64_t n = isqrt64(norm2);
                if (n * n != norm2) {
                    continue;
                }
                out.emplace_back(x, y, z);
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const RationalUnitVector& a, const RationalUnitVector& b) {
                  return a.components() < b.components();
              });
    return out;
}

namespace {

struct CrossIndex {
    const std::vector<RationalUnitVector>& vectors;

    // Index of the primitive sign-normalized form of u x v, or -1 when it
    // falls outside the enumerated component bound.
    int third(const RationalUnitVector& u, const RationalUnitVector& v) const {
        std::int64_t cx = u.y * v.z - u.z * v.y;
        std::int64_t cy = u.z * v.x - u.x * v.z;
        std::int64_t cz = u.x * v.y - u.y * v.x;
        std::int64_t g = std::gcd(std::gcd(std::abs(cx), std::abs(cy)), std::abs(cz));
        if (g == 0) {
            return -1;
        }
        cx /= g;
        cy /= g;
        cz /= g;
        const std::int64_t first = cx != 0 ? cx : (cy != 0 ? cy : cz);
        if (first < 0) {
            cx = -cx;
            cy = -cy;
            cz = -cz;
        }
        const std::array<std::int64_t, 3> key{cx, cy, cz};
        auto it = std::lower_bound(
            vectors.begin(), vectors.end(), key,
            [](const RationalUnitVector& a, const std::array<std::int64_t, 3>& k) {
                return a.components() < k;
            });
        if (it == vectors.end() || it->components() != key) {
            return -1;
        }
        return static_cast<int>(it - vectors.begin());
    }
};

std::int64_t dot(const RationalUnitVector& a, const RationalUnitVector& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

// Triads for pairs whose lowest index is i; shared by the serial and
// parallel drivers so their outputs are identical by construction.
void triads_for_first(int i, const std::vector<RationalUnitVector>& vectors,
                      const CrossIndex& index, std::vector<RationalTriad>& out) {
    const int n = static_cast<int>(vectors.size());
    for (int j = i + 1; j < n; ++j) {
        if (dot(vectors[i], vectors[j]) != 0) {
            continue;
        }
        const int k = index.third(vectors[i], vectors[j]);
        // Accepting only k > j counts each triad exactly once, via its two
        // lowest-index members.
        if (k > j) {
            out.push_back(RationalTriad{vectors[i], vectors[j], vectors[k]});
        }
    }
}

} // namespace

std::vector<RationalTriad> enumerate_rational_triads_serial(int max_component) {
    const auto vectors = enumerate_rational_unit_vectors(max_component);
    const CrossIndex index{vectors};
    std::vector<RationalTriad> out;
    for (int i = 0; i < static_cast<int>(vectors.size()); ++i) {
        triads_for_first(i, vectors, index, out);
    }
    return out;
}

std::vector<RationalTriad> enumerate_rational_triads(int max_component) {
    const auto vectors = enumerate_rational_unit_vectors(max_component);
    const CrossIndex index{vectors};
    const int n = static_cast<int>(vectors.size());
    std::vector<std::vector<RationalTriad>> buckets(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < n; ++i) {
        triads_for_first(i, vectors, index, buckets[i]);
    }
    std::vector<RationalTriad> out;
    for (auto& bucket : buckets) {
        out.insert(out.end(), bucket.begin(), bucket.end());
    }
    return out;
}

VerifySummary verify_parity_colouring(int max_component) {
    VerifySummary summary;
    summary.max_component = max_component;
    summary.vector_count = enumerate_rational_unit_vectors(max_component).size();
    const auto triads = enumerate_rational_triads(max_component);
    summary.triad_count = triads.size();
    for (const auto& triad : triads) {
        const int ones =
            gz_colour(triad[0]) + gz_colour(triad[1]) + gz_colour(triad[2]);
        // The lemma the one-1 property rests on: odd positions pairwise
        // distinct within an orthogonal triad.
        const bool distinct = triad[0].odd_position() != triad[1].odd_position() &&
                              triad[0].odd_position() != triad[2].odd_position() &&
                              triad[1].odd_position() != triad[2].odd_position();
        if (ones != 1 || !distinct) {
            ++summary.violations;
        }
    }
    return summary;
}

} // namespace ncsim::gz
