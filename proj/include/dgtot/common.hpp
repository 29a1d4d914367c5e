#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dgtot {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Inclusive internal-degree interval on which degreewise computations are
/// certified.  Results outside a window are never claimed.
struct Window {
    int lo = 0;
    int hi = 0;
    bool contains(int j) const { return lo <= j && j <= hi; }
    int size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

/// Number of top window degrees that must be quiet (no new generators or
/// relations) before a degreewise presentation or resolution is certified.
inline constexpr int kWindowSlack = 3;

/// Sign rule for the interaction of the A-action with the differential of a
/// DG module.  Under `even` the differential is A-linear; under `koszul`
/// a homogeneous coefficient of degree q passes through the differential
/// with sign (-1)^q.
enum class SignConvention { even, koszul };

inline const char* to_string(SignConvention c) {
    return c == SignConvention::even ? "even" : "koszul";
}

inline long long binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace dgtot
