#include "mcast/fusion.hpp"

#include <cmath>

#include "mcast/errors.hpp"

namespace mcast {

double l2_norm(const std::vector<double>& v) {
    double n2 = 0;
    for (double x : v) {
        n2 += x * x;
    }
    return std::sqrt(n2);
}

std::vector<double> l2_normalize(const std::vector<double>& v) {
    double n = l2_norm(v);
    if (n <= 1e-12) {
        throw ValidationError("l2_normalize: near-zero norm");
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] / n;
    }
    return out;
}

FusedQuery fuse(const std::vector<double>& t_vec, const std::vector<double>& z_vec, double alpha,
                Date date) {
    if (alpha < 0) {
        throw ValidationError("fuse: alpha must be non-negative");
    }
    if (t_vec.empty()) {
        throw ValidationError("fuse: empty text vector");
    }
    std::vector<double> cat;
    cat.reserve(t_vec.size() + z_vec.size());
    cat.insert(cat.end(), t_vec.begin(), t_vec.end());
    for (double z : z_vec) {
        cat.push_back(alpha * z);
    }
    FusedQuery q;
    q.date = date;
    q.vector = l2_normalize(cat);
    q.alpha = alpha;
    return q;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

} // namespace mcast
