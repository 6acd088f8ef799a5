#pragma once

#include <vector>

#include "mcast/date.hpp"

namespace mcast {

// L2-normalized concatenation [t ; alpha*z] used only for retrieval.
struct FusedQuery {
    Date date;
    std::vector<double> vector; // unit norm, dimension d+p
    double alpha = 0;
};

double l2_norm(const std::vector<double>& v);

// v / ||v||2; throws ValidationError when the norm is below 1e-12.
std::vector<double> l2_normalize(const std::vector<double>& v);

FusedQuery fuse(const std::vector<double>& t_vec, const std::vector<double>& z_vec, double alpha,
                Date date = Date{});

double dot(const std::vector<double>& a, const std::vector<double>& b);

} // namespace mcast
