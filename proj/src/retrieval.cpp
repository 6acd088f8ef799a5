#include "mcast/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mcast/errors.hpp"
#include "mcast/io_util.hpp"

namespace mcast {

CausalIndex build_index(const std::vector<AlignedRecord>& records, const ScalerParams& macro_scaler,
                        double alpha) {
    if (records.empty()) {
        throw ValidationError("build_index: no records");
    }
    CausalIndex index;
    index.alpha = alpha;
    index.text_dim = static_cast<int>(records.front().t_vec.size());
    index.macro_dim = static_cast<int>(records.front().z_vec.size());
    index.entries.reserve(records.size());
    for (const auto& rec : records) {
        if (static_cast<int>(rec.t_vec.size()) != index.text_dim ||
            static_cast<int>(rec.z_vec.size()) != index.macro_dim) {
            throw ValidationError("build_index: inconsistent dimensions at " +
                                  rec.date.to_string());
        }
        IndexEntry e;
        e.date = rec.date;
        e.text = rec.t_vec;
        e.macro = macro_scaler.apply(rec.z_vec);
        e.fused = fuse(e.text, e.macro, alpha).vector;
        index.entries.push_back(std::move(e));
    }
    std::sort(index.entries.begin(), index.entries.end(),
              [](const IndexEntry& a, const IndexEntry& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < index.entries.size(); ++i) {
        if (index.entries[i].date == index.entries[i - 1].date) {
            throw ValidationError("build_index: duplicate date " +
                                  index.entries[i].date.to_string());
        }
    }
    return index;
}

std::vector<Neighbor> search_causal(const CausalIndex& index, const FusedQuery& query,
                                    Date query_date, int k, std::optional<Date> eligible_before) {
    if (k < 1) {
        throw ValidationError("search_causal: K must be >= 1");
    }
    if (static_cast<int>(query.vector.size()) != index.text_dim + index.macro_dim) {
        throw ValidationError("search_causal: query dimension mismatch");
    }
    Date cutoff = query_date;
    if (eligible_before && *eligible_before < cutoff) {
        cutoff = *eligible_before;
    }
    // entries are date-sorted, so the eligible set is a prefix
    auto end = std::lower_bound(
        index.entries.begin(), index.entries.end(), cutoff,
        [](const IndexEntry& e, const Date& d) { return e.date < d; });

    std::vector<Neighbor> scored;
    scored.reserve(static_cast<std::size_t>(end - index.entries.begin()));
    for (auto it = index.entries.begin(); it != end; ++it) {
        scored.push_back({it->date, dot(query.vector, it->fused), 0});
    }
    auto better = [](const Neighbor& a, const Neighbor& b) {
        if (a.sim_joint != b.sim_joint) {
            return a.sim_joint > b.sim_joint;
        }
        return a.date < b.date;
    };
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), scored.size());
    std::partial_sort(scored.begin(), scored.begin() + take, scored.end(), better);
    scored.resize(take);
    for (std::size_t i = 0; i < scored.size(); ++i) {
        scored[i].rank = static_cast<int>(i) + 1;
    }
    return scored;
}

namespace {

const IndexEntry& entry_at(const CausalIndex& index, Date date) {
    auto it = std::lower_bound(
        index.entries.begin(), index.entries.end(), date,
        [](const IndexEntry& e, const Date& d) { return e.date < d; });
    if (it == index.entries.end() || it->date != date) {
        throw ValidationError("index lookup: no entry at " + date.to_string());
    }
    return *it;
}

} // namespace

ContextualMemory contextual_memory(const CausalIndex& index, const std::vector<Neighbor>& neighbors,
                                   Date query_date) {
    if (neighbors.empty()) {
        throw ValidationError("contextual_memory: empty neighbor list");
    }
    ContextualMemory mem;
    mem.date = query_date;
    mem.k_used = static_cast<int>(neighbors.size());
    mem.vector.assign(index.text_dim, 0.0);
    for (const auto& n : neighbors) {
        const IndexEntry& e = entry_at(index, n.date);
        for (int i = 0; i < index.text_dim; ++i) {
            mem.vector[i] += e.text[i];
        }
    }
    for (double& v : mem.vector) {
        v /= neighbors.size();
    }
    return mem;
}

std::vector<RetrievalDiagnostics> diagnostics(const CausalIndex& index, Date query_date,
                                              const std::vector<double>& query_text,
                                              const std::vector<double>& query_macro_std,
                                              const std::vector<Neighbor>& neighbors) {
    std::vector<RetrievalDiagnostics> rows;
    rows.reserve(neighbors.size());
    const double qnorm = l2_norm(query_text);
    for (const auto& n : neighbors) {
        const IndexEntry& e = entry_at(index, n.date);
        RetrievalDiagnostics d;
        d.query_date = query_date;
        d.neighbor_date = n.date;
        d.rank = n.rank;
        d.sim_joint = n.sim_joint;
        d.sim_text = dot(query_text, e.text) / (qnorm * l2_norm(e.text));
        double l2 = 0;
        for (std::size_t i = 0; i < query_macro_std.size(); ++i) {
            double diff = query_macro_std[i] - e.macro[i];
            l2 += diff * diff;
        }
        d.macro_l2 = std::sqrt(l2);
        rows.push_back(d);
    }
    return rows;
}

std::string diagnostics_csv(const std::vector<RetrievalDiagnostics>& rows) {
    std::ostringstream out;
    out << "query_date,neighbor_date,rank,sim_joint,sim_text,macro_L2\n";
    for (const auto& r : rows) {
        out << r.query_date.to_string() << "," << r.neighbor_date.to_string() << "," << r.rank
            << "," << format_double(r.sim_joint) << "," << format_double(r.sim_text) << ","
            << format_double(r.macro_l2) << "\n";
    }
    return out.str();
}

void save_index(const CausalIndex& index, const std::string& path) {
    std::ostringstream body;
    for (const auto& e : index.entries) {
        body << e.date.to_string();
        for (double v : e.text) body << "," << format_double(v);
        for (double v : e.macro) body << "," << format_double(v);
        body << "\n";
    }
    std::ostringstream out;
    out << "# mcast-index v1 d=" << index.text_dim << " p=" << index.macro_dim
        << " alpha=" << format_double(index.alpha) << " n=" << index.entries.size()
        << " checksum=" << fnv1a_hex(body.str()) << "\n"
        << body.str();
    write_file(path, out.str());
}

CausalIndex load_index(const std::string& path) {
    std::string content = read_file(path);
    auto nl = content.find('\n');
    if (nl == std::string::npos) {
        throw ValidationError(path + ": not an index snapshot");
    }
    std::string header = content.substr(0, nl);
    std::string body = content.substr(nl + 1);
    CausalIndex index;
    char alpha_buf[64] = {0};
    char checksum_buf[32] = {0};
    int n = 0;
    if (std::sscanf(header.c_str(), "# mcast-index v1 d=%d p=%d alpha=%63s n=%d checksum=%31s",
                    &index.text_dim, &index.macro_dim, alpha_buf, &n, checksum_buf) != 5) {
        throw ValidationError(path + ": bad index header");
    }
    index.alpha = parse_double(alpha_buf, path);
    if (fnv1a_hex(body) != checksum_buf) {
        throw ProtocolError(path + ": index checksum mismatch");
    }
    std::istringstream ss(body);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) {
            continue;
        }
        auto f = split_csv_line(line);
        const std::size_t expected = 1 + index.text_dim + index.macro_dim;
        if (f.size() != expected) {
            throw ValidationError(path + ": bad entry row");
        }
        IndexEntry e;
        e.date = Date::parse(f[0]);
        std::size_t k = 1;
        for (int i = 0; i < index.text_dim; ++i) e.text.push_back(parse_double(f[k++], path));
        for (int i = 0; i < index.macro_dim; ++i) e.macro.push_back(parse_double(f[k++], path));
        e.fused = fuse(e.text, e.macro, index.alpha).vector;
        index.entries.push_back(std::move(e));
    }
    if (static_cast<int>(index.entries.size()) != n) {
        throw ValidationError(path + ": entry count mismatch with header");
    }
    return index;
}

} // namespace mcast
