#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcast/calendar_io.hpp"
#include "mcast/date.hpp"
#include "mcast/fusion.hpp"

namespace mcast {

struct IndexEntry {
    Date date;
    std::vector<double> fused; // unit norm, dimension d+p
    std::vector<double> text;  // dimension d
    std::vector<double> macro; // dimension p, standardized
};

// Date-sorted store of training-period fused vectors. Immutable once built;
// concurrent read-only searches are safe.
struct CausalIndex {
    std::vector<IndexEntry> entries; // strictly increasing dates
    double alpha = 0;
    int text_dim = 0;
    int macro_dim = 0;
};

struct Neighbor {
    Date date;
    double sim_joint = 0;
    int rank = 0; // 1..K
};

struct RetrievalDiagnostics {
    Date query_date;
    Date neighbor_date;
    int rank = 0;
    double sim_joint = 0;
    double sim_text = 0;
    double macro_l2 = 0;
};

// Mean of the retrieved neighbors' text embeddings (the contextual memory).
struct ContextualMemory {
    Date date;
    std::vector<double> vector; // dimension d
    int k_used = 0;
};

// Fused vectors are built from each record's t_vec plus the standardized
// macro state (macro_scaler applied to z_vec).
CausalIndex build_index(const std::vector<AlignedRecord>& records, const ScalerParams& macro_scaler,
                        double alpha);

// Exact top-K inner-product search over entries with date < query_date and,
// when given, date < eligible_before (per-fold training masks). Ties break
// toward the earlier entry date. Fewer than K eligible entries yield a
// shorter list; zero eligible entries yield an empty list (no history).
std::vector<Neighbor> search_causal(const CausalIndex& index, const FusedQuery& query,
                                    Date query_date, int k,
                                    std::optional<Date> eligible_before = std::nullopt);

ContextualMemory contextual_memory(const CausalIndex& index, const std::vector<Neighbor>& neighbors,
                                   Date query_date = Date{});

std::vector<RetrievalDiagnostics> diagnostics(const CausalIndex& index, Date query_date,
                                              const std::vector<double>& query_text,
                                              const std::vector<double>& query_macro_std,
                                              const std::vector<Neighbor>& neighbors);

std::string diagnostics_csv(const std::vector<RetrievalDiagnostics>& rows);

// Versioned text snapshot with a checksum; reloads answer queries
// identically.
void save_index(const CausalIndex& index, const std::string& path);
CausalIndex load_index(const std::string& path);

} // namespace mcast
