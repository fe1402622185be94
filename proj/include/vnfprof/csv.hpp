#pragma once

/// CSV emit/ingest for every artifact the experiment commands produce. Each
/// file starts with its schema header row; readers reject mismatches.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vnfprof/agent.hpp"
#include "vnfprof/domain.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/metrics.hpp"
#include "vnfprof/offline.hpp"
#include "vnfprof/oracle.hpp"

namespace vnfprof {

namespace csv {

/// Shortest round-trippable representation, stable across runs.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        out.push_back(field);
    return out;
}

class Writer {
public:
    Writer(const std::string& path, const std::string& header) : out_(path) {
        if (!out_)
            throw ParseError("cannot open " + path + " for writing");
        out_ << header << "\n";
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i)
                out_ << ',';
            out_ << fields[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

class Reader {
public:
    Reader(const std::string& path, const std::string& expected_header) : in_(path) {
        if (!in_)
            throw ParseError("cannot open " + path);
        std::string header;
        if (!std::getline(in_, header))
            throw ParseError(path + ": empty file");
        if (header != expected_header)
            throw ParseError(path + ": schema mismatch, expected '" + expected_header +
                             "' got '" + header + "'");
    }

    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in_, line)) {
            if (line.empty())
                continue;
            fields = split_line(line);
            return true;
        }
        return false;
    }

private:
    std::ifstream in_;
};

} // namespace csv

// ---------------------------------------------------------------------------
// Profiling dataset

inline constexpr const char* kDatasetHeader =
    "vcpu,mem_mb,lc_mbps,input_mbps,cpu_util,mem_util,latency_ms,output_mbps,kpi_ok";

inline void write_dataset(const std::string& path,
                          const std::vector<ProfilingRecord>& records) {
    csv::Writer w(path, kDatasetHeader);
    for (const ProfilingRecord& r : records)
        w.row({csv::num(r.resources.vcpu), csv::num(r.resources.mem),
               csv::num(r.resources.lc), csv::num(r.input_rate), csv::num(r.kpi.cpu_util),
               csv::num(r.kpi.mem_util), csv::num(r.kpi.latency),
               csv::num(r.kpi.output_rate), r.kpi_ok ? "1" : "0"});
}

inline std::vector<ProfilingRecord> read_dataset(const std::string& path) {
    csv::Reader reader(path, kDatasetHeader);
    std::vector<ProfilingRecord> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != 9)
            throw ParseError(path + ": expected 9 fields per row");
        ProfilingRecord r;
        r.resources = {std::stod(f[0]), std::stod(f[1]), std::stod(f[2])};
        r.input_rate = std::stod(f[3]);
        r.kpi = {std::stod(f[4]), std::stod(f[5]), std::stod(f[6]), std::stod(f[7])};
        r.kpi_ok = f[8] == "1";
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Oracle tables and Pareto fronts

inline constexpr const char* kOracleHeader =
    "vcpu,mem_mb,lc_mbps,runs,mean_cpu_util,mean_mem_util,mean_latency_ms,mean_output_mbps,"
    "ci95_cpu_util,ci95_mem_util,ci95_latency_ms,ci95_output_mbps,kpi_ok";

inline void write_oracle_entries(const std::string& path,
                                 const std::vector<OracleEntry>& entries) {
    csv::Writer w(path, kOracleHeader);
    for (const OracleEntry& e : entries)
        w.row({csv::num(e.resources.vcpu), csv::num(e.resources.mem),
               csv::num(e.resources.lc), std::to_string(e.runs),
               csv::num(e.mean_kpi.cpu_util), csv::num(e.mean_kpi.mem_util),
               csv::num(e.mean_kpi.latency), csv::num(e.mean_kpi.output_rate),
               csv::num(e.ci95_kpi.cpu_util), csv::num(e.ci95_kpi.mem_util),
               csv::num(e.ci95_kpi.latency), csv::num(e.ci95_kpi.output_rate),
               e.kpi_ok ? "1" : "0"});
}

inline std::vector<OracleEntry> read_oracle_entries(const std::string& path) {
    csv::Reader reader(path, kOracleHeader);
    std::vector<OracleEntry> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != 13)
            throw ParseError(path + ": expected 13 fields per row");
        OracleEntry e;
        e.resources = {std::stod(f[0]), std::stod(f[1]), std::stod(f[2])};
        e.runs = std::stoi(f[3]);
        e.mean_kpi = {std::stod(f[4]), std::stod(f[5]), std::stod(f[6]), std::stod(f[7])};
        e.ci95_kpi = {std::stod(f[8]), std::stod(f[9]), std::stod(f[10]), std::stod(f[11])};
        e.kpi_ok = f[12] == "1";
        out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scenario summaries

inline constexpr const char* kScenarioHeader =
    "w_cpu,w_mem,w_lc,vcpu_pct,mem_pct,or_lc_pct,err_vcpu,err_vcpu_ci95,err_mem,"
    "err_mem_ci95,err_lc,err_lc_ci95";

inline void write_scenarios(const std::string& path,
                            const std::vector<ScenarioResult>& rows) {
    csv::Writer w(path, kScenarioHeader);
    for (const ScenarioResult& r : rows)
        w.row({csv::num(r.weights.w_cpu), csv::num(r.weights.w_mem),
               csv::num(r.weights.w_lc), csv::num(r.vcpu_pct), csv::num(r.mem_pct),
               csv::num(r.or_lc_pct), csv::num(r.err_vcpu), csv::num(r.err_vcpu_ci),
               csv::num(r.err_mem), csv::num(r.err_mem_ci), csv::num(r.err_lc),
               csv::num(r.err_lc_ci)});
}

inline std::vector<ScenarioResult> read_scenarios(const std::string& path) {
    csv::Reader reader(path, kScenarioHeader);
    std::vector<ScenarioResult> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != 12)
            throw ParseError(path + ": expected 12 fields per row");
        ScenarioResult r;
        r.weights = {std::stod(f[0]), std::stod(f[1]), std::stod(f[2])};
        r.vcpu_pct = std::stod(f[3]);
        r.mem_pct = std::stod(f[4]);
        r.or_lc_pct = std::stod(f[5]);
        r.err_vcpu = std::stod(f[6]);
        r.err_vcpu_ci = std::stod(f[7]);
        r.err_mem = std::stod(f[8]);
        r.err_mem_ci = std::stod(f[9]);
        r.err_lc = std::stod(f[10]);
        r.err_lc_ci = std::stod(f[11]);
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Benchmark error series (one row per landmark x model x resource)

inline constexpr const char* kErrorsHeader = "episode,model,resource,error_pct,ci95";

struct ErrorRow {
    int episode = 0;
    std::string model;    // rl | mlp | rf
    std::string resource; // vcpu | mem | lc
    double error_pct = 0.0;
    double ci95 = 0.0;
};

inline void write_errors(const std::string& path, const std::vector<ErrorRow>& rows) {
    csv::Writer w(path, kErrorsHeader);
    for (const ErrorRow& r : rows)
        w.row({std::to_string(r.episode), r.model, r.resource, csv::num(r.error_pct),
               csv::num(r.ci95)});
}

inline std::vector<ErrorRow> read_errors(const std::string& path) {
    csv::Reader reader(path, kErrorsHeader);
    std::vector<ErrorRow> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != 5)
            throw ParseError(path + ": expected 5 fields per row");
        out.push_back({std::stoi(f[0]), f[1], f[2], std::stod(f[3]), std::stod(f[4])});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Q-table snapshots

inline constexpr const char* kQTableHeader =
    "vcpu_idx,mem_idx,lc_idx,kpi_flags,action,q_cpu,q_mem,q_lc";

inline void write_qtables(const std::string& path, const QTableSet& qset,
                          const ResourceGrid& grid) {
    csv::Writer w(path, kQTableHeader);
    // Collect the union of visited keys, emitted in packed-key order.
    std::vector<std::int32_t> keys;
    for (Resource o : kResources)
        for (const auto& [key, _] : qset.table(o))
            keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    const int m = grid.mem.level_count();
    const int l = grid.lc.level_count();
    for (std::int32_t packed : keys) {
        StateKey k;
        k.kpi_flags = static_cast<std::uint8_t>(packed % 16);
        std::int32_t rest = packed / 16;
        k.lc_idx = static_cast<std::int8_t>(rest % l);
        rest /= l;
        k.mem_idx = static_cast<std::int8_t>(rest % m);
        k.vcpu_idx = static_cast<std::int8_t>(rest / m);
        for (int a = 0; a < kActionCount; ++a) {
            const double qc = qset.q(Resource::Vcpu, packed, a);
            const double qm = qset.q(Resource::Mem, packed, a);
            const double ql = qset.q(Resource::Lc, packed, a);
            if (qc == 0.0 && qm == 0.0 && ql == 0.0)
                continue;
            w.row({std::to_string(k.vcpu_idx), std::to_string(k.mem_idx),
                   std::to_string(k.lc_idx), std::to_string(k.kpi_flags),
                   action_name(kAllActions[a]), csv::num(qc), csv::num(qm), csv::num(ql)});
        }
    }
}

inline QTableSet read_qtables(const std::string& path, const ResourceGrid& grid) {
    csv::Reader reader(path, kQTableHeader);
    QTableSet qset;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != 8)
            throw ParseError(path + ": expected 8 fields per row");
        StateKey k;
        k.vcpu_idx = static_cast<std::int8_t>(std::stoi(f[0]));
        k.mem_idx = static_cast<std::int8_t>(std::stoi(f[1]));
        k.lc_idx = static_cast<std::int8_t>(std::stoi(f[2]));
        k.kpi_flags = static_cast<std::uint8_t>(std::stoi(f[3]));
        int action = -1;
        for (int a = 0; a < kActionCount; ++a)
            if (action_name(kAllActions[a]) == f[4])
                action = a;
        if (action < 0)
            throw ParseError(path + ": unknown action '" + f[4] + "'");
        const std::int32_t packed = packed_key(k, grid);
        qset.update(Resource::Vcpu, packed, action, std::stod(f[5]));
        qset.update(Resource::Mem, packed, action, std::stod(f[6]));
        qset.update(Resource::Lc, packed, action, std::stod(f[7]));
    }
    return qset;
}

// ---------------------------------------------------------------------------
// Training traces

inline constexpr const char* kTraceHeader =
    "seed_index,episode,vcpu,mem_mb,lc_mbps,output_mbps,steps,converged";

inline void write_trace(const std::string& path,
                        const std::vector<std::vector<EpisodePoint>>& runs) {
    csv::Writer w(path, kTraceHeader);
    for (std::size_t s = 0; s < runs.size(); ++s)
        for (std::size_t e = 0; e < runs[s].size(); ++e) {
            const EpisodePoint& p = runs[s][e];
            w.row({std::to_string(s), std::to_string(e), csv::num(p.resources.vcpu),
                   csv::num(p.resources.mem), csv::num(p.resources.lc),
                   csv::num(p.output_rate), std::to_string(p.steps),
                   p.converged ? "1" : "0"});
        }
}

} // namespace vnfprof
