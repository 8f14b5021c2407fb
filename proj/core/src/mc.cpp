#include "qve/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "qve/errors.hpp"
#include "qve/instances.hpp"

namespace qve::mc {

namespace {

// A uniform draw u = z * 2^-53 with integer z satisfies u < t exactly when
// z < ceil(t * 2^53) (t * 2^53 is an exact double for t in [0,1]), so the
// whole cumulative table can live in the integer domain: one comparison
// per probe and bit-for-bit the same outcome as the double arithmetic.
std::uint64_t threshold_u64(double t) {
    const double scaled = std::ceil(std::min(t, 1.0) * 9007199254740992.0);  // 2^53
    return static_cast<std::uint64_t>(scaled);
}

constexpr int kGuideBits = 8;

// Per-state outcome table. Outcome 0 is immediate death; outcomes
// 1..n^2 are offspring pairs in lexicographic (j,k) order. Death routes
// its two count increments into a sink slot, which keeps the draw loop
// free of a data-dependent branch. The guide array pins the cumulative
// search for a draw down to a step or two.
struct StateTable {
    std::vector<std::uint64_t> cum;   // 1 + n^2 entries
    std::vector<std::uint32_t> guide; // 2^kGuideBits + 1 entries
    std::vector<std::uint16_t> oj;    // offspring states per outcome (sink for death)
    std::vector<std::uint16_t> ok;
    std::vector<std::uint16_t> born;  // 0 for death, 2 otherwise
};

std::vector<StateTable> build_tables(const QveProblem& p) {
    const int n = p.dim();
    const auto sink = static_cast<std::uint16_t>(n);
    std::vector<StateTable> tables(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        StateTable& t = tables[static_cast<std::size_t>(i)];
        double acc = p.a()[i];
        t.cum.push_back(threshold_u64(acc));
        t.oj.push_back(sink);
        t.ok.push_back(sink);
        t.born.push_back(0);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                acc += p.b().at(i, j, k);
                t.cum.push_back(threshold_u64(acc));
                t.oj.push_back(static_cast<std::uint16_t>(j));
                t.ok.push_back(static_cast<std::uint16_t>(k));
                t.born.push_back(2);
            }
        // the table must swallow every possible draw
        t.cum.back() = std::max(t.cum.back(), std::uint64_t{1} << 53);

        const int buckets = 1 << kGuideBits;
        t.guide.assign(static_cast<std::size_t>(buckets) + 1, 0);
        std::uint32_t m = 0;
        for (int bkt = 0; bkt <= buckets; ++bkt) {
            const std::uint64_t lo = static_cast<std::uint64_t>(bkt) << (53 - kGuideBits);
            while (m < t.cum.size() && t.cum[m] <= lo) ++m;
            t.guide[static_cast<std::size_t>(bkt)] = m;
        }
    }
    return tables;
}

// SplitMix64 with refills computed a block at a time: the outputs only
// depend on state0 + k*gamma, so the mixes in a block are independent and
// pipeline freely. Consumption order is exactly the sequential stream.
class BatchedRng {
public:
    explicit BatchedRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next53() {
        if (pos_ == kBatch) refill();
        return buf_[pos_++];
    }

private:
    static constexpr int kBatch = 64;

    void refill() {
        std::uint64_t s = state_;
        for (int r = 0; r < kBatch; ++r) {
            s += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            buf_[r] = (z ^ (z >> 31)) >> 11;
        }
        state_ = s;
        pos_ = 0;
    }

    std::uint64_t state_;
    int pos_ = kBatch;
    std::uint64_t buf_[kBatch];
};

long run_trials(const QveProblem& p, const std::vector<StateTable>& tables,
                const McConfig& cfg, long first, long last) {
    const int n = p.dim();
    long extinct = 0;
    // slot n is the sink fed by death outcomes
    std::vector<long> cur(static_cast<std::size_t>(n) + 1);
    std::vector<long> next(static_cast<std::size_t>(n) + 1);
    for (long t = first; t < last; ++t) {
        // one mixing step turns consecutive trial indices into
        // well-separated stream states
        instances::Prng mix(cfg.seed + static_cast<std::uint64_t>(t));
        BatchedRng rng(mix.next_u64());

        std::fill(cur.begin(), cur.end(), 0L);
        cur[static_cast<std::size_t>(cfg.start_state)] = 1;
        long total = 1;
        bool survived = false;
        while (total > 0 && !survived) {
            std::fill(next.begin(), next.end(), 0L);
            long next_total = 0;
            long* next_counts = next.data();
            for (int i = 0; i < n && !survived; ++i) {
                const StateTable& table = tables[static_cast<std::size_t>(i)];
                const std::uint64_t* cum = table.cum.data();
                const std::uint16_t* oj = table.oj.data();
                const std::uint16_t* ok = table.ok.data();
                const std::uint16_t* born = table.born.data();
                for (long c = cur[static_cast<std::size_t>(i)]; c > 0; --c) {
                    const std::uint64_t z = rng.next53();
                    std::uint32_t m = table.guide[z >> (53 - kGuideBits)];
                    while (z >= cum[m]) ++m;
                    ++next_counts[oj[m]];
                    ++next_counts[ok[m]];
                    next_total += born[m];
                    if (next_total > cfg.max_population) {
                        survived = true;
                        break;
                    }
                }
            }
            cur.swap(next);
            total = next_total;
        }
        if (!survived) ++extinct;
    }
    return extinct;
}

} // namespace

McEstimate estimate_extinction(const QveProblem& p, const McConfig& cfg) {
    if (cfg.trials < 1) throw InputError("mc: trials must be >= 1");
    if (cfg.max_population < 1) throw InputError("mc: max_population must be >= 1");
    if (cfg.start_state < 0 || cfg.start_state >= p.dim())
        throw InputError("mc: start_state out of range");

    const auto tables = build_tables(p);

    // Trials carry their own streams, so splitting them across threads
    // changes nothing about the extinct count.
    const long min_chunk = 4096;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const long n_workers =
        std::max(1L, std::min<long>(hw, (cfg.trials + min_chunk - 1) / min_chunk));

    long extinct = 0;
    if (n_workers == 1) {
        extinct = run_trials(p, tables, cfg, 0, cfg.trials);
    } else {
        std::vector<long> counts(static_cast<std::size_t>(n_workers), 0);
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(n_workers));
        const long chunk = (cfg.trials + n_workers - 1) / n_workers;
        for (long w = 0; w < n_workers; ++w) {
            const long first = w * chunk;
            const long last = std::min(cfg.trials, first + chunk);
            workers.emplace_back([&, w, first, last] {
                counts[static_cast<std::size_t>(w)] = run_trials(p, tables, cfg, first, last);
            });
        }
        for (auto& th : workers) th.join();
        for (long c : counts) extinct += c;
    }

    McEstimate out;
    out.estimate = static_cast<double>(extinct) / static_cast<double>(cfg.trials);
    out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) /
                              static_cast<double>(cfg.trials));
    return out;
}

} // namespace qve::mc
