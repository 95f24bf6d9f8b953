#include "quscore/ranking.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "quscore/parallel.hpp"

namespace quscore {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// LSB-first bit stream over mt19937_64 words; the consumption order is
/// part of the determinism contract.
class BitStream {
public:
    explicit BitStream(std::uint64_t seed) : rng_(seed) {}

    bool next() {
        if (bits_left_ == 0) {
            word_ = rng_();
            bits_left_ = 64;
        }
        const bool b = (word_ & 1ULL) != 0;
        word_ >>= 1;
        --bits_left_;
        return b;
    }

private:
    std::mt19937_64 rng_;
    std::uint64_t word_ = 0;
    int bits_left_ = 0;
};

}  // namespace

double RankTable::mean_nrs(std::size_t team) const {
    const std::size_t c = cases.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < c; ++i) sum += nrs[team * c + i];
    return sum / static_cast<double>(c);
}

ScoreMatrix ScoreMatrix::from_cells(std::span<const Cell> cells) {
    std::set<std::string> team_set;
    std::set<std::string> case_set;
    for (const auto& cell : cells) {
        team_set.insert(cell.team);
        case_set.insert(cell.case_id);
    }

    ScoreMatrix m;
    m.teams_.assign(team_set.begin(), team_set.end());
    m.cases_.assign(case_set.begin(), case_set.end());
    if (m.teams_.size() < 2) throw Error("ranking needs at least 2 teams");
    if (m.cases_.empty()) throw Error("ranking needs at least 1 case");

    const std::size_t c = m.cases_.size();
    m.scores_.assign(m.teams_.size() * c, {});
    std::vector<std::uint8_t> seen(m.teams_.size() * c, 0);

    for (const auto& cell : cells) {
        const std::size_t ti = static_cast<std::size_t>(
            std::lower_bound(m.teams_.begin(), m.teams_.end(), cell.team) - m.teams_.begin());
        const std::size_t ci = static_cast<std::size_t>(
            std::lower_bound(m.cases_.begin(), m.cases_.end(), cell.case_id) -
            m.cases_.begin());
        const std::size_t idx = ti * c + ci;
        if (seen[idx]) {
            throw Error("duplicate score entry for team '" + cell.team + "', case '" +
                        cell.case_id + "'");
        }
        seen[idx] = 1;
        m.scores_[idx] = cell.score;
    }

    for (std::size_t t = 0; t < m.teams_.size(); ++t) {
        for (std::size_t i = 0; i < c; ++i) {
            if (!seen[t * c + i]) throw IncompleteMatrixError(m.teams_[t], m.cases_[i]);
        }
    }
    return m;
}

RankTable per_case_ranks(const ScoreMatrix& matrix) {
    const std::size_t t_count = matrix.team_count();
    const std::size_t c_count = matrix.case_count();
    if (t_count < 2) throw Error("ranking needs at least 2 teams");

    RankTable table;
    table.teams = matrix.teams();
    table.cases = matrix.cases();
    table.ranks.assign(t_count * c_count, {});
    table.crs.assign(t_count * c_count, 0.0);
    table.nrs.assign(t_count * c_count, 0.0);
    table.frs.assign(t_count, 0.0);

    std::vector<std::size_t> order(t_count);
    for (std::size_t ci = 0; ci < c_count; ++ci) {
        for (Entity e : kEntities) {
            // Higher score = better = smaller rank; ties share average ranks.
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return matrix.score(a, ci, e) > matrix.score(b, ci, e);
            });
            std::size_t i = 0;
            while (i < t_count) {
                std::size_t j = i;
                while (j + 1 < t_count &&
                       matrix.score(order[j + 1], ci, e) == matrix.score(order[i], ci, e)) {
                    ++j;
                }
                // positions i..j (0-based) tie: average of ranks i+1 .. j+1
                const double avg = static_cast<double>(i + j) / 2.0 + 1.0;
                for (std::size_t k = i; k <= j; ++k) {
                    table.ranks[order[k] * c_count + ci][static_cast<int>(e)] = avg;
                }
                i = j + 1;
            }
        }
        for (std::size_t ti = 0; ti < t_count; ++ti) {
            const auto& r = table.ranks[ti * c_count + ci];
            const double crs = r[0] + r[1] + r[2];
            table.crs[ti * c_count + ci] = crs;
            table.nrs[ti * c_count + ci] = crs / (3.0 * static_cast<double>(t_count));
        }
    }

    for (std::size_t ti = 0; ti < t_count; ++ti) {
        double sum = 0.0;
        for (std::size_t ci = 0; ci < c_count; ++ci) sum += table.crs[ti * c_count + ci];
        table.frs[ti] = sum / static_cast<double>(c_count);
    }
    return table;
}

std::uint64_t pair_seed(std::uint64_t master_seed, std::string_view team_a,
                        std::string_view team_b) {
    const auto& lo = team_a <= team_b ? team_a : team_b;
    const auto& hi = team_a <= team_b ? team_b : team_a;
    std::uint64_t h = fnv1a(lo, 1469598103934665603ULL);
    h = fnv1a("\x1f", h);  // separator, so ("ab","c") != ("a","bc")
    h = fnv1a(hi, h);
    return splitmix64(master_seed ^ h);
}

PermTestResult permutation_test(std::span<const double> crs_a, std::span<const double> crs_b,
                                std::uint64_t n_perms, std::uint64_t seed,
                                PermutationMode mode) {
    if (crs_a.size() != crs_b.size()) throw LengthMismatchError(crs_a.size(), crs_b.size());
    const std::size_t n = crs_a.size();
    if (n == 0) throw Error("permutation test needs at least one case");
    if (n_perms < 1) throw Error("permutation test needs n_perms >= 1");

    // Orient each per-case difference as worse-minus-better so the observed
    // FRS difference is nonnegative.
    double sum_a = 0.0, sum_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_a += crs_a[i];
        sum_b += crs_b[i];
    }
    const bool a_better = sum_a <= sum_b;  // lower CRS = better rank
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) {
        diff[i] = a_better ? crs_b[i] - crs_a[i] : crs_a[i] - crs_b[i];
    }
    double observed_sum = 0.0;
    for (double d : diff) observed_sum += d;

    PermTestResult result;
    result.observed_delta = observed_sum / static_cast<double>(n);
    result.seed = seed;

    const bool exhaustive =
        mode == PermutationMode::Exhaustive ||
        (mode == PermutationMode::Auto && n <= kExhaustiveLimit);

    if (exhaustive) {
        if (n > kExhaustiveLimit) {
            throw Error("exhaustive permutation test limited to " +
                        std::to_string(kExhaustiveLimit) + " cases");
        }
        const std::uint64_t count = 1ULL << n;
        std::uint64_t hits = 0;
        for (std::uint64_t assignment = 0; assignment < count; ++assignment) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += (assignment >> i) & 1ULL ? -diff[i] : diff[i];
            }
            if (s >= observed_sum) ++hits;
        }
        result.p_value = static_cast<double>(hits) / static_cast<double>(count);
        result.n_permutations = count;
        result.exhaustive = true;
        return result;
    }

    BitStream bits(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t k = 0; k < n_perms; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += bits.next() ? -diff[i] : diff[i];
        }
        if (s >= observed_sum) ++hits;
    }
    result.p_value = static_cast<double>(hits + 1) / static_cast<double>(n_perms + 1);
    result.n_permutations = n_perms;
    result.exhaustive = false;
    return result;
}

Leaderboard build_leaderboard(const RankTable& table, std::vector<PermTestResult> pairwise,
                              double alpha) {
    const std::size_t t_count = table.teams.size();

    std::map<std::pair<std::string, std::string>, double> p_lookup;
    for (const auto& test : pairwise) {
        auto key = std::minmax(test.team_a, test.team_b);
        p_lookup[{key.first, key.second}] = test.p_value;
    }
    auto p_of = [&](const std::string& a, const std::string& b) {
        auto key = std::minmax(a, b);
        auto it = p_lookup.find({key.first, key.second});
        if (it == p_lookup.end()) throw MissingPairError(a, b);
        return it->second;
    };

    std::vector<std::size_t> order(t_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (table.frs[a] != table.frs[b]) return table.frs[a] < table.frs[b];
        return table.teams[a] < table.teams[b];
    });

    Leaderboard board;
    board.alpha = alpha;
    board.pairwise = std::move(pairwise);
    board.entries.reserve(t_count);

    int rank = 0;
    std::size_t anchor = 0;
    for (std::size_t k = 0; k < t_count; ++k) {
        const std::size_t ti = order[k];
        if (k == 0 || p_of(table.teams[anchor], table.teams[ti]) < alpha) {
            ++rank;
            anchor = ti;
        }
        board.entries.push_back(
            {rank, table.teams[ti], table.frs[ti], table.mean_nrs(ti)});
    }
    return board;
}

RankingRun run_ranking(const ScoreMatrix& matrix, std::uint64_t n_perms,
                       std::uint64_t master_seed, double alpha, PermutationMode mode,
                       int jobs) {
    RankingRun run;
    run.table = per_case_ranks(matrix);

    const std::size_t t_count = run.table.teams.size();
    const std::size_t c_count = run.table.cases.size();

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < t_count; ++a) {
        for (std::size_t b = a + 1; b < t_count; ++b) pairs.emplace_back(a, b);
    }

    std::vector<PermTestResult> tests(pairs.size());
    parallel_for(static_cast<std::int64_t>(pairs.size()), jobs, [&](std::int64_t i) {
        const auto [a, b] = pairs[static_cast<std::size_t>(i)];
        std::span<const double> crs_a(run.table.crs.data() + a * c_count, c_count);
        std::span<const double> crs_b(run.table.crs.data() + b * c_count, c_count);
        const std::uint64_t seed =
            pair_seed(master_seed, run.table.teams[a], run.table.teams[b]);
        auto test = permutation_test(crs_a, crs_b, n_perms, seed, mode);
        test.team_a = run.table.teams[a];
        test.team_b = run.table.teams[b];
        tests[static_cast<std::size_t>(i)] = std::move(test);
    });

    run.board = build_leaderboard(run.table, std::move(tests), alpha);
    return run;
}

}  // namespace quscore
