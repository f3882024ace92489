// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#include "ccpush/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ccpush/io_util.hpp"

namespace ccpush {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// phi(x) = 2^x (1 - x ln2): strictly decreasing and concave on x >= 0, from
// phi(0) = 1 toward -inf. The power marginal of a transmission at bandwidth b
// is n * (phi(r/b) - 1), so equalizing marginals reduces to inverting phi.
double phi(double x) {
    if (x > 1000.0) return -std::numeric_limits<double>::infinity();
    return std::exp2(x) * (1.0 - x * kLn2);
}

// Solve phi(x) = y for x > 0, given y < 1. Safeguarded Newton inside a
// bracketing interval.
double phi_inverse(double y) {
    double lo = 0.0;
    double hi = std::max(2.1 * std::sqrt(std::max(1.0 - y, 0.0)), 0x1p-40);
    while (phi(hi) > y) {
        lo = hi;
        hi *= 2.0;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 80; ++it) {
        const double fx = phi(x) - y;
        if (fx > 0.0)
            lo = x;
        else
            hi = x;
        const double dfx = -x * kLn2 * kLn2 * std::exp2(x);
        double next = 0.5 * (lo + hi);
        if (std::isfinite(dfx) && dfx != 0.0) {
            const double newton = x - fx / dfx;
            if (newton > lo && newton < hi) next = newton;
        }
        if (std::abs(next - x) <= 1e-15 * next) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

std::vector<Eigen::Index> active_indices(const OptInstance& inst) {
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < inst.count(); ++i)
        if (inst.size_bits[i] > 0.0) active.push_back(i);
    return active;
}

// Largest-remainder apportionment of `seats` integer cells to the quotas;
// ties break toward the lower index. Quotas are rescaled to sum to seats.
std::vector<int> largest_remainder(Eigen::ArrayXd quotas, int seats) {
    const double total = quotas.sum();
    if (total > 0.0) quotas *= static_cast<double>(seats) / total;
    const Eigen::Index count = quotas.size();
    std::vector<int> cells(count, 0);
    std::vector<double> remainder(count, 0.0);
    long assigned = 0;
    for (Eigen::Index i = 0; i < count; ++i) {
        const double floor_value = std::floor(quotas[i]);
        cells[i] = static_cast<int>(floor_value);
        remainder[i] = quotas[i] - floor_value;
        assigned += cells[i];
    }
    std::vector<Eigen::Index> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return remainder[a] > remainder[b];
    });
    for (long extra = seats - assigned, i = 0; extra > 0; --extra, ++i) cells[order[i]] += 1;
    return cells;
}

// Every active transmission must own at least one cell; steal from the
// largest holder when rounding starved one.
void ensure_active_cells(std::vector<int>& cells, const std::vector<Eigen::Index>& active) {
    for (Eigen::Index idx : active) {
        while (cells[idx] == 0) {
            Eigen::Index donor = -1;
            for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(cells.size()); ++j)
                if (donor < 0 || cells[j] > cells[donor]) donor = j;
            if (donor < 0 || cells[donor] <= 1)
                throw std::invalid_argument("quantize: not enough grid cells to cover "
                                            "every active transmission");
            cells[donor] -= 1;
            cells[idx] += 1;
        }
    }
}

std::vector<int> owners_from_cells(const std::vector<int>& cells) {
    std::vector<int> owner;
    for (std::size_t tx = 0; tx < cells.size(); ++tx)
        owner.insert(owner.end(), cells[tx], static_cast<int>(tx));
    return owner;
}

void validate_grid(const GridSpec& grid) {
    if (grid.subcarriers < 1)
        throw std::invalid_argument("GridSpec.subcarriers: must be a positive count");
    if (!(grid.slot_seconds > 0.0))
        throw std::invalid_argument("GridSpec.slot_seconds: must be positive");
    if (!(grid.subcarrier_bw_hz > 0.0))
        throw std::invalid_argument("GridSpec.subcarrier_bw_hz: must be positive");
}

}  // namespace

void OptInstance::validate() const {
    if (count() == 0) throw std::invalid_argument("OptInstance: no transmissions");
    if (worst_noise.size() != count())
        throw std::invalid_argument("OptInstance: size_bits and worst_noise lengths differ");
    for (Eigen::Index i = 0; i < count(); ++i) {
        if (!(size_bits[i] >= 0.0) || !std::isfinite(size_bits[i]))
            throw std::invalid_argument("OptInstance.size_bits: entries must be finite and >= 0");
        if (!(worst_noise[i] > 0.0) || !std::isfinite(worst_noise[i]))
            throw std::invalid_argument("OptInstance.worst_noise: entries must be finite and > 0");
    }
    if (!(power_w > 0.0)) throw std::invalid_argument("OptInstance.power_w: must be positive");
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("OptInstance.bandwidth_hz: must be positive");
    if (weights.size() != 0) {
        if (weights.size() != count())
            throw std::invalid_argument("OptInstance.weights: length must match size_bits");
        for (Eigen::Index i = 0; i < count(); ++i)
            if (weights[i] != 1.0)
                throw std::invalid_argument(
                    "OptInstance.weights: only unit weights are supported");
    }
}

double shannon_rate(double bandwidth_hz, double power_w, double noise_psd) {
    if (!(bandwidth_hz > 0.0)) return 0.0;
    // log1p keeps the power-limited regime (tiny SNR) monotone in bandwidth
    return bandwidth_hz * std::log1p(power_w / (noise_psd * bandwidth_hz)) / kLn2;
}

TdAllocation td_allocate(const OptInstance& inst) {
    inst.validate();
    const Eigen::Index count = inst.count();
    TdAllocation alloc;
    alloc.fractions = Eigen::ArrayXd::Zero(count);

    // a_i = time transmission i needs with the whole band and power; the
    // optimal fraction is proportional to sqrt(a_i).
    Eigen::ArrayXd root = Eigen::ArrayXd::Zero(count);
    for (Eigen::Index i = 0; i < count; ++i)
        if (inst.size_bits[i] > 0.0)
            root[i] = std::sqrt(inst.size_bits[i] /
                                shannon_rate(inst.bandwidth_hz, inst.power_w,
                                             inst.worst_noise[i]));
    const double root_sum = root.sum();
    if (root_sum == 0.0) return alloc;  // nothing to send
    alloc.fractions = root / root_sum;
    alloc.total_time_s = root_sum * root_sum;
    return alloc;
}

namespace {

// Inner FD subproblem: cheapest-power bandwidth split at target time T.
// Transmissions sharing a noise value share the same marginal crossing, so
// the multiplier search works on noise groups.
class FdSplitter {
public:
    FdSplitter(const OptInstance& inst, const std::vector<Eigen::Index>& active)
        : inst_(inst), active_(active) {
        std::vector<Eigen::Index> by_noise = active;
        std::sort(by_noise.begin(), by_noise.end(), [&](Eigen::Index a, Eigen::Index b) {
            return inst.worst_noise[a] < inst.worst_noise[b];
        });
        for (Eigen::Index idx : by_noise) {
            if (groups_.empty() || groups_.back().noise != inst.worst_noise[idx])
                groups_.push_back({inst.worst_noise[idx], {}, 0.0});
            groups_.back().members.push_back(idx);
        }
    }

    /// Minimum total power to finish every active transmission within T;
    /// optionally reports the achieving bandwidths.
    double min_power(double T, Eigen::ArrayXd* bandwidth_out) {
        for (Group& group : groups_) {
            group.rate_sum = 0.0;
            for (Eigen::Index idx : group.members) group.rate_sum += inst_.size_bits[idx] / T;
        }
        const double budget = inst_.bandwidth_hz;

        // Bracket the KKT multiplier: total bandwidth demand decreases in it.
        double lam_lo = 1.0;
        for (int it = 0; it < 4000 && bandwidth_demand(lam_lo) <= budget; ++it) lam_lo /= 8.0;
        double lam_hi = std::max(1.0, lam_lo * 8.0);
        for (int it = 0; it < 4000 && bandwidth_demand(lam_hi) > budget; ++it) lam_hi *= 8.0;
        for (int it = 0; it < 200 && (lam_hi - lam_lo) > 1e-9 * lam_hi; ++it) {
            const double mid = 0.5 * (lam_lo + lam_hi);
            if (bandwidth_demand(mid) > budget)
                lam_lo = mid;
            else
                lam_hi = mid;
        }

        Eigen::ArrayXd bandwidth = Eigen::ArrayXd::Zero(inst_.count());
        double demand = 0.0;
        for (const Group& group : groups_) {
            const double x = phi_inverse(1.0 - lam_hi / group.noise);
            for (Eigen::Index idx : group.members) {
                bandwidth[idx] = (inst_.size_bits[idx] / T) / x;
                demand += bandwidth[idx];
            }
        }
        if (demand > 0.0) bandwidth *= budget / demand;  // spend the band exactly

        double total_power = 0.0;
        for (Eigen::Index idx : active_)
            total_power += inst_.worst_noise[idx] * bandwidth[idx] *
                           std::expm1(kLn2 * (inst_.size_bits[idx] / T) / bandwidth[idx]);
        if (bandwidth_out) *bandwidth_out = bandwidth;
        return total_power;
    }

private:
    struct Group {
        double noise;
        std::vector<Eigen::Index> members;
        double rate_sum;
    };

    double bandwidth_demand(double lambda) {
        double demand = 0.0;
        for (const Group& group : groups_) {
            const double x = phi_inverse(1.0 - lambda / group.noise);
            demand += group.rate_sum / x;
        }
        return demand;
    }

    const OptInstance& inst_;
    const std::vector<Eigen::Index>& active_;
    std::vector<Group> groups_;
};

}  // namespace

FdAllocation fd_allocate(const OptInstance& inst, double tol) {
    inst.validate();
    if (!(tol > 0.0) || tol > 1e-2)
        throw std::invalid_argument("fd_allocate: tol must be in (0, 1e-2]");

    const Eigen::Index count = inst.count();
    FdAllocation alloc;
    alloc.bandwidth_hz = Eigen::ArrayXd::Zero(count);
    alloc.power_w = Eigen::ArrayXd::Zero(count);

    const std::vector<Eigen::Index> active = active_indices(inst);
    if (active.empty()) return alloc;
    if (active.size() == 1) {
        const Eigen::Index only = active.front();
        alloc.bandwidth_hz[only] = inst.bandwidth_hz;
        alloc.power_w[only] = inst.power_w;
        alloc.total_time_s = inst.size_bits[only] /
                             shannon_rate(inst.bandwidth_hz, inst.power_w,
                                          inst.worst_noise[only]);
        return alloc;
    }

    FdSplitter splitter(inst, active);
    const double budget = inst.power_w;

    // The TD optimum is always FD-feasible (give each transmission its TD
    // share of band and power: the slowest finishes within the TD sum), so it
    // seeds the feasible end of the bisection.
    double t_hi = td_allocate(inst).total_time_s;
    int guard = 0;
    while (splitter.min_power(t_hi, nullptr) > budget && ++guard <= 64) t_hi *= 2.0;
    if (guard > 64) alloc.converged = false;

    double t_lo = t_hi;
    bool bracketed = false;
    for (int it = 0; it < 1100 && t_lo > 0.0; ++it) {
        t_lo *= 0.5;
        if (splitter.min_power(t_lo, nullptr) > budget) {
            bracketed = true;
            break;
        }
    }
    if (bracketed) {
        for (int it = 0; it < 500 && (t_hi - t_lo) > tol * t_hi; ++it) {
            const double mid = 0.5 * (t_lo + t_hi);
            if (splitter.min_power(mid, nullptr) > budget)
                t_lo = mid;
            else
                t_hi = mid;
        }
    } else {
        alloc.converged = false;  // even a vanishing deadline fits the budget
    }

    Eigen::ArrayXd bandwidth;
    splitter.min_power(t_hi, &bandwidth);

    // Keep the split but spend the whole power budget; this equalizes the
    // per-transmission times at the final deadline.
    auto power_needed = [&](double T) {
        double total = 0.0;
        for (Eigen::Index idx : active)
            total += inst.worst_noise[idx] * bandwidth[idx] *
                     std::expm1(kLn2 * (inst.size_bits[idx] / T) / bandwidth[idx]);
        return total;
    };
    double hi = t_hi;
    guard = 0;
    while (power_needed(hi) > budget && ++guard <= 64) hi *= 2.0;
    double lo = hi;
    for (int it = 0; it < 1100 && lo > 0.0; ++it) {
        lo *= 0.5;
        if (power_needed(lo) > budget) break;
    }
    for (int it = 0; it < 300 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (power_needed(mid) > budget)
            lo = mid;
        else
            hi = mid;
    }

    Eigen::ArrayXd power = Eigen::ArrayXd::Zero(count);
    double power_sum = 0.0;
    for (Eigen::Index idx : active) {
        power[idx] = inst.worst_noise[idx] * bandwidth[idx] *
                     std::expm1(kLn2 * (inst.size_bits[idx] / hi) / bandwidth[idx]);
        power_sum += power[idx];
    }
    if (power_sum > 0.0) power *= budget / power_sum;

    double total_time = 0.0;
    for (Eigen::Index idx : active)
        total_time = std::max(total_time,
                              inst.size_bits[idx] / shannon_rate(bandwidth[idx], power[idx],
                                                                 inst.worst_noise[idx]));
    alloc.bandwidth_hz = bandwidth;
    alloc.power_w = power;
    alloc.total_time_s = total_time;
    return alloc;
}

double throughput(const OptInstance& inst, double total_time_s, double useful_bits) {
    inst.validate();
    if (!(total_time_s > 0.0))
        throw std::invalid_argument("throughput: total_time must be positive");
    if (!(useful_bits >= 0.0))
        throw std::invalid_argument("throughput: useful_bits must be nonnegative");
    return useful_bits / total_time_s;
}

GridAssignment quantize(const TdAllocation& alloc, const OptInstance& inst,
                        const GridSpec& grid) {
    validate_grid(grid);
    if (alloc.fractions.size() != inst.count())
        throw std::invalid_argument("quantize: allocation and instance sizes differ");
    GridAssignment assignment;
    assignment.mode = GridMode::TimeDivision;
    assignment.num_subcarriers = grid.subcarriers;
    assignment.continuous_time_s = alloc.total_time_s;
    assignment.cells.assign(inst.count(), 0);

    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < inst.count(); ++i)
        if (alloc.fractions[i] > 0.0) active.push_back(i);
    if (active.empty()) return assignment;

    int num_slots =
        std::max<int>(1, static_cast<int>(std::ceil(alloc.total_time_s / grid.slot_seconds)));
    // the division can round to a whole slot count from just above it
    while (num_slots * grid.slot_seconds < alloc.total_time_s) ++num_slots;
    if (num_slots < static_cast<int>(active.size()))
        throw std::invalid_argument("quantize: fewer time slots than active transmissions");

    assignment.cells = largest_remainder(alloc.fractions * num_slots, num_slots);
    ensure_active_cells(assignment.cells, active);
    assignment.owner = owners_from_cells(assignment.cells);
    assignment.num_slots = num_slots;
    assignment.quantized_time_s = num_slots * grid.slot_seconds;
    return assignment;
}

GridAssignment quantize(const FdAllocation& alloc, const OptInstance& inst,
                        const GridSpec& grid) {
    validate_grid(grid);
    if (alloc.bandwidth_hz.size() != inst.count())
        throw std::invalid_argument("quantize: allocation and instance sizes differ");
    GridAssignment assignment;
    assignment.mode = GridMode::FrequencyDivision;
    assignment.num_subcarriers = grid.subcarriers;
    assignment.continuous_time_s = alloc.total_time_s;
    assignment.cells.assign(inst.count(), 0);

    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < inst.count(); ++i)
        if (alloc.bandwidth_hz[i] > 0.0) active.push_back(i);
    if (active.empty()) return assignment;
    if (grid.subcarriers < static_cast<int>(active.size()))
        throw std::invalid_argument("quantize: fewer subcarriers than active transmissions");

    assignment.cells = largest_remainder(alloc.bandwidth_hz, grid.subcarriers);
    ensure_active_cells(assignment.cells, active);
    assignment.owner = owners_from_cells(assignment.cells);

    // Completion time with the integer band and the continuous power split.
    double slowest = alloc.total_time_s;
    for (Eigen::Index idx : active) {
        const double band = assignment.cells[idx] * grid.subcarrier_bw_hz;
        slowest = std::max(slowest,
                           inst.size_bits[idx] /
                               shannon_rate(band, alloc.power_w[idx], inst.worst_noise[idx]));
    }
    int num_slots =
        std::max<int>(1, static_cast<int>(std::ceil(slowest / grid.slot_seconds)));
    while (num_slots * grid.slot_seconds < slowest) ++num_slots;
    assignment.num_slots = num_slots;
    assignment.quantized_time_s = num_slots * grid.slot_seconds;
    return assignment;
}

void save_instance(const OptInstance& inst, std::ostream& out) {
    out << "P_watts,B_hz\n"
        << format_double(inst.power_w) << ',' << format_double(inst.bandwidth_hz) << '\n'
        << "index,S_bits,n_m\n";
    for (Eigen::Index i = 0; i < inst.count(); ++i)
        out << i << ',' << format_double(inst.size_bits[i]) << ','
            << format_double(inst.worst_noise[i]) << '\n';
}

OptInstance load_instance(std::istream& in) {
    auto fail = [](int line, const std::string& why) {
        throw std::invalid_argument("instance file line " + std::to_string(line) + ": " + why);
    };
    std::string line;
    int line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };

    auto parse_double = [&](const std::string& text) {
        try {
            return std::stod(text);
        } catch (const std::exception&) {
            fail(line_no, "'" + text + "' is not a number");
            return 0.0;
        }
    };

    if (!next_line() || line != "P_watts,B_hz") fail(line_no, "expected header 'P_watts,B_hz'");
    if (!next_line()) fail(line_no + 1, "missing P,B values");
    OptInstance inst;
    {
        std::istringstream fields(line);
        std::string power, band;
        if (!std::getline(fields, power, ',') || !std::getline(fields, band, ','))
            fail(line_no, "expected two comma-separated values");
        inst.power_w = parse_double(power);
        inst.bandwidth_hz = parse_double(band);
    }
    if (!next_line() || line != "index,S_bits,n_m")
        fail(line_no, "expected header 'index,S_bits,n_m'");

    std::vector<double> sizes, noises;
    while (next_line()) {
        std::istringstream fields(line);
        std::string index, size, noise;
        if (!std::getline(fields, index, ',') || !std::getline(fields, size, ',') ||
            !std::getline(fields, noise, ','))
            fail(line_no, "expected three comma-separated values");
        if (static_cast<long>(parse_double(index)) != static_cast<long>(sizes.size()))
            fail(line_no, "transmission indices must be consecutive from 0");
        sizes.push_back(parse_double(size));
        noises.push_back(parse_double(noise));
    }
    if (sizes.empty()) fail(line_no, "no transmissions");
    inst.size_bits = Eigen::Map<Eigen::ArrayXd>(sizes.data(), sizes.size());
    inst.worst_noise = Eigen::Map<Eigen::ArrayXd>(noises.data(), noises.size());
    inst.validate();
    return inst;
}

void dump_solution(const OptInstance& inst, const TdAllocation& alloc, std::ostream& out) {
    out << "index,tau_or_B,P_i,time_i\n";
    for (Eigen::Index i = 0; i < inst.count(); ++i) {
        const bool on = alloc.fractions[i] > 0.0;
        const double time =
            on ? inst.size_bits[i] / (alloc.fractions[i] *
                                      shannon_rate(inst.bandwidth_hz, inst.power_w,
                                                   inst.worst_noise[i]))
               : 0.0;
        out << i << ',' << format_double(alloc.fractions[i]) << ','
            << format_double(on ? inst.power_w : 0.0) << ',' << format_double(time) << '\n';
    }
}

void dump_solution(const OptInstance& inst, const FdAllocation& alloc, std::ostream& out) {
    out << "index,tau_or_B,P_i,time_i\n";
    for (Eigen::Index i = 0; i < inst.count(); ++i) {
        const bool on = alloc.bandwidth_hz[i] > 0.0;
        const double time =
            on ? inst.size_bits[i] / shannon_rate(alloc.bandwidth_hz[i], alloc.power_w[i],
                                                  inst.worst_noise[i])
               : 0.0;
        out << i << ',' << format_double(alloc.bandwidth_hz[i]) << ','
            << format_double(alloc.power_w[i]) << ',' << format_double(time) << '\n';
    }
}

}  // namespace ccpush
