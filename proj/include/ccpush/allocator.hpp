// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

namespace ccpush {

/// One resource-allocation problem: per-transmission sizes and worst-user
/// noise PSDs under a shared power and bandwidth budget. Rows follow
/// delivery_subset_order() when built by the harness.
struct OptInstance {
    Eigen::ArrayXd size_bits;    ///< S_i >= 0
    Eigen::ArrayXd worst_noise;  ///< n_i^m > 0, W/Hz
    double power_w = 0.0;        ///< P
    double bandwidth_hz = 0.0;   ///< B
    Eigen::ArrayXd weights;      ///< default 1; only the unweighted problem is solved

    Eigen::Index count() const { return size_bits.size(); }
    void validate() const;
};

/// Shannon rate B*log2(1 + P/(n*B)) in bits/s.
double shannon_rate(double bandwidth_hz, double power_w, double noise_psd);

/// Sequential mode: each transmission gets the whole band and power for a
/// fraction of the total time.
struct TdAllocation {
    Eigen::ArrayXd fractions;  ///< tau_i, zero for zero-size transmissions
    double total_time_s = 0.0;
};

/// Closed-form optimum tau_i* proportional to sqrt(S_i / log2(1 + P/(n_i B)))
/// over the transmissions with S_i > 0 (Cauchy-Schwarz solution of the
/// sum-of-times objective).
TdAllocation td_allocate(const OptInstance& inst);

/// Parallel mode: disjoint bandwidth shares and a power split; completion
/// time is the slowest transmission.
struct FdAllocation {
    Eigen::ArrayXd bandwidth_hz;  ///< B_i, zero for zero-size transmissions
    Eigen::ArrayXd power_w;       ///< P_i
    double total_time_s = 0.0;
    bool converged = true;
};

/// Min-max completion time via bisection on the target time T. For a
/// candidate T each active transmission needs rate S_i/T; the cheapest power
/// for it at bandwidth b is n_i*b*(2^(S_i/(T*b)) - 1), convex and decreasing
/// in b, so the inner bandwidth split equalizes the power marginals through a
/// KKT-multiplier bisection. T is feasible iff the summed minimum power fits
/// the budget. The final split is rebalanced to spend the full budget, which
/// equalizes the per-transmission times.
FdAllocation fd_allocate(const OptInstance& inst, double tol = 1e-6);

/// Completion-time-equivalent goodput: useful_bits / total_time.
double throughput(const OptInstance& inst, double total_time_s, double useful_bits);

enum class GridMode { TimeDivision, FrequencyDivision };

/// Slot/subcarrier grid dimensions; H * B_u is the quantized band.
struct GridSpec {
    int subcarriers = 0;          ///< H
    double slot_seconds = 0.0;    ///< T_u
    double subcarrier_bw_hz = 0.0;///< B_u
};

/// Integer assignment of grid cells to transmissions. TD transmissions own
/// whole rows (every subcarrier of their slots); FD transmissions own whole
/// columns (every slot of their subcarriers). Every cell has exactly one
/// owner.
struct GridAssignment {
    GridMode mode = GridMode::TimeDivision;
    int num_slots = 0;
    int num_subcarriers = 0;
    std::vector<int> cells;  ///< rows (TD) or columns (FD) per transmission
    std::vector<int> owner;  ///< transmission index per row (TD) / column (FD)
    double quantized_time_s = 0.0;
    double continuous_time_s = 0.0;

    int transmission_at(int slot, int subcarrier) const {
        return mode == GridMode::TimeDivision ? owner[slot] : owner[subcarrier];
    }
};

/// Largest-remainder rounding of the time fractions onto whole slots
/// (ties break toward the lower transmission index). Throws
/// std::invalid_argument when there are fewer slots than active transmissions.
GridAssignment quantize(const TdAllocation& alloc, const OptInstance& inst,
                        const GridSpec& grid);

/// Largest-remainder rounding of the bandwidth shares onto whole subcarriers.
GridAssignment quantize(const FdAllocation& alloc, const OptInstance& inst,
                        const GridSpec& grid);

/// Instance CSV: a two-line P,B preamble then index,S_bits,n_m rows.
void save_instance(const OptInstance& inst, std::ostream& out);
OptInstance load_instance(std::istream& in);

/// Solution CSV: index, tau_or_B, P_i, time_i.
void dump_solution(const OptInstance& inst, const TdAllocation& alloc, std::ostream& out);
void dump_solution(const OptInstance& inst, const FdAllocation& alloc, std::ostream& out);

}  // namespace ccpush
