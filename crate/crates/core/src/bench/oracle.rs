//! Exhaustive search over all assignments of the free vertices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    add_assign, cut_size, fits, sub_assign, CapacityBound, FixedAssignment, WeightedGraph,
};
use crate::par::{self, Execution};

/// Largest graph the oracle accepts.
pub const ORACLE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    pub cut: f64,
    /// `true` = first part.
    pub in_first: Vec<bool>,
    pub feasible_assignments: u64,
}

/// Minimum cut over all capacity-feasible bipartitions respecting `fixed`,
/// or `None` if none exists. Ties go to the smallest assignment bitmask.
///
/// The top bits of the bitmask split the work into chunks; each chunk walks
/// its low bits in Gray-code order with `O(deg v)` updates.
pub fn brute_force_optimum(
    g: &WeightedGraph,
    u: &CapacityBound,
    fixed: &FixedAssignment,
    exec: Execution,
) -> Result<Option<OracleSolution>> {
    let n = g.n();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleRefused {
            n,
            limit: ORACLE_LIMIT,
        });
    }
    if u.parts() < 2 || u.dims() != g.dims() {
        return Err(Error::Dimension {
            expected: g.dims(),
            got: u.dims(),
        });
    }
    let free: Vec<usize> = (0..n).filter(|&v| fixed.side_of(v).is_none()).collect();
    let k = free.len();
    let high = k.min(8);
    let low = k - high;
    let total = g.vertex_weights().total();
    let b = g.vertex_weights();

    let chunks = par::map_range(exec, 1usize << high, |chunk| {
        let mut side = vec![false; n];
        for &v in fixed.f1() {
            side[v] = true;
        }
        for bit in 0..high {
            side[free[low + bit]] = chunk >> bit & 1 == 1;
        }
        let mut cut = cut_size(g, &side).expect("lengths match");
        let mut usage = b.sum_of((0..n).filter(|&v| side[v]));
        let mut best: Option<(f64, u64)> = None;
        let mut count = 0u64;
        let mut gray = 0u64;
        let mut consider = |cut: f64, usage: &[i64], gray: u64| {
            let second: Vec<i64> = total.iter().zip(usage).map(|(t, a)| t - a).collect();
            if fits(usage, u.row(0)) && fits(&second, u.row(1)) {
                count += 1;
                let mask = ((chunk as u64) << low) | gray;
                if best.is_none_or(|(c, m)| (cut, mask) < (c, m)) {
                    best = Some((cut, mask));
                }
            }
        };
        consider(cut, &usage, gray);
        for step in 1u64..(1u64 << low) {
            let bit = step.trailing_zeros() as usize;
            let v = free[bit];
            for (w, wt) in g.neighbors(v) {
                cut += if side[w] == side[v] { wt } else { -wt };
            }
            if side[v] {
                sub_assign(&mut usage, b.row(v));
            } else {
                add_assign(&mut usage, b.row(v));
            }
            side[v] = !side[v];
            gray ^= 1 << bit;
            consider(cut, &usage, gray);
        }
        (best, count)
    });

    let mut best: Option<(f64, u64)> = None;
    let mut feasible = 0;
    for (b, c) in chunks {
        feasible += c;
        if let Some(cand) = b {
            if best.is_none_or(|cur| cand < cur) {
                best = Some(cand);
            }
        }
    }
    let Some((_, mask)) = best else {
        return Ok(None);
    };
    let mut in_first = vec![false; n];
    for &v in fixed.f1() {
        in_first[v] = true;
    }
    for (bit, &v) in free.iter().enumerate() {
        in_first[v] = mask >> bit & 1 == 1;
    }
    Ok(Some(OracleSolution {
        cut: cut_size(g, &in_first)?,
        in_first,
        feasible_assignments: feasible,
    }))
}
