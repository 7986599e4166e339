//! Discrete-derivative analysis of energy tables: convexity-set extraction,
//! magic numbers, signed indicators, monotonicity validation, and set
//! statistics.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::table::EnergyTable;

/// Second discrete derivative `v(N-1) - 2 v(N) + v(N+1)`.
pub fn second_diff(table: &EnergyTable, n: usize) -> Result<f64> {
    let prev = table.require(n - 1)?;
    let mid = table.require(n)?;
    let next = table.require(n + 1)?;
    Ok(prev - 2.0 * mid + next)
}

/// Forward first difference `v(N+1) - v(N)`.
pub fn forward_diff(table: &EnergyTable, n: usize) -> Result<f64> {
    Ok(table.require(n + 1)? - table.require(n)?)
}

/// Backward first difference `v(N) - v(N-1)`.
pub fn backward_diff(table: &EnergyTable, n: usize) -> Result<f64> {
    Ok(table.require(n)? - table.require(n - 1)?)
}

/// Partition of an N-range by the sign of the second discrete derivative.
#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub s: f64,
    pub tol: f64,
    /// Strict local concavity: ddv < -tol.
    pub c_minus: BTreeSet<usize>,
    /// Local linearity within tolerance: |ddv| <= tol.
    pub c_zero: BTreeSet<usize>,
    /// Strict local convexity: ddv > tol.
    pub c_plus: BTreeSet<usize>,
    /// Second differences on the analyzable interior range.
    pub ddv: Vec<(usize, f64)>,
    /// Interior N-range actually analyzed (endpoints have no second
    /// derivative).
    pub interior: (usize, usize),
}

/// Default tolerance for noisy optimizer tables; exact tables use 0.
pub const NOISY_TABLE_TOL: f64 = 1e-10;

/// Splits the interior of a contiguous table into the concavity, linearity,
/// and convexity sets. `tol = 0` is the convention for float data, where
/// exact zeros do not occur.
pub fn convexity_sets(table: &EnergyTable, tol: f64) -> Result<ConvexityReport> {
    if tol < 0.0 {
        return Err(Error::Domain("tolerance must be nonnegative".into()));
    }
    if !table.contiguous() {
        return Err(Error::Domain("convexity analysis needs a contiguous N-range".into()));
    }
    let (lo, hi) = match (table.n_min(), table.n_max()) {
        (Some(lo), Some(hi)) if hi - lo >= 2 => (lo, hi),
        _ => return Err(Error::Domain("need at least 3 contiguous rows".into())),
    };
    let mut report = ConvexityReport {
        s: table.s(),
        tol,
        c_minus: BTreeSet::new(),
        c_zero: BTreeSet::new(),
        c_plus: BTreeSet::new(),
        ddv: Vec::new(),
        interior: (lo + 1, hi - 1),
    };
    for n in lo + 1..hi {
        let dd = second_diff(table, n)?;
        report.ddv.push((n, dd));
        if dd > tol {
            report.c_plus.insert(n);
        } else if dd < -tol {
            report.c_minus.insert(n);
        } else {
            report.c_zero.insert(n);
        }
    }
    Ok(report)
}

/// Signed indicator of two integer sets over a range: +1 where only in `b`,
/// -1 where only in `a`, 0 elsewhere.
pub fn signed_indicator(
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
    range: impl IntoIterator<Item = usize>,
) -> Vec<(usize, i8)> {
    range
        .into_iter()
        .map(|n| {
            let d = match (a.contains(&n), b.contains(&n)) {
                (false, true) => 1,
                (true, false) => -1,
                _ => 0,
            };
            (n, d)
        })
        .collect()
}

/// A pair of rows violating strict increase in N.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityViolation {
    pub n_lo: usize,
    pub n_hi: usize,
    pub v_lo: f64,
    pub v_hi: f64,
}

/// Checks the first-derivative test: every row must exceed all earlier rows.
/// Returns the violating pairs (empty means the table passes).
pub fn monotonicity_check_n(table: &EnergyTable) -> Vec<MonotonicityViolation> {
    let rows: Vec<(usize, f64)> = table.rows().iter().map(|(&n, r)| (n, r.v)).collect();
    let mut out = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if rows[j].1 <= rows[i].1 {
                out.push(MonotonicityViolation {
                    n_lo: rows[i].0,
                    n_hi: rows[j].0,
                    v_lo: rows[i].1,
                    v_hi: rows[j].1,
                });
            }
        }
    }
    out
}

/// A violation of strict increase in s at fixed N.
#[derive(Debug, Clone, PartialEq)]
pub struct SMonotonicityViolation {
    pub n: usize,
    pub s_lo: f64,
    pub s_hi: f64,
    pub v_lo: f64,
    pub v_hi: f64,
}

/// Checks that v increases strictly with s at every shared N across a
/// sequence of tables ordered by s.
pub fn monotonicity_check_s(tables: &[&EnergyTable]) -> Vec<SMonotonicityViolation> {
    let mut out = Vec::new();
    for pair in tables.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        for (&n, row) in a.rows() {
            if let Some(vb) = b.get(n) {
                if row.v >= vb {
                    out.push(SMonotonicityViolation {
                        n,
                        s_lo: a.s(),
                        s_hi: b.s(),
                        v_lo: row.v,
                        v_hi: vb,
                    });
                }
            }
        }
    }
    out
}

/// Bulk statistics of an integer set over a range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetStats {
    /// |set ∩ range| / |range| in percent.
    pub coverage_percent: f64,
    /// Fraction of odd members of the whole set, in percent; `None` for the
    /// empty set.
    pub odd_percent: Option<f64>,
    pub member_count: usize,
    pub odd_count: usize,
}

pub fn set_stats(set: &BTreeSet<usize>, range: impl IntoIterator<Item = usize>) -> SetStats {
    let range: Vec<usize> = range.into_iter().collect();
    let in_range = range.iter().filter(|n| set.contains(n)).count();
    let odd = set.iter().filter(|n| *n % 2 == 1).count();
    SetStats {
        coverage_percent: if range.is_empty() {
            0.0
        } else {
            100.0 * in_range as f64 / range.len() as f64
        },
        odd_percent: if set.is_empty() {
            None
        } else {
            Some(100.0 * odd as f64 / set.len() as f64)
        },
        member_count: set.len(),
        odd_count: odd,
    }
}

/// The empirical magic set of a logarithmic-case report: its convexity
/// points. Errors when the report was built at a different exponent.
pub fn magic_numbers(report: &ConvexityReport) -> Result<BTreeSet<usize>> {
    if report.s != 0.0 {
        return Err(Error::Domain(format!(
            "magic numbers are defined for the logarithmic case, report has s = {}",
            report.s
        )));
    }
    Ok(report.c_plus.clone())
}
