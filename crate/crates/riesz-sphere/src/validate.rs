//! The validation pipeline: necessary-criteria checks for putative minimal
//! energy tables.

use std::collections::BTreeSet;

use crate::asympt::ddv_bounds_prop1;
use crate::catalog::{MagicCatalog, CATALOG_RANGE};
use crate::concavity::{
    convexity_sets, monotonicity_check_n, monotonicity_check_s, second_diff, ConvexityReport,
    MonotonicityViolation, SMonotonicityViolation,
};
use crate::error::Result;
use crate::table::EnergyTable;

/// Verdict for one table row.
#[derive(Debug, Clone)]
pub struct RowVerdict {
    pub n: usize,
    /// Reasons this row was flagged; empty means consistent.
    pub flags: Vec<String>,
}

impl RowVerdict {
    pub fn consistent(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Full validation report for a table (with optional companion tables at
/// other exponents).
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub s: f64,
    pub n_violations: Vec<MonotonicityViolation>,
    pub s_violations: Vec<SMonotonicityViolation>,
    /// Rows whose second difference escapes the two-sided bound (s < 0
    /// tables only): (N, lower, observed, upper).
    pub bound_violations: Vec<(usize, f64, f64, f64)>,
    /// Convexity points lost when s increases to a companion exponent:
    /// (N, s_low, s_high). Set-theoretic monotonicity says these are
    /// suspect data.
    pub convexity_regressions: Vec<(usize, f64, f64)>,
    pub convexity: Option<ConvexityReport>,
    /// Informational comparison against the embedded experimental sets.
    pub catalog_notes: Vec<String>,
    pub rows: Vec<RowVerdict>,
}

impl ValidationReport {
    /// True when no necessary criterion flagged any row.
    pub fn consistent(&self) -> bool {
        self.rows.iter().all(RowVerdict::consistent)
    }
}

/// Runs every applicable necessary criterion against `table`:
///
/// * strict increase in N (all pairs);
/// * the two-sided second-derivative bound for s < 0;
/// * strict increase in s against the companions at every shared N;
/// * set-theoretic increase of the convexity sets along the companions.
///
/// Companions may be given in any order; they are sorted by exponent, and
/// the whole check is deterministic. Tables whose provenance marks them as
/// nets are exempt from the optimality criteria (the report carries a note
/// instead): net curves are not minimal-energy data.
pub fn validate(table: &EnergyTable, companions: &[&EnergyTable]) -> Result<ValidationReport> {
    let is_net = table.rows().values().any(|r| r.provenance == "net");
    let mut report = ValidationReport {
        s: table.s(),
        n_violations: Vec::new(),
        s_violations: Vec::new(),
        bound_violations: Vec::new(),
        convexity_regressions: Vec::new(),
        convexity: None,
        catalog_notes: Vec::new(),
        rows: table
            .rows()
            .keys()
            .map(|&n| RowVerdict { n, flags: Vec::new() })
            .collect(),
    };
    let flag = |rows: &mut Vec<RowVerdict>, n: usize, reason: String| {
        if let Some(r) = rows.iter_mut().find(|r| r.n == n) {
            r.flags.push(reason);
        }
    };

    if is_net {
        report
            .catalog_notes
            .push("table is a net curve, not optimal data: optimality criteria skipped".into());
    } else {
        report.n_violations = monotonicity_check_n(table);
        for v in &report.n_violations {
            flag(
                &mut report.rows,
                v.n_hi,
                format!("v({}) = {} does not exceed v({}) = {}", v.n_hi, v.v_hi, v.n_lo, v.v_lo),
            );
        }
        if table.s() < 0.0 && table.contiguous() {
            if let (Some(lo), Some(hi)) = (table.n_min(), table.n_max()) {
                for n in lo + 1..hi {
                    if n < 3 {
                        continue;
                    }
                    let dd = second_diff(table, n)?;
                    let b = ddv_bounds_prop1(table.s(), n, table.require(n)?, Some(dd))?;
                    if !b.satisfied {
                        report.bound_violations.push((n, b.lower, dd, b.upper));
                        flag(
                            &mut report.rows,
                            n,
                            format!(
                                "second difference {dd} escapes the [{}, {}] bound",
                                b.lower, b.upper
                            ),
                        );
                    }
                }
            }
        }
    }

    // Convexity sets of the table itself (tolerance 0: float data never
    // hits exact zeros).
    if table.contiguous() && table.len() >= 3 {
        report.convexity = Some(convexity_sets(table, 0.0)?);
    }

    // Companion comparisons.
    let mut ordered: Vec<&EnergyTable> = companions.to_vec();
    ordered.push(table);
    ordered.sort_by(|a, b| a.s().total_cmp(&b.s()));
    ordered.dedup_by(|a, b| a.s() == b.s());
    if ordered.len() > 1 {
        report.s_violations = monotonicity_check_s(&ordered);
        for v in &report.s_violations {
            flag(
                &mut report.rows,
                v.n,
                format!(
                    "v_{}({}) = {} does not exceed v_{}({}) = {}",
                    v.s_hi, v.n, v.v_hi, v.s_lo, v.n, v.v_lo
                ),
            );
        }
        // Set-theoretic increase of the convexity sets with s.
        let reports: Vec<(f64, ConvexityReport)> = ordered
            .iter()
            .filter(|t| t.contiguous() && t.len() >= 3)
            .map(|t| convexity_sets(t, 0.0).map(|r| (t.s(), r)))
            .collect::<Result<Vec<_>>>()?;
        for pair in reports.windows(2) {
            let (s_lo, ref rep_lo) = pair[0];
            let (s_hi, ref rep_hi) = pair[1];
            // Compare only on the shared interior range.
            let lo_range = rep_lo.interior;
            let hi_range = rep_hi.interior;
            let shared = (lo_range.0.max(hi_range.0), lo_range.1.min(hi_range.1));
            for &n in &rep_lo.c_plus {
                if n >= shared.0 && n <= shared.1 && !rep_hi.c_plus.contains(&n) {
                    report.convexity_regressions.push((n, s_lo, s_hi));
                    flag(
                        &mut report.rows,
                        n,
                        format!("convexity point at N={n} lost from s={s_lo} to s={s_hi}"),
                    );
                }
            }
        }
    }

    // Informational: compare against the embedded experimental sets when
    // the exponent is cataloged.
    let catalog = MagicCatalog::embedded();
    if let Ok(reference) = catalog.c_plus(table.s()) {
        if let Some(conv) = &report.convexity {
            let (lo, hi) = conv.interior;
            let lo = lo.max(CATALOG_RANGE.0);
            let hi = hi.min(CATALOG_RANGE.1);
            let derived: BTreeSet<usize> =
                conv.c_plus.iter().copied().filter(|n| *n >= lo && *n <= hi).collect();
            let expected: BTreeSet<usize> =
                reference.iter().copied().filter(|n| *n >= lo && *n <= hi).collect();
            if derived == expected {
                report.catalog_notes.push(format!(
                    "convexity points on [{lo}, {hi}] match the embedded experimental set"
                ));
            } else {
                let extra: Vec<usize> = derived.difference(&expected).copied().collect();
                let missing: Vec<usize> = expected.difference(&derived).copied().collect();
                report.catalog_notes.push(format!(
                    "convexity points on [{lo}, {hi}] differ from the embedded experimental \
                     set: extra {extra:?}, missing {missing:?}"
                ));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_v, v_minus_two};

    #[test]
    fn exact_tables_validate_clean() {
        let mut t = EnergyTable::new(-1.0);
        for n in 2..=6 {
            t.insert(n, exact_v(n, -1.0).unwrap().0, "exact");
        }
        let mut t0 = EnergyTable::new(0.0);
        for n in 2..=6 {
            t0.insert(n, exact_v(n, 0.0).unwrap().0, "exact");
        }
        let report = validate(&t, &[&t0]).unwrap();
        assert!(report.consistent(), "{report:?}");
        assert!(report.n_violations.is_empty());
        assert!(report.s_violations.is_empty());
        assert!(report.bound_violations.is_empty());
    }

    #[test]
    fn decreased_row_is_flagged() {
        let mut t = EnergyTable::new(0.0);
        for n in 2..=6 {
            t.insert(n, exact_v(n, 0.0).unwrap().0, "exact");
        }
        t.insert(5, exact_v(4, 0.0).unwrap().0 - 0.01, "broken");
        let report = validate(&t, &[]).unwrap();
        assert!(!report.consistent());
        assert!(report.rows.iter().any(|r| r.n == 5 && !r.consistent()));
    }

    #[test]
    fn s_regression_is_flagged() {
        // A companion at higher s with one row pushed below the base table
        // value violates the increase in s.
        let mut lo = EnergyTable::new(0.0);
        let mut hi = EnergyTable::new(1.0);
        for n in 2..=6 {
            lo.insert(n, exact_v(n, 0.0).unwrap().0, "exact");
            hi.insert(n, exact_v(n, 1.0).unwrap().0, "exact");
        }
        hi.insert(4, exact_v(4, 0.0).unwrap().0 - 0.05, "broken");
        let report = validate(&hi, &[&lo]).unwrap();
        assert!(!report.consistent());
        assert!(report.s_violations.iter().any(|v| v.n == 4));
    }

    #[test]
    fn net_tables_are_exempt() {
        let (net, _) = crate::nets::net_energy_curve(-1.0, 32, false).unwrap();
        let report = validate(&net, &[]).unwrap();
        // Net curves fail monotonicity by construction but must not be
        // treated as data errors.
        assert!(report.n_violations.is_empty());
        assert!(report.catalog_notes.iter().any(|n| n.contains("net")));
    }

    #[test]
    fn concave_table_has_no_convexity_points() {
        let mut t = EnergyTable::new(-2.0);
        for n in 2..=20 {
            t.insert(n, v_minus_two(n).unwrap(), "exact");
        }
        let report = validate(&t, &[]).unwrap();
        assert!(report.consistent());
        assert!(report.convexity.as_ref().unwrap().c_plus.is_empty());
    }
}
