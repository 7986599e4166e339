//! Energy tables: rows (N, v, provenance) at a fixed exponent.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// One table row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub v: f64,
    pub provenance: String,
}

/// A map N -> (v, provenance) at a fixed Riesz exponent s. Rows are kept
/// sorted by N; discrete-derivative operations additionally need the keys
/// to be contiguous around the queried N.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTable {
    s: f64,
    rows: BTreeMap<usize, Row>,
}

impl EnergyTable {
    pub fn new(s: f64) -> EnergyTable {
        EnergyTable { s, rows: BTreeMap::new() }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn insert(&mut self, n: usize, v: f64, provenance: &str) {
        self.rows.insert(n, Row { v, provenance: provenance.to_string() });
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.rows.get(&n).map(|r| r.v)
    }

    pub fn require(&self, n: usize) -> Result<f64> {
        self.get(n)
            .ok_or_else(|| Error::Domain(format!("table has no row N = {n}")))
    }

    pub fn rows(&self) -> &BTreeMap<usize, Row> {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_min(&self) -> Option<usize> {
        self.rows.keys().next().copied()
    }

    pub fn n_max(&self) -> Option<usize> {
        self.rows.keys().next_back().copied()
    }

    /// True when the keys form a contiguous integer range.
    pub fn contiguous(&self) -> bool {
        match (self.n_min(), self.n_max()) {
            (Some(lo), Some(hi)) => self.rows.len() == hi - lo + 1,
            _ => true,
        }
    }

    /// Applies `f` to every stored value, keeping provenance.
    pub fn map_values(&self, f: impl Fn(usize, f64) -> f64) -> EnergyTable {
        let mut out = EnergyTable::new(self.s);
        for (&n, row) in &self.rows {
            out.insert(n, f(n, row.v), &row.provenance);
        }
        out
    }
}
