//! Baker-Campbell-Hausdorff coefficient engines and cross-validation.
//!
//! Four independent routes to the coefficient tables:
//!
//! - [`beta_genfun`]: Taylor coefficients of the closed-form generating
//!   function, via exact series division;
//! - [`alpha_recursion`] + [`beta_from_alpha`]: the recursion driven by the
//!   `x/tanh(x)` coefficients, then the conversion to the commutative table;
//! - [`bch_symbolic`]: the Hopf-algebra computation in the enveloping algebra
//!   of the free 2-generated system, for both the left Bruck and the
//!   commutative automorphic product;
//! - [`matrix_model`]: the explicit 3x3 matrix representation, by matrix
//!   exponentials and logarithms over bivariate series.
//!
//! [`cross_validate`] runs them all and reports every cell disagreement.

mod crossval;
mod hopf_eng;
mod matrix_eng;
mod series_eng;

pub use crossval::{cross_validate, CrossConfig, CrossReport, Disagreement};
pub use hopf_eng::{bch_dot_direct, bch_symbolic, free2_context, BchOutcome, BchProduct};
pub use matrix_eng::{
    matrix_f_closed_form, matrix_model, verify_bracket_collapse, MatrixModel, MatrixSeries,
};
pub use series_eng::{alpha_recursion, beta_from_alpha, beta_genfun, xi_series};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::rational::Rational;

/// Which coefficient family a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Alpha,
    Beta,
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableKind::Alpha => write!(f, "alpha"),
            TableKind::Beta => write!(f, "beta"),
        }
    }
}

/// Which engine produced a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineId {
    Genfun,
    Recursion,
    Hopf,
    Matrix,
    DotDirect,
}

impl EngineId {
    pub fn name(&self) -> &'static str {
        match self {
            EngineId::Genfun => "genfun",
            EngineId::Recursion => "recursion",
            EngineId::Hopf => "hopf",
            EngineId::Matrix => "matrix",
            EngineId::DotDirect => "dot_direct",
        }
    }
}

impl fmt::Display for EngineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "genfun" => Ok(EngineId::Genfun),
            "recursion" => Ok(EngineId::Recursion),
            "hopf" => Ok(EngineId::Hopf),
            "matrix" => Ok(EngineId::Matrix),
            "dot_direct" | "dot-direct" => Ok(EngineId::DotDirect),
            other => Err(format!("unknown engine {other:?}")),
        }
    }
}

/// A table of BCH coefficients `(p,q) -> value` for `p, q >= 1`.
///
/// Invariants: all stored cells satisfy `p + q <= max_total_degree`, carry a
/// nonzero value, and have `p + q` odd (the even ones vanish identically; an
/// engine producing a nonzero even cell has a bug and trips an assertion).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    pub kind: TableKind,
    pub engine: EngineId,
    pub max_total_degree: u32,
    entries: BTreeMap<(u32, u32), Rational>,
}

impl CoeffTable {
    pub fn new(kind: TableKind, engine: EngineId, max_total_degree: u32) -> Self {
        CoeffTable {
            kind,
            engine,
            max_total_degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, p: u32, q: u32, value: Rational) {
        assert!(p >= 1 && q >= 1, "cells require p, q >= 1");
        assert!(
            p + q <= self.max_total_degree,
            "cell ({p},{q}) beyond table degree {}",
            self.max_total_degree
        );
        if value.is_zero() {
            self.entries.remove(&(p, q));
            return;
        }
        assert!(
            (p + q) % 2 == 1,
            "nonzero coefficient at even total degree ({p},{q}): {value}"
        );
        self.entries.insert((p, q), value);
    }

    /// Stored value or zero. Cells beyond the table degree are unknown and
    /// panic rather than reading as zero.
    pub fn get(&self, p: u32, q: u32) -> Rational {
        assert!(
            p >= 1 && q >= 1 && p + q <= self.max_total_degree,
            "cell ({p},{q}) outside table range"
        );
        self.entries
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted by (p+q, p).
    pub fn sorted_entries(&self) -> Vec<(u32, u32, Rational)> {
        let mut rows: Vec<(u32, u32, Rational)> = self
            .entries
            .iter()
            .map(|(&(p, q), v)| (p, q, v.clone()))
            .collect();
        rows.sort_by_key(|&(p, q, _)| (p + q, p));
        rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,q,value\n");
        for (p, q, v) in self.sorted_entries() {
            out.push_str(&format!("{p},{q},{v}\n"));
        }
        out
    }

    /// Parse the CSV format back (header line required).
    pub fn from_csv(
        kind: TableKind,
        engine: EngineId,
        max_total_degree: u32,
        text: &str,
    ) -> Result<Self, String> {
        let mut table = CoeffTable::new(kind, engine, max_total_degree);
        let mut lines = text.lines();
        match lines.next() {
            Some("p,q,value") => {}
            other => return Err(format!("bad CSV header {other:?}")),
        }
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let p: u32 = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| format!("bad row {line:?}"))?;
            let q: u32 = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| format!("bad row {line:?}"))?;
            let value: Rational = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| format!("bad row {line:?}"))?;
            table.set(p, q, value);
        }
        Ok(table)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": self.kind.to_string(),
            "engine": self.engine.to_string(),
            "max_total_degree": self.max_total_degree,
            "entries": self.sorted_entries().iter().map(|(p, q, v)| json!({
                "p": p, "q": q, "value": v.to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    /// A LaTeX array of the upper-left k x k block, where k = 7 when the
    /// table reaches total degree 14 and shrinks with the table otherwise.
    pub fn to_latex(&self) -> String {
        let k = 7.min(self.max_total_degree.saturating_sub(1)).max(1);
        let mut out = String::new();
        out.push_str("\\begin{array}{");
        out.push_str(&"r".repeat(k as usize));
        out.push_str("}\n");
        for p in 1..=k {
            let cells: Vec<String> = (1..=k)
                .map(|q| {
                    if p + q > self.max_total_degree {
                        "0".to_owned()
                    } else {
                        latex_rational(&self.get(p, q))
                    }
                })
                .collect();
            out.push_str(&cells.join(" & "));
            if p < k {
                out.push_str(" \\\\");
            }
            out.push('\n');
        }
        out.push_str("\\end{array}\n");
        out
    }
}

fn latex_rational(v: &Rational) -> String {
    use num_traits::One;
    if v.is_zero() {
        return "0".to_owned();
    }
    let num = v.numerator();
    let den = v.denominator();
    if den.is_one() {
        return format!("{num}");
    }
    if v.is_negative() {
        format!("-\\frac{{{}}}{{{}}}", -num, den)
    } else {
        format!("\\frac{{{num}}}{{{den}}}")
    }
}

/// The published 7x7 reference values of the commutative automorphic BCH
/// coefficients (rows p, columns q; cells with p+q even are zero).
pub fn reference_beta_entries() -> Vec<(u32, u32, Rational)> {
    const CELLS: [(u32, u32, i64, i64); 24] = [
        (1, 2, 1, 3),
        (1, 4, -1, 45),
        (1, 6, 2, 945),
        (2, 1, -1, 3),
        (2, 3, -4, 45),
        (2, 5, 4, 315),
        (2, 7, -8, 4725),
        (3, 2, 4, 45),
        (3, 4, 16, 945),
        (3, 6, -64, 14175),
        (4, 1, 1, 45),
        (4, 3, -16, 945),
        (4, 5, -16, 4725),
        (4, 7, 32, 22275),
        (5, 2, -4, 315),
        (5, 4, 16, 4725),
        (5, 6, 128, 155925),
        (6, 1, -2, 945),
        (6, 3, 64, 14175),
        (6, 5, -128, 155925),
        (6, 7, -48896, 212837625),
        (7, 2, 8, 4725),
        (7, 4, -32, 22275),
        (7, 6, 48896, 212837625),
    ];
    CELLS
        .iter()
        .map(|&(p, q, num, den)| (p, q, Rational::new(num, den)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> CoeffTable {
        let mut t = CoeffTable::new(TableKind::Beta, EngineId::Genfun, 3);
        t.set(1, 2, Rational::new(1, 3));
        t.set(2, 1, Rational::new(-1, 3));
        t
    }

    #[test]
    fn csv_round_trip() {
        let t = sample_table();
        let csv = t.to_csv();
        assert_eq!(csv, "p,q,value\n1,2,1/3\n2,1,-1/3\n");
        let back = CoeffTable::from_csv(TableKind::Beta, EngineId::Genfun, 3, &csv).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_shape() {
        let t = sample_table();
        let json = t.to_json();
        assert_eq!(json["kind"], "beta");
        assert_eq!(json["engine"], "genfun");
        assert_eq!(json["entries"][0]["value"], "1/3");
    }

    #[test]
    fn latex_small_grid() {
        let t = sample_table();
        let latex = t.to_latex();
        // 2x2 block at max degree 3
        assert!(latex.contains("\\begin{array}{rr}"));
        assert!(latex.contains("0 & \\frac{1}{3}"));
        assert!(latex.contains("-\\frac{1}{3} & 0"));
    }

    #[test]
    fn even_cells_are_rejected() {
        let mut t = CoeffTable::new(TableKind::Alpha, EngineId::Recursion, 4);
        t.set(1, 2, Rational::one());
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            t.set(1, 1, Rational::one());
        }));
        assert!(result.is_err());
    }

    #[test]
    fn reference_table_is_antisymmetric() {
        let entries = reference_beta_entries();
        assert_eq!(entries.len(), 24);
        let get = |p: u32, q: u32| -> Rational {
            entries
                .iter()
                .find(|&&(ep, eq, _)| ep == p && eq == q)
                .map(|(_, _, v)| v.clone())
                .unwrap_or_else(Rational::zero)
        };
        for p in 1..=7 {
            for q in 1..=7 {
                assert_eq!(get(p, q), -get(q, p), "antisymmetry at ({p},{q})");
                if (p + q) % 2 == 0 {
                    assert!(get(p, q).is_zero());
                }
            }
        }
    }
}
