//! Run every engine and compare the tables cell by cell.

use std::time::Instant;

use log::info;
use serde_json::json;

use crate::rational::Rational;

use super::{
    alpha_recursion, bch_dot_direct, bch_symbolic, beta_from_alpha, beta_genfun, matrix_model,
    reference_beta_entries, BchProduct, CoeffTable,
};

/// Per-engine degrees for a cross-validation run.
#[derive(Debug, Clone, Copy)]
pub struct CrossConfig {
    /// genfun, recursion and matrix degree.
    pub series_degree: u32,
    /// hopf (both products) degree.
    pub hopf_degree: u32,
    /// direct dot-product engine degree.
    pub dot_direct_degree: u32,
}

impl Default for CrossConfig {
    fn default() -> Self {
        CrossConfig {
            series_degree: 14,
            hopf_degree: 11,
            dot_direct_degree: 7,
        }
    }
}

/// One mismatching cell between two engines.
#[derive(Debug, Clone)]
pub struct Disagreement {
    pub p: u32,
    pub q: u32,
    pub left_engine: String,
    pub left: Rational,
    pub right_engine: String,
    pub right: Rational,
}

/// Result of a cross-validation run. An empty disagreement list is a pass.
#[derive(Debug, Default)]
pub struct CrossReport {
    /// (left engine, right engine, overlap degree, cells compared)
    pub comparisons: Vec<(String, String, u32, usize)>,
    pub disagreements: Vec<Disagreement>,
}

impl CrossReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "comparisons": self.comparisons.iter().map(|(a, b, deg, cells)| json!({
                "left": a, "right": b, "degree": deg, "cells": cells,
            })).collect::<Vec<_>>(),
            "disagreements": self.disagreements.iter().map(|d| json!({
                "p": d.p, "q": d.q,
                d.left_engine.clone(): d.left.to_string(),
                d.right_engine.clone(): d.right.to_string(),
            })).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }

    fn compare(&mut self, left_label: &str, left: &CoeffTable, right_label: &str, right: &CoeffTable) {
        let overlap = left.max_total_degree.min(right.max_total_degree);
        let mut cells = 0;
        for p in 1..overlap {
            for q in 1..=(overlap - p) {
                cells += 1;
                let lv = left.get(p, q);
                let rv = right.get(p, q);
                if lv != rv {
                    self.disagreements.push(Disagreement {
                        p,
                        q,
                        left_engine: left_label.to_owned(),
                        left: lv,
                        right_engine: right_label.to_owned(),
                        right: rv,
                    });
                }
            }
        }
        self.comparisons
            .push((left_label.to_owned(), right_label.to_owned(), overlap, cells));
    }
}

/// Run all engines at their configured degrees and compare pairwise on the
/// overlaps, including a comparison of the generating function against the
/// published 7x7 reference values.
pub fn cross_validate(config: CrossConfig) -> CrossReport {
    let start = Instant::now();
    let n = config.series_degree;

    let alpha_rec = alpha_recursion(n);
    let beta_rec = beta_from_alpha(&alpha_rec);
    let beta_gen = beta_genfun(n);
    let matrix = matrix_model(n);
    let hopf_alpha = bch_symbolic(config.hopf_degree, BchProduct::Bruck).table;
    let hopf_beta = bch_symbolic(config.hopf_degree, BchProduct::Dot).table;
    let dot_direct = bch_dot_direct(config.dot_direct_degree);

    let mut report = CrossReport::default();
    // alpha engines
    report.compare("alpha/recursion", &alpha_rec, "alpha/matrix", &matrix.alpha);
    report.compare("alpha/recursion", &alpha_rec, "alpha/hopf", &hopf_alpha);
    report.compare("alpha/matrix", &matrix.alpha, "alpha/hopf", &hopf_alpha);
    // beta engines
    report.compare("beta/genfun", &beta_gen, "beta/recursion", &beta_rec);
    report.compare("beta/genfun", &beta_gen, "beta/matrix", &matrix.beta);
    report.compare("beta/genfun", &beta_gen, "beta/hopf", &hopf_beta);
    report.compare("beta/recursion", &beta_rec, "beta/matrix", &matrix.beta);
    report.compare("beta/hopf", &hopf_beta, "beta/dot_direct", &dot_direct);

    // the published table, as far as the genfun range covers it
    let mut cells = 0;
    for (p, q, expected) in reference_beta_entries() {
        if p + q <= beta_gen.max_total_degree {
            cells += 1;
            let got = beta_gen.get(p, q);
            if got != expected {
                report.disagreements.push(Disagreement {
                    p,
                    q,
                    left_engine: "beta/genfun".to_owned(),
                    left: got,
                    right_engine: "reference".to_owned(),
                    right: expected,
                });
            }
        }
    }
    report
        .comparisons
        .push(("beta/genfun".to_owned(), "reference".to_owned(), n.min(13), cells));

    info!(
        "cross-validation: {} comparisons, {} disagreements in {:.2?}",
        report.comparisons.len(),
        report.disagreements.len(),
        start.elapsed()
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cross_validation_passes() {
        let report = cross_validate(CrossConfig {
            series_degree: 7,
            hopf_degree: 5,
            dot_direct_degree: 4,
        });
        assert!(report.passed(), "disagreements: {:?}", report.disagreements);
        assert_eq!(report.comparisons.len(), 9);
    }
}
