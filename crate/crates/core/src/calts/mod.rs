//! Commutative automorphic Lie triple systems.
//!
//! A Lie triple system carries a trilinear product `[a,b,c]` that is
//! alternating in the first two slots and satisfies the Jacobi identity; it is
//! *commutative automorphic* when every right multiplication `c -> [c,a',b']`
//! is a derivation of the triple product. This module provides:
//!
//! - [`LtsStructure`]: finite-dimensional systems given by structure constants
//!   (with a JSON loader),
//! - [`Free2`]: the system freely generated by two elements, with closed-form
//!   structure constants on the basis `{a, b, E(i,j)}` (`i + j` odd),
//! - [`amodel`]: an independent brute-force oracle for [`Free2`] built on a
//!   word rewriting system,
//! - generic axiom checkers, the derived series, and the left-normed
//!   adjoint-exponential sum.
//!
//! The n-ary bracket `[a1,...,an]` is left-normed and vanishes for even n.

pub mod amodel;
mod free2;

pub use free2::{free2_dim, Free2, FreeKey};

use std::collections::HashMap;
use std::fmt;

use serde::Deserialize;

use crate::linear::{LinComb, RowSpace};
use crate::rational::Rational;

/// Errors from triple-system construction and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum LtsError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("table entry [{p},{q},{r}] violates alternation")]
    AlternationViolation { p: usize, q: usize, r: usize },
    #[error("labels length {labels} does not match dim {dim}")]
    LabelMismatch { labels: usize, dim: usize },
    #[error("word of length {len} exceeds the configured bound {max}")]
    WordLengthExceeded { len: usize, max: usize },
    #[error("invalid structure JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A triple system with a distinguished graded basis.
pub trait TripleSystem {
    type Key: Ord + Clone + fmt::Debug;

    fn degree(&self, key: &Self::Key) -> u32;

    /// All basis keys of degree `<= max_degree`, in basis order.
    fn basis_up_to(&self, max_degree: u32) -> Vec<Self::Key>;

    /// `[p, q, r]` on basis keys.
    fn triple_basis(&self, p: &Self::Key, q: &Self::Key, r: &Self::Key)
        -> LinComb<Self::Key>;

    /// Trilinear extension of the basis product.
    fn triple(
        &self,
        x: &LinComb<Self::Key>,
        y: &LinComb<Self::Key>,
        z: &LinComb<Self::Key>,
    ) -> LinComb<Self::Key> {
        let mut out = LinComb::zero();
        for (p, cx) in x.iter() {
            for (q, cy) in y.iter() {
                let cxy = cx * cy;
                for (r, cz) in z.iter() {
                    out.add_scaled(&self.triple_basis(p, q, r), &(&cxy * cz));
                }
            }
        }
        out
    }

    /// Left-normed n-ary bracket `[a1,...,an]`: zero for even n, `a1` for
    /// n = 1, else `[[[a1,a2,a3],...],a_{n-1},a_n]`.
    fn nary_bracket(&self, args: &[LinComb<Self::Key>]) -> LinComb<Self::Key> {
        if args.is_empty() || args.len() % 2 == 0 {
            return LinComb::zero();
        }
        let mut acc = args[0].clone();
        let mut k = 1;
        while k + 1 < args.len() {
            acc = self.triple(&acc, &args[k], &args[k + 1]);
            k += 2;
        }
        acc
    }

    /// `sum_{m even, m <= max_m} (1/m!) [y, m...x]`; odd-arity terms vanish
    /// by the even-arity convention, so only even m contribute.
    fn adjoint_exp(
        &self,
        x: &LinComb<Self::Key>,
        y: &LinComb<Self::Key>,
        max_m: u32,
    ) -> LinComb<Self::Key> {
        let mut acc = y.clone();
        let mut chain = y.clone();
        let mut m = 2;
        while m <= max_m {
            chain = self.triple(&chain, x, x);
            if chain.is_zero() {
                break;
            }
            acc.add_scaled(&chain, &Rational::inv_factorial(m));
            m += 2;
        }
        acc
    }
}

/// A finite-dimensional triple system given by structure constants.
///
/// The table stores `[e_p, e_q, e_r]` sparsely; missing entries are zero and
/// `[e_q, e_p, e_r]` is derived by alternation.
pub struct LtsStructure {
    labels: Vec<String>,
    table: HashMap<(usize, usize, usize), LinComb<usize>>,
}

impl LtsStructure {
    /// Build from explicit entries, validating indices and alternation.
    pub fn new(
        labels: Vec<String>,
        entries: impl IntoIterator<Item = ((usize, usize, usize), LinComb<usize>)>,
    ) -> Result<Self, LtsError> {
        let dim = labels.len();
        let check = |index: usize| -> Result<(), LtsError> {
            if index >= dim {
                Err(LtsError::IndexOutOfRange { index, dim })
            } else {
                Ok(())
            }
        };
        let mut table: HashMap<(usize, usize, usize), LinComb<usize>> = HashMap::new();
        for ((p, q, r), value) in entries {
            check(p)?;
            check(q)?;
            check(r)?;
            for (idx, _) in value.iter() {
                check(*idx)?;
            }
            if value.is_zero() {
                continue;
            }
            if p == q {
                return Err(LtsError::AlternationViolation { p, q, r });
            }
            table.insert((p, q, r), value);
        }
        // Alternation consistency when both orders are present.
        for (&(p, q, r), value) in &table {
            if let Some(other) = table.get(&(q, p, r)) {
                if *other != value.neg() {
                    return Err(LtsError::AlternationViolation { p, q, r });
                }
            }
        }
        Ok(LtsStructure { labels, table })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Parse the JSON document `{dim, labels, triples:[{p,q,r, out:[{idx,value}]}]}`.
    pub fn from_json(text: &str) -> Result<Self, LtsError> {
        #[derive(Deserialize)]
        struct OutJson {
            idx: usize,
            value: Rational,
        }
        #[derive(Deserialize)]
        struct TripleJson {
            p: usize,
            q: usize,
            r: usize,
            out: Vec<OutJson>,
        }
        #[derive(Deserialize)]
        struct LtsJson {
            dim: usize,
            labels: Vec<String>,
            triples: Vec<TripleJson>,
        }
        let doc: LtsJson = serde_json::from_str(text)?;
        if doc.labels.len() != doc.dim {
            return Err(LtsError::LabelMismatch {
                labels: doc.labels.len(),
                dim: doc.dim,
            });
        }
        let entries = doc.triples.into_iter().map(|t| {
            let value = t.out.into_iter().map(|o| (o.idx, o.value)).collect();
            ((t.p, t.q, t.r), value)
        });
        Self::new(doc.labels, entries)
    }

    /// Validate that an element only references basis indices within range.
    pub fn check_element(&self, x: &LinComb<usize>) -> Result<(), LtsError> {
        for (idx, _) in x.iter() {
            if *idx >= self.dim() {
                return Err(LtsError::IndexOutOfRange {
                    index: *idx,
                    dim: self.dim(),
                });
            }
        }
        Ok(())
    }

    /// The 2-dimensional system `{u, v}` of the 3x3 matrix model, with
    /// `[u,v,v] = u/4` and `[v,u,v] = -u/4` the only nonzero basis products.
    pub fn matrix_example() -> Self {
        let quarter = Rational::new(1, 4);
        Self::new(
            vec!["u".into(), "v".into()],
            [
                ((0, 1, 1), LinComb::term(0, quarter.clone())),
                ((1, 0, 1), LinComb::term(0, -quarter)),
            ],
        )
        .expect("matrix example is well formed")
    }

    /// The 2-dimensional simple triple with `[e,f,e] = e`, `[e,f,f] = -f`:
    /// a Lie triple system that fails the commutative automorphic identity.
    pub fn simple_counterexample() -> Self {
        Self::new(
            vec!["e".into(), "f".into()],
            [
                ((0, 1, 0), LinComb::basis(0)),
                ((1, 0, 0), LinComb::basis(0).neg()),
                ((0, 1, 1), LinComb::basis(1).neg()),
                ((1, 0, 1), LinComb::basis(1)),
            ],
        )
        .expect("counterexample is well formed")
    }
}

impl TripleSystem for LtsStructure {
    type Key = usize;

    fn degree(&self, _key: &usize) -> u32 {
        1
    }

    fn basis_up_to(&self, max_degree: u32) -> Vec<usize> {
        if max_degree == 0 {
            return Vec::new();
        }
        (0..self.dim()).collect()
    }

    fn triple_basis(&self, p: &usize, q: &usize, r: &usize) -> LinComb<usize> {
        assert!(
            *p < self.dim() && *q < self.dim() && *r < self.dim(),
            "basis index out of range"
        );
        if p == q {
            return LinComb::zero();
        }
        if let Some(v) = self.table.get(&(*p, *q, *r)) {
            return v.clone();
        }
        if let Some(v) = self.table.get(&(*q, *p, *r)) {
            return v.neg();
        }
        LinComb::zero()
    }
}

/// Which axiom a violation report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomKind {
    Alternation,
    Jacobi,
    CommutativeAutomorphic,
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomKind::Alternation => write!(f, "alternation"),
            AxiomKind::Jacobi => write!(f, "jacobi"),
            AxiomKind::CommutativeAutomorphic => write!(f, "commutative-automorphic"),
        }
    }
}

/// A violated axiom instance, with the witnessing basis tuple.
#[derive(Debug, Clone)]
pub struct AxiomViolation {
    pub kind: AxiomKind,
    pub witness: String,
    pub discrepancy: String,
}

/// Outcome of [`check_ca_axioms`]: every violated tuple is listed.
#[derive(Debug, Default)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verify alternation, the Jacobi identity and the commutative automorphic
/// identity on all basis tuples of total degree `<= cap`. Violations are
/// report content, not errors.
pub fn check_ca_axioms<S: TripleSystem>(sys: &S, cap: u32) -> AxiomReport {
    let basis = sys.basis_up_to(cap);
    let deg = |k: &S::Key| sys.degree(k);
    let mut report = AxiomReport::default();
    let mut record = |kind: AxiomKind, witness: String, diff: &LinComb<S::Key>| {
        report.violations.push(AxiomViolation {
            kind,
            witness,
            discrepancy: format!("{diff:?}"),
        });
    };

    // Alternation and antisymmetry in the first two slots.
    for p in &basis {
        for q in &basis {
            for r in &basis {
                if deg(p) + deg(q) + deg(r) > cap {
                    continue;
                }
                report.checked += 1;
                if p == q {
                    let v = sys.triple_basis(p, q, r);
                    if !v.is_zero() {
                        record(AxiomKind::Alternation, format!("[{p:?},{q:?},{r:?}]"), &v);
                    }
                } else {
                    let v = sys
                        .triple_basis(p, q, r)
                        .add(&sys.triple_basis(q, p, r));
                    if !v.is_zero() {
                        record(
                            AxiomKind::Alternation,
                            format!("[{p:?},{q:?},{r:?}] + [{q:?},{p:?},{r:?}]"),
                            &v,
                        );
                    }
                }
            }
        }
    }

    // Jacobi on unordered triples (multilinearity covers the rest).
    let n = basis.len();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let (p, q, r) = (&basis[i], &basis[j], &basis[k]);
                if deg(p) + deg(q) + deg(r) > cap {
                    continue;
                }
                report.checked += 1;
                let mut v = sys.triple_basis(p, q, r);
                v.add_scaled(&sys.triple_basis(q, r, p), &Rational::one());
                v.add_scaled(&sys.triple_basis(r, p, q), &Rational::one());
                if !v.is_zero() {
                    record(AxiomKind::Jacobi, format!("({p:?},{q:?},{r:?})"), &v);
                }
            }
        }
    }

    // Commutative automorphic identity on 5-tuples; both sides are
    // antisymmetric in (a,b) and in (a',b'), so strict pairs suffice.
    for ia in 0..n {
        for ib in (ia + 1)..n {
            for ic in 0..n {
                for ja in 0..n {
                    for jb in (ja + 1)..n {
                        let (a, b, c) = (&basis[ia], &basis[ib], &basis[ic]);
                        let (a2, b2) = (&basis[ja], &basis[jb]);
                        let total = deg(a) + deg(b) + deg(c) + deg(a2) + deg(b2);
                        if total > cap {
                            continue;
                        }
                        report.checked += 1;
                        let lhs = sys.triple(
                            &sys.triple_basis(a, b, c),
                            &LinComb::basis(a2.clone()),
                            &LinComb::basis(b2.clone()),
                        );
                        let mut rhs = sys.triple(
                            &sys.triple_basis(a, a2, b2),
                            &LinComb::basis(b.clone()),
                            &LinComb::basis(c.clone()),
                        );
                        rhs.add_scaled(
                            &sys.triple(
                                &LinComb::basis(a.clone()),
                                &sys.triple_basis(b, a2, b2),
                                &LinComb::basis(c.clone()),
                            ),
                            &Rational::one(),
                        );
                        rhs.add_scaled(
                            &sys.triple(
                                &LinComb::basis(a.clone()),
                                &LinComb::basis(b.clone()),
                                &sys.triple_basis(c, a2, b2),
                            ),
                            &Rational::one(),
                        );
                        let diff = lhs.sub(&rhs);
                        if !diff.is_zero() {
                            record(
                                AxiomKind::CommutativeAutomorphic,
                                format!("[[{a:?},{b:?},{c:?}],{a2:?},{b2:?}]"),
                                &diff,
                            );
                        }
                    }
                }
            }
        }
    }

    report
}

/// Result of the derived-series computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedSeries {
    /// dim T^(1), dim T^(2), ... until the dimension stabilizes.
    pub dims: Vec<usize>,
    pub solvable: bool,
}

/// Derived series `T^(1) = [T,T,T]`, `T^(i+1) = [T, T^(i), T^(i)]` on the
/// basis elements of degree `<= cap`.
pub fn derived_series<S: TripleSystem>(sys: &S, cap: u32) -> DerivedSeries {
    let basis = sys.basis_up_to(cap);
    let full: Vec<LinComb<S::Key>> = basis.iter().cloned().map(LinComb::basis).collect();

    let mut dims = Vec::new();
    // T^(1) = [T, T, T]
    let mut current = close_under_triples(sys, &full, &full, &full);
    loop {
        let dim = current.len();
        dims.push(dim);
        if dim == 0 {
            return DerivedSeries {
                dims,
                solvable: true,
            };
        }
        let next = close_under_triples(sys, &full, &current, &current);
        if next.len() == dim {
            dims.push(next.len());
            return DerivedSeries {
                dims,
                solvable: false,
            };
        }
        current = next;
    }
}

fn close_under_triples<S: TripleSystem>(
    sys: &S,
    xs: &[LinComb<S::Key>],
    ys: &[LinComb<S::Key>],
    zs: &[LinComb<S::Key>],
) -> Vec<LinComb<S::Key>> {
    let mut space = RowSpace::new();
    let mut generators = Vec::new();
    for x in xs {
        for y in ys {
            for z in zs {
                let v = sys.triple(x, y, z);
                if space.insert(&v) {
                    generators.push(v);
                }
            }
        }
    }
    generators
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> LinComb<usize> {
        LinComb::basis(0)
    }

    fn v() -> LinComb<usize> {
        LinComb::basis(1)
    }

    #[test]
    fn matrix_example_triple_products() {
        let sys = LtsStructure::matrix_example();
        // [v,u,v] = -u/4
        assert_eq!(
            sys.triple(&v(), &u(), &v()),
            u().scale(&Rational::new(-1, 4))
        );
        // [v,u,u] = 0 and alternation [x,x,z] = 0
        assert!(sys.triple(&v(), &u(), &u()).is_zero());
        let x = u().add(&v().scale(&Rational::new(3, 2)));
        assert!(sys.triple(&x, &x, &v()).is_zero());
    }

    #[test]
    fn matrix_example_satisfies_ca_axioms() {
        let report = check_ca_axioms(&LtsStructure::matrix_example(), 9);
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn simple_triple_fails_ca_only() {
        let sys = LtsStructure::simple_counterexample();
        let report = check_ca_axioms(&sys, 9);
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .all(|v| v.kind == AxiomKind::CommutativeAutomorphic));
    }

    #[test]
    fn derived_series_examples() {
        let matrix = derived_series(&LtsStructure::matrix_example(), 9);
        assert_eq!(matrix.dims, vec![1, 0]);
        assert!(matrix.solvable);

        let abelian = LtsStructure::new(vec!["x".into(), "y".into()], []).unwrap();
        let series = derived_series(&abelian, 9);
        assert_eq!(series.dims, vec![0]);
        assert!(series.solvable);
    }

    #[test]
    fn json_loader_roundtrip() {
        let text = r#"{
            "dim": 2,
            "labels": ["u", "v"],
            "triples": [
                {"p": 0, "q": 1, "r": 1, "out": [{"idx": 0, "value": "1/4"}]},
                {"p": 1, "q": 0, "r": 1, "out": [{"idx": 0, "value": "-1/4"}]}
            ]
        }"#;
        let sys = LtsStructure::from_json(text).unwrap();
        assert_eq!(sys.dim(), 2);
        assert_eq!(
            sys.triple(&v(), &u(), &v()),
            u().scale(&Rational::new(-1, 4))
        );
        assert!(check_ca_axioms(&sys, 9).passed());
    }

    #[test]
    fn json_loader_rejects_bad_input() {
        let out_of_range = r#"{"dim": 1, "labels": ["x"],
            "triples": [{"p": 0, "q": 2, "r": 0, "out": [{"idx": 0, "value": "1/1"}]}]}"#;
        assert!(matches!(
            LtsStructure::from_json(out_of_range),
            Err(LtsError::IndexOutOfRange { index: 2, dim: 1 })
        ));

        let alternation = r#"{"dim": 2, "labels": ["x", "y"],
            "triples": [{"p": 0, "q": 0, "r": 1, "out": [{"idx": 0, "value": "1/1"}]}]}"#;
        assert!(matches!(
            LtsStructure::from_json(alternation),
            Err(LtsError::AlternationViolation { .. })
        ));
    }
}
