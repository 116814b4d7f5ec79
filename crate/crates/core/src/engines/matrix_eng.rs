//! The explicit 3x3 matrix engine.
//!
//! The triple system `T = span{u, v}` with `[x,y,z] = (1/4)[[x,y],z]` embeds
//! in a solvable 3x3 matrix Lie algebra. With `abar = -2(u - v)` and
//! `bbar = 2(u + v)`, every bracket word `[abar, bbar, ...]` of odd length
//! > 1 collapses to `-4u`, so the whole BCH series can be read off one
//! matrix entry of `log(e^{(s/2) abar} e^{t bbar} e^{(s/2) abar})` over
//! bivariate series.
//!
//! `u` is the elementary matrix E13 and `v = E12 + E21`; this sign of `v`
//! makes the log come out with `+2(s+t)` in the corner entries while leaving
//! every triple product, and hence the extracted coefficients, unchanged.

use log::info;
use std::time::Instant;

use crate::rational::Rational;
use crate::series::BiSeries;

use super::{CoeffTable, EngineId, TableKind};

/// A 3x3 matrix of bivariate series sharing one truncation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixSeries {
    trunc: u32,
    entries: Vec<BiSeries>,
}

impl MatrixSeries {
    pub fn zero(trunc: u32) -> Self {
        MatrixSeries {
            trunc,
            entries: (0..9).map(|_| BiSeries::zero(trunc)).collect(),
        }
    }

    pub fn identity(trunc: u32) -> Self {
        let mut m = Self::zero(trunc);
        for i in 0..3 {
            *m.at_mut(i, i) = BiSeries::one(trunc);
        }
        m
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn at(&self, row: usize, col: usize) -> &BiSeries {
        &self.entries[3 * row + col]
    }

    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut BiSeries {
        &mut self.entries[3 * row + col]
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.trunc);
        for i in 0..9 {
            out.entries[i] = &self.entries[i] + &other.entries[i];
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.trunc);
        for i in 0..9 {
            out.entries[i] = &self.entries[i] - &other.entries[i];
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.trunc);
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = BiSeries::zero(self.trunc);
                for k in 0..3 {
                    acc = &acc + &(self.at(r, k) * other.at(k, c));
                }
                *out.at_mut(r, c) = acc;
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.trunc);
        for i in 0..9 {
            out.entries[i] = self.entries[i].scale(c);
        }
        out
    }

    fn has_zero_constant_term(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.coeff(0, 0).expect("constant term is known").is_zero())
    }

    /// Matrix exponential; every entry needs a zero constant term, so the
    /// power series terminates at the truncation.
    pub fn exp(&self) -> Self {
        assert!(
            self.has_zero_constant_term(),
            "matrix exp requires zero constant terms"
        );
        let mut acc = Self::identity(self.trunc);
        let mut power = Self::identity(self.trunc);
        for k in 1..=self.trunc {
            power = power.mul(self);
            acc = acc.add(&power.scale(&Rational::inv_factorial(k)));
        }
        acc
    }

    /// Matrix logarithm `sum (-1)^{k+1} (M - I)^k / k`.
    pub fn log(&self) -> Self {
        let h = self.sub(&Self::identity(self.trunc));
        assert!(
            h.has_zero_constant_term(),
            "matrix log requires constant term I"
        );
        let mut acc = Self::zero(self.trunc);
        let mut power = Self::identity(self.trunc);
        for k in 1..=self.trunc {
            power = power.mul(&h);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&Rational::new(sign, k as i64)));
        }
        acc
    }
}

/// Everything the matrix engine produces.
pub struct MatrixModel {
    pub alpha: CoeffTable,
    pub beta: CoeffTable,
    pub a_matrix: MatrixSeries,
    pub f: BiSeries,
}

/// Constant matrix with rational entries, lifted to series.
fn constant_matrix(trunc: u32, rows: [[i64; 3]; 3]) -> MatrixSeries {
    let mut m = MatrixSeries::zero(trunc);
    for (r, row) in rows.iter().enumerate() {
        for (c, &value) in row.iter().enumerate() {
            *m.at_mut(r, c) = BiSeries::constant(trunc, Rational::from_int(value));
        }
    }
    m
}

fn scale_by_series(m: &MatrixSeries, s: &BiSeries) -> MatrixSeries {
    let mut out = MatrixSeries::zero(m.trunc());
    for r in 0..3 {
        for c in 0..3 {
            *out.at_mut(r, c) = m.at(r, c) * s;
        }
    }
    out
}

/// Run the matrix engine up to total degree `n`.
pub fn matrix_model(n: u32) -> MatrixModel {
    let start = Instant::now();
    // abar = -2(u - v), bbar = 2(u + v) with u = E13, v = E12 + E21
    let abar = constant_matrix(n, [[0, 2, -2], [2, 0, 0], [0, 0, 0]]);
    let bbar = constant_matrix(n, [[0, 2, 2], [2, 0, 0], [0, 0, 0]]);

    let half_s = BiSeries::var_s(n).scale(&Rational::new(1, 2));
    let t = BiSeries::var_t(n);
    let ea = scale_by_series(&abar, &half_s).exp();
    let eb = scale_by_series(&bbar, &t).exp();
    let g = ea.mul(&eb).mul(&ea);
    let a_matrix = g.log();

    // the log must live in the Lie algebra span: only (0,1),(1,0),(0,2),(1,2)
    // entries survive, with the symmetric corner equal to 2(s+t)
    let two_st = (&BiSeries::var_s(n) + &BiSeries::var_t(n)).scale(&Rational::from_int(2));
    assert_eq!(
        a_matrix.at(0, 1),
        &two_st,
        "matrix log entry (1,2) is not 2(s+t)"
    );
    assert_eq!(
        a_matrix.at(1, 0),
        &two_st,
        "matrix log entry (2,1) is not 2(s+t)"
    );
    for (r, c) in [(0, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)] {
        assert!(
            a_matrix.at(r, c).is_zero(),
            "matrix log entry ({},{}) should vanish",
            r + 1,
            c + 1
        );
    }

    // f(s,t) = -4 sum alpha_{p,q} s^p t^q = 2s - 2t + A[1,3]
    let f = &(&BiSeries::var_s(n).scale(&Rational::from_int(2))
        - &BiSeries::var_t(n).scale(&Rational::from_int(2)))
        + a_matrix.at(0, 2);

    let quarter = Rational::new(-1, 4);
    let mut alpha = CoeffTable::new(TableKind::Alpha, EngineId::Matrix, n);
    for p in 1..n {
        for q in 1..=(n - p) {
            alpha.set(p, q, f.coeff(p, q).expect("within truncation") * quarter.clone());
        }
    }

    // phi(s) = 4(cosh s - 1); -4 sum beta s^p t^q = t phi(s) + f + phi(s) f / 4
    let es = BiSeries::var_s(n).exp().expect("no constant");
    let ems = (-&BiSeries::var_s(n)).exp().expect("no constant");
    let phi = &(&es + &ems).scale(&Rational::from_int(2))
        - &BiSeries::constant(n, Rational::from_int(4));
    let beta_series = (&(&(&phi * &BiSeries::var_t(n)) + &f)
        + &(&phi * &f).scale(&Rational::new(1, 4)))
        .scale(&quarter);
    let mut beta = CoeffTable::new(TableKind::Beta, EngineId::Matrix, n);
    for p in 1..n {
        for q in 1..=(n - p) {
            beta.set(p, q, beta_series.coeff(p, q).expect("within truncation"));
        }
    }

    info!(
        "matrix engine at degree {n}: {} alpha / {} beta cells in {:.2?}",
        alpha.len(),
        beta.len(),
        start.elapsed()
    );
    MatrixModel {
        alpha,
        beta,
        a_matrix,
        f,
    }
}

/// Check the bracket-collapse lemma in the matrix triple system: every
/// left-normed bracket `[abar, bbar, x3, ..., xk]` with letters from
/// `{abar, bbar}` and odd length `3 <= k <= max_len` equals `-4u`.
/// Returns the failing words, empty on success.
pub fn verify_bracket_collapse(max_len: u32) -> Vec<String> {
    use crate::calts::{LtsStructure, TripleSystem};
    use crate::linear::LinComb;

    let sys = LtsStructure::matrix_example();
    // u = e0, v = e1; abar = -2u + 2v, bbar = 2u + 2v
    let abar: LinComb<usize> = [(0, Rational::from_int(-2)), (1, Rational::from_int(2))]
        .into_iter()
        .collect();
    let bbar: LinComb<usize> = [(0, Rational::from_int(2)), (1, Rational::from_int(2))]
        .into_iter()
        .collect();
    let minus_4u = LinComb::term(0usize, Rational::from_int(-4));

    let mut failures = Vec::new();
    let mut len = 3;
    while len <= max_len {
        let tail = len - 2;
        for mask in 0u32..(1 << tail) {
            let mut args = vec![abar.clone(), bbar.clone()];
            let mut word = String::from("ab");
            for bit in 0..tail {
                if (mask >> bit) & 1 == 0 {
                    args.push(abar.clone());
                    word.push('a');
                } else {
                    args.push(bbar.clone());
                    word.push('b');
                }
            }
            let bracket = sys.nary_bracket(&args);
            if bracket != minus_4u {
                failures.push(format!("[{word}] = {bracket:?}"));
            }
        }
        len += 2;
    }
    failures
}

/// The closed form of `f`: `2s - 2t - 2(e^{2(s+t)} - 2e^{s+2t} + 2e^s - 1)(s+t) / (e^{2(s+t)} - 1)`,
/// truncated at `n`.
pub fn matrix_f_closed_form(n: u32) -> BiSeries {
    let m = n + 1;
    let two = Rational::from_int(2);
    let s = BiSeries::var_s(m);
    let t = BiSeries::var_t(m);
    let st = &s + &t;
    let e_2st = st.scale(&two).exp().expect("no constant");
    let e_s2t = (&s + &t.scale(&two)).exp().expect("no constant");
    let e_s = s.exp().expect("no constant");
    let num = &(&(&(&e_2st - &e_s2t.scale(&two)) + &e_s.scale(&two))
        - &BiSeries::one(m))
        * &st;
    let den = &e_2st - &BiSeries::one(m);
    let fraction = num.div_exact(&den).expect("denominator is (s+t) times a unit");
    let linear = &s.scale(&two) - &t.scale(&two);
    (&linear.truncate_to(fraction.max_total_degree())
        - &fraction.scale(&two))
        .truncate_to(n)
}
