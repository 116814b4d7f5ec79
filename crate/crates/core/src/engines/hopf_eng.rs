//! Hopf-algebra BCH engines in the enveloping algebra of the free system.
//!
//! The Bruck-product BCH series is `log(exp(a/2) * exp(b) * exp(a/2))`: the
//! Bruck product of two group-likes `exp(a) exp(b)` equals
//! `r(exp a) * exp(b) * r(exp a)` and `r(exp a) = exp(a/2)`. The commutative
//! product reduces to the same computation after twisting the second
//! argument, `BCH.(a,b) = BCH(a, phi_{exp(a)}(b))`; an independent engine
//! recovers the same coefficients from `exp(a) . exp(b)` directly, with no
//! use of that relation.

use std::time::Instant;

use log::info;

use crate::bruck::{UtContext, UtElement};
use crate::calts::{Free2, FreeKey, TripleSystem};
use crate::env::EnvAlgebra;
use crate::lie::Free2Lie;
use crate::linear::LinComb;
use crate::rational::Rational;

use super::{CoeffTable, EngineId, TableKind};

/// Which product the symbolic engine expands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BchProduct {
    Bruck,
    Dot,
}

/// A coefficient table plus the BCH series itself over the free basis.
pub struct BchOutcome {
    pub table: CoeffTable,
    /// `a + b + sum of coefficients on E(p-1, q-1)`.
    pub series: LinComb<FreeKey>,
}

/// The working context over the free 2-generated system at truncation `n`.
pub fn free2_context(n: u32) -> (UtContext, Free2Lie) {
    let free2 = Free2Lie::new(n);
    let env = EnvAlgebra::new(free2.lie.clone(), n);
    let t_letters = free2.t_letters();
    (UtContext::new(env, t_letters), free2)
}

/// Read the coefficient table out of a primitive BCH series.
fn series_from_primitive(free2: &Free2Lie, prim: &LinComb<u16>) -> LinComb<FreeKey> {
    let mut series = LinComb::zero();
    for (g, c) in prim.iter() {
        if *g == free2.a {
            series.add_term(FreeKey::A, c.clone());
        } else if *g == free2.b {
            series.add_term(FreeKey::B, c.clone());
        } else {
            let (i, j) = free2
                .c_coords(*g)
                .expect("primitive part lies in the generator span");
            assert!(
                (i + j) % 2 == 1,
                "BCH series has a component outside the triple system: c[{i},{j}]"
            );
            series.add_term(FreeKey::e(i, j), c.clone());
        }
    }
    assert!(
        series.coeff(&FreeKey::A).is_one() && series.coeff(&FreeKey::B).is_one(),
        "BCH series must start with a + b"
    );
    series
}

fn table_from_series(
    kind: TableKind,
    engine: EngineId,
    n: u32,
    series: &LinComb<FreeKey>,
) -> CoeffTable {
    let mut table = CoeffTable::new(kind, engine, n);
    for (key, c) in series.iter() {
        if let FreeKey::E(i, j) = key {
            table.set(i + 1, j + 1, c.clone());
        }
    }
    table
}

/// BCH coefficients by the enveloping-algebra computation.
pub fn bch_symbolic(n: u32, product: BchProduct) -> BchOutcome {
    let start = Instant::now();
    let free2 = Free2Lie::new(n);
    let env = EnvAlgebra::new(free2.lie.clone(), n);
    let half_a = env.gen_elem(free2.a).scale(&Rational::new(1, 2));
    let exp_half_a = env.exp(&half_a).expect("a/2 is primitive");

    let second = match product {
        BchProduct::Bruck => env.gen_elem(free2.b),
        BchProduct::Dot => {
            // b' = phi_{exp(a)}(b) = sum (1/m!) [b, m...a] in the free system
            let sys = Free2::new(n);
            let twisted = sys.adjoint_exp(
                &LinComb::basis(FreeKey::A),
                &LinComb::basis(FreeKey::B),
                n.saturating_sub(1),
            );
            let mut image = LinComb::zero();
            for (key, c) in twisted.iter() {
                let g = match key {
                    FreeKey::A => free2.a,
                    FreeKey::B => free2.b,
                    FreeKey::E(i, j) => free2
                        .c(*i, *j)
                        .expect("twisted letter within truncation"),
                };
                image.add_term(g, c.clone());
            }
            env.from_primitive(&image)
        }
    };
    let exp_second = env.exp(&second).expect("primitive");

    let g = env.mul(&env.mul(&exp_half_a, &exp_second), &exp_half_a);
    let z = env
        .log(&g)
        .expect("product of group-likes is group-like; its log is primitive");
    let series = series_from_primitive(&free2, &z.primitive_part());
    let kind = match product {
        BchProduct::Bruck => TableKind::Alpha,
        BchProduct::Dot => TableKind::Beta,
    };
    let table = table_from_series(kind, EngineId::Hopf, n, &series);
    info!(
        "hopf engine ({product:?}) at degree {n}: {} cells in {:.2?}",
        table.len(),
        start.elapsed()
    );
    BchOutcome { table, series }
}

/// The direct commutative-product engine: expands `exp(a) . exp(b)` with the
/// full twist machinery (no use of the Bruck reduction) and takes the
/// logarithm degree by degree. Each residual must be primitive.
pub fn bch_dot_direct(n: u32) -> CoeffTable {
    let start = Instant::now();
    let (ctx, free2) = free2_context(n);
    let env = ctx.env();

    let exp_letter = |g: u16| {
        let mut e = UtElement::zero(n);
        for k in 0..=n {
            e.add_term(env.mono(vec![g; k as usize]), Rational::inv_factorial(k));
        }
        e
    };
    let g = ctx.dot_mul(&exp_letter(free2.a), &exp_letter(free2.b));

    let mut series: LinComb<u16> = LinComb::zero();
    for d in 1..=n {
        let exponential = ctx
            .reduce(&env.exp(&env.from_primitive(&series)).expect("primitive"))
            .expect("exp of a primitive stays inside U(T)");
        let residual = g.sub(&exponential).degree_part(d);
        assert!(
            residual.is_primitive(),
            "degree-{d} residual of the direct dot logarithm is not primitive: {residual:?}"
        );
        for (k, c) in residual.primitive_part().iter() {
            series.add_term(*k, c.clone());
        }
    }

    let table = table_from_series(
        TableKind::Beta,
        EngineId::DotDirect,
        n,
        &series_from_primitive(&free2, &series),
    );
    info!(
        "dot-direct engine at degree {n}: {} cells in {:.2?}",
        table.len(),
        start.elapsed()
    );
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bruck_engine_degree_three() {
        let outcome = bch_symbolic(3, BchProduct::Bruck);
        assert_eq!(outcome.table.get(1, 2), Rational::new(1, 3));
        assert_eq!(outcome.table.get(2, 1), Rational::new(1, 6));
        assert!(outcome.series.coeff(&FreeKey::A).is_one());
        assert!(outcome.series.coeff(&FreeKey::B).is_one());
    }

    #[test]
    fn dot_engine_degree_three() {
        let outcome = bch_symbolic(3, BchProduct::Dot);
        assert_eq!(outcome.table.get(1, 2), Rational::new(1, 3));
        assert_eq!(outcome.table.get(2, 1), Rational::new(-1, 3));
    }

    #[test]
    fn dot_direct_matches_shortcut_small() {
        let n = 5;
        let direct = bch_dot_direct(n);
        let shortcut = bch_symbolic(n, BchProduct::Dot).table;
        for p in 1..n {
            for q in 1..=(n - p) {
                assert_eq!(direct.get(p, q), shortcut.get(p, q), "cell ({p},{q})");
            }
        }
    }

    #[test]
    fn dot_direct_low_degrees() {
        let table = bch_dot_direct(3);
        // degree-1 part is a + b (not in the table); degree 2 vanishes
        assert_eq!(table.get(1, 1), Rational::zero());
        assert_eq!(table.get(1, 2), Rational::new(1, 3));
        assert_eq!(table.get(2, 1), Rational::new(-1, 3));
    }

    #[test]
    fn hopf_beta_matches_genfun_medium() {
        let n = 7;
        let hopf = bch_symbolic(n, BchProduct::Dot).table;
        let genfun = super::super::beta_genfun(n);
        for p in 1..n {
            for q in 1..=(n - p) {
                assert_eq!(hopf.get(p, q), genfun.get(p, q), "cell ({p},{q})");
            }
        }
    }
}
