//! Series-based engines: the generating function and the recursion.

use log::debug;

use crate::rational::{binomial, factorial, Rational};
use crate::series::BiSeries;

use super::{CoeffTable, EngineId, TableKind};

/// Taylor coefficients of `x / tanh(x) = x (e^{2x} + 1) / (e^{2x} - 1)` up to
/// index `k_max`, by exact series division after factoring the `x` out of
/// the denominator. The odd ones vanish.
pub fn xi_series(k_max: u32) -> Vec<Rational> {
    let n = k_max + 1;
    let two_s = BiSeries::var_s(n).scale(&Rational::from_int(2));
    let e2s = two_s.exp().expect("2s has no constant term");
    let num = (&e2s + &BiSeries::one(n)).truncate_to(k_max);
    let den = (&e2s - &BiSeries::one(n))
        .div_by_monomial(1, 0)
        .expect("e^{2x} - 1 is divisible by x");
    let quotient = &num * &den.inverse().expect("unit constant term");
    (0..=k_max)
        .map(|k| quotient.coeff(k, 0).expect("within truncation"))
        .collect()
}

/// Fill the alpha table (left Bruck BCH coefficients) from the recursion
///
/// `p a_{p,q} = xi_{p+q-1} C(p+q-2, p-1)
///             - sum xi_{p+q-i-j} a_{i,j} C(p+q-i-j-1, p-i-1)`
///
/// over `1 <= i <= p-1`, `1 <= j <= q`, `i+j` odd, filled in increasing
/// `(p+q, p)` order. Cells with `p+q` even are identically zero.
pub fn alpha_recursion(max_total_degree: u32) -> CoeffTable {
    let xi = xi_series(max_total_degree.saturating_sub(1));
    let mut table = CoeffTable::new(TableKind::Alpha, EngineId::Recursion, max_total_degree);
    let mut total = 3;
    while total <= max_total_degree {
        for p in 1..total {
            let q = total - p;
            let mut acc = &xi[(total - 1) as usize] * &binomial(total - 2, p - 1);
            for i in 1..p {
                for j in 1..=q {
                    if (i + j) % 2 == 0 {
                        continue;
                    }
                    let weight = &xi[(total - i - j) as usize]
                        * &binomial(total - i - j - 1, p - i - 1);
                    acc -= &(&weight * &table.get(i, j));
                }
            }
            table.set(p, q, acc / Rational::from_int(p as i64));
        }
        total += 2;
    }
    debug!(
        "alpha recursion filled {} cells up to degree {max_total_degree}",
        table.len()
    );
    table
}

/// Convert an alpha table to the beta table:
/// `b_{p,q} = [q=1] (-1/p!) + sum_{i=1..p} a_{i,q} / (p-i)!` for `p+q` odd.
pub fn beta_from_alpha(alpha: &CoeffTable) -> CoeffTable {
    assert_eq!(alpha.kind, TableKind::Alpha);
    let n = alpha.max_total_degree;
    let mut table = CoeffTable::new(TableKind::Beta, EngineId::Recursion, n);
    for p in 1..n {
        for q in 1..=(n - p) {
            if (p + q) % 2 == 0 {
                continue;
            }
            let mut acc = if q == 1 {
                -Rational::inv_factorial(p)
            } else {
                Rational::zero()
            };
            for i in 1..=p {
                if (i + q) % 2 == 1 {
                    acc += &alpha.get(i, q) / &factorial(p - i);
                }
            }
            table.set(p, q, acc);
        }
    }
    table
}

/// Extract the beta table from the Taylor expansion of
/// `(e^{2s} - e^{2t})(s + t) / (2 (e^{2(s+t)} - 1))`.
pub fn beta_genfun(max_total_degree: u32) -> CoeffTable {
    // one guard degree: the division by (s+t) costs one order
    let n = max_total_degree + 1;
    let two = Rational::from_int(2);
    let e2s = BiSeries::var_s(n).scale(&two).exp().expect("no constant");
    let e2t = BiSeries::var_t(n).scale(&two).exp().expect("no constant");
    let s_plus_t = &BiSeries::var_s(n) + &BiSeries::var_t(n);
    let num = &(&e2s - &e2t) * &s_plus_t;
    let den = (&s_plus_t.scale(&two).exp().expect("no constant") - &BiSeries::one(n)).scale(&two);
    let g = num
        .div_exact(&den)
        .expect("the generating function denominator is (s+t) times a unit");
    assert!(g.max_total_degree() >= max_total_degree);
    let mut table = CoeffTable::new(TableKind::Beta, EngineId::Genfun, max_total_degree);
    for p in 1..max_total_degree {
        for q in 1..=(max_total_degree - p) {
            table.set(p, q, g.coeff(p, q).expect("within truncation"));
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_values() {
        let xi = xi_series(6);
        assert_eq!(xi[0], Rational::one());
        assert_eq!(xi[1], Rational::zero());
        assert_eq!(xi[2], Rational::new(1, 3));
        assert_eq!(xi[3], Rational::zero());
        assert_eq!(xi[4], Rational::new(-1, 45));
        assert_eq!(xi[5], Rational::zero());
        assert_eq!(xi[6], Rational::new(2, 945));
    }

    #[test]
    fn alpha_base_cases() {
        let alpha = alpha_recursion(5);
        assert_eq!(alpha.get(1, 2), Rational::new(1, 3));
        assert_eq!(alpha.get(2, 1), Rational::new(1, 6));
        assert_eq!(alpha.get(1, 1), Rational::zero());
        assert_eq!(alpha.get(4, 1), Rational::new(-7, 360));
    }

    #[test]
    fn beta_conversion_matches_reference_cells() {
        let beta = beta_from_alpha(&alpha_recursion(7));
        assert_eq!(beta.get(2, 1), Rational::new(-1, 3));
        assert_eq!(beta.get(1, 2), Rational::new(1, 3));
        assert_eq!(beta.get(4, 1), Rational::new(1, 45));
        assert_eq!(beta.get(3, 1), Rational::zero());
        assert_eq!(beta.get(2, 3), Rational::new(-4, 45));
        assert_eq!(beta.get(3, 2), Rational::new(4, 45));
    }

    #[test]
    fn genfun_matches_reference_cells() {
        let beta = beta_genfun(8);
        assert_eq!(beta.get(1, 2), Rational::new(1, 3));
        assert_eq!(beta.get(3, 2), Rational::new(4, 45));
        assert_eq!(beta.get(1, 1), Rational::zero());
    }

    #[test]
    fn genfun_equals_recursion_small() {
        let genfun = beta_genfun(9);
        let recursion = beta_from_alpha(&alpha_recursion(9));
        for p in 1..9 {
            for q in 1..=(9 - p) {
                assert_eq!(genfun.get(p, q), recursion.get(p, q), "cell ({p},{q})");
            }
        }
    }
}
