//! Truncated universal enveloping algebras with PBW straightening.
//!
//! [`EnvAlgebra`] fixes a graded [`LieStructure`] and a truncation degree N.
//! Elements are sparse combinations of PBW monomials (sorted letter
//! sequences); the associative product concatenates and straightens adjacent
//! out-of-order letters through `x*y = y*x + [x,y]`, dropping everything of
//! degree > N eagerly. The coalgebra structure is the standard one with
//! primitive generators: the coproduct of a monomial is the sum of its
//! multiset splits with multinomial multiplicities, the antipode reverses and
//! negates.
//!
//! Invariants:
//! - monomial letters are sorted by the generator order of the Lie structure
//! - every stored monomial has degree <= N and a nonzero coefficient
//! - all operations preserve both

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::lie::LieStructure;
use crate::linear::LinComb;
use crate::rational::{factorial, Rational};

#[derive(Debug, thiserror::Error)]
pub enum EnvError {
    #[error("exp requires a primitive argument (length-1 monomials only)")]
    NotPrimitive,
    #[error("log requires counit 1")]
    CounitNotOne,
    #[error("log output is not primitive; argument is not group-like at this truncation")]
    GroupLikeViolation,
}

/// A PBW basis monomial: a sorted sequence of generator indices.
/// Ordered by (degree, length, lexicographic letters).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PbwMonomial {
    degree: u32,
    letters: Vec<u16>,
}

impl PbwMonomial {
    pub fn unit() -> Self {
        PbwMonomial {
            degree: 0,
            letters: Vec::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u16] {
        &self.letters
    }
}

impl Ord for PbwMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree, self.letters.len(), &self.letters).cmp(&(
            other.degree,
            other.letters.len(),
            &other.letters,
        ))
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        write!(f, "m[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// An element of the truncated enveloping algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct EnvElement {
    trunc: u32,
    terms: BTreeMap<PbwMonomial, Rational>,
}

impl EnvElement {
    pub fn zero(trunc: u32) -> Self {
        EnvElement {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(trunc: u32) -> Self {
        let mut e = Self::zero(trunc);
        e.add_term(PbwMonomial::unit(), Rational::one());
        e
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PbwMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the empty monomial.
    pub fn counit(&self) -> Rational {
        self.coeff(&PbwMonomial::unit())
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: Rational) {
        if c.is_zero() || m.degree > self.trunc {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        assert_eq!(self.trunc, other.trunc, "truncation mismatch");
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), c * v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.trunc);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), c * v);
        }
        out
    }

    /// True when every monomial has length 1.
    pub fn is_primitive(&self) -> bool {
        self.terms.keys().all(|m| m.len() == 1)
    }

    /// Coefficients of the length-1 monomials, as a Lie-algebra element.
    pub fn primitive_part(&self) -> LinComb<u16> {
        let mut out = LinComb::zero();
        for (m, c) in &self.terms {
            if m.len() == 1 {
                out.add_term(m.letters[0], c.clone());
            }
        }
        out
    }

    /// The part of the element in a single total degree.
    pub fn degree_part(&self, degree: u32) -> Self {
        let mut out = Self::zero(self.trunc);
        for (m, c) in &self.terms {
            if m.degree == degree {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Largest key, under (degree, length, lex).
    pub fn leading(&self) -> Option<(&PbwMonomial, &Rational)> {
        self.terms.iter().next_back()
    }
}

impl fmt::Debug for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}){m:?}")?;
        }
        Ok(())
    }
}

/// A sum of tensor pairs, used for coproduct computations and identity checks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EnvTensor {
    trunc: u32,
    terms: BTreeMap<(PbwMonomial, PbwMonomial), Rational>,
}

impl EnvTensor {
    pub fn zero(trunc: u32) -> Self {
        EnvTensor {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, left: PbwMonomial, right: PbwMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(PbwMonomial, PbwMonomial), &Rational)> {
        self.terms.iter()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let entry = out.terms.entry(k.clone()).or_insert_with(Rational::zero);
            *entry -= v;
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }
}

type InsertResult = Arc<Vec<(PbwMonomial, Rational)>>;

/// The truncated enveloping algebra of a graded Lie structure.
pub struct EnvAlgebra {
    lie: Arc<LieStructure>,
    trunc: u32,
    insert_cache: Mutex<HashMap<(PbwMonomial, u16), InsertResult>>,
}

impl EnvAlgebra {
    /// The Lie structure must be graded: straightening relies on degree
    /// additivity for eager truncation to be exact.
    pub fn new(lie: Arc<LieStructure>, trunc: u32) -> Self {
        assert!(
            lie.is_graded(),
            "enveloping algebra requires a graded Lie structure"
        );
        EnvAlgebra {
            lie,
            trunc,
            insert_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn lie(&self) -> &LieStructure {
        &self.lie
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn zero(&self) -> EnvElement {
        EnvElement::zero(self.trunc)
    }

    pub fn one(&self) -> EnvElement {
        EnvElement::one(self.trunc)
    }

    /// The generator with index `g` as an element.
    pub fn gen_elem(&self, g: u16) -> EnvElement {
        let mut e = self.zero();
        e.add_term(self.mono(vec![g]), Rational::one());
        e
    }

    /// Build a monomial from letters (sorted here if necessary).
    pub fn mono(&self, mut letters: Vec<u16>) -> PbwMonomial {
        letters.sort_unstable();
        let degree = letters.iter().map(|&l| self.lie.degree(l)).sum();
        PbwMonomial { degree, letters }
    }

    /// Lift a Lie-algebra element to length-1 monomials.
    pub fn from_primitive(&self, x: &LinComb<u16>) -> EnvElement {
        let mut e = self.zero();
        for (g, c) in x.iter() {
            e.add_term(self.mono(vec![*g]), c.clone());
        }
        e
    }

    /// `m * e_g` expanded in the PBW basis, memoized.
    fn insert_letter(&self, m: &PbwMonomial, g: u16) -> InsertResult {
        let new_degree = m.degree + self.lie.degree(g);
        if new_degree > self.trunc {
            return Arc::new(Vec::new());
        }
        // fast path: already sorted
        if m.letters.last().is_none_or(|&last| last <= g) {
            let mut letters = m.letters.clone();
            letters.push(g);
            return Arc::new(vec![(
                PbwMonomial {
                    degree: new_degree,
                    letters,
                },
                Rational::one(),
            )]);
        }
        let key = (m.clone(), g);
        if let Some(hit) = self.insert_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }

        let h = *m.letters.last().unwrap();
        let m1 = PbwMonomial {
            degree: m.degree - self.lie.degree(h),
            letters: m.letters[..m.letters.len() - 1].to_vec(),
        };
        let mut acc: BTreeMap<PbwMonomial, Rational> = BTreeMap::new();
        let mut push = |mono: PbwMonomial, c: Rational| {
            if c.is_zero() {
                return;
            }
            let entry = acc.entry(mono).or_insert_with(Rational::zero);
            *entry += c;
        };
        // m*g = (m1*g)*h + m1*[h,g]
        for (mu, c) in self.insert_letter(&m1, g).iter() {
            for (nu, d) in self.insert_letter(mu, h).iter() {
                push(nu.clone(), c * d);
            }
        }
        for (e, c) in self.lie.bracket_basis(h, g).iter() {
            // deg e > deg of every letter of m1, so appending keeps it sorted
            if m1.degree + self.lie.degree(*e) <= self.trunc {
                let mut letters = m1.letters.clone();
                letters.push(*e);
                push(
                    PbwMonomial {
                        degree: m1.degree + self.lie.degree(*e),
                        letters,
                    },
                    c.clone(),
                );
            }
        }
        let result: InsertResult =
            Arc::new(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        self.insert_cache
            .lock()
            .unwrap()
            .insert(key, result.clone());
        result
    }

    /// Associative product, eagerly truncated.
    pub fn mul(&self, x: &EnvElement, y: &EnvElement) -> EnvElement {
        assert_eq!(x.trunc, self.trunc, "operand truncation mismatch");
        assert_eq!(y.trunc, self.trunc, "operand truncation mismatch");
        let mut out = self.zero();
        for (m2, c2) in &y.terms {
            // x * m2 for every term of x that can still fit
            let mut cur: Vec<(PbwMonomial, Rational)> = x
                .terms
                .iter()
                .filter(|(m1, _)| m1.degree + m2.degree <= self.trunc)
                .map(|(m1, c1)| (m1.clone(), c1 * c2))
                .collect();
            for &g in &m2.letters {
                let mut next: BTreeMap<PbwMonomial, Rational> = BTreeMap::new();
                for (m, c) in cur {
                    for (m2, d) in self.insert_letter(&m, g).iter() {
                        let entry = next.entry(m2.clone()).or_insert_with(Rational::zero);
                        *entry += &c * d;
                    }
                }
                cur = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            }
            for (m, c) in cur {
                out.add_term(m, c);
            }
        }
        out
    }

    /// Antipode: reverse the letters, straighten, negate by length parity.
    pub fn antipode(&self, x: &EnvElement) -> EnvElement {
        let mut out = self.zero();
        for (m, c) in &x.terms {
            let sign = if m.len() % 2 == 0 {
                c.clone()
            } else {
                -c.clone()
            };
            let mut cur: Vec<(PbwMonomial, Rational)> = vec![(PbwMonomial::unit(), sign)];
            for &g in m.letters.iter().rev() {
                let mut next: BTreeMap<PbwMonomial, Rational> = BTreeMap::new();
                for (mu, cc) in cur {
                    for (nu, d) in self.insert_letter(&mu, g).iter() {
                        let entry = next.entry(nu.clone()).or_insert_with(Rational::zero);
                        *entry += &cc * d;
                    }
                }
                cur = next.into_iter().collect();
            }
            for (mu, cc) in cur {
                out.add_term(mu, cc);
            }
        }
        out
    }

    /// All ways to split the multiset of letters of `m` into `k` ordered
    /// parts, with multinomial multiplicities.
    pub fn splits(&self, m: &PbwMonomial, k: usize) -> Vec<(Vec<PbwMonomial>, Rational)> {
        assert!(k >= 1);
        // run-length encode the sorted letters
        let mut runs: Vec<(u16, u32)> = Vec::new();
        for &l in &m.letters {
            match runs.last_mut() {
                Some((letter, count)) if *letter == l => *count += 1,
                _ => runs.push((l, 1)),
            }
        }
        let mut out: Vec<(Vec<Vec<u16>>, Rational)> =
            vec![(vec![Vec::new(); k], Rational::one())];
        for (letter, count) in runs {
            let distributions = compositions(count, k);
            let mut next = Vec::with_capacity(out.len() * distributions.len());
            for (parts, coeff) in &out {
                for dist in &distributions {
                    let mut parts = parts.clone();
                    let mut c = coeff.clone();
                    c *= &multinomial(count, dist);
                    for (part, &take) in parts.iter_mut().zip(dist) {
                        for _ in 0..take {
                            part.push(letter);
                        }
                    }
                    next.push((parts, c));
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(parts, c)| {
                let monos = parts
                    .into_iter()
                    .map(|letters| PbwMonomial {
                        degree: letters.iter().map(|&l| self.lie.degree(l)).sum(),
                        letters,
                    })
                    .collect();
                (monos, c)
            })
            .collect()
    }

    /// The coproduct as a sum of tensor pairs.
    pub fn coproduct(&self, x: &EnvElement) -> EnvTensor {
        let mut out = EnvTensor::zero(self.trunc);
        for (m, c) in &x.terms {
            for (parts, mult) in self.splits(m, 2) {
                let [left, right]: [PbwMonomial; 2] =
                    parts.try_into().expect("two parts requested");
                out.add_term(left, right, c * &mult);
            }
        }
        out
    }

    /// `x (x) y` as a tensor.
    pub fn tensor_of(&self, x: &EnvElement, y: &EnvElement) -> EnvTensor {
        let mut out = EnvTensor::zero(self.trunc);
        for (mx, cx) in &x.terms {
            for (my, cy) in &y.terms {
                out.add_term(mx.clone(), my.clone(), cx * cy);
            }
        }
        out
    }

    /// Componentwise product of tensors: (a (x) b)(c (x) d) = ac (x) bd.
    pub fn tensor_mul(&self, lhs: &EnvTensor, rhs: &EnvTensor) -> EnvTensor {
        let mut out = EnvTensor::zero(self.trunc);
        for ((l1, r1), c1) in lhs.iter() {
            for ((l2, r2), c2) in rhs.iter() {
                let mut left = self.zero();
                left.add_term(l1.clone(), Rational::one());
                let mut right = self.zero();
                right.add_term(r1.clone(), Rational::one());
                let mut l2e = self.zero();
                l2e.add_term(l2.clone(), Rational::one());
                let mut r2e = self.zero();
                r2e.add_term(r2.clone(), Rational::one());
                let lp = self.mul(&left, &l2e);
                let rp = self.mul(&right, &r2e);
                let c = c1 * c2;
                for (ml, cl) in lp.iter() {
                    for (mr, cr) in rp.iter() {
                        out.add_term(ml.clone(), mr.clone(), &(&c * cl) * cr);
                    }
                }
            }
        }
        out
    }

    /// exp of a primitive element: `sum p^k / k!` truncated.
    pub fn exp(&self, p: &EnvElement) -> Result<EnvElement, EnvError> {
        if !p.is_primitive() {
            return Err(EnvError::NotPrimitive);
        }
        let mut acc = self.one();
        let mut power = self.one();
        for k in 1..=self.trunc {
            power = self.mul(&power, p);
            if power.is_zero() {
                break;
            }
            acc.add_scaled(&power, &Rational::inv_factorial(k));
        }
        Ok(acc)
    }

    /// log of a group-like element: `sum (-1)^(k+1) (g-1)^k / k`. The result
    /// must be primitive at truncation, else the argument was not group-like.
    pub fn log(&self, g: &EnvElement) -> Result<EnvElement, EnvError> {
        if g.counit() != Rational::one() {
            return Err(EnvError::CounitNotOne);
        }
        let h = g.sub(&self.one());
        let mut acc = self.zero();
        let mut power = self.one();
        for k in 1..=self.trunc {
            power = self.mul(&power, &h);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc.add_scaled(&power, &Rational::new(sign, k as i64));
        }
        if !acc.is_primitive() {
            return Err(EnvError::GroupLikeViolation);
        }
        Ok(acc)
    }

    /// Group-like test at truncation: compare the coproduct of `g` with
    /// `g (x) g` on all pairs within the truncation.
    pub fn is_group_like(&self, g: &EnvElement) -> bool {
        if g.counit() != Rational::one() {
            return false;
        }
        let delta = self.coproduct(g);
        let square = self.tensor_of(g, g);
        // Δ(g) only carries pairs with deg l + deg r <= N; restrict g⊗g the same way.
        let mut restricted = EnvTensor::zero(self.trunc);
        for ((l, r), c) in square.iter() {
            if l.degree() + r.degree() <= self.trunc {
                restricted.add_term(l.clone(), r.clone(), c.clone());
            }
        }
        delta.sub(&restricted).is_zero()
    }

    /// Graded dimension of the PBW basis at each degree 0..=N, computed
    /// combinatorially from the generator degrees (the symmetric-algebra
    /// Hilbert series).
    pub fn pbw_dims(&self) -> Vec<u64> {
        let n = self.trunc as usize;
        let mut dims = vec![0u64; n + 1];
        dims[0] = 1;
        for g in 0..self.lie.dim() as u16 {
            let d = self.lie.degree(g) as usize;
            // multiply by 1/(1 - x^d)
            for k in d..=n {
                dims[k] += dims[k - d];
            }
        }
        dims
    }
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for rest in compositions(total - first, parts - 1) {
            let mut v = Vec::with_capacity(parts);
            v.push(first);
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

fn multinomial(total: u32, parts: &[u32]) -> Rational {
    debug_assert_eq!(parts.iter().sum::<u32>(), total);
    let mut c = factorial(total);
    for &p in parts {
        c = c / factorial(p);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Free2Lie;

    fn algebra(n: u32) -> (EnvAlgebra, Free2Lie) {
        let ctx = Free2Lie::new(n);
        let lie = ctx.lie.clone();
        (EnvAlgebra::new(lie, n), ctx)
    }

    #[test]
    fn straightening_examples() {
        let (env, ctx) = algebra(6);
        let a = env.gen_elem(0);
        let b = env.gen_elem(1);
        let c00 = ctx.c(0, 0).unwrap();

        // b*a = monomial(a,b) - 2c00
        let ba = env.mul(&b, &a);
        let mut expected = env.zero();
        expected.add_term(env.mono(vec![0, 1]), Rational::one());
        expected.add_term(env.mono(vec![c00]), Rational::from_int(-2));
        assert_eq!(ba, expected);

        // a*a is already sorted
        let aa = env.mul(&a, &a);
        assert_eq!(aa.coeff(&env.mono(vec![0, 0])), Rational::one());
        assert_eq!(aa.num_terms(), 1);

        // associativity spot check: (a*b)*c00 = a*(b*c00)
        let c = env.gen_elem(c00);
        let left = env.mul(&env.mul(&a, &b), &c);
        let right = env.mul(&a, &env.mul(&b, &c));
        assert_eq!(left, right);
    }

    #[test]
    fn coproduct_examples() {
        let (env, _) = algebra(4);
        let ab = {
            let mut e = env.zero();
            e.add_term(env.mono(vec![0, 1]), Rational::one());
            e
        };
        let delta = env.coproduct(&ab);
        // ab⊗1 + a⊗b + b⊗a + 1⊗ab
        let mut expected = EnvTensor::zero(4);
        let unit = PbwMonomial::unit();
        let ma = env.mono(vec![0]);
        let mb = env.mono(vec![1]);
        let mab = env.mono(vec![0, 1]);
        expected.add_term(mab.clone(), unit.clone(), Rational::one());
        expected.add_term(ma.clone(), mb.clone(), Rational::one());
        expected.add_term(mb, ma, Rational::one());
        expected.add_term(unit.clone(), mab, Rational::one());
        assert_eq!(delta, expected);

        // Δ(aa) = aa⊗1 + 2a⊗a + 1⊗aa
        let aa = {
            let mut e = env.zero();
            e.add_term(env.mono(vec![0, 0]), Rational::one());
            e
        };
        let delta = env.coproduct(&aa);
        let maa = env.mono(vec![0, 0]);
        let ma = env.mono(vec![0]);
        let mut expected = EnvTensor::zero(4);
        expected.add_term(maa.clone(), unit.clone(), Rational::one());
        expected.add_term(ma.clone(), ma.clone(), Rational::from_int(2));
        expected.add_term(unit.clone(), maa, Rational::one());
        assert_eq!(delta, expected);

        // Δ(1) = 1⊗1
        let delta = env.coproduct(&env.one());
        let mut expected = EnvTensor::zero(4);
        expected.add_term(unit.clone(), unit, Rational::one());
        assert_eq!(delta, expected);
    }

    #[test]
    fn antipode_examples() {
        let (env, ctx) = algebra(6);
        let a = env.gen_elem(0);
        assert_eq!(env.antipode(&a), a.scale(&Rational::from_int(-1)));

        // S(ab) = b*a straightened = ab - 2c00
        let mut ab = env.zero();
        ab.add_term(env.mono(vec![0, 1]), Rational::one());
        let s = env.antipode(&ab);
        let mut expected = env.zero();
        expected.add_term(env.mono(vec![0, 1]), Rational::one());
        expected.add_term(env.mono(vec![ctx.c(0, 0).unwrap()]), Rational::from_int(-2));
        assert_eq!(s, expected);

        assert_eq!(env.antipode(&env.one()), env.one());
    }

    #[test]
    fn antipode_is_involutive_and_convolution_inverse() {
        let (env, _) = algebra(5);
        // random-ish element with mixed lengths
        let mut x = env.one();
        x.add_term(env.mono(vec![0]), Rational::new(2, 3));
        x.add_term(env.mono(vec![0, 1]), Rational::new(-1, 2));
        x.add_term(env.mono(vec![1, 1, 1]), Rational::from_int(5));
        assert_eq!(env.antipode(&env.antipode(&x)), x);

        // sum S(x1) * x2 = counit(x) * 1 on every basis monomial
        for letters in [vec![0u16, 1], vec![0, 0], vec![0, 1, 1], vec![2], vec![1, 2]] {
            let m = env.mono(letters);
            let mut acc = env.zero();
            for (parts, c) in env.splits(&m, 2) {
                let mut left = env.zero();
                left.add_term(parts[0].clone(), Rational::one());
                let mut right = env.zero();
                right.add_term(parts[1].clone(), Rational::one());
                acc.add_scaled(&env.mul(&env.antipode(&left), &right), &c);
            }
            let expected = if m.is_empty() { env.one() } else { env.zero() };
            assert_eq!(acc, expected, "antipode law fails on {m:?}");
        }
    }

    #[test]
    fn bialgebra_law_small() {
        let (env, _) = algebra(4);
        let mut x = env.gen_elem(0);
        x.add_term(env.mono(vec![1, 1]), Rational::new(1, 3));
        let mut y = env.gen_elem(1);
        y.add_term(env.mono(vec![0, 1]), Rational::from_int(2));
        let lhs = env.coproduct(&env.mul(&x, &y));
        let rhs = env.tensor_mul(&env.coproduct(&x), &env.coproduct(&y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_log_roundtrip() {
        let (env, ctx) = algebra(4);
        let a = env.gen_elem(0);

        let e = env.exp(&a).unwrap();
        assert_eq!(e.coeff(&PbwMonomial::unit()), Rational::one());
        assert_eq!(e.coeff(&env.mono(vec![0, 0])), Rational::new(1, 2));
        assert!(env.is_group_like(&e));
        assert_eq!(env.log(&e).unwrap(), a);

        assert_eq!(env.exp(&env.zero()).unwrap(), env.one());
        assert_eq!(env.log(&env.one()).unwrap(), env.zero());

        // exp requires primitivity, log requires counit 1
        assert!(matches!(env.exp(&e), Err(EnvError::NotPrimitive)));
        assert!(matches!(env.log(&a), Err(EnvError::CounitNotOne)));
        // a non-group-like counit-1 element has a non-primitive log
        let mut g = env.one();
        g.add_term(env.mono(vec![0, 0]), Rational::one());
        assert!(matches!(env.log(&g), Err(EnvError::GroupLikeViolation)));
        let _ = ctx;
    }

    #[test]
    fn strang_splitting_log_coefficients() {
        // log(exp(a/2) exp(b) exp(a/2)) at N=3: coefficient 1/6 on c10, 1/3 on c01
        let (env, ctx) = algebra(3);
        let half_a = env.gen_elem(0).scale(&Rational::new(1, 2));
        let b = env.gen_elem(1);
        let ea = env.exp(&half_a).unwrap();
        let eb = env.exp(&b).unwrap();
        let g = env.mul(&env.mul(&ea, &eb), &ea);
        let z = env.log(&g).unwrap();
        let prim = z.primitive_part();
        assert_eq!(prim.coeff(&0), Rational::one());
        assert_eq!(prim.coeff(&1), Rational::one());
        assert_eq!(prim.coeff(&ctx.c(1, 0).unwrap()), Rational::new(1, 6));
        assert_eq!(prim.coeff(&ctx.c(0, 1).unwrap()), Rational::new(1, 3));
        assert_eq!(prim.coeff(&ctx.c(0, 0).unwrap()), Rational::zero());
    }

    #[test]
    fn group_like_exponentials() {
        let (env, _) = algebra(4);
        let mut p = env.gen_elem(0);
        p.add_scaled(&env.gen_elem(1), &Rational::new(-2, 5));
        let g = env.exp(&p).unwrap();
        assert!(env.is_group_like(&g));
        let delta = env.coproduct(&g);
        let mut gg = EnvTensor::zero(4);
        for ((l, r), c) in env.tensor_of(&g, &g).iter() {
            if l.degree() + r.degree() <= 4 {
                gg.add_term(l.clone(), r.clone(), c.clone());
            }
        }
        assert_eq!(delta, gg);
    }

    #[test]
    fn pbw_dimensions_match_monomial_enumeration() {
        let (env, _) = algebra(6);
        let dims = env.pbw_dims();
        // independently enumerate sorted monomials per degree
        let mut counts = vec![0u64; 7];
        let gens: Vec<u16> = (0..env.lie().dim() as u16).collect();
        fn enumerate(
            env: &EnvAlgebra,
            gens: &[u16],
            start: usize,
            degree_left: u32,
            counts: &mut Vec<u64>,
            used: u32,
        ) {
            counts[used as usize] += 1;
            for (pos, &g) in gens.iter().enumerate().skip(start) {
                let d = env.lie().degree(g);
                if d <= degree_left {
                    enumerate(env, gens, pos, degree_left - d, counts, used + d);
                }
            }
        }
        enumerate(&env, &gens, 0, 6, &mut counts, 0);
        assert_eq!(dims, counts);
    }
}
