//! Sparse linear combinations over an ordered basis, plus exact row reduction.
//!
//! `LinComb` is the workhorse element type for triple systems, word algebras
//! and primitive parts. Invariant: no stored coefficient is zero.

use std::collections::BTreeMap;
use std::fmt;

use crate::rational::Rational;

/// A finite linear combination of basis keys with nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A single basis key with coefficient 1.
    pub fn basis(key: K) -> Self {
        Self::term(key, Rational::one())
    }

    pub fn term(key: K, coeff: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(key, coeff);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `key` (zero when absent).
    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Largest key with nonzero coefficient.
    pub fn leading(&self) -> Option<(&K, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), c * v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), c * v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from_int(-1))
    }

    /// Apply `f` to every key, merging coefficients of collisions.
    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> LinComb<L> {
        let mut out = LinComb::zero();
        for (k, v) in &self.terms {
            out.add_term(f(k), v.clone());
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<K, Rational> {
        self.terms
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for LinComb<K> {
    fn from_iter<T: IntoIterator<Item = (K, Rational)>>(iter: T) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{k:?}")?;
        }
        Ok(())
    }
}

/// Incremental exact row reduction: maintains an echelon basis of the span of
/// the inserted vectors, pivoting on the largest key.
pub struct RowSpace<K: Ord + Clone> {
    /// Echelon rows indexed by pivot key; each row has coefficient 1 at its pivot.
    rows: BTreeMap<K, LinComb<K>>,
}

impl<K: Ord + Clone> Default for RowSpace<K> {
    fn default() -> Self {
        RowSpace {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> RowSpace<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after elimination against the current rows.
    pub fn reduce(&self, v: &LinComb<K>) -> LinComb<K> {
        let mut v = v.clone();
        loop {
            let Some((pivot, coeff)) = v.leading().map(|(k, c)| (k.clone(), c.clone())) else {
                return v;
            };
            match self.rows.get(&pivot) {
                Some(row) => v.add_scaled(row, &-coeff),
                None => return v,
            }
        }
    }

    /// Insert `v` into the span. Returns true if the rank grew.
    pub fn insert(&mut self, v: &LinComb<K>) -> bool {
        let residual = self.reduce(v);
        match residual.leading().map(|(k, c)| (k.clone(), c.clone())) {
            None => false,
            Some((pivot, coeff)) => {
                let row = residual.scale(&coeff.recip());
                self.rows.insert(pivot, row);
                true
            }
        }
    }

    pub fn contains(&self, v: &LinComb<K>) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Row reduction that remembers how each echelon row was formed, so members
/// of the span can be expressed in terms of the inserted generators.
pub struct SolvableSpan<K: Ord + Clone> {
    /// pivot -> (echelon row with pivot coefficient 1, row as combination of generators)
    rows: BTreeMap<K, (LinComb<K>, LinComb<usize>)>,
    generators: usize,
}

impl<K: Ord + Clone> Default for SolvableSpan<K> {
    fn default() -> Self {
        SolvableSpan {
            rows: BTreeMap::new(),
            generators: 0,
        }
    }
}

impl<K: Ord + Clone> SolvableSpan<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tracking(&self, v: &LinComb<K>) -> (LinComb<K>, LinComb<usize>) {
        let mut v = v.clone();
        let mut coords = LinComb::zero();
        loop {
            let Some((pivot, coeff)) = v.leading().map(|(k, c)| (k.clone(), c.clone())) else {
                return (v, coords);
            };
            match self.rows.get(&pivot) {
                Some((row, row_coords)) => {
                    v.add_scaled(row, &-coeff.clone());
                    coords.add_scaled(row_coords, &coeff);
                }
                None => return (v, coords),
            }
        }
    }

    /// Insert `v` as the next generator. Returns true if the rank grew.
    pub fn insert(&mut self, v: &LinComb<K>) -> bool {
        let index = self.generators;
        self.generators += 1;
        let (residual, used) = self.reduce_tracking(v);
        match residual.leading().map(|(k, c)| (k.clone(), c.clone())) {
            None => false,
            Some((pivot, coeff)) => {
                // residual = v - used * generators, so the new echelon row is
                // (v - used)/coeff in generator coordinates.
                let inv = coeff.recip();
                let row = residual.scale(&inv);
                let mut coords = LinComb::term(index, Rational::one());
                coords.add_scaled(&used, &-Rational::one());
                self.rows.insert(pivot, (row, coords.scale(&inv)));
                true
            }
        }
    }

    /// Coordinates of `v` in terms of the inserted generators, or None if `v`
    /// lies outside the span.
    pub fn express(&self, v: &LinComb<K>) -> Option<LinComb<usize>> {
        let (residual, coords) = self.reduce_tracking(v);
        residual.is_zero().then_some(coords)
    }
}
