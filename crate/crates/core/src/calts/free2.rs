//! The commutative automorphic Lie triple system freely generated by `a`, `b`.
//!
//! Basis: `a`, `b` of degree 1 and `E(i,j)` of degree `i+j+2` for `i+j` odd,
//! where `E(i,j)` stands for the left-normed bracket `[a,b, i...a, j...b]`.
//! The structure constants are closed-form shift rules; the independent
//! rewriting oracle in [`super::amodel`] certifies them.

use std::cmp::Ordering;
use std::fmt;

use crate::linear::LinComb;

/// A basis key of the free 2-generated system.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum FreeKey {
    A,
    B,
    /// `E(i,j) = [a,b, i...a, j...b]`, only defined for `i + j` odd.
    E(u32, u32),
}

impl FreeKey {
    /// Constructor for `E(i,j)`; panics unless `i + j` is odd.
    pub fn e(i: u32, j: u32) -> Self {
        assert!((i + j) % 2 == 1, "E({i},{j}) requires i+j odd");
        FreeKey::E(i, j)
    }

    pub fn degree(&self) -> u32 {
        match self {
            FreeKey::A | FreeKey::B => 1,
            FreeKey::E(i, j) => i + j + 2,
        }
    }

    /// Deg-lex sort key: degree first, then `a < b`, then `E(i,j)` by `i`.
    fn sort_key(&self) -> (u32, u32) {
        match self {
            FreeKey::A => (1, 0),
            FreeKey::B => (1, 1),
            FreeKey::E(i, j) => (i + j + 2, *i),
        }
    }
}

impl Ord for FreeKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for FreeKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FreeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeKey::A => write!(f, "a"),
            FreeKey::B => write!(f, "b"),
            FreeKey::E(i, j) => write!(f, "E({i},{j})"),
        }
    }
}

/// The free 2-generated system, truncated at a maximum basis degree.
/// Products landing above the truncation are dropped; this is the graded
/// quotient, so identities among tuples within the cap are unaffected.
#[derive(Clone, Copy)]
pub struct Free2 {
    max_degree: u32,
}

impl Free2 {
    pub fn new(max_degree: u32) -> Self {
        Free2 { max_degree }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    fn keep(&self, key: FreeKey) -> LinComb<FreeKey> {
        if key.degree() > self.max_degree {
            LinComb::zero()
        } else {
            LinComb::basis(key)
        }
    }
}

/// dim of the degree-n graded piece: 2 for n = 1, 0 for even n, n−1 for odd n >= 3.
pub fn free2_dim(n: u32) -> usize {
    assert!(n >= 1, "degree must be positive");
    if n == 1 {
        2
    } else if n % 2 == 0 {
        0
    } else {
        (n - 1) as usize
    }
}

impl super::TripleSystem for Free2 {
    type Key = FreeKey;

    fn degree(&self, key: &FreeKey) -> u32 {
        key.degree()
    }

    fn basis_up_to(&self, max_degree: u32) -> Vec<FreeKey> {
        let cap = max_degree.min(self.max_degree);
        let mut keys = Vec::new();
        if cap >= 1 {
            keys.push(FreeKey::A);
            keys.push(FreeKey::B);
        }
        let mut d = 3;
        while d <= cap {
            for i in 0..=(d - 2) {
                keys.push(FreeKey::E(i, d - 2 - i));
            }
            d += 2;
        }
        keys.sort();
        keys
    }

    fn triple_basis(&self, p: &FreeKey, q: &FreeKey, r: &FreeKey) -> LinComb<FreeKey> {
        use FreeKey::{A, B, E};
        if p == q {
            return LinComb::zero();
        }
        match (*p, *q, *r) {
            // [a,b,a] = E(1,0), [a,b,b] = E(0,1), [a,b,E] = 0
            (A, B, A) => self.keep(E(1, 0)),
            (A, B, B) => self.keep(E(0, 1)),
            (B, A, A) => self.keep(E(1, 0)).neg(),
            (B, A, B) => self.keep(E(0, 1)).neg(),
            (A, B, E(..)) | (B, A, E(..)) => LinComb::zero(),
            // shift rules [E(i,j),a,a] = E(i+2,j), [E,a,b] = [E,b,a] = E(i+1,j+1),
            // [E,b,b] = E(i,j+2); triples with two E keys vanish
            (E(i, j), A, A) => self.keep(E(i + 2, j)),
            (E(i, j), A, B) | (E(i, j), B, A) => self.keep(E(i + 1, j + 1)),
            (E(i, j), B, B) => self.keep(E(i, j + 2)),
            (A, E(i, j), A) => self.keep(E(i + 2, j)).neg(),
            (A, E(i, j), B) | (B, E(i, j), A) => self.keep(E(i + 1, j + 1)).neg(),
            (B, E(i, j), B) => self.keep(E(i, j + 2)).neg(),
            (E(..), _, E(..)) | (_, E(..), E(..)) | (E(..), E(..), _) => LinComb::zero(),
            // (A,A,_) and (B,B,_) are caught by the p == q test above
            _ => unreachable!("alternating pair handled before the match"),
        }
    }
}
