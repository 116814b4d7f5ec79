//! Word-algebra oracle for the free 2-generated system.
//!
//! The associative algebra on `{a, b}` subject to `aab = aba` and
//! `bba = bab` is operated through the rewriting system
//!
//! ```text
//!     aab -> aba        bba -> bab
//! ```
//!
//! applied leftmost until a normal form (no factor `aab` or `bba`) is
//! reached. With `c := ab - ba` one has `ac = bc = 0` in the quotient, the
//! subspace spanned by `{a, b, c a^i b^j (i+j odd)}` is closed under the
//! double commutator `[x,y,z] = [[x,y],z]`, and the correspondence
//! `a -> a`, `b -> b`, `E(i,j) -> c a^i b^j` matches [`Free2`] exactly.
//! This module is the mandatory brute-force fixture for the closed-form
//! structure constants, not a production path.
//!
//! Words are plain `String`s over the alphabet `{'a', 'b'}`.

use crate::calts::free2::FreeKey;
use crate::calts::{Free2, LtsError, TripleSystem};
use crate::linear::{LinComb, RowSpace};
use crate::rational::Rational;

const REWRITE_RULES: [(&str, &str); 2] = [("aab", "aba"), ("bba", "bab")];

/// Reduce a word to its normal form, rewriting the leftmost redex first.
pub fn normal_form(word: &str) -> String {
    let mut w = word.to_owned();
    loop {
        let redex = REWRITE_RULES
            .iter()
            .filter_map(|(lhs, rhs)| w.find(lhs).map(|pos| (pos, *lhs, *rhs)))
            .min_by_key(|(pos, ..)| *pos);
        match redex {
            Some((pos, lhs, rhs)) => w.replace_range(pos..pos + lhs.len(), rhs),
            None => return w,
        }
    }
}

/// The word algebra with a configurable word-length bound.
#[derive(Clone, Copy)]
pub struct AModel {
    pub max_word_len: usize,
}

impl Default for AModel {
    fn default() -> Self {
        AModel { max_word_len: 64 }
    }
}

impl AModel {
    pub fn mul(
        &self,
        x: &LinComb<String>,
        y: &LinComb<String>,
    ) -> Result<LinComb<String>, LtsError> {
        let mut out = LinComb::zero();
        for (wx, cx) in x.iter() {
            for (wy, cy) in y.iter() {
                let len = wx.len() + wy.len();
                if len > self.max_word_len {
                    return Err(LtsError::WordLengthExceeded {
                        len,
                        max: self.max_word_len,
                    });
                }
                let product = normal_form(&format!("{wx}{wy}"));
                out.add_term(product, cx * cy);
            }
        }
        Ok(out)
    }

    /// Commutator `xy - yx`.
    pub fn bracket(
        &self,
        x: &LinComb<String>,
        y: &LinComb<String>,
    ) -> Result<LinComb<String>, LtsError> {
        Ok(self.mul(x, y)?.sub(&self.mul(y, x)?))
    }

    /// Double commutator `[[x,y],z]`.
    pub fn triple(
        &self,
        x: &LinComb<String>,
        y: &LinComb<String>,
        z: &LinComb<String>,
    ) -> Result<LinComb<String>, LtsError> {
        let xy = self.bracket(x, y)?;
        self.bracket(&xy, z)
    }

    /// Left-normed n-ary bracket with the even-arity-vanishes convention.
    pub fn nary_bracket(&self, args: &[LinComb<String>]) -> Result<LinComb<String>, LtsError> {
        if args.is_empty() || args.len() % 2 == 0 {
            return Ok(LinComb::zero());
        }
        let mut acc = args[0].clone();
        let mut k = 1;
        while k + 1 < args.len() {
            acc = self.triple(&acc, &args[k], &args[k + 1])?;
            k += 2;
        }
        Ok(acc)
    }

    /// Image of a free-system basis key: `a`, `b`, or `c a^i b^j` with
    /// `c = ab - ba`, in normal form.
    pub fn embed_key(&self, key: &FreeKey) -> LinComb<String> {
        match key {
            FreeKey::A => LinComb::basis("a".to_owned()),
            FreeKey::B => LinComb::basis("b".to_owned()),
            FreeKey::E(i, j) => {
                let tail: String = "a".repeat(*i as usize) + &"b".repeat(*j as usize);
                let mut out = LinComb::basis(normal_form(&format!("ab{tail}")));
                out.add_term(normal_form(&format!("ba{tail}")), Rational::from_int(-1));
                out
            }
        }
    }

    pub fn embed(&self, x: &LinComb<FreeKey>) -> LinComb<String> {
        let mut out = LinComb::zero();
        for (k, c) in x.iter() {
            out.add_scaled(&self.embed_key(k), c);
        }
        out
    }
}

/// One critical pair of the rewriting system.
#[derive(Debug)]
pub struct CriticalPair {
    pub superposition: String,
    pub left_normal_form: String,
    pub right_normal_form: String,
}

impl CriticalPair {
    pub fn joinable(&self) -> bool {
        self.left_normal_form == self.right_normal_form
    }
}

/// Enumerate all overlaps between the two rewrite rules and reduce each
/// superposition both ways. Confluence holds iff every pair joins.
pub fn critical_pairs() -> Vec<CriticalPair> {
    let mut pairs = Vec::new();
    for (l1, r1) in REWRITE_RULES {
        for (l2, r2) in REWRITE_RULES {
            // proper overlap: a suffix of l1 equals a prefix of l2
            for overlap in 1..l1.len().min(l2.len()) {
                if l1[l1.len() - overlap..] != l2[..overlap] {
                    continue;
                }
                let word = format!("{l1}{}", &l2[overlap..]);
                let via_first = normal_form(&format!("{r1}{}", &l2[overlap..]));
                let via_second =
                    normal_form(&format!("{}{r2}", &word[..l1.len() - overlap]));
                pairs.push(CriticalPair {
                    superposition: word,
                    left_normal_form: via_first,
                    right_normal_form: via_second,
                });
            }
        }
    }
    pairs
}

/// Brute-force dimension of the degree-n graded piece of the free system:
/// the rank of the span of all left-normed brackets of n generators.
pub fn bruteforce_graded_dim(n: u32) -> usize {
    if n % 2 == 0 {
        // products of even arity vanish identically
        return 0;
    }
    let model = AModel::default();
    let gens = [
        LinComb::basis("a".to_owned()),
        LinComb::basis("b".to_owned()),
    ];
    let mut space = RowSpace::new();
    let mut rank = 0;
    for mask in 0..(1u32 << n) {
        let args: Vec<LinComb<String>> = (0..n)
            .map(|bit| gens[((mask >> bit) & 1) as usize].clone())
            .collect();
        let bracket = model
            .nary_bracket(&args)
            .expect("bracket words stay within the bound");
        if space.insert(&bracket) {
            rank += 1;
        }
    }
    rank
}

/// Compare the closed-form structure constants of [`Free2`] against the
/// rewriting oracle on every basis triple of total degree `<= max_degree`.
/// Returns a mismatch description per failing triple.
pub fn oracle_mismatches(max_degree: u32) -> Vec<String> {
    let sys = Free2::new(max_degree);
    let model = AModel::default();
    let basis = sys.basis_up_to(max_degree);
    let mut mismatches = Vec::new();
    for p in &basis {
        for q in &basis {
            for r in &basis {
                if p.degree() + q.degree() + r.degree() > max_degree {
                    continue;
                }
                let fast = model.embed(&sys.triple_basis(p, q, r));
                let slow = model
                    .triple(&model.embed_key(p), &model.embed_key(q), &model.embed_key(r))
                    .expect("oracle words stay within the bound");
                if fast != slow {
                    mismatches.push(format!(
                        "[{p:?},{q:?},{r:?}]: table {fast:?} vs oracle {slow:?}"
                    ));
                }
            }
        }
    }
    mismatches
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calts::free2_dim;

    fn word(w: &str) -> LinComb<String> {
        LinComb::basis(w.to_owned())
    }

    #[test]
    fn normal_forms() {
        assert_eq!(normal_form("aab"), "aba");
        assert_eq!(normal_form("bba"), "bab");
        assert_eq!(normal_form("aabb"), "abab");
        assert_eq!(normal_form("abaa"), "abaa");
        assert_eq!(normal_form(""), "");
    }

    #[test]
    fn commutator_examples() {
        let model = AModel::default();
        // [[a,b],a] = aba - baa after rewriting aab -> aba
        let got = model.triple(&word("a"), &word("b"), &word("a")).unwrap();
        let expected = word("aba").sub(&word("baa"));
        assert_eq!(got, expected);

        // c = ab - ba is annihilated on the left: [[a,b], c] = 0
        let c = word("ab").sub(&word("ba"));
        assert!(model
            .triple(&word("a"), &word("b"), &c)
            .unwrap()
            .is_zero());

        // [[a,a],z] = 0
        assert!(model
            .triple(&word("a"), &word("a"), &word("bab"))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn word_length_bound_is_enforced() {
        let model = AModel { max_word_len: 3 };
        let err = model.mul(&word("ab"), &word("ab")).unwrap_err();
        assert!(matches!(err, LtsError::WordLengthExceeded { len: 4, max: 3 }));
    }

    #[test]
    fn rewriting_is_confluent_on_overlaps() {
        let pairs = critical_pairs();
        // aab/bba overlap in "aabba", bba/aab in "bbaab"
        assert_eq!(pairs.len(), 2);
        for pair in &pairs {
            assert!(
                pair.joinable(),
                "critical pair {} resolves to {} vs {}",
                pair.superposition,
                pair.left_normal_form,
                pair.right_normal_form
            );
        }
    }

    #[test]
    fn embedded_basis_is_linearly_independent() {
        let model = AModel::default();
        let sys = Free2::new(9);
        let mut space = RowSpace::new();
        for key in sys.basis_up_to(9) {
            assert!(
                space.insert(&model.embed_key(&key)),
                "image of {key:?} is dependent"
            );
        }
    }

    #[test]
    fn free2_matches_oracle_to_degree_seven() {
        // degree 9 is covered by the acceptance suite; 7 keeps this test quick
        assert!(oracle_mismatches(7).is_empty());
    }

    #[test]
    fn bruteforce_dims_match_formula_small() {
        for n in 1..=7u32 {
            assert_eq!(bruteforce_graded_dim(n), free2_dim(n), "degree {n}");
        }
    }
}
