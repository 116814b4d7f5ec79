//! Graded Lie algebras by structure constants.
//!
//! A [`LieStructure`] fixes an ordered generator list with positive degrees
//! and a sparse bracket table. Antisymmetry and the Jacobi identity are
//! verified at construction; degree additivity of brackets is verified and
//! recorded in the `graded` flag (the enveloping-algebra layer requires it,
//! the standard embedding of a non-graded system does not have it).

use std::collections::HashMap;

use serde::Deserialize;

use crate::calts::TripleSystem;
use crate::linear::{LinComb, SolvableSpan};
use crate::rational::Rational;

#[derive(Debug, thiserror::Error)]
pub enum LieError {
    #[error("generator index {index} out of range for {dim} generators")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket table violates antisymmetry at ({p},{q})")]
    Antisymmetry { p: u16, q: u16 },
    #[error("Jacobi identity fails on generators ({p},{q},{r})")]
    Jacobi { p: u16, q: u16, r: u16 },
    #[error("inner maps do not close under commutators (input is not a Lie triple system)")]
    InnerMapsNotClosed,
    #[error("generator degree must be positive")]
    ZeroDegree,
    #[error("invalid structure JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// One generator of a [`LieStructure`].
#[derive(Debug, Clone)]
pub struct Generator {
    pub label: String,
    pub degree: u32,
}

/// A Lie algebra presented by structure constants on an ordered basis.
pub struct LieStructure {
    gens: Vec<Generator>,
    /// Canonical storage: brackets for p < q only.
    brackets: HashMap<(u16, u16), LinComb<u16>>,
    graded: bool,
}

impl LieStructure {
    /// Build and verify. Brackets may be supplied in either slot order; both
    /// orders, when present, must be consistent.
    pub fn new(
        gens: Vec<Generator>,
        entries: impl IntoIterator<Item = ((u16, u16), LinComb<u16>)>,
    ) -> Result<Self, LieError> {
        let dim = gens.len();
        if gens.iter().any(|g| g.degree == 0) {
            return Err(LieError::ZeroDegree);
        }
        let check = |index: u16| -> Result<(), LieError> {
            if (index as usize) >= dim {
                Err(LieError::IndexOutOfRange {
                    index: index as usize,
                    dim,
                })
            } else {
                Ok(())
            }
        };
        let mut brackets: HashMap<(u16, u16), LinComb<u16>> = HashMap::new();
        let mut seen: HashMap<(u16, u16), LinComb<u16>> = HashMap::new();
        for ((p, q), value) in entries {
            check(p)?;
            check(q)?;
            for (idx, _) in value.iter() {
                check(*idx)?;
            }
            if let Some(previous) = seen.get(&(p, q)) {
                if *previous != value {
                    return Err(LieError::Antisymmetry { p, q });
                }
            }
            seen.insert((p, q), value.clone());
            if p == q {
                if !value.is_zero() {
                    return Err(LieError::Antisymmetry { p, q });
                }
                continue;
            }
            let (key, canonical) = if p < q { ((p, q), value) } else { ((q, p), value.neg()) };
            match brackets.get(&key) {
                Some(existing) if *existing != canonical => {
                    return Err(LieError::Antisymmetry { p, q })
                }
                _ => {
                    if !canonical.is_zero() {
                        brackets.insert(key, canonical);
                    }
                }
            }
        }

        let graded = brackets.iter().all(|(&(p, q), value)| {
            let expected = gens[p as usize].degree + gens[q as usize].degree;
            value.keys().all(|k| gens[*k as usize].degree == expected)
        });

        let lie = LieStructure {
            gens,
            brackets,
            graded,
        };
        lie.verify_jacobi()?;
        Ok(lie)
    }

    fn verify_jacobi(&self) -> Result<(), LieError> {
        let n = self.dim() as u16;
        for p in 0..n {
            for q in (p + 1)..n {
                for r in (q + 1)..n {
                    let mut acc = self.bracket(&self.bracket_basis(p, q), &LinComb::basis(r));
                    acc.add_scaled(
                        &self.bracket(&self.bracket_basis(q, r), &LinComb::basis(p)),
                        &Rational::one(),
                    );
                    acc.add_scaled(
                        &self.bracket(&self.bracket_basis(r, p), &LinComb::basis(q)),
                        &Rational::one(),
                    );
                    if !acc.is_zero() {
                        return Err(LieError::Jacobi { p, q, r });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn degree(&self, index: u16) -> u32 {
        self.gens[index as usize].degree
    }

    pub fn label(&self, index: u16) -> &str {
        &self.gens[index as usize].label
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// Whether every bracket is degree-additive.
    pub fn is_graded(&self) -> bool {
        self.graded
    }

    /// `[e_p, e_q]` on basis indices.
    pub fn bracket_basis(&self, p: u16, q: u16) -> LinComb<u16> {
        if p == q {
            return LinComb::zero();
        }
        if p < q {
            self.brackets.get(&(p, q)).cloned().unwrap_or_default()
        } else {
            self.brackets
                .get(&(q, p))
                .map(|v| v.neg())
                .unwrap_or_default()
        }
    }

    /// Bilinear extension of the bracket table.
    pub fn bracket(&self, x: &LinComb<u16>, y: &LinComb<u16>) -> LinComb<u16> {
        let mut out = LinComb::zero();
        for (p, cx) in x.iter() {
            for (q, cy) in y.iter() {
                out.add_scaled(&self.bracket_basis(*p, *q), &(cx * cy));
            }
        }
        out
    }

    /// Parse `{generators:[{label, degree}], brackets:[{p,q, out:[{idx, value}]}]}`.
    pub fn from_json(text: &str) -> Result<Self, LieError> {
        #[derive(Deserialize)]
        struct GenJson {
            label: String,
            degree: u32,
        }
        #[derive(Deserialize)]
        struct OutJson {
            idx: u16,
            value: Rational,
        }
        #[derive(Deserialize)]
        struct BracketJson {
            p: u16,
            q: u16,
            out: Vec<OutJson>,
        }
        #[derive(Deserialize)]
        struct LieJson {
            generators: Vec<GenJson>,
            brackets: Vec<BracketJson>,
        }
        let doc: LieJson = serde_json::from_str(text)?;
        let gens = doc
            .generators
            .into_iter()
            .map(|g| Generator {
                label: g.label,
                degree: g.degree,
            })
            .collect();
        let entries = doc.brackets.into_iter().map(|b| {
            let value = b.out.into_iter().map(|o| (o.idx, o.value)).collect();
            ((b.p, b.q), value)
        });
        Self::new(gens, entries)
    }
}

/// The graded Lie algebra hosting the enveloping algebra of the free
/// 2-generated system: generators `a`, `b` of degree 1 and `c_{ij}` of degree
/// `i+j+2 <= N` (all `i, j >= 0`), with `[a,b] = 2c_00`,
/// `[c_ij, a] = 2c_{i+1,j}`, `[c_ij, b] = 2c_{i,j+1}` and `[c,c'] = 0`.
pub struct Free2Lie {
    pub lie: std::sync::Arc<LieStructure>,
    pub a: u16,
    pub b: u16,
    max_degree: u32,
    c_index: HashMap<(u32, u32), u16>,
    coords: Vec<Option<(u32, u32)>>,
}

impl Free2Lie {
    pub fn new(max_degree: u32) -> Self {
        let mut gens = vec![
            Generator {
                label: "a".into(),
                degree: 1,
            },
            Generator {
                label: "b".into(),
                degree: 1,
            },
        ];
        let mut c_index = HashMap::new();
        for d in 2..=max_degree {
            for i in 0..=(d - 2) {
                let j = d - 2 - i;
                c_index.insert((i, j), gens.len() as u16);
                gens.push(Generator {
                    label: format!("c[{i},{j}]"),
                    degree: d,
                });
            }
        }
        let two = Rational::from_int(2);
        let mut entries = Vec::new();
        if let Some(&c00) = c_index.get(&(0, 0)) {
            entries.push(((0u16, 1u16), LinComb::term(c00, two.clone())));
        }
        for (&(i, j), &idx) in &c_index {
            // [c_ij, a] = 2 c_{i+1,j}; stored as [a, c_ij] = -2 c_{i+1,j}
            if let Some(&up) = c_index.get(&(i + 1, j)) {
                entries.push(((0u16, idx), LinComb::term(up, -two.clone())));
            }
            if let Some(&up) = c_index.get(&(i, j + 1)) {
                entries.push(((1u16, idx), LinComb::term(up, -two.clone())));
            }
        }
        let lie = LieStructure::new(gens, entries).expect("free2 Lie algebra is well formed");
        debug_assert!(lie.is_graded());
        let mut coords = vec![None; lie.dim()];
        for (&ij, &idx) in &c_index {
            coords[idx as usize] = Some(ij);
        }
        Free2Lie {
            lie: std::sync::Arc::new(lie),
            a: 0,
            b: 1,
            max_degree,
            c_index,
            coords,
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Generator index of `c_{ij}`, when within the truncation.
    pub fn c(&self, i: u32, j: u32) -> Option<u16> {
        self.c_index.get(&(i, j)).copied()
    }

    /// Inverse lookup: the `(i,j)` of a `c` generator.
    pub fn c_coords(&self, index: u16) -> Option<(u32, u32)> {
        self.coords.get(index as usize).copied().flatten()
    }

    /// The T letters inside the Lie algebra: `a`, `b` and the `c_ij` with
    /// `i + j` odd, in generator order.
    pub fn t_letters(&self) -> Vec<u16> {
        let mut out = vec![self.a, self.b];
        for g in 2..self.lie.dim() as u16 {
            if let Some((i, j)) = self.c_coords(g) {
                if (i + j) % 2 == 1 {
                    out.push(g);
                }
            }
        }
        out
    }
}

/// The standard embedding `T (+) h` of a triple system: `h` is the span of
/// the inner maps `D_{x,y}: z -> [x,y,z]`, with brackets
/// `[x,y] = 2 D_{x,y}`, `[D,z] = 2 D(z)`, `[D,D'] = 2 (DD' - D'D)`.
pub struct StandardEmbedding {
    pub lie: LieStructure,
    /// Number of leading generators coming from the triple system basis.
    pub t_dim: usize,
    /// For each h generator, the basis pair (x,y) whose inner map it is.
    pub h_pairs: Vec<(usize, usize)>,
}

/// Build the standard embedding on the basis of degree `<= cap`.
///
/// `h` is realized concretely as a matrix span; its basis is the subset of
/// the maps `D_{x,y}` (in lexicographic pair order) that row reduction keeps.
pub fn standard_embedding<S: TripleSystem>(
    sys: &S,
    cap: u32,
) -> Result<StandardEmbedding, LieError> {
    let basis = sys.basis_up_to(cap);
    let t_dim = basis.len();

    // Inner maps as sparse matrices keyed by (input index, output index).
    let matrix_of = |x: usize, y: usize| -> LinComb<(usize, usize)> {
        let mut m = LinComb::zero();
        for (z, key) in basis.iter().enumerate() {
            let column = sys.triple_basis(&basis[x], &basis[y], key);
            for (out_key, c) in column.iter() {
                let out = basis
                    .iter()
                    .position(|k| k == out_key)
                    .expect("triple product stays within the truncated basis");
                m.add_term((z, out), c.clone());
            }
        }
        m
    };

    let mut span = SolvableSpan::new();
    let mut inserted_pairs = Vec::new();
    let mut h_pairs = Vec::new();
    let mut insert_index_to_h = Vec::new();
    for x in 0..t_dim {
        for y in (x + 1)..t_dim {
            let m = matrix_of(x, y);
            inserted_pairs.push((x, y, m.clone()));
            if span.insert(&m) {
                insert_index_to_h.push(Some(h_pairs.len() as u16));
                h_pairs.push((x, y));
            } else {
                insert_index_to_h.push(None);
            }
        }
    }
    let h_dim = h_pairs.len();

    // Express a matrix in the chosen h basis, in generator indices t_dim..t_dim+h_dim.
    let express_in_h = |m: &LinComb<(usize, usize)>| -> Result<LinComb<u16>, LieError> {
        let coords = span.express(m).ok_or(LieError::InnerMapsNotClosed)?;
        let mut out = LinComb::zero();
        for (insert_idx, c) in coords.iter() {
            let h = insert_index_to_h[*insert_idx]
                .expect("express only references independent generators");
            out.add_term(t_dim as u16 + h, c.clone());
        }
        Ok(out)
    };

    let mut gens: Vec<Generator> = basis
        .iter()
        .map(|k| Generator {
            label: format!("{k:?}"),
            degree: sys.degree(k),
        })
        .collect();
    for &(x, y) in &h_pairs {
        gens.push(Generator {
            label: format!("D({:?},{:?})", basis[x], basis[y]),
            degree: sys.degree(&basis[x]) + sys.degree(&basis[y]),
        });
    }

    let two = Rational::from_int(2);
    let mut entries = Vec::new();
    // [t_x, t_y] = 2 D_{x,y}
    for &(x, y, ref m) in &inserted_pairs {
        let d = express_in_h(m)?;
        entries.push(((x as u16, y as u16), d.scale(&two)));
    }
    // [D, t_z] = 2 D(z): store [t_z, D] = -2 D(z)
    let h_matrices: Vec<LinComb<(usize, usize)>> = h_pairs
        .iter()
        .map(|&(x, y)| matrix_of(x, y))
        .collect();
    for (h, matrix) in h_matrices.iter().enumerate() {
        for z in 0..t_dim {
            let mut image = LinComb::zero();
            for ((input, out), c) in matrix.iter() {
                if *input == z {
                    image.add_term(*out as u16, c.clone());
                }
            }
            entries.push((
                (z as u16, (t_dim + h) as u16),
                image.scale(&-two.clone()),
            ));
        }
    }
    // [D, D'] = 2 (DD' - D'D)
    let compose = |a: &LinComb<(usize, usize)>,
                   b: &LinComb<(usize, usize)>|
     -> LinComb<(usize, usize)> {
        // (a b)(z) = a(b(z))
        let mut out = LinComb::zero();
        for ((z, mid), cb) in b.iter() {
            for ((mid2, top), ca) in a.iter() {
                if mid == mid2 {
                    out.add_term((*z, *top), ca * cb);
                }
            }
        }
        out
    };
    for i in 0..h_dim {
        for j in (i + 1)..h_dim {
            let commutator = compose(&h_matrices[i], &h_matrices[j])
                .sub(&compose(&h_matrices[j], &h_matrices[i]));
            let d = express_in_h(&commutator)?;
            entries.push((
                ((t_dim + i) as u16, (t_dim + j) as u16),
                d.scale(&two),
            ));
        }
    }

    let lie = LieStructure::new(gens, entries)?;
    Ok(StandardEmbedding {
        lie,
        t_dim,
        h_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calts::{Free2, LtsStructure};

    #[test]
    fn free2_lie_brackets() {
        let ctx = Free2Lie::new(7);
        let lie = &ctx.lie;
        assert!(lie.is_graded());
        let c00 = ctx.c(0, 0).unwrap();
        let c10 = ctx.c(1, 0).unwrap();
        // [a,b] = 2c00
        assert_eq!(
            lie.bracket_basis(ctx.a, ctx.b),
            LinComb::term(c00, Rational::from_int(2))
        );
        // 1/4 [[a,b],a] = c10
        let inner = lie.bracket(&lie.bracket_basis(ctx.a, ctx.b), &LinComb::basis(ctx.a));
        assert_eq!(inner.scale(&Rational::new(1, 4)), LinComb::basis(c10));
        // abelian among the c's
        assert!(lie.bracket_basis(c00, c10).is_zero());
        // spot check a bracket chain: [[c10, b], a] = [2c11, a] = 4c21
        let c21 = ctx.c(2, 1).unwrap();
        let left = lie.bracket(&lie.bracket_basis(c10, ctx.b), &LinComb::basis(ctx.a));
        assert_eq!(left, LinComb::term(c21, Rational::from_int(4)));
    }

    #[test]
    fn free2_lie_truncates_top_degree() {
        let ctx = Free2Lie::new(3);
        let c10 = ctx.c(1, 0).unwrap();
        // [c10, a] would be 2c20 of degree 4 > 3: truncated to zero
        assert!(ctx.lie.bracket_basis(c10, ctx.a).is_zero());
        assert!(ctx.c(2, 0).is_none());
    }

    #[test]
    fn standard_embedding_of_matrix_example() {
        let sys = LtsStructure::matrix_example();
        let emb = standard_embedding(&sys, 1).unwrap();
        assert_eq!(emb.t_dim, 2);
        assert_eq!(emb.lie.dim(), 3);
        assert_eq!(emb.h_pairs, vec![(0, 1)]);
        // matrix example is not gradable: [D, v] lands back in degree 1
        assert!(!emb.lie.is_graded());

        // [v,u] = -2 D_{u,v} is nontrivial and 1/4 [[v,u],v] = -u/4
        let vu = emb.lie.bracket_basis(1, 0);
        assert!(!vu.is_zero());
        let chain = emb.lie.bracket(&vu, &LinComb::basis(1));
        assert_eq!(
            chain.scale(&Rational::new(1, 4)),
            LinComb::term(0, Rational::new(-1, 4))
        );
    }

    #[test]
    fn standard_embedding_of_abelian_system() {
        let abelian = LtsStructure::new(vec!["x".into(), "y".into()], []).unwrap();
        let emb = standard_embedding(&abelian, 1).unwrap();
        assert_eq!(emb.t_dim, 2);
        assert_eq!(emb.lie.dim(), 2, "h vanishes");
        assert!(emb.lie.bracket_basis(0, 1).is_zero());
        assert!(emb.lie.is_graded());
    }

    #[test]
    fn standard_embedding_of_free2_matches_free2_lie() {
        let cap = 5;
        let sys = Free2::new(cap);
        let emb = standard_embedding(&sys, cap).unwrap();
        let reference = Free2Lie::new(cap);
        assert_eq!(emb.lie.dim(), reference.lie.dim());

        // The map a -> a, b -> b extends to an isomorphism sending c_ij to
        // the nested bracket (1/2)^{i+j+1} [..[[a,b],x],..] it abbreviates.
        // Build the images of every reference generator and compare structure
        // constants through them.
        let half = Rational::new(1, 2);
        let mut images: Vec<LinComb<u16>> = vec![LinComb::basis(0), LinComb::basis(1)];
        let mut by_coords: HashMap<(u32, u32), usize> = HashMap::new();
        for idx in 2..reference.lie.dim() as u16 {
            let (i, j) = reference.c_coords(idx).unwrap();
            by_coords.insert((i, j), idx as usize);
            let image = if (i, j) == (0, 0) {
                emb.lie
                    .bracket(&images[0], &images[1])
                    .scale(&half)
            } else if i > 0 {
                let prev = images[by_coords[&(i - 1, j)]].clone();
                emb.lie.bracket(&prev, &images[0]).scale(&half)
            } else {
                let prev = images[by_coords[&(i, j - 1)]].clone();
                emb.lie.bracket(&prev, &images[1]).scale(&half)
            };
            assert!(!image.is_zero(), "image of c[{i},{j}] vanished");
            images.push(image);
        }
        // compare [g_p, g_q] through the images for every generator pair
        for p in 0..reference.lie.dim() as u16 {
            for q in 0..reference.lie.dim() as u16 {
                let expected = reference.lie.bracket_basis(p, q);
                let mut expected_image = LinComb::zero();
                for (k, c) in expected.iter() {
                    expected_image.add_scaled(&images[*k as usize], c);
                }
                let got = emb.lie.bracket(&images[p as usize], &images[q as usize]);
                assert_eq!(got, expected_image, "bracket mismatch at ({p},{q})");
            }
        }
    }

    #[test]
    fn lie_json_loader() {
        let text = r#"{
            "generators": [{"label": "x", "degree": 1}, {"label": "y", "degree": 1},
                           {"label": "z", "degree": 2}],
            "brackets": [{"p": 0, "q": 1, "out": [{"idx": 2, "value": "1/1"}]}]
        }"#;
        let lie = LieStructure::from_json(text).unwrap();
        assert_eq!(lie.dim(), 3);
        assert!(lie.is_graded());
        assert_eq!(lie.bracket_basis(1, 0), LinComb::term(2, Rational::from_int(-1)));
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        // [x,y] = x is antisymmetric but fails Jacobi together with [y,z] = x, [x,z] = y
        let gens = |labels: &[&str]| {
            labels
                .iter()
                .map(|l| Generator {
                    label: (*l).into(),
                    degree: 1,
                })
                .collect::<Vec<_>>()
        };
        let bad = LieStructure::new(
            gens(&["x", "y", "z"]),
            [
                ((0u16, 1u16), LinComb::basis(0u16)),
                ((1, 2), LinComb::basis(0)),
                ((0, 2), LinComb::basis(1)),
            ],
        );
        assert!(matches!(bad, Err(LieError::Jacobi { .. })));
    }
}
