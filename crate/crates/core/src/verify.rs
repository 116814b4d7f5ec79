//! Exhaustive identity verification over basis monomials.
//!
//! Every identity in the catalogue is multilinear in its element variables,
//! so checking all tuples of basis monomials of bounded total degree is a
//! complete check at that degree. Power and exponent variables (the `n` in
//! the monoalternative law) range over primitive basis generators. Any
//! failure is recorded with explicit witness monomials; the checks are exact
//! rational equalities throughout.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde_json::json;

use crate::bruck::{UtContext, UtElement};
use crate::env::{EnvElement, EnvTensor, PbwMonomial};
use crate::rational::Rational;

/// The identity catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `x1 (y (x2 z)) = (x1 (y x2)) z` (Bruck product)
    LeftBol,
    /// `S(x y) = S(x) S(y)` (Bruck product)
    Aip,
    /// `S(x1)(x2 y) = eps(x) y = x1 (S(x2) y)`
    AntipodeDiv,
    /// `L_{a^n} = L_a^n` for primitive `a`
    MonoAlt,
    /// `[[L_a,L_b],L_c] = L_{a(bc) - b(ac)}` for primitive a, b, c
    LtsOp,
    /// `[L_a, L_b]` is a derivation of the Bruck product
    Der,
    /// `a^{m+n} = a^m . a^n` for T letters
    PowerAssoc,
    /// `x . y = y . x`
    DotComm,
    /// `l.(x,y)(w . z) = l.(x1,y1)(w) . l.(x2,y2)(z)`
    LeftAutomorphic,
    /// `phi_z phi_x = phi_{phi_{z1}(x)} phi_{z2}`
    PhiFlip,
    /// `S phi_x S = phi_{S(x)} = phi_x`
    PhiS,
    /// `Delta(phi_x(y)) = phi_{x1}(y1) (x) phi_{x2}(y2)`
    DeltaPhi,
    /// `l.(x,y)(w z) = l.(x1,y1)(w) l.(x2,y2)(z)` (Bruck product on arguments)
    CaHopf,
    /// the factored formula for `l.` equals its division definition
    LdotFactored,
    /// `-((a.c).b - a.(c.b)) = a(bc) - b(ac)` on T letters
    TangentTriple,
}

impl Identity {
    pub const CATALOGUE: [Identity; 15] = [
        Identity::LeftBol,
        Identity::Aip,
        Identity::AntipodeDiv,
        Identity::MonoAlt,
        Identity::LtsOp,
        Identity::Der,
        Identity::PowerAssoc,
        Identity::DotComm,
        Identity::LeftAutomorphic,
        Identity::PhiFlip,
        Identity::PhiS,
        Identity::DeltaPhi,
        Identity::CaHopf,
        Identity::LdotFactored,
        Identity::TangentTriple,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::LeftBol => "left_bol",
            Identity::Aip => "aip",
            Identity::AntipodeDiv => "antipode_div",
            Identity::MonoAlt => "monoalt",
            Identity::LtsOp => "lts_op",
            Identity::Der => "der",
            Identity::PowerAssoc => "power_assoc",
            Identity::DotComm => "dot_comm",
            Identity::LeftAutomorphic => "left_automorphic",
            Identity::PhiFlip => "phi_flip",
            Identity::PhiS => "phi_s",
            Identity::DeltaPhi => "delta_phi",
            Identity::CaHopf => "ca_hopf",
            Identity::LdotFactored => "ldot_factored",
            Identity::TangentTriple => "tangent_triple",
        }
    }

    pub fn from_name(name: &str) -> Option<Identity> {
        Identity::CATALOGUE
            .iter()
            .copied()
            .find(|id| id.name() == name)
    }

    /// Default exhaustive-check degree: 6 for identities in one or two
    /// element variables, 5 for the wider ones, 4 for the factored-formula
    /// comparison, 7 for the tangent triple.
    pub fn default_degree(&self) -> u32 {
        match self {
            Identity::Aip
            | Identity::AntipodeDiv
            | Identity::MonoAlt
            | Identity::PowerAssoc
            | Identity::DotComm
            | Identity::PhiS => 6,
            Identity::LeftBol
            | Identity::LtsOp
            | Identity::Der
            | Identity::LeftAutomorphic
            | Identity::PhiFlip
            | Identity::DeltaPhi
            | Identity::CaHopf => 5,
            Identity::LdotFactored => 4,
            Identity::TangentTriple => 7,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One failing tuple with both evaluated sides.
#[derive(Debug, Clone)]
pub struct IdentityFailure {
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one identity run.
#[derive(Debug)]
pub struct IdentityReport {
    pub identity: String,
    pub degree: u32,
    pub checked: usize,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "identity": self.identity,
            "degree": self.degree,
            "checked": self.checked,
            "failures": self.failures.iter().map(|f| json!({
                "witness": f.witness,
                "lhs": f.lhs,
                "rhs": f.rhs,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Verify one identity on all basis tuples of total degree `<= degree`.
pub fn verify_identity(ctx: &UtContext, identity: Identity, degree: u32) -> IdentityReport {
    assert!(
        ctx.trunc() >= degree,
        "context truncation {} below requested degree {degree}",
        ctx.trunc()
    );
    let mut run = Run {
        ctx,
        degree,
        checked: 0,
        failures: Vec::new(),
        ldot_cache: HashMap::new(),
    };
    match identity {
        Identity::LeftBol => run.left_bol(),
        Identity::Aip => run.aip(),
        Identity::AntipodeDiv => run.antipode_div(),
        Identity::MonoAlt => run.monoalt(),
        Identity::LtsOp => run.lts_op(),
        Identity::Der => run.der(),
        Identity::PowerAssoc => run.power_assoc(),
        Identity::DotComm => run.dot_comm(),
        Identity::LeftAutomorphic => run.left_automorphic(false),
        Identity::PhiFlip => run.phi_flip(),
        Identity::PhiS => run.phi_s(),
        Identity::DeltaPhi => run.delta_phi(),
        Identity::CaHopf => run.left_automorphic(true),
        Identity::LdotFactored => run.ldot_factored(),
        Identity::TangentTriple => run.tangent_triple(),
    }
    IdentityReport {
        identity: identity.name().to_owned(),
        degree,
        checked: run.checked,
        failures: run.failures,
    }
}

struct Run<'a> {
    ctx: &'a UtContext,
    degree: u32,
    checked: usize,
    failures: Vec<IdentityFailure>,
    ldot_cache: HashMap<(PbwMonomial, PbwMonomial, PbwMonomial), Arc<UtElement>>,
}

impl<'a> Run<'a> {
    fn env_monos(&self, cap: u32) -> Vec<PbwMonomial> {
        self.ctx.env_monomials_up_to(cap)
    }

    fn ut_monos(&self, cap: u32) -> Vec<PbwMonomial> {
        self.ctx.ut_monomials_up_to(cap)
    }

    fn mono_env(&self, m: &PbwMonomial) -> EnvElement {
        let mut e = self.ctx.env().zero();
        e.add_term(m.clone(), Rational::one());
        e
    }

    fn mono_ut(&self, m: &PbwMonomial) -> UtElement {
        let mut e = UtElement::zero(self.ctx.trunc());
        e.add_term(m.clone(), Rational::one());
        e
    }

    fn record_env(&mut self, witness: String, lhs: &EnvElement, rhs: &EnvElement) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push(IdentityFailure {
                witness,
                lhs: format!("{lhs:?}"),
                rhs: format!("{rhs:?}"),
            });
        }
    }

    fn record_ut(&mut self, witness: String, lhs: &UtElement, rhs: &UtElement) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push(IdentityFailure {
                witness,
                lhs: format!("{lhs:?}"),
                rhs: format!("{rhs:?}"),
            });
        }
    }

    fn record_tensor(&mut self, witness: String, lhs: &EnvTensor, rhs: &EnvTensor) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push(IdentityFailure {
                witness,
                lhs: format!("{lhs:?}"),
                rhs: format!("{rhs:?}"),
            });
        }
    }

    /// `l.` on monomial arguments, cached across the run.
    fn ldot_mono(&mut self, x: &PbwMonomial, y: &PbwMonomial, z: &PbwMonomial) -> Arc<UtElement> {
        let key = (x.clone(), y.clone(), z.clone());
        if let Some(hit) = self.ldot_cache.get(&key) {
            return hit.clone();
        }
        let value = Arc::new(self.ctx.l_dot_raw(
            &self.mono_ut(x),
            &self.mono_ut(y),
            &self.mono_ut(z),
        ));
        self.ldot_cache.insert(key, value.clone());
        value
    }

    /// `l.(x,y)` applied to a U(T) element, linear in the element.
    fn ldot_apply(&mut self, x: &PbwMonomial, y: &PbwMonomial, z: &UtElement) -> UtElement {
        let mut out = UtElement::zero(self.ctx.trunc());
        let terms: Vec<(PbwMonomial, Rational)> =
            z.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        for (m, c) in terms {
            let v = self.ldot_mono(x, y, &m);
            out.add_scaled(&v, &c);
        }
        out
    }

    fn left_bol(&mut self) {
        let monos = self.env_monos(self.degree);
        let env = self.ctx.env();
        for x in &monos {
            for y in &monos {
                for z in &monos {
                    if x.degree() + y.degree() + z.degree() > self.degree {
                        continue;
                    }
                    let ye = self.mono_env(y);
                    let ze = self.mono_env(z);
                    let mut lhs = env.zero();
                    let mut rhs = env.zero();
                    for (parts, mult) in env.splits(x, 2) {
                        let x1 = self.mono_env(&parts[0]);
                        let x2 = self.mono_env(&parts[1]);
                        lhs.add_scaled(
                            &self
                                .ctx
                                .bruck_mul(&x1, &self.ctx.bruck_mul(&ye, &self.ctx.bruck_mul(&x2, &ze))),
                            &mult,
                        );
                        rhs.add_scaled(
                            &self
                                .ctx
                                .bruck_mul(&self.ctx.bruck_mul(&x1, &self.ctx.bruck_mul(&ye, &x2)), &ze),
                            &mult,
                        );
                    }
                    self.record_env(format!("x={x:?}, y={y:?}, z={z:?}"), &lhs, &rhs);
                }
            }
        }
    }

    fn aip(&mut self) {
        let monos = self.env_monos(self.degree);
        let env = self.ctx.env();
        for x in &monos {
            for y in &monos {
                if x.degree() + y.degree() > self.degree {
                    continue;
                }
                let xe = self.mono_env(x);
                let ye = self.mono_env(y);
                let lhs = env.antipode(&self.ctx.bruck_mul(&xe, &ye));
                let rhs = self.ctx.bruck_mul(&env.antipode(&xe), &env.antipode(&ye));
                self.record_env(format!("x={x:?}, y={y:?}"), &lhs, &rhs);
            }
        }
    }

    fn antipode_div(&mut self) {
        let monos = self.env_monos(self.degree);
        let env = self.ctx.env();
        for x in &monos {
            for y in &monos {
                if x.degree() + y.degree() > self.degree {
                    continue;
                }
                let ye = self.mono_env(y);
                let mut lhs = env.zero();
                let mut twin = env.zero();
                for (parts, mult) in env.splits(x, 2) {
                    let x1 = self.mono_env(&parts[0]);
                    let x2 = self.mono_env(&parts[1]);
                    lhs.add_scaled(
                        &self
                            .ctx
                            .bruck_mul(&env.antipode(&x1), &self.ctx.bruck_mul(&x2, &ye)),
                        &mult,
                    );
                    twin.add_scaled(
                        &self
                            .ctx
                            .bruck_mul(&x1, &self.ctx.bruck_mul(&env.antipode(&x2), &ye)),
                        &mult,
                    );
                }
                let expected = if x.is_empty() { ye.clone() } else { env.zero() };
                self.record_env(format!("S(x1)(x2 y): x={x:?}, y={y:?}"), &lhs, &expected);
                self.record_env(format!("x1(S(x2) y): x={x:?}, y={y:?}"), &twin, &expected);
            }
        }
    }

    fn monoalt(&mut self) {
        let env = self.ctx.env();
        let monos = self.env_monos(self.degree);
        for g in 0..env.lie().dim() as u16 {
            let d = env.lie().degree(g);
            let mut n = 1;
            while n * d <= self.degree {
                // a^n for primitive a is the sorted monomial of n letters
                let power = {
                    let mut e = env.zero();
                    e.add_term(env.mono(vec![g; n as usize]), Rational::one());
                    e
                };
                let a = env.gen_elem(g);
                for y in &monos {
                    if n * d + y.degree() > self.degree {
                        continue;
                    }
                    let ye = self.mono_env(y);
                    let lhs = self.ctx.bruck_mul(&power, &ye);
                    let mut rhs = ye.clone();
                    for _ in 0..n {
                        rhs = self.ctx.bruck_mul(&a, &rhs);
                    }
                    self.record_env(format!("a=gen{g}, n={n}, y={y:?}"), &lhs, &rhs);
                }
                n += 1;
            }
        }
    }

    fn lts_op(&mut self) {
        let env = self.ctx.env();
        let dim = env.lie().dim() as u16;
        let monos = self.env_monos(self.degree);
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let da = env.lie().degree(a) + env.lie().degree(b) + env.lie().degree(c);
                    let (ea, eb, ec) = (env.gen_elem(a), env.gen_elem(b), env.gen_elem(c));
                    // [a,b,c] = a(bc) - b(ac), primitive in a left Bruck Hopf algebra
                    let triple = self
                        .ctx
                        .bruck_mul(&ea, &self.ctx.bruck_mul(&eb, &ec))
                        .sub(&self.ctx.bruck_mul(&eb, &self.ctx.bruck_mul(&ea, &ec)));
                    for y in &monos {
                        if da + y.degree() > self.degree {
                            continue;
                        }
                        let ye = self.mono_env(y);
                        let compose = |ops: &[&EnvElement]| {
                            let mut acc = ye.clone();
                            for op in ops.iter().rev() {
                                acc = self.ctx.bruck_mul(op, &acc);
                            }
                            acc
                        };
                        let mut lhs = compose(&[&ea, &eb, &ec]);
                        lhs.add_scaled(&compose(&[&eb, &ea, &ec]), &-Rational::one());
                        lhs.add_scaled(&compose(&[&ec, &ea, &eb]), &-Rational::one());
                        lhs.add_scaled(&compose(&[&ec, &eb, &ea]), &Rational::one());
                        let rhs = self.ctx.bruck_mul(&triple, &ye);
                        self.record_env(
                            format!("a=gen{a}, b=gen{b}, c=gen{c}, y={y:?}"),
                            &lhs,
                            &rhs,
                        );
                    }
                }
            }
        }
    }

    fn der(&mut self) {
        let env = self.ctx.env();
        let dim = env.lie().dim() as u16;
        let monos = self.env_monos(self.degree);
        for a in 0..dim {
            for b in 0..dim {
                let dab = env.lie().degree(a) + env.lie().degree(b);
                let (ea, eb) = (env.gen_elem(a), env.gen_elem(b));
                let op = |this: &Run<'a>, v: &EnvElement| {
                    this.ctx
                        .bruck_mul(&ea, &this.ctx.bruck_mul(&eb, v))
                        .sub(&this.ctx.bruck_mul(&eb, &this.ctx.bruck_mul(&ea, v)))
                };
                for y in &monos {
                    for z in &monos {
                        if dab + y.degree() + z.degree() > self.degree {
                            continue;
                        }
                        let ye = self.mono_env(y);
                        let ze = self.mono_env(z);
                        let lhs = op(self, &self.ctx.bruck_mul(&ye, &ze));
                        let mut rhs = self.ctx.bruck_mul(&op(self, &ye), &ze);
                        rhs.add_scaled(&self.ctx.bruck_mul(&ye, &op(self, &ze)), &Rational::one());
                        self.record_env(
                            format!("a=gen{a}, b=gen{b}, y={y:?}, z={z:?}"),
                            &lhs,
                            &rhs,
                        );
                    }
                }
            }
        }
    }

    fn power_assoc(&mut self) {
        for &g in self.ctx.t_letters() {
            let d = self.ctx.env().lie().degree(g);
            let max_power = self.degree / d;
            if max_power < 2 {
                continue;
            }
            // powers a^k = a.(a.(...)), right-nested
            let a = self.ctx.ut_letter(g);
            let mut powers: Vec<UtElement> = vec![UtElement::one(self.ctx.trunc()), a.clone()];
            for _ in 2..=max_power {
                let prev = powers.last().unwrap();
                powers.push(self.ctx.dot_mul(&a, prev));
            }
            for m in 1..=max_power {
                for n in 1..=(max_power - m) {
                    let lhs = powers[(m + n) as usize].clone();
                    let rhs = self.ctx.dot_mul(&powers[m as usize], &powers[n as usize]);
                    self.record_ut(format!("a=gen{g}, m={m}, n={n}"), &lhs, &rhs);
                }
            }
        }
    }

    fn dot_comm(&mut self) {
        let monos = self.ut_monos(self.degree);
        for x in &monos {
            for y in &monos {
                if x.degree() + y.degree() > self.degree || x > y {
                    continue;
                }
                let xe = self.mono_ut(x);
                let ye = self.mono_ut(y);
                let lhs = self.ctx.dot_mul(&xe, &ye);
                let rhs = self.ctx.dot_mul(&ye, &xe);
                self.record_ut(format!("x={x:?}, y={y:?}"), &lhs, &rhs);
            }
        }
    }

    /// `bruck_args = false`: the commutative automorphic law on the dot
    /// product; `bruck_args = true`: the same operators acting on the Bruck
    /// product of the arguments.
    fn left_automorphic(&mut self, bruck_args: bool) {
        let monos = self.ut_monos(self.degree);
        let env_splits = |this: &Run<'a>, m: &PbwMonomial| this.ctx.env().splits(m, 2);
        for x in &monos {
            for y in &monos {
                for w in &monos {
                    for z in &monos {
                        let total = x.degree() + y.degree() + w.degree() + z.degree();
                        if total > self.degree {
                            continue;
                        }
                        let we = self.mono_ut(w);
                        let ze = self.mono_ut(z);
                        let argument = if bruck_args {
                            self.ctx
                                .reduce(&self.ctx.bruck_mul(&self.ctx.embed(&we), &self.ctx.embed(&ze)))
                                .expect("Bruck product of U(T) elements stays inside")
                        } else {
                            self.ctx.dot_mul(&we, &ze)
                        };
                        let lhs = self.ldot_apply(x, y, &argument);
                        let mut rhs = UtElement::zero(self.ctx.trunc());
                        for (px, mx) in env_splits(self, x) {
                            for (py, my) in env_splits(self, y) {
                                let first = self.ldot_mono(&px[0], &py[0], w);
                                let second = self.ldot_mono(&px[1], &py[1], z);
                                let combined = if bruck_args {
                                    self.ctx
                                        .reduce(&self.ctx.bruck_mul(
                                            &self.ctx.embed(&first),
                                            &self.ctx.embed(&second),
                                        ))
                                        .expect("stays inside U(T)")
                                } else {
                                    self.ctx.dot_mul(&first, &second)
                                };
                                rhs.add_scaled(&combined, &(&mx * &my));
                            }
                        }
                        self.record_ut(
                            format!("x={x:?}, y={y:?}, w={w:?}, z={z:?}"),
                            &lhs,
                            &rhs,
                        );
                    }
                }
            }
        }
    }

    fn phi_flip(&mut self) {
        let monos = self.ut_monos(self.degree);
        for z in &monos {
            for x in &monos {
                for y in &monos {
                    if z.degree() + x.degree() + y.degree() > self.degree {
                        continue;
                    }
                    let ze = self.mono_ut(z);
                    let xe = self.mono_ut(x);
                    let ye = self.mono_ut(y);
                    let inner = self
                        .ctx
                        .reduce(&self.ctx.phi(&xe, &ye))
                        .expect("phi preserves U(T)");
                    let lhs = self.ctx.phi(&ze, &inner);
                    let mut rhs = self.ctx.env().zero();
                    for (parts, mult) in self.ctx.env().splits(z, 2) {
                        let z1 = self.mono_ut(&parts[0]);
                        let z2 = self.mono_ut(&parts[1]);
                        let subscript = self
                            .ctx
                            .reduce(&self.ctx.phi(&z1, &xe))
                            .expect("phi preserves U(T)");
                        let arg = self
                            .ctx
                            .reduce(&self.ctx.phi(&z2, &ye))
                            .expect("phi preserves U(T)");
                        rhs.add_scaled(&self.ctx.phi(&subscript, &arg), &mult);
                    }
                    self.record_env(format!("z={z:?}, x={x:?}, y={y:?}"), &lhs, &rhs);
                }
            }
        }
    }

    fn phi_s(&mut self) {
        let env = self.ctx.env();
        let monos = self.ut_monos(self.degree);
        for x in &monos {
            for y in &monos {
                if x.degree() + y.degree() > self.degree {
                    continue;
                }
                let xe = self.mono_ut(x);
                let ye = self.mono_ut(y);
                let phi_xy = self.ctx.phi(&xe, &ye);
                // S phi_x S (y)
                let sy = self
                    .ctx
                    .reduce(&env.antipode(&self.ctx.embed(&ye)))
                    .expect("antipode preserves U(T)");
                let s_phi_s = env.antipode(&self.ctx.phi(&xe, &sy));
                // phi_{S(x)} (y)
                let sx = self
                    .ctx
                    .reduce(&env.antipode(&self.ctx.embed(&xe)))
                    .expect("antipode preserves U(T)");
                let phi_sx = self.ctx.phi(&sx, &ye);
                self.record_env(format!("S phi S: x={x:?}, y={y:?}"), &s_phi_s, &phi_xy);
                self.record_env(format!("phi_S(x): x={x:?}, y={y:?}"), &phi_sx, &phi_xy);
            }
        }
    }

    fn delta_phi(&mut self) {
        let env = self.ctx.env();
        let monos = self.ut_monos(self.degree);
        for x in &monos {
            for y in &monos {
                if x.degree() + y.degree() > self.degree {
                    continue;
                }
                let xe = self.mono_ut(x);
                let ye = self.mono_ut(y);
                let lhs = env.coproduct(&self.ctx.phi(&xe, &ye));
                let mut rhs = EnvTensor::zero(self.ctx.trunc());
                for (px, mx) in env.splits(x, 2) {
                    for (py, my) in env.splits(y, 2) {
                        let left = self
                            .ctx
                            .phi(&self.mono_ut(&px[0]), &self.mono_ut(&py[0]));
                        let right = self
                            .ctx
                            .phi(&self.mono_ut(&px[1]), &self.mono_ut(&py[1]));
                        let c = &mx * &my;
                        for (ml, cl) in left.iter() {
                            for (mr, cr) in right.iter() {
                                rhs.add_term(ml.clone(), mr.clone(), &(&c * cl) * cr);
                            }
                        }
                    }
                }
                self.record_tensor(format!("x={x:?}, y={y:?}"), &lhs, &rhs);
            }
        }
    }

    fn ldot_factored(&mut self) {
        let monos = self.ut_monos(self.degree);
        for x in &monos {
            for y in &monos {
                for z in &monos {
                    if x.degree() + y.degree() + z.degree() > self.degree {
                        continue;
                    }
                    let xe = self.mono_ut(x);
                    let ye = self.mono_ut(y);
                    let ze = self.mono_ut(z);
                    let direct = self.ctx.l_dot_raw(&xe, &ye, &ze);
                    let factored = self.ctx.l_dot_factored(&xe, &ye, &ze);
                    self.record_ut(format!("x={x:?}, y={y:?}, z={z:?}"), &direct, &factored);
                }
            }
        }
    }

    fn tangent_triple(&mut self) {
        let letters: Vec<u16> = self.ctx.t_letters().to_vec();
        for &a in &letters {
            for &b in &letters {
                for &c in &letters {
                    let lie = self.ctx.env().lie();
                    if lie.degree(a) + lie.degree(b) + lie.degree(c) > self.degree {
                        continue;
                    }
                    let ua = self.ctx.ut_letter(a);
                    let ub = self.ctx.ut_letter(b);
                    let uc = self.ctx.ut_letter(c);
                    // -( (a.c).b - a.(c.b) )
                    let lhs = self
                        .ctx
                        .dot_mul(&self.ctx.dot_mul(&ua, &uc), &ub)
                        .sub(&self.ctx.dot_mul(&ua, &self.ctx.dot_mul(&uc, &ub)))
                        .scale(&-Rational::one());
                    // a(bc) - b(ac) in the Bruck product
                    let (ea, eb, ec) = (
                        self.ctx.embed(&ua),
                        self.ctx.embed(&ub),
                        self.ctx.embed(&uc),
                    );
                    let rhs_env = self
                        .ctx
                        .bruck_mul(&ea, &self.ctx.bruck_mul(&eb, &ec))
                        .sub(&self.ctx.bruck_mul(&eb, &self.ctx.bruck_mul(&ea, &ec)));
                    let rhs = self.ctx.reduce(&rhs_env).expect("triple stays inside U(T)");
                    self.record_ut(format!("a=gen{a}, b=gen{b}, c=gen{c}"), &lhs, &rhs);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruck::UtContext;
    use crate::env::EnvAlgebra;
    use crate::lie::Free2Lie;

    fn context(n: u32) -> UtContext {
        let free2 = Free2Lie::new(n);
        let env = EnvAlgebra::new(free2.lie.clone(), n);
        UtContext::new(env, free2.t_letters())
    }

    #[test]
    fn catalogue_round_trips_names() {
        for id in Identity::CATALOGUE {
            assert_eq!(Identity::from_name(id.name()), Some(id));
        }
        assert_eq!(Identity::from_name("nope"), None);
    }

    #[test]
    fn small_degree_identities_pass() {
        let ctx = context(4);
        for id in [
            Identity::LeftBol,
            Identity::Aip,
            Identity::AntipodeDiv,
            Identity::MonoAlt,
            Identity::PowerAssoc,
            Identity::DotComm,
            Identity::PhiS,
            Identity::DeltaPhi,
            Identity::PhiFlip,
        ] {
            let report = verify_identity(&ctx, id, 3);
            assert!(
                report.passed(),
                "{} failed: {:?}",
                report.identity,
                report.failures.first()
            );
            assert!(report.checked > 0);
        }
    }

    #[test]
    fn wide_identities_pass_at_low_degree() {
        let ctx = context(3);
        for id in [
            Identity::LtsOp,
            Identity::Der,
            Identity::LeftAutomorphic,
            Identity::CaHopf,
            Identity::LdotFactored,
            Identity::TangentTriple,
        ] {
            let report = verify_identity(&ctx, id, 3);
            assert!(
                report.passed(),
                "{} failed: {:?}",
                report.identity,
                report.failures.first()
            );
        }
    }

    #[test]
    fn report_serializes() {
        let ctx = context(3);
        let report = verify_identity(&ctx, Identity::DotComm, 3);
        let json = report.to_json();
        assert_eq!(json["identity"], "dot_comm");
        assert_eq!(json["failures"].as_array().unwrap().len(), 0);
    }
}
