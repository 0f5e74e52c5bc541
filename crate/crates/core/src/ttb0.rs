//! `B0 = C_(kG e_theta)(kH e_theta)` as the twisted tensor product
//! `A1 (x) A2`.
//!
//! `iota_1(a) = sum_chi a^chi h_(chi,1)^-1 e_theta` (and symmetrically
//! `iota_2`), `pi(n h e_theta) = n`, and the product on `A1 (x) A2` is
//! `(a1 (x) b1)(a2 (x) b2) = sum_(chi, eta) c(chi, eta)^-1 a1 a2^chi (x)
//! b1^eta b2` with `c(chi, eta) = theta([h_(eta,2), h_(chi,1)])`.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::block::{local_is_zero, local_one, BlockElem, LocalVec};
use crate::chr::{h_element, CharError, CharGroup, Character};
use crate::ff::{FieldContext, FieldElem};
use crate::galg::{centralizes_block_h, GAElem, GalgError};
use crate::grp::{GroupElem, Params};
use crate::morita::SimpleLabel;
use crate::quiva::{
    embed_local, extract_local, label_act, label_count, label_degree, label_mul, make_label,
    qa_isotypic, to_quiv_label, unit_m, QuivAElem, QuivError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TtError {
    #[error("theta mismatch: {0} vs {1}")]
    ThetaMismatch(u64, u64),
    #[error("the zero element has no radical degree")]
    ZeroElement,
    #[error("step character must be nontrivial")]
    TrivialStep,
    #[error("invalid simple label {0:?}")]
    InvalidLabel(SimpleLabel),
    #[error("element is not in B0")]
    NotInB0,
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Galg(#[from] GalgError),
    #[error(transparent)]
    Quiv(#[from] QuivError),
}

/// Element of `A1 (x) A2`, standing for its preimage under `pi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TTElem {
    pub theta: u64,
    terms: HashMap<(u32, u32), FieldElem>,
}

impl TTElem {
    pub fn zero(theta: u64) -> Self {
        TTElem {
            theta,
            terms: HashMap::new(),
        }
    }

    pub fn basis(theta: u64, u: u32, v: u32) -> Self {
        let mut t = TTElem::zero(theta);
        t.terms.insert((u, v), FieldElem::ONE);
        t
    }

    /// `a (x) b`.
    pub fn tensor(f: &FieldContext, theta: u64, a: &QuivAElem, b: &QuivAElem) -> Self {
        let mut t = TTElem::zero(theta);
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                t.add_term(f, u, v, f.mul(cu, cv));
            }
        }
        t
    }

    pub fn add_term(&mut self, f: &FieldContext, u: u32, v: u32, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((u, v)).or_insert(FieldElem::ZERO);
        *e = f.add(*e, c);
        if e.is_zero() {
            self.terms.remove(&(u, v));
        }
    }

    pub fn coeff(&self, u: u32, v: u32) -> FieldElem {
        self.terms.get(&(u, v)).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, FieldElem)> + '_ {
        self.terms.iter().map(|(&(u, v), &c)| (u, v, c))
    }

    pub fn sorted_terms(&self) -> Vec<(u32, u32, FieldElem)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_unstable_by_key(|t| (t.0, t.1));
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, f: &FieldContext, other: &TTElem) -> TTElem {
        let mut out = self.clone();
        for (u, v, c) in other.terms() {
            out.add_term(f, u, v, c);
        }
        out
    }

    pub fn sub(&self, f: &FieldContext, other: &TTElem) -> TTElem {
        let mut out = self.clone();
        for (u, v, c) in other.terms() {
            out.add_term(f, u, v, f.neg(c));
        }
        out
    }

    pub fn scale(&self, f: &FieldContext, s: FieldElem) -> TTElem {
        let mut out = TTElem::zero(self.theta);
        for (u, v, c) in self.terms() {
            out.add_term(f, u, v, f.mul(c, s));
        }
        out
    }

    /// Part of radical degree below `k` (terms with `|m_u| + |m_v| < k`).
    pub fn truncate(&self, p: &Params, k: usize) -> TTElem {
        let mut out = TTElem::zero(self.theta);
        for (u, v, c) in self.terms() {
            if label_degree(p, u) + label_degree(p, v) < k {
                out.terms.insert((u, v), c);
            }
        }
        out
    }

    pub fn to_json(&self, p: &Params) -> serde_json::Value {
        serde_json::Value::Array(
            self.sorted_terms()
                .into_iter()
                .map(|(u, v, c)| {
                    serde_json::json!({
                        "u": to_quiv_label(p, 1, u),
                        "v": to_quiv_label(p, 2, v),
                        "coeff": p.f().coeffs(c),
                    })
                })
                .collect(),
        )
    }
}

/// `min (|m_u| + |m_v|)` over the support.
pub fn tt_radical_degree(p: &Params, t: &TTElem) -> Result<usize, TtError> {
    t.terms()
        .map(|(u, v, _)| label_degree(p, u) + label_degree(p, v))
        .min()
        .ok_or(TtError::ZeroElement)
}

/// Per-`(Params, theta)` tables: `h`-elements, the pairing and the
/// twisted-product kernel.
#[derive(Debug)]
pub struct B0Context {
    pub params: Arc<Params>,
    pub theta: Character,
    /// `h_(chi_e, 1)` by exponent `e`.
    pub h1: Vec<GroupElem>,
    /// `h_(eta_f, 2)` by exponent `f`.
    pub h2: Vec<GroupElem>,
    /// `c(chi_e, eta_f)` at `e * r + f`.
    pairing: Vec<FieldElem>,
    /// Coefficient of `a1 a2^(g^t1) (x) b1^(g^t2) b2` at `t1 * r + t2`.
    kernel: Vec<FieldElem>,
}

impl B0Context {
    pub fn new(params: Arc<Params>, theta: Character) -> Result<Self, TtError> {
        let p = &*params;
        let f = p.f();
        let r = p.r as usize;
        let mut h1 = Vec::with_capacity(r);
        let mut h2 = Vec::with_capacity(r);
        for e in 0..r as i64 {
            h1.push(h_element(p, &theta, &Character::new(p, CharGroup::L1, e))?);
            h2.push(h_element(p, &theta, &Character::new(p, CharGroup::L2, e))?);
        }
        let mut pairing = vec![FieldElem::ZERO; r * r];
        for e in 0..r {
            for fe in 0..r {
                let comm = p.commutator(&h2[fe], &h1[e]);
                pairing[e * r + fe] = theta.value_at_power(p, comm.c as i64);
            }
        }
        let inv_r2 = f.inv(f.from_int((r * r) as i64)).unwrap();
        let mut kernel = vec![FieldElem::ZERO; r * r];
        for t1 in 0..r as i64 {
            for t2 in 0..r as i64 {
                let mut acc = FieldElem::ZERO;
                for e in 0..r as i64 {
                    for fe in 0..r as i64 {
                        let c_inv = f.inv(pairing[e as usize * r + fe as usize]).unwrap();
                        let w = p.zeta_r_pow(-e * t1 - fe * t2);
                        acc = f.add(acc, f.mul(c_inv, w));
                    }
                }
                kernel[t1 as usize * r + t2 as usize] = f.mul(acc, inv_r2);
            }
        }
        Ok(B0Context {
            params,
            theta,
            h1,
            h2,
            pairing,
            kernel,
        })
    }

    pub fn p(&self) -> &Params {
        &self.params
    }

    /// `theta([h_(eta_f,2), h_(chi_e,1)])`.
    pub fn pairing(&self, e: u64, f: u64) -> FieldElem {
        let r = self.p().r;
        self.pairing[((e % r) * r + f % r) as usize]
    }

    fn check(&self, t: &TTElem) -> Result<(), TtError> {
        if t.theta != self.theta.e {
            return Err(TtError::ThetaMismatch(self.theta.e, t.theta));
        }
        Ok(())
    }

    pub fn one(&self) -> TTElem {
        let p = self.p();
        TTElem::tensor(
            p.f(),
            self.theta.e,
            &QuivAElem::one(p, 1),
            &QuivAElem::one(p, 2),
        )
    }

    pub fn tt_mul(&self, t: &TTElem, s: &TTElem) -> Result<TTElem, TtError> {
        self.check(t)?;
        self.check(s)?;
        let p = self.p();
        let f = p.f();
        let r = p.r as usize;
        let mut out = TTElem::zero(self.theta.e);
        let mut left = Vec::with_capacity(r);
        let mut right = Vec::with_capacity(r);
        for (u1, v1, c1) in t.terms() {
            for (u2, v2, c2) in s.terms() {
                left.clear();
                right.clear();
                for t1 in 0..r {
                    if let Some(k) = label_mul(p, u1, label_act(p, u2, t1 as i64)) {
                        left.push((t1, k));
                    }
                }
                if left.is_empty() {
                    continue;
                }
                for t2 in 0..r {
                    if let Some(k) = label_mul(p, label_act(p, v1, t2 as i64), v2) {
                        right.push((t2, k));
                    }
                }
                let c = f.mul(c1, c2);
                for &(t1, a) in &left {
                    for &(t2, b) in &right {
                        out.add_term(f, a, b, f.mul(c, self.kernel[t1 * r + t2]));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `iota_side(a)` in factored block form.
    pub fn iota_block(&self, a: &QuivAElem) -> Result<BlockElem, TtError> {
        let p = self.p();
        let j = self.theta.e;
        let mut out = BlockElem::zero(j);
        let grp = if a.side == 1 { CharGroup::L1 } else { CharGroup::L2 };
        for chi in Character::all(p, grp) {
            let comp = qa_isotypic(p, a, &chi)?;
            if comp.is_zero() {
                continue;
            }
            let x = embed_local(p, &comp);
            let term = if a.side == 1 {
                let h_inv = p.inv(&self.h1[chi.e as usize]);
                BlockElem::from_tensor(j, x, local_one(p), h_inv.a, h_inv.b)
            } else {
                let h_inv = p.inv(&self.h2[chi.e as usize]);
                BlockElem::from_tensor(j, local_one(p), x, h_inv.a, h_inv.b)
            };
            out = out.add(&term);
        }
        Ok(out)
    }

    /// `sum_(g in L_i) (a e_(1_(L_j)) e_theta)^g`.
    pub fn iota_block_averaged(&self, a: &QuivAElem) -> Result<BlockElem, TtError> {
        let p = self.p();
        let f = p.f();
        let j = self.theta.e;
        let r = p.r as i64;
        let x = embed_local(p, a);
        let inv_r = f.inv(f.from_int(r)).unwrap();
        let mut base = BlockElem::zero(j);
        for t in 0..r as u32 {
            let term = if a.side == 1 {
                BlockElem::from_tensor(j, x.clone(), local_one(p), 0, t)
            } else {
                BlockElem::from_tensor(j, local_one(p), x.clone(), t, 0)
            };
            base = base.add(&term);
        }
        let base = base.scale(f, inv_r);
        let mut out = BlockElem::zero(j);
        for t in 0..r {
            let conj = if a.side == 1 {
                base.conjugate_h(p, t, 0)
            } else {
                base.conjugate_h(p, 0, t)
            };
            out = out.add(&conj);
        }
        Ok(out)
    }

    pub fn b0_iota(&self, a: &QuivAElem) -> Result<GAElem, TtError> {
        Ok(self.iota_block(a)?.to_ga(self.p()))
    }

    /// `pi^-1(t) = sum c iota_1(u) iota_2(v)`.
    pub fn pi_inv_block(&self, t: &TTElem) -> Result<BlockElem, TtError> {
        self.check(t)?;
        let p = self.p();
        let f = p.f();
        let mut out = BlockElem::zero(self.theta.e);
        let mut cache1: HashMap<u32, BlockElem> = HashMap::new();
        let mut cache2: HashMap<u32, BlockElem> = HashMap::new();
        for (u, v, c) in t.sorted_terms() {
            if !cache1.contains_key(&u) {
                cache1.insert(u, self.iota_block(&QuivAElem::basis(1, u))?);
            }
            if !cache2.contains_key(&v) {
                cache2.insert(v, self.iota_block(&QuivAElem::basis(2, v))?);
            }
            let prod = cache1[&u].mul(p, &cache2[&v]).scale(f, c);
            out = out.add(&prod);
        }
        Ok(out)
    }

    pub fn b0_pi_inv(&self, t: &TTElem) -> Result<GAElem, TtError> {
        Ok(self.pi_inv_block(t)?.to_ga(self.p()))
    }

    /// `pi` on a factored element, converting both legs to labels.
    pub fn pi_block(&self, x: &BlockElem) -> TTElem {
        let p = self.p();
        let f = p.f();
        let ord = p.local.order() as usize;
        let dense = x.pi_dense(p);
        // second leg first: rows indexed by n1, columns by label v
        let mut half = vec![FieldElem::ZERO; ord * ord];
        for n1 in 0..ord {
            let row = &dense[n1 * ord..(n1 + 1) * ord];
            if local_is_zero(row) {
                continue;
            }
            let labels = extract_local(p, row);
            half[n1 * ord..(n1 + 1) * ord].copy_from_slice(&labels);
        }
        let mut out = TTElem::zero(self.theta.e);
        let mut col: LocalVec = vec![FieldElem::ZERO; ord];
        for v in 0..ord {
            let mut any = false;
            for n1 in 0..ord {
                col[n1] = half[n1 * ord + v];
                any |= !col[n1].is_zero();
            }
            if !any {
                continue;
            }
            for (u, c) in extract_local(p, &col).into_iter().enumerate() {
                out.add_term(f, u as u32, v as u32, c);
            }
        }
        out
    }

    /// Whether a factored block element commutes with `g1 e_theta` and
    /// `g2 e_theta`.
    pub fn block_in_b0(&self, x: &BlockElem) -> bool {
        let p = self.p();
        [(1, 0), (0, 1)].iter().all(|&(al, be)| {
            x.mul_h_left(p, al, be, 0)
                .equals(p, &x.mul_h_right(p, al, be, 0))
        })
    }

    pub fn b0_pi(&self, x: &GAElem) -> Result<TTElem, TtError> {
        let p = self.p();
        if !centralizes_block_h(p, &self.theta, x)? {
            return Err(TtError::NotInB0);
        }
        Ok(self.pi_block(&BlockElem::from_ga(p, self.theta.e, x)))
    }

    /// Orbit sum `e_[psi] = sum_(g in L_i) e_(psi^g)` on one side.
    fn orbit_idempotent(&self, side: u8, psi: u64) -> QuivAElem {
        let p = self.p();
        let f = p.f();
        let mut out = QuivAElem::zero(side);
        for t in 0..p.r as i64 {
            out.add_term(f, label_act(p, make_label(p, psi, 0), t), f.one());
        }
        out
    }

    pub fn tt_eps(&self, label: &SimpleLabel) -> Result<TTElem, TtError> {
        let p = self.p();
        let f = p.f();
        let e = |side, psi| QuivAElem::idempotent(p, side, psi);
        let (a, b) = match *label {
            SimpleLabel::Trivial => (e(1, 0), e(2, 0)),
            SimpleLabel::Left(phi) if phi % p.p != 0 => (e(1, phi), e(2, 0)),
            SimpleLabel::Right(psi) if psi % p.p != 0 => (e(1, 0), e(2, psi)),
            SimpleLabel::Pair(phi, psi) if phi % p.p != 0 && psi % p.p != 0 => {
                (self.orbit_idempotent(1, phi), self.orbit_idempotent(2, psi))
            }
            _ => return Err(TtError::InvalidLabel(*label)),
        };
        Ok(TTElem::tensor(f, self.theta.e, &a, &b))
    }

    /// `S_(psi, phi) = s_(psi,phi) (x) e_1` (side 1) or `T_(xi, zeta) = e_1
    /// (x) s_(xi, zeta)` (side 2).
    pub fn tt_arrow(&self, side: u8, vertex: u64, step: u64) -> Result<TTElem, TtError> {
        let p = self.p();
        if step % p.p == 0 {
            return Err(TtError::TrivialStep);
        }
        let arrow = make_label(p, vertex, unit_m(p, step));
        let unit = make_label(p, 0, 0);
        Ok(if side == 1 {
            TTElem::basis(self.theta.e, arrow, unit)
        } else {
            TTElem::basis(self.theta.e, unit, arrow)
        })
    }

    /// `sum_(g in L_i) chi(g^-1) S_(1, phi^g) S_(phi^g, (phi^-1)^g)`.
    pub fn tt_tilde(&self, side: u8, step: u64, weight: &Character) -> Result<TTElem, TtError> {
        let p = self.p();
        let f = p.f();
        if step % p.p == 0 {
            return Err(TtError::TrivialStep);
        }
        let mut out = TTElem::zero(self.theta.e);
        for t in 0..p.r as i64 {
            let s = crate::chr::char_conjugate(
                p,
                &Character::new(p, CharGroup::P1, step as i64),
                t,
            )
            .e;
            let first = self.tt_arrow(side, 0, s)?;
            let second = self.tt_arrow(side, s, p.p - s)?;
            let path = self.tt_mul(&first, &second)?;
            out = out.add(f, &path.scale(f, weight.value_at_power(p, -t)));
        }
        Ok(out)
    }

    /// All basis pairs: `dim B0` as a label count.
    pub fn label_count(&self) -> u64 {
        let n = label_count(self.p()) as u64;
        n * n
    }
}
