//! The monomial model of `A_i = k[D_i x| P_i]`.
//!
//! A basis label `(psi, m)` stands for `e_psi * prod_s s_(phi_s)^(m_s)` where
//! `s_phi = sum_g phi(g^-1) d^g`, `e_psi` is the idempotent of `psi in
//! Irr(P_i)` and `0 <= m_s <= l - 1` for `s = 1..p-1`. Labels are packed as
//! `psi * l^(p-1) + m`, with `m` packed like a `D_i` index (digit `s - 1`
//! holds `m_s`). The label ends at the vertex `psi + wt(m)` with
//! `wt(m) = sum_s s m_s mod p`.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block::{local_from_ga, local_to_ga, local_zero, LocalVec};
use crate::chr::{CharGroup, Character};
use crate::ff::{FieldContext, FieldElem};
use crate::galg::GAElem;
use crate::grp::{GroupElem, Params};
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuivError {
    #[error("side mismatch: {0} vs {1}")]
    SideMismatch(u8, u8),
    #[error("element is not in L_{0}")]
    NotInL(u8),
    #[error("character is not a character of L_{0}")]
    WrongCharacter(u8),
    #[error("the zero element has no degree")]
    ZeroElement,
    #[error("support leaves D_{0} x| P_{0}")]
    NotInLocalGroup(u8),
    #[error("invalid label")]
    InvalidLabel,
}

/// Tables shared by every quiver-algebra computation for one `Params`.
#[derive(Debug, Default)]
pub struct QuivCache {
    weight: OnceLock<Vec<u32>>,
    degree: OnceLock<Vec<u16>>,
    monomials: OnceLock<Vec<Vec<FieldElem>>>,
    extract: OnceLock<Matrix>,
}

/// Readable form of a label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuivLabel {
    pub side: u8,
    pub psi_exp: u64,
    pub m: Vec<u64>,
}

pub fn label_count(p: &Params) -> u32 {
    p.p as u32 * p.dsize()
}

pub fn make_label(p: &Params, psi: u64, m: u32) -> u32 {
    (psi % p.p) as u32 * p.dsize() + m
}

#[inline]
pub fn label_psi(p: &Params, idx: u32) -> u64 {
    (idx / p.dsize()) as u64
}

#[inline]
pub fn label_m(p: &Params, idx: u32) -> u32 {
    idx % p.dsize()
}

/// Packs multiplicities `m_1..m_(p-1)`.
pub fn pack_m(p: &Params, m: &[u64]) -> Result<u32, QuivError> {
    if m.len() != p.p as usize - 1 || m.iter().any(|&x| x >= p.ell) {
        return Err(QuivError::InvalidLabel);
    }
    let mut v = 0u64;
    for &x in m.iter().rev() {
        v = v * p.ell + x;
    }
    Ok(v as u32)
}

pub fn unpack_m(p: &Params, m: u32) -> Vec<u64> {
    p.local.unpack(m)[1..].to_vec()
}

/// The multiplicity vector with a single step `s`.
pub fn unit_m(p: &Params, s: u64) -> u32 {
    assert!(s % p.p != 0);
    (p.ell as u32).pow((s % p.p) as u32 - 1)
}

pub fn to_quiv_label(p: &Params, side: u8, idx: u32) -> QuivLabel {
    QuivLabel {
        side,
        psi_exp: label_psi(p, idx),
        m: unpack_m(p, label_m(p, idx)),
    }
}

pub fn from_quiv_label(p: &Params, l: &QuivLabel) -> Result<u32, QuivError> {
    if l.psi_exp >= p.p {
        return Err(QuivError::InvalidLabel);
    }
    Ok(make_label(p, l.psi_exp, pack_m(p, &l.m)?))
}

fn weights(p: &Params) -> &Vec<u32> {
    p.quiv.weight.get_or_init(|| {
        (0..p.dsize())
            .map(|m| {
                let digits = unpack_m(p, m);
                let w: u64 = digits
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| (k as u64 + 1) * c)
                    .sum();
                (w % p.p) as u32
            })
            .collect()
    })
}

fn degrees(p: &Params) -> &Vec<u16> {
    p.quiv
        .degree
        .get_or_init(|| (0..p.dsize()).map(|m| unpack_m(p, m).iter().sum::<u64>() as u16).collect())
}

/// `wt(m) = sum_s s m_s mod p`.
#[inline]
pub fn m_weight(p: &Params, m: u32) -> u64 {
    weights(p)[m as usize] as u64
}

/// Total multiplicity `|m|`.
#[inline]
pub fn m_degree(p: &Params, m: u32) -> usize {
    degrees(p)[m as usize] as usize
}

pub fn label_degree(p: &Params, idx: u32) -> usize {
    m_degree(p, label_m(p, idx))
}

/// Terminal vertex `psi + wt(m)`.
pub fn label_target(p: &Params, idx: u32) -> u64 {
    (label_psi(p, idx) + m_weight(p, label_m(p, idx))) % p.p
}

/// Digitwise sum, `None` when some multiplicity exceeds `l - 1`.
#[inline]
pub fn m_add(p: &Params, m: u32, n: u32) -> Option<u32> {
    if p.ell == 2 {
        return if m & n == 0 { Some(m | n) } else { None };
    }
    let ell = p.ell as u32;
    let (mut a, mut b) = (m, n);
    let mut out = 0u32;
    let mut place = 1u32;
    while a > 0 || b > 0 {
        let s = a % ell + b % ell;
        if s >= ell {
            return None;
        }
        out += s * place;
        place *= ell;
        a /= ell;
        b /= ell;
    }
    Some(out)
}

/// Product of two basis labels, `None` for zero.
#[inline]
pub fn label_mul(p: &Params, u: u32, v: u32) -> Option<u32> {
    if label_psi(p, v) != label_target(p, u) {
        return None;
    }
    m_add(p, label_m(p, u), label_m(p, v)).map(|m| make_label(p, label_psi(p, u), m))
}

/// `u^(g_i^t)`: vertex and steps multiplied by `g0^-t`.
#[inline]
pub fn label_act(p: &Params, idx: u32, t: i64) -> u32 {
    let t = t.rem_euclid(p.r as i64) as u64;
    if t == 0 {
        return idx;
    }
    let back = (p.r - t) % p.r;
    let psi = label_psi(p, idx) * p.local.g0_pow(back) % p.p;
    let m = p.local.d_scale(label_m(p, idx), back);
    make_label(p, psi, m)
}

/// Element of `A_i` in the label basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuivAElem {
    pub side: u8,
    terms: HashMap<u32, FieldElem>,
}

impl QuivAElem {
    pub fn zero(side: u8) -> Self {
        QuivAElem {
            side,
            terms: HashMap::new(),
        }
    }

    pub fn basis(side: u8, idx: u32) -> Self {
        let mut e = QuivAElem::zero(side);
        e.terms.insert(idx, FieldElem::ONE);
        e
    }

    /// `1 = sum_psi e_psi`.
    pub fn one(p: &Params, side: u8) -> Self {
        let mut e = QuivAElem::zero(side);
        for psi in 0..p.p {
            e.terms.insert(make_label(p, psi, 0), FieldElem::ONE);
        }
        e
    }

    /// `e_psi`.
    pub fn idempotent(p: &Params, side: u8, psi: u64) -> Self {
        QuivAElem::basis(side, make_label(p, psi, 0))
    }

    /// `s_(psi, phi_s)`.
    pub fn arrow(p: &Params, side: u8, psi: u64, s: u64) -> Self {
        QuivAElem::basis(side, make_label(p, psi, unit_m(p, s)))
    }

    /// `s_(phi_s) = sum_psi s_(psi, phi_s)`.
    pub fn s_phi(p: &Params, side: u8, s: u64) -> Self {
        let mut e = QuivAElem::zero(side);
        for psi in 0..p.p {
            e.terms.insert(make_label(p, psi, unit_m(p, s)), FieldElem::ONE);
        }
        e
    }

    pub fn add_term(&mut self, f: &FieldContext, idx: u32, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(idx).or_insert(FieldElem::ZERO);
        *e = f.add(*e, c);
        if e.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn coeff(&self, idx: u32) -> FieldElem {
        self.terms.get(&idx).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, FieldElem)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn sorted_terms(&self) -> Vec<(u32, FieldElem)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_unstable_by_key(|t| t.0);
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

    pub fn add(&self, f: &FieldContext, other: &QuivAElem) -> QuivAElem {
        assert_eq!(self.side, other.side);
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(f, k, c);
        }
        out
    }

    pub fn scale(&self, f: &FieldContext, s: FieldElem) -> QuivAElem {
        let mut out = QuivAElem::zero(self.side);
        for (k, c) in self.terms() {
            out.add_term(f, k, f.mul(c, s));
        }
        out
    }

    pub fn to_json(&self, p: &Params) -> serde_json::Value {
        serde_json::Value::Array(
            self.sorted_terms()
                .into_iter()
                .map(|(k, c)| {
                    serde_json::json!({
                        "label": to_quiv_label(p, self.side, k),
                        "coeff": p.f().coeffs(c),
                    })
                })
                .collect(),
        )
    }
}

pub fn qa_mul(p: &Params, u: &QuivAElem, v: &QuivAElem) -> Result<QuivAElem, QuivError> {
    if u.side != v.side {
        return Err(QuivError::SideMismatch(u.side, v.side));
    }
    let f = p.f();
    let mut out = QuivAElem::zero(u.side);
    for (a, ca) in u.terms() {
        for (b, cb) in v.terms() {
            if let Some(k) = label_mul(p, a, b) {
                out.add_term(f, k, f.mul(ca, cb));
            }
        }
    }
    Ok(out)
}

/// Dense `S^m = prod_s s_(phi_s)^(m_s)` in `kD_i`, for every `m`.
fn monomials(p: &Params) -> &Vec<Vec<FieldElem>> {
    p.quiv.monomials.get_or_init(|| {
        let f = p.f();
        let lg = &p.local;
        let ds = p.dsize() as usize;
        let steps: Vec<Vec<(u32, FieldElem)>> = (0..p.p)
            .map(|s| {
                (0..p.p)
                    .map(|g| (lg.d_basis(g), p.zeta_p_pow(-((s * g) as i64))))
                    .collect()
            })
            .collect();
        let mut out: Vec<Vec<FieldElem>> = Vec::with_capacity(ds);
        let mut one = vec![FieldElem::ZERO; ds];
        one[0] = FieldElem::ONE;
        out.push(one);
        for m in 1..ds as u32 {
            let mut k = 0u32;
            let mut rest = m;
            while rest % p.ell as u32 == 0 {
                rest /= p.ell as u32;
                k += 1;
            }
            let prev = &out[(m - (p.ell as u32).pow(k)) as usize];
            let mut next = vec![FieldElem::ZERO; ds];
            for (w, c) in prev.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &(dg, z) in &steps[k as usize + 1] {
                    let t = lg.d_add(w as u32, dg) as usize;
                    next[t] = f.add(next[t], f.mul(*c, z));
                }
            }
            out.push(next);
        }
        out
    })
}

/// Dense image of a basis label in `k[D_i x| P_i]` (local index).
pub fn embed_label_local(p: &Params, idx: u32) -> LocalVec {
    let f = p.f();
    let lg = &p.local;
    let ds = p.dsize();
    let psi = label_psi(p, idx) as i64;
    let sm = &monomials(p)[label_m(p, idx) as usize];
    let inv_p = f.inv(f.from_int(p.p as i64)).unwrap();
    let mut out = local_zero(p);
    // e_psi S^m = sum_y p^-1 psi(-y) y d(w) = sum_y p^-1 psi(-y) d(w^(y^-1)) y
    for y in 0..p.p {
        let c = f.mul(inv_p, p.zeta_p_pow(-psi * y as i64));
        for (w, a) in sm.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let moved = lg.d_translate(w as u32, p.p - y);
            out[(y as u32 * ds + moved) as usize] = f.mul(c, *a);
        }
    }
    out
}

pub fn embed_local(p: &Params, u: &QuivAElem) -> LocalVec {
    let f = p.f();
    let mut out = local_zero(p);
    for (k, c) in u.terms() {
        crate::block::local_add_scaled(f, &mut out, &embed_label_local(p, k), c);
    }
    out
}

pub fn qa_embed(p: &Params, u: &QuivAElem) -> GAElem {
    local_to_ga(p, u.side as usize, &embed_local(p, u))
}

fn extraction_matrix(p: &Params) -> &Matrix {
    p.quiv.extract.get_or_init(|| {
        let f = p.f();
        let ds = p.dsize() as usize;
        let mons = monomials(p);
        let mut m = Matrix::zeros(ds, ds);
        for (col, v) in mons.iter().enumerate() {
            for (row, c) in v.iter().enumerate() {
                m.set(row, col, *c);
            }
        }
        m.inverse(f).expect("monomials form a basis of kD")
    })
}

/// Label coefficients (dense, by label index) of a dense element of
/// `k[D_i x| P_i]`.
pub fn extract_local(p: &Params, x: &[FieldElem]) -> Vec<FieldElem> {
    let f = p.f();
    let ds = p.dsize() as usize;
    let pp = p.p as usize;
    let minv = extraction_matrix(p);
    // x = sum_y x_y y with x_y = sum_m f_m(y) S^m
    let mut fm = vec![FieldElem::ZERO; pp * ds];
    for y in 0..pp {
        let xy = &x[y * ds..(y + 1) * ds];
        if xy.iter().all(|c| c.is_zero()) {
            continue;
        }
        let coeffs = minv.mul_vec(f, xy);
        for (m, c) in coeffs.into_iter().enumerate() {
            fm[m * pp + y] = c;
        }
    }
    // S^m sum_y f_m(y) y = S^m sum_mu c'_(m,mu) e_mu, and e_psi S^m = S^m e_(psi + wt m)
    let mut out = vec![FieldElem::ZERO; pp * ds];
    for m in 0..ds {
        let row = &fm[m * pp..(m + 1) * pp];
        if row.iter().all(|c| c.is_zero()) {
            continue;
        }
        let wt = m_weight(p, m as u32);
        for mu in 0..p.p {
            let mut acc = FieldElem::ZERO;
            for (y, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    acc = f.add(acc, f.mul(*c, p.zeta_p_pow((mu * y as u64) as i64)));
                }
            }
            let psi = (mu + p.p - wt) % p.p;
            out[(psi as usize) * ds + m] = acc;
        }
    }
    out
}

pub fn qa_extract(p: &Params, side: u8, x: &GAElem) -> Result<QuivAElem, QuivError> {
    let local = local_from_ga(p, side as usize, x).ok_or(QuivError::NotInLocalGroup(side))?;
    let coeffs = extract_local(p, &local);
    let mut out = QuivAElem::zero(side);
    for (k, c) in coeffs.into_iter().enumerate() {
        out.add_term(p.f(), k as u32, c);
    }
    Ok(out)
}

/// Action of `g_i^t` on the label basis.
pub fn qa_act(p: &Params, u: &QuivAElem, t: i64) -> QuivAElem {
    let f = p.f();
    let mut out = QuivAElem::zero(u.side);
    for (k, c) in u.terms() {
        out.add_term(f, label_act(p, k, t), c);
    }
    out
}

pub fn qa_l_action(p: &Params, u: &QuivAElem, w: &GroupElem) -> Result<QuivAElem, QuivError> {
    let (in_l, t) = match u.side {
        1 => (w.b == 0 && w.c == 0, w.a),
        _ => (w.a == 0 && w.c == 0, w.b),
    };
    let trivial_n = w.v1 == 0 && w.x1 == 0 && w.v2 == 0 && w.x2 == 0;
    if !(trivial_n && in_l) {
        return Err(QuivError::NotInL(u.side));
    }
    Ok(qa_act(p, u, t as i64))
}

/// `r^-1 sum_t chi(g^-t) u^(g^t)`.
pub fn qa_isotypic(p: &Params, u: &QuivAElem, chi: &Character) -> Result<QuivAElem, QuivError> {
    let expected = if u.side == 1 { CharGroup::L1 } else { CharGroup::L2 };
    if chi.group != expected {
        return Err(QuivError::WrongCharacter(u.side));
    }
    let f = p.f();
    let inv_r = f.inv(f.from_int(p.r as i64)).unwrap();
    let mut out = QuivAElem::zero(u.side);
    for t in 0..p.r as i64 {
        let w = f.mul(inv_r, chi.value_at_power(p, -t));
        for (k, c) in u.terms() {
            out.add_term(f, label_act(p, k, t), f.mul(c, w));
        }
    }
    Ok(out)
}

pub fn qa_degree(p: &Params, u: &QuivAElem) -> Result<usize, QuivError> {
    u.terms()
        .map(|(k, _)| label_degree(p, k))
        .min()
        .ok_or(QuivError::ZeroElement)
}

/// Distinct nonzero radical monomials, enumerated as paths of arrows
/// starting at the trivial vertex modulo the commutation relations.
pub fn radical_monomial_classes(p: &Params) -> usize {
    let mut seen = std::collections::HashSet::new();
    let start = make_label(p, 0, 0);
    let mut frontier = vec![start];
    while let Some(u) = frontier.pop() {
        let tgt = label_target(p, u);
        for s in 1..p.p {
            if let Some(v) = label_mul(p, u, make_label(p, tgt, unit_m(p, s))) {
                if seen.insert(label_m(p, v)) {
                    frontier.push(v);
                }
            }
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::{local_act, local_mul};
    use crate::galg::ga_mul;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_qa(p: &Params, rng: &mut ChaCha8Rng, side: u8, n: usize) -> QuivAElem {
        let f = p.f();
        let mut u = QuivAElem::zero(side);
        for _ in 0..n {
            u.add_term(
                f,
                rng.gen_range(0..label_count(p)),
                f.from_index(rng.gen_range(1..f.order())),
            );
        }
        u
    }

    #[test]
    fn counts() {
        let p = Params::new(2, 7, 3).unwrap();
        assert_eq!(label_count(&p), 448);
        assert_eq!(radical_monomial_classes(&p), 63);
        let q = Params::new(3, 5, 2).unwrap();
        assert_eq!(label_count(&q), 405);
        assert_eq!(radical_monomial_classes(&q), 80);
    }

    #[test]
    fn product_rules() {
        let p = Params::new(2, 7, 3).unwrap();
        let f = p.f();
        let e = |psi| QuivAElem::idempotent(&p, 1, psi);
        assert_eq!(qa_mul(&p, &e(2), &e(2)).unwrap(), e(2));
        assert!(qa_mul(&p, &e(2), &e(3)).unwrap().is_zero());
        let s = |psi, phi| QuivAElem::arrow(&p, 1, psi, phi);
        // l = 2: s_(1,phi) s_(phi,phi) = 0
        assert!(qa_mul(&p, &s(0, 3), &s(3, 3)).unwrap().is_zero());
        // commutativity relation
        let lhs = qa_mul(&p, &s(0, 2), &s(2, 5)).unwrap();
        let rhs = qa_mul(&p, &s(0, 5), &s(5, 2)).unwrap();
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_zero());
        assert!(qa_mul(&p, &e(0), &QuivAElem::zero(2)).is_err());
        let one = QuivAElem::one(&p, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_qa(&p, &mut rng, 1, 6);
        assert_eq!(qa_mul(&p, &one, &u).unwrap(), u);
        assert_eq!(qa_mul(&p, &u, &one).unwrap(), u);
        let maximal = QuivAElem::basis(1, make_label(&p, 0, p.dsize() - 1));
        assert_eq!(qa_degree(&p, &maximal).unwrap(), 6);
        assert_eq!(qa_degree(&p, &s(1, 1)).unwrap(), 1);
        assert_eq!(qa_degree(&p, &e(4)).unwrap(), 0);
        assert!(qa_degree(&p, &QuivAElem::zero(1)).is_err());
        let tgt = label_target(&p, make_label(&p, 0, p.dsize() - 1));
        for s2 in 1..7 {
            assert!(qa_mul(&p, &maximal, &s(tgt, s2)).unwrap().is_zero());
        }
        let _ = f;
    }

    #[test]
    fn embedding_examples() {
        let p = Params::new(2, 7, 3).unwrap();
        let f = p.f();
        let inv7 = f.inv(f.from_int(7)).unwrap();
        let e3 = qa_embed(&p, &QuivAElem::idempotent(&p, 1, 3));
        assert_eq!(e3.len(), 7);
        for y in 0..7 {
            assert_eq!(
                e3.coeff(&p.p_elem(1, y)),
                f.mul(inv7, p.zeta_p_pow(-3 * y as i64))
            );
        }
        let s = qa_embed(&p, &QuivAElem::s_phi(&p, 2, 1));
        let mut expect = GAElem::zero();
        for g in 0..7u64 {
            expect.add_term(f, p.d_gen(2, g), p.zeta_p_pow(-(g as i64)));
        }
        assert_eq!(s, expect);
        let aug = f.sum(s.terms().map(|(_, c)| *c));
        assert!(aug.is_zero());
    }

    #[test]
    fn embedding_is_multiplicative_sampled() {
        for (l, pp, r) in [(2, 7, 3), (3, 5, 2)] {
            let p = Params::new(l, pp, r).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..60 {
                let u = random_qa(&p, &mut rng, 1, 2);
                let v = random_qa(&p, &mut rng, 1, 2);
                let lhs = embed_local(&p, &qa_mul(&p, &u, &v).unwrap());
                let rhs = local_mul(&p, &embed_local(&p, &u), &embed_local(&p, &v));
                assert_eq!(lhs, rhs);
            }
            let u = random_qa(&p, &mut rng, 2, 2);
            let v = random_qa(&p, &mut rng, 2, 2);
            assert_eq!(
                qa_embed(&p, &qa_mul(&p, &u, &v).unwrap()),
                ga_mul(&p, &qa_embed(&p, &u), &qa_embed(&p, &v))
            );
        }
    }

    #[test]
    fn extraction_round_trip() {
        for (l, pp, r) in [(2, 7, 3), (3, 5, 2)] {
            let p = Params::new(l, pp, r).unwrap();
            let f = p.f();
            for k in 0..label_count(&p) {
                let x = embed_label_local(&p, k);
                let c = extract_local(&p, &x);
                for (i, v) in c.iter().enumerate() {
                    let want = if i as u32 == k { f.one() } else { f.zero() };
                    assert_eq!(*v, want, "label {k} coordinate {i}");
                }
            }
            let one = qa_extract(&p, 1, &GAElem::one()).unwrap();
            assert_eq!(one, QuivAElem::one(&p, 1));
            let mut aug = GAElem::basis(p.d_gen(1, 0));
            aug.add_term(f, p.identity(), f.neg(f.one()));
            let x = qa_extract(&p, 1, &aug).unwrap();
            assert!(qa_degree(&p, &x).unwrap() >= 1);
            assert!(qa_extract(&p, 1, &GAElem::basis(p.h_elem(1, 0, 0))).is_err());
        }
    }

    #[test]
    fn l_action_and_isotypic() {
        for (l, pp, r) in [(2, 7, 3), (3, 5, 2)] {
            let p = Params::new(l, pp, r).unwrap();
            let f = p.f();
            let mut rng = ChaCha8Rng::seed_from_u64(8);
            for side in [1u8, 2] {
                let grp = if side == 1 { CharGroup::L1 } else { CharGroup::L2 };
                for _ in 0..20 {
                    let u = random_qa(&p, &mut rng, side, 3);
                    let t = rng.gen_range(0..r as i64);
                    let w = if side == 1 { p.h_elem(t, 0, 0) } else { p.h_elem(0, t, 0) };
                    let acted = qa_l_action(&p, &u, &w).unwrap();
                    assert_eq!(
                        embed_local(&p, &acted),
                        local_act(&p, &embed_local(&p, &u), t)
                    );
                    let mut total = QuivAElem::zero(side);
                    for chi in Character::all(&p, grp) {
                        let proj = qa_isotypic(&p, &u, &chi).unwrap();
                        total = total.add(f, &proj);
                        let moved = qa_act(&p, &proj, 1);
                        assert_eq!(moved, proj.scale(f, chi.value_at_power(&p, 1)));
                        assert_eq!(qa_isotypic(&p, &proj, &chi).unwrap(), proj);
                    }
                    assert_eq!(total, u);
                }
                assert!(qa_l_action(&p, &QuivAElem::one(&p, side), &p.h_elem(0, 0, 1)).is_err());
            }
            // e_1 is L-invariant; the trivial projection of e_psi is r^-1 times its orbit sum
            let e1 = QuivAElem::idempotent(&p, 1, 0);
            assert_eq!(qa_isotypic(&p, &e1, &Character::trivial(CharGroup::L1)).unwrap(), e1);
            let inv_r = f.inv(f.from_int(r as i64)).unwrap();
            let mut orbit = QuivAElem::zero(1);
            for t in 0..r {
                orbit.add_term(f, make_label(&p, p.local.g0_pow(t), 0), inv_r);
            }
            assert_eq!(
                qa_isotypic(&p, &QuivAElem::idempotent(&p, 1, 1), &Character::trivial(CharGroup::L1))
                    .unwrap(),
                orbit
            );
        }
    }
}
