//! Sparse elements of the group algebra `kG`, the Frobenius twist and the
//! block idempotent `e_theta`.

use std::collections::HashMap;

use thiserror::Error;

use crate::chr::{char_idempotent, CharError, CharGroup, Character};
use crate::ff::{FieldContext, FieldElem};
use crate::grp::{GroupElem, Params, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GalgError {
    #[error("element is not in the block: x e_theta != x")]
    NotInBlock,
    #[error(transparent)]
    Char(#[from] CharError),
}

/// Finitely supported map `G -> F`, zero coefficients never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GAElem {
    terms: HashMap<GroupElem, FieldElem>,
}

impl GAElem {
    pub fn zero() -> Self {
        GAElem::default()
    }

    pub fn one() -> Self {
        GAElem::basis(GroupElem::IDENTITY)
    }

    pub fn basis(g: GroupElem) -> Self {
        let mut terms = HashMap::new();
        terms.insert(g, FieldElem::ONE);
        GAElem { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (GroupElem, FieldElem)>>(f: &FieldContext, it: I) -> Self {
        let mut out = GAElem::zero();
        for (g, c) in it {
            out.add_term(f, g, c);
        }
        out
    }

    pub fn add_term(&mut self, f: &FieldContext, g: GroupElem, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_insert(FieldElem::ZERO);
        *entry = f.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn coeff(&self, g: &GroupElem) -> FieldElem {
        self.terms.get(g).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElem, &FieldElem)> {
        self.terms.iter()
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

    pub fn add(&self, f: &FieldContext, other: &GAElem) -> GAElem {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(f, *g, *c);
        }
        out
    }

    pub fn sub(&self, f: &FieldContext, other: &GAElem) -> GAElem {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(f, *g, f.neg(*c));
        }
        out
    }

    pub fn scale(&self, f: &FieldContext, s: FieldElem) -> GAElem {
        GAElem::from_terms(f, self.terms.iter().map(|(g, c)| (*g, f.mul(*c, s))))
    }

    /// Image under a map of group elements, extended linearly.
    pub fn map_elems<M: Fn(&GroupElem) -> GroupElem>(&self, f: &FieldContext, m: M) -> GAElem {
        GAElem::from_terms(f, self.terms.iter().map(|(g, c)| (m(g), *c)))
    }

    /// `x^h = h^-1 x h`.
    pub fn conjugate(&self, p: &Params, h: &GroupElem) -> GAElem {
        let h_inv = p.inv(h);
        self.map_elems(p.f(), |g| p.mul(&p.mul(&h_inv, g), h))
    }

    /// Terms in lexicographic order of the serialized tuple.
    pub fn sorted_terms(&self, p: &Params) -> Vec<(GroupElem, FieldElem)> {
        let mut v: Vec<_> = self.terms.iter().map(|(g, c)| (*g, *c)).collect();
        v.sort_by_cached_key(|(g, _)| {
            (
                p.local.unpack(g.v1),
                g.x1,
                p.local.unpack(g.v2),
                g.x2,
                g.a,
                g.b,
                g.c,
            )
        });
        v
    }

    /// JSON array of `{elem, coeff}` in canonical order; coefficients as
    /// little-endian coefficient arrays.
    pub fn to_json(&self, p: &Params) -> serde_json::Value {
        serde_json::Value::Array(
            self.sorted_terms(p)
                .into_iter()
                .map(|(g, c)| {
                    serde_json::json!({
                        "elem": p.elem_json(&g),
                        "coeff": p.f().coeffs(c),
                    })
                })
                .collect(),
        )
    }
}

pub fn ga_mul(p: &Params, x: &GAElem, y: &GAElem) -> GAElem {
    let f = p.f();
    let mut out = GAElem::zero();
    for (g, a) in &x.terms {
        for (h, b) in &y.terms {
            out.add_term(f, p.mul(g, h), f.mul(*a, *b));
        }
    }
    out
}

/// `sigma`: coefficients raised to the `l`-th power, group elements fixed.
pub fn ga_frobenius_twist(p: &Params, x: &GAElem) -> GAElem {
    let f = p.f();
    GAElem::from_terms(f, x.terms.iter().map(|(g, c)| (*g, f.frobenius(*c, 1))))
}

/// `e_theta` for a faithful `theta` on `Z`.
pub fn block_idempotent(p: &Params, theta: &Character) -> Result<GAElem, GalgError> {
    if theta.group != CharGroup::Z {
        return Err(CharError::WrongGroup {
            expected: "Z",
            got: theta.group,
        }
        .into());
    }
    if !theta.is_faithful(p) {
        return Err(CharError::NotFaithful(*theta).into());
    }
    Ok(char_idempotent(p, theta))
}

/// Whether `x in kG e_theta` commutes with `h e_theta` for `h` in
/// `{g1, g2, gz}`.
pub fn centralizes_block_h(p: &Params, theta: &Character, x: &GAElem) -> Result<bool, GalgError> {
    let e = block_idempotent(p, theta)?;
    if ga_mul(p, x, &e) != *x {
        return Err(GalgError::NotInBlock);
    }
    for h in p.generators(Subgroup::H) {
        let he = ga_mul(p, &GAElem::basis(h), &e);
        if ga_mul(p, x, &he) != ga_mul(p, &he, x) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sparse(p: &Params, rng: &mut ChaCha8Rng, n: usize) -> GAElem {
        let f = p.f();
        GAElem::from_terms(
            f,
            (0..n).map(|_| (p.random_elem(rng), f.from_index(rng.gen_range(0..f.order())))),
        )
    }

    #[test]
    fn algebra_laws() {
        let p = Params::new(2, 7, 3).unwrap();
        let f = p.f();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let x = random_sparse(&p, &mut rng, 4);
            let y = random_sparse(&p, &mut rng, 4);
            let z = random_sparse(&p, &mut rng, 4);
            assert_eq!(ga_mul(&p, &GAElem::one(), &x), x);
            assert_eq!(
                ga_mul(&p, &ga_mul(&p, &x, &y), &z),
                ga_mul(&p, &x, &ga_mul(&p, &y, &z))
            );
            assert_eq!(
                ga_mul(&p, &x.add(f, &y), &z),
                ga_mul(&p, &x, &z).add(f, &ga_mul(&p, &y, &z))
            );
        }
    }

    #[test]
    fn frobenius_twist() {
        let p = Params::new(2, 7, 3).unwrap();
        let f = p.f();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let x = random_sparse(&p, &mut rng, 3);
            let y = random_sparse(&p, &mut rng, 3);
            assert_eq!(
                ga_frobenius_twist(&p, &ga_mul(&p, &x, &y)),
                ga_mul(&p, &ga_frobenius_twist(&p, &x), &ga_frobenius_twist(&p, &y))
            );
            let mut z = x.clone();
            for _ in 0..p.d {
                z = ga_frobenius_twist(&p, &z);
            }
            assert_eq!(z, x);
        }
        let prime = GAElem::from_terms(f, [(p.h_elem(1, 2, 0), f.one())]);
        assert_eq!(ga_frobenius_twist(&p, &prime), prime);
        let t1 = Character::new(&p, CharGroup::Z, 1);
        let t2 = Character::new(&p, CharGroup::Z, 2);
        assert_eq!(
            ga_frobenius_twist(&p, &block_idempotent(&p, &t1).unwrap()),
            block_idempotent(&p, &t2).unwrap()
        );
    }

    #[test]
    fn block_idempotent_properties() {
        let p = Params::new(2, 7, 3).unwrap();
        let t1 = Character::new(&p, CharGroup::Z, 1);
        let t2 = Character::new(&p, CharGroup::Z, 2);
        let e1 = block_idempotent(&p, &t1).unwrap();
        let e2 = block_idempotent(&p, &t2).unwrap();
        assert_eq!(ga_mul(&p, &e1, &e1), e1);
        assert!(ga_mul(&p, &e1, &e2).is_zero());
        for g in p.generators(Subgroup::G) {
            let b = GAElem::basis(g);
            assert_eq!(ga_mul(&p, &b, &e1), ga_mul(&p, &e1, &b));
        }
        assert!(block_idempotent(&p, &Character::trivial(CharGroup::Z)).is_err());
        assert!(centralizes_block_h(&p, &t1, &e1).unwrap());
        let g1e = ga_mul(&p, &GAElem::basis(p.h_elem(1, 0, 0)), &e1);
        assert!(!centralizes_block_h(&p, &t1, &g1e).unwrap());
        assert_eq!(
            centralizes_block_h(&p, &t1, &GAElem::one()),
            Err(GalgError::NotInBlock)
        );
    }
}
