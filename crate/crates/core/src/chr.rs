//! Linear characters of the cyclic subgroups `Z, L1, L2, P1, P2`.
//!
//! A character is an exponent `e` against the subgroup's fixed generator:
//! `chi(gen^t) = zeta^(e t)` with `zeta = zeta_r` for `Z, L_i` and
//! `zeta_p` for `P_i` (generator `1 in F_p`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::ff::FieldElem;
use crate::galg::GAElem;
use crate::grp::{GroupElem, Params, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CharGroup {
    Z,
    L1,
    L2,
    P1,
    P2,
}

impl CharGroup {
    pub fn subgroup(self) -> Subgroup {
        match self {
            CharGroup::Z => Subgroup::Z,
            CharGroup::L1 => Subgroup::L1,
            CharGroup::L2 => Subgroup::L2,
            CharGroup::P1 => Subgroup::P1,
            CharGroup::P2 => Subgroup::P2,
        }
    }

    pub fn order(self, p: &Params) -> u64 {
        match self {
            CharGroup::P1 | CharGroup::P2 => p.p,
            _ => p.r,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("group element is not in {0:?}")]
    NotInSubgroup(CharGroup),
    #[error("character {0:?} is not faithful")]
    NotFaithful(Character),
    #[error("expected a character of {expected}, got {got:?}")]
    WrongGroup { expected: &'static str, got: CharGroup },
    #[error("no element h with theta([h, -]) = chi")]
    NoHElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub group: CharGroup,
    pub e: u64,
}

impl Character {
    pub fn new(p: &Params, group: CharGroup, e: i64) -> Self {
        let n = group.order(p) as i64;
        Character {
            group,
            e: e.rem_euclid(n) as u64,
        }
    }

    pub fn trivial(group: CharGroup) -> Self {
        Character { group, e: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.e == 0
    }

    pub fn is_faithful(&self, p: &Params) -> bool {
        arith::gcd(self.e, self.group.order(p)) == 1
    }

    pub fn mul(&self, p: &Params, other: &Character) -> Character {
        assert_eq!(self.group, other.group);
        Character::new(p, self.group, (self.e + other.e) as i64)
    }

    pub fn inverse(&self, p: &Params) -> Character {
        Character::new(p, self.group, -(self.e as i64))
    }

    /// All characters of the group, by exponent.
    pub fn all(p: &Params, group: CharGroup) -> Vec<Character> {
        (0..group.order(p))
            .map(|e| Character { group, e })
            .collect()
    }

    /// `zeta^(e t)`: value on the `t`-th power of the fixed generator.
    pub fn value_at_power(&self, p: &Params, t: i64) -> FieldElem {
        let k = (self.e as i64 % self.group.order(p) as i64) * t.rem_euclid(self.group.order(p) as i64);
        match self.group {
            CharGroup::P1 | CharGroup::P2 => p.zeta_p_pow(k),
            _ => p.zeta_r_pow(k),
        }
    }
}

/// Exponent of `g` with respect to the fixed generator of `group`, if `g`
/// lies in it.
fn coordinate(p: &Params, group: CharGroup, g: &GroupElem) -> Option<u64> {
    if !p.contains(group.subgroup(), g) {
        return None;
    }
    Some(match group {
        CharGroup::Z => g.c as u64,
        CharGroup::L1 => g.a as u64,
        CharGroup::L2 => g.b as u64,
        CharGroup::P1 => g.x1 as u64,
        CharGroup::P2 => g.x2 as u64,
    })
}

pub fn char_eval(p: &Params, chi: &Character, g: &GroupElem) -> Result<FieldElem, CharError> {
    let t = coordinate(p, chi.group, g).ok_or(CharError::NotInSubgroup(chi.group))?;
    Ok(chi.value_at_power(p, t as i64))
}

/// `e_chi = |S|^-1 sum_{g in S} chi(g^-1) g`.
pub fn char_idempotent(p: &Params, chi: &Character) -> GAElem {
    let f = p.f();
    let elems = p
        .subgroup_elements(chi.group.subgroup())
        .expect("cyclic subgroups are enumerable");
    let inv_n = f.inv(f.from_int(elems.len() as i64)).expect("l' order");
    let mut out = GAElem::zero();
    for g in elems {
        let val = char_eval(p, chi, &p.inv(&g)).unwrap();
        out.add_term(f, g, f.mul(inv_n, val));
    }
    out
}

/// `chi^g` for `g = g_i^t` acting on `P_i`: `chi^g(h) = chi(h^(g^-1))`,
/// which multiplies the exponent by `g0^-t`. Characters of other groups are
/// fixed.
pub fn char_conjugate(p: &Params, chi: &Character, t: i64) -> Character {
    match chi.group {
        CharGroup::P1 | CharGroup::P2 => {
            let u = p.local.g0_pow(t.rem_euclid(p.r as i64) as u64);
            let u_inv = arith::inv_mod(u, p.p).unwrap();
            Character::new(p, chi.group, (arith::mul_mod(chi.e, u_inv, p.p)) as i64)
        }
        _ => *chi,
    }
}

/// Exponent multiplied by `l^m`: the character `chi^(l^m)`.
pub fn char_frob_power(p: &Params, chi: &Character, m: u64) -> Character {
    let n = chi.group.order(p);
    let k = arith::pow_mod(p.ell, m, n);
    Character {
        group: chi.group,
        e: arith::mul_mod(chi.e, k, n),
    }
}

fn check_theta(p: &Params, theta: &Character) -> Result<(), CharError> {
    if theta.group != CharGroup::Z {
        return Err(CharError::WrongGroup {
            expected: "Z",
            got: theta.group,
        });
    }
    if !theta.is_faithful(p) {
        return Err(CharError::NotFaithful(*theta));
    }
    Ok(())
}

/// The unique `h in L_j` (`j != i`) with `theta([h, g]) = chi(g)` for all
/// `g in L_i`, found by exhaustive search.
pub fn h_element(p: &Params, theta: &Character, chi: &Character) -> Result<GroupElem, CharError> {
    check_theta(p, theta)?;
    let (other, gen_i) = match chi.group {
        CharGroup::L1 => (Subgroup::L2, p.h_elem(1, 0, 0)),
        CharGroup::L2 => (Subgroup::L1, p.h_elem(0, 1, 0)),
        g => {
            return Err(CharError::WrongGroup {
                expected: "L1 or L2",
                got: g,
            })
        }
    };
    let target = chi.value_at_power(p, 1);
    let mut found = None;
    for h in p.subgroup_elements(other).unwrap() {
        // checking on the generator suffices: both sides are characters of L_i
        let comm = p.commutator(&h, &gen_i);
        if char_eval(p, theta, &comm).unwrap() == target {
            if found.is_some() {
                return Err(CharError::NoHElement);
            }
            found = Some(h);
        }
    }
    found.ok_or(CharError::NoHElement)
}

/// Closed form of [`h_element`]: for `theta = theta_j`, `h_(chi_e, 1) =
/// g2^(-e/j)` and `h_(eta_f, 2) = g1^(f/j)`.
pub fn h_element_closed(p: &Params, theta: &Character, chi: &Character) -> Result<GroupElem, CharError> {
    check_theta(p, theta)?;
    let j_inv = arith::inv_mod(theta.e, p.r).unwrap();
    let k = arith::mul_mod(chi.e, j_inv, p.r) as i64;
    match chi.group {
        CharGroup::L1 => Ok(p.h_elem(0, -k, 0)),
        CharGroup::L2 => Ok(p.h_elem(k, 0, 0)),
        g => Err(CharError::WrongGroup {
            expected: "L1 or L2",
            got: g,
        }),
    }
}

/// `theta([h_(eta,2), h_(chi,1)])`, computed through group commutators.
pub fn pairing_value(
    p: &Params,
    theta: &Character,
    chi: &Character,
    eta: &Character,
) -> Result<FieldElem, CharError> {
    let h1 = h_element(p, theta, chi)?;
    let h2 = h_element(p, theta, eta)?;
    char_eval(p, theta, &p.commutator(&h2, &h1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galg::ga_mul;

    #[test]
    fn evaluation() {
        let p = Params::new(2, 7, 3).unwrap();
        let theta = Character::new(&p, CharGroup::Z, 1);
        assert_eq!(char_eval(&p, &theta, &p.h_elem(0, 0, 1)).unwrap(), p.zeta_r);
        let triv = Character::trivial(CharGroup::L1);
        assert_eq!(char_eval(&p, &triv, &p.h_elem(2, 0, 0)).unwrap(), p.f().one());
        assert!(char_eval(&p, &theta, &p.h_elem(1, 0, 0)).is_err());
        for s in 0..7 {
            let phi = Character::new(&p, CharGroup::P1, s);
            for x in 0..7 {
                assert_eq!(
                    char_eval(&p, &phi, &p.p_elem(1, x as u64)).unwrap(),
                    p.zeta_p_pow(s * x)
                );
            }
        }
    }

    #[test]
    fn conjugate_character_matches_definition() {
        for (l, pp, r) in [(2, 7, 3), (3, 5, 2), (2, 11, 5)] {
            let p = Params::new(l, pp, r).unwrap();
            for side in [1usize, 2] {
                let grp = if side == 1 { CharGroup::P1 } else { CharGroup::P2 };
                for s in 0..pp as i64 {
                    let phi = Character::new(&p, grp, s);
                    for t in 0..r as i64 {
                        let g = if side == 1 { p.h_elem(t, 0, 0) } else { p.h_elem(0, t, 0) };
                        let conj = char_conjugate(&p, &phi, t);
                        let g_inv = p.inv(&g);
                        for x in 0..pp {
                            let h = p.p_elem(side, x);
                            let lhs = char_eval(&p, &conj, &h).unwrap();
                            let rhs = char_eval(&p, &phi, &p.conjugate(&h, &g_inv)).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn idempotents() {
        let p = Params::new(2, 7, 3).unwrap();
        let f = p.f();
        let theta = Character::new(&p, CharGroup::Z, 1);
        let e = char_idempotent(&p, &theta);
        assert_eq!(ga_mul(&p, &e, &e), e);
        let third = f.inv(f.from_int(3)).unwrap();
        for c in 0..3 {
            assert_eq!(
                e.coeff(&p.h_elem(0, 0, c)),
                f.mul(third, p.zeta_r_pow(-c))
            );
        }
        for grp in [CharGroup::Z, CharGroup::L1, CharGroup::P2] {
            let chars = Character::all(&p, grp);
            let mut total = GAElem::zero();
            for a in &chars {
                let ea = char_idempotent(&p, a);
                total = total.add(f, &ea);
                for b in &chars {
                    let prod = ga_mul(&p, &ea, &char_idempotent(&p, b));
                    if a == b {
                        assert_eq!(prod, ea);
                    } else {
                        assert!(prod.is_zero());
                    }
                }
            }
            assert_eq!(total, GAElem::one());
        }
    }

    #[test]
    fn idempotent_conjugation() {
        let p = Params::new(2, 7, 3).unwrap();
        let g1 = p.h_elem(1, 0, 0);
        for s in 0..7 {
            let phi = Character::new(&p, CharGroup::P1, s);
            let lhs = char_idempotent(&p, &phi).conjugate(&p, &g1);
            let rhs = char_idempotent(&p, &char_conjugate(&p, &phi, 1));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn h_elements_search_matches_closed_form() {
        for (l, pp, r) in [(2, 7, 3), (3, 5, 2), (2, 11, 5), (5, 7, 6), (2, 13, 3)] {
            let p = Params::new(l, pp, r).unwrap();
            for theta in Character::all(&p, CharGroup::Z) {
                if !theta.is_faithful(&p) {
                    assert!(h_element(&p, &theta, &Character::trivial(CharGroup::L1)).is_err());
                    continue;
                }
                for grp in [CharGroup::L1, CharGroup::L2] {
                    for chi in Character::all(&p, grp) {
                        let h = h_element(&p, &theta, &chi).unwrap();
                        assert_eq!(h, h_element_closed(&p, &theta, &chi).unwrap());
                        // theta([h, g]) = chi(g) on every g, not only the generator
                        for g in p.subgroup_elements(grp.subgroup()).unwrap() {
                            let lhs = char_eval(&p, &theta, &p.commutator(&h, &g)).unwrap();
                            assert_eq!(lhs, char_eval(&p, &chi, &g).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn h_element_examples() {
        let p = Params::new(2, 7, 3).unwrap();
        let theta = Character::new(&p, CharGroup::Z, 1);
        let chi1 = Character::new(&p, CharGroup::L1, 1);
        let chi2 = Character::new(&p, CharGroup::L1, 2);
        assert_eq!(
            h_element(&p, &theta, &Character::trivial(CharGroup::L1)).unwrap(),
            p.identity()
        );
        let h1 = h_element(&p, &theta, &chi1).unwrap();
        assert_eq!(h1, p.h_elem(0, 2, 0));
        let h2 = h_element(&p, &theta, &chi2).unwrap();
        assert_eq!(p.mul(&h1, &h2), p.identity());
        let prod = h_element(&p, &theta, &chi1.mul(&p, &chi2)).unwrap();
        assert_eq!(prod, p.identity());
    }

    #[test]
    fn pairing_closed_form() {
        for (l, pp, r) in [(2, 7, 3), (2, 11, 5)] {
            let p = Params::new(l, pp, r).unwrap();
            for j in 1..r as i64 {
                let theta = Character::new(&p, CharGroup::Z, j);
                if !theta.is_faithful(&p) {
                    continue;
                }
                let j_inv = arith::inv_mod(j as u64, r).unwrap() as i64;
                for e in 0..r as i64 {
                    for f in 0..r as i64 {
                        let chi = Character::new(&p, CharGroup::L1, e);
                        let eta = Character::new(&p, CharGroup::L2, f);
                        assert_eq!(
                            pairing_value(&p, &theta, &chi, &eta).unwrap(),
                            p.zeta_r_pow(-e * f * j_inv)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_power() {
        let p = Params::new(2, 7, 3).unwrap();
        let t1 = Character::new(&p, CharGroup::Z, 1);
        assert_eq!(char_frob_power(&p, &t1, 0), t1);
        assert_eq!(char_frob_power(&p, &t1, 1), t1.inverse(&p));
        let q = Params::new(2, 11, 5).unwrap();
        let t1 = Character::new(&q, CharGroup::Z, 1);
        assert_eq!(char_frob_power(&q, &t1, 2).e, 4);
    }
}
