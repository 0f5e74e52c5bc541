//! Factored arithmetic in the block `kG e_theta`.
//!
//! Since `G = N x| H` with `N = N1 x N2`, `N_i = D_i x| P_i`, and `gz` acts on
//! `e_theta` by the scalar `theta(gz)`, every element of `kG e_theta` is a
//! sum of terms `(x (x) y) g1^a g2^b e_theta` with `x in kN1`, `y in kN2`.
//! Elements of `kN_i` are dense vectors over the local index of
//! [`crate::grp::LocalGroup`].

use std::collections::HashMap;

use crate::ff::{FieldContext, FieldElem};
use crate::galg::GAElem;
use crate::grp::{GroupElem, Params};

/// Dense element of `k[D_i x| P_i]`.
pub type LocalVec = Vec<FieldElem>;

pub fn local_zero(p: &Params) -> LocalVec {
    vec![FieldElem::ZERO; p.local.order() as usize]
}

pub fn local_basis(p: &Params, n: u32) -> LocalVec {
    let mut v = local_zero(p);
    v[n as usize] = FieldElem::ONE;
    v
}

pub fn local_one(p: &Params) -> LocalVec {
    local_basis(p, 0)
}

pub fn local_is_zero(x: &[FieldElem]) -> bool {
    x.iter().all(|c| c.is_zero())
}

fn support(x: &[FieldElem]) -> Vec<(u32, FieldElem)> {
    x.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as u32, *c))
        .collect()
}

/// Convolution in `k[D x| P]`.
pub fn local_mul(p: &Params, x: &[FieldElem], y: &[FieldElem]) -> LocalVec {
    let f = p.f();
    let lg = &p.local;
    let mut out = local_zero(p);
    let sy = support(y);
    for (n, a) in support(x) {
        for &(m, b) in &sy {
            let k = lg.mul_idx(n, m) as usize;
            out[k] = f.add(out[k], f.mul(a, b));
        }
    }
    out
}

/// `x^(g_i^t)`.
pub fn local_act(p: &Params, x: &[FieldElem], t: i64) -> LocalVec {
    let t = t.rem_euclid(p.r as i64) as u64;
    if t == 0 {
        return x.to_vec();
    }
    let mut out = local_zero(p);
    for (n, a) in support(x) {
        out[p.local.act_idx(n, t) as usize] = a;
    }
    out
}

pub fn local_add_scaled(f: &FieldContext, acc: &mut [FieldElem], x: &[FieldElem], s: FieldElem) {
    if s.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(x) {
        if !b.is_zero() {
            *a = f.add(*a, f.mul(*b, s));
        }
    }
}

pub fn local_scale(f: &FieldContext, x: &[FieldElem], s: FieldElem) -> LocalVec {
    x.iter().map(|c| f.mul(*c, s)).collect()
}

/// The element of `kG` supported on `N_side`.
pub fn local_to_ga(p: &Params, side: usize, x: &[FieldElem]) -> GAElem {
    GAElem::from_terms(
        p.f(),
        support(x).into_iter().map(|(n, c)| (p.from_local(side, n), c)),
    )
}

/// Inverse of [`local_to_ga`]; `None` when the support leaves `N_side`.
pub fn local_from_ga(p: &Params, side: usize, x: &GAElem) -> Option<LocalVec> {
    let mut out = local_zero(p);
    let ds = p.dsize();
    for (g, c) in x.terms() {
        let other_trivial = if side == 1 {
            g.v2 == 0 && g.x2 == 0
        } else {
            g.v1 == 0 && g.x1 == 0
        };
        if !(other_trivial && g.is_in_n()) {
            return None;
        }
        out[g.local(side, ds) as usize] = *c;
    }
    Some(out)
}

/// One summand `(x (x) y) g1^a g2^b e_theta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTerm {
    pub x: LocalVec,
    pub y: LocalVec,
    pub a: u32,
    pub b: u32,
}

/// Element of `kG e_theta`, `theta = theta_j`.
#[derive(Clone, Debug)]
pub struct BlockElem {
    pub j: u64,
    pub terms: Vec<BlockTerm>,
}

impl BlockElem {
    pub fn zero(j: u64) -> Self {
        BlockElem { j, terms: Vec::new() }
    }

    /// `e_theta`, the unit of the block.
    pub fn one(p: &Params, j: u64) -> Self {
        BlockElem {
            j,
            terms: vec![BlockTerm {
                x: local_one(p),
                y: local_one(p),
                a: 0,
                b: 0,
            }],
        }
    }

    pub fn from_tensor(j: u64, x: LocalVec, y: LocalVec, a: u32, b: u32) -> Self {
        BlockElem {
            j,
            terms: vec![BlockTerm { x, y, a, b }],
        }
    }

    pub fn add(&self, other: &BlockElem) -> BlockElem {
        assert_eq!(self.j, other.j);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        BlockElem { j: self.j, terms }
    }

    pub fn scale(&self, f: &FieldContext, s: FieldElem) -> BlockElem {
        BlockElem {
            j: self.j,
            terms: self
                .terms
                .iter()
                .map(|t| BlockTerm {
                    x: local_scale(f, &t.x, s),
                    y: t.y.clone(),
                    a: t.a,
                    b: t.b,
                })
                .collect(),
        }
    }

    /// `theta(gz^c)`.
    fn z_scalar(&self, p: &Params, c: i64) -> FieldElem {
        p.zeta_r_pow(self.j as i64 * c)
    }

    pub fn mul(&self, p: &Params, other: &BlockElem) -> BlockElem {
        assert_eq!(self.j, other.j);
        let f = p.f();
        let r = p.r as i64;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for s in &self.terms {
            for t in &other.terms {
                // (x (x) y) h (x' (x) y') h' = (x x'^(h^-1) (x) y y'^(h^-1)) h h'
                let x = local_mul(p, &s.x, &local_act(p, &t.x, -(s.a as i64)));
                if local_is_zero(&x) {
                    continue;
                }
                let y = local_mul(p, &s.y, &local_act(p, &t.y, -(s.b as i64)));
                if local_is_zero(&y) {
                    continue;
                }
                let scalar = self.z_scalar(p, -(t.a as i64) * (s.b as i64));
                terms.push(BlockTerm {
                    x: local_scale(f, &x, scalar),
                    y,
                    a: ((s.a as i64 + t.a as i64) % r) as u32,
                    b: ((s.b as i64 + t.b as i64) % r) as u32,
                });
            }
        }
        BlockElem { j: self.j, terms }
    }

    /// `k * self` for `k = g1^al g2^be gz^ga`.
    pub fn mul_h_left(&self, p: &Params, al: i64, be: i64, ga: i64) -> BlockElem {
        let f = p.f();
        let r = p.r as i64;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let scalar = self.z_scalar(p, ga - (t.a as i64) * be);
                BlockTerm {
                    x: local_scale(f, &local_act(p, &t.x, -al), scalar),
                    y: local_act(p, &t.y, -be),
                    a: (t.a as i64 + al).rem_euclid(r) as u32,
                    b: (t.b as i64 + be).rem_euclid(r) as u32,
                }
            })
            .collect();
        BlockElem { j: self.j, terms }
    }

    /// `self * k` for `k = g1^al g2^be gz^ga`.
    pub fn mul_h_right(&self, p: &Params, al: i64, be: i64, ga: i64) -> BlockElem {
        let f = p.f();
        let r = p.r as i64;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let scalar = self.z_scalar(p, ga - al * (t.b as i64));
                BlockTerm {
                    x: local_scale(f, &t.x, scalar),
                    y: t.y.clone(),
                    a: (t.a as i64 + al).rem_euclid(r) as u32,
                    b: (t.b as i64 + be).rem_euclid(r) as u32,
                }
            })
            .collect();
        BlockElem { j: self.j, terms }
    }

    /// `k^-1 self k` for `k = g1^al g2^be`.
    pub fn conjugate_h(&self, p: &Params, al: i64, be: i64) -> BlockElem {
        let (ia, ib, ic) = p.h_inv((
            al.rem_euclid(p.r as i64) as u32,
            be.rem_euclid(p.r as i64) as u32,
            0,
        ));
        self.mul_h_left(p, ia as i64, ib as i64, ic as i64)
            .mul_h_right(p, al, be, 0)
    }

    /// Coordinates against the basis `n1 n2 g1^a g2^b e_theta`.
    pub fn canonical(&self, p: &Params) -> HashMap<(u32, u32, u32, u32), FieldElem> {
        let f = p.f();
        let mut out: HashMap<(u32, u32, u32, u32), FieldElem> = HashMap::new();
        for t in &self.terms {
            let sy = support(&t.y);
            for (n1, cx) in support(&t.x) {
                for &(n2, cy) in &sy {
                    let e = out.entry((t.a, t.b, n1, n2)).or_insert(FieldElem::ZERO);
                    *e = f.add(*e, f.mul(cx, cy));
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn equals(&self, p: &Params, other: &BlockElem) -> bool {
        self.j == other.j && self.canonical(p) == other.canonical(p)
    }

    pub fn is_zero(&self, p: &Params) -> bool {
        self.canonical(p).is_empty()
    }

    /// `pi`: `n h e_theta -> n`, as a dense `|N1| x |N2|` array.
    pub fn pi_dense(&self, p: &Params) -> Vec<FieldElem> {
        let f = p.f();
        let ord = p.local.order() as usize;
        let mut out = vec![FieldElem::ZERO; ord * ord];
        for t in &self.terms {
            let sy = support(&t.y);
            for (n1, cx) in support(&t.x) {
                let row = &mut out[n1 as usize * ord..(n1 as usize + 1) * ord];
                for &(n2, cy) in &sy {
                    row[n2 as usize] = f.add(row[n2 as usize], f.mul(cx, cy));
                }
            }
        }
        out
    }

    /// Literal group-algebra form, expanding `e_theta`.
    pub fn to_ga(&self, p: &Params) -> GAElem {
        let f = p.f();
        let r = p.r;
        let inv_r = f.inv(f.from_int(r as i64)).unwrap();
        let ds = p.dsize();
        let mut out = GAElem::zero();
        for ((a, b, n1, n2), c) in self.canonical(p) {
            for z in 0..r {
                let g = GroupElem {
                    v1: n1 % ds,
                    x1: n1 / ds,
                    v2: n2 % ds,
                    x2: n2 / ds,
                    a,
                    b,
                    c: z as u32,
                };
                let coeff = f.mul(c, f.mul(inv_r, p.zeta_r_pow(-(self.j as i64) * z as i64)));
                out.add_term(f, g, coeff);
            }
        }
        out
    }

    /// Factored form of `x`, assuming `x e_theta = x`.
    pub fn from_ga(p: &Params, j: u64, x: &GAElem) -> BlockElem {
        let f = p.f();
        let ds = p.dsize();
        let mut grouped: HashMap<(u32, u32, u32), LocalVec> = HashMap::new();
        for (g, c) in x.terms() {
            let coeff = f.mul(*c, p.zeta_r_pow(j as i64 * g.c as i64));
            let v = grouped
                .entry((g.a, g.b, g.local(2, ds)))
                .or_insert_with(|| local_zero(p));
            let k = g.local(1, ds) as usize;
            v[k] = f.add(v[k], coeff);
        }
        let mut keys: Vec<_> = grouped.keys().copied().collect();
        keys.sort_unstable();
        let terms = keys
            .into_iter()
            .map(|key| BlockTerm {
                x: grouped.remove(&key).unwrap(),
                y: local_basis(p, key.2),
                a: key.0,
                b: key.1,
            })
            .collect();
        BlockElem { j, terms }
    }
}
