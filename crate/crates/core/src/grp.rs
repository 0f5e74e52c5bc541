//! The group `G = ((D1 x| P1) x (D2 x| P2)) x| H` in normal form.
//!
//! `P_i` is `(F_p, +)`, `D_i` is `(C_l)^p` modulo its diagonal, with `P_i`
//! translating coordinates, `H` is the Heisenberg group over `Z/r`
//! generated by `g1, g2, gz` with `[g1, g2] = gz` central, and `g_i` acts on
//! `D_i x| P_i` by multiplying coordinates and translations by `g0`, an
//! element of order `r` in `F_p^*`. Conjugation is the right action
//! `x^g = g^-1 x g`.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::ff::{FieldContext, FieldElem, FieldError};

/// Upper bound on `|D_i x| P_i| = p * l^(p-1)` accepted by [`Params::new`].
pub const MAX_LOCAL_ORDER: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamsError {
    #[error("ell = {0} is not prime")]
    EllNotPrime(u64),
    #[error("p = {0} is not prime")]
    PNotPrime(u64),
    #[error("p must differ from ell (both are {0})")]
    PEqualsEll(u64),
    #[error("r = {0} must be greater than 1")]
    RTooSmall(u64),
    #[error("r = {r} does not divide p - 1 = {}", .p - 1)]
    RNotDividingPMinusOne { r: u64, p: u64 },
    #[error("ell = {ell} divides r = {r}")]
    EllDividesR { ell: u64, r: u64 },
    #[error("|D_i x| P_i| = {0} exceeds the supported bound")]
    TooLarge(u128),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Subgroups that can be enumerated (or, for `E` and `G`, generated).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Subgroup {
    Z,
    L1,
    L2,
    H,
    P1,
    P2,
    D1,
    D2,
    E,
    G,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("refusing to enumerate {0:?}; use `generators` instead")]
    TooLargeToEnumerate(Subgroup),
}

/// A normalized element `d1(v1) x1 d2(v2) x2 g1^a g2^b gz^c`.
///
/// `v1`, `v2` index `D_i`: base-`l` digits of coordinates `1..p`, the
/// coordinate at `0` being normalized to zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem {
    pub v1: u32,
    pub x1: u32,
    pub v2: u32,
    pub x2: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl GroupElem {
    pub const IDENTITY: GroupElem = GroupElem {
        v1: 0,
        x1: 0,
        v2: 0,
        x2: 0,
        a: 0,
        b: 0,
        c: 0,
    };

    /// Index of the `D_i x| P_i` component, `x * |D| + v`.
    #[inline]
    pub fn local(&self, side: usize, dsize: u32) -> u32 {
        match side {
            1 => self.x1 * dsize + self.v1,
            _ => self.x2 * dsize + self.v2,
        }
    }

    pub fn is_in_n(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 0
    }
}

/// Index-table arithmetic for one copy of `D x| P`.
#[derive(Debug)]
pub struct LocalGroup {
    pub ell: u64,
    pub p: u64,
    pub dsize: u32,
    /// `translate[y * |D| + w]`: coordinates moved by `+y`, renormalized.
    translate: Vec<u32>,
    /// `scale[t * |D| + w]`: coordinates multiplied by `g0^t`.
    scale: Vec<u32>,
    /// `D` addition for odd `l` when `|D|` is small.
    add_table: Option<Vec<u32>>,
    neg: Vec<u32>,
    g0_pows: Vec<u64>,
    r: u64,
}

impl LocalGroup {
    fn new(ell: u64, p: u64, r: u64, g0: u64) -> Self {
        let dsize = ell.pow(p as u32 - 1) as u32;
        let g0_pows: Vec<u64> = (0..r).map(|t| arith::pow_mod(g0, t, p)).collect();
        let mut lg = LocalGroup {
            ell,
            p,
            dsize,
            translate: Vec::new(),
            scale: Vec::new(),
            add_table: None,
            neg: Vec::new(),
            g0_pows,
            r,
        };
        let ds = dsize as usize;
        let mut translate = vec![0u32; p as usize * ds];
        let mut scale = vec![0u32; r as usize * ds];
        let mut neg = vec![0u32; ds];
        for w in 0..dsize {
            let coords = lg.unpack(w);
            for y in 0..p {
                let moved: Vec<u64> = (0..p)
                    .map(|k| coords[((k + p - y) % p) as usize])
                    .collect();
                translate[y as usize * ds + w as usize] = lg.pack_normalized(&moved);
            }
            for t in 0..r {
                let u_inv = arith::inv_mod(lg.g0_pows[t as usize], p).unwrap();
                let moved: Vec<u64> = (0..p)
                    .map(|k| coords[((k * u_inv) % p) as usize])
                    .collect();
                scale[t as usize * ds + w as usize] = lg.pack_normalized(&moved);
            }
            let negated: Vec<u64> = coords.iter().map(|&c| (ell - c) % ell).collect();
            neg[w as usize] = lg.pack_normalized(&negated);
        }
        lg.translate = translate;
        lg.scale = scale;
        lg.neg = neg;
        if ell != 2 && (ds as u64) * (ds as u64) <= 1 << 22 {
            let mut table = vec![0u32; ds * ds];
            for w in 0..dsize {
                for w2 in 0..dsize {
                    table[w as usize * ds + w2 as usize] = lg.add_digits(w, w2);
                }
            }
            lg.add_table = Some(table);
        }
        lg
    }

    pub fn order(&self) -> u32 {
        self.dsize * self.p as u32
    }

    /// Full coordinate vector (length `p`, coordinate 0 is zero).
    pub fn unpack(&self, mut w: u32) -> Vec<u64> {
        let mut out = vec![0u64; self.p as usize];
        for slot in out.iter_mut().skip(1) {
            *slot = w as u64 % self.ell;
            w /= self.ell as u32;
        }
        out
    }

    /// Packs a coordinate vector after subtracting coordinate 0 (the
    /// diagonal quotient).
    pub fn pack_normalized(&self, coords: &[u64]) -> u32 {
        let base = coords[0] % self.ell;
        let mut v = 0u64;
        for k in (1..self.p as usize).rev() {
            v = v * self.ell + (coords[k] % self.ell + self.ell - base) % self.ell;
        }
        v as u32
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let ca = self.unpack(a);
        let cb = self.unpack(b);
        let s: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.ell).collect();
        self.pack_normalized(&s)
    }

    #[inline]
    pub fn d_add(&self, a: u32, b: u32) -> u32 {
        if self.ell == 2 {
            return a ^ b;
        }
        match &self.add_table {
            Some(t) => t[a as usize * self.dsize as usize + b as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn d_neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    /// `w^y` for `y in P`: coordinate `k` of the result is coordinate
    /// `k - y` of `w`.
    #[inline]
    pub fn d_translate(&self, w: u32, y: u64) -> u32 {
        self.translate[(y % self.p) as usize * self.dsize as usize + w as usize]
    }

    /// `w^(g_i^t)`: coordinate `k * g0^t` of the result is coordinate `k`.
    #[inline]
    pub fn d_scale(&self, w: u32, t: u64) -> u32 {
        self.scale[(t % self.r) as usize * self.dsize as usize + w as usize]
    }

    /// Coordinates multiplied by an arbitrary unit `u`: coordinate `k * u`
    /// of the result is coordinate `k` of `w`.
    pub fn d_scale_by(&self, w: u32, u: u64) -> u32 {
        let coords = self.unpack(w);
        let mut moved = vec![0u64; self.p as usize];
        for (k, c) in coords.into_iter().enumerate() {
            moved[(k as u64 * u % self.p) as usize] = c;
        }
        self.pack_normalized(&moved)
    }

    /// `d^x` as a `D` index.
    pub fn d_basis(&self, x: u64) -> u32 {
        let mut coords = vec![0u64; self.p as usize];
        coords[(x % self.p) as usize] = 1;
        self.pack_normalized(&coords)
    }

    #[inline]
    pub fn g0_pow(&self, t: u64) -> u64 {
        self.g0_pows[(t % self.r) as usize]
    }

    /// Product of `(w, x)(w2, x2) = d(w) x d(w2) x2` in `D x| P`.
    #[inline]
    pub fn mul(&self, w: u32, x: u64, w2: u32, x2: u64) -> (u32, u64) {
        let moved = self.d_translate(w2, self.p - x % self.p);
        (self.d_add(w, moved), (x + x2) % self.p)
    }

    #[inline]
    pub fn mul_idx(&self, n: u32, m: u32) -> u32 {
        let ds = self.dsize;
        let (w, x) = self.mul(n % ds, (n / ds) as u64, m % ds, (m / ds) as u64);
        x as u32 * ds + w
    }

    pub fn inv_idx(&self, n: u32) -> u32 {
        let ds = self.dsize;
        let (w, x) = (n % ds, (n / ds) as u64);
        // (d(w) x)^-1 = x^-1 d(-w) = d(-w)^(x) x^-1
        let nx = (self.p - x) % self.p;
        let w2 = self.d_translate(self.d_neg(w), x);
        nx as u32 * ds + w2
    }

    /// Action of `g_i^t` on `D_i x| P_i` (conjugation `n^(g_i^t)`).
    #[inline]
    pub fn act_idx(&self, n: u32, t: u64) -> u32 {
        let ds = self.dsize;
        let (w, x) = (n % ds, (n / ds) as u64);
        let u = self.g0_pow(t);
        ((u * x) % self.p) as u32 * ds + self.d_scale(w, t)
    }
}

/// Validated parameters `(l, p, r)` with the splitting field and all
/// derived tables.
#[derive(Debug)]
pub struct Params {
    pub ell: u64,
    pub p: u64,
    pub r: u64,
    pub d: usize,
    pub field: Arc<FieldContext>,
    pub g0: u64,
    pub zeta_p: FieldElem,
    pub zeta_r: FieldElem,
    pub local: LocalGroup,
    zp_pows: Vec<FieldElem>,
    zr_pows: Vec<FieldElem>,
    pub(crate) quiv: crate::quiva::QuivCache,
}

impl Params {
    pub fn new(ell: u64, p: u64, r: u64) -> Result<Self, ParamsError> {
        if !arith::is_prime(ell) {
            return Err(ParamsError::EllNotPrime(ell));
        }
        if !arith::is_prime(p) {
            return Err(ParamsError::PNotPrime(p));
        }
        if p == ell {
            return Err(ParamsError::PEqualsEll(p));
        }
        if r <= 1 {
            return Err(ParamsError::RTooSmall(r));
        }
        if (p - 1) % r != 0 {
            return Err(ParamsError::RNotDividingPMinusOne { r, p });
        }
        if r % ell == 0 {
            return Err(ParamsError::EllDividesR { ell, r });
        }
        let local_order = (p as u128) * (ell as u128).pow(p as u32 - 1);
        if local_order > MAX_LOCAL_ORDER as u128 {
            return Err(ParamsError::TooLarge(local_order));
        }
        let d = arith::lcm(
            arith::mul_order(ell, p).expect("p != ell"),
            arith::mul_order(ell, r).expect("ell does not divide r"),
        ) as usize;
        let field = Arc::new(FieldContext::new(ell, d)?);
        let gamma = arith::least_primitive_root(p);
        let g0 = arith::pow_mod(gamma, (p - 1) / r, p);
        let zeta_p = field.root_of_unity(p)?;
        let zeta_r = field.root_of_unity(r)?;
        let zp_pows = (0..p).map(|k| field.pow(zeta_p, k)).collect();
        let zr_pows = (0..r).map(|k| field.pow(zeta_r, k)).collect();
        let local = LocalGroup::new(ell, p, r, g0);
        Ok(Params {
            ell,
            p,
            r,
            d,
            field,
            g0,
            zeta_p,
            zeta_r,
            local,
            zp_pows,
            zr_pows,
            quiv: Default::default(),
        })
    }

    #[inline]
    pub fn f(&self) -> &FieldContext {
        &self.field
    }

    /// `|D_i| = l^(p-1)`.
    pub fn dsize(&self) -> u32 {
        self.local.dsize
    }

    /// `zeta_p^k` for any integer `k`.
    #[inline]
    pub fn zeta_p_pow(&self, k: i64) -> FieldElem {
        self.zp_pows[k.rem_euclid(self.p as i64) as usize]
    }

    /// `zeta_r^k` for any integer `k`.
    #[inline]
    pub fn zeta_r_pow(&self, k: i64) -> FieldElem {
        self.zr_pows[k.rem_euclid(self.r as i64) as usize]
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem::IDENTITY
    }

    /// `d_i^x`.
    pub fn d_gen(&self, side: usize, x: u64) -> GroupElem {
        let w = self.local.d_basis(x);
        let mut g = GroupElem::IDENTITY;
        if side == 1 {
            g.v1 = w;
        } else {
            g.v2 = w;
        }
        g
    }

    /// `x` as an element of `P_i`.
    pub fn p_elem(&self, side: usize, x: u64) -> GroupElem {
        let mut g = GroupElem::IDENTITY;
        if side == 1 {
            g.x1 = (x % self.p) as u32;
        } else {
            g.x2 = (x % self.p) as u32;
        }
        g
    }

    /// `g1^a g2^b gz^c`.
    pub fn h_elem(&self, a: i64, b: i64, c: i64) -> GroupElem {
        let r = self.r as i64;
        GroupElem {
            a: a.rem_euclid(r) as u32,
            b: b.rem_euclid(r) as u32,
            c: c.rem_euclid(r) as u32,
            ..GroupElem::IDENTITY
        }
    }

    /// The element of `D_i x| P_i` with local index `n`.
    pub fn from_local(&self, side: usize, n: u32) -> GroupElem {
        let ds = self.dsize();
        let mut g = GroupElem::IDENTITY;
        if side == 1 {
            g.v1 = n % ds;
            g.x1 = n / ds;
        } else {
            g.v2 = n % ds;
            g.x2 = n / ds;
        }
        g
    }

    /// `(a, b, c) (a', b', c') = (a + a', b + b', c + c' - a' b)`.
    #[inline]
    pub fn h_mul(&self, h: (u32, u32, u32), k: (u32, u32, u32)) -> (u32, u32, u32) {
        let r = self.r;
        let a = (h.0 as u64 + k.0 as u64) % r;
        let b = (h.1 as u64 + k.1 as u64) % r;
        let cross = (k.0 as u64 * h.1 as u64) % r;
        let c = (h.2 as u64 + k.2 as u64 + r - cross) % r;
        (a as u32, b as u32, c as u32)
    }

    pub fn h_inv(&self, h: (u32, u32, u32)) -> (u32, u32, u32) {
        let r = self.r;
        let (a, b, c) = (h.0 as u64, h.1 as u64, h.2 as u64);
        let na = (r - a) % r;
        let nb = (r - b) % r;
        // (a,b,c)(-a,-b,c') = (0,0,c + c' + ab)
        let nc = (2 * r * r - c - a * b % r) % r;
        (na as u32, nb as u32, nc as u32)
    }

    pub fn mul(&self, g: &GroupElem, h: &GroupElem) -> GroupElem {
        let lg = &self.local;
        let r = self.r;
        // g h = n1 n2 k n1' n2' k' = n1 (n1')^(k^-1) n2 (n2')^(k^-1) k k'
        let ta = (r - g.a as u64) % r;
        let tb = (r - g.b as u64) % r;
        let m1 = lg.act_idx(h.local(1, lg.dsize), ta);
        let m2 = lg.act_idx(h.local(2, lg.dsize), tb);
        let n1 = lg.mul_idx(g.local(1, lg.dsize), m1);
        let n2 = lg.mul_idx(g.local(2, lg.dsize), m2);
        let (a, b, c) = self.h_mul((g.a, g.b, g.c), (h.a, h.b, h.c));
        let ds = lg.dsize;
        GroupElem {
            v1: n1 % ds,
            x1: n1 / ds,
            v2: n2 % ds,
            x2: n2 / ds,
            a,
            b,
            c,
        }
    }

    pub fn inv(&self, g: &GroupElem) -> GroupElem {
        let lg = &self.local;
        let (a, b, c) = self.h_inv((g.a, g.b, g.c));
        // (n k)^-1 = k^-1 n^-1 = (n^-1)^(k) k^-1
        let n1 = lg.act_idx(lg.inv_idx(g.local(1, lg.dsize)), g.a as u64);
        let n2 = lg.act_idx(lg.inv_idx(g.local(2, lg.dsize)), g.b as u64);
        let ds = lg.dsize;
        GroupElem {
            v1: n1 % ds,
            x1: n1 / ds,
            v2: n2 % ds,
            x2: n2 / ds,
            a,
            b,
            c,
        }
    }

    /// `x^h = h^-1 x h`.
    pub fn conjugate(&self, x: &GroupElem, h: &GroupElem) -> GroupElem {
        self.mul(&self.mul(&self.inv(h), x), h)
    }

    /// `[x, y] = x y x^-1 y^-1`.
    pub fn commutator(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        let xy = self.mul(x, y);
        self.mul(&self.mul(&xy, &self.inv(x)), &self.inv(y))
    }

    pub fn pow(&self, g: &GroupElem, mut e: u64) -> GroupElem {
        let mut acc = GroupElem::IDENTITY;
        let mut base = *g;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Complete list of elements of a subgroup. `E` and `G` are refused;
    /// [`Params::generators`] covers them.
    pub fn subgroup_elements(&self, which: Subgroup) -> Result<Vec<GroupElem>, GroupError> {
        let r = self.r as i64;
        let p = self.p;
        Ok(match which {
            Subgroup::Z => (0..r).map(|c| self.h_elem(0, 0, c)).collect(),
            Subgroup::L1 => (0..r).map(|a| self.h_elem(a, 0, 0)).collect(),
            Subgroup::L2 => (0..r).map(|b| self.h_elem(0, b, 0)).collect(),
            Subgroup::H => {
                let mut v = Vec::with_capacity((r * r * r) as usize);
                for a in 0..r {
                    for b in 0..r {
                        for c in 0..r {
                            v.push(self.h_elem(a, b, c));
                        }
                    }
                }
                v
            }
            Subgroup::P1 => (0..p).map(|x| self.p_elem(1, x)).collect(),
            Subgroup::P2 => (0..p).map(|x| self.p_elem(2, x)).collect(),
            Subgroup::D1 | Subgroup::D2 => {
                let side = if which == Subgroup::D1 { 1 } else { 2 };
                (0..self.dsize()).map(|w| self.from_local(side, w)).collect()
            }
            Subgroup::E | Subgroup::G => return Err(GroupError::TooLargeToEnumerate(which)),
        })
    }

    /// A generating set of the subgroup.
    pub fn generators(&self, which: Subgroup) -> Vec<GroupElem> {
        let g1 = self.h_elem(1, 0, 0);
        let g2 = self.h_elem(0, 1, 0);
        let gz = self.h_elem(0, 0, 1);
        match which {
            Subgroup::Z => vec![gz],
            Subgroup::L1 => vec![g1],
            Subgroup::L2 => vec![g2],
            Subgroup::H => vec![g1, g2, gz],
            Subgroup::P1 => vec![self.p_elem(1, 1)],
            Subgroup::P2 => vec![self.p_elem(2, 1)],
            Subgroup::D1 => (0..self.p).map(|x| self.d_gen(1, x)).collect(),
            Subgroup::D2 => (0..self.p).map(|x| self.d_gen(2, x)).collect(),
            Subgroup::E => vec![self.p_elem(1, 1), self.p_elem(2, 1), g1, g2, gz],
            Subgroup::G => vec![
                self.d_gen(1, 0),
                self.d_gen(2, 0),
                self.p_elem(1, 1),
                self.p_elem(2, 1),
                g1,
                g2,
                gz,
            ],
        }
    }

    pub fn contains(&self, which: Subgroup, g: &GroupElem) -> bool {
        let n_trivial = g.v1 == 0 && g.x1 == 0 && g.v2 == 0 && g.x2 == 0;
        let h_trivial = g.a == 0 && g.b == 0 && g.c == 0;
        match which {
            Subgroup::Z => n_trivial && g.a == 0 && g.b == 0,
            Subgroup::L1 => n_trivial && g.b == 0 && g.c == 0,
            Subgroup::L2 => n_trivial && g.a == 0 && g.c == 0,
            Subgroup::H => n_trivial,
            Subgroup::P1 => h_trivial && g.v1 == 0 && g.v2 == 0 && g.x2 == 0,
            Subgroup::P2 => h_trivial && g.v1 == 0 && g.v2 == 0 && g.x1 == 0,
            Subgroup::D1 => h_trivial && g.x1 == 0 && g.v2 == 0 && g.x2 == 0,
            Subgroup::D2 => h_trivial && g.x2 == 0 && g.v1 == 0 && g.x1 == 0,
            Subgroup::E => g.v1 == 0 && g.v2 == 0,
            Subgroup::G => true,
        }
    }

    /// JSON form `{v1: [..], x1, v2: [..], x2, h: [a, b, c]}`.
    pub fn elem_json(&self, g: &GroupElem) -> serde_json::Value {
        serde_json::json!({
            "v1": self.local.unpack(g.v1),
            "x1": g.x1,
            "v2": self.local.unpack(g.v2),
            "x2": g.x2,
            "h": [g.a, g.b, g.c],
        })
    }

    pub fn random_elem<R: rand::Rng>(&self, rng: &mut R) -> GroupElem {
        let ds = self.dsize();
        let r = self.r as u32;
        GroupElem {
            v1: rng.gen_range(0..ds),
            x1: rng.gen_range(0..self.p as u32),
            v2: rng.gen_range(0..ds),
            x2: rng.gen_range(0..self.p as u32),
            a: rng.gen_range(0..r),
            b: rng.gen_range(0..r),
            c: rng.gen_range(0..r),
        }
    }

    pub fn is_normalized(&self, g: &GroupElem) -> bool {
        g.v1 < self.dsize()
            && g.v2 < self.dsize()
            && (g.x1 as u64) < self.p
            && (g.x2 as u64) < self.p
            && (g.a as u64) < self.r
            && (g.b as u64) < self.r
            && (g.c as u64) < self.r
    }
}
