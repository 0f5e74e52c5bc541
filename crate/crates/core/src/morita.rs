//! Morita invariants of `B(theta)`: simple modules, the head of `B0`, the
//! Ext quiver, the commutation pairing and the recovery of `theta`, plus
//! Morita-Frobenius numbers and the two explicit isomorphisms.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::chr::{CharError, CharGroup, Character};
use crate::ff::{FieldContext, FieldElem};
use crate::galg::GAElem;
use crate::grp::{GroupElem, Params};
use crate::linalg::Matrix;
use crate::quiva::{label_m, label_target, make_label, m_degree, qa_isotypic, QuivAElem};
use crate::ttb0::{tt_radical_degree, B0Context, TTElem, TtError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoritaError {
    #[error("gcd(ell, r) != 1 or r < 2 (ell = {ell}, r = {r})")]
    BadOrder { ell: u64, r: u64 },
    #[error("n must be at least 1")]
    BadTarget,
    #[error("no prime p <= {0} satisfies the congruences")]
    SearchCapExceeded(u64),
    #[error("the weighted orbit sum vanishes for weight {0}; pick other generators")]
    DegenerateTilde(u64),
    #[error("no unique commutation scalar for ({0}, {1})")]
    NoUniqueScalar(u64, u64),
    #[error("pairing table is degenerate")]
    DegenerateTable,
    #[error("scalars must be nonzero mod p")]
    ZeroScalar,
    #[error("head algebra is not split semisimple")]
    NotSplitSemisimple,
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Tt(#[from] TtError),
}

/// Labels of the simple `B(theta)`-modules. Orbit kinds store the least
/// exponent of each `L_i`-orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimpleLabel {
    Trivial,
    Left(u64),
    Right(u64),
    Pair(u64, u64),
}

/// Least element of the `L`-orbit `{s g0^t}`.
pub fn orbit_rep(p: &Params, s: u64) -> u64 {
    (0..p.r)
        .map(|t| s * p.local.g0_pow(t) % p.p)
        .min()
        .unwrap()
}

impl SimpleLabel {
    pub fn from_left(p: &Params, phi: u64) -> Self {
        match phi % p.p {
            0 => SimpleLabel::Trivial,
            s => SimpleLabel::Left(s),
        }
    }

    pub fn from_right(p: &Params, psi: u64) -> Self {
        match psi % p.p {
            0 => SimpleLabel::Trivial,
            s => SimpleLabel::Right(s),
        }
    }

    /// Label of `(phi, psi)` for arbitrary exponents.
    pub fn from_pair(p: &Params, phi: u64, psi: u64) -> Self {
        match (phi % p.p, psi % p.p) {
            (0, 0) => SimpleLabel::Trivial,
            (s, 0) => SimpleLabel::Left(s),
            (0, s) => SimpleLabel::Right(s),
            (s, t) => SimpleLabel::Pair(orbit_rep(p, s), orbit_rep(p, t)),
        }
    }

    pub fn degree(&self, p: &Params) -> u64 {
        match self {
            SimpleLabel::Pair(..) => p.r * p.r,
            _ => p.r,
        }
    }

    pub fn name(&self) -> String {
        match self {
            SimpleLabel::Trivial => "(1,1)".into(),
            SimpleLabel::Left(s) => format!("(phi{s},1)"),
            SimpleLabel::Right(s) => format!("(1,psi{s})"),
            SimpleLabel::Pair(s, t) => format!("([phi{s}],[psi{t}])"),
        }
    }
}

fn check_theta(p: &Params, theta: &Character) -> Result<(), MoritaError> {
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
    Ok(())
}

/// The simple modules with their degrees, in canonical order.
pub fn simples(p: &Params, theta: &Character) -> Result<Vec<(SimpleLabel, u64)>, MoritaError> {
    check_theta(p, theta)?;
    let mut out = vec![SimpleLabel::Trivial];
    out.extend((1..p.p).map(SimpleLabel::Left));
    out.extend((1..p.p).map(SimpleLabel::Right));
    let mut reps: Vec<u64> = (1..p.p).map(|s| orbit_rep(p, s)).collect();
    reps.sort_unstable();
    reps.dedup();
    for &a in &reps {
        for &b in &reps {
            out.push(SimpleLabel::Pair(a, b));
        }
    }
    Ok(out.into_iter().map(|l| (l, l.degree(p))).collect())
}

/// Structure constants of the degree-0 part of `B0`, spanned by
/// `e_psi (x) e_xi` (index `psi * p + xi`).
pub struct HeadAlgebra {
    pub dim: usize,
    /// Product of basis `i` and `j` at `i * dim + j`.
    products: Vec<Vec<FieldElem>>,
}

/// Primitive central idempotents of the head and their block dimensions.
pub struct HeadDecomposition {
    pub block_dims: Vec<usize>,
    pub idempotents: Vec<Vec<FieldElem>>,
}

impl HeadDecomposition {
    /// `(number of 1-dimensional blocks, number of r^2-dimensional blocks)`.
    pub fn census(&self, r: u64) -> (usize, usize) {
        let ones = self.block_dims.iter().filter(|&&d| d == 1).count();
        let big = self.block_dims.iter().filter(|&&d| d as u64 == r * r).count();
        (ones, big)
    }
}

impl HeadAlgebra {
    pub fn new(ctx: &B0Context) -> Result<Self, MoritaError> {
        let p = ctx.p();
        let n = p.p as usize;
        let dim = n * n;
        let basis = |i: usize| {
            TTElem::basis(
                ctx.theta.e,
                make_label(p, (i / n) as u64, 0),
                make_label(p, (i % n) as u64, 0),
            )
        };
        let mut products = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let prod = ctx.tt_mul(&basis(i), &basis(j))?;
                products.push(Self::coords(ctx, &prod));
            }
        }
        Ok(HeadAlgebra { dim, products })
    }

    /// Coordinates of a degree-0 element.
    pub fn coords(ctx: &B0Context, t: &TTElem) -> Vec<FieldElem> {
        let p = ctx.p();
        let n = p.p as usize;
        let mut v = vec![FieldElem::ZERO; n * n];
        for (u, w, c) in t.truncate(p, 1).terms() {
            let i = (u / p.dsize()) as usize * n + (w / p.dsize()) as usize;
            v[i] = c;
        }
        v
    }

    pub fn mul(&self, f: &FieldContext, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        let mut out = vec![FieldElem::ZERO; self.dim];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = f.mul(*a, *b);
                for (k, c) in self.products[i * self.dim + j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = f.add(out[k], f.mul(ab, *c));
                    }
                }
            }
        }
        out
    }

    pub fn unit(&self) -> Vec<FieldElem> {
        let n = (self.dim as f64).sqrt() as usize;
        let mut v = vec![FieldElem::ZERO; self.dim];
        for psi in 0..n {
            for xi in 0..n {
                v[psi * n + xi] = FieldElem::ONE;
            }
        }
        v
    }

    fn basis_vec(&self, i: usize) -> Vec<FieldElem> {
        let mut v = vec![FieldElem::ZERO; self.dim];
        v[i] = FieldElem::ONE;
        v
    }

    pub fn center(&self, f: &FieldContext) -> Vec<Vec<FieldElem>> {
        let d = self.dim;
        let mut m = Matrix::zeros(d * d, d);
        for i in 0..d {
            for l in 0..d {
                let zb = &self.products[l * d + i];
                let bz = &self.products[i * d + l];
                for k in 0..d {
                    m.set(i * d + k, l, f.sub(zb[k], bz[k]));
                }
            }
        }
        m.nullspace(f)
    }

    fn span_dim(&self, f: &FieldContext, vs: &[Vec<FieldElem>]) -> usize {
        crate::linalg::rank_of(f, vs, self.dim)
    }

    /// Splits the unit into primitive central idempotents using minimal
    /// polynomials of random central elements.
    pub fn decompose(&self, f: &FieldContext, seed: u64) -> Result<HeadDecomposition, MoritaError> {
        let center = self.center(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut todo = vec![self.unit()];
        let mut done = Vec::new();
        let mut attempts = 0;
        while let Some(e) = todo.pop() {
            let ec: Vec<_> = center.iter().map(|c| self.mul(f, &e, c)).collect();
            if self.span_dim(f, &ec) <= 1 {
                done.push(e);
                continue;
            }
            attempts += 1;
            if attempts > 200 {
                return Err(MoritaError::NotSplitSemisimple);
            }
            let mut z = vec![FieldElem::ZERO; self.dim];
            for c in &ec {
                let s = f.from_index(rng.gen_range(0..f.order()));
                for (zi, ci) in z.iter_mut().zip(c) {
                    *zi = f.add(*zi, f.mul(s, *ci));
                }
            }
            let pieces = self.split(f, &e, &z)?;
            if pieces.len() == 1 {
                todo.push(e);
            } else {
                todo.extend(pieces);
            }
        }
        let mut block_dims = Vec::new();
        for e in &done {
            let eb: Vec<_> = (0..self.dim)
                .map(|i| self.mul(f, e, &self.basis_vec(i)))
                .collect();
            block_dims.push(self.span_dim(f, &eb));
        }
        Ok(HeadDecomposition {
            block_dims,
            idempotents: done,
        })
    }

    /// Eigenspace idempotents of `z` inside `eA` (for central `z = z e`).
    fn split(&self, f: &FieldContext, e: &[FieldElem], z: &[FieldElem]) -> Result<Vec<Vec<FieldElem>>, MoritaError> {
        // minimal polynomial of z in the algebra with unit e
        let mut powers = vec![e.to_vec()];
        let coeffs = loop {
            let next = self.mul(f, powers.last().unwrap(), z);
            powers.push(next);
            let k = powers.len();
            let mut m = Matrix::zeros(self.dim, k);
            for (j, v) in powers.iter().enumerate() {
                for (i, c) in v.iter().enumerate() {
                    m.set(i, j, *c);
                }
            }
            let ns = m.nullspace(f);
            if let Some(v) = ns.into_iter().next() {
                break v;
            }
        };
        let roots: Vec<FieldElem> = f
            .elements()
            .filter(|&x| {
                let mut acc = FieldElem::ZERO;
                for c in coeffs.iter().rev() {
                    acc = f.add(f.mul(acc, x), *c);
                }
                acc.is_zero()
            })
            .collect();
        if roots.len() != coeffs.len() - 1 {
            return Err(MoritaError::NotSplitSemisimple);
        }
        let mut out = Vec::new();
        for &lam in &roots {
            let mut acc = e.to_vec();
            for &mu in roots.iter().filter(|&&m| m != lam) {
                let denom = f.inv(f.sub(lam, mu)).unwrap();
                let factor: Vec<FieldElem> = z
                    .iter()
                    .zip(e)
                    .map(|(zi, ei)| f.mul(f.sub(*zi, f.mul(mu, *ei)), denom))
                    .collect();
                acc = self.mul(f, &acc, &factor);
            }
            out.push(acc);
        }
        Ok(out)
    }
}

pub fn head_algebra(ctx: &B0Context) -> Result<HeadDecomposition, MoritaError> {
    let head = HeadAlgebra::new(ctx)?;
    head.decompose(ctx.p().f(), 0x5eed)
}

/// The spanning set `{s_(psi,phi) (x) e_xi, e_psi (x) s_(xi,zeta)}` of the
/// degree-1 part.
pub fn degree_one_spanning_set(ctx: &B0Context) -> Vec<TTElem> {
    let p = ctx.p();
    let mut out = Vec::new();
    for side in [1u8, 2] {
        for psi in 0..p.p {
            for step in 1..p.p {
                let arrow = make_label(p, psi, crate::quiva::unit_m(p, step));
                for xi in 0..p.p {
                    let idem = make_label(p, xi, 0);
                    out.push(if side == 1 {
                        TTElem::basis(ctx.theta.e, arrow, idem)
                    } else {
                        TTElem::basis(ctx.theta.e, idem, arrow)
                    });
                }
            }
        }
    }
    out
}

fn degree_one_rank(ctx: &B0Context, elems: &[TTElem]) -> usize {
    let p = ctx.p();
    let mut index: HashMap<(u32, u32), usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, FieldElem)>> = Vec::new();
    for t in elems {
        let mut row = Vec::new();
        for (u, v, c) in t.sorted_terms() {
            if m_degree(p, label_m(p, u)) + m_degree(p, label_m(p, v)) != 1 {
                continue;
            }
            let n = index.len();
            let k = *index.entry((u, v)).or_insert(n);
            row.push((k, c));
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    let cols = index.len();
    let dense: Vec<Vec<FieldElem>> = rows
        .into_iter()
        .map(|r| {
            let mut v = vec![FieldElem::ZERO; cols];
            for (k, c) in r {
                v[k] = c;
            }
            v
        })
        .collect();
    crate::linalg::rank_of(p.f(), &dense, cols)
}

/// `dim eps_a (J/J^2) eps_b`.
pub fn ext_dim(ctx: &B0Context, a: &SimpleLabel, b: &SimpleLabel) -> Result<usize, MoritaError> {
    let ea = ctx.tt_eps(a)?;
    let eb = ctx.tt_eps(b)?;
    let mut prods = Vec::new();
    for w in degree_one_spanning_set(ctx) {
        let left = ctx.tt_mul(&ea, &w)?;
        if left.is_zero() {
            continue;
        }
        prods.push(ctx.tt_mul(&left, &eb)?);
    }
    Ok(degree_one_rank(ctx, &prods))
}

/// The full Ext-quiver multiplicity matrix over `simples` order.
pub fn ext_quiver(ctx: &B0Context) -> Result<(Vec<SimpleLabel>, Vec<Vec<usize>>), MoritaError> {
    let labels: Vec<SimpleLabel> = simples(ctx.p(), &ctx.theta)?
        .into_iter()
        .map(|(l, _)| l)
        .collect();
    let eps: Vec<TTElem> = labels
        .iter()
        .map(|l| ctx.tt_eps(l))
        .collect::<Result<_, _>>()?;
    let span = degree_one_spanning_set(ctx);
    let mut table = vec![vec![0usize; labels.len()]; labels.len()];
    for (i, ea) in eps.iter().enumerate() {
        let mut lefts = Vec::new();
        for w in &span {
            let l = ctx.tt_mul(ea, w)?;
            if !l.is_zero() {
                lefts.push(l);
            }
        }
        for (j, eb) in eps.iter().enumerate() {
            let prods: Vec<TTElem> = lefts
                .iter()
                .map(|l| ctx.tt_mul(l, eb))
                .collect::<Result<_, _>>()?;
            table[i][j] = degree_one_rank(ctx, &prods);
        }
    }
    Ok((labels, table))
}

/// Bicharacter table `(chi_e, eta_f) -> value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingTable {
    pub r: u64,
    pub values: Vec<FieldElem>,
}

impl PairingTable {
    pub fn get(&self, e: u64, f: u64) -> FieldElem {
        self.values[((e % self.r) * self.r + f % self.r) as usize]
    }

    /// The table computed through group commutators of `h`-elements.
    pub fn from_characters(ctx: &B0Context) -> Self {
        let r = ctx.p().r;
        let mut values = Vec::with_capacity((r * r) as usize);
        for e in 0..r {
            for f in 0..r {
                values.push(ctx.pairing(e, f));
            }
        }
        PairingTable { r, values }
    }

    pub fn is_bicharacter(&self, f: &FieldContext) -> bool {
        let r = self.r;
        (0..r).all(|a| {
            (0..r).all(|b| {
                (0..r).all(|c| {
                    self.get(a + c, b) == f.mul(self.get(a, b), self.get(c, b))
                        && self.get(a, b + c) == f.mul(self.get(a, b), self.get(a, c))
                })
            })
        }) && (0..r).all(|a| self.get(a, 0) == f.one() && self.get(0, a) == f.one())
    }

    pub fn to_json(&self, f: &FieldContext) -> serde_json::Value {
        let rows: Vec<Vec<Vec<u64>>> = (0..self.r)
            .map(|e| (0..self.r).map(|g| f.coeffs(self.get(e, g))).collect())
            .collect();
        serde_json::json!({ "r": self.r, "values": rows })
    }
}

/// The unique `c` with `s t - c t s` of radical degree above that of `s t`.
fn commutation_scalar(ctx: &B0Context, s: &TTElem, t: &TTElem) -> Result<Option<FieldElem>, MoritaError> {
    let p = ctx.p();
    let f = p.f();
    let st = ctx.tt_mul(s, t)?;
    let ts = ctx.tt_mul(t, s)?;
    let (Ok(deg), Some((u, v, a))) = (tt_radical_degree(p, &st), st.sorted_terms().first().copied()) else {
        return Ok(None);
    };
    let b = ts.coeff(u, v);
    if b.is_zero() {
        return Ok(None);
    }
    let c = f.div(a, b).unwrap();
    let diff = st.sub(f, &ts.scale(f, c));
    match tt_radical_degree(p, &diff) {
        Err(_) => Ok(Some(c)),
        Ok(d) if d > deg => Ok(Some(c)),
        Ok(_) => Ok(None),
    }
}

fn pairing_from_generators(
    ctx: &B0Context,
    left: &[TTElem],
    right: &[TTElem],
) -> Result<PairingTable, MoritaError> {
    let r = ctx.p().r;
    let mut values = Vec::with_capacity((r * r) as usize);
    for e in 0..r {
        for f in 0..r {
            let c = commutation_scalar(ctx, &left[e as usize], &right[f as usize])?
                .ok_or(MoritaError::NoUniqueScalar(e, f))?;
            values.push(c);
        }
    }
    Ok(PairingTable { r, values })
}

/// Pairing read off from `S~^chi_phi T~^eta_zeta = c T~^eta_zeta
/// S~^chi_phi`.
pub fn commutation_pairing_with(ctx: &B0Context, phi: u64, zeta: u64) -> Result<PairingTable, MoritaError> {
    let p = ctx.p();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for e in 0..p.r {
        let s = ctx.tt_tilde(1, phi, &Character::new(p, CharGroup::L1, e as i64))?;
        if s.is_zero() {
            return Err(MoritaError::DegenerateTilde(e));
        }
        left.push(s);
        let t = ctx.tt_tilde(2, zeta, &Character::new(p, CharGroup::L2, e as i64))?;
        if t.is_zero() {
            return Err(MoritaError::DegenerateTilde(e));
        }
        right.push(t);
    }
    pairing_from_generators(ctx, &left, &right)
}

/// Lowest-degree loop at the trivial vertex with a nonzero `chi`-isotypic
/// part, as `(projection) (x) e_1` or `e_1 (x) (projection)`.
pub fn isotypic_loop(ctx: &B0Context, side: u8, e: u64) -> Option<TTElem> {
    let p = ctx.p();
    let f = p.f();
    let grp = if side == 1 { CharGroup::L1 } else { CharGroup::L2 };
    let chi = Character::new(p, grp, e as i64);
    let mut loops: Vec<u32> = (1..p.dsize())
        .map(|m| make_label(p, 0, m))
        .filter(|&k| label_target(p, k) == 0)
        .collect();
    loops.sort_by_key(|&k| (m_degree(p, label_m(p, k)), k));
    let unit = QuivAElem::idempotent(p, if side == 1 { 2 } else { 1 }, 0);
    for k in loops {
        let proj = qa_isotypic(p, &QuivAElem::basis(side, k), &chi).ok()?;
        if !proj.is_zero() {
            return Some(if side == 1 {
                TTElem::tensor(f, ctx.theta.e, &proj, &unit)
            } else {
                TTElem::tensor(f, ctx.theta.e, &unit, &proj)
            });
        }
    }
    None
}

/// The pairing with the default generators `S~_phi1`, `T~_zeta1`; when a
/// weighted orbit sum vanishes (this happens when `-1 in L`), isotypic
/// loops of least degree at the trivial vertex are used instead.
pub fn commutation_pairing(ctx: &B0Context) -> Result<PairingTable, MoritaError> {
    match commutation_pairing_with(ctx, 1, 1) {
        Err(MoritaError::DegenerateTilde(_)) => {
            let r = ctx.p().r;
            let left: Option<Vec<_>> = (0..r).map(|e| isotypic_loop(ctx, 1, e)).collect();
            let right: Option<Vec<_>> = (0..r).map(|e| isotypic_loop(ctx, 2, e)).collect();
            match (left, right) {
                (Some(l), Some(rt)) => pairing_from_generators(ctx, &l, &rt),
                _ => Err(MoritaError::DegenerateTable),
            }
        }
        other => other,
    }
}

/// `{j, r - j}` from `c(chi_1, eta_1) = zeta_r^(-1/j)`, sorted.
pub fn recover_theta(table: &PairingTable, p: &Params) -> Result<(u64, u64), MoritaError> {
    if !table.is_bicharacter(p.f()) {
        return Err(MoritaError::DegenerateTable);
    }
    let target = table.get(1, 1);
    let j = (1..p.r)
        .filter(|&j| arith::gcd(j, p.r) == 1)
        .find(|&j| {
            let j_inv = arith::inv_mod(j, p.r).unwrap() as i64;
            p.zeta_r_pow(-j_inv) == target
        })
        .ok_or(MoritaError::DegenerateTable)?;
    let other = (p.r - j) % p.r;
    Ok((j.min(other), j.max(other)))
}

/// `B(theta) ~ B(theta')` iff `theta' = theta^(+-1)`.
pub fn morita_equivalent(p: &Params, theta: &Character, theta2: &Character) -> Result<bool, MoritaError> {
    check_theta(p, theta)?;
    check_theta(p, theta2)?;
    Ok(theta2.e == theta.e || (theta2.e + theta.e) % p.r == 0)
}

fn check_order(ell: u64, r: u64) -> Result<(), MoritaError> {
    if r < 2 || arith::gcd(ell, r) != 1 {
        return Err(MoritaError::BadOrder { ell, r });
    }
    Ok(())
}

/// Least `m >= 1` with `l^m = +-1 mod r`, from the order of `l`.
pub fn mf_number(ell: u64, r: u64) -> Result<u64, MoritaError> {
    check_order(ell, r)?;
    let ord = arith::mul_order(ell, r).unwrap();
    if ord % 2 == 0 && arith::pow_mod(ell, ord / 2, r) == r - 1 {
        Ok(ord / 2)
    } else {
        Ok(ord)
    }
}

/// Direct search for the least `m >= 1` with `l^m = +-1 mod r`.
pub fn mf_number_search(ell: u64, r: u64) -> Result<u64, MoritaError> {
    check_order(ell, r)?;
    let mut x = 1u64;
    for m in 1..=r {
        x = arith::mul_mod(x, ell, r);
        if x == 1 % r || x == r - 1 {
            return Ok(m);
        }
    }
    unreachable!("l is a unit mod r")
}

pub const DEFAULT_PRIME_CAP: u64 = 1 << 40;

/// `r = l^n + 1` and the least prime `p = 1 mod l` and `p = 1 mod r`.
pub fn params_for_target(ell: u64, n: u32, cap: u64) -> Result<(u64, u64), MoritaError> {
    if n == 0 {
        return Err(MoritaError::BadTarget);
    }
    let r = ell
        .checked_pow(n)
        .and_then(|x| x.checked_add(1))
        .ok_or(MoritaError::SearchCapExceeded(cap))?;
    let step = arith::lcm(ell, r);
    let mut candidate = step + 1;
    while candidate <= cap {
        if arith::is_prime(candidate) {
            return Ok((r, candidate));
        }
        candidate += step;
    }
    Err(MoritaError::SearchCapExceeded(cap))
}

/// The automorphism swapping the two factors, `g1 <-> g2`, `gz -> gz^-1`.
pub fn swap_elem(p: &Params, g: &GroupElem) -> GroupElem {
    let r = p.r as i64;
    let (a, b, c) = (g.a as i64, g.b as i64, g.c as i64);
    // g2^a g1^b gz^-c = g1^b g2^a gz^(-c - ab)
    GroupElem {
        v1: g.v2,
        x1: g.x2,
        v2: g.v1,
        x2: g.x1,
        a: b as u32,
        b: a as u32,
        c: (-c - a * b).rem_euclid(r) as u32,
    }
}

pub fn swap_isomorphism(p: &Params, x: &GAElem) -> GAElem {
    x.map_elems(p.f(), |g| swap_elem(p, g))
}

/// Scales `D_i` and `P_i` indices by `u_i`, fixing `H`.
pub fn fp_elem(p: &Params, u1: u64, u2: u64, g: &GroupElem) -> GroupElem {
    let lg = &p.local;
    GroupElem {
        v1: lg.d_scale_by(g.v1, u1),
        x1: (g.x1 as u64 * u1 % p.p) as u32,
        v2: lg.d_scale_by(g.v2, u2),
        x2: (g.x2 as u64 * u2 % p.p) as u32,
        ..*g
    }
}

pub fn fp_automorphism(p: &Params, u1: u64, u2: u64, x: &GAElem) -> Result<GAElem, MoritaError> {
    if u1 % p.p == 0 || u2 % p.p == 0 {
        return Err(MoritaError::ZeroScalar);
    }
    Ok(x.map_elems(p.f(), |g| fp_elem(p, u1 % p.p, u2 % p.p, g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn ctx(l: u64, pp: u64, r: u64, j: i64) -> B0Context {
        let p = Arc::new(Params::new(l, pp, r).unwrap());
        let theta = Character::new(&p, CharGroup::Z, j);
        B0Context::new(p, theta).unwrap()
    }

    #[test]
    fn simple_census() {
        for (l, pp, r, n) in [(2, 7, 3, 17), (3, 5, 2, 13), (2, 11, 5, 25)] {
            let p = Params::new(l, pp, r).unwrap();
            let theta = Character::new(&p, CharGroup::Z, 1);
            let s = simples(&p, &theta).unwrap();
            assert_eq!(s.len(), n);
            let mut degs: Vec<u64> = s.iter().map(|x| x.1).collect();
            degs.sort_unstable();
            assert_eq!(degs, crate::verify::clifford_degrees(&p));
            let sq: u64 = degs.iter().map(|d| d * d).sum();
            assert_eq!(sq, pp * pp * r * r);
        }
        let p = Params::new(2, 7, 3).unwrap();
        assert!(simples(&p, &Character::trivial(CharGroup::Z)).is_err());
    }

    #[test]
    fn head_decomposition() {
        let c = ctx(2, 7, 3, 1);
        let p = c.p();
        let head = HeadAlgebra::new(&c).unwrap();
        let dec = head.decompose(p.f(), 1).unwrap();
        assert_eq!(dec.census(3), (13, 4));
        assert_eq!(dec.block_dims.iter().sum::<usize>(), 49);
        for (label, _) in simples(p, &c.theta).unwrap() {
            let eps = HeadAlgebra::coords(&c, &c.tt_eps(&label).unwrap());
            assert!(dec.idempotents.contains(&eps), "{}", label.name());
        }
    }

    #[test]
    fn ext_examples() {
        let c = ctx(2, 7, 3, 1);
        let l = |s| SimpleLabel::from_left(c.p(), s);
        assert_eq!(ext_dim(&c, &l(2), &l(5)).unwrap(), 1);
        assert_eq!(ext_dim(&c, &l(2), &l(2)).unwrap(), 0);
        assert_eq!(ext_dim(&c, &l(2), &SimpleLabel::Right(3)).unwrap(), 0);
        assert!(ext_dim(&c, &SimpleLabel::Pair(1, 1), &SimpleLabel::Pair(1, 1)).unwrap() >= 1);
    }

    #[test]
    fn pairing_and_recovery() {
        let c = ctx(2, 7, 3, 1);
        let p = c.p();
        let table = commutation_pairing(&c).unwrap();
        assert_eq!(table, PairingTable::from_characters(&c));
        assert_eq!(table.get(1, 1), p.zeta_r_pow(-1));
        assert!(table.is_bicharacter(p.f()));
        assert_eq!(recover_theta(&table, p).unwrap(), (1, 2));
        let other = commutation_pairing_with(&c, 2, 3).unwrap();
        assert_eq!(other, table);
    }

    #[test]
    fn pairing_with_even_r_needs_loops() {
        let c = ctx(3, 5, 2, 1);
        assert_eq!(
            commutation_pairing_with(&c, 1, 1),
            Err(MoritaError::DegenerateTilde(1))
        );
        let table = commutation_pairing(&c).unwrap();
        assert_eq!(table, PairingTable::from_characters(&c));
        assert_eq!(recover_theta(&table, c.p()).unwrap(), (1, 1));
    }

    #[test]
    fn mf_numbers() {
        assert_eq!(mf_number(2, 3).unwrap(), 1);
        assert_eq!(mf_number(2, 9).unwrap(), 3);
        assert_eq!(mf_number(2, 7).unwrap(), 3);
        assert!(mf_number(2, 4).is_err());
        for n in 1..=20 {
            assert_eq!(mf_number(2, (1 << n) + 1).unwrap(), n as u64);
        }
        for ell in [2u64, 3, 5] {
            for r in 2..2000u64 {
                if arith::gcd(ell, r) == 1 {
                    assert_eq!(mf_number(ell, r).unwrap(), mf_number_search(ell, r).unwrap());
                }
            }
        }
        assert_eq!(params_for_target(2, 1, DEFAULT_PRIME_CAP).unwrap(), (3, 7));
        assert_eq!(params_for_target(2, 2, DEFAULT_PRIME_CAP).unwrap(), (5, 11));
        assert_eq!(params_for_target(2, 3, DEFAULT_PRIME_CAP).unwrap(), (9, 19));
        assert_eq!(params_for_target(2, 4, DEFAULT_PRIME_CAP).unwrap(), (17, 103));
        assert!(params_for_target(2, 0, DEFAULT_PRIME_CAP).is_err());
        assert!(params_for_target(2, 4, 50).is_err());
    }

    #[test]
    fn equivalence_predicate() {
        let p = Params::new(2, 11, 5).unwrap();
        let t = |j| Character::new(&p, CharGroup::Z, j);
        assert!(morita_equivalent(&p, &t(1), &t(1)).unwrap());
        assert!(morita_equivalent(&p, &t(1), &t(4)).unwrap());
        assert!(!morita_equivalent(&p, &t(1), &t(2)).unwrap());
        assert!(morita_equivalent(&p, &t(1), &t(0)).is_err());
    }

    #[test]
    fn swap_is_an_automorphism() {
        let p = Params::new(2, 7, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let g = p.random_elem(&mut rng);
            let h = p.random_elem(&mut rng);
            assert_eq!(
                swap_elem(&p, &p.mul(&g, &h)),
                p.mul(&swap_elem(&p, &g), &swap_elem(&p, &h))
            );
            assert_eq!(swap_elem(&p, &swap_elem(&p, &g)), g);
            for (u1, u2) in [(2u64, 5u64), (3, 1)] {
                assert_eq!(
                    fp_elem(&p, u1, u2, &p.mul(&g, &h)),
                    p.mul(&fp_elem(&p, u1, u2, &g), &fp_elem(&p, u1, u2, &h))
                );
            }
        }
        assert_eq!(swap_elem(&p, &p.h_elem(0, 0, 1)), p.h_elem(0, 0, 2));
    }
}
