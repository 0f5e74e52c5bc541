//! Independent model of G: each `N_i x| L_i` acts faithfully on
//! `V_i = F_l^p / constants` by affine maps `v -> (k -> v[a k + b] + t[k])`,
//! and H is realised by unipotent 3x3 matrices over `Z/r`. The map
//! `d1(v1) x1 d2(v2) x2 g1^a g2^b gz^c -> (T_v1 M_x1 S^a, T_v2 M_x2 S^b,
//! X^a Y^b Z^c)` is an injective homomorphism.

use std::collections::HashSet;

use blockmf::grp::{GroupElem, Params, Subgroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Affine {
    alpha: u64,
    beta: u64,
    t: Vec<u64>,
}

fn normalize(ell: u64, mut t: Vec<u64>) -> Vec<u64> {
    let c = t[0];
    for x in t.iter_mut() {
        *x = (*x + ell - c) % ell;
    }
    t
}

impl Affine {
    fn identity(p: u64) -> Self {
        Affine { alpha: 1, beta: 0, t: vec![0; p as usize] }
    }

    /// `self o other`.
    fn compose(&self, other: &Affine, ell: u64) -> Affine {
        let p = self.t.len() as u64;
        let t: Vec<u64> = (0..p)
            .map(|k| {
                let moved = (self.alpha * k + self.beta) % p;
                (other.t[moved as usize] + self.t[k as usize]) % ell
            })
            .collect();
        Affine {
            alpha: other.alpha * self.alpha % p,
            beta: (other.alpha * self.beta + other.beta) % p,
            t: normalize(ell, t),
        }
    }
}

type Heis = [[u64; 3]; 3];

fn heis_mul(a: &Heis, b: &Heis, r: u64) -> Heis {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum::<u64>() % r;
        }
    }
    out
}

fn heis_pow(a: &Heis, e: u64, r: u64) -> Heis {
    let mut out = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for _ in 0..e {
        out = heis_mul(&out, a, r);
    }
    out
}

struct Oracle<'a> {
    p: &'a Params,
}

impl Oracle<'_> {
    fn translation(&self, w: u32) -> Affine {
        let mut t = self.p.local.unpack(w);
        t.truncate(self.p.p as usize);
        Affine { alpha: 1, beta: 0, t }
    }

    fn shift(&self, x: u64) -> Affine {
        Affine { alpha: 1, beta: x % self.p.p, ..Affine::identity(self.p.p) }
    }

    fn scale(&self, t: u64) -> Affine {
        Affine { alpha: self.p.local.g0_pow(t), beta: 0, ..Affine::identity(self.p.p) }
    }

    fn side(&self, v: u32, x: u32, t: u32) -> Affine {
        let ell = self.p.ell;
        self.translation(v)
            .compose(&self.shift(x as u64), ell)
            .compose(&self.scale(t as u64), ell)
    }

    fn image(&self, g: &GroupElem) -> (Affine, Affine, Heis) {
        let r = self.p.r;
        let x = [[1, 1, 0], [0, 1, 0], [0, 0, 1]];
        let y = [[1, 0, 0], [0, 1, 1], [0, 0, 1]];
        let z = [[1, 0, 1], [0, 1, 0], [0, 0, 1]];
        let h = heis_mul(
            &heis_mul(&heis_pow(&x, g.a as u64, r), &heis_pow(&y, g.b as u64, r), r),
            &heis_pow(&z, g.c as u64, r),
            r,
        );
        (self.side(g.v1, g.x1, g.a), self.side(g.v2, g.x2, g.b), h)
    }

    fn mul(&self, a: &(Affine, Affine, Heis), b: &(Affine, Affine, Heis)) -> (Affine, Affine, Heis) {
        let ell = self.p.ell;
        (a.0.compose(&b.0, ell), a.1.compose(&b.1, ell), heis_mul(&a.2, &b.2, self.p.r))
    }
}

const CONFIGS: [(u64, u64, u64); 4] = [(2, 7, 3), (3, 5, 2), (2, 11, 5), (5, 7, 6)];

#[test]
fn multiplication_matches_the_affine_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (l, pp, r) in CONFIGS {
        let p = Params::new(l, pp, r).unwrap();
        let o = Oracle { p: &p };
        for _ in 0..2000 {
            let g = p.random_elem(&mut rng);
            let h = p.random_elem(&mut rng);
            assert_eq!(o.image(&p.mul(&g, &h)), o.mul(&o.image(&g), &o.image(&h)), "({l},{pp},{r})");
            let id = o.image(&p.identity());
            assert_eq!(o.mul(&o.image(&g), &o.image(&p.inv(&g))), id);
        }
    }
}

#[test]
fn model_is_faithful_on_enumerated_subgroups() {
    for (l, pp, r, groups) in [
        (2, 7, 3, vec![Subgroup::H, Subgroup::D1, Subgroup::P2]),
        (3, 5, 2, vec![Subgroup::H, Subgroup::D2]),
    ] {
        let p = Params::new(l, pp, r).unwrap();
        let o = Oracle { p: &p };
        for which in groups {
            let elems = p.subgroup_elements(which).unwrap();
            let images: HashSet<_> = elems.iter().map(|g| o.image(g)).collect();
            assert_eq!(images.len(), elems.len(), "{which:?}");
        }
    }
    let p = Params::new(3, 5, 2).unwrap();
    let o = Oracle { p: &p };
    let mut e = HashSet::new();
    for x1 in 0..5 {
        for x2 in 0..5 {
            for (a, b, c) in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)] {
                let g = GroupElem { v1: 0, x1, v2: 0, x2, a, b, c };
                e.insert(o.image(&g));
            }
        }
    }
    assert_eq!(e.len(), 200);
}

#[test]
fn conjugation_matches_the_model() {
    let p = Params::new(3, 5, 2).unwrap();
    let o = Oracle { p: &p };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let x = p.random_elem(&mut rng);
        let g = p.random_elem(&mut rng);
        let expect = o.mul(&o.mul(&o.image(&p.inv(&g)), &o.image(&x)), &o.image(&g));
        assert_eq!(o.image(&p.conjugate(&x, &g)), expect);
    }
}
