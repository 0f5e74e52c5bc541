//! Named property checks over one `(Params, theta)`, shared by the CLI
//! `verify` command and the acceptance test target.

use std::collections::HashSet;
use std::fmt::Display;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith;
use crate::block::{local_basis, local_mul, local_zero, BlockElem, LocalVec};
use crate::chr::{char_frob_power, CharGroup, Character};
use crate::ff::FieldElem;
use crate::galg::{block_idempotent, ga_frobenius_twist, ga_mul, GAElem};
use crate::grp::{GroupElem, Params, Subgroup};
use crate::morita::{
    commutation_pairing, commutation_pairing_with, ext_quiver, fp_automorphism, head_algebra,
    mf_number, mf_number_search, morita_equivalent, params_for_target, recover_theta, simples,
    swap_isomorphism, HeadAlgebra, PairingTable, SimpleLabel, DEFAULT_PRIME_CAP,
};
use crate::quiva::{
    embed_label_local, label_count, label_m, label_mul, label_psi, make_label, qa_isotypic,
    m_add, qa_mul, radical_monomial_classes, unit_m, unpack_m, QuivAElem,
};
use crate::ttb0::{tt_radical_degree, B0Context, TTElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Quick,
    Full,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quick" => Ok(Suite::Quick),
            "full" => Ok(Suite::Full),
            other => Err(format!("unknown suite '{other}' (expected quick or full)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub ell: u64,
    pub p: u64,
    pub r: u64,
    pub theta: u64,
    pub field_order: u64,
}

/// One line of a verify report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub params: ParamsEcho,
    pub check: &'static str,
    pub statement: &'static str,
    pub criterion: u8,
    pub status: Status,
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

type CheckResult = Result<(), Value>;

pub struct CheckSpec {
    pub name: &'static str,
    pub statement: &'static str,
    pub criterion: u8,
    run: fn(&Verifier) -> CheckResult,
}

fn err<E: Display>(e: E) -> Value {
    json!({ "error": e.to_string() })
}

fn ensure(cond: bool, witness: impl FnOnce() -> Value) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

pub static CHECKS: &[CheckSpec] = &[
    CheckSpec {
        name: "dimensions",
        statement: "dim A_i = l^(p-1) p, radical monomial classes = l^(p-1) - 1, dim B0 = |D1|^2 |P1|^2",
        criterion: 1,
        run: check_dimensions,
    },
    CheckSpec {
        name: "h_presentation",
        statement: "H = <g1, g2, gz> with [g1^a, g2^b] = gz^ab, gz central, |H| = r^3",
        criterion: 2,
        run: check_h_presentation,
    },
    CheckSpec {
        name: "action_kernel",
        statement: "the kernel of the action of H on N is Z",
        criterion: 2,
        run: check_action_kernel,
    },
    CheckSpec {
        name: "qa_embed_hom",
        statement: "the quiver algebra embeds into k[D x| P] as an algebra",
        criterion: 3,
        run: check_qa_embed_hom,
    },
    CheckSpec {
        name: "iota_hom",
        statement: "iota_i is an algebra homomorphism",
        criterion: 4,
        run: check_iota_hom,
    },
    CheckSpec {
        name: "iota_formulas",
        statement: "the isotypic and the averaged formulas for iota_i agree",
        criterion: 4,
        run: check_iota_formulas,
    },
    CheckSpec {
        name: "pi_iota",
        statement: "pi(iota_1(a) iota_2(b)) = a (x) b",
        criterion: 4,
        run: check_pi_iota,
    },
    CheckSpec {
        name: "iota_centralizes",
        statement: "iota-images centralize kH e_theta",
        criterion: 4,
        run: check_iota_centralizes,
    },
    CheckSpec {
        name: "block_engine",
        statement: "factored block multiplication equals group-algebra multiplication",
        criterion: 5,
        run: check_block_engine,
    },
    CheckSpec {
        name: "tt_mul_gate",
        statement: "the twisted product equals the product in B0 transported by pi",
        criterion: 5,
        run: check_tt_mul_gate,
    },
    CheckSpec {
        name: "simples",
        statement: "Irr(E|theta) census with degrees r and r^2",
        criterion: 6,
        run: check_simples,
    },
    CheckSpec {
        name: "idempotents",
        statement: "the epsilons are orthogonal idempotents summing to 1",
        criterion: 7,
        run: check_idempotents,
    },
    CheckSpec {
        name: "head_algebra",
        statement: "B0/J(B0) has 2p-1 blocks of dimension 1 and ((p-1)/r)^2 of dimension r^2",
        criterion: 7,
        run: check_head_algebra,
    },
    CheckSpec {
        name: "ext_quiver",
        statement: "Ext quiver: single arrows inside each one-sided family, none across, loops at orbit pairs",
        criterion: 8,
        run: check_ext_quiver,
    },
    CheckSpec {
        name: "radical_power",
        statement: "l-fold arrow products with trivial step product lie in J^(l+1) iff all steps agree",
        criterion: 9,
        run: check_radical_power,
    },
    CheckSpec {
        name: "pairing",
        statement: "S~ T~ = theta([h_(eta,2), h_(chi,1)]) T~ S~",
        criterion: 10,
        run: check_pairing,
    },
    CheckSpec {
        name: "recover",
        statement: "the pairing determines theta up to inversion",
        criterion: 10,
        run: check_recover,
    },
    CheckSpec {
        name: "classification",
        statement: "B(theta) and B(theta') are Morita equivalent iff theta' = theta^(+-1)",
        criterion: 10,
        run: check_classification,
    },
    CheckSpec {
        name: "frobenius",
        statement: "the Frobenius twist of e_theta is e_(theta^l)",
        criterion: 11,
        run: check_frobenius,
    },
    CheckSpec {
        name: "mf_arith",
        statement: "mf(B) = n for r = l^n + 1 and the prime recipe",
        criterion: 11,
        run: check_mf_arith,
    },
    CheckSpec {
        name: "swap_iso",
        statement: "swapping the factors gives B(theta) -> B(theta^-1), (phi, psi) -> (psi, phi)",
        criterion: 12,
        run: check_swap_iso,
    },
    CheckSpec {
        name: "fp_auto",
        statement: "scaling D_i x| P_i gives an automorphism of B(theta) permuting the simples",
        criterion: 12,
        run: check_fp_auto,
    },
];

pub fn find_check(name: &str) -> Option<&'static CheckSpec> {
    CHECKS.iter().find(|c| c.name == name)
}

pub const DEFAULT_SEED: u64 = 20240611;

pub struct Verifier {
    pub ctx: B0Context,
    pub suite: Suite,
    pub seed: u64,
}

impl Verifier {
    pub fn new(params: Arc<Params>, theta: u64, suite: Suite, seed: u64) -> Result<Self, crate::ttb0::TtError> {
        let theta = Character::new(&params, CharGroup::Z, theta as i64);
        Ok(Verifier {
            ctx: B0Context::new(params, theta)?,
            suite,
            seed,
        })
    }

    pub fn p(&self) -> &Params {
        self.ctx.p()
    }

    pub fn echo(&self) -> ParamsEcho {
        let p = self.p();
        ParamsEcho {
            ell: p.ell,
            p: p.p,
            r: p.r,
            theta: self.ctx.theta.e,
            field_order: p.f().order(),
        }
    }

    fn rng(&self, name: &str) -> ChaCha8Rng {
        let mut h = self.seed ^ 0xcbf2_9ce4_8422_2325;
        for b in name.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(h)
    }

    fn samples(&self) -> usize {
        match (self.suite, self.p().local.order() <= DENSE_LIMIT) {
            (Suite::Quick, true) => 100,
            (Suite::Full, true) => 400,
            (Suite::Quick, false) => 10,
            (Suite::Full, false) => 100,
        }
    }

    pub fn run(&self, spec: &CheckSpec) -> CheckReport {
        let start = Instant::now();
        let result = (spec.run)(self);
        CheckReport {
            params: self.echo(),
            check: spec.name,
            statement: spec.statement,
            criterion: spec.criterion,
            status: if result.is_ok() { Status::Pass } else { Status::Fail },
            ms: start.elapsed().as_millis() as u64,
            witness: result.err(),
        }
    }

    /// Runs every check in order, handing each report to `sink`; true iff
    /// all pass.
    pub fn run_all(&self, mut sink: impl FnMut(&CheckReport)) -> bool {
        let mut ok = true;
        for spec in CHECKS {
            let report = self.run(spec);
            ok &= report.status == Status::Pass;
            sink(&report);
        }
        ok
    }
}

fn rand_nonzero<R: Rng>(p: &Params, rng: &mut R) -> FieldElem {
    p.f().from_index(rng.gen_range(1..p.f().order()))
}

/// Local group order above which sampled labels are restricted to radical
/// degree at most 2, keeping dense products affordable.
pub const DENSE_LIMIT: u32 = 4096;

/// A uniformly random label, or for large local groups a random label of
/// radical degree at most 2.
pub fn random_label<R: Rng>(p: &Params, rng: &mut R) -> u32 {
    if p.local.order() <= DENSE_LIMIT {
        return rng.gen_range(0..label_count(p));
    }
    let mut m = 0;
    for _ in 0..rng.gen_range(0..=2) {
        let step = unit_m(p, rng.gen_range(1..p.p));
        m = m_add(p, m, step).unwrap_or(m);
    }
    make_label(p, rng.gen_range(0..p.p), m)
}

pub fn random_qa<R: Rng>(p: &Params, side: u8, rng: &mut R, terms: usize) -> QuivAElem {
    let mut out = QuivAElem::zero(side);
    for _ in 0..terms {
        out.add_term(p.f(), random_label(p, rng), rand_nonzero(p, rng));
    }
    out
}

pub fn random_tt<R: Rng>(ctx: &B0Context, rng: &mut R, terms: usize) -> TTElem {
    let p = ctx.p();
    let mut out = TTElem::zero(ctx.theta.e);
    for _ in 0..terms {
        out.add_term(p.f(), random_label(p, rng), random_label(p, rng), rand_nonzero(p, rng));
    }
    out
}

pub fn random_ga<R: Rng>(p: &Params, rng: &mut R, terms: usize) -> GAElem {
    let mut out = GAElem::zero();
    for _ in 0..terms {
        let g = p.random_elem(rng);
        out.add_term(p.f(), g, rand_nonzero(p, rng));
    }
    out
}

fn tt_eq(a: &TTElem, b: &TTElem) -> bool {
    a.sorted_terms() == b.sorted_terms()
}

fn ga_eq(p: &Params, a: &GAElem, b: &GAElem) -> bool {
    a.sub(p.f(), b).is_zero()
}

/// Degrees of `Irr(E | theta)` by Clifford theory: orbits of
/// `Irr(P1) x Irr(P2)` under `L1 x L2`, each contributing one character of
/// degree `r` when the stabilizer is everything, and otherwise `|stab|`
/// characters of degree `r^2 / |stab|`.
pub fn clifford_degrees(p: &Params) -> Vec<u64> {
    let r = p.r;
    let mut seen = HashSet::new();
    let mut degrees = Vec::new();
    for a in 0..p.p {
        for b in 0..p.p {
            if seen.contains(&(a, b)) {
                continue;
            }
            let mut stab = 0u64;
            for s in 0..r {
                for t in 0..r {
                    let img = (a * p.local.g0_pow(s) % p.p, b * p.local.g0_pow(t) % p.p);
                    seen.insert(img);
                    if img == (a, b) {
                        stab += 1;
                    }
                }
            }
            if stab == r * r {
                degrees.push(r);
            } else {
                degrees.extend(std::iter::repeat(r * r / stab).take(stab as usize));
            }
        }
    }
    degrees.sort_unstable();
    degrees
}

fn check_dimensions(v: &Verifier) -> CheckResult {
    let p = v.p();
    let dim_a = label_count(p) as u64;
    let expect_a = p.ell.pow(p.p as u32 - 1) * p.p;
    let classes = radical_monomial_classes(p) as u64;
    let dim_b0 = v.ctx.label_count();
    ensure(
        dim_a == expect_a
            && dim_a == p.local.order() as u64
            && classes == p.ell.pow(p.p as u32 - 1) - 1
            && dim_b0 == (p.dsize() as u64 * p.p).pow(2),
        || json!({ "dim_a": dim_a, "classes": classes, "dim_b0": dim_b0 }),
    )
}

fn check_h_presentation(v: &Verifier) -> CheckResult {
    let p = v.p();
    let r = p.r;
    let hs = p.subgroup_elements(Subgroup::H).map_err(err)?;
    let (g1, g2, gz) = (p.h_elem(1, 0, 0), p.h_elem(0, 1, 0), p.h_elem(0, 0, 1));
    let id = p.identity();
    ensure(hs.len() as u64 == r * r * r, || json!({ "order": hs.len() }))?;
    for g in [g1, g2, gz] {
        ensure(p.pow(&g, r) == id, || json!({ "not_of_order_r": p.elem_json(&g) }))?;
    }
    let mut normal_forms = HashSet::new();
    for a in 0..r {
        for b in 0..r {
            let comm = p.commutator(&p.pow(&g1, a), &p.pow(&g2, b));
            ensure(comm == p.pow(&gz, a * b), || json!({ "a": a, "b": b, "commutator": p.elem_json(&comm) }))?;
            for c in 0..r {
                let g = p.mul(&p.mul(&p.pow(&g1, a), &p.pow(&g2, b)), &p.pow(&gz, c));
                normal_forms.insert(g);
            }
        }
    }
    ensure(normal_forms.len() == hs.len(), || json!({ "normal_forms": normal_forms.len() }))?;
    for x in &hs {
        ensure(p.mul(&gz, x) == p.mul(x, &gz), || json!({ "gz_not_central_at": p.elem_json(x) }))?;
        ensure(p.mul(x, &p.inv(x)) == id, || json!({ "bad_inverse": p.elem_json(x) }))?;
    }
    let mut rng = v.rng("h_presentation");
    let triples: Vec<(usize, usize, usize)> = if hs.len() <= 125 {
        let n = hs.len();
        (0..n * n * n).map(|k| (k / (n * n), (k / n) % n, k % n)).collect()
    } else {
        (0..20_000)
            .map(|_| {
                let n = hs.len();
                (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))
            })
            .collect()
    };
    for (i, j, k) in triples {
        let (x, y, z) = (&hs[i], &hs[j], &hs[k]);
        ensure(p.mul(&p.mul(x, y), z) == p.mul(x, &p.mul(y, z)), || {
            json!({ "not_associative": [p.elem_json(x), p.elem_json(y), p.elem_json(z)] })
        })?;
    }
    Ok(())
}

fn check_action_kernel(v: &Verifier) -> CheckResult {
    let p = v.p();
    let hs = p.subgroup_elements(Subgroup::H).map_err(err)?;
    let gens = [p.d_gen(1, 0), p.p_elem(1, 1), p.d_gen(2, 0), p.p_elem(2, 1)];
    let kernel: Vec<GroupElem> = hs
        .into_iter()
        .filter(|h| gens.iter().all(|n| p.conjugate(n, h) == *n))
        .collect();
    let ok = kernel.len() as u64 == p.r && kernel.iter().all(|h| h.a == 0 && h.b == 0);
    ensure(ok, || json!({ "kernel": kernel.iter().map(|h| p.elem_json(h)).collect::<Vec<_>>() }))
}

/// Multiplication table of `D x| P` by local index.
struct LocalTable {
    order: usize,
    table: Vec<u32>,
}

impl LocalTable {
    fn new(p: &Params) -> Self {
        let order = p.local.order() as usize;
        let mut table = Vec::with_capacity(order * order);
        for n in 0..order as u32 {
            for m in 0..order as u32 {
                table.push(p.local.mul_idx(n, m));
            }
        }
        LocalTable { order, table }
    }

    fn mul(&self, p: &Params, x: &[FieldElem], y: &[(u32, FieldElem)]) -> LocalVec {
        let f = p.f();
        let mut out = vec![FieldElem::ZERO; self.order];
        for (n, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let row = &self.table[n * self.order..(n + 1) * self.order];
            for &(m, b) in y {
                let k = row[m as usize] as usize;
                out[k] = f.add(out[k], f.mul(*a, b));
            }
        }
        out
    }
}

fn sparse(x: &[FieldElem]) -> Vec<(u32, FieldElem)> {
    x.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as u32, *c))
        .collect()
}

fn check_qa_embed_hom(v: &Verifier) -> CheckResult {
    let p = v.p();
    let n = label_count(p);
    if v.suite == Suite::Quick {
        // E(v) = E(e_psi) s_1^(m_1) ... s_(p-1)^(m_(p-1)) is checked first;
        // E(u) E(v) is then accumulated one arrow at a time.
        let mut rng = v.rng("qa_embed_hom");
        for _ in 0..200 {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let e_psi = embed_label_local(p, make_label(p, label_psi(p, b), 0));
            let mut ev = e_psi.clone();
            let mut prod = local_mul(p, &embed_label_local(p, a), &e_psi);
            for (k, &mult) in unpack_m(p, label_m(p, b)).iter().enumerate() {
                let step = embedded_step(p, k as u64 + 1);
                for _ in 0..mult {
                    ev = local_mul(p, &ev, &step);
                    prod = local_mul(p, &prod, &step);
                }
            }
            ensure(ev == embed_label_local(p, b), || json!({ "label_is_not_e_psi_times_monomial": b }))?;
            let expect = label_mul(p, a, b).map_or_else(|| local_zero(p), |k| embed_label_local(p, k));
            ensure(prod == expect, || json!({ "u": a, "v": b }))?;
        }
        return Ok(());
    }
    let embedded: Vec<LocalVec> = (0..n).map(|k| embed_label_local(p, k)).collect();
    let image = |k: Option<u32>| match k {
        Some(k) => embedded[k as usize].clone(),
        None => local_zero(p),
    };
    // Every pair (u, (psi, m)) is computed as E(u) E(e_psi) s_(k1) ... s_(kd)
    // along the recursion m = m' + unit, after checking that the embedded
    // labels are exactly e_psi times these products.
    let table = LocalTable::new(p);
    let ds = p.dsize();
    let ell = p.ell as u32;
    let parent = |m: u32| {
        let mut k = 0;
        let mut rest = m;
        while rest % ell == 0 {
            rest /= ell;
            k += 1;
        }
        (m - ell.pow(k), k as u64 + 1)
    };
    let steps: Vec<Vec<(u32, FieldElem)>> = (0..p.p)
        .map(|s| sparse(&embedded_step(p, s)))
        .collect();
    let mut mono: Vec<LocalVec> = vec![local_basis(p, 0)];
    for m in 1..ds {
        let (prev, s) = parent(m);
        mono.push(table.mul(p, &mono[prev as usize], &steps[s as usize]));
    }
    for k in 0..n {
        let e_psi = &embedded[make_label(p, label_psi(p, k), 0) as usize];
        let prod = table.mul(p, e_psi, &sparse(&mono[label_m(p, k) as usize]));
        ensure(prod == embedded[k as usize], || json!({ "label_is_not_e_psi_times_monomial": k }))?;
    }
    for u in 0..n {
        let eu = &embedded[u as usize];
        for psi in 0..p.p {
            let e = make_label(p, psi, 0);
            let mut chain: Vec<LocalVec> = Vec::with_capacity(ds as usize);
            chain.push(table.mul(p, eu, &sparse(&embedded[e as usize])));
            for m in 1..ds {
                let (prev, s) = parent(m);
                chain.push(table.mul(p, &chain[prev as usize], &steps[s as usize]));
            }
            for (m, prod) in chain.iter().enumerate() {
                let w = make_label(p, psi, m as u32);
                ensure(*prod == image(label_mul(p, u, w)), || json!({ "u": u, "v": w }))?;
            }
        }
    }
    Ok(())
}

/// `s_(phi_s) = sum_g zeta_p^(-sg) d_g` as a local vector.
fn embedded_step(p: &Params, s: u64) -> LocalVec {
    let mut out = local_zero(p);
    for g in 0..p.p {
        out[p.local.d_basis(g) as usize] = p.zeta_p_pow(-((s * g) as i64));
    }
    out
}

fn check_iota_hom(v: &Verifier) -> CheckResult {
    let p = v.p();
    let mut rng = v.rng("iota_hom");
    for k in 0..v.samples() {
        let side = 1 + (k % 2) as u8;
        let a = random_qa(p, side, &mut rng, 2);
        let b = random_qa(p, side, &mut rng, 2);
        let lhs = v.ctx.iota_block(&a).map_err(err)?.mul(p, &v.ctx.iota_block(&b).map_err(err)?);
        let rhs = v.ctx.iota_block(&qa_mul(p, &a, &b).map_err(err)?).map_err(err)?;
        ensure(lhs.equals(p, &rhs), || json!({ "a": a.to_json(p), "b": b.to_json(p) }))?;
    }
    Ok(())
}

fn all_labels_or_sample(v: &Verifier, name: &str) -> Vec<u32> {
    let p = v.p();
    let n = label_count(p);
    if v.suite == Suite::Full || n <= 2000 {
        return (0..n).collect();
    }
    let mut rng = v.rng(name);
    let mut all: Vec<u32> = (0..200).map(|_| random_label(p, &mut rng)).collect();
    all.sort_unstable();
    all.dedup();
    all
}

fn check_iota_formulas(v: &Verifier) -> CheckResult {
    let p = v.p();
    for side in [1u8, 2] {
        for k in all_labels_or_sample(v, "iota_formulas") {
            let a = QuivAElem::basis(side, k);
            let x = v.ctx.iota_block(&a).map_err(err)?;
            let y = v.ctx.iota_block_averaged(&a).map_err(err)?;
            ensure(x.equals(p, &y), || json!({ "side": side, "label": k }))?;
        }
    }
    Ok(())
}

fn check_pi_iota(v: &Verifier) -> CheckResult {
    let p = v.p();
    let f = p.f();
    let mut rng = v.rng("pi_iota");
    for k in 0..v.samples() {
        let mut a = random_qa(p, 1, &mut rng, 1 + k % 3);
        let mut b = random_qa(p, 2, &mut rng, 1 + k % 2);
        if k % 2 == 0 {
            let e = rng.gen_range(0..p.r) as i64;
            a = qa_isotypic(p, &a, &Character::new(p, CharGroup::L1, e)).map_err(err)?;
            b = qa_isotypic(p, &b, &Character::new(p, CharGroup::L2, e + 1)).map_err(err)?;
        }
        let prod = v.ctx.iota_block(&a).map_err(err)?.mul(p, &v.ctx.iota_block(&b).map_err(err)?);
        let image = v.ctx.pi_block(&prod);
        let expect = TTElem::tensor(f, v.ctx.theta.e, &a, &b);
        ensure(tt_eq(&image, &expect), || json!({ "a": a.to_json(p), "b": b.to_json(p) }))?;
    }
    ensure(
        tt_eq(&v.ctx.pi_block(&BlockElem::one(p, v.ctx.theta.e)), &v.ctx.one()),
        || json!({ "unit": "pi(e_theta) != 1 (x) 1" }),
    )
}

fn check_iota_centralizes(v: &Verifier) -> CheckResult {
    for side in [1u8, 2] {
        for k in all_labels_or_sample(v, "iota_centralizes") {
            let x = v.ctx.iota_block(&QuivAElem::basis(side, k)).map_err(err)?;
            ensure(v.ctx.block_in_b0(&x), || json!({ "side": side, "label": k }))?;
        }
    }
    Ok(())
}

fn check_block_engine(v: &Verifier) -> CheckResult {
    let p = v.p();
    let j = v.ctx.theta.e;
    let e = block_idempotent(p, &v.ctx.theta).map_err(err)?;
    let mut rng = v.rng("block_engine");
    for _ in 0..v.samples() / 5 {
        let x = ga_mul(p, &random_ga(p, &mut rng, 3), &e);
        let y = ga_mul(p, &random_ga(p, &mut rng, 3), &e);
        let via_block = BlockElem::from_ga(p, j, &x)
            .mul(p, &BlockElem::from_ga(p, j, &y))
            .to_ga(p);
        ensure(ga_eq(p, &via_block, &ga_mul(p, &x, &y)), || {
            json!({ "x": x.to_json(p), "y": y.to_json(p) })
        })?;
    }
    Ok(())
}

fn check_tt_mul_gate(v: &Verifier) -> CheckResult {
    let p = v.p();
    let mut rng = v.rng("tt_mul_gate");
    for k in 0..v.samples() {
        let t = random_tt(&v.ctx, &mut rng, 1 + k % 2);
        let s = random_tt(&v.ctx, &mut rng, 1);
        let fast = v.ctx.tt_mul(&t, &s).map_err(err)?;
        let slow = v.ctx.pi_block(
            &v.ctx
                .pi_inv_block(&t)
                .map_err(err)?
                .mul(p, &v.ctx.pi_inv_block(&s).map_err(err)?),
        );
        ensure(tt_eq(&fast, &slow), || json!({ "t": t.to_json(p), "s": s.to_json(p) }))?;
    }
    Ok(())
}

fn check_simples(v: &Verifier) -> CheckResult {
    let p = v.p();
    let list = simples(p, &v.ctx.theta).map_err(err)?;
    let orbits = (p.p - 1) / p.r;
    let mut degrees: Vec<u64> = list.iter().map(|x| x.1).collect();
    degrees.sort_unstable();
    let sq: u64 = degrees.iter().map(|d| d * d).sum();
    ensure(
        list.len() as u64 == 2 * p.p - 1 + orbits * orbits
            && degrees == clifford_degrees(p)
            && sq == p.p * p.p * p.r * p.r,
        || json!({ "count": list.len(), "degrees": degrees, "sum_of_squares": sq }),
    )
}

fn epsilons(v: &Verifier) -> Result<Vec<(SimpleLabel, TTElem)>, Value> {
    simples(v.p(), &v.ctx.theta)
        .map_err(err)?
        .into_iter()
        .map(|(l, _)| v.ctx.tt_eps(&l).map(|e| (l, e)).map_err(err))
        .collect()
}

fn check_idempotents(v: &Verifier) -> CheckResult {
    let f = v.p().f();
    let eps = epsilons(v)?;
    let mut sum = TTElem::zero(v.ctx.theta.e);
    for (la, ea) in &eps {
        sum = sum.add(f, ea);
        for (lb, eb) in &eps {
            let prod = v.ctx.tt_mul(ea, eb).map_err(err)?;
            let expect = if la == lb { ea.clone() } else { TTElem::zero(v.ctx.theta.e) };
            ensure(tt_eq(&prod, &expect), || json!({ "a": la.name(), "b": lb.name() }))?;
        }
    }
    ensure(tt_eq(&sum, &v.ctx.one()), || json!({ "sum": sum.to_json(v.p()) }))
}

fn check_head_algebra(v: &Verifier) -> CheckResult {
    let p = v.p();
    let dec = head_algebra(&v.ctx).map_err(err)?;
    let orbits = ((p.p - 1) / p.r) as usize;
    let census = dec.census(p.r);
    ensure(
        census == (2 * p.p as usize - 1, orbits * orbits)
            && dec.block_dims.len() == census.0 + census.1,
        || json!({ "block_dims": dec.block_dims }),
    )?;
    for (l, e) in epsilons(v)? {
        let coords = HeadAlgebra::coords(&v.ctx, &e);
        ensure(dec.idempotents.contains(&coords), || {
            json!({ "epsilon_not_primitive_central": l.name() })
        })?;
    }
    Ok(())
}

fn check_ext_quiver(v: &Verifier) -> CheckResult {
    let (labels, table) = ext_quiver(&v.ctx).map_err(err)?;
    let family = |l: &SimpleLabel| match l {
        SimpleLabel::Trivial => 3,
        SimpleLabel::Left(_) => 1,
        SimpleLabel::Right(_) => 2,
        SimpleLabel::Pair(..) => 0,
    };
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate() {
            let (fa, fb) = (family(a), family(b));
            let expect = if fa == 0 || fb == 0 {
                None
            } else if fa & fb != 0 {
                Some(usize::from(i != j))
            } else {
                Some(0)
            };
            let ok = match expect {
                Some(e) => table[i][j] == e,
                None => !(i == j && table[i][j] == 0),
            };
            ensure(ok, || json!({ "a": a.name(), "b": b.name(), "ext": table[i][j] }))?;
        }
    }
    Ok(())
}

fn check_radical_power(v: &Verifier) -> CheckResult {
    let p = v.p();
    let ell = p.ell as usize;
    let mut rng = v.rng("radical_power");
    let total = (p.p - 1).pow(ell as u32 - 1);
    let prefixes: Vec<Vec<u64>> = if total <= 20_000 {
        (0..total)
            .map(|mut k| {
                (0..ell - 1)
                    .map(|_| {
                        let s = 1 + k % (p.p - 1);
                        k /= p.p - 1;
                        s
                    })
                    .collect()
            })
            .collect()
    } else {
        (0..2000)
            .map(|_| (0..ell - 1).map(|_| rng.gen_range(1..p.p)).collect())
            .collect()
    };
    for side in [1u8, 2] {
        for prefix in &prefixes {
            let partial: u64 = prefix.iter().sum::<u64>() % p.p;
            if partial == 0 {
                continue;
            }
            let mut steps = prefix.clone();
            steps.push(p.p - partial);
            let mut vertex = 0u64;
            let mut prod = v.ctx.one();
            for &s in &steps {
                let arrow = v.ctx.tt_arrow(side, vertex, s).map_err(err)?;
                prod = v.ctx.tt_mul(&prod, &arrow).map_err(err)?;
                vertex = (vertex + s) % p.p;
            }
            let in_power = match tt_radical_degree(p, &prod) {
                Err(_) => true,
                Ok(d) => d > ell,
            };
            let all_equal = steps.iter().all(|&s| s == steps[0]);
            ensure(in_power == all_equal, || {
                json!({ "side": side, "steps": steps, "in_power": in_power })
            })?;
        }
    }
    Ok(())
}

fn check_pairing(v: &Verifier) -> CheckResult {
    let p = v.p();
    let f = p.f();
    let table = commutation_pairing(&v.ctx).map_err(err)?;
    let closed = PairingTable::from_characters(&v.ctx);
    let j_inv = arith::inv_mod(v.ctx.theta.e, p.r).unwrap() as i64;
    ensure(
        table == closed && table.is_bicharacter(f) && table.get(1, 1) == p.zeta_r_pow(-j_inv),
        || json!({ "computed": table.to_json(f), "closed": closed.to_json(f) }),
    )?;
    if p.r % 2 == 1 {
        let other = commutation_pairing_with(&v.ctx, 2, 3).map_err(err)?;
        ensure(other == table, || json!({ "second_generators": other.to_json(f) }))?;
    }
    Ok(())
}

fn check_recover(v: &Verifier) -> CheckResult {
    let p = v.p();
    let table = commutation_pairing(&v.ctx).map_err(err)?;
    let got = recover_theta(&table, p).map_err(err)?;
    let j = v.ctx.theta.e;
    let other = (p.r - j) % p.r;
    ensure(got == (j.min(other), j.max(other)), || json!({ "recovered": [got.0, got.1] }))
}

fn check_classification(v: &Verifier) -> CheckResult {
    let p = v.p();
    let faithful: Vec<Character> = Character::all(p, CharGroup::Z)
        .into_iter()
        .filter(|c| c.is_faithful(p))
        .collect();
    let mut recovered = Vec::new();
    for theta in &faithful {
        let ctx = B0Context::new(v.ctx.params.clone(), *theta).map_err(err)?;
        let table = commutation_pairing(&ctx).map_err(err)?;
        recovered.push(recover_theta(&table, p).map_err(err)?);
    }
    for (a, ra) in faithful.iter().zip(&recovered) {
        for (b, rb) in faithful.iter().zip(&recovered) {
            let eq = morita_equivalent(p, a, b).map_err(err)?;
            ensure(eq == (ra == rb), || {
                json!({ "theta": a.e, "theta2": b.e, "recovered": [[ra.0, ra.1], [rb.0, rb.1]], "equivalent": eq })
            })?;
        }
    }
    Ok(())
}

fn check_frobenius(v: &Verifier) -> CheckResult {
    let p = v.p();
    for theta in Character::all(p, CharGroup::Z) {
        if !theta.is_faithful(p) {
            continue;
        }
        let twisted = ga_frobenius_twist(p, &block_idempotent(p, &theta).map_err(err)?);
        let next = char_frob_power(p, &theta, 1);
        let expect = block_idempotent(p, &next).map_err(err)?;
        ensure(next.e == theta.e * p.ell % p.r && ga_eq(p, &twisted, &expect), || {
            json!({ "theta": theta.e, "image": next.e })
        })?;
    }
    Ok(())
}

fn check_mf_arith(_: &Verifier) -> CheckResult {
    for n in 1..=20u32 {
        let got = mf_number(2, (1u64 << n) + 1).map_err(err)?;
        ensure(got == n as u64, || json!({ "n": n, "mf": got }))?;
    }
    for ell in [2u64, 3, 5] {
        for r in 2..=10_000u64 {
            if arith::gcd(ell, r) != 1 {
                continue;
            }
            let (a, b) = (mf_number(ell, r).map_err(err)?, mf_number_search(ell, r).map_err(err)?);
            ensure(a == b, || json!({ "ell": ell, "r": r, "closed": a, "search": b }))?;
        }
    }
    for (n, expect) in [(1, (3, 7)), (2, (5, 11)), (3, (9, 19)), (4, (17, 103))] {
        let got = params_for_target(2, n, DEFAULT_PRIME_CAP).map_err(err)?;
        ensure(got == expect && mf_number(2, got.0).map_err(err)? == n as u64, || {
            json!({ "n": n, "r": got.0, "p": got.1 })
        })?;
    }
    Ok(())
}

fn check_swap_iso(v: &Verifier) -> CheckResult {
    let p = v.p();
    let mut rng = v.rng("swap_iso");
    for _ in 0..v.samples() {
        let x = random_ga(p, &mut rng, 3);
        let y = random_ga(p, &mut rng, 3);
        let lhs = swap_isomorphism(p, &ga_mul(p, &x, &y));
        let rhs = ga_mul(p, &swap_isomorphism(p, &x), &swap_isomorphism(p, &y));
        ensure(ga_eq(p, &lhs, &rhs), || json!({ "x": x.to_json(p), "y": y.to_json(p) }))?;
    }
    let inv = v.ctx.theta.inverse(p);
    let e = block_idempotent(p, &v.ctx.theta).map_err(err)?;
    ensure(
        ga_eq(p, &swap_isomorphism(p, &e), &block_idempotent(p, &inv).map_err(err)?),
        || json!({ "idempotent_not_mapped_to_inverse_block": v.ctx.theta.e }),
    )?;
    let other = B0Context::new(v.ctx.params.clone(), inv).map_err(err)?;
    for (label, eps) in epsilons(v)? {
        let swapped = match label {
            SimpleLabel::Trivial => SimpleLabel::Trivial,
            SimpleLabel::Left(s) => SimpleLabel::Right(s),
            SimpleLabel::Right(s) => SimpleLabel::Left(s),
            SimpleLabel::Pair(a, b) => SimpleLabel::Pair(b, a),
        };
        let image = swap_isomorphism(p, &v.ctx.b0_pi_inv(&eps).map_err(err)?);
        let target = other.b0_pi_inv(&other.tt_eps(&swapped).map_err(err)?).map_err(err)?;
        ensure(ga_eq(p, &image, &target), || json!({ "label": label.name(), "expected": swapped.name() }))?;
    }
    Ok(())
}

fn check_fp_auto(v: &Verifier) -> CheckResult {
    let p = v.p();
    let mut rng = v.rng("fp_auto");
    let mut units = vec![(1, 1)];
    for _ in 0..2 {
        units.push((rng.gen_range(1..p.p), rng.gen_range(1..p.p)));
    }
    let e = block_idempotent(p, &v.ctx.theta).map_err(err)?;
    let eps = epsilons(v)?;
    for &(u1, u2) in &units {
        let fp = |x: &GAElem| fp_automorphism(p, u1, u2, x).map_err(err);
        for _ in 0..v.samples() / units.len() + 1 {
            let x = random_ga(p, &mut rng, 3);
            let y = random_ga(p, &mut rng, 3);
            ensure(ga_eq(p, &fp(&ga_mul(p, &x, &y))?, &ga_mul(p, &fp(&x)?, &fp(&y)?)), || {
                json!({ "u": [u1, u2], "x": x.to_json(p), "y": y.to_json(p) })
            })?;
        }
        ensure(ga_eq(p, &fp(&e)?, &e), || json!({ "u": [u1, u2], "moves_e_theta": true }))?;
        let (i1, i2) = (
            arith::inv_mod(u1, p.p).unwrap(),
            arith::inv_mod(u2, p.p).unwrap(),
        );
        for (label, x) in &eps {
            let moved = match *label {
                SimpleLabel::Trivial => SimpleLabel::Trivial,
                SimpleLabel::Left(s) => SimpleLabel::from_left(p, s * i1),
                SimpleLabel::Right(s) => SimpleLabel::from_right(p, s * i2),
                SimpleLabel::Pair(a, b) => SimpleLabel::from_pair(p, a * i1, b * i2),
            };
            let image = fp(&v.ctx.b0_pi_inv(x).map_err(err)?)?;
            let target = v.ctx.b0_pi_inv(&v.ctx.tt_eps(&moved).map_err(err)?).map_err(err)?;
            ensure(ga_eq(p, &image, &target), || {
                json!({ "u": [u1, u2], "label": label.name(), "expected": moved.name() })
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_are_unique_and_cover_all_criteria() {
        let names: HashSet<_> = CHECKS.iter().map(|c| c.name).collect();
        assert_eq!(names.len(), CHECKS.len());
        let crit: HashSet<_> = CHECKS.iter().map(|c| c.criterion).collect();
        assert_eq!(crit, (1..=12).collect());
        assert_eq!("full".parse::<Suite>().unwrap(), Suite::Full);
        assert!("slow".parse::<Suite>().is_err());
    }

    #[test]
    fn clifford_oracle_counts() {
        let p = Params::new(2, 7, 3).unwrap();
        let d = clifford_degrees(&p);
        assert_eq!(d.len(), 17);
        assert_eq!(d.iter().filter(|&&x| x == 9).count(), 4);
        let p = Params::new(3, 5, 2).unwrap();
        assert_eq!(clifford_degrees(&p).len(), 13);
    }
}
