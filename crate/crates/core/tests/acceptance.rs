//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the report is always printed; exits non-zero on any failure.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use blockmf::chr::{CharGroup, Character};
use blockmf::grp::Params;
use blockmf::morita::{
    commutation_pairing, head_algebra, morita_equivalent, recover_theta, simples,
};
use blockmf::quiva::{label_count, radical_monomial_classes};
use blockmf::ttb0::B0Context;
use blockmf::verify::{find_check, Status, Suite, Verifier, DEFAULT_SEED};

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, notes: Vec::new() }
    }

    fn expect(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(what.into());
        }
    }

    /// Runs named checks and fails on any failing check.
    fn checks(&mut self, v: &Verifier, names: &[&str]) {
        for name in names {
            let report = v.run(find_check(name).expect("known check"));
            if report.status != Status::Pass {
                let p = v.p();
                self.expect(
                    false,
                    format!(
                        "{name} at ({},{},{}): {}",
                        p.ell,
                        p.p,
                        p.r,
                        report.witness.map(|w| w.to_string()).unwrap_or_default()
                    ),
                );
            }
        }
    }

    /// Runs checks and additionally requires them to finish within `budget`.
    fn timed_checks(&mut self, v: &Verifier, names: &[&str], budget: Duration) {
        let start = Instant::now();
        self.checks(v, names);
        let took = start.elapsed();
        let p = v.p();
        self.expect(
            took <= budget,
            format!("{names:?} at ({},{},{}) took {took:?} > {budget:?}", p.ell, p.p, p.r),
        );
    }
}

struct Desk {
    a: Verifier,
    b: Verifier,
    a_full: Verifier,
    c: Verifier,
}

fn verifier(l: u64, p: u64, r: u64, suite: Suite) -> Verifier {
    let params = Arc::new(Params::new(l, p, r).unwrap());
    Verifier::new(params, 1, suite, DEFAULT_SEED).unwrap()
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn c1(d: &Desk, o: &mut Outcome) {
    let p = d.a.p();
    o.expect(label_count(p) == 448, "dim A_i != 448");
    o.expect(radical_monomial_classes(p) == 63, "monomial classes != 63");
    o.expect(d.a.ctx.label_count() == 200_704, "B0 label count != 200704");
    o.timed_checks(&d.a, &["dimensions"], secs(1));
    o.timed_checks(&d.b, &["dimensions"], secs(1));
}

fn c2(d: &Desk, o: &mut Outcome) {
    for (v, order) in [(&d.a, 27), (&d.b, 8)] {
        let h = v.p().subgroup_elements(blockmf::grp::Subgroup::H).unwrap();
        o.expect(h.len() == order, format!("|H| = {} != {order}", h.len()));
        o.timed_checks(v, &["h_presentation", "action_kernel"], secs(1));
    }
}

fn c3(d: &Desk, o: &mut Outcome) {
    o.timed_checks(&d.a, &["qa_embed_hom"], secs(1));
    o.timed_checks(&d.b, &["qa_embed_hom"], secs(1));
    o.timed_checks(&d.a_full, &["qa_embed_hom"], secs(600));
}

fn c4(d: &Desk, o: &mut Outcome) {
    for v in [&d.a, &d.b] {
        o.timed_checks(v, &["iota_hom", "iota_formulas", "pi_iota", "iota_centralizes"], secs(30));
    }
}

fn c5(d: &Desk, o: &mut Outcome) {
    for v in [&d.a, &d.b] {
        o.timed_checks(v, &["block_engine", "tt_mul_gate"], secs(60));
    }
}

fn c6(d: &Desk, o: &mut Outcome) {
    let s = simples(d.a.p(), &d.a.ctx.theta).unwrap();
    let deg3 = s.iter().filter(|x| x.1 == 3).count();
    let deg9 = s.iter().filter(|x| x.1 == 9).count();
    let sq: u64 = s.iter().map(|x| x.1 * x.1).sum();
    o.expect(s.len() == 17 && deg3 == 13 && deg9 == 4 && sq == 441, "census at (2,7,3)");
    o.expect(simples(d.b.p(), &d.b.ctx.theta).unwrap().len() == 13, "census at (3,5,2)");
    o.timed_checks(&d.a, &["simples"], secs(1));
    o.timed_checks(&d.b, &["simples"], secs(1));
}

fn c7(d: &Desk, o: &mut Outcome) {
    let dec = head_algebra(&d.a.ctx).unwrap();
    o.expect(dec.census(3) == (13, 4), format!("head blocks {:?}", dec.block_dims));
    for v in [&d.a, &d.b] {
        o.timed_checks(v, &["idempotents", "head_algebra"], secs(60));
    }
}

fn c8(d: &Desk, o: &mut Outcome) {
    for v in [&d.a, &d.b] {
        o.timed_checks(v, &["ext_quiver"], secs(120));
    }
}

fn c9(d: &Desk, o: &mut Outcome) {
    for v in [&d.b, &d.a] {
        o.timed_checks(v, &["radical_power"], secs(120));
    }
}

fn c10(d: &Desk, o: &mut Outcome) {
    for v in [&d.a, &d.b] {
        o.timed_checks(v, &["pairing", "recover", "classification"], secs(60));
    }
    let start = Instant::now();
    o.checks(&d.c, &["pairing", "recover", "classification"]);
    let p = d.c.ctx.params.clone();
    let mut sets = Vec::new();
    for j in [1, 2] {
        let theta = Character::new(&p, CharGroup::Z, j);
        let ctx = B0Context::new(p.clone(), theta).unwrap();
        sets.push(recover_theta(&commutation_pairing(&ctx).unwrap(), &p).unwrap());
    }
    o.expect(sets == vec![(1, 4), (2, 3)], format!("recovered {sets:?} at (2,11,5)"));
    let t = |j| Character::new(&p, CharGroup::Z, j);
    o.expect(!morita_equivalent(&p, &t(1), &t(2)).unwrap(), "theta_1 ~ theta_2 at r = 5");
    o.expect(start.elapsed() <= secs(300), "p = 11 pairing over budget");
}

fn c11(d: &Desk, o: &mut Outcome) {
    o.timed_checks(&d.a, &["frobenius", "mf_arith"], secs(10));
    o.timed_checks(&d.b, &["frobenius"], secs(10));
}

fn c12(d: &Desk, o: &mut Outcome) {
    for v in [&d.a, &d.b] {
        o.timed_checks(v, &["swap_iso", "fp_auto"], secs(60));
    }
}

type Criterion = (u8, &'static str, fn(&Desk, &mut Outcome));

const CRITERIA: [Criterion; 12] = [
    (1, "dimensions and label counts", c1),
    (2, "H presentation and action kernel", c2),
    (3, "quiver algebra embedding is multiplicative", c3),
    (4, "iota / pi identities", c4),
    (5, "twisted product gate", c5),
    (6, "simple module census", c6),
    (7, "idempotents and head algebra", c7),
    (8, "Ext quiver table", c8),
    (9, "radical power law for arrow products", c9),
    (10, "commutation pairing and theta recovery", c10),
    (11, "Frobenius twist and Morita-Frobenius numbers", c11),
    (12, "explicit isomorphisms", c12),
];

fn main() -> ExitCode {
    let list_only = std::env::args().any(|a| a == "--list");
    if list_only {
        for (n, name, _) in CRITERIA {
            println!("criterion_{n:02}: test ({name})");
        }
        return ExitCode::SUCCESS;
    }
    let desk = Desk {
        a: verifier(2, 7, 3, Suite::Quick),
        b: verifier(3, 5, 2, Suite::Quick),
        a_full: verifier(2, 7, 3, Suite::Full),
        c: verifier(2, 11, 5, Suite::Quick),
    };
    let mut passed = 0;
    for (n, name, run) in CRITERIA {
        let start = Instant::now();
        let mut outcome = Outcome::new();
        run(&desk, &mut outcome);
        let ms = start.elapsed().as_millis();
        let status = if outcome.ok { "PASS" } else { "FAIL" };
        passed += usize::from(outcome.ok);
        println!("criterion {n:>2} {status} {name} ({ms} ms)");
        for note in outcome.notes {
            println!("    {note}");
        }
    }
    println!("{passed}/{} criteria passed", CRITERIA.len());
    if passed == CRITERIA.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
