//! The acceptance suite: twelve checks, each producing one record.
//!
//! Checks run on worker threads and never abort each other; a panic inside
//! one check is captured as a failed record. Records are assembled in id order.

use crate::config::{Profile, RunConfig};
use crate::json;
use gsp6_core::sigma::{sigma_coset_survey, sigma_matrix, SigmaFormula, SigmaParams};
use gsp6_core::branching::{
    c3, flattened_branch_h, oracle_branch_h, pure_sym_part, region_a, sym_constituents,
};
use gsp6_core::centralizer::centralizer_check;
use gsp6_core::cosets::{
    generator_set, h_side_index, hecke_index_check, negative_control, root_element, sample_element,
    torus_element,
};
use gsp6_core::explicit::{
    basic_vectors, edge_vectors, grading_exponent, klingen_invariance, klingen_levi, kostant_integrality,
    normalized_limit, s_range, s_top_projection, s_weight_profile, sign_report, sp4_data, u_conjugate,
    BasicVectors,
};
use gsp6_core::levels::{intersection_check, Family, LevelSpec};
use gsp6_core::lie::{is_h_highest, root_vector};
use gsp6_core::tensor::{e, TensorElement};
use gsp6_core::weights::{character, closed_form_dimension, weyl_dimension, DominantWeight, Series};
use gsp6_core::{GMatrix, Report, Witness, WitnessData, Zpn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{Map, Value};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

/// Criteria whose statement the computation refutes; see the README.
/// 4: X and Y are not Sp4-highest of weight mu. 8: not every parameter
/// vector has an H-shaped lift.
pub const KNOWN_GAPS: [u32; 2] = [4, 8];

const GUARD: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: u32,
    pub name: &'static str,
    /// What the check anchors to, in words.
    pub anchor: &'static str,
    pub status: Status,
    pub known_gap: bool,
    pub trials: u64,
    pub violations: u64,
    pub witnesses: Vec<Value>,
    pub values: Map<String, Value>,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub fault: Option<Fault>,
    pub checks: Vec<CheckRecord>,
    pub overall: Status,
    /// Failing checks outside `KNOWN_GAPS`.
    pub unexpected_failures: Vec<u32>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flip the sign of the reference vector `X'`.
    FlipXPrime,
}

struct Spec {
    id: u32,
    name: &'static str,
    anchor: &'static str,
    run: fn(&Ctx, &mut Report),
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    fault: Option<Fault>,
    rng: Mutex<ChaCha8Rng>,
}

impl Ctx<'_> {
    fn rng(&self) -> std::sync::MutexGuard<'_, ChaCha8Rng> {
        self.rng.lock().unwrap()
    }
}

const SPECS: [Spec; 12] = [
    Spec { id: 1, name: "dimension identities", anchor: "closed form = Weyl product = character total", run: check_dimensions },
    Spec { id: 2, name: "branching to H", anchor: "flattened Sp4 x SL2 law = character oracle", run: check_branching },
    Spec { id: 3, name: "region and Sym constituents", anchor: "A(9,6,2) and the (k,0,0) part", run: check_region },
    Spec { id: 4, name: "highest weight vectors", anchor: "H-highest and Sp4-highest edge vectors", run: check_vectors },
    Spec { id: 5, name: "u-conjugation and limits", anchor: "u^-1 actions, graded eta limits, sign report", run: check_limits },
    Spec { id: 6, name: "grading exponents", anchor: "eta scaling exponents vanish only on the top S-weight", run: check_grading },
    Spec { id: 7, name: "level intersection", anchor: "K'(p) meets u^-1 H u inside K'_{m+1}", run: check_intersection },
    Spec { id: 8, name: "sigma_v survey", anchor: "sigma_v representatives of K'_{6,1}/K'_{6,1(p)}", run: check_sigma },
    Spec { id: 9, name: "Hecke indices", anchor: "both coset spaces have p^12 elements", run: check_hecke },
    Spec { id: 10, name: "centralizer", anchor: "commutant of w1, w2 and its similitudes", run: check_centralizer },
    Spec { id: 11, name: "Klingen invariance", anchor: "e1^k nu^-k under Levi, unipotent and K_{s,0}", run: check_klingen },
    Spec { id: 12, name: "Kostant integrality", anchor: "divided-power words stay integral", run: check_kostant },
];

pub fn check_ids() -> Vec<(u32, &'static str)> {
    SPECS.iter().map(|s| (s.id, s.name)).collect()
}

/// Run every check (or only `only`, if non-empty) on `cfg.threads` workers.
pub fn run(cfg: &RunConfig, fault: Option<Fault>, only: &[u32]) -> VerifyReport {
    let chosen: Vec<&Spec> = SPECS.iter().filter(|s| only.is_empty() || only.contains(&s.id)).collect();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<CheckRecord>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..cfg.threads.min(chosen.len()).max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(spec) = chosen.get(i) else { break };
                let rec = run_one(spec, cfg, fault);
                results.lock().unwrap().push(rec);
            });
        }
    });
    let mut checks = results.into_inner().unwrap();
    checks.sort_by_key(|c| c.id);
    let failing: Vec<u32> = checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.id).collect();
    let unexpected_failures = failing.iter().copied().filter(|id| !KNOWN_GAPS.contains(id)).collect();
    VerifyReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        fault,
        overall: if failing.is_empty() { Status::Pass } else { Status::Fail },
        unexpected_failures,
        checks,
    }
}

fn run_one(spec: &Spec, cfg: &RunConfig, fault: Option<Fault>) -> CheckRecord {
    let ctx = Ctx {
        cfg,
        fault,
        rng: Mutex::new(ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9).wrapping_add(spec.id as u64))),
    };
    let start = Instant::now();
    let mut rep = Report::new(spec.name);
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        let mut r = Report::new(spec.name);
        (spec.run)(&ctx, &mut r);
        r
    }));
    match outcome {
        Ok(r) => rep = r,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            rep.check(false, || Witness::text("check aborted", msg));
        }
    }
    let status = if rep.passed() && rep.trials > 0 { Status::Pass } else { Status::Fail };
    CheckRecord {
        id: spec.id,
        name: spec.name,
        anchor: spec.anchor,
        status,
        known_gap: KNOWN_GAPS.contains(&spec.id),
        trials: rep.trials,
        violations: rep.violations,
        witnesses: rep.witnesses.iter().map(json::witness).collect(),
        values: json::values(&rep),
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn check_dimensions(ctx: &Ctx, rep: &mut Report) {
    let b = ctx.cfg.bounds.dim_size;
    let mut count = 0;
    for series in [Series::C3, Series::C2] {
        for l in DominantWeight::all_up_to(series, b) {
            let c = closed_form_dimension(&l);
            let w = weyl_dimension(&l);
            let t = character(&l).total() as u128;
            count += 1;
            rep.check(c == w && w == t, || Witness::text(format!("{l:?}"), format!("closed {c} weyl {w} character {t}")));
        }
    }
    let spots: Vec<u128> = [[1, 0, 0], [1, 1, 0], [1, 1, 1]].iter().map(|&l| closed_form_dimension(&c3(l))).collect();
    rep.check(spots == [6, 14, 14], || Witness::text("spot values", format!("{spots:?}")));
    rep.value("weights", count);
}

fn check_branching(ctx: &Ctx, rep: &mut Report) {
    let ws = DominantWeight::c3_with_top_at_most(ctx.cfg.bounds.branch_top);
    for l in &ws {
        let a = flattened_branch_h(l);
        let b = oracle_branch_h(l);
        rep.check(a == b, || Witness::text(format!("{l:?}"), format!("flattened {a:?} oracle {b:?}")));
    }
    rep.value("weights", ws.len());
}

fn check_region(ctx: &Ctx, rep: &mut Report) {
    let r = region_a(&c3([9, 6, 2]));
    rep.value("points", r.points.len());
    rep.value("k_values", format!("{:?}", r.k_values));
    rep.value("r", r.r);
    rep.check(r.points.len() == 15 && r.k_values == [1, 3, 5] && r.r == 5, || {
        Witness::text("region (9,6,2)", format!("{:?}", r.points))
    });
    for l in DominantWeight::c3_with_top_at_most(ctx.cfg.bounds.branch_top) {
        let a = sym_constituents(&l);
        let b = pure_sym_part(&oracle_branch_h(&l));
        rep.check(a == b, || Witness::text(format!("{l:?}"), format!("closed form {a:?} oracle {b:?}")));
    }
}

/// H-side and Sp4-side conditions are counted separately.
fn check_vectors(ctx: &Ctx, rep: &mut Report) {
    let mut cases: Vec<(String, DominantWeight, DominantWeight, TensorElement)> = Vec::new();
    let v = basic_vectors();
    let mu = |a, b| DominantWeight::c2(a, b).unwrap();
    cases.push(("W".into(), c3([1, 0, 0]), mu(1, 0), v.w.clone()));
    cases.push(("X".into(), c3([1, 1, 0]), mu(0, 0), v.x.clone()));
    cases.push(("Y".into(), c3([1, 1, 0]), mu(1, 1), v.y.clone()));
    cases.push(("Z".into(), c3([1, 1, 1]), mu(1, 0), v.z.clone()));
    for l in DominantWeight::c3_with_top_at_most(ctx.cfg.bounds.vector_top) {
        for (m, t) in edge_vectors(&l) {
            cases.push((format!("{:?} {:?}", l.entries(), m.entries()), l, m, t));
        }
    }
    let (mut h_bad, mut sp4_bad) = (0u64, 0u64);
    let mut sp4_failures = Vec::new();
    for (name, l, m, t) in &cases {
        let p = l.padded();
        let k = p[0] - p[1] + p[2];
        let h = is_h_highest(t);
        let h_ok = h.highest && h.weight.map(|w| (w.h_weight, w.det_twist)) == Some(([k, 0, 0], p[1]));
        h_bad += u64::from(!h_ok);
        rep.check(h_ok, || Witness::tensor(format!("{name}: not H-highest of weight ({k},0,0) det^{}", p[1]), t));
        let s = sp4_data(t);
        let mp = m.padded();
        let sp_ok = s.raising_kill && s.torus == Some([mp[0], mp[1]]);
        if !sp_ok {
            sp4_bad += 1;
            sp4_failures.push(name.clone());
        }
        rep.check(sp_ok, || {
            Witness::tensor(
                format!(
                    "{name}: not Sp4-highest of weight {:?} (raising kills: {}, torus weight: {:?})",
                    m.entries(),
                    s.raising_kill,
                    s.torus
                ),
                t,
            )
        });
    }
    rep.value("vectors", cases.len());
    rep.value("h_violations", h_bad);
    rep.value("sp4_violations", sp4_bad);
    rep.value("sp4_failing", sp4_failures.join("; "));
}

fn lin(parts: &[(i128, &[usize])]) -> TensorElement {
    let mut out = TensorElement::zero(vec![parts[0].1.len() as u8]);
    for &(c, ix) in parts {
        out = out.add(&TensorElement::wedge(ix).scale(c)).expect("same shape");
    }
    out
}

/// Per-term agreement of the top projection of `u^-1 v` with the primed
/// vectors, in canonical key order: `+1` agrees, `-1` opposite sign.
pub const RECORDED_SIGNS: [(&str, &[i32]); 3] = [("X", &[-1, 1]), ("Y", &[1, 1]), ("Z", &[-1])];

fn check_limits(ctx: &Ctx, rep: &mut Report) {
    let v = basic_vectors();
    let reference: BasicVectors = match ctx.fault {
        Some(Fault::FlipXPrime) => basic_vectors().with_flipped_x_prime(),
        None => basic_vectors(),
    };
    let (e1, e2, e3) = (e(1), e(2), e(3));
    let formulas = [
        ("W", &v.w, v.w.clone()),
        ("X", &v.x, v.x.add(&lin(&[(-2, &[e1, e2]), (-1, &[e1, e3]), (1, &[e2, e3])])).unwrap()),
        ("Y", &v.y, v.y.add(&lin(&[(-2, &[e2, e3]), (-1, &[e1, e3]), (1, &[e1, e2])])).unwrap()),
        ("Z", &v.z, v.z.add(&lin(&[(-2, &[e1, e2, e3])])).unwrap()),
    ];
    for (name, x, want) in &formulas {
        let got = u_conjugate(x, -1);
        rep.check(got == *want, || Witness::tensor(format!("u^-1 {name} differs from the reference formula"), &got));
    }
    let cases = [
        ("X", &v.x, c3([1, 1, 0]), &reference.x_prime),
        ("Y", &v.y, c3([1, 1, 0]), &reference.y_prime),
        ("Z", &v.z, c3([1, 1, 1]), &reference.z_prime),
    ];
    for (i, (name, x, l, r)) in cases.iter().enumerate() {
        let top = s_top_projection(&u_conjugate(x, -1), l);
        for p in [2u64, 3, 5] {
            let mut lims = Vec::new();
            for m in 1..=3u32 {
                let lim = normalized_limit(x, l, m, p).expect("in range");
                let q = p.pow(m) as i128;
                let on_top = lim.terms.keys().all(|k| top.terms.contains_key(k));
                rep.check(on_top && lim.terms == top.reduce(q).terms, || {
                    Witness::tensor(format!("{name} limit p={p} m={m} is not the top projection"), &lim)
                });
                lims.push(lim);
            }
            for a in 0..3 {
                for b in a + 1..3 {
                    let q = p.pow(a as u32 + 1) as i128;
                    let same = lims[a].lift().reduce(q).terms == lims[b].lift().reduce(q).terms;
                    rep.check(same, || Witness::text(format!("{name} p={p}"), format!("m={} and m={} disagree", a + 1, b + 1)));
                }
            }
        }
        let report = sign_report(&top, r);
        let signs: Vec<i32> = report
            .iter()
            .map(|t| if t.agrees() { 1 } else if t.same_up_to_sign() { -1 } else { 0 })
            .collect();
        let strict = report.iter().all(|t| t.agrees());
        rep.value(format!("{name}_signs"), format!("{signs:?}"));
        rep.value(format!("{name}_strict_equality"), strict);
        let recorded = RECORDED_SIGNS[i].1;
        rep.check(signs == recorded, || {
            Witness::tensor(format!("{name}: sign pattern {signs:?}, recorded {recorded:?}; reference follows"), r)
        });
        if signs != recorded {
            rep.witnesses.push(Witness::tensor(format!("{name}: computed top projection"), &top));
        }
    }
}

fn check_grading(ctx: &Ctx, rep: &mut Report) {
    let hi_entry = ctx.cfg.bounds.grading_entry;
    let mut rng = ctx.rng();
    let mut monomials: u128 = 0;
    let mut bad: u128 = 0;
    for _ in 0..20 {
        let mut v = [rng.gen_range(0..=hi_entry), rng.gen_range(0..=hi_entry), rng.gen_range(0..=hi_entry)];
        v.sort_unstable_by(|a, b| b.cmp(a));
        let l = c3(v);
        let (lo, top) = s_range(&l);
        let mut local_bad = 0u128;
        for (&s, &count) in &s_weight_profile(&l) {
            monomials += count;
            let ex = grading_exponent(s, &l, 1);
            let ok = s >= lo && ex >= 0 && ((ex == 0) == (s == top));
            if !ok {
                local_bad += count;
            }
        }
        bad += local_bad;
        rep.check(local_bad == 0, || Witness::text(format!("{v:?}"), format!("{local_bad} monomials violate")));
    }
    rep.value("monomials", monomials);
    rep.value("monomial_violations", bad);
}

fn check_intersection(ctx: &Ctx, rep: &mut Report) {
    let target = ctx.cfg.trials;
    let mut triples = vec![(2u64, 6u32, 1u32), (3, 6, 1)];
    let own = (ctx.cfg.p, ctx.cfg.n, ctx.cfg.m);
    if !triples.contains(&own) {
        triples.push(own);
    }
    for (p, n, m) in triples {
        let mut rng = ctx.rng();
        match intersection_check(p, n, m, target, &mut rng) {
            Ok(r) => {
                for (k, v) in &r.values {
                    rep.value(format!("p{p}_n{n}_m{m}_{k}"), v);
                }
                rep.value(format!("p{p}_n{n}_m{m}_violations"), r.violations);
                rep.trials += r.trials;
                rep.violations += r.violations;
                rep.witnesses.extend(r.witnesses.into_iter().take(5));
            }
            Err(e) => {
                rep.check(false, || Witness::text(format!("p={p} n={n} m={m}"), e.to_string()));
            }
        }
    }
    rep.check(target >= 10_000, || Witness::text("trials", format!("{target} accepted samples requested, 10000 required")));
}

fn check_sigma(ctx: &Ctx, rep: &mut Report) {
    let (p, n, m) = (2, 6, 1);
    let big_n = ctx.cfg.big_n.max(8);
    let s = match sigma_coset_survey(p, n, m, big_n, GUARD) {
        Ok(s) => s,
        Err(e) => {
            rep.check(false, || Witness::text("survey", e.to_string()));
            return;
        }
    };
    let hside = {
        let mut rng = ctx.rng();
        h_side_index(p, n, m, 64, &mut rng, GUARD)
    };
    for (k, v) in [
        ("total", s.total),
        ("lifted", s.lifted),
        ("no_lift", s.no_lift),
        ("in_kprime", s.in_kprime),
        ("h_shaped", s.h_shaped),
        ("mod_p_candidates", s.mod_p_candidates),
        ("distinct_cosets", s.distinct_inverse as u64),
        ("distinct_cosets_direct", s.distinct_direct as u64),
        ("bfs_index", s.bfs_index as u64),
    ] {
        rep.value(k, v);
    }
    rep.value("obstruction_explains_failures", s.obstruction_explains);
    rep.value("h_side_index", hside.as_ref().map(|x| x.to_string()).unwrap_or_else(|e| e.to_string()));
    rep.check(s.all_lifted(), || {
        // Rows are (k, t, t1, t2, t3, k1, k2, r, r1, s).
        let rows: Vec<Vec<i128>> = (0..SigmaParams::count(p))
            .map(|i| SigmaParams::from_index(p, i))
            .filter(|v| sigma_matrix(v, p, m, big_n, SigmaFormula::Corrected).is_err())
            .take(8)
            .map(|v| v.to_array().iter().map(|&x| x as i128).collect())
            .collect();
        Witness {
            label: format!(
                "{} of {} parameter vectors have no symplectic H-shaped lift ({} pass the mod-p condition); first ones",
                s.no_lift, s.total, s.mod_p_candidates
            ),
            data: WitnessData::Matrix(rows),
        }
    });
    rep.check(s.in_kprime == s.lifted && s.h_shaped == s.lifted, || {
        Witness::text("lifted vectors", format!("in K' {} h-shaped {} of {}", s.in_kprime, s.h_shaped, s.lifted))
    });
    rep.check(s.obstruction_explains, || Witness::text("obstruction", "a mod-p liftable vector failed to lift beyond"));
    rep.check(s.coverage(), || Witness::text("coverage", format!("{} cosets of {}", s.distinct_inverse, s.bfs_index)));
    rep.check(hside.as_ref().ok() == Some(&s.bfs_index), || {
        Witness::text("H-side index", format!("{hside:?} vs {}", s.bfs_index))
    });
}

fn check_hecke(ctx: &Ctx, rep: &mut Report) {
    let (n, m) = (ctx.cfg.n, ctx.cfg.m);
    let mut primes = vec![ctx.cfg.p];
    if ctx.cfg.profile == Profile::Full && !primes.contains(&3) {
        primes.push(3);
    }
    for p in primes {
        let want = (p as usize).pow(12);
        match hecke_index_check(p, n, m, GUARD.max(want * 2)) {
            Ok(s) => {
                rep.value(format!("p{p}_size_K"), s.size_k);
                rep.value(format!("p{p}_size_Kprime"), s.size_kprime);
                rep.check(s.size_k == want && s.size_kprime == want, || {
                    Witness::text(format!("p={p}"), format!("sizes {} and {}, expected {want}", s.size_k, s.size_kprime))
                });
            }
            Err(e) => {
                rep.check(false, || Witness::text(format!("p={p}"), e.to_string()));
            }
        }
        if p == ctx.cfg.p {
            match negative_control(p, n, m, GUARD) {
                Ok(c) => {
                    rep.value(format!("p{p}_control_size"), c);
                    rep.check(c != want, || Witness::text("negative control", format!("{c} equals p^12")));
                }
                Err(e) => {
                    rep.check(false, || Witness::text("negative control", e.to_string()));
                }
            }
        }
    }
}

fn check_centralizer(ctx: &Ctx, rep: &mut Report) {
    let samples = (ctx.cfg.trials / 10).max(1000);
    for l in [3u64, 5] {
        let mut rng = ctx.rng();
        let r = centralizer_check(l, samples, &mut rng);
        for (k, v) in &r.values {
            rep.value(format!("l{l}_{k}"), v);
        }
        rep.trials += r.trials;
        rep.violations += r.violations;
        rep.witnesses.extend(r.witnesses.into_iter().take(5));
    }
}

/// Random element of the Klingen Levi, `diag(nu(A), A, 1)`.
fn random_levi(ring: Zpn, rng: &mut ChaCha8Rng) -> GMatrix {
    let mut g = GMatrix::identity(ring);
    let roots: [[i64; 3]; 8] = [[0, 1, -1], [0, -1, 1], [0, 1, 1], [0, -1, -1], [0, 2, 0], [0, -2, 0], [0, 0, 2], [0, 0, -2]];
    for _ in 0..12 {
        let a = roots[rng.gen_range(0..roots.len())];
        g = root_element(ring, &root_vector(a).unwrap(), rng.gen_range(0..ring.q)).mul(&g);
    }
    // Torus directions with trivial `(6,6)` entry.
    let dirs = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, -1, 0, 1]];
    for d in dirs {
        let c = loop {
            let c = rng.gen_range(1..ring.q);
            if ring.is_unit(c) {
                break c;
            }
        };
        g = torus_element(ring, d, c).expect("unit").mul(&g);
    }
    let mut a = [[0u64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = g.m[i + 1][j + 1];
        }
    }
    klingen_levi(ring, &a).expect("middle block of a Levi element")
}

fn check_klingen(ctx: &Ctx, rep: &mut Report) {
    let samples = (ctx.cfg.trials / 10).max(1000);
    let mut rng = ctx.rng();
    let ring = Zpn::new(5, 3);
    let unipotent_roots: [[i64; 3]; 5] = [[1, -1, 0], [1, 1, 0], [1, 0, -1], [1, 0, 1], [2, 0, 0]];
    let (mut levi, mut uni) = (0u64, 0u64);
    for i in 0..samples {
        let g = if i % 2 == 0 {
            levi += 1;
            random_levi(ring, &mut rng)
        } else {
            uni += 1;
            let mut g = GMatrix::identity(ring);
            for _ in 0..4 {
                let a = unipotent_roots[rng.gen_range(0..5)];
                g = root_element(ring, &root_vector(a).unwrap(), rng.gen_range(0..ring.q)).mul(&g);
            }
            g
        };
        for k in 1..=5 {
            rep.check(klingen_invariance(k, &g), || Witness::matrix(format!("moves e1^{k}"), &g.m));
        }
    }
    let s = 3;
    let spec = LevelSpec::new(Family::K0 { n: s }, ring.p);
    let gens = generator_set(&spec.pattern().unwrap(), Zpn::new(ring.p, s));
    for _ in 0..samples {
        let g = sample_element(&gens, &mut rng, 2);
        for k in 1..=5 {
            rep.check(klingen_invariance(k, &g), || Witness::matrix(format!("K_(3,0) element moves e1^{k} mod p^3"), &g.m));
        }
    }
    rep.value("levi_samples", levi);
    rep.value("unipotent_samples", uni);
    rep.value("k_s0_samples", samples);
}

fn check_kostant(_ctx: &Ctx, rep: &mut Report) {
    for l in [[1, 0, 0], [1, 1, 0], [1, 1, 1], [2, 0, 0], [2, 1, 0]] {
        let o = kostant_integrality(&c3(l), 4);
        rep.value(format!("{l:?}_words"), o.words);
        rep.check(o.integral(), || Witness::text(format!("{l:?}"), format!("inexact division after {:?}", o.failure)));
    }
}

/// One `PASS`/`FAIL` line per check.
pub fn summary_lines(r: &VerifyReport) -> Vec<String> {
    r.checks
        .iter()
        .map(|c| {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let note = if c.status == Status::Fail && c.known_gap { " (known gap)" } else { "" };
            format!(
                "{tag} {:>2} {:<28} trials={} violations={} {}ms{note}",
                c.id, c.name, c.trials, c.violations, c.elapsed_ms
            )
        })
        .collect()
}

/// Text rendering: summary lines plus values and the first witnesses of failures.
pub fn render_text(r: &VerifyReport) -> String {
    let mut out = String::new();
    for (line, c) in summary_lines(r).iter().zip(&r.checks) {
        out.push_str(line);
        out.push('\n');
        for (k, v) in &c.values {
            out.push_str(&format!("       {k} = {}\n", v.as_str().unwrap_or(&v.to_string())));
        }
        for w in c.witnesses.iter().take(3) {
            out.push_str(&format!("       witness: {w}\n"));
        }
    }
    let overall = if r.passed() { "PASS" } else { "FAIL" };
    out.push_str(&format!("overall: {overall}; unexpected failures: {:?}\n", r.unexpected_failures));
    out
}

/// The report as JSON with timing fields zeroed, for run-to-run comparison.
pub fn without_timings(v: &Value) -> Value {
    let mut v = v.clone();
    if let Some(checks) = v.get_mut("checks").and_then(Value::as_array_mut) {
        for c in checks {
            c["elapsed_ms"] = Value::from(0);
        }
    }
    v
}
