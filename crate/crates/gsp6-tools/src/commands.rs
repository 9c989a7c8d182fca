//! Query subcommands. Each returns a JSON value; the text form is rendered
//! from the same value, so both carry identical data.

use crate::json;
use anyhow::{anyhow, bail, Context, Result};
use gsp6_core::sigma::{sample_params, sigma_coset_survey, sigma_matrix, SigmaFormula, SigmaParams};
use gsp6_core::branching::{branch_c3_to_c2xa1, c3, expand_sl2_tensor, flattened_branch_h, oracle_branch_h, region_a};
use gsp6_core::cosets::{double_coset_decompose, hecke_index_check, hecke_precision, negative_control, pattern_index};
use gsp6_core::explicit::{
    basic_vectors, highest_vector, normalized_limit, s_top_projection, sign_report, sp4_data, u_conjugate,
};
use gsp6_core::levels::{level_equivalence_check, DisplayReading, Family, LevelSpec};
use gsp6_core::lie::is_h_highest;
use gsp6_core::tensor::{render, TensorElement};
use gsp6_core::weights::{character, closed_form_dimension, dominant_multiplicities, weyl_dimension, DominantWeight, Series};
use gsp6_core::Zpn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;
use std::time::Instant;

const GUARD: usize = 1 << 22;
/// Interactive index queries stop here rather than run for minutes.
const INDEX_GUARD: usize = 1 << 18;

pub fn parse_series(s: &str) -> Result<Series> {
    match s.to_ascii_lowercase().as_str() {
        "c2" | "sp4" => Ok(Series::C2),
        "c3" | "sp6" => Ok(Series::C3),
        _ => bail!("unknown series {s:?}; use c2 or c3"),
    }
}

pub fn weight(series: Series, entries: &[i64]) -> Result<DominantWeight> {
    DominantWeight::new(series, entries).map_err(|e| anyhow!("{e}: {entries:?}"))
}

pub fn dim(series: Series, entries: &[i64]) -> Result<Value> {
    let l = weight(series, entries)?;
    Ok(json!({
        "series": format!("{series:?}"),
        "lambda": l.entries(),
        "dimension": closed_form_dimension(&l).to_string(),
        "weyl": weyl_dimension(&l).to_string(),
        "character_total": character(&l).total().to_string(),
    }))
}

pub fn char_cmd(series: Series, entries: &[i64], dominant_only: bool) -> Result<Value> {
    let l = weight(series, entries)?;
    let rank = series.rank();
    let terms: Vec<Value> = if dominant_only {
        dominant_multiplicities(&l)
            .iter()
            .rev()
            .map(|(w, m)| json!({ "weight": &w[..rank], "multiplicity": m }))
            .collect()
    } else {
        character(&l).terms.iter().rev().map(|(w, m)| json!({ "weight": &w[..rank], "multiplicity": m })).collect()
    };
    Ok(json!({ "lambda": l.entries(), "dominant_only": dominant_only, "terms": terms }))
}

pub fn branch(entries: &[i64], oracle: bool) -> Result<Value> {
    let l = weight(Series::C3, entries)?;
    let ms = if oracle { oracle_branch_h(&l) } else { flattened_branch_h(&l) };
    let sp4: Vec<Value> = branch_c3_to_c2xa1(&l)
        .iter()
        .map(|c| json!({ "mu": c.mu.entries(), "r": c.r, "sl2_degrees": expand_sl2_tensor(c.r) }))
        .collect();
    Ok(json!({
        "lambda": l.entries(),
        "method": if oracle { "character oracle" } else { "flattened" },
        "h_constituents": json::h_multiset(&ms),
        "sp4_x_sl2": sp4,
    }))
}

pub fn region(entries: &[i64]) -> Result<gsp6_core::branching::RegionA> {
    Ok(region_a(&weight(Series::C3, entries)?))
}

fn named_vector(name: &str) -> Result<(TensorElement, DominantWeight, DominantWeight)> {
    let v = basic_vectors();
    let mu = |a, b| DominantWeight::c2(a, b).unwrap();
    Ok(match name.to_ascii_uppercase().as_str() {
        "W" => (v.w, c3([1, 0, 0]), mu(1, 0)),
        "X" => (v.x, c3([1, 1, 0]), mu(0, 0)),
        "Y" => (v.y, c3([1, 1, 0]), mu(1, 1)),
        "Z" => (v.z, c3([1, 1, 1]), mu(1, 0)),
        "X'" | "XP" | "XPRIME" => (v.x_prime, c3([1, 1, 0]), mu(0, 0)),
        "Y'" | "YP" | "YPRIME" => (v.y_prime, c3([1, 1, 0]), mu(1, 1)),
        "Z'" | "ZP" | "ZPRIME" => (v.z_prime, c3([1, 1, 1]), mu(1, 0)),
        _ => bail!("unknown vector {name:?}; use W, X, Y, Z, X', Y' or Z'"),
    })
}

fn weight_string(w: [i64; 3], det: i64) -> String {
    format!("({},{},{}) det^{}", w[0], w[1], w[2], det)
}

fn vector_report(v: &TensorElement) -> Value {
    let h = is_h_highest(v);
    let s = sp4_data(v);
    json!({
        "highest": h.highest,
        "weight": h.weight.map(|w| weight_string(w.h_weight, w.det_twist)),
        "s_weight": h.weight.map(|w| w.s_weight),
        "sp4": {
            "raising_kill": s.raising_kill,
            "torus_weight": s.torus,
            "casimir_twice": s.casimir_twice.map(|c| c.to_string()),
        },
        "rendered": render(v),
        "tensor": json::tensor(v),
    })
}

pub fn hwvec_named(name: &str) -> Result<Value> {
    let (v, l, mu) = named_vector(name)?;
    let mut out = vector_report(&v);
    out["name"] = json!(name);
    out["lambda"] = json!(l.entries());
    out["mu"] = json!(mu.entries());
    Ok(out)
}

pub fn hwvec_weights(lambda: &[i64], mu: &[i64], primed: bool) -> Result<Value> {
    let l = weight(Series::C3, lambda)?;
    let m = weight(Series::C2, mu)?;
    let v = highest_vector(&l, &m, primed)
        .ok_or_else(|| anyhow!("no Cartan product vector for lambda {lambda:?} and mu {mu:?}"))?;
    let mut out = vector_report(&v);
    out["lambda"] = json!(l.entries());
    out["mu"] = json!(m.entries());
    Ok(out)
}

pub fn limits(name: &str, p: u64, m: u32) -> Result<Value> {
    let (v, l, _) = named_vector(name)?;
    let refs = basic_vectors();
    let reference = match name.to_ascii_uppercase().as_str() {
        "W" => refs.w.clone(),
        "X" => refs.x_prime.clone(),
        "Y" => refs.y_prime.clone(),
        "Z" => refs.z_prime.clone(),
        _ => bail!("limits are defined for W, X, Y and Z"),
    };
    if !gsp6_core::zp::is_prime(p) || m == 0 {
        bail!("need a prime p and m >= 1");
    }
    let uv = u_conjugate(&v, -1);
    let top = s_top_projection(&uv, &l);
    let lim = normalized_limit(&v, &l, m, p).context("graded scaling")?;
    let signs: Vec<Value> = sign_report(&top, &reference)
        .iter()
        .map(|t| {
            let k = TensorElement { terms: [(t.key.clone(), 1)].into_iter().collect(), ..top.clone() };
            json!({
                "term": render(&k).trim_start_matches("1*").to_string(),
                "computed": t.computed.to_string(),
                "reference": t.reference.to_string(),
                "agrees": t.agrees(),
                "same_up_to_sign": t.same_up_to_sign(),
            })
        })
        .collect();
    let strict = sign_report(&top, &reference).iter().all(|t| t.agrees());
    Ok(json!({
        "name": name,
        "lambda": l.entries(),
        "p": p,
        "m": m,
        "u_inverse": render(&uv),
        "top_projection": render(&top),
        "limit": render(&lim),
        "limit_modulus": p.pow(m).to_string(),
        "reference": render(&reference),
        "strict_equality": strict,
        "sign_report": signs,
    }))
}

pub struct LevelsArgs<'a> {
    pub spec: &'a str,
    pub index_of: Option<&'a str>,
    pub equivalence: bool,
    pub big_n: u32,
    pub trials: u64,
    pub seed: u64,
}

pub fn levels(a: &LevelsArgs) -> Result<Value> {
    let spec: LevelSpec = a.spec.parse().map_err(|e| anyhow!("{e}"))?;
    let mut out = json!({ "spec": spec.to_string(), "required_precision": spec.required_precision() });
    if let Ok(pat) = spec.pattern() {
        out["exponents"] = json!(pat.e);
        out["nu_exponent"] = json!(pat.nu_exp);
        out["closed"] = json!(pat.is_closed());
    }
    if let Some(sub) = a.index_of {
        let sub: LevelSpec = sub.parse().map_err(|e| anyhow!("{e}"))?;
        if sub.p != spec.p {
            bail!("both levels need the same p");
        }
        let (u, v) = (spec.pattern()?, sub.pattern()?);
        if !u.contains_pattern(&v) {
            bail!("{sub} is not contained in {spec} as a pattern");
        }
        let ring = Zpn::new(spec.p, u.max_exponent().max(v.max_exponent()).max(1));
        let t = Instant::now();
        let table = pattern_index(&u, &v, ring, INDEX_GUARD)?;
        out["index"] = json!({ "subgroup": sub.to_string(), "value": table.len(), "N": ring.n, "elapsed_ms": t.elapsed().as_millis() });
    }
    if a.equivalence {
        let (n, m) = match spec.family {
            Family::Kprime { n, m } | Family::KprimeP { n, m } => (n, m),
            _ => bail!("--equivalence needs a Kprime or KprimeP spec"),
        };
        let mut rows = Vec::new();
        for reading in [DisplayReading::Literal, DisplayReading::MultiplierAware] {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let r = level_equivalence_check(spec.p, n, m, a.big_n, a.trials, reading, false, &mut rng);
            rows.push(json!({
                "reading": format!("{reading:?}"),
                "trials": r.trials,
                "mismatches": r.violations,
                "values": json::values(&r),
                "witnesses": r.witnesses.iter().take(3).map(json::witness).collect::<Vec<_>>(),
            }));
        }
        out["equivalence"] = Value::Array(rows);
    }
    Ok(out)
}

pub fn hecke(p: u64, n: u32, m: u32, dump: Option<&Path>) -> Result<Value> {
    if n < 3 * m + 3 {
        bail!("need n >= 3m + 3");
    }
    let t = Instant::now();
    let s = hecke_index_check(p, n, m, GUARD)?;
    let control = negative_control(p, n, m, GUARD)?;
    let elapsed = t.elapsed().as_millis();
    if let Some(path) = dump {
        write_dump(p, n, m, path)?;
    }
    Ok(json!({
        "p": p,
        "n": n,
        "m": m,
        "size_K": s.size_k,
        "size_Kprime": s.size_kprime,
        "control_size": control,
        "elapsed_ms": elapsed,
    }))
}

/// Magic, then little-endian `u32` version, `u64` p, `u32` N, `u32` count,
/// then `count` row-major 6x6 matrices of `u64`: the `u_i` with
/// `U eta U = ⊔ U eta u_i` for `U = K_{n,m}`.
pub const DUMP_MAGIC: &[u8; 8] = b"GSP6REPS";

fn write_dump(p: u64, n: u32, m: u32, path: &Path) -> Result<()> {
    let u = LevelSpec::new(Family::Knm { n, m }, p).pattern()?;
    let ring = Zpn::new(p, hecke_precision(&u));
    let reps = double_coset_decompose(&u, 1, ring, GUARD)?;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?);
    f.write_all(DUMP_MAGIC)?;
    f.write_all(&1u32.to_le_bytes())?;
    f.write_all(&p.to_le_bytes())?;
    f.write_all(&ring.n.to_le_bytes())?;
    f.write_all(&(reps.len() as u32).to_le_bytes())?;
    for r in &reps {
        for row in &r.u.m {
            for x in row {
                f.write_all(&x.to_le_bytes())?;
            }
        }
    }
    f.flush()?;
    Ok(())
}

pub fn sigma(index: Option<u64>, survey: bool, big_n: u32) -> Result<Value> {
    let (p, n, m) = (2u64, 6u32, 1u32);
    if survey {
        let t = Instant::now();
        let s = sigma_coset_survey(p, n, m, big_n.max(8), GUARD)?;
        return Ok(json!({
            "total": s.total,
            "lifted": s.lifted,
            "no_lift": s.no_lift,
            "in_kprime": s.in_kprime,
            "h_shaped": s.h_shaped,
            "mod_p_candidates": s.mod_p_candidates,
            "distinct_cosets": s.distinct_inverse,
            "bfs_index": s.bfs_index,
            "obstruction_explains_failures": s.obstruction_explains,
            "elapsed_ms": t.elapsed().as_millis(),
        }));
    }
    let params: Vec<SigmaParams> = match index {
        Some(i) if i < SigmaParams::count(p) => vec![SigmaParams::from_index(p, i)],
        Some(i) => bail!("index {i} out of range 0..{}", SigmaParams::count(p)),
        None => sample_params(p),
    };
    let rows: Vec<Value> = params
        .iter()
        .map(|v| {
            let base = json!({ "params": v.to_array() });
            match sigma_matrix(v, p, m, big_n.max(8), SigmaFormula::Corrected) {
                Ok(l) => json!({ "params": base["params"], "matrix": json::matrix(&l.g.m), "nu": l.g.nu, "lift_digits": l.digits }),
                Err(e) => json!({ "params": base["params"], "error": e.to_string() }),
            }
        })
        .collect();
    Ok(json!({ "p": p, "m": m, "N": big_n.max(8), "sigma": rows }))
}

/// `key: value` lines, nested objects indented.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    text_into(v, 0, &mut out);
    out
}

fn text_into(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object() || (x.is_array() && x.as_array().unwrap().iter().any(|y| y.is_object())) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text_into(x, depth + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if x.is_object() {
                    out.push_str(&format!("{pad}-\n"));
                    text_into(x, depth + 1, out);
                } else {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
