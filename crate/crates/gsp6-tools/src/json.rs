//! JSON forms of tensors, matrices, witnesses and level data.

use gsp6_core::branching::{HConstituent, HMultiset, RegionA};
use gsp6_core::report::{Report, Witness, WitnessData};
use gsp6_core::tensor::{mask_indices, TensorElement};
use serde_json::{json, Map, Value};

/// `[{slots: [[positions]], coeff}]`, sorted by canonical key; positions
/// `0..6` stand for `e1, e2, e3, f3, f2, f1`.
pub fn tensor(v: &TensorElement) -> Value {
    let terms: Vec<Value> = v
        .terms
        .iter()
        .map(|(k, &c)| {
            let slots: Vec<Vec<usize>> = k.iter().map(|&m| mask_indices(m)).collect();
            json!({ "slots": slots, "coeff": c.to_string() })
        })
        .collect();
    json!({ "twist": v.twist, "modulus": v.modulus.map(|q| q.to_string()), "terms": terms })
}

pub fn matrix(m: &[[u64; 6]; 6]) -> Value {
    json!(m)
}

pub fn witness(w: &Witness) -> Value {
    let data = match &w.data {
        WitnessData::Matrix(rows) => {
            let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            json!({ "matrix": rows })
        }
        WitnessData::Tensor(terms) => {
            let terms: Vec<Value> = terms.iter().map(|(s, c)| json!({ "slots": s, "coeff": c.to_string() })).collect();
            json!({ "tensor": terms })
        }
        WitnessData::Text(t) => json!({ "text": t }),
    };
    json!({ "label": w.label, "data": data })
}

/// Values keep insertion order; repeated keys keep the last value.
pub fn values(r: &Report) -> Map<String, Value> {
    let mut out = Map::new();
    for (k, v) in &r.values {
        out.insert(k.clone(), Value::String(v.clone()));
    }
    out
}

pub fn h_constituent(h: &HConstituent) -> Value {
    json!({ "k": h.k, "det_twist": h.det_twist })
}

pub fn h_multiset(ms: &HMultiset) -> Value {
    Value::Array(
        ms.iter()
            .map(|(h, &m)| json!({ "k": h.k, "det_twist": h.det_twist, "multiplicity": m }))
            .collect(),
    )
}

pub fn region(r: &RegionA) -> Value {
    json!({
        "lambda": r.lambda.entries(),
        "points": r.points.iter().map(|&(a, b)| json!({ "mu1": a, "mu2": b })).collect::<Vec<_>>(),
        "k_values": r.k_values,
        "r": r.r,
    })
}
