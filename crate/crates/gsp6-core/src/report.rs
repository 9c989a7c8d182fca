//! Report records shared by every randomized or exhaustive check.

use alloc::string::String;
use alloc::vec::Vec;

/// Witnesses kept per report.
pub const MAX_WITNESSES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessData {
    Matrix(Vec<Vec<i128>>),
    /// Terms as `(slots of basis positions, coefficient)`.
    Tensor(Vec<(Vec<Vec<usize>>, i128)>),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub data: WitnessData,
}

impl Witness {
    pub fn text(label: impl Into<String>, text: impl Into<String>) -> Self {
        Witness { label: label.into(), data: WitnessData::Text(text.into()) }
    }

    pub fn matrix(label: impl Into<String>, m: &[[u64; 6]; 6]) -> Self {
        let rows = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        Witness { label: label.into(), data: WitnessData::Matrix(rows) }
    }

    pub fn tensor(label: impl Into<String>, v: &crate::tensor::TensorElement) -> Self {
        let terms = v
            .terms
            .iter()
            .map(|(k, &c)| (k.iter().map(|&m| crate::tensor::mask_indices(m)).collect(), c))
            .collect();
        Witness { label: label.into(), data: WitnessData::Tensor(terms) }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub trials: u64,
    pub violations: u64,
    pub witnesses: Vec<Witness>,
    /// Measured quantities, in insertion order.
    pub values: Vec<(String, String)>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), ..Default::default() }
    }

    /// Count one trial; on failure build and keep a witness (up to the cap).
    pub fn check<F: FnOnce() -> Witness>(&mut self, ok: bool, witness: F) -> bool {
        self.trials += 1;
        if !ok {
            self.violations += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
        ok
    }

    pub fn value(&mut self, key: impl Into<String>, v: impl core::fmt::Display) {
        use alloc::string::ToString;
        self.values.push((key.into(), v.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn merge(&mut self, other: Report) {
        self.trials += other.trials;
        self.violations += other.violations;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        self.values.extend(other.values);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witnesses_are_capped() {
        let mut r = Report::new("cap");
        for i in 0..50 {
            r.check(false, || Witness::text("i", alloc::format!("{i}")));
        }
        assert_eq!(r.violations, 50);
        assert_eq!(r.witnesses.len(), MAX_WITNESSES);
        assert!(!r.passed());
    }
}
