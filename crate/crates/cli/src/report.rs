//! Serializable reports and their text renderings.

use std::fmt::Write as _;

use posetcox::classify::{detect_type_a, TypeAClass};
use posetcox::congruence::WitnessRecord;
use posetcox::spectral::{spectral_report, SpectralReport};
use posetcox::{CensusRow, IntMatrix, IntPolynomial, MatrixOrder, Poset};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub input: String,
    pub n: usize,
    pub connected: bool,
    /// `None` for disconnected posets.
    pub type_a: Option<TypeAClass>,
    pub cycle_index: Option<usize>,
    pub coxeter_polynomial_text: String,
    pub spectral: SpectralReport,
}

impl ClassificationReport {
    pub fn new(input: &str, p: &Poset, cutoff: u64) -> ClassificationReport {
        let connected = p.is_connected();
        let type_a = detect_type_a(p).ok();
        let cycle_index = match type_a {
            Some(TypeAClass::Principal { cycle_index, .. }) => Some(cycle_index),
            _ => None,
        };
        let spectral = spectral_report(p, cutoff);
        ClassificationReport {
            input: input.to_string(),
            n: p.n(),
            connected,
            type_a,
            cycle_index,
            coxeter_polynomial_text: spectral.coxeter_polynomial.to_string(),
            spectral,
        }
    }

    pub fn to_text(&self) -> String {
        let s = &self.spectral;
        let mut out = String::new();
        let verdict = match self.type_a {
            None => "undefined (disconnected)".to_string(),
            Some(TypeAClass::Positive { m }) => format!("positive, A_{m}"),
            Some(TypeAClass::Principal { m, cycle_index }) => {
                format!("principal, A~_{m}, cycle index {cycle_index}")
            }
            Some(TypeAClass::NotTypeA) => "not type A".to_string(),
        };
        let reduced = match s.reduced_coxeter_number {
            None => "undefined".to_string(),
            Some(k) => order_text(k),
        };
        let _ = writeln!(out, "input: {}", self.input);
        let _ = writeln!(out, "n: {}", self.n);
        let _ = writeln!(out, "connected: {}", self.connected);
        let _ = writeln!(out, "type A: {verdict}");
        let _ = writeln!(out, "corank: {}", s.corank);
        let _ = writeln!(out, "nonnegative: {}", s.nonnegative);
        let _ = writeln!(out, "Coxeter polynomial: {}", self.coxeter_polynomial_text);
        let _ = writeln!(
            out,
            "coefficients: {}",
            coefficient_list(&s.coxeter_polynomial)
        );
        let _ = writeln!(out, "Coxeter number: {}", order_text(s.coxeter_number));
        let _ = writeln!(out, "reduced Coxeter number: {reduced}");
        if s.kernel_basis.is_empty() {
            let _ = writeln!(out, "kernel basis: none");
        } else {
            let _ = writeln!(out, "kernel basis:");
            for v in &s.kernel_basis {
                let _ = writeln!(out, "  {v}");
            }
        }
        out
    }
}

fn order_text(k: MatrixOrder) -> String {
    match k {
        MatrixOrder::Finite(k) => k.to_string(),
        MatrixOrder::ExceedsCutoff => "exceeds cutoff".to_string(),
    }
}

fn coefficient_list(p: &IntPolynomial) -> String {
    let items: Vec<String> = p.coeffs().iter().map(ToString::to_string).collect();
    format!("[{}]", items.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub congruent: bool,
    #[serde(rename = "B")]
    pub b: Option<IntMatrix>,
    pub left_polynomial: IntPolynomial,
    pub right_polynomial: IntPolynomial,
}

impl PairReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(b) = &self.b {
            let _ = writeln!(out, "CONGRUENT");
            let _ = writeln!(out, "B (verified: B^T C_I B = C_J):");
            out.push_str(&b.to_string());
        } else {
            let _ = writeln!(out, "NOT CONGRUENT");
            let _ = writeln!(out, "cox_I(t) = {}", self.left_polynomial);
            let _ = writeln!(out, "cox_J(t) = {}", self.right_polynomial);
        }
        out
    }
}

pub fn witness_text(w: &WitnessRecord) -> String {
    let mut out = String::new();
    let target = match w.target {
        posetcox::CanonicalTarget::OnePeak => "one-peak chain".to_string(),
        posetcox::CanonicalTarget::TwoPeak { p } => format!("two-peak, p = {p}"),
    };
    let _ = writeln!(out, "n: {}", w.n);
    let _ = writeln!(out, "target: {target}");
    let _ = writeln!(out, "verified: {}", w.verified);
    let _ = writeln!(out, "multiplications: {}", w.multiplications_used);
    let _ = writeln!(out, "B:");
    out.push_str(&w.b.to_string());
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub rows: Vec<CensusRow>,
    #[serde(with = "posetcox::serde_int::single")]
    pub principal_total: num_bigint::BigInt,
    #[serde(with = "posetcox::serde_int::single")]
    pub total: num_bigint::BigInt,
}

fn positive_polynomial_text(n: usize) -> String {
    match n {
        0 => "1".into(),
        1 => "t + 1".into(),
        2 => "t^2 + t + 1".into(),
        3 => "t^3 + t^2 + t + 1".into(),
        _ => format!("t^{n} + t^{} + ... + t + 1", n - 1),
    }
}

impl CensusReport {
    pub fn to_text(&self) -> String {
        let cells: Vec<[String; 3]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.p.map_or("-".to_string(), |p| p.to_string()),
                    match r.p {
                        None => positive_polynomial_text(self.n),
                        Some(_) => r.polynomial.to_string(),
                    },
                    r.count.to_string(),
                ]
            })
            .collect();
        let header = ["p".to_string(), "cox_I(t)".to_string(), "#I".to_string()];
        let widths: Vec<usize> = (0..3)
            .map(|c| {
                cells
                    .iter()
                    .chain([&header])
                    .map(|r| r[c].len())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |r: &[String; 3]| {
            format!(
                "{:<w0$}  {:<w1$}  {:>w2$}\n",
                r[0],
                r[1],
                r[2],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2]
            )
        };
        let mut out = format!("n = {}\n", self.n);
        out.push_str(&line(&header));
        for r in &cells {
            out.push_str(&line(r));
        }
        let _ = writeln!(out, "principal total: {}", self.principal_total);
        let _ = writeln!(out, "total: {}", self.total);
        out
    }
}
