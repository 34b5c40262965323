//! Bundled analysis of a system and its JSON report.

use serde_json::{json, Value};

use super::null_form::{check_null_condition, check_strong_null, Factor, NullDecomposition, StrongNullResult};
use super::partition::{find_partition, EnumerationBound, PartitionOutcome};
use crate::rational;
use crate::system_model::{validate_symmetricity, QuadraticForm, SymmetricityReport, SystemSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub n: usize,
    pub n1: usize,
    pub symmetricity: SymmetricityReport,
    pub null_condition: Vec<NullDecomposition>,
    pub strong_null: Vec<StrongNullResult>,
    pub partition: Result<PartitionOutcome, EnumerationBound>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn null_condition_holds(&self) -> bool {
        self.null_condition.iter().all(NullDecomposition::holds)
    }

    /// Both (a) and (b) are certified and the quasilinear part is symmetric.
    pub fn applies(&self) -> bool {
        self.symmetricity.symmetric
            && self.null_condition_holds()
            && matches!(self.partition, Ok(PartitionOutcome::Found(_)))
    }

    pub fn partition_sets(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        match &self.partition {
            Ok(PartitionOutcome::Found(c)) => Some((c.i1.iter().copied().collect(), c.i2.iter().copied().collect())),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let wave = |f: &Factor| f.component - self.n1;
        let null_json: Vec<Value> = self
            .null_condition
            .iter()
            .map(|d| {
                let a: Vec<Value> = d
                    .a
                    .iter()
                    .map(|((f, g), c)| json!({"j": wave(f), "k": wave(g), "alpha": f.alpha, "beta": g.alpha, "coeff": rational::format(c)}))
                    .collect();
                let b: Vec<Value> = d
                    .b
                    .iter()
                    .map(|((x, y, f, g), c)| {
                        json!({"a": x, "b": y, "j": wave(f), "k": wave(g), "alpha": f.alpha, "beta": g.alpha, "coeff": rational::format(c)})
                    })
                    .collect();
                let note = if d.holds() || d.witness.is_some() {
                    Value::Null
                } else {
                    json!("residual nonzero, no explicit witness found")
                };
                json!({
                    "equation": d.equation,
                    "wave": d.equation - self.n1,
                    "holds": d.holds(),
                    "A": a,
                    "B": b,
                    "residual": d.residual.to_string(),
                    "witness": d.witness,
                    "note": note,
                })
            })
            .collect();
        let strong: Vec<Value> = self
            .strong_null
            .iter()
            .map(|r| json!({"equation": r.equation, "holds": r.holds, "residual": r.combination.residual.to_string(), "witness": r.witness}))
            .collect();
        let partition = match &self.partition {
            Err(e) => json!({"status": "bound_exceeded", "error": e.to_string()}),
            Ok(outcome) => {
                let (status, eligibility, extra) = match outcome {
                    PartitionOutcome::Found(c) => {
                        let divs: Vec<Value> = c
                            .div_certs
                            .iter()
                            .map(|(k, cert)| json!({"wave": k, "G": cert.g.iter().map(form_terms).collect::<Vec<_>>(), "G_text": cert.g.iter().map(|g| g.to_string()).collect::<Vec<_>>()}))
                            .collect();
                        ("found", &c.eligibility, json!({"I1": c.i1, "I2": c.i2, "divergence": divs, "tails_assumed": c.tails_assumed}))
                    }
                    PartitionOutcome::Infeasible(f) => {
                        let blocking: Vec<Value> = f.blocking.iter().map(|(k, why)| json!({"wave": k, "reason": why})).collect();
                        ("infeasible", &f.eligibility, json!({"blocking": blocking}))
                    }
                };
                let elig: Vec<Value> = eligibility
                    .iter()
                    .map(|e| {
                        let witness = e.b_i.as_ref().err().map(|w| {
                            json!({"equation": w.equation, "x": w.x, "y": w.y, "coeff": rational::format(&w.coeff)})
                        });
                        json!({"wave": e.k, "b_i": e.may_be_i1(), "b_i_witness": witness, "divergence": e.may_be_i2(), "divergence_residual": e.divergence.residual.to_string()})
                    })
                    .collect();
                let mut v = json!({"status": status, "eligibility": elig});
                v.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
                v
            }
        };
        json!({
            "verdict": if self.applies() { "applies" } else { "does_not_apply" },
            "N": self.n,
            "N1": self.n1,
            "symmetricity": {
                "checked": !self.symmetricity.gamma_absent,
                "symmetric": self.symmetricity.symmetric,
                "violations": self.symmetricity.violations,
            },
            "null_condition": null_json,
            "strong_null": strong,
            "partition": partition,
            "notes": self.notes,
        })
    }
}

fn form_terms(f: &QuadraticForm) -> Value {
    Value::Array(f.terms().map(|(x, y, c)| json!({"x": x, "y": y, "coeff": rational::format(c)})).collect())
}

pub fn analyze_system(spec: &SystemSpec) -> AnalysisReport {
    let symmetricity = validate_symmetricity(spec);
    let null_condition = check_null_condition(spec);
    let strong_null = check_strong_null(spec);
    let partition = find_partition(spec);
    let mut notes = Vec::new();
    if symmetricity.gamma_absent {
        notes.push("no quasilinear coefficients given; symmetricity holds vacuously".to_string());
    }
    if let Ok(PartitionOutcome::Found(c)) = &partition {
        for i in &c.tails_assumed {
            notes.push(format!("tail of equation {i} assumed to be in divergence form (user-asserted)"));
        }
    }
    let second = spec.second_derivative_equations();
    if !second.is_empty() {
        notes.push(format!("equations {second:?} contain semilinear second-derivative terms"));
    }
    AnalysisReport { n: spec.n(), n1: spec.n1(), symmetricity, null_condition, strong_null, partition, notes }
}
