use serde::{Deserialize, Serialize};

use super::analysis::{convergence_report, ConvergenceReport, Verdicts};
use super::classify::{ClassifierConfig, Verdict};
use crate::catalog::SequenceSpec;
use crate::error::Result;
use crate::orlicz::YoungFunctionSpec;
use crate::partition::WeightedMeasure;
use crate::quadrature::QuadratureConfig;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    ModularL,
    ModularH,
    NormL,
    NormH,
}

impl Sense {
    pub fn of(self, v: &Verdicts) -> Verdict {
        match self {
            Sense::ModularL => v.modular_l,
            Sense::ModularH => v.modular_h,
            Sense::NormL => v.norm_l,
            Sense::NormH => v.norm_h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Stated as a theorem or remark for H-Orlicz spaces.
    Stated,
    /// The classical fact for Lebesgue-based Orlicz spaces.
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImplicationStatus {
    /// Antecedent and consequent both converge.
    Holds,
    /// Antecedent does not converge.
    Vacuous,
    /// Antecedent indeterminate: no flag.
    Unknown,
    /// Antecedent converges, consequent indeterminate.
    Unconfirmed,
    /// Antecedent converges, consequent certified not to.
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicationRow {
    pub name: String,
    pub antecedent: Sense,
    pub consequent: Sense,
    pub origin: Origin,
    pub antecedent_verdict: Verdict,
    pub consequent_verdict: Verdict,
    pub status: ImplicationStatus,
}

/// The implications tested on every sequence.
pub const IMPLICATIONS: [(&str, Sense, Sense, Origin); 5] = [
    (
        "modular-L => modular-H",
        Sense::ModularL,
        Sense::ModularH,
        Origin::Stated,
    ),
    (
        "norm-L => norm-H",
        Sense::NormL,
        Sense::NormH,
        Origin::Stated,
    ),
    (
        "modular-L => norm-H",
        Sense::ModularL,
        Sense::NormH,
        Origin::Stated,
    ),
    (
        "norm-L => modular-H",
        Sense::NormL,
        Sense::ModularH,
        Origin::Stated,
    ),
    (
        "norm-L => modular-L",
        Sense::NormL,
        Sense::ModularL,
        Origin::Classical,
    ),
];

pub fn evaluate_implications(v: &Verdicts) -> Vec<ImplicationRow> {
    IMPLICATIONS
        .iter()
        .map(|&(name, antecedent, consequent, origin)| {
            let (a, c) = (antecedent.of(v), consequent.of(v));
            let status = match (a, c) {
                (Verdict::Converges, Verdict::Converges) => ImplicationStatus::Holds,
                (Verdict::Converges, Verdict::DoesNotConverge) => ImplicationStatus::Violation,
                (Verdict::Converges, Verdict::Indeterminate) => ImplicationStatus::Unconfirmed,
                (Verdict::DoesNotConverge, _) => ImplicationStatus::Vacuous,
                (Verdict::Indeterminate, _) => ImplicationStatus::Unknown,
            };
            ImplicationRow {
                name: name.into(),
                antecedent,
                consequent,
                origin,
                antecedent_verdict: a,
                consequent_verdict: c,
                status,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    deserialize = "T: Scalar + Deserialize<'de>",
    serialize = "T: Scalar + Serialize"
))]
pub struct ImplicationTable<T> {
    pub rows: Vec<ImplicationRow>,
    pub violations: usize,
    pub report: ConvergenceReport<T>,
}

impl<T> ImplicationTable<T> {
    pub fn violated(&self) -> impl Iterator<Item = &ImplicationRow> {
        self.rows
            .iter()
            .filter(|r| r.status == ImplicationStatus::Violation)
    }
}

/// Runs all four analyses and flags every implication whose antecedent
/// converges while its consequent is certified not to.
pub fn implication_check<T: Scalar>(
    seq: &SequenceSpec,
    theta: &YoungFunctionSpec,
    m: &WeightedMeasure<T>,
    k_grid: &[f64],
    cfg: &QuadratureConfig<T>,
    classifier: &ClassifierConfig,
) -> Result<ImplicationTable<T>> {
    let report = convergence_report(seq, theta, m, k_grid, cfg, classifier)?;
    let rows = evaluate_implications(&report.verdicts);
    let violations = rows
        .iter()
        .filter(|r| r.status == ImplicationStatus::Violation)
        .count();
    Ok(ImplicationTable {
        rows,
        violations,
        report,
    })
}
