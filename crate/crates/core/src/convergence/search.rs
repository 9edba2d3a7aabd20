//! Parameter sweeps over sequence families looking for modular-but-not-norm
//! convergence and for H-only modular convergence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::analysis::{convergence_report, ConvergenceReport};
use super::classify::{ClassifierConfig, Verdict};
use crate::catalog::{FunctionInput, FunctionSpec, SequenceSpec, VectorFunctionSpec};
use crate::error::{Error, Result};
use crate::orlicz::YoungFunctionSpec;
use crate::partition::WeightedMeasure;
use crate::quadrature::QuadratureConfig;
use crate::Scalar;

/// One generator with a grid of template parameters (cartesian product).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateVariant {
    pub name: String,
    /// Function tree with `{"expr"}` leaves; expressions see `n` and the
    /// parameters.
    pub generator: Value,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyTemplate {
    pub variants: Vec<TemplateVariant>,
    pub limit: FunctionInput,
    #[serde(default = "two")]
    pub n_min: usize,
    pub n_max: usize,
}

fn two() -> usize {
    2
}

/// `n * chi_[0, w]` with the width expression `w`.
pub fn tall_indicator(width: &str) -> Value {
    json!({
        "kind": "combination",
        "params": {"coefficients": [{"expr": "n"}]},
        "children": [{"kind": "indicator", "params": {"u": 0.0, "v": {"expr": width}}}]
    })
}

/// `(variant name, parameter values, sequence)`.
pub type Instance = (String, BTreeMap<String, f64>, SequenceSpec);

impl FamilyTemplate {
    /// `n * chi_[0, a_n]` for `a_n` in `1/(n (e^n - n - 1))`, `n^-b`
    /// (`b = 1..4`) and `e^(-c n)` (`c = 1, 2`), `n = 2..=n_max`.
    pub fn tall_indicators(n_max: usize) -> Self {
        let variant = |name: &str, width: &str, params: &[(&str, &[f64])]| TemplateVariant {
            name: name.into(),
            generator: tall_indicator(width),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_vec()))
                .collect(),
        };
        Self {
            variants: vec![
                variant("critical", "1/(n*(exp(n)-n-1))", &[]),
                variant("power", "n^(-b)", &[("b", &[1.0, 2.0, 3.0, 4.0])]),
                variant("exponential", "exp(-c*n)", &[("c", &[1.0, 2.0])]),
            ],
            limit: FunctionInput::Scalar(FunctionSpec::zero()),
            n_min: 2,
            n_max,
        }
    }

    pub fn empty() -> Self {
        Self {
            variants: Vec::new(),
            limit: FunctionInput::Vector(VectorFunctionSpec::zero(1, Default::default())),
            n_min: 2,
            n_max: 8,
        }
    }

    /// Every `(variant, parameters, sequence)` of the sweep, in variant order
    /// and lexicographic parameter order.
    pub fn instances(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for v in &self.variants {
            let mut grid: Vec<BTreeMap<String, f64>> = vec![BTreeMap::new()];
            for (name, values) in &v.params {
                if values.is_empty() {
                    return Err(Error::InvalidConfig(format!(
                        "parameter `{name}` of variant `{}` has no values",
                        v.name
                    )));
                }
                grid = grid
                    .into_iter()
                    .flat_map(|base| {
                        values.iter().map(move |x| {
                            let mut p = base.clone();
                            p.insert(name.clone(), *x);
                            p
                        })
                    })
                    .collect();
            }
            for params in grid {
                let seq = SequenceSpec {
                    generator: v.generator.clone(),
                    limit: self.limit.clone(),
                    n_max: self.n_max,
                    n_min: self.n_min,
                    params: params.clone(),
                };
                seq.validate()?;
                out.push((v.name.clone(), params, seq));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    /// Modular convergence in the H sense, not certified in the L sense.
    HModularOnly,
    /// L-sense modular convergence without L-sense norm convergence.
    ModularWithoutNormL,
    /// H-sense modular convergence without H-sense norm convergence.
    ModularWithoutNormH,
}

impl CandidateKind {
    pub fn is_modular_without_norm(self) -> bool {
        matches!(
            self,
            CandidateKind::ModularWithoutNormL | CandidateKind::ModularWithoutNormH
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    deserialize = "T: Scalar + Deserialize<'de>",
    serialize = "T: Scalar + Serialize"
))]
pub struct Candidate<T> {
    pub variant: String,
    pub params: BTreeMap<String, f64>,
    pub kinds: Vec<CandidateKind>,
    /// The full per-n table, for audit.
    pub report: ConvergenceReport<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    deserialize = "T: Scalar + Deserialize<'de>",
    serialize = "T: Scalar + Serialize"
))]
pub struct SearchResult<T> {
    pub instances_examined: usize,
    pub candidates: Vec<Candidate<T>>,
}

impl<T> SearchResult<T> {
    /// Candidates of the modular-yes / norm-no kind.
    pub fn modular_without_norm(&self) -> impl Iterator<Item = &Candidate<T>> {
        self.candidates
            .iter()
            .filter(|c| c.kinds.iter().any(|k| k.is_modular_without_norm()))
    }
}

pub fn candidate_kinds<T>(r: &ConvergenceReport<T>) -> Vec<CandidateKind> {
    let v = &r.verdicts;
    let mut kinds = Vec::new();
    if v.modular_h == Verdict::Converges && v.modular_l != Verdict::Converges {
        kinds.push(CandidateKind::HModularOnly);
    }
    if v.modular_l == Verdict::Converges && v.norm_l == Verdict::DoesNotConverge {
        kinds.push(CandidateKind::ModularWithoutNormL);
    }
    if v.modular_h == Verdict::Converges && v.norm_h == Verdict::DoesNotConverge {
        kinds.push(CandidateKind::ModularWithoutNormH);
    }
    kinds
}

/// Sweeps the template and returns every instance that shows either
/// phenomenon. Finite-horizon evidence only.
pub fn counterexample_search<T: Scalar>(
    theta: &YoungFunctionSpec,
    template: &FamilyTemplate,
    m: &WeightedMeasure<T>,
    k_grid: &[f64],
    cfg: &QuadratureConfig<T>,
    classifier: &ClassifierConfig,
) -> Result<SearchResult<T>> {
    let instances = template.instances()?;
    let mut candidates = Vec::new();
    for (variant, params, seq) in &instances {
        let report = convergence_report(seq, theta, m, k_grid, cfg, classifier)?;
        let kinds = candidate_kinds(&report);
        if !kinds.is_empty() {
            candidates.push(Candidate {
                variant: variant.clone(),
                params: params.clone(),
                kinds,
                report,
            });
        }
    }
    Ok(SearchResult {
        instances_examined: instances.len(),
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_expand_the_grid() {
        let t = FamilyTemplate::tall_indicators(10);
        let inst = t.instances().unwrap();
        assert_eq!(inst.len(), 1 + 4 + 2);
        assert_eq!(inst[2].1.get("b"), Some(&2.0));
        let f5 = inst[0].2.term(5).unwrap();
        let a5 = 1.0 / (5.0 * (5f64.exp() - 6.0));
        assert_eq!(f5.evaluate(a5 / 2.0).unwrap(), vec![5.0]);
        assert_eq!(f5.evaluate(a5 * 1.01).unwrap(), vec![0.0]);
    }

    #[test]
    fn empty_template_gives_nothing() {
        let m = WeightedMeasure::<f64>::unit();
        let r = counterexample_search(
            &YoungFunctionSpec::square(),
            &FamilyTemplate::empty(),
            &m,
            &[1.0],
            &QuadratureConfig::default(),
            &ClassifierConfig::default(),
        )
        .unwrap();
        assert_eq!(r.instances_examined, 0);
        assert!(r.candidates.is_empty());
    }
}
