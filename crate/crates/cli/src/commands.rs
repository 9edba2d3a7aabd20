//! One function per subcommand. Each returns the JSON result, optional CSV
//! and SVG renderings, and the exit code the result calls for.

use std::fmt::Write as _;
use std::time::Instant;

use orlicz_gauge::catalog::{FunctionInput, VectorFunctionSpec};
use orlicz_gauge::convergence::{
    convergence_report, counterexample_search, evaluate_implications, implication_check,
    standard_corpus, ConvergenceReport, FamilyTemplate, ImplicationRow, ImplicationStatus, Verdict,
    Verdicts,
};
use orlicz_gauge::orlicz::{
    check_nfunction_axioms, default_k_grid, embedding_report, h_orlicz_membership,
    luxemburg_norm_detailed, modular_scaled, MembershipVerdict,
};
use orlicz_gauge::partition::WeightedMeasure;
use orlicz_gauge::quadrature::{
    alexiewicz_norm, integrate, sup_riemann_norm_with, QuadratureConfig, SupNormConfig,
};
use orlicz_gauge::{Backend, Error, ExtValue, FunctionSpec, Scalar, Status};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Command, ExperimentConfig};
use crate::error::{exit, CliError};
use crate::output::{line_plot_svg, Series};

/// The scalar types a run can be carried out in.
pub trait Num: Scalar + serde::Serialize {}

impl<T: Scalar + serde::Serialize> Num for T {}

pub struct Outcome {
    pub result: Value,
    pub csv: Option<String>,
    pub svg: Option<String>,
    pub code: i32,
    /// Why the code is not 0.
    pub reason: Option<String>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self {
            result,
            csv: None,
            svg: None,
            code: exit::OK,
            reason: None,
        }
    }

    fn flag(mut self, code: i32, reason: impl Into<String>) -> Self {
        // a violation outranks an indeterminate result
        if code > self.code {
            self.code = code;
            self.reason = Some(reason.into());
        }
        self
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

fn to_json<S: serde::Serialize>(v: &S) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::io(format!("serializing the result: {e}")))
}

fn quadrature<T: Num>(q: &QuadratureConfig<f64>) -> QuadratureConfig<T> {
    // an untouched relative floor follows the precision of the run
    let rel_tol = if q.rel_tol == QuadratureConfig::<f64>::default().rel_tol {
        QuadratureConfig::<T>::default().rel_tol
    } else {
        T::of(q.rel_tol)
    };
    QuadratureConfig {
        tol: T::of(q.tol),
        rel_tol,
        max_cells: q.max_cells,
        h_max: q.h_max.map(T::of),
        singular_shrink_ratio: T::of(q.singular_shrink_ratio),
        divergence_threshold: T::of(q.divergence_threshold),
        max_shrink_steps: q.max_shrink_steps,
    }
}

fn ext_f64<T: Num>(v: ExtValue<T>) -> Option<f64> {
    v.finite().map(Scalar::as_f64)
}

fn csv_ext<T: Num>(v: ExtValue<T>) -> String {
    match v {
        ExtValue::Finite(x) => format!("{:e}", x.as_f64()),
        ExtValue::Infinite => "inf".into(),
        ExtValue::Indeterminate => "indeterminate".into(),
    }
}

struct Ctx<T> {
    cfg: ExperimentConfig,
    m: WeightedMeasure<T>,
    q: QuadratureConfig<T>,
    backend: Backend,
    seed: u64,
}

impl<T: Num> Ctx<T> {
    fn new(cfg: ExperimentConfig) -> Result<Self, CliError> {
        Ok(Self {
            m: cfg.measure().build()?,
            q: quadrature(&cfg.quadrature()),
            backend: cfg.backend.unwrap_or(Backend::Hk),
            seed: cfg.seed.unwrap_or(0),
            cfg,
        })
    }

    fn function(&self) -> VectorFunctionSpec {
        self.cfg.function.clone().expect("validated").into_vector()
    }

    fn k_grid(&self) -> Vec<f64> {
        self.cfg.k_grid.clone().unwrap_or_else(default_k_grid)
    }

    fn sup_config(&self) -> SupNormConfig {
        SupNormConfig {
            budget: self.cfg.samples.unwrap_or(SupNormConfig::default().budget),
            seed: self.seed,
            ..SupNormConfig::default()
        }
    }
}

pub fn dispatch<T: Num>(command: Command, cfg: ExperimentConfig) -> Result<Outcome, CliError> {
    let ctx = Ctx::<T>::new(cfg)?;
    match command {
        Command::Integrate => run_integrate(&ctx),
        Command::HkNorm => run_hk_norm(&ctx),
        Command::Alexiewicz => run_alexiewicz(&ctx),
        Command::Modular => run_modular(&ctx),
        Command::LuxNorm => run_lux_norm(&ctx),
        Command::Axioms => run_axioms(&ctx),
        Command::Membership => run_membership(&ctx),
        Command::Embedding => run_embedding(&ctx),
        Command::Converge => run_converge(&ctx),
        Command::Implications => run_implications(&ctx),
        Command::Counterexample => run_counterexample(&ctx),
        Command::Bench => run_bench(&ctx),
    }
}

fn run_integrate<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let f = ctx.function();
    let r = integrate(&f, &ctx.m, &ctx.q, ctx.backend)?;
    let value = if r.value.len() == 1 {
        json!(r.value[0])
    } else {
        json!(r.value)
    };
    let out = Outcome::ok(json!({
        "value": value,
        "error_estimate": r.error_estimate,
        "status": r.status,
        "cells_used": r.cells_used,
        "abs_integral": r.abs_integral,
        "backend": ctx.backend,
    }));
    Ok(match r.status {
        Status::Converged => out,
        s => out.flag(
            exit::INDETERMINATE,
            format!("integration ended with status {s:?}"),
        ),
    })
}

fn run_hk_norm<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let est = sup_riemann_norm_with(&ctx.function(), &ctx.m, &ctx.sup_config())?;
    let mut v = to_json(&est)?;
    v["lower_bound"] = json!(true);
    Ok(Outcome::ok(v))
}

fn run_alexiewicz<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let grid = ctx.cfg.grid.unwrap_or(1024);
    let v = alexiewicz_norm(&ctx.function(), &ctx.m, grid, &ctx.q)?;
    Ok(Outcome::ok(json!({"value": v, "grid": grid})))
}

fn run_modular<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let k = ctx.cfg.k.unwrap_or(1.0);
    let theta = ctx.cfg.theta.as_ref().expect("validated");
    let v = modular_scaled(
        &ctx.function(),
        T::of(k),
        theta,
        &ctx.m,
        &ctx.q,
        ctx.backend,
    )?;
    let out = Outcome::ok(json!({"value": v, "k": k, "backend": ctx.backend}));
    Ok(if v.is_indeterminate() {
        out.flag(exit::INDETERMINATE, "the modular could not be decided")
    } else {
        out
    })
}

fn run_lux_norm<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let theta = ctx.cfg.theta.as_ref().expect("validated");
    match luxemburg_norm_detailed(&ctx.function(), theta, &ctx.m, &ctx.q, ctx.backend) {
        Ok(r) => Ok(Outcome::ok(to_json(&r)?)),
        Err(Error::NotInSpace) => Ok(Outcome::ok(json!({"value": "inf", "backend": ctx.backend}))
            .flag(exit::INDETERMINATE, Error::NotInSpace.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn run_axioms<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let theta = ctx.cfg.theta.as_ref().expect("validated");
    let domain = ctx.cfg.domain.unwrap_or(ctx.cfg.measure().interval);
    let report = check_nfunction_axioms(theta, domain, ctx.cfg.samples.unwrap_or(2000), ctx.seed)?;
    let out = Outcome::ok(to_json(&report)?);
    Ok(if report.passed() {
        out
    } else {
        out.flag(exit::VIOLATION, "an N-function condition is violated")
    })
}

fn run_membership<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let theta = ctx.cfg.theta.as_ref().expect("validated");
    let r = h_orlicz_membership(
        &ctx.function(),
        theta,
        &ctx.m,
        ctx.cfg.k_grid.as_deref(),
        &ctx.q,
    )?;
    let mut csv = String::from("k,modular\n");
    for (k, v) in r.k_grid.iter().zip(&r.modulars) {
        let _ = writeln!(csv, "{k:e},{}", csv_ext(*v));
    }
    let out = Outcome::ok(to_json(&r)?).with_csv(csv);
    Ok(if r.verdict == MembershipVerdict::Indeterminate {
        out.flag(exit::INDETERMINATE, "membership could not be decided")
    } else {
        out
    })
}

fn run_embedding<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let theta = ctx.cfg.theta.as_ref().expect("validated");
    let r = embedding_report(&ctx.function(), theta, &ctx.m, &ctx.q, &ctx.sup_config())?;
    let mut out = Outcome::ok(to_json(&r)?);
    let checks = [
        r.hk_below_lebesgue,
        r.backends_agree,
        r.finite_when_in_space,
    ];
    if checks.contains(&Some(false)) {
        out = out.flag(exit::VIOLATION, "an embedding inequality failed");
    }
    if r.lux_hk.is_indeterminate() || r.lux_lebesgue.is_indeterminate() {
        out = out.flag(exit::INDETERMINATE, "a Luxemburg norm could not be decided");
    }
    Ok(out)
}

fn plot<T: Num>(r: &ConvergenceReport<T>) -> String {
    let row = |n: &[usize], vals: &[ExtValue<T>]| -> Vec<(f64, f64)> {
        n.iter()
            .zip(vals)
            .filter_map(|(n, v)| ext_f64(*v).map(|y| (*n as f64, y)))
            .collect()
    };
    let ml = &r.modular_l;
    let mh = &r.modular_h;
    let series = [
        Series {
            label: format!("modular L, k={}", ml.best_k),
            points: row(&ml.n, ml.best_row()),
        },
        Series {
            label: format!("modular H, k={}", mh.best_k),
            points: row(&mh.n, mh.best_row()),
        },
        Series {
            label: "norm L".into(),
            points: row(&r.norm_l.n, &r.norm_l.values),
        },
        Series {
            label: "norm H".into(),
            points: row(&r.norm_h.n, &r.norm_h.values),
        },
    ];
    line_plot_svg(
        &format!("distance to the limit, theta = {}", r.theta.label()),
        "n",
        &series,
    )
}

fn undecided(v: &Verdicts) -> bool {
    [v.modular_l, v.modular_h, v.norm_l, v.norm_h].contains(&Verdict::Indeterminate)
}

fn run_converge<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let seq = ctx.cfg.sequence.as_ref().expect("validated");
    let theta = ctx.cfg.theta.as_ref().expect("validated");
    let r = convergence_report(
        seq,
        theta,
        &ctx.m,
        &ctx.k_grid(),
        &ctx.q,
        &ctx.cfg.classifier(),
    )?;
    let mut out = Outcome::ok(to_json(&r)?).with_csv(r.to_csv());
    if ctx.cfg.output.svg.is_some() {
        out.svg = Some(plot(&r));
    }
    Ok(if undecided(&r.verdicts) {
        out.flag(exit::INDETERMINATE, "at least one verdict is indeterminate")
    } else {
        out
    })
}

const IMPLICATION_HEADER: &str = "family,implication,origin,antecedent,consequent,status\n";

fn implication_csv(csv: &mut String, family: &str, rows: &[ImplicationRow]) {
    for r in rows {
        let _ = writeln!(
            csv,
            "{},{},{:?},{:?},{:?},{:?}",
            quote(family),
            r.name,
            r.origin,
            r.antecedent_verdict,
            r.consequent_verdict,
            r.status
        );
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn flag_rows(out: Outcome, rows: &[ImplicationRow]) -> Outcome {
    let mut out = out;
    if let Some(r) = rows
        .iter()
        .find(|r| r.status == ImplicationStatus::Violation)
    {
        out = out.flag(exit::VIOLATION, format!("VIOLATION of {}", r.name));
    }
    if rows.iter().any(|r| {
        matches!(
            r.status,
            ImplicationStatus::Unknown | ImplicationStatus::Unconfirmed
        )
    }) {
        out = out.flag(
            exit::INDETERMINATE,
            "some implications could not be decided",
        );
    }
    out
}

fn run_implications<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let classifier = ctx.cfg.classifier();
    let grid = ctx.k_grid();
    let families: Vec<(
        String,
        orlicz_gauge::SequenceSpec,
        orlicz_gauge::YoungFunctionSpec,
    )> = match &ctx.cfg.sequence {
        Some(seq) => vec![(
            "sequence".into(),
            seq.clone(),
            ctx.cfg.theta.clone().expect("validated"),
        )],
        None => standard_corpus()
            .into_iter()
            .map(|e| (e.name, e.sequence, e.theta))
            .collect(),
    };
    let tables = families
        .par_iter()
        .map(|(name, seq, theta)| {
            implication_check(seq, theta, &ctx.m, &grid, &ctx.q, &classifier)
                .map(|t| (name.clone(), t))
        })
        .collect::<orlicz_gauge::Result<Vec<_>>>()?;
    let mut csv = String::from(IMPLICATION_HEADER);
    let mut all_rows = Vec::new();
    let mut result = Vec::new();
    for (name, t) in &tables {
        implication_csv(&mut csv, name, &t.rows);
        all_rows.extend(t.rows.iter().cloned());
        result.push(json!({"family": name, "verdicts": t.report.verdicts, "rows": t.rows, "violations": t.violations}));
    }
    let violations: usize = tables.iter().map(|(_, t)| t.violations).sum();
    let out = Outcome::ok(json!({"families": result, "violations": violations})).with_csv(csv);
    Ok(flag_rows(out, &all_rows))
}

fn run_counterexample<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let theta = ctx.cfg.theta.as_ref().expect("validated");
    let template = ctx
        .cfg
        .template
        .clone()
        .unwrap_or_else(|| FamilyTemplate::tall_indicators(20));
    let r = counterexample_search(
        theta,
        &template,
        &ctx.m,
        &ctx.k_grid(),
        &ctx.q,
        &ctx.cfg.classifier(),
    )?;
    let mut csv = String::from("variant,params,kinds,modular_L,modular_H,norm_L,norm_H,best_k\n");
    let mut rows = Vec::new();
    let mut candidates = Vec::new();
    for c in &r.candidates {
        let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let kinds: Vec<String> = c.kinds.iter().map(|k| format!("{k:?}")).collect();
        let v = &c.report.verdicts;
        let _ = writeln!(
            csv,
            "{},{},{},{:?},{:?},{:?},{:?},{:e}",
            quote(&c.variant),
            quote(&params.join(";")),
            kinds.join(";"),
            v.modular_l,
            v.modular_h,
            v.norm_l,
            v.norm_h,
            c.report.best_k
        );
        let implications = evaluate_implications(v);
        rows.extend(implications.iter().cloned());
        candidates.push(json!({
            "variant": c.variant,
            "params": c.params,
            "kinds": c.kinds,
            "implications": implications,
            "report": to_json(&c.report)?,
        }));
    }
    let out = Outcome::ok(json!({
        "theta": theta.label(),
        "instances_examined": r.instances_examined,
        "candidates": candidates,
    }))
    .with_csv(csv);
    Ok(flag_rows(out, &rows))
}

fn bench_suite() -> Vec<(String, FunctionInput)> {
    let f = |s: &str| {
        FunctionInput::from_value(serde_json::from_str(s).expect("valid JSON")).expect("valid spec")
    };
    vec![
        (
            "hk_pathological(2, 2)".into(),
            f(r#"{"kind": "hk_pathological", "params": {"beta": 2.0, "gamma": 2.0}}"#),
        ),
        (
            "t^-1/2".into(),
            f(r#"{"kind": "monomial", "params": {"alpha": -0.5}}"#),
        ),
        (
            "sin(200 t)".into(),
            f(
                r#"{"kind": "trig", "params": {"amplitude": 1.0, "frequency": 200.0, "phase": 0.0}}"#,
            ),
        ),
        (
            "chi[0, 1/3]".into(),
            FunctionInput::Scalar(FunctionSpec::indicator(0.0, 1.0 / 3.0).expect("valid")),
        ),
    ]
}

fn run_bench<T: Num>(ctx: &Ctx<T>) -> Result<Outcome, CliError> {
    let cases = match &ctx.cfg.function {
        Some(f) => vec![("function".to_string(), f.clone())],
        None => bench_suite(),
    };
    let repeats = ctx.cfg.repeats.unwrap_or(3);
    let mut csv = String::from("case,repeat,wall_seconds,cells_used,status\n");
    let mut result = Vec::new();
    for (name, f) in cases {
        let f = f.into_vector();
        let mut walls = Vec::with_capacity(repeats);
        let mut last = None;
        for rep in 0..repeats {
            let start = Instant::now();
            let r = integrate(&f, &ctx.m, &ctx.q, ctx.backend)?;
            let wall = start.elapsed().as_secs_f64();
            let _ = writeln!(
                csv,
                "{},{rep},{wall:e},{},{:?}",
                quote(&name),
                r.cells_used,
                r.status
            );
            walls.push(wall);
            last = Some(r);
        }
        let r = last.expect("at least one repeat");
        walls.sort_by(f64::total_cmp);
        result.push(json!({
            "case": name,
            "repeats": repeats,
            "wall_seconds": {"min": walls[0], "median": walls[walls.len() / 2], "max": walls[walls.len() - 1]},
            "cells_used": r.cells_used,
            "status": r.status,
        }));
    }
    Ok(Outcome::ok(json!({"backend": ctx.backend, "cases": result})).with_csv(csv))
}
