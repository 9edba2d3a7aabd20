use orlicz_gauge::convergence::*;
use orlicz_gauge::orlicz::default_k_grid;
use orlicz_gauge::*;

fn critical_family(n_max: usize) -> SequenceSpec {
    let t = FamilyTemplate::tall_indicators(n_max);
    t.instances().unwrap().remove(0).2
}

#[test]
fn exponential_theta_separates_modular_from_norm() {
    let seq = critical_family(20);
    let m = Measure::unit();
    let cfg = Quadrature::with_tol(1e-10);
    let th = YoungFunctionSpec::exponential();
    let r = convergence_report(
        &seq,
        &th,
        &m,
        &default_k_grid(),
        &cfg,
        &ClassifierConfig::default(),
    )
    .unwrap();
    assert_eq!(r.verdicts.modular_l, Verdict::Converges, "{:#?}", r.trace);
    assert_eq!(r.modular_l.best_k, 1.0);
    assert_eq!(
        r.verdicts.norm_l,
        Verdict::DoesNotConverge,
        "{:#?}",
        r.trace
    );
    let row = r.modular_l.best_row();
    for (n, v) in r.modular_l.n.iter().zip(row) {
        let v = v.to_scalar();
        let exact = 1.0 / *n as f64;
        assert!((v / exact - 1.0).abs() < 1e-6, "n={n}: {v} vs {exact}");
    }
    for v in &r.norm_l.values {
        assert!(v.to_scalar() >= 0.5);
    }
    // the stated modular-L => norm-H implication fails on this family
    let table = evaluate_implications(&r.verdicts);
    assert!(
        table
            .iter()
            .any(|row| row.name == "modular-L => norm-H"
                && row.status == ImplicationStatus::Violation)
    );
}

#[test]
fn power_theta_sweep_has_no_modular_without_norm() {
    let m = Measure::unit();
    let cfg = Quadrature::with_tol(1e-10);
    let r = counterexample_search(
        &YoungFunctionSpec::square(),
        &FamilyTemplate::tall_indicators(20),
        &m,
        &default_k_grid(),
        &cfg,
        &ClassifierConfig::default(),
    )
    .unwrap();
    assert_eq!(r.instances_examined, 7);
    let bad: Vec<_> = r
        .modular_without_norm()
        .map(|c| (&c.variant, &c.params, &c.report.trace))
        .collect();
    assert!(bad.is_empty(), "{bad:#?}");

    let e = counterexample_search(
        &YoungFunctionSpec::exponential(),
        &FamilyTemplate::tall_indicators(20),
        &m,
        &default_k_grid(),
        &cfg,
        &ClassifierConfig::default(),
    )
    .unwrap();
    assert!(e.modular_without_norm().any(|c| c.variant == "critical"));
}

#[test]
fn reports_are_deterministic() {
    let seq = critical_family(12);
    let run = || {
        let r = convergence_report(
            &seq,
            &YoungFunctionSpec::exponential(),
            &Measure::unit(),
            &default_k_grid(),
            &Quadrature::with_tol(1e-10),
            &ClassifierConfig::default(),
        )
        .unwrap();
        r.to_csv()
    };
    assert_eq!(run(), run());
}

#[test]
fn closed_form_modular_distance() {
    // rho(k t / n) for theta = x^2 is k^2 / (3 n^2)
    let seq: SequenceSpec = serde_json::from_str(
        r#"{"generator": {"kind": "combination", "params": {"coefficients": [{"expr": "1/n"}]},
             "children": [{"kind": "monomial", "params": {"alpha": 1.0}}]},
            "limit": {"kind": "constant", "params": {"c": 0.0}}, "n_max": 10}"#,
    )
    .unwrap();
    let grid = [0.5, 1.0, 2.0];
    let r = modular_convergence(
        &seq,
        &YoungFunctionSpec::square(),
        &Measure::unit(),
        &grid,
        &Quadrature::with_tol(1e-12),
        quadrature::Backend::Hk,
        &ClassifierConfig::default(),
    )
    .unwrap();
    for (i, k) in grid.iter().enumerate() {
        for (j, n) in r.n.iter().enumerate() {
            let exact = k * k / (3.0 * (*n as f64).powi(2));
            assert!((r.values[i][j].to_scalar() - exact).abs() < 1e-11);
        }
    }
    assert_eq!(r.verdict, Verdict::Converges);
    assert_eq!(r.best_k, 1.0);
}
