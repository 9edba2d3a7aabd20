use orlicz_gauge::convergence::*;
use orlicz_gauge::orlicz::default_k_grid;
use orlicz_gauge::*;

fn verdicts(name: &str) -> Verdicts {
    let e = standard_corpus()
        .into_iter()
        .find(|e| e.name == name)
        .unwrap();
    convergence_report(
        &e.sequence,
        &e.theta,
        &Measure::unit(),
        &default_k_grid(),
        &Quadrature::with_tol(1e-10),
        &ClassifierConfig::default(),
    )
    .unwrap()
    .verdicts
}

#[test]
fn corpus_has_no_violations() {
    let m = Measure::unit();
    let cfg = Quadrature::with_tol(1e-10);
    for e in standard_corpus() {
        let t = implication_check(
            &e.sequence,
            &e.theta,
            &m,
            &default_k_grid(),
            &cfg,
            &ClassifierConfig::default(),
        )
        .unwrap();
        assert_eq!(t.violations, 0, "{}: {:#?}", e.name, t.rows);
    }
}

#[test]
fn known_verdicts() {
    use Verdict::*;
    let all = |v| Verdicts {
        modular_l: v,
        modular_h: v,
        norm_l: v,
        norm_h: v,
    };
    assert_eq!(verdicts("t/n"), all(Converges));
    assert_eq!(verdicts("constant sequence"), all(Converges));
    assert_eq!(verdicts("sin(2 pi n t)"), all(DoesNotConverge));
    assert_eq!(verdicts("n chi[0, 1/n]"), all(DoesNotConverge));
    assert_eq!(verdicts("hk_pathological(4, 1) / n"), all(Converges));
}
