use hodd_core::classify::*;
use hodd_core::deriv::LiminfSchedule;
use hodd_core::funcspec::{corpus_lookup, FunctionSpec};
use hodd_core::subdiff::Verdict;
use hodd_core::Error;

fn spec(name: &str) -> FunctionSpec {
    corpus_lookup(name).unwrap().spec
}

fn s() -> LiminfSchedule {
    LiminfSchedule::default()
}

fn origin(f: &FunctionSpec) -> Vec<f64> {
    vec![0.0; f.dim()]
}

#[test]
fn stationary_order_examples() {
    assert_eq!(stationary_order(&spec("ex2"), &[0.0], 5, &s(), 16).unwrap().order, 5);
    let st = stationary_order(&spec("npc-4"), &[0.0], 4, &s(), 16).unwrap();
    assert_eq!((st.order, st.failed_order), (3, Some(4)));
    assert_eq!(st.witness, Some(vec![-1.0]));
    assert_eq!(stationary_order(&spec("neg-sphere"), &[0.0, 0.0], 3, &s(), 16).unwrap().order, 1);
}

#[test]
fn critical_direction_examples() {
    let f = spec("npc-4");
    let c3 = critical_directions(&f, &[0.0], 3, &s(), 16).unwrap();
    assert!(c3.contains(&vec![1.0]) && c3.contains(&vec![-1.0]));
    let c4 = critical_directions(&f, &[0.0], 4, &s(), 16).unwrap();
    assert_eq!(c4, vec![vec![-1.0]]);
    assert!(critical_directions(&spec("abs-1d"), &[0.0], 1, &s(), 16).unwrap().is_empty());
    assert!(matches!(critical_directions(&f, &[0.0], 6, &s(), 16), Err(Error::Precondition(_))));
}

#[test]
fn necessary_examples() {
    assert!(check_necessary(&spec("ex2"), &[0.0], 4, &s(), 16).unwrap().holds());
    assert!(check_necessary(&spec("sq-norm"), &[0.0, 0.0], 2, &s(), 16).unwrap().holds());
    let t = check_necessary(&spec("neg-sphere"), &[0.0, 0.0], 2, &s(), 16).unwrap();
    assert_eq!((t.verdict, t.order), (Verdict::Fails, 2));
}

#[test]
fn strict_sufficient_examples() {
    let r = check_strict_sufficient(&spec("mixed-24"), &[0.0, 0.0], 4, &s(), 16).unwrap();
    assert!(r.verdict.holds(), "{:?}", r.verdict);
    for d in &r.n_u {
        let expect = if d.direction[0].abs() < 1e-12 { 4 } else { 2 };
        assert_eq!(d.order, Some(expect), "{:?}", d.direction);
    }
    let r = check_strict_sufficient(&spec("ex2"), &[0.0], 5, &s(), 16).unwrap();
    assert_ne!(r.verdict.verdict, Verdict::Holds);
    let r = check_strict_sufficient(&spec("abs-1d"), &[0.0], 1, &s(), 16).unwrap();
    assert!(r.verdict.holds());
    assert!(r.n_u.iter().all(|d| d.order == Some(1)));
}

#[test]
fn isolated_examples() {
    let full = IsolationMode::FullSphere;
    assert!(check_isolated(&spec("sq-norm"), &[0.0, 0.0], 2, &s(), 16, full).unwrap().holds());
    for n in 1..=6 {
        assert!(check_isolated(&spec("exp-2d"), &[0.0, 0.0], n, &s(), 16, full).unwrap().fails(), "n={n}");
    }
    assert!(check_isolated(&spec("abs-1d"), &[0.0], 1, &s(), 16, full).unwrap().holds());
}

#[test]
fn least_order_examples() {
    let q = least_isolated_order(&spec("quartic-1d"), &[0.0], 6, &s()).unwrap();
    assert_eq!(q.order, Some(4));
    let vals: Vec<f64> = q.demyanov.iter().map(|e| e.value.to_f64()).collect();
    assert!(vals[..3].iter().all(|v| v.abs() < 1e-5) && (vals[3] - 1.0).abs() < 1e-6, "{vals:?}");
    assert_eq!(least_isolated_order(&spec("sq-norm"), &[0.0, 0.0], 6, &s()).unwrap().order, Some(2));
    let e = least_isolated_order(&spec("exp-2d"), &[0.0, 0.0], 6, &s()).unwrap();
    assert_eq!((e.order, e.status), (None, LeastStatus::NoneUpToCap));
    let n = least_isolated_order(&spec("neg-sphere"), &[0.0, 0.0], 4, &s()).unwrap();
    assert_eq!(n.status, LeastStatus::NotCandidate);
}

#[test]
fn condition_table_examples() {
    let t = condition_table(&spec("abs-1d"), &[0.0], 1, &s(), 16).unwrap();
    for fam in ["D", "N", "S", "G"] {
        assert_eq!(t.status(fam, 1), Some(CellStatus::Holds), "{fam}");
    }
    let t = condition_table(&spec("neg-sphere"), &[0.0, 0.0], 2, &s(), 16).unwrap();
    assert_eq!(t.status("N", 2), Some(CellStatus::Fails));
    let t = condition_table(&spec("cusp-trap-4"), &[0.0, 0.0], 4, &s(), 16).unwrap();
    for k in 1..=4 {
        assert_eq!(t.status("D", k), Some(CellStatus::Holds), "D{k}");
    }
    assert_eq!(t.status("N", 4), Some(CellStatus::Fails));
}

#[test]
fn report_shape() {
    let f = spec("sq-norm");
    let r = analyze(&f, &origin(&f), 3, &s(), 16).unwrap();
    assert_eq!(r.stationary_order, 3);
    assert_eq!(r.verdicts.least_isolated_order.order, Some(2));
    assert!(r.verdicts.isolated[&2].holds() && r.verdicts.isolated[&1].fails());
    for fam in ["hadamard", "studniarski", "dini", "ginchev", "demyanov"] {
        assert_eq!(r.tables[fam].len(), 3, "{fam}");
    }
    let json = serde_json::to_string(&r).unwrap();
    let back: PointReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
}
