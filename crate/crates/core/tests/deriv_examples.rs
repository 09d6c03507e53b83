use hodd_core::deriv::*;
use hodd_core::funcspec::corpus_lookup;
use hodd_core::ExtReal;

fn spec(name: &str) -> hodd_core::funcspec::FunctionSpec {
    corpus_lookup(name).unwrap().spec
}

fn close(a: ExtReal, b: f64, tol: f64) -> bool {
    let a = a.to_f64();
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn delta_n_examples() {
    let chain1 = MultiplierChain::zero(2).unwrap();
    let v = delta_n(&spec("sq-norm"), &[0.0, 0.0], &chain1, 0.1, &[1.0, 0.0]).unwrap();
    assert!(close(v, 2.0, 1e-12), "{v}");
    let v = delta_n(&spec("ex2"), &[0.0], &MultiplierChain::zero(4).unwrap(), 0.5, &[1.0]).unwrap();
    assert!(close(v, -24.0 * 16.0 * (-4.0f64).exp(), 1e-12));
    assert!((v.to_f64() + 7.033).abs() < 1e-3);
    let v = delta_n(&spec("indicator-halfline"), &[0.0], &MultiplierChain::zero(1).unwrap(), 0.1, &[-1.0]).unwrap();
    assert_eq!(v, ExtReal::PosInf);
    assert!(matches!(
        delta_n(&spec("indicator-halfline"), &[-1.0], &MultiplierChain::zero(1).unwrap(), 0.1, &[1.0]),
        Err(hodd_core::Error::BaseOutsideDomain)
    ));
}

#[test]
fn hadamard_examples() {
    let s = LiminfSchedule::default();
    let e = hadamard_zero(&spec("neg-sphere"), &[0.0, 0.0], 2, &[1.0, 0.0], &s).unwrap();
    assert!(close(e.value, -2.0, 1e-3), "{:?}", e.value);
    assert_eq!(e.sign, Sign::Negative);
    for n in 1..=5 {
        for u in [1.0, -1.0] {
            let e = hadamard_zero(&spec("ex2"), &[0.0], n, &[u], &s).unwrap();
            assert_eq!(e.sign, Sign::Zero, "n={n} u={u} {:?}", e.value);
        }
    }
}

#[test]
fn studniarski_examples() {
    let s = LiminfSchedule::default();
    let e = studniarski_deriv(&spec("sq-norm"), &[0.0, 0.0], 2, &[1.0, 0.0], &s).unwrap();
    assert!(close(e.value, 1.0, 1e-3));
    let e = studniarski_deriv(&spec("npc-4"), &[0.0], 4, &[-1.0], &s).unwrap();
    assert!(close(e.value, -1.0, 1e-3), "{:?}", e.value);
    let e = studniarski_deriv(&spec("abs-1d"), &[0.0], 1, &[1.0], &s).unwrap();
    assert!(close(e.value, 1.0, 1e-3), "{:?}", e.value);
}

#[test]
fn demyanov_examples() {
    let s = LiminfSchedule::default();
    let e = demyanov_deriv(&spec("abs-1d"), &[0.0], 1, &s).unwrap();
    assert!(close(e.value, 1.0, 1e-9));
    assert_eq!(e.sign, Sign::Positive);
    for n in 1..=6 {
        let e = demyanov_deriv(&spec("exp-2d"), &[0.0, 0.0], n, &s).unwrap();
        assert_eq!(e.sign, Sign::Zero, "n={n} {:?}", e.value);
    }
    let q = spec("quartic-1d");
    assert!(close(demyanov_deriv(&q, &[0.0], 4, &s).unwrap().value, 1.0, 1e-9));
    let e2 = demyanov_deriv(&q, &[0.0], 2, &s).unwrap();
    assert_eq!(e2.sign, Sign::Zero);
}

#[test]
fn dini_examples() {
    let s = LiminfSchedule::default();
    let p = spec("parabola-trap-4");
    for u in hodd_core::deriv::sampling::sphere_directions(2, 16, 0) {
        let series = dini_series(&p, &[0.0, 0.0], 4, &u, &s).unwrap();
        assert!(series.iter().all(|e| e.sign == Sign::Zero), "{u:?}");
    }
    assert!(close(dini_deriv(&spec("sq-norm"), &[0.0, 0.0], 2, &[1.0, 0.0], &s).unwrap().value, 2.0, 1e-6));
    assert!(close(dini_deriv(&spec("abs-1d"), &[0.0], 1, &[-1.0], &s).unwrap().value, 1.0, 1e-9));
    assert!(matches!(
        dini_deriv(&spec("indicator-halfline"), &[0.0], 2, &[-1.0], &s),
        Err(hodd_core::Error::DiniUndefined(2))
    ));
}

#[test]
fn ginchev_examples() {
    let s = LiminfSchedule::default();
    let a = spec("abs-1d");
    assert!(close(ginchev_deriv(&a, &[0.0], 0, &[1.0], &s).unwrap().value, 0.0, 1e-6));
    assert!(close(ginchev_deriv(&a, &[0.0], 1, &[1.0], &s).unwrap().value, 1.0, 1e-3));
    let series = ginchev_series(&spec("ex2"), &[0.0], 5, &[1.0], &s).unwrap();
    assert_eq!(series.len(), 6);
    assert!(series.iter().all(|e| e.sign == Sign::Zero), "{:?}", series.iter().map(|e| e.value).collect::<Vec<_>>());
}

#[test]
fn brute_examples() {
    let s = LiminfSchedule::default();
    let v = brute_liminf(&spec("npc-4"), &[0.0], &MultiplierChain::zero(4).unwrap(), &[1.0], &s).unwrap();
    assert!(close(v, 24.0, 1e-3), "{v}");
    let v = brute_liminf(&spec("sq-norm"), &[0.0, 0.0], &MultiplierChain::zero(2).unwrap(), &[0.0, 1.0], &s).unwrap();
    assert!(close(v, 2.0, 1e-3), "{v}");
}
