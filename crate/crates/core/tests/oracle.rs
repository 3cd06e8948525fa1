use johnson_pst::exactmath::{binom, rat_to_f64};
use johnson_pst::oracle::{selector_weights, WalkSystem, DEFAULT_ORACLE_CAP, PST_TOLERANCE};
use johnson_pst::scheme::{spectrum_weighted, WeightVector};
use johnson_pst::transfer;
use johnson_pst::unweighted::{check_union, UnionSelector};
use num_traits::ToPrimitive;

/// Exact eigenvalue `f(x)` has multiplicity `C(n,s) - C(n,s-1)` with `s = k - x`.
fn exact_multiset(k: usize, w: &WeightVector) -> Vec<f64> {
    let n = 2 * k as u64;
    let f = spectrum_weighted(k, w).unwrap();
    let mut out = Vec::new();
    for (x, fx) in f.iter().enumerate() {
        let s = (k - x) as i64;
        let mult = (binom(n, s) - binom(n, s - 1)).to_usize().unwrap();
        out.extend(std::iter::repeat(rat_to_f64(fx)).take(mult));
    }
    out.sort_by(f64::total_cmp);
    out
}

#[test]
fn numeric_spectrum_matches_exact_multiset() {
    for k in 1..=5 {
        for w in [
            transfer::canonical_example(k).unwrap(),
            WeightVector::from_integers(k, &(0..=k as i64).map(|r| 2 * r - 3).collect::<Vec<_>>()).unwrap(),
        ] {
            let wf: Vec<f64> = w.entries().iter().map(rat_to_f64).collect();
            let sys = WalkSystem::new(2 * k, k, &wf, DEFAULT_ORACLE_CAP).unwrap();
            let numeric = sys.sorted_eigenvalues();
            let exact = exact_multiset(k, &w);
            assert_eq!(numeric.len(), exact.len());
            for (a, b) in numeric.iter().zip(&exact) {
                assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "k = {k}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn earliest_union_times_match_numeric_walk() {
    for k in 1..=4 {
        for mask in 1u64..(1 << k) {
            let u = UnionSelector::from_mask(k, mask).unwrap();
            let v = check_union(k, &u).unwrap();
            let sys = WalkSystem::new(2 * k, k, &selector_weights(k, &u.classes()), DEFAULT_ORACLE_CAP).unwrap();
            match &v.certificate.time_over_pi {
                Some(t) => assert!(sys.report(rat_to_f64(t)).pst, "k = {k}, {:?}", u.classes()),
                None => {
                    // integer spectrum: U is 2*pi periodic
                    for i in 1..=512 {
                        let t = i as f64 / 256.0;
                        assert!(sys.fidelity(t * std::f64::consts::PI) < 1.0 - PST_TOLERANCE, "k = {k}, {:?} at {t}", u.classes());
                    }
                }
            }
        }
    }
}
