use johnson_pst::scheme::{adjacency, eigen_table, scheme_axiom_check, subsets, DEFAULT_VERTEX_CAP};

#[test]
fn axioms_hold_for_larger_antipodal_schemes() {
    for (n, k) in [(8, 4), (10, 5)] {
        let report = scheme_axiom_check(n, k, DEFAULT_VERTEX_CAP).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.checks.len(), 5);
    }
}

#[test]
fn axioms_hold_off_the_antipodal_line() {
    for (n, k) in [(5, 2), (7, 3), (9, 4)] {
        let report = scheme_axiom_check(n, k, DEFAULT_VERTEX_CAP).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }
}

#[test]
fn row_sums_are_valencies() {
    let k = 4;
    let table = eigen_table(k);
    for r in 0..=k {
        let a = adjacency(2 * k, k, r, DEFAULT_VERTEX_CAP).unwrap();
        let valency: u32 = a.row(0).iter().map(|&x| u32::from(x)).sum();
        assert_eq!(table.get(r, 0).to_string(), valency.to_string());
    }
}

#[test]
fn antipodal_partner_has_mirrored_rank() {
    for k in 1..=6 {
        let n = 2 * k;
        let total = subsets::count(n, k);
        for (i, &mask) in subsets::all(n, k).unwrap().iter().enumerate() {
            assert_eq!(subsets::rank(subsets::complement(n, mask)), total - 1 - i as u128);
        }
    }
}
