use weil_core::analysis::{
    orbit_decomposition, tower_checks, v1_congruence_expected, v_vector, CelineCase, ThreeValuedReport, Tower,
};
use weil_core::weil_engine::{canonical_exponent_classes, weil_spectrum, FastMethod, FieldContext};

#[test]
fn characteristic_three_three_valued_instances() {
    let mut found = 0;
    for n in [3, 5] {
        let ctx = FieldContext::build(3, n).unwrap();
        let q = ctx.field().order() as u64;
        for d in canonical_exponent_classes(3, q) {
            let s = weil_spectrum(&ctx, d as i64, &FastMethod).unwrap();
            if !s.is_three_valued() {
                continue;
            }
            found += 1;
            let v = v_vector(ctx.field(), d as i64).unwrap();
            let mut r = ThreeValuedReport::from_spectrum(&s).unwrap();
            r.run_checks(&s, &v);
            assert!(r.all_pass(), "n={n} d={d}: {:?}", r.checks);
            assert_eq!(r.celine_case, Some(CelineCase::CaseI));
            // d ≡ 1 (mod 2) forces 2^(d-1) = 1, hence the q ≡ 0 branch with -1 a root.
            assert_eq!(v1_congruence_expected(ctx.field(), d as i64).unwrap().residue, 3);
            assert!(orbit_decomposition(ctx.field(), d as i64).unwrap().minus_one_is_root);
        }
    }
    assert!(found > 0);
}

#[test]
fn quadratic_chain_over_f81() {
    let tower = Tower::build(3, 4, "auto").unwrap();
    for d in canonical_exponent_classes(3, 81) {
        let r = tower.checks(d as i64).unwrap();
        assert!(r.pass(), "d={d}");
        let step = r.dorothy.as_ref().unwrap();
        if !r.levels.last().unwrap().degenerate {
            // Every unit exponent is odd, hence degenerate over F_3.
            assert!(step.step.is_some());
            assert!(step.min_valuation.cmp_ratio(2, 1).is_le());
        }
    }
}

#[test]
fn tower_report_shapes() {
    let r = tower_checks(2, 4, 7).unwrap();
    assert_eq!(r.levels.len(), 3);
    assert!(r.pass());
    let r = tower_checks(2, 6, 5).unwrap();
    assert_eq!(r.levels.iter().map(|l| l.k).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
    assert_eq!(r.george.len(), 5);
    assert!(r.dorothy.is_none());
    assert!(r.pass());
}

#[test]
fn f9_v_counts_by_double_loop() {
    let ctx = FieldContext::build(3, 2).unwrap();
    let t = ctx.field();
    let d = 5;
    let v = v_vector(t, d).unwrap();
    let mut counts = vec![0u64; t.units()];
    for w in t.elements() {
        for i in 0..t.units() {
            let u = t.exp(i as u64);
            let lhs = t.add(t.group_pow(w, d).unwrap(), t.group_pow(t.sub(weil_core::Elem::ONE, w), d).unwrap());
            if lhs == t.group_pow(u, d).unwrap() {
                counts[i] += 1;
            }
        }
    }
    assert_eq!(v.counts, counts);
}
