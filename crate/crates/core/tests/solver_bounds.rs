use subcover_core::bounds::{self, Anchor, BoundLedger, Rect};
use subcover_core::solver::{solve_g, solve_min, SearchProblem, SolveOptions, SolveStatus};

fn solve(n: u8, k: u32, d: u8) -> u64 {
    let r = solve_min(&SearchProblem::f(n, k, d), &SolveOptions::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal, "f({n},{k},{d})");
    let c = r.certificate.unwrap();
    assert!(c.verify(k).is_cover_for(k));
    assert!(r.proof_lo <= r.value.unwrap());
    r.value.unwrap()
}

#[test]
fn solved_cells_sit_inside_the_ledger_and_pin_it() {
    let cells: Vec<(u8, u32, u8)> = [
        (2, 2, 1),
        (3, 2, 1),
        (3, 3, 1),
        (4, 3, 1),
        (5, 3, 1),
        (4, 2, 2),
        (4, 3, 2),
        (3, 2, 2),
        (4, 2, 3),
    ]
    .into_iter()
    .collect();
    let rect = Rect {
        n_max: 6,
        k_max: 6,
        codims: vec![1, 2, 3],
    };
    let mut ledger = BoundLedger::propagate(&rect, &[]).unwrap();
    for (n, k, d) in cells {
        let v = solve(n, k, d);
        let e = ledger.get(n, k, d).unwrap().clone();
        assert!(
            e.lo <= v && v <= e.hi,
            "f({n},{k},{d}) = {v} outside [{}, {}]",
            e.lo,
            e.hi
        );
        ledger
            .add_anchor(Anchor::exact(n, k, d, v, "search"))
            .unwrap();
        let e = ledger.get(n, k, d).unwrap();
        assert_eq!((e.lo, e.hi), (v, v));
    }
    assert!(!ledger.close().unwrap());
}

#[test]
fn solver_respects_the_recursions() {
    let mut f = std::collections::BTreeMap::new();
    for n in 2..=5u8 {
        for k in 1..=4u32 {
            if n == 5 && k == 4 {
                continue;
            }
            f.insert((n, k), solve(n, k, 1));
        }
    }
    for (&(n, k), &v) in &f {
        if let Some(&below) = f.get(&(n - 1, k)) {
            assert!(v > below, "f({n},{k}) vs f({},{k})", n - 1);
        }
        if let Some(&left) = f.get(&(n, k - 1)) {
            assert!(left < v && v <= left + 2, "f({n},{k}) vs f({n},{})", k - 1);
        }
        if k == 1 {
            assert_eq!(v, bounds::jamison(n, 1).unwrap());
        }
    }
}

#[test]
fn g_at_top_origin_multiplicity() {
    for n in 1..=4u8 {
        for k in 1..=3u32 {
            let r = solve_g(n, k, 1, k - 1, &SolveOptions::default()).unwrap();
            assert_eq!(
                r.value,
                Some(bounds::g_smax_formula(n, k, 1).unwrap()),
                "n={n} k={k}"
            );
        }
    }
}

#[test]
fn formula_regime_matches_search_in_small_dimension() {
    let plain = SolveOptions {
        seed_construction: false,
        basis_reduction: false,
        ..SolveOptions::default()
    };
    for n in 2..=4u8 {
        for d in 1..n {
            for k in (1u32 << (n - d - 1))..=(1u32 << (n - d)) {
                if n - d == 3 && k > 5 {
                    continue;
                }
                let r = solve_min(&SearchProblem::f(n, k, d), &plain).unwrap();
                assert_eq!(r.value, bounds::exact_thm_a(n, k, d), "n={n} k={k} d={d}");
            }
        }
    }
}
