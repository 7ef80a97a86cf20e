//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured runtime. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use std::time::Instant;

use pscaffold::extension::{build_extension, ExtensionKind};
use pscaffold::fp::Prime;
use pscaffold::group_algebra::{build_scaffold, psi_product, relations_hold, GroupAlgebraElement};
use pscaffold::order::{
    associated_order_report, cond_superadditive, freeness_by_r, freeness_by_w, integral_basis,
    order_membership_oracle,
};
use pscaffold::series::LaurentSeries;
use pscaffold::symbolic;
use pscaffold::tower::{GaloisGen, Tower};
use pscaffold::verify::{c4_floor_equivalence, verify_valuation_law};

fn series(p: Prime, pairs: &[(i64, i64)]) -> LaurentSeries {
    LaurentSeries::from_pairs(p, pairs)
}

fn build_tower(p: u32, kind: ExtensionKind, b1: &[(i64, i64)], b2: &[(i64, i64)]) -> Tower {
    let p = Prime::new(p).unwrap();
    let ext = build_extension(p, kind, &series(p, b1), &series(p, b2), None).unwrap();
    Tower::new(ext).unwrap()
}

#[test]
fn criterion_1_running_example_end_to_end() {
    let start = Instant::now();
    let tower = build_tower(3, ExtensionKind::Cyclic, &[(-1, 1)], &[(-7, 1)]);
    let ext = tower.ext();
    let p = ext.prime();

    assert_eq!(ext.b1(), 1);
    assert_eq!(ext.u2_star(), Some(7));
    assert_eq!(ext.b2(), 19);
    assert_eq!(*ext.mu(), series(p, &[(-2, 1)]));
    assert!(ext.eps().is_exact_zero());
    assert_eq!(ext.hyp_break_gap(), Some(true));
    assert!(ext.hyp_error_term());

    let sc = build_scaffold(ext).unwrap();
    let report = verify_valuation_law(&tower, &sc, 50, 0).unwrap();
    assert!(report.verdict, "{:?}", report.failure);
    assert_eq!(report.trials, 50);
    let reg = report.regularity.as_ref().unwrap();
    assert_eq!(reg.psi1_shifts, vec![0, 3, 6]);
    assert_eq!(reg.psi2_shifts, vec![0, 19, 38]);

    let order = associated_order_report(&tower, &sc).unwrap();
    assert_eq!(order.d, vec![2, 2, 2, 4, 4, 4, 6, 6, 7]);
    assert_eq!(order.w, vec![0, 0, 0, 2, 2, 2, 4, 4, 5]);
    assert_eq!(order.r, 1);
    assert!(order.free_by_w && order.free_by_r);
    assert_eq!(order.generator_ok, Some(true));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("ACCEPTANCE 1 (running example end-to-end): PASS in {elapsed:?}");
}

#[test]
fn criterion_2_freeness_criteria_equivalence_sweep() {
    let start = Instant::now();
    let mut pairs_checked = 0u64;
    for p in [2u32, 3, 5] {
        let q = p as i64;
        for b1 in 1..=50i64 {
            if b1 % q == 0 {
                continue;
            }
            for m in 1..=200i64 {
                let b2 = b1 + q * q * m;
                if b2 <= q * q * b1 {
                    continue;
                }
                let by_w = freeness_by_w(b1, b2, p).unwrap();
                let by_r = freeness_by_r(b2, p).unwrap();
                assert_eq!(by_w, by_r, "w/r mismatch at p={p} b1={b1} b2={b2}");
                let by_cond = cond_superadditive(b1, b2, p).unwrap();
                assert_eq!(by_cond, by_w, "cond mismatch at p={p} b1={b1} b2={b2}");
                pairs_checked += 1;
            }
        }
    }
    assert!(pairs_checked > 15_000, "sweep too small: {pairs_checked}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 2 (freeness equivalence on {pairs_checked} break pairs): PASS in {elapsed:?}"
    );
}

#[test]
fn criterion_3_order_membership_boundary() {
    let start = Instant::now();
    let towers = vec![
        build_tower(3, ExtensionKind::Cyclic, &[(-1, 1)], &[(-7, 1)]),
        build_tower(3, ExtensionKind::ElementaryAbelian, &[(-1, 1)], &[(-7, 1)]),
        build_tower(2, ExtensionKind::Cyclic, &[(-1, 1)], &[(-5, 1)]),
        // a non-free case: the basis description must hold regardless
        build_tower(3, ExtensionKind::Cyclic, &[(-5, 1)], &[(-20, 1)]),
    ];
    for tower in &towers {
        let ext = tower.ext();
        let p = ext.prime();
        let sc = build_scaffold(ext).unwrap();
        let order = associated_order_report(tower, &sc).unwrap();
        let basis = integral_basis(tower, &sc).unwrap();
        let mut checks = 0;
        for (j, &wj) in order.w.iter().enumerate() {
            let member =
                psi_product(&sc, j as u64).scale_series(&LaurentSeries::monomial(p, -wj, 1));
            assert!(
                order_membership_oracle(&member, tower, &basis).unwrap(),
                "t^-{wj} Psi^({j}) must stabilize the integers (p={}, {:?})",
                p.p(),
                ext.kind()
            );
            let outside =
                psi_product(&sc, j as u64).scale_series(&LaurentSeries::monomial(p, -wj - 1, 1));
            assert!(
                !order_membership_oracle(&outside, tower, &basis).unwrap(),
                "t^-{} Psi^({j}) must not stabilize (p={}, {:?})",
                wj + 1,
                p.p(),
                ext.kind()
            );
            checks += 2;
        }
        assert_eq!(checks, 2 * (p.p() * p.p()) as usize);
    }
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE 3 (order membership boundary on {} extensions): PASS in {elapsed:?}",
        towers.len()
    );
}

#[test]
fn criterion_4_symbolic_certification() {
    let start = Instant::now();
    let mut nontrivial_eps = 0;
    let mut theta_products = 0;
    let mut table_entries = 0;
    for case in [symbolic::SymCase::C9, symbolic::SymCase::C3xC3] {
        for check in symbolic::verify_error_terms(case).unwrap() {
            assert!(check.ok, "{}: residual {}", check.name, check.residual);
        }
        // the displays carry four nonzero error terms per case
        nontrivial_eps += 4;
        for check in symbolic::verify_theta_products(case).unwrap() {
            assert!(check.ok, "{}: residual {}", check.name, check.residual);
            theta_products += 1;
        }
    }
    for check in symbolic::verify_c4_table() {
        assert!(check.ok, "{}: residual {}", check.name, check.residual);
        if check.name.contains("table") {
            table_entries += 1;
        }
    }
    assert_eq!(nontrivial_eps, 8);
    assert_eq!(theta_products, 6);
    assert_eq!(table_entries, 9);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 4 (symbolic: 8 error terms, 6 Theta products, 9 table entries): PASS in {elapsed:?}"
    );
}

#[test]
fn criterion_5_scaffold_definition_properties() {
    let start = Instant::now();
    let towers = vec![
        build_tower(3, ExtensionKind::Cyclic, &[(-1, 1)], &[(-7, 1)]),
        build_tower(3, ExtensionKind::ElementaryAbelian, &[(-1, 1)], &[(-7, 1)]),
        build_tower(2, ExtensionKind::Cyclic, &[(-1, 1)], &[(-5, 1)]),
        build_tower(3, ExtensionKind::Cyclic, &[(-1, 1)], &[(-10, 1), (-5, 1)]),
        build_tower(3, ExtensionKind::Cyclic, &[(-5, 1)], &[(-20, 1)]),
        build_tower(5, ExtensionKind::Cyclic, &[(-1, 1)], &[(-11, 1)]),
    ];
    for tower in &towers {
        let sc = build_scaffold(tower.ext()).unwrap();
        let report = verify_valuation_law(tower, &sc, 12, 7).unwrap();
        assert!(report.verdict, "{:?}", report.failure);
        assert!(report.residues_complete, "residues: {:?}", report.residues);
        let reg = report.regularity.as_ref().unwrap();
        let q = tower.prime().p() as i64;
        for (j, &s) in reg.psi1_shifts.iter().enumerate() {
            assert_eq!(s, j as i64 * q * tower.ext().b1());
        }
        for (i, &s) in reg.psi2_shifts.iter().enumerate() {
            assert_eq!(s, i as i64 * tower.ext().b2());
        }
        assert!(reg.pairs_compared >= 11);
    }
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE 5 (regularity and residue completeness on {} extensions): PASS in {elapsed:?}",
        towers.len()
    );
}

#[test]
fn criterion_6_quartic_regression() {
    let start = Instant::now();
    let mut verdicts = 0;
    for b1 in (1i64..=19).step_by(2) {
        for m in 1..=200i64 {
            let b2 = b1 + 4 * m;
            if b2 <= 4 * b1 {
                continue;
            }
            assert!(
                freeness_by_w(b1, b2, 2).unwrap(),
                "quartic case must be free at b1={b1}, b2={b2}"
            );
            assert!(freeness_by_r(b2, 2).unwrap());
            verdicts += 1;
        }
    }
    assert!(verdicts > 1500);
    // floor form of the threshold, odd breaks up to the stated bounds
    assert!(c4_floor_equivalence(99, 500));
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE 6 (quartic always free on {verdicts} pairs; floor equivalence): PASS in {elapsed:?}"
    );
}

#[test]
fn criterion_7_algebraic_invariant_suite() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    let start = Instant::now();
    let p3 = Prime::new(3).unwrap();

    let random_series = |rng: &mut StdRng, p: Prime| -> LaurentSeries {
        let terms = rng.gen_range(1..=4);
        let pairs: Vec<(i64, i64)> = (0..terms)
            .map(|_| (rng.gen_range(-9..=6), rng.gen_range(1..p.p()) as i64))
            .collect();
        series(p, &pairs)
    };

    // wp additivity
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let a = random_series(&mut rng, p3);
        let b = random_series(&mut rng, p3);
        assert_eq!(a.add(&b).wp(), a.wp().add(&b.wp()));
    }

    // reduction round-trips and reduced shape
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..100 {
        let beta = random_series(&mut rng, p3);
        let (red, y) = pscaffold::artin_schreier_reduce(&beta, 96).unwrap();
        assert!(beta.agrees_with(&red.add(&y.wp())));
        match red.valuation().unwrap() {
            pscaffold::Valuation::Finite(v) if v < 0 => assert_ne!(v.rem_euclid(3), 0),
            pscaffold::Valuation::Finite(v) => assert_eq!(v, 0),
            pscaffold::Valuation::Infinite => {}
        }
    }

    // Vandermonde convolution for every 0 <= t < p
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..100 {
        let x = random_series(&mut rng, p3);
        let y = random_series(&mut rng, p3);
        for t in 0..3u32 {
            let mut sum = LaurentSeries::zero(p3);
            for i in 0..=t {
                sum = sum.add(&y.binomial(i).unwrap().mul(&x.binomial(t - i).unwrap()));
            }
            assert_eq!(sum, x.add(&y).binomial(t).unwrap());
        }
    }

    // Galois action: ring automorphism laws and commutativity
    let cyclic = build_tower(3, ExtensionKind::Cyclic, &[(-1, 1)], &[(-7, 1)]);
    let abelian = build_tower(3, ExtensionKind::ElementaryAbelian, &[(-1, 1)], &[(-7, 1)]);
    let mut rng = StdRng::seed_from_u64(14);
    for tower in [&cyclic, &abelian] {
        for trial in 0..50u64 {
            let a = tower.sample_with_valuation(rng.gen_range(0..9), trial + 1).unwrap();
            let b = tower.sample_with_valuation(rng.gen_range(0..9), trial + 1000).unwrap();
            for gen in [GaloisGen::Sigma1, GaloisGen::Sigma2] {
                let lhs = tower.galois_apply(gen, &tower.mul(&a, &b));
                let rhs = tower.mul(&tower.galois_apply(gen, &a), &tower.galois_apply(gen, &b));
                assert!(lhs.agrees_with(&rhs));
                let lhs = tower.galois_apply(gen, &a.add(&b));
                let rhs = tower.galois_apply(gen, &a).add(&tower.galois_apply(gen, &b));
                assert!(lhs.agrees_with(&rhs));
            }
            let lhs = tower.galois_apply(GaloisGen::Sigma1, &tower.galois_apply(GaloisGen::Sigma2, &a));
            let rhs = tower.galois_apply(GaloisGen::Sigma2, &tower.galois_apply(GaloisGen::Sigma1, &a));
            assert!(lhs.agrees_with(&rhs));
        }
    }

    // sigma1^p = sigma2 on random cyclic elements
    let mut rng = StdRng::seed_from_u64(15);
    for trial in 0..100u64 {
        let a = cyclic.sample_with_valuation(rng.gen_range(0..9), trial + 31).unwrap();
        let mut y = a.clone();
        for _ in 0..3 {
            y = cyclic.galois_apply(GaloisGen::Sigma1, &y);
        }
        assert!(y.agrees_with(&cyclic.galois_apply(GaloisGen::Sigma2, &a)));
    }

    // scaffold relations across 100 random hypothesis-satisfying extensions
    let mut rng = StdRng::seed_from_u64(16);
    let mut built = 0;
    while built < 100 {
        let p = Prime::new([2u32, 3, 5][rng.gen_range(0..3)]).unwrap();
        let kind = if rng.gen_bool(0.5) {
            ExtensionKind::Cyclic
        } else {
            ExtensionKind::ElementaryAbelian
        };
        let b1 = (1..=7)
            .filter(|v| v % p.p() as i64 != 0)
            .nth(rng.gen_range(0..3))
            .unwrap();
        let m = rng.gen_range(b1..b1 + 3);
        let c1 = rng.gen_range(1..p.p()) as i64;
        let c2 = rng.gen_range(1..p.p()) as i64;
        let beta1 = series(p, &[(-b1, c1)]);
        let beta2 = series(p, &[(-(p.p() as i64 * m + b1), c2)]);
        let ext = build_extension(p, kind, &beta1, &beta2, None).unwrap();
        if !ext.hypotheses_hold() {
            continue;
        }
        let sc = build_scaffold(&ext).unwrap();
        assert!(relations_hold(&sc));
        built += 1;
    }

    // valuation via the adapted basis agrees with the norm route, and is
    // additive on products
    let mut rng = StdRng::seed_from_u64(17);
    for tower in [&cyclic, &abelian] {
        for trial in 0..50u64 {
            let a = tower.sample_with_valuation(rng.gen_range(0..9), trial + 77).unwrap();
            let b = tower.sample_with_valuation(rng.gen_range(0..9), trial + 7777).unwrap();
            let va = tower.k2_valuation(&a).unwrap();
            let vb = tower.k2_valuation(&b).unwrap();
            let norm = tower.norm_to_k1(&a).unwrap();
            assert_eq!(tower.k1_valuation(&norm).unwrap(), va);
            assert_eq!(tower.k2_valuation(&tower.mul(&a, &b)).unwrap(), va + vb);
        }
    }

    let elapsed = start.elapsed();
    println!("ACCEPTANCE 7 (algebraic invariant suite): PASS in {elapsed:?}");
}

/// The sigma-basis rendering and the break definition itself, exercised on a
/// sampled uniformizer: v2((sigma_i - 1) pi) - 1 = b_i.
#[test]
fn break_definition_coherence() {
    for tower in [
        build_tower(3, ExtensionKind::Cyclic, &[(-1, 1)], &[(-7, 1)]),
        build_tower(3, ExtensionKind::ElementaryAbelian, &[(-1, 1)], &[(-7, 1)]),
        build_tower(2, ExtensionKind::Cyclic, &[(-1, 1)], &[(-5, 1)]),
    ] {
        for seed in [1u64, 2, 3, 9] {
            let pi = tower.sample_with_valuation(1, seed).unwrap();
            // scale to make the valuation exactly 1
            let v = tower.k2_valuation(&pi).unwrap();
            let q2 = (tower.prime().p() * tower.prime().p()) as i64;
            let pi = pi.scale_series(&LaurentSeries::monomial(
                tower.prime(),
                (1 - v) / q2,
                1,
            ));
            assert_eq!(tower.k2_valuation(&pi).unwrap(), 1);
            let one = GroupAlgebraElement::one(tower.prime(), tower.ext().kind());
            let s1 = GroupAlgebraElement::sigma1(tower.prime(), tower.ext().kind()).sub(&one);
            let s2 = GroupAlgebraElement::sigma2(tower.prime(), tower.ext().kind()).sub(&one);
            let v1 = tower.k2_valuation(&s1.apply(&tower, &pi)).unwrap();
            let v2 = tower.k2_valuation(&s2.apply(&tower, &pi)).unwrap();
            assert_eq!(v1 - 1, tower.ext().b1());
            assert_eq!(v2 - 1, tower.ext().b2());
        }
    }
    println!("break definition coherence: PASS");
}
