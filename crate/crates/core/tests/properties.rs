use proptest::prelude::*;
use qalens::exactmath::{cf_evaluate, cf_expand, dedekind_sum, gcd};
use qalens::lens::{d_lp1, lens_spaces_of_order, linking_forms_equivalent, same_multiset};
use qalens::slope::{distance, normalize_consecutive, normalize_half_integer, Slope};
use qalens::spinccob::parity_identity_check;
use qalens::{q, LensSpace, LinkingForm, Rational};

fn coprime_pairs(max: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..=max).flat_map(move |p| (1..=max).map(move |qq| (p, qq))).filter(|&(p, qq)| gcd(p, qq) == 1)
}

fn reciprocity_rhs(p: i64, qq: i64) -> Rational {
    (q(p, qq) + q(qq, p) + q(1, p * qq)) / Rational::from_integer(12) - q(1, 4)
}

#[test]
fn dedekind_reciprocity_exhaustive() {
    for (p, qq) in coprime_pairs(100) {
        let lhs = dedekind_sum(p, qq as u64).unwrap() + dedekind_sum(qq, p as u64).unwrap();
        assert_eq!(lhs, reciprocity_rhs(p, qq), "({p},{qq})");
    }
}

#[test]
fn correction_terms_in_dedekind_lattice() {
    for p in 1..=100u64 {
        for qq in 0..p.max(1) {
            if gcd(p as i64, qq as i64) != 1 {
                continue;
            }
            let s = dedekind_sum(qq as i64, p).unwrap();
            assert!(s.scale(6 * p).is_integer(), "6p s({qq},{p})");
            let l = LensSpace::new(p, qq as i64).unwrap();
            for d in l.d_invariants().values {
                assert!((d - s.scale(3)).in_lattice(2 * p), "L({p},{qq})");
            }
        }
    }
}

#[test]
fn lp1_closed_form() {
    for p in 1..=50u64 {
        let want: Vec<Rational> = (0..p)
            .map(|i| {
                let t = 2 * i as i64 - p as i64;
                q(t * t, 4 * p as i64) - q(1, 4)
            })
            .collect();
        let l = LensSpace::new(p, 1).unwrap();
        assert!(same_multiset(&l.d_invariants().values, &want), "L({p},1)");
        for i in 0..p {
            assert_eq!(d_lp1(p, i), l.d_invariants().values[i as usize]);
        }
    }
}

#[test]
fn orientation_reverses_correction_terms() {
    for p in 1..=50u64 {
        for l in lens_spaces_of_order(p) {
            let neg: Vec<Rational> = l.d_invariants().values.iter().map(|d| -d.clone()).collect();
            assert!(same_multiset(&l.reverse_orientation().d_invariants().values, &neg), "{l}");
            assert_eq!(l.reverse_orientation().lambda(), -l.lambda());
        }
    }
}

#[test]
fn conjugation_preserves_correction_terms() {
    for p in 1..=40u64 {
        for qq in 1..p.max(2) {
            let Ok(l) = LensSpace::new(p, qq as i64) else { continue };
            let ds = l.d_invariants().values;
            for i in 0..p {
                let j = l.conjugate(i);
                assert_eq!(l.conjugate(j), i);
                assert_eq!(ds[i as usize], ds[j as usize], "L({p},{qq}) {i}");
            }
        }
    }
}

#[test]
fn linking_form_equivalence_is_an_equivalence() {
    for p in 1..=30u64 {
        let forms: Vec<LinkingForm> =
            (0..p.max(2)).filter(|&a| gcd(a as i64, p as i64) == 1).map(|a| LinkingForm::cyclic(p, a as i64)).collect();
        let n = forms.len();
        let rel: Vec<Vec<bool>> =
            forms.iter().map(|f| forms.iter().map(|g| linking_forms_equivalent(f, g).unwrap()).collect()).collect();
        for i in 0..n {
            assert!(rel[i][i]);
            for j in 0..n {
                assert_eq!(rel[i][j], rel[j][i]);
                for k in 0..n {
                    if rel[i][j] && rel[j][k] {
                        assert!(rel[i][k], "p = {p}");
                    }
                }
            }
        }
    }
    let a = LinkingForm::direct_sum([LinkingForm::cyclic(2, 1), LinkingForm::cyclic(3, 1)]);
    let b = LinkingForm::direct_sum([LinkingForm::cyclic(2, 1), LinkingForm::cyclic(3, 2)]);
    assert!(!linking_forms_equivalent(&a, &b).unwrap());
    assert!(linking_forms_equivalent(&a, &LinkingForm::cyclic(6, 5)).unwrap());
    assert!(linking_forms_equivalent(&b, &LinkingForm::cyclic(6, 1)).unwrap());
}

#[test]
fn consecutive_slopes_normalize() {
    for p in 1..=50i64 {
        for c in -2 * p..=2 * p {
            for e in [-1, 1] {
                // (p+1) c - p d = e
                let num = (p + 1) * c - e;
                if num % p != 0 {
                    continue;
                }
                let d = num / p;
                let g0 = Slope::new(p, c).unwrap();
                let g1 = Slope::new(p + 1, d).unwrap();
                assert_eq!(distance(&g0, &g1), 1);
                let n = normalize_consecutive(p as u64, c, d).unwrap();
                assert_eq!(n.epsilon, e);
                assert_eq!(g0.rebase(n.k), Slope::new(p, e).unwrap());
                assert_eq!(g1.rebase(n.k), Slope::new(p + 1, e).unwrap());
                // and back
                assert_eq!(g0.rebase(n.k).rebase(-n.k), g0);
            }
        }
        assert!(normalize_consecutive(p as u64, 0, 2).is_err());
    }
    for n in (-51..=51).filter(|n: &i64| n % 2 != 0) {
        let h = normalize_half_integer(n).unwrap();
        assert_eq!(h.slope, Slope::new(2, 1).unwrap());
        assert_eq!(Slope::new(2, n).unwrap().rebase(h.k), h.slope);
    }
}

#[test]
fn continued_fractions_round_trip() {
    for p in 2..=100u64 {
        for qq in 1..p {
            if gcd(p as i64, qq as i64) != 1 {
                continue;
            }
            let cf = cf_expand(p, qq as i64).unwrap();
            assert!(cf.iter().all(|&t| t >= 1));
            assert!(*cf.last().unwrap() >= 2);
            assert_eq!(cf_evaluate(&cf).unwrap(), (p, qq));
        }
    }
}

#[test]
fn parity_identity_up_to_500() {
    assert!((1..=500).all(parity_identity_check));
}

proptest! {
    #[test]
    fn reciprocity_random(p in 1i64..5000, qq in 1i64..5000) {
        prop_assume!(gcd(p, qq) == 1);
        let lhs = dedekind_sum(p, qq as u64).unwrap() + dedekind_sum(qq, p as u64).unwrap();
        prop_assert_eq!(lhs, reciprocity_rhs(p, qq));
    }

    #[test]
    fn dedekind_is_periodic_and_odd(p in 1u64..2000, qq in -4000i64..4000) {
        prop_assume!(gcd(p as i64, qq) == 1);
        let s = dedekind_sum(qq, p).unwrap();
        prop_assert_eq!(&s, &dedekind_sum(qq + p as i64, p).unwrap());
        prop_assert_eq!(-s, dedekind_sum(-qq, p).unwrap());
    }

    #[test]
    fn normal_form_is_a_homeomorphism_invariant(p in 2u64..300, qq in 1i64..300) {
        prop_assume!(gcd(p as i64, qq) == 1);
        let l = LensSpace::new(p, qq).unwrap();
        let inv = (1..p as i64).find(|x| (x * qq).rem_euclid(p as i64) == 1).unwrap();
        let m = LensSpace::new(p, inv).unwrap();
        prop_assert!(l.is_homeomorphic(&m));
        prop_assert!(same_multiset(&l.d_invariants().values, &m.d_invariants().values));
        prop_assert_eq!(l.lambda(), m.lambda());
        prop_assert_eq!(l.reverse_orientation().reverse_orientation(), l.normalize());
    }

    #[test]
    fn rebase_preserves_distance(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50, k in -20i64..20) {
        prop_assume!((a, b) != (0, 0) && (c, d) != (0, 0));
        let s = Slope::new(a, b).unwrap();
        let t = Slope::new(c, d).unwrap();
        prop_assert_eq!(distance(&s, &t), distance(&s.rebase(k), &t.rebase(k)));
        prop_assert_eq!(s.rebase(k).mu_coeff(), s.mu_coeff());
    }

    #[test]
    fn cf_round_trip_random(terms in proptest::collection::vec(1u64..20, 1..8)) {
        let mut terms = terms;
        if *terms.last().unwrap() == 1 {
            *terms.last_mut().unwrap() = 2;
        }
        let (p, qq) = cf_evaluate(&terms).unwrap();
        if qq < p {
            prop_assert_eq!(cf_expand(p, qq as i64).unwrap(), terms);
        }
    }
}
