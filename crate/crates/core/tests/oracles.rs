//! Library results checked against independent brute-force computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use qalens::exactmath::{dedekind_sum, gcd};
use qalens::lens::{lens_spaces_of_order, linking_forms_equivalent, same_multiset};
use qalens::slope::{distance, Slope};
use qalens::spinccob::{
    cobordism_sign, d_mod2_shift, residue_pairing_table, solve_d_invariants, DSolution, PairingStatus,
};
use qalens::twobridge::{branched_double_cover, census};
use qalens::{classify_formal_lspaces, q, ConnSum, LensSpace, LinkingForm, Rational};

fn l(p: u64, qq: i64) -> LensSpace {
    LensSpace::new(p, qq).unwrap()
}

fn big(r: &Rational) -> BigRational {
    r.as_big().clone()
}

/// Dedekind sum straight from the definition, with the sawtooth built from
/// floor in `BigRational`.
fn dedekind_oracle(qq: i64, p: i64) -> BigRational {
    let saw = |x: BigRational| -> BigRational {
        if x.is_integer() {
            BigRational::from_integer(0.into())
        } else {
            x.clone() - x.floor() - BigRational::new(1.into(), 2.into())
        }
    };
    (1..p)
        .map(|k| {
            let a = BigRational::new(BigInt::from(k), BigInt::from(p));
            let b = BigRational::new(BigInt::from(k * qq), BigInt::from(p));
            saw(a) * saw(b)
        })
        .fold(BigRational::from_integer(0.into()), |x, y| x + y)
}

#[test]
fn dedekind_matches_definition() {
    for p in 1..=60i64 {
        for qq in -p..=2 * p {
            if gcd(p, qq) == 1 {
                assert_eq!(big(&dedekind_sum(qq, p as u64).unwrap()), dedekind_oracle(qq, p), "s({qq},{p})");
            }
        }
    }
}

#[test]
fn d_sum_is_p_times_dedekind() {
    // sum_i d(L(p,q), i) = p s(q, p), the Casson-Walker normalization
    for p in 1..=100u64 {
        for lens in lens_spaces_of_order(p) {
            let total: Rational = lens.d_invariants().values.iter().sum();
            let s = dedekind_oracle(lens.q() as i64, p as i64);
            assert_eq!(big(&total), s * BigRational::from_integer(BigInt::from(p)), "{lens}");
        }
    }
}

#[test]
fn casson_walker_from_dedekind() {
    assert_eq!(l(3, 2).lambda(), q(1, 36));
    assert_eq!(l(2, 1).lambda(), q(0, 1));
    for p in 2..=40u64 {
        for lens in lens_spaces_of_order(p) {
            let s = dedekind_oracle(lens.q() as i64, p as i64);
            assert_eq!(big(&lens.lambda()), -s / BigRational::from_integer(2.into()), "{lens}");
        }
    }
}

/// `a ~ b` on `Z/p` iff `u^2 a = b` for some unit `u`.
fn forms_oracle(a: u64, b: u64, p: u64) -> bool {
    (0..p).filter(|&u| gcd(u as i64, p as i64) == 1).any(|u| (u * u * a) % p == b % p)
}

#[test]
fn cyclic_linking_forms_match_unit_squares() {
    for p in 1..=40u64 {
        let units: Vec<u64> = (0..p.max(2)).filter(|&a| gcd(a as i64, p as i64) == 1).collect();
        for &a in &units {
            for &b in &units {
                let lib = linking_forms_equivalent(&LinkingForm::cyclic(p, a as i64), &LinkingForm::cyclic(p, b as i64))
                    .unwrap();
                assert_eq!(lib, forms_oracle(a, b, p), "{a}/{p} vs {b}/{p}");
            }
        }
    }
}

/// Every assignment of values `model_i + 2t` in the window to the Spin^c
/// structures, with conjugates equal and the given total.
fn solve_oracle(model: &LensSpace, sum: &Rational, lower: &Rational, radius: u64) -> Vec<Vec<Rational>> {
    let ds = model.d_invariants().values;
    let p = model.p() as usize;
    let upper = lower + Rational::from_integer(2 * radius as i64);
    let options: Vec<Vec<Rational>> = ds
        .iter()
        .map(|d| {
            (-20i64..=20)
                .map(|t| d + Rational::from_integer(2 * t))
                .filter(|v| v >= lower && *v <= upper)
                .collect()
        })
        .collect();
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut idx = vec![0usize; p];
    if options.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let vals: Vec<Rational> = (0..p).map(|i| options[i][idx[i]].clone()).collect();
        let symmetric = (0..p).all(|i| vals[i] == vals[model.conjugate(i as u64) as usize]);
        let total: Rational = vals.iter().sum();
        if symmetric && &total == sum {
            let mut ms = vals;
            ms.sort();
            if !out.contains(&ms) {
                out.push(ms);
            }
        }
        let mut i = 0;
        loop {
            if i == p {
                out.sort();
                return out;
            }
            idx[i] += 1;
            if idx[i] < options[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn solver_agrees_with_enumeration() {
    let mut checked = 0;
    for p in 1..=5u64 {
        for model in lens_spaces_of_order(p) {
            let ds = model.d_invariants().values;
            let base_sum: Rational = ds.iter().sum();
            let min = ds.iter().min().unwrap().clone();
            for radius in 1..=3u64 {
                for lower_shift in [q(0, 1), q(1, 4), q(-1, 3), q(-2, 1)] {
                    for sum_shift in [0i64, 2, 4, -2] {
                        let lower = &min - &lower_shift;
                        let sum = &base_sum + Rational::from_integer(sum_shift);
                        let got = solve_d_invariants(&model.linking_form(), &sum, &lower, &model, radius).unwrap();
                        let want = solve_oracle(&model, &sum, &lower, radius);
                        let got = match got {
                            DSolution::Unique(v) => vec![v],
                            DSolution::NoSolution => vec![],
                            DSolution::Ambiguous(v) => v,
                        };
                        assert_eq!(got, want, "{model} r={radius} lower={lower} sum={sum}");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn solver_order_three_window() {
    let got = solve_d_invariants(&LinkingForm::cyclic(3, 2), &q(-1, 6), &q(-1, 2), &l(3, 2), 3).unwrap();
    assert_eq!(got, DSolution::Unique(vec![q(-1, 2), q(1, 6), q(1, 6)]));
    assert_eq!(solve_oracle(&l(3, 2), &q(-1, 6), &q(-1, 2), 3), vec![vec![q(-1, 2), q(1, 6), q(1, 6)]]);
}

#[test]
fn residue_tables_are_conjugation_invariant() {
    let cases = [(l(5, 3), l(2, 1), -10), (l(3, 2), l(2, 1), -6), (l(5, 2), l(2, 1), -10), (l(3, 1), l(3, 1), -9)];
    for (src, tgt, g) in cases {
        let t = residue_pairing_table(&src, &tgt, g).unwrap();
        for e in &t.entries {
            assert_eq!(t.entry(-e.k).unwrap().pairs, e.pairs, "{src} -> {tgt}, k = {}", e.k);
            let c1 = Rational::new(BigInt::from(e.k * e.k), BigInt::from(g));
            for (ds, dt) in &e.pairs {
                assert!(d_mod2_shift(ds, dt, &c1));
            }
        }
    }
}

#[test]
fn residue_table_l53_classes() {
    let t = residue_pairing_table(&l(5, 3), &l(2, 1), -10).unwrap();
    assert_eq!(t.status, PairingStatus::Consistent);
    assert!(t.determined);
    let want: Vec<(Vec<i64>, (Rational, Rational))> = vec![
        (vec![0], (q(0, 1), q(1, 4))),
        (vec![2, 18], (q(-2, 5), q(-1, 4))),
        (vec![4, 16], (q(2, 5), q(1, 4))),
        (vec![6, 14], (q(2, 5), q(-1, 4))),
        (vec![8, 12], (q(-2, 5), q(1, 4))),
        (vec![10], (q(0, 1), q(-1, 4))),
    ];
    assert_eq!(t.classes(), want);
    // source values hit the d-multiset of L(5,3) with multiplicities 2, 1, 2
    // over one source period k mod 10
    let src: Vec<Rational> = (0..10).step_by(2).map(|k| t.entry(k).unwrap().pairs[0].0.clone()).collect();
    assert!(same_multiset(&src, &l(5, 3).d_invariants().values));
    assert!(same_multiset(&src, &[q(-2, 5), q(-2, 5), q(0, 1), q(2, 5), q(2, 5)]));
}

#[test]
fn cobordism_signs_around_triangles() {
    // three slopes a, b, a + b pairwise at distance one: exactly one of the
    // cobordisms a -> b -> a + b -> a is positive definite
    let lam = Slope::longitude();
    let mut checked = 0;
    for m1 in -6i64..=6 {
        for l1 in -6i64..=6 {
            for m2 in -6i64..=6 {
                for l2 in -6i64..=6 {
                    if m1 * l2 - l1 * m2 != 1 {
                        continue;
                    }
                    let a = Slope::new(m1, l1).unwrap();
                    let b = Slope::new(m2, l2).unwrap();
                    let Ok(c) = Slope::new(m1 + m2, l1 + l2) else { continue };
                    if [a, b, c].contains(&lam) {
                        continue;
                    }
                    assert_eq!(distance(&a, &c), 1);
                    let signs = [
                        cobordism_sign(&a, &b).unwrap(),
                        cobordism_sign(&b, &c).unwrap(),
                        cobordism_sign(&c, &a).unwrap(),
                    ];
                    let pos = signs.iter().filter(|&&s| s == 1).count();
                    let neg = signs.iter().filter(|&&s| s == -1).count();
                    assert_eq!((pos, neg), (1, 2), "{a} {b} {c}: {signs:?}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 50);
    for n in 1..=20 {
        let g = Slope::new(2, 1).unwrap();
        let h = Slope::new(2 * n - 1, n).unwrap();
        assert_eq!(cobordism_sign(&g, &h).unwrap(), 1);
    }
    assert_eq!(cobordism_sign(&Slope::meridian(), &lam).unwrap(), 0);
    assert!(cobordism_sign(&Slope::meridian(), &Slope::new(2, 3).unwrap()).is_err());
}

#[test]
fn census_covers_are_the_classified_leaves() {
    for n in 1..=7u64 {
        let mut covers: Vec<ConnSum> = census(n).unwrap().iter().map(branched_double_cover).collect();
        covers.sort();
        let mut leaves = classify_formal_lspaces(n).unwrap().leaves;
        leaves.sort();
        assert_eq!(covers, leaves, "det {n}");
    }
}

/// Isometry search over every assignment of generator images, checking the
/// form on all pairs of elements and bijectivity.
fn isometric_oracle(orders: &[u64], left: &[u64], right: &[u64]) -> bool {
    let elems: Vec<Vec<u64>> = orders.iter().fold(vec![vec![]], |acc, &n| {
        acc.into_iter()
            .flat_map(|v| {
                (0..n).map(move |t| {
                    let mut w = v.clone();
                    w.push(t);
                    w
                })
            })
            .collect()
    });
    let value = |nums: &[u64], x: &[u64], y: &[u64]| -> BigRational {
        let mut s = BigRational::from_integer(0.into());
        for i in 0..orders.len() {
            s += BigRational::new(BigInt::from(x[i] * y[i] * nums[i]), BigInt::from(orders[i]));
        }
        s.clone() - s.floor()
    };
    let image = |imgs: &[&Vec<u64>], x: &[u64]| -> Vec<u64> {
        (0..orders.len())
            .map(|j| (0..orders.len()).map(|i| x[i] * imgs[i][j]).sum::<u64>() % orders[j])
            .collect()
    };
    let r = orders.len();
    let mut idx = vec![0usize; r];
    loop {
        let imgs: Vec<&Vec<u64>> = idx.iter().map(|&i| &elems[i]).collect();
        let well_defined = (0..r).all(|i| (0..r).all(|j| (orders[i] * imgs[i][j]).is_multiple_of(orders[j])));
        if well_defined {
            let mapped: Vec<Vec<u64>> = elems.iter().map(|x| image(&imgs, x)).collect();
            let mut distinct = mapped.clone();
            distinct.sort();
            distinct.dedup();
            if distinct.len() == elems.len()
                && elems.iter().zip(&mapped).all(|(x, fx)| {
                    elems.iter().zip(&mapped).all(|(y, fy)| value(left, x, y) == value(right, fx, fy))
                })
            {
                return true;
            }
        }
        let mut i = 0;
        loop {
            if i == r {
                return false;
            }
            idx[i] += 1;
            if idx[i] < elems.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn rank_two_forms_match_isometry_search() {
    for orders in [[3u64, 3], [5, 5], [3, 9], [2, 4], [4, 4], [2, 2], [4, 8]] {
        let units = |n: u64| (1..n).filter(move |&a| gcd(a as i64, n as i64) == 1);
        let forms: Vec<[u64; 2]> = units(orders[0]).flat_map(|a| units(orders[1]).map(move |b| [a, b])).collect();
        for x in &forms {
            for y in &forms {
                let build = |n: &[u64; 2]| {
                    LinkingForm::direct_sum([
                        LinkingForm::cyclic(orders[0], n[0] as i64),
                        LinkingForm::cyclic(orders[1], n[1] as i64),
                    ])
                };
                assert_eq!(
                    linking_forms_equivalent(&build(x), &build(y)).unwrap(),
                    isometric_oracle(&orders, x, y),
                    "{orders:?}: {x:?} vs {y:?}"
                );
            }
        }
    }
}
