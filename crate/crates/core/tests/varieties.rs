use std::sync::Arc;

use proptest::prelude::*;
use qvl_core::families::{alpha, build_family, FamilyDescriptor, E1};
use qvl_core::hom::HomMorphism;
use qvl_core::lab::{
    hom_counterexample_census, leading_coefficient_probe, mono_reducibility_witness, product_count_check, ProbeVerdict,
};
use qvl_core::rep::{DimensionVector, Representation};
use qvl_core::varieties::{count_points, ext_points, hom_points, rep_points, EnumerationTask, Variety};
use qvl_core::{BoundQuiverPresentation, Error, Matrix, PrimeField};

const BUDGET: u128 = 50_000_000;

fn pres(desc: FamilyDescriptor) -> Arc<BoundQuiverPresentation> {
    Arc::new(build_family(&desc).unwrap())
}

fn dims(v: &[usize]) -> DimensionVector {
    DimensionVector::new(v.to_vec())
}

/// All tuples of matrices of the right shapes, relations checked at the end.
fn brute_reps(p: &Arc<BoundQuiverPresentation>, f: &PrimeField, d: &DimensionVector) -> Vec<Representation<PrimeField>> {
    let q = f.modulus() as u64;
    let shapes: Vec<(usize, usize)> = p.quiver().arrows().iter().map(|a| (d.get(a.target), d.get(a.source))).collect();
    let total: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let mut out = Vec::new();
    for idx in 0..q.pow(total as u32) {
        let mut x = idx;
        let mut digits = Vec::with_capacity(total);
        for _ in 0..total {
            digits.push((x % q) as u32);
            x /= q;
        }
        let mut at = 0;
        let mats = shapes
            .iter()
            .map(|&(r, c)| {
                let m = Matrix::from_vec(f, r, c, digits[at..at + r * c].to_vec()).unwrap();
                at += r * c;
                m
            })
            .collect();
        let rep = Representation::new(p, f, d.clone(), mats).unwrap();
        if rep.is_valid() {
            out.push(rep);
        }
    }
    out
}

fn brute_hom_count(v: &Representation<PrimeField>, u: &Representation<PrimeField>, mono: bool) -> u128 {
    let f = v.field();
    let q = f.modulus() as u64;
    let n = v.dims().len();
    let total: usize = (0..n).map(|x| v.dims().get(x) * u.dims().get(x)).sum();
    let mut count = 0;
    for idx in 0..q.pow(total as u32) {
        let mut x = idx;
        let maps: Vec<_> = (0..n)
            .map(|y| {
                Matrix::from_fn(f, u.dims().get(y), v.dims().get(y), |_, _| {
                    let d = (x % q) as u32;
                    x /= q;
                    d
                })
            })
            .collect();
        let h = HomMorphism::new(maps);
        if h.is_intertwining(v, u) && (!mono || h.is_injective()) {
            count += 1;
        }
    }
    count
}

fn rep_count(p: &Arc<BoundQuiverPresentation>, f: &PrimeField, d: &DimensionVector) -> u128 {
    count_points(&EnumerationTask::new(Variety::Rep { pres: Arc::clone(p), dims: d.clone() }, *f).with_budget(BUDGET)).unwrap()
}

#[test]
fn nilpotent_counts() {
    for q in [2, 3] {
        let f = PrimeField::new(q).unwrap();
        for n in 1..=3usize {
            let p = pres(FamilyDescriptor::Lambda { m: n });
            let d = dims(&[n]);
            let count = rep_count(&p, &f, &d);
            assert_eq!(count, (q as u128).pow((n * n - n) as u32), "n = {n}, q = {q}");
            if n <= 2 || q == 2 {
                assert_eq!(brute_reps(&p, &f, &d).len() as u128, count);
            }
        }
    }
}

#[test]
fn custom_union_of_axes() {
    let f = PrimeField::new(5).unwrap();
    let task = EnumerationTask::new(
        Variety::<PrimeField>::Custom {
            vars: 2,
            predicate: Arc::new(move |x: &[u32]| (x[0] * x[1]).is_multiple_of(5)),
        },
        f,
    );
    assert_eq!(count_points(&task).unwrap(), 9);
}

#[test]
fn budget_is_enforced() {
    let f = PrimeField::new(3).unwrap();
    let p = pres(FamilyDescriptor::A { n: 2, m: 2, l: 1 });
    let task = EnumerationTask::new(Variety::Rep { pres: p, dims: dims(&[2, 2]) }, f).with_budget(100);
    assert!(matches!(count_points(&task), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn hom_mono_and_ext_counts_match_enumeration() {
    let f = PrimeField::new(2).unwrap();
    for desc in [
        FamilyDescriptor::A { n: 1, m: 2, l: 1 },
        FamilyDescriptor::Aprime { n: 2, m0: 2, m1: 1 },
        FamilyDescriptor::Lambda { m: 2 },
    ] {
        let p = pres(desc);
        let k = p.quiver().num_vertices();
        let (e, d) = if k == 1 { (dims(&[1]), dims(&[2])) } else { (dims(&[0, 1]), dims(&[1, 1])) };
        let vs = brute_reps(&p, &f, &e);
        let ws = brute_reps(&p, &f, &d);
        let mut hom = 0;
        let mut mono = 0;
        for v in &vs {
            for w in &ws {
                hom += brute_hom_count(v, w, false);
                mono += brute_hom_count(v, w, true);
            }
        }
        let count = |var| count_points(&EnumerationTask::new(var, f).with_budget(BUDGET)).unwrap();
        assert_eq!(count(Variety::Hom { pres: Arc::clone(&p), e: e.clone(), d: d.clone() }), hom, "{desc}");
        assert_eq!(count(Variety::Mono { pres: Arc::clone(&p), e: e.clone(), d: d.clone() }), mono, "{desc}");
        assert_eq!(hom_points(&p, &f, &e, &d, false, BUDGET).unwrap().len() as u128, hom);
        assert_eq!(hom_points(&p, &f, &e, &d, true, BUDGET).unwrap().len() as u128, mono);

        // E(e, d): W^{V,Z,U} of dimension d + e valid, counted over all blocks
        let ext = count(Variety::Ext { pres: Arc::clone(&p), e: e.clone(), d: d.clone() });
        let points = ext_points(&p, &f, &e, &d, BUDGET).unwrap();
        assert_eq!(points.len() as u128, ext);
        for t in &points {
            assert!(t.extension().unwrap().module.is_valid());
        }
    }
}

#[test]
fn enumerated_points_are_valid_and_distinct() {
    let f = PrimeField::new(3).unwrap();
    let p = pres(FamilyDescriptor::A { n: 1, m: 2, l: 1 });
    let d = dims(&[1, 2]);
    let pts = rep_points(&p, &f, &d, BUDGET).unwrap();
    assert!(pts.iter().all(Representation::is_valid));
    let mut keys: Vec<Vec<u32>> = pts.iter().map(|r| r.mats().iter().flat_map(|m| m.data().to_vec()).collect()).collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), pts.len());
    assert_eq!(pts.len(), brute_reps(&p, &f, &d).len());
}

#[test]
fn census_matches_closed_form() {
    for n in 1..=3 {
        for q in [2u32, 3, 5] {
            let r = hom_counterexample_census(n, q, BUDGET).unwrap();
            assert_eq!(r.total, (q as u128).pow(n as u32) + q as u128 - 1, "n = {n}, q = {q}");
            assert!(r.union_holds && r.bijection_holds);
            assert_eq!(r.count_b0, (q as u128).pow(n as u32));
            assert_eq!(r.count_a0, q as u128);
            assert_eq!(r.count_both, 1);
        }
    }
}

/// The generic `M(e, d)` enumeration, split by `rk U = l - 1` and `mu_1 != 0`.
fn witness_oracle(m: usize, l: usize, n: usize, q: u32) -> (u128, u128, u128, u128) {
    let r = if l == m { m - 1 } else { 1 };
    let p = pres(FamilyDescriptor::A { n, m, l: r });
    let f = PrimeField::new(q).unwrap();
    let pts = hom_points(&p, &f, &dims(&[1, 1]), &dims(&[1, l]), true, BUDGET).unwrap();
    let (mut u1, mut u2, mut both) = (0, 0, 0);
    for t in &pts {
        let a = t.w.mat(E1).rank() == l - 1;
        let b = !t.v.mat(alpha(1)).is_zero();
        u1 += u128::from(a);
        u2 += u128::from(b);
        both += u128::from(a && b);
    }
    (pts.len() as u128, u1, u2, both)
}

#[test]
fn witness_agrees_with_generic_enumeration() {
    for (m, l, n, q) in [(2, 2, 1, 2), (2, 2, 1, 3), (3, 2, 1, 2), (3, 3, 1, 2), (2, 2, 2, 2), (3, 3, 2, 2)] {
        let r = mono_reducibility_witness(m, l, n, q, BUDGET).unwrap();
        assert_eq!((r.total, r.u1, r.u2, r.intersection), witness_oracle(m, l, n, q), "({m},{l},{n},{q})");
    }
}

#[test]
fn witness_grid() {
    for (m, l) in [(2, 2), (3, 2), (3, 3)] {
        for n in 1..=2 {
            for q in [2, 3] {
                let r = mono_reducibility_witness(m, l, n, q, BUDGET).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
    }
}

#[test]
fn known_witness_points_satisfy_the_equations() {
    // rk U = 1 with mu_1 = 0, and U = 0 with mu_1 = 1, both for l = 2 over A(1, 2, 1)
    let p = pres(FamilyDescriptor::A { n: 1, m: 2, l: 1 });
    let f = PrimeField::new(2).unwrap();
    let m = |r, c, v: &[i64]| Matrix::from_i64(&f, r, c, v).unwrap();
    let s = |x| m(1, 1, &[x]);
    let cases = [
        // v0, v1, mu, w0, U, V_1, lambda, W
        (0, 0, 0, 0, [0, 1, 0, 0], [0, 1], 1, [1, 0]),
        (0, 0, 1, 0, [0, 0, 0, 0], [1, 0], 1, [1, 0]),
    ];
    for (v0, v1, mu, w0, u, vv, lambda, w) in cases {
        let v = Representation::new(&p, &f, dims(&[1, 1]), vec![s(v0), s(v1), s(mu)]).unwrap();
        let big_w = Representation::new(&p, &f, dims(&[1, 2]), vec![s(w0), m(2, 2, &u), m(1, 2, &vv)]).unwrap();
        assert!(v.is_valid() && big_w.is_valid());
        let h = HomMorphism::new(vec![s(lambda), m(2, 1, &w)]);
        assert!(h.is_intertwining(&v, &big_w));
        assert!(h.is_injective());
    }
}

#[test]
fn product_identity() {
    for n in 1..=3 {
        for (d, e) in [(1, 1), (2, 1)] {
            for q in [2, 3] {
                let r = product_count_check(n, 2, d, e, q, BUDGET).unwrap();
                assert!(r.holds, "{r:?}");
            }
        }
    }
    let f = PrimeField::new(2).unwrap();
    let b2 = pres(FamilyDescriptor::B { n: 2, m: 2 });
    let r = product_count_check(2, 2, 1, 1, 2, BUDGET).unwrap();
    assert_eq!(r.count_bn, brute_reps(&b2, &f, &dims(&[1, 1])).len() as u128);
}

#[test]
fn probe_examples() {
    // affine plane
    let r = leading_coefficient_probe(&[(2, 4), (3, 9), (5, 25)]).unwrap();
    assert_eq!((r.degree, r.verdict), (2, ProbeVerdict::Exact));
    // union of two lines: 2q - 1
    let r = leading_coefficient_probe(&[(2, 3), (3, 5), (5, 9), (7, 13)]).unwrap();
    assert_eq!((r.degree, r.verdict), (1, ProbeVerdict::Inconclusive));
    // census counts q^n + q - 1 with n = 2
    let counts: Vec<_> = [2u32, 3, 5]
        .iter()
        .map(|&q| (q as u64, hom_counterexample_census(2, q, BUDGET).unwrap().total))
        .collect();
    let r = leading_coefficient_probe(&counts).unwrap();
    assert_eq!((r.degree, r.verdict), (2, ProbeVerdict::Inconclusive));
    assert_eq!(leading_coefficient_probe(&[(3, 27)]).unwrap().degree, 3);
    assert!(leading_coefficient_probe(&[]).is_err());
    assert!(leading_coefficient_probe(&[(2, 0)]).is_err());
}

fn family_strategy() -> impl Strategy<Value = FamilyDescriptor> {
    prop_oneof![
        (1usize..=2, 2usize..=3).prop_flat_map(|(n, m)| (Just(n), Just(m), 1..m)).prop_map(|(n, m, l)| FamilyDescriptor::A { n, m, l }),
        (0usize..=2, 1usize..=3, 1usize..=3).prop_map(|(n, m0, m1)| FamilyDescriptor::Aprime { n, m0, m1 }),
        (2usize..=3).prop_map(|m| FamilyDescriptor::AprimeCommuting { m }),
        (1usize..=3).prop_map(|m| FamilyDescriptor::Lambda { m }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn counts_match_brute_force_and_order(desc in family_strategy(), a in proptest::collection::vec(0usize..=2, 2), rot in 0usize..4) {
        let p = pres(desc);
        let f = PrimeField::new(2).unwrap();
        let d = DimensionVector::new(a[..p.quiver().num_vertices()].to_vec());
        let shapes: usize = p.quiver().arrows().iter().map(|x| d.get(x.target) * d.get(x.source)).sum();
        prop_assume!(shapes <= 16);
        let expected = brute_reps(&p, &f, &d).len() as u128;
        let var = Variety::Rep { pres: Arc::clone(&p), dims: d.clone() };
        prop_assert_eq!(count_points(&EnumerationTask::new(var.clone(), f)).unwrap(), expected);
        prop_assert_eq!(count_points(&EnumerationTask::new(var.clone(), f).serial()).unwrap(), expected);
        let k = p.quiver().num_arrows();
        let mut order: Vec<usize> = (0..k).collect();
        if k > 0 {
            order.rotate_left(rot % k);
        }
        order.reverse();
        prop_assert_eq!(count_points(&EnumerationTask::new(var, f).with_arrow_order(order)).unwrap(), expected);
    }
}
