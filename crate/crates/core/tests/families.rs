use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use qvl_core::families::{
    alpha, bn_join, bn_split, build_family, is_geometrically_irreducible_family, lemma41_ext, lemma41_ext_inverse,
    lemma41_hom, lemma41_hom_inverse, rho, twist_iso, FamilyDescriptor, E0, E1,
};
use qvl_core::rep::{DimensionVector, Representation};
use qvl_core::sample::random_representation;
use qvl_core::varieties::{count_points, ext_points, hom_points, rep_points, EnumerationTask, Variety};
use qvl_core::{BoundQuiverPresentation, Error, Matrix, PrimeField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pres(desc: FamilyDescriptor) -> Arc<BoundQuiverPresentation> {
    Arc::new(build_family(&desc).unwrap())
}

fn dims(v: &[usize]) -> DimensionVector {
    DimensionVector::new(v.to_vec())
}

fn key(mats: &[&Matrix<PrimeField>]) -> Vec<u32> {
    mats.iter().flat_map(|m| m.data().iter().copied()).collect()
}

const BUDGET: u128 = 10_000_000;

#[test]
fn relation_shapes() {
    let a = pres(FamilyDescriptor::A { n: 2, m: 3, l: 2 });
    let q = a.quiver();
    assert_eq!(q.num_arrows(), 4);
    assert_eq!((q.arrow(E0).source, q.arrow(E0).target), (0, 0));
    assert_eq!((q.arrow(E1).source, q.arrow(E1).target), (1, 1));
    assert_eq!((q.arrow(alpha(2)).source, q.arrow(alpha(2)).target), (1, 0));
    let r = rho(q, 2);
    assert_eq!(r.terms().len(), 3);
    assert!(r.terms().iter().all(|(_, p)| p.len() == 3 && p.source() == 1 && p.target() == 0));
    assert_eq!(a.relations()[2], r);
    assert_eq!(a.truncation_bound(), 6);

    let ap = pres(FamilyDescriptor::Aprime { n: 2, m0: 1, m1: 3 });
    assert_eq!(ap.quiver().num_arrows(), 3);
    assert_eq!(ap.relations().len(), 1);
    assert_eq!(ap.truncation_bound(), 4);
    assert_eq!(pres(FamilyDescriptor::Lambda { m: 1 }).quiver().num_arrows(), 0);
    assert_eq!(pres(FamilyDescriptor::Lambda { m: 4 }).truncation_bound(), 4);
    assert_eq!(
        build_family(&FamilyDescriptor::B { n: 2, m: 3 }).unwrap(),
        build_family(&FamilyDescriptor::A { n: 2, m: 3, l: 2 }).unwrap()
    );
}

#[test]
fn invalid_parameters_are_rejected() {
    for desc in [
        FamilyDescriptor::A { n: 1, m: 1, l: 1 },
        FamilyDescriptor::A { n: 0, m: 2, l: 1 },
        FamilyDescriptor::A { n: 1, m: 2, l: 0 },
        FamilyDescriptor::Aprime { n: 1, m0: 0, m1: 2 },
        FamilyDescriptor::AprimeCommuting { m: 1 },
        FamilyDescriptor::Lambda { m: 0 },
        FamilyDescriptor::B { n: 1, m: 1 },
    ] {
        assert!(matches!(build_family(&desc), Err(Error::InvalidFamily(_))), "{desc}");
        assert!(is_geometrically_irreducible_family(&desc).is_err());
    }
}

#[test]
fn irreducibility_table() {
    let yes = |d| is_geometrically_irreducible_family(&d).unwrap();
    assert!(yes(FamilyDescriptor::A { n: 3, m: 4, l: 1 }));
    assert!(yes(FamilyDescriptor::A { n: 3, m: 4, l: 3 }));
    assert!(!yes(FamilyDescriptor::A { n: 3, m: 4, l: 2 }));
    assert!(!yes(FamilyDescriptor::A { n: 1, m: 5, l: 3 }));
    assert!(yes(FamilyDescriptor::A { n: 1, m: 2, l: 1 }));
    assert!(yes(FamilyDescriptor::Aprime { n: 4, m0: 3, m1: 5 }));
    assert!(yes(FamilyDescriptor::B { n: 2, m: 3 }));
    assert!(yes(FamilyDescriptor::AprimeCommuting { m: 3 }));
    assert!(yes(FamilyDescriptor::Lambda { m: 3 }));
}

#[test]
fn twist_matches_commuting_and_sum_relations() {
    let f = PrimeField::new(3).unwrap();
    for m in 2..=3 {
        let comm = pres(FamilyDescriptor::AprimeCommuting { m });
        let a = pres(FamilyDescriptor::A { n: 1, m, l: 1 });
        for d in [dims(&[1, 1]), dims(&[2, 1])] {
            let left = rep_points(&comm, &f, &d, BUDGET).unwrap();
            let right = rep_points(&a, &f, &d, BUDGET).unwrap();
            assert_eq!(left.len(), right.len());
            let image: BTreeSet<_> = left
                .iter()
                .map(|r| {
                    let t = twist_iso(r, &a).unwrap();
                    assert_eq!(twist_iso(&t, &comm).unwrap(), *r);
                    key(&t.mats().iter().collect::<Vec<_>>())
                })
                .collect();
            let all: BTreeSet<_> = right.iter().map(|r| key(&r.mats().iter().collect::<Vec<_>>())).collect();
            assert_eq!(image, all);
        }
    }
}

#[test]
fn hom_correspondence_is_a_bijection_on_points() {
    let f = PrimeField::new(2).unwrap();
    for m in 2..=3 {
        let comm = pres(FamilyDescriptor::AprimeCommuting { m });
        let lambda = pres(FamilyDescriptor::Lambda { m });
        for (d0, d1) in [(1, 1), (2, 1), (1, 2)] {
            let reps = rep_points(&comm, &f, &dims(&[d0, d1]), BUDGET).unwrap();
            let homs = hom_points(&lambda, &f, &dims(&[d1]), &dims(&[d0]), false, BUDGET).unwrap();
            assert_eq!(reps.len(), homs.len(), "m = {m}, d = ({d0}, {d1})");
            let image: BTreeSet<_> = reps
                .iter()
                .map(|r| {
                    let t = lemma41_hom(r, &lambda).unwrap();
                    assert_eq!(lemma41_hom_inverse(&t, &comm).unwrap(), *r);
                    key(&[t.v.mat(0), t.w.mat(0), t.f.map(0)])
                })
                .collect();
            let all: BTreeSet<_> = homs.iter().map(|t| key(&[t.v.mat(0), t.w.mat(0), t.f.map(0)])).collect();
            assert_eq!(image, all);
        }
    }
}

#[test]
fn ext_correspondence_is_a_bijection_on_points() {
    let f = PrimeField::new(2).unwrap();
    for m in 2..=3 {
        let b1 = pres(FamilyDescriptor::B { n: 1, m });
        let lambda = pres(FamilyDescriptor::Lambda { m });
        for (d0, d1) in [(1, 1), (2, 1), (1, 2)] {
            let reps = rep_points(&b1, &f, &dims(&[d0, d1]), BUDGET).unwrap();
            let exts = ext_points(&lambda, &f, &dims(&[d1]), &dims(&[d0]), BUDGET).unwrap();
            assert_eq!(reps.len(), exts.len(), "m = {m}, d = ({d0}, {d1})");
            let image: BTreeSet<_> = reps
                .iter()
                .map(|r| {
                    let t = lemma41_ext(r, &lambda).unwrap();
                    assert_eq!(lemma41_ext_inverse(&t, &b1).unwrap(), *r);
                    key(&[t.u.mat(0), t.v.mat(0), t.z.block(0)])
                })
                .collect();
            let all: BTreeSet<_> = exts.iter().map(|t| key(&[t.u.mat(0), t.v.mat(0), t.z.block(0)])).collect();
            assert_eq!(image, all);
        }
    }
}

#[test]
fn bn_counts_factor_through_b1() {
    let f = PrimeField::new(2).unwrap();
    let b1 = pres(FamilyDescriptor::B { n: 1, m: 2 });
    for n in 2..=3 {
        let bn = pres(FamilyDescriptor::B { n, m: 2 });
        for (d0, d1) in [(1, 1), (2, 1)] {
            let d = dims(&[d0, d1]);
            let count = |p: &Arc<BoundQuiverPresentation>| {
                count_points(&EnumerationTask::new(Variety::Rep { pres: Arc::clone(p), dims: d.clone() }, f).with_budget(BUDGET)).unwrap()
            };
            let free = 2u128.pow(((n - 1) * d0 * d1) as u32);
            assert_eq!(count(&bn), count(&b1) * free);
        }
    }
}

#[test]
fn wrong_algebra_is_rejected() {
    let f = PrimeField::new(3).unwrap();
    let a = pres(FamilyDescriptor::A { n: 2, m: 2, l: 1 });
    let lambda = pres(FamilyDescriptor::Lambda { m: 2 });
    let r = Representation::zero(&a, &f, dims(&[1, 1])).unwrap();
    assert!(twist_iso(&r, &pres(FamilyDescriptor::A { n: 1, m: 2, l: 1 })).is_err());
    let b1 = pres(FamilyDescriptor::B { n: 1, m: 2 });
    assert!(bn_split(&Representation::zero(&b1, &f, dims(&[1, 1])).unwrap(), &a).is_err());
    let z = Representation::zero(&lambda, &f, dims(&[1])).unwrap();
    assert!(lemma41_hom(&z, &lambda).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bn_split_round_trips(n in 1usize..=3, m in 2usize..=3, d0 in 0usize..=3, d1 in 0usize..=3, seed in any::<u64>()) {
        let f = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bn = pres(FamilyDescriptor::B { n, m });
        let b1 = pres(FamilyDescriptor::B { n: 1, m });
        let r = random_representation(&bn, &f, &dims(&[d0, d1]), &mut rng).unwrap();
        let (first, free) = bn_split(&r, &b1).unwrap();
        prop_assert!(first.is_valid());
        prop_assert_eq!(free.len(), n - 1);
        for b in &free {
            prop_assert_eq!((b.rows(), b.cols()), (d0, d1));
        }
        prop_assert_eq!(bn_join(&first, &free, &bn).unwrap(), r);
    }

    #[test]
    fn lemma_maps_round_trip_on_random_modules(m in 2usize..=4, d0 in 0usize..=3, d1 in 0usize..=3, seed in any::<u64>()) {
        let f = PrimeField::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = pres(FamilyDescriptor::Lambda { m });
        let comm = pres(FamilyDescriptor::AprimeCommuting { m });
        let r = random_representation(&comm, &f, &dims(&[d0, d1]), &mut rng).unwrap();
        let t = lemma41_hom(&r, &lambda).unwrap();
        prop_assert_eq!(t.v.dims().get(0), d1);
        prop_assert_eq!(lemma41_hom_inverse(&t, &comm).unwrap(), r);

        let b1 = pres(FamilyDescriptor::B { n: 1, m });
        let r = random_representation(&b1, &f, &dims(&[d0, d1]), &mut rng).unwrap();
        let t = lemma41_ext(&r, &lambda).unwrap();
        prop_assert_eq!(t.u.dims().get(0), d1);
        prop_assert_eq!(lemma41_ext_inverse(&t, &b1).unwrap(), r);
    }
}
