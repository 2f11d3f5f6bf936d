use num_rational::BigRational;
use proptest::prelude::*;
use qvl_core::{Field, Matrix, PrimeField, Rationals};

fn fp_matrix(p: u32, max: usize) -> impl Strategy<Value = (usize, usize, Vec<u32>)> {
    (0..=max, 0..=max).prop_flat_map(move |(r, c)| {
        (Just(r), Just(c), proptest::collection::vec(0..p, r * c))
    })
}

fn q_matrix(max: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (0..=max, 0..=max).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(-4i64..=4, r * c)))
}

/// Number of vectors in `F_p^cols` killed by `m`, by enumeration.
fn brute_kernel_size(f: &PrimeField, m: &Matrix<PrimeField>) -> u64 {
    let p = f.modulus() as u64;
    let n = m.cols();
    let total = p.pow(n as u32);
    (0..total)
        .filter(|&idx| {
            let mut v = vec![0u32; n];
            let mut x = idx;
            for slot in v.iter_mut() {
                *slot = (x % p) as u32;
                x /= p;
            }
            m.mul_vec(&v).iter().all(|e| *e == 0)
        })
        .count() as u64
}

#[test]
fn rank_of_known_matrices() {
    let q = Rationals;
    let m = Matrix::from_i64(&q, 3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
    assert_eq!(m.rank(), 2);
    assert_eq!(m.kernel_basis().len(), 1);
    let f2 = PrimeField::new(2).unwrap();
    let m = Matrix::from_i64(&f2, 2, 2, &[1, 1, 1, 1]).unwrap();
    assert_eq!(m.rank(), 1);
    assert_eq!(Matrix::<PrimeField>::zeros(&f2, 0, 3).rank(), 0);
    assert_eq!(Matrix::<PrimeField>::zeros(&f2, 0, 3).kernel_basis().len(), 3);
}

#[test]
fn rational_entries_stay_exact() {
    let q = Rationals;
    let third = BigRational::new(1.into(), 3.into());
    let m = Matrix::from_vec(&q, 1, 1, vec![third.clone()]).unwrap();
    let inv = m.inverse().unwrap();
    assert_eq!(inv.get(0, 0), &BigRational::from_integer(3.into()));
    assert!(q.is_one(&q.mul(&third, inv.get(0, 0))));
}

#[test]
fn singular_and_empty_inverses() {
    let f = PrimeField::new(5).unwrap();
    assert!(Matrix::from_i64(&f, 2, 2, &[1, 2, 2, 4]).unwrap().inverse().is_none());
    let empty = Matrix::<PrimeField>::zeros(&f, 0, 0);
    assert_eq!(empty.inverse(), Some(empty));
}

proptest! {
    #[test]
    fn rank_matches_kernel_enumeration((r, c, data) in fp_matrix(3, 3)) {
        let f = PrimeField::new(3).unwrap();
        let m = Matrix::from_vec(&f, r, c, data).unwrap();
        let rank = m.rank();
        prop_assert!(rank <= r.min(c));
        prop_assert_eq!(brute_kernel_size(&f, &m), 3u64.pow((c - rank) as u32));
    }

    #[test]
    fn kernel_vectors_are_annihilated((r, c, data) in q_matrix(4)) {
        let q = Rationals;
        let m = Matrix::from_vec(&q, r, c, data.iter().map(|&x| q.from_i64(x)).collect()).unwrap();
        let kernel = m.kernel_basis();
        prop_assert_eq!(kernel.len(), c - m.rank());
        for v in &kernel {
            prop_assert!(v.iter().any(|x| !q.is_zero(x)));
            prop_assert!(m.mul_vec(v).iter().all(|x| q.is_zero(x)));
        }
        let basis = Matrix::from_fn(&q, c, kernel.len(), |i, j| kernel[j][i].clone());
        prop_assert_eq!(basis.rank(), kernel.len());
    }

    #[test]
    fn inverse_is_two_sided((n, data) in (0usize..=4).prop_flat_map(|n| (Just(n), proptest::collection::vec(0u32..7, n * n)))) {
        let f = PrimeField::new(7).unwrap();
        let m = Matrix::from_vec(&f, n, n, data).unwrap();
        match m.inverse() {
            Some(inv) => {
                prop_assert_eq!(&m * &inv, Matrix::identity(&f, n));
                prop_assert_eq!(&inv * &m, Matrix::identity(&f, n));
                prop_assert!(m.is_invertible());
            }
            None => prop_assert!(m.rank() < n),
        }
    }

    #[test]
    fn solve_returns_a_solution((r, c, data) in fp_matrix(5, 4), x in proptest::collection::vec(0u32..5, 4)) {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_vec(&f, r, c, data).unwrap();
        let b = m.mul_vec(&x[..c]);
        let sol = m.solve(&b).expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&sol), b);
    }

    #[test]
    fn complement_completes_injective_maps((r, c, data) in fp_matrix(2, 4)) {
        let f = PrimeField::new(2).unwrap();
        let m = Matrix::from_vec(&f, r, c, data).unwrap();
        prop_assume!(m.rank() == c);
        let h = m.complement_units();
        prop_assert_eq!(h.cols(), r - c);
        prop_assert!(Matrix::hstack(&f, r, &[&m, &h]).is_invertible());
    }

    #[test]
    fn field_division_round_trips(a in 1u32..101, b in 0u32..101) {
        let f = PrimeField::new(101).unwrap();
        let inv = f.inv(&a).unwrap();
        prop_assert_eq!(f.mul(&a, &inv), 1);
        prop_assert_eq!(f.mul(&f.div(&b, &a).unwrap(), &a), b);
    }
}
