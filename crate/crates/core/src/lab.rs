//! Experiments on the named families over `F_q`: the Hom counterexample
//! census, the monomorphism reducibility witness, the `B_n` product count and
//! a leading-coefficient probe for point counts.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{alpha, build_family, FamilyDescriptor};
use crate::field::{Field, PrimeField};
use crate::hom::{HomMorphism, HomTriple};
use crate::matrix::Matrix;
use crate::presentation::BoundQuiverPresentation;
use crate::rep::{DimensionVector, Representation};
use crate::varieties::{checked_pow, count_points, decode_digits, hom_points, Budget, EnumerationTask, Variety};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub q: u32,
    pub total: u128,
    pub count_b0: u128,
    pub count_a0: u128,
    pub count_both: u128,
    /// `q^n + q - 1`.
    pub expected: u128,
    /// Every point has `b = 0` or `a = 0`.
    pub union_holds: bool,
    /// The Hom triples map injectively onto `{(b, a) : a_i b = 0}`.
    pub bijection_holds: bool,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.total == self.expected && self.union_holds && self.bijection_holds
    }
}

/// `H(e, d)` for `A(n, 2, 1)` with `d = (1, 1)` and `e = (0, 1)`: one
/// coordinate `b = f_1` and `a_i = W_{a_i}`, subject to `a_i b = 0`.
pub fn hom_counterexample_census(n: usize, q: u32, budget: u128) -> Result<CensusReport> {
    let field = PrimeField::new(q)?;
    let pres = Arc::new(build_family(&FamilyDescriptor::A { n, m: 2, l: 1 })?);
    let e = DimensionVector::new(vec![0, 1]);
    let d = DimensionVector::new(vec![1, 1]);
    let points = hom_points(&pres, &field, &e, &d, false, budget)?;

    let mut image: BTreeSet<Vec<u32>> = BTreeSet::new();
    let (mut count_b0, mut count_a0, mut count_both) = (0u128, 0u128, 0u128);
    let mut union_holds = true;
    for t in &points {
        let b = *t.f.map(1).get(0, 0);
        let a: Vec<u32> = (1..=n).map(|i| *t.w.mat(alpha(i)).get(0, 0)).collect();
        let a_zero = a.iter().all(|&x| x == 0);
        count_b0 += u128::from(b == 0);
        count_a0 += u128::from(a_zero);
        count_both += u128::from(b == 0 && a_zero);
        union_holds &= b == 0 || a_zero;
        let mut key = vec![b];
        key.extend(a);
        image.insert(key);
    }

    // independent description of the same set in k^(n+1)
    let budget_raw = Budget::new(budget);
    let size = budget_raw.admit(checked_pow(q as u64, n + 1))?;
    let raw: BTreeSet<Vec<u32>> = (0..size)
        .map(|i| decode_digits(&field, q as u64, n + 1, i))
        .filter(|x| x[1..].iter().all(|&a| field.mul(&a, &x[0]) == 0))
        .collect();
    let bijection_holds = image.len() == points.len() && image == raw;
    let qn = checked_pow(q as u64, n).expect("small");
    Ok(CensusReport {
        n,
        q,
        total: points.len() as u128,
        count_b0,
        count_a0,
        count_both,
        expected: qn + q as u128 - 1,
        union_holds,
        bijection_holds,
    })
}

/// A point of `M_B((1,1), (1,l))` in the coordinates of the displayed
/// system: `V` has loops `v0, v1` and arrows `mu_i`; `W` has loops `w0, U`
/// and arrows `V_i`; `f = (lambda, W)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessPoint {
    pub v0: u32,
    pub v1: u32,
    pub mu: Vec<u32>,
    pub w0: u32,
    pub u: Vec<Vec<u32>>,
    pub big_v: Vec<Vec<u32>>,
    pub lambda: u32,
    pub big_w: Vec<u32>,
}

impl WitnessPoint {
    /// The triple `(V, W, f)` over `B`.
    pub fn to_triple(&self, pres: &Arc<BoundQuiverPresentation>, field: &PrimeField) -> Result<HomTriple<PrimeField>> {
        let l = self.u.len();
        let n = self.mu.len();
        let s = |x: u32| Matrix::from_vec(field, 1, 1, vec![x]);
        let mut vm = vec![s(self.v0)?, s(self.v1)?];
        let mut wm = vec![
            s(self.w0)?,
            Matrix::from_rows(field, l, self.u.clone())?,
        ];
        for i in 0..n {
            vm.push(s(self.mu[i])?);
            wm.push(Matrix::from_rows(field, l, vec![self.big_v[i].clone()])?);
        }
        let v = Representation::new(pres, field, DimensionVector::new(vec![1, 1]), vm)?;
        let w = Representation::new(pres, field, DimensionVector::new(vec![1, l]), wm)?;
        v.validate()?;
        w.validate()?;
        let f = HomMorphism::new(vec![
            s(self.lambda)?,
            Matrix::column_vector(field, self.big_w.clone()),
        ]);
        HomTriple::new(v, w, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub family: FamilyDescriptor,
    pub m: usize,
    pub l: usize,
    pub n: usize,
    pub q: u32,
    pub total: u128,
    /// `rk U = l - 1`.
    pub u1: u128,
    /// `mu_1 != 0`.
    pub u2: u128,
    pub intersection: u128,
    pub sample_u1: Option<WitnessPoint>,
    pub sample_u2: Option<WitnessPoint>,
    /// The samples are monomorphisms between valid representations.
    pub samples_verified: bool,
    /// `Im U^(l-1) ⊆ Ker V_1` and `Im W ⊆ Ker U` at every point.
    pub kernel_inclusions_hold: bool,
    /// `rk U = l - 1` implies `Ker U = Im U^(l-1)` and `mu_1 = 0`.
    pub rank_chain_holds: bool,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.u1 > 0
            && self.u2 > 0
            && self.intersection == 0
            && self.samples_verified
            && self.kernel_inclusions_hold
            && self.rank_chain_holds
    }
}

/// Exhaustive enumeration of `M_B((1,1), (1,l))` for `B = A(n, m, 1)` when
/// `l = 2` and `B = A(n, m, m-1)` when `l = m`. The arrows `a_2..a_n` only
/// enter through `V_i W = lambda mu_i`, so their pairs are enumerated once
/// per `(U, W, lambda)` and counted as a product.
pub fn mono_reducibility_witness(m: usize, l: usize, n: usize, q: u32, budget: u128) -> Result<WitnessReport> {
    if m < 2 || n < 1 {
        return Err(Error::InvalidFamily("witness needs m >= 2 and n >= 1".into()));
    }
    let r = if l == m {
        m - 1
    } else if l == 2 {
        1
    } else {
        return Err(Error::InvalidFamily(format!("l must be 2 or m, got l = {l}, m = {m}")));
    };
    let family = FamilyDescriptor::A { n, m, l: r };
    let pres = Arc::new(build_family(&family)?);
    let f = PrimeField::new(q)?;
    let qq = q as u64;
    let budget = Budget::new(budget);

    let scalar_nilpotents: Vec<u32> = (0..q).filter(|&x| f.pow(&x, m as u64) == 0).collect();
    let u_count = budget.admit(checked_pow(qq, l * l))?;
    let mut us: Vec<(Matrix<PrimeField>, Vec<Matrix<PrimeField>>)> = Vec::new();
    for idx in 0..u_count {
        budget.charge(1)?;
        let u = Matrix::from_vec(&f, l, l, decode_digits(&f, qq, l * l, idx))?;
        if u.pow(m as u32).is_zero() {
            let powers = (0..=l).map(|i| u.pow(i as u32)).collect();
            us.push((u, powers));
        }
    }
    let vec_count = budget.admit(checked_pow(qq, l))?;
    let row = |i: u64| Matrix::from_vec(&f, 1, l, decode_digits(&f, qq, l, i)).expect("1 x l");

    let mut report = WitnessReport {
        family,
        m,
        l,
        n,
        q,
        total: 0,
        u1: 0,
        u2: 0,
        intersection: 0,
        sample_u1: None,
        sample_u2: None,
        samples_verified: true,
        kernel_inclusions_hold: true,
        rank_chain_holds: true,
    };
    for &v0 in &scalar_nilpotents {
        for &v1 in &scalar_nilpotents {
            for &w0 in &scalar_nilpotents {
                for (u, powers) in &us {
                    let rank_u = u.rank();
                    for lambda in 1..q {
                        // e0: w0 lambda = lambda v0
                        if f.mul(&w0, &lambda) != f.mul(&lambda, &v0) {
                            continue;
                        }
                        for widx in 1..vec_count {
                            budget.charge(1)?;
                            let w = Matrix::column_vector(&f, decode_digits(&f, qq, l, widx));
                            // e1: U W = W v1
                            if u * &w != w.scale(&v1) {
                                continue;
                            }
                            let mut first = Vec::new();
                            let mut others = Vec::new();
                            for vidx in 0..vec_count {
                                let vi = row(vidx);
                                let vw = *(&vi * &w).get(0, 0);
                                for mu in 0..q {
                                    budget.charge(1)?;
                                    // a_i: V_i W = lambda mu_i
                                    if vw != f.mul(&lambda, &mu) {
                                        continue;
                                    }
                                    others.push((vi.clone(), mu));
                                    // rho^(r) on W and on V
                                    let mut rho_w = Matrix::zeros(&f, 1, l);
                                    let mut rho_v = 0;
                                    for i in 0..=r {
                                        let c = f.pow(&w0, (r - i) as u64);
                                        rho_w = &rho_w + &(&vi * &powers[i]).scale(&c);
                                        let t = f.mul(&f.mul(&f.pow(&v0, (r - i) as u64), &mu), &f.pow(&v1, i as u64));
                                        rho_v = f.add(&rho_v, &t);
                                    }
                                    if rho_w.is_zero() && rho_v == 0 {
                                        first.push((vi.clone(), mu));
                                    }
                                }
                            }
                            let tail = checked_pow(others.len() as u64, n - 1).ok_or(Error::BudgetExceeded {
                                requested: u128::MAX,
                                budget: 0,
                            })?;
                            for (v1row, mu1) in &first {
                                let in_u1 = rank_u == l - 1;
                                let in_u2 = *mu1 != 0;
                                report.total += tail;
                                report.u1 += tail * u128::from(in_u1);
                                report.u2 += tail * u128::from(in_u2);
                                report.intersection += tail * u128::from(in_u1 && in_u2);

                                let top = &powers[l - 1];
                                let inclusions = (v1row * top).is_zero() && (u * &w).is_zero();
                                report.kernel_inclusions_hold &= inclusions;
                                if in_u1 {
                                    let ker_is_image = top.rank() == l - rank_u && powers[l].is_zero();
                                    report.rank_chain_holds &= ker_is_image && *mu1 == 0;
                                }
                                let point = || {
                                    let mut mu = vec![*mu1];
                                    let mut big_v = vec![v1row.row(0).to_vec()];
                                    for _ in 1..n {
                                        mu.push(others[0].1);
                                        big_v.push(others[0].0.row(0).to_vec());
                                    }
                                    WitnessPoint {
                                        v0,
                                        v1,
                                        mu,
                                        w0,
                                        u: (0..l).map(|i| u.row(i).to_vec()).collect(),
                                        big_v,
                                        lambda,
                                        big_w: w.column(0),
                                    }
                                };
                                if in_u1 && report.sample_u1.is_none() {
                                    report.sample_u1 = Some(point());
                                }
                                if in_u2 && report.sample_u2.is_none() {
                                    report.sample_u2 = Some(point());
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for p in report.sample_u1.iter().chain(&report.sample_u2) {
        report.samples_verified &= p
            .to_triple(&pres, &f)
            .map(|t| t.is_monomorphism())
            .unwrap_or(false);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub e: usize,
    pub q: u32,
    pub count_bn: u128,
    pub count_b1: u128,
    /// `count_b1 * q^((n-1) d e)`.
    pub predicted: u128,
    pub holds: bool,
}

/// `#rep_{B_n}(d, e) = #rep_{B_1}(d, e) * q^((n-1) d e)`.
pub fn product_count_check(n: usize, m: usize, d: usize, e: usize, q: u32, budget: u128) -> Result<ProductReport> {
    let field = PrimeField::new(q)?;
    let dims = DimensionVector::new(vec![d, e]);
    let count = |n: usize| -> Result<u128> {
        let pres = Arc::new(build_family(&FamilyDescriptor::B { n, m })?);
        count_points(&EnumerationTask::new(Variety::Rep { pres, dims: dims.clone() }, field).with_budget(budget))
    };
    let count_bn = count(n)?;
    let count_b1 = count(1)?;
    let factor = checked_pow(q as u64, (n - 1) * d * e).ok_or(Error::BudgetExceeded {
        requested: u128::MAX,
        budget,
    })?;
    let predicted = count_b1 * factor;
    Ok(ProductReport {
        n,
        m,
        d,
        e,
        q,
        count_bn,
        count_b1,
        predicted,
        holds: count_bn == predicted,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeVerdict {
    /// Every count equals `c q^D` for one integer `c`.
    Exact,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeSample {
    pub q: u64,
    pub count: u128,
    /// `count / q^D`.
    pub coefficient: f64,
}

/// Fit of point counts against `c q^D`. This is evidence about the top
/// dimensional part of a variety and never a proof of irreducibility.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub degree: u32,
    pub samples: Vec<ProbeSample>,
    pub verdict: ProbeVerdict,
    pub note: String,
}

/// `D` is the rounded least-squares slope of `ln N` against `ln q`, or
/// `floor(log_q N)` with a single field.
pub fn leading_coefficient_probe(counts: &[(u64, u128)]) -> Result<ProbeReport> {
    if counts.is_empty() {
        return Err(Error::Unsupported("probe needs at least one count".into()));
    }
    if counts.iter().any(|&(q, n)| n == 0 || q < 2) {
        return Err(Error::Unsupported("probe needs nonempty varieties over fields with q >= 2".into()));
    }
    let degree = if counts.len() == 1 {
        let (q, n) = counts[0];
        let mut d = 0;
        while checked_pow(q, d + 1).is_some_and(|p| p <= n) {
            d += 1;
        }
        d as u32
    } else {
        let xs: Vec<f64> = counts.iter().map(|&(q, _)| (q as f64).ln()).collect();
        let ys: Vec<f64> = counts.iter().map(|&(_, n)| (n as f64).ln()).collect();
        let k = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        if sxx == 0.0 {
            return Err(Error::Unsupported("probe needs distinct field sizes".into()));
        }
        (sxy / sxx).round().max(0.0) as u32
    };
    let samples: Vec<ProbeSample> = counts
        .iter()
        .map(|&(q, count)| ProbeSample {
            q,
            count,
            coefficient: count as f64 / (q as f64).powi(degree as i32),
        })
        .collect();
    let exact_c = counts.iter().map(|&(q, n)| {
        let p = checked_pow(q, degree as usize)?;
        (n % p == 0).then_some(n / p)
    });
    let cs: Option<Vec<u128>> = exact_c.collect();
    let exact = cs.is_some_and(|cs| cs.windows(2).all(|w| w[0] == w[1]));
    Ok(ProbeReport {
        degree,
        samples,
        verdict: if exact {
            ProbeVerdict::Exact
        } else {
            ProbeVerdict::Inconclusive
        },
        note: "point counts over small prime fields are evidence only; they do not decide irreducibility".into(),
    })
}
