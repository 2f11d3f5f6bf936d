//! Exhaustive point counts of representation, homomorphism, monomorphism and
//! extension varieties over finite prime fields.
//!
//! Representations are enumerated arrow by arrow (arrows in id order unless a
//! permutation is given), each matrix by a row-major odometer, and a relation
//! is tested as soon as all of its arrows carry a value. The budget bounds
//! both the size of every single enumeration stage and the total number of
//! candidates examined.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ext::{cocycle_space_basis, ArrowBlock, ExtensionTriple};
use crate::field::Field;
use crate::hom::{hom_basis, HomMorphism, HomTriple};
use crate::matrix::Matrix;
use crate::presentation::BoundQuiverPresentation;
use crate::quiver::ArrowId;
use crate::rep::{compile_relations, evaluate_compiled_on, CompiledRelation, DimensionVector, Representation};

pub const DEFAULT_BUDGET: u128 = 100_000_000;
pub const BUDGET_ENV: &str = "QVL_BUDGET";

/// `QVL_BUDGET` when set to a positive integer, else [`DEFAULT_BUDGET`].
pub fn default_budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().replace('_', "").parse::<u128>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

pub fn checked_pow(q: u64, k: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(q as u128)?;
    }
    Some(acc)
}

pub(crate) fn finite_order<F: Field>(field: &F) -> Result<u64> {
    field
        .order()
        .ok_or_else(|| Error::Unsupported("point counts need a finite field".into()))
}

/// Shared counter of examined candidates.
pub struct Budget {
    limit: u128,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u128) -> Self {
        Self {
            limit,
            used: AtomicU64::new(0),
        }
    }

    /// Rejects a stage of `size` candidates up front.
    pub fn admit(&self, size: Option<u128>) -> Result<u64> {
        match size {
            Some(s) if s <= self.limit && s <= u64::MAX as u128 => Ok(s as u64),
            _ => Err(Error::BudgetExceeded {
                requested: size.unwrap_or(u128::MAX),
                budget: self.limit,
            }),
        }
    }

    pub fn charge(&self, n: u64) -> Result<()> {
        let used = self.used.fetch_add(n, Ordering::Relaxed) as u128 + n as u128;
        if used > self.limit {
            return Err(Error::BudgetExceeded {
                requested: used,
                budget: self.limit,
            });
        }
        Ok(())
    }

    pub fn used(&self) -> u128 {
        self.used.load(Ordering::Relaxed) as u128
    }
}

/// `k^n` coordinates of index `idx`, most significant digit first.
pub fn decode_digits<F: Field>(field: &F, q: u64, n: usize, mut idx: u64) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); n];
    for slot in out.iter_mut().rev() {
        *slot = field.element(idx % q);
        idx /= q;
    }
    out
}

/// The matrix space of every arrow of a representation variety.
struct RepSpace<F: Field> {
    field: F,
    q: u64,
    dims: DimensionVector,
    order: Vec<ArrowId>,
    shapes: Vec<(usize, usize)>,
    stage_sizes: Vec<u64>,
    /// Relations whose last arrow (in `order`) is assigned at stage `k`.
    checks: Vec<Vec<CompiledRelation<F>>>,
}

impl<F: Field> RepSpace<F> {
    fn new(
        pres: &BoundQuiverPresentation,
        field: &F,
        dims: &DimensionVector,
        order: Option<&[ArrowId]>,
        budget: &Budget,
    ) -> Result<Self> {
        let q = finite_order(field)?;
        let quiver = pres.quiver();
        if dims.len() != quiver.num_vertices() {
            return Err(Error::Shape("dimension vector does not match the quiver".into()));
        }
        let order: Vec<ArrowId> = match order {
            Some(o) => {
                let mut sorted = o.to_vec();
                sorted.sort_unstable();
                if sorted != (0..quiver.num_arrows()).collect::<Vec<_>>() {
                    return Err(Error::InvalidQuiver(
                        "arrow order must be a permutation of the arrows".into(),
                    ));
                }
                o.to_vec()
            }
            None => (0..quiver.num_arrows()).collect(),
        };
        let shapes: Vec<(usize, usize)> = quiver
            .arrows()
            .iter()
            .map(|a| (dims.get(a.target), dims.get(a.source)))
            .collect();
        let stage_sizes = order
            .iter()
            .map(|&a| budget.admit(checked_pow(q, shapes[a].0 * shapes[a].1)))
            .collect::<Result<Vec<_>>>()?;
        let mut position = vec![0; quiver.num_arrows()];
        for (k, &a) in order.iter().enumerate() {
            position[a] = k;
        }
        let mut checks: Vec<Vec<CompiledRelation<F>>> = vec![Vec::new(); order.len()];
        for r in compile_relations(pres, field)? {
            let last = r.arrows().map(|a| position[a]).max().expect("relations use arrows");
            checks[last].push(r);
        }
        Ok(Self {
            field: field.clone(),
            q,
            dims: dims.clone(),
            order,
            shapes,
            stage_sizes,
            checks,
        })
    }

    fn decode(&self, a: ArrowId, idx: u64) -> Matrix<F> {
        let (r, c) = self.shapes[a];
        Matrix::from_vec(&self.field, r, c, decode_digits(&self.field, self.q, r * c, idx))
            .expect("digit count matches the shape")
    }

    fn passes(&self, k: usize, mats: &[Matrix<F>]) -> bool {
        self.checks[k]
            .iter()
            .all(|r| evaluate_compiled_on(&self.field, &self.dims, mats, r).is_zero())
    }

    fn dfs<A>(
        &self,
        k: usize,
        mats: &mut Vec<Matrix<F>>,
        acc: &mut A,
        budget: &Budget,
        visit: &(impl Fn(&mut A, &[Matrix<F>]) + Sync),
    ) -> Result<()> {
        if k == self.order.len() {
            visit(acc, mats);
            return Ok(());
        }
        let a = self.order[k];
        for idx in 0..self.stage_sizes[k] {
            budget.charge(1)?;
            mats[a] = self.decode(a, idx);
            if self.passes(k, mats) {
                self.dfs(k + 1, mats, acc, budget, visit)?;
            }
        }
        Ok(())
    }

    fn zero_mats(&self) -> Vec<Matrix<F>> {
        self.shapes
            .iter()
            .map(|&(r, c)| Matrix::zeros(&self.field, r, c))
            .collect()
    }

    /// Folds `visit` over every valid representation; the first stage is
    /// split across threads when `parallel`.
    fn fold<A: Send>(
        &self,
        parallel: bool,
        budget: &Budget,
        init: impl Fn() -> A + Sync,
        visit: impl Fn(&mut A, &[Matrix<F>]) + Sync,
        merge: impl Fn(A, A) -> A + Sync,
    ) -> Result<A> {
        let Some(&first) = self.order.first() else {
            let mut acc = init();
            budget.charge(1)?;
            visit(&mut acc, &[]);
            return Ok(acc);
        };
        let branch = |mut acc: A, idx: u64| -> Result<A> {
            budget.charge(1)?;
            let mut mats = self.zero_mats();
            mats[first] = self.decode(first, idx);
            if self.passes(0, &mats) {
                self.dfs(1, &mut mats, &mut acc, budget, &visit)?;
            }
            Ok(acc)
        };
        if parallel {
            (0..self.stage_sizes[0])
                .into_par_iter()
                .try_fold(&init, branch)
                .try_reduce(&init, |a, b| Ok(merge(a, b)))
        } else {
            (0..self.stage_sizes[0]).try_fold(init(), branch)
        }
    }
}

/// What to enumerate. `Hom`, `Mono` and `Ext` take the dimension vector `e`
/// of the first module and `d` of the second: `H(e, d)` and `M(e, d)` are
/// triples `(V, W, f: V -> W)` with `dim V = e`, `dim W = d`; `E(e, d)`
/// consists of `(U, V, Z)` with `dim U = e`, `dim V = d`.
#[derive(Clone)]
pub enum Variety<F: Field> {
    Rep {
        pres: Arc<BoundQuiverPresentation>,
        dims: DimensionVector,
    },
    Hom {
        pres: Arc<BoundQuiverPresentation>,
        e: DimensionVector,
        d: DimensionVector,
    },
    Mono {
        pres: Arc<BoundQuiverPresentation>,
        e: DimensionVector,
        d: DimensionVector,
    },
    Ext {
        pres: Arc<BoundQuiverPresentation>,
        e: DimensionVector,
        d: DimensionVector,
    },
    /// Points of `k^vars` accepted by `predicate`.
    Custom {
        vars: usize,
        predicate: Arc<dyn Fn(&[F::Elem]) -> bool + Send + Sync>,
    },
}

impl<F: Field> std::fmt::Debug for Variety<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Rep { dims, .. } => write!(f, "rep{dims}"),
            Self::Hom { e, d, .. } => write!(f, "H({e}, {d})"),
            Self::Mono { e, d, .. } => write!(f, "M({e}, {d})"),
            Self::Ext { e, d, .. } => write!(f, "E({e}, {d})"),
            Self::Custom { vars, .. } => write!(f, "custom(k^{vars})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationTask<F: Field> {
    pub variety: Variety<F>,
    pub field: F,
    pub budget: u128,
    pub parallel: bool,
    pub arrow_order: Option<Vec<ArrowId>>,
}

impl<F: Field> EnumerationTask<F> {
    pub fn new(variety: Variety<F>, field: F) -> Self {
        Self {
            variety,
            field,
            budget: default_budget(),
            parallel: true,
            arrow_order: None,
        }
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn serial(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn with_arrow_order(mut self, order: Vec<ArrowId>) -> Self {
        self.arrow_order = Some(order);
        self
    }
}

fn rep_mats<F: Field>(
    pres: &BoundQuiverPresentation,
    field: &F,
    dims: &DimensionVector,
    order: Option<&[ArrowId]>,
    parallel: bool,
    budget: &Budget,
) -> Result<Vec<Vec<Matrix<F>>>> {
    let space = RepSpace::new(pres, field, dims, order, budget)?;
    space.fold(
        parallel,
        budget,
        Vec::new,
        |acc, mats| acc.push(mats.to_vec()),
        |mut a, b| {
            a.extend(b);
            a
        },
    )
}

fn count_reps<F: Field>(
    pres: &BoundQuiverPresentation,
    field: &F,
    dims: &DimensionVector,
    order: Option<&[ArrowId]>,
    parallel: bool,
    budget: &Budget,
) -> Result<u128> {
    let space = RepSpace::new(pres, field, dims, order, budget)?;
    space.fold(parallel, budget, || 0u128, |acc, _| *acc += 1, |a, b| a + b)
}

/// Every point of `rep_A(dims)` in enumeration order.
pub fn rep_points<F: Field>(
    pres: &Arc<BoundQuiverPresentation>,
    field: &F,
    dims: &DimensionVector,
    budget: u128,
) -> Result<Vec<Representation<F>>> {
    let b = Budget::new(budget);
    rep_mats(pres, field, dims, None, false, &b)?
        .into_iter()
        .map(|mats| Representation::new(pres, field, dims.clone(), mats))
        .collect()
}

/// All pairs `(first, second)` of modules of dimensions `e` and `d`, after
/// checking the pair count against the budget.
fn module_pairs<F: Field>(
    pres: &Arc<BoundQuiverPresentation>,
    task: &EnumerationTask<F>,
    e: &DimensionVector,
    d: &DimensionVector,
    budget: &Budget,
) -> Result<Vec<(Representation<F>, Representation<F>)>> {
    let order = task.arrow_order.as_deref();
    let wrap = |dims: &DimensionVector| -> Result<Vec<Representation<F>>> {
        rep_mats(pres, &task.field, dims, order, task.parallel, budget)?
            .into_iter()
            .map(|m| Representation::new(pres, &task.field, dims.clone(), m))
            .collect()
    };
    let firsts = wrap(e)?;
    let seconds = wrap(d)?;
    let pairs = (firsts.len() as u128) * (seconds.len() as u128);
    budget.admit(Some(pairs))?;
    budget.charge(pairs as u64)?;
    let mut out = Vec::with_capacity(pairs as usize);
    for a in &firsts {
        for b in &seconds {
            out.push((a.clone(), b.clone()));
        }
    }
    Ok(out)
}

fn sum_over<T: Sync>(items: &[T], parallel: bool, f: impl Fn(&T) -> Result<u128> + Sync) -> Result<u128> {
    if parallel {
        items.par_iter().map(&f).try_reduce(|| 0, |a, b| Ok(a + b))
    } else {
        items.iter().try_fold(0, |acc, x| Ok(acc + f(x)?))
    }
}

/// Every linear combination of `basis` with coefficients in the field, in
/// odometer order.
pub fn span_coefficients<F: Field>(field: &F, dim: usize, budget: &Budget) -> Result<Vec<Vec<F::Elem>>> {
    let q = finite_order(field)?;
    let n = budget.admit(checked_pow(q, dim))?;
    budget.charge(n)?;
    Ok((0..n).map(|i| decode_digits(field, q, dim, i)).collect())
}

fn combine_maps<F: Field>(field: &F, basis: &[HomMorphism<F>], coeffs: &[F::Elem], zero: &HomMorphism<F>) -> HomMorphism<F> {
    let mut maps = zero.maps().to_vec();
    for (b, c) in basis.iter().zip(coeffs) {
        if field.is_zero(c) {
            continue;
        }
        for (m, bm) in maps.iter_mut().zip(b.maps()) {
            *m = &*m + &bm.scale(c);
        }
    }
    HomMorphism::new(maps)
}

fn combine_blocks<F: Field>(basis: &[ArrowBlock<F>], coeffs: &[F::Elem], zero: &ArrowBlock<F>) -> ArrowBlock<F> {
    basis
        .iter()
        .zip(coeffs)
        .fold(zero.clone(), |acc, (b, c)| acc.add(&b.scale(c)))
}

fn injective_count<F: Field>(v: &Representation<F>, w: &Representation<F>, budget: &Budget) -> Result<u128> {
    let field = v.field();
    let basis = hom_basis(v, w)?;
    let zero = HomMorphism::zero(field, v.dims(), w.dims());
    let mut count = 0;
    for c in span_coefficients(field, basis.len(), budget)? {
        if combine_maps(field, &basis, &c, &zero).is_injective() {
            count += 1;
        }
    }
    Ok(count)
}

/// Exact number of `F_q`-points of the task's variety.
pub fn count_points<F: Field>(task: &EnumerationTask<F>) -> Result<u128> {
    let budget = Budget::new(task.budget);
    let q = finite_order(&task.field)?;
    let order = task.arrow_order.as_deref();
    match &task.variety {
        Variety::Rep { pres, dims } => count_reps(pres, &task.field, dims, order, task.parallel, &budget),
        Variety::Hom { pres, e, d } => {
            let pairs = module_pairs(pres, task, e, d, &budget)?;
            sum_over(&pairs, task.parallel, |(v, w)| {
                let dim = hom_basis(v, w)?.len();
                checked_pow(q, dim).ok_or(Error::BudgetExceeded {
                    requested: u128::MAX,
                    budget: task.budget,
                })
            })
        }
        Variety::Mono { pres, e, d } => {
            let pairs = module_pairs(pres, task, e, d, &budget)?;
            sum_over(&pairs, task.parallel, |(v, w)| injective_count(v, w, &budget))
        }
        Variety::Ext { pres, e, d } => {
            let pairs = module_pairs(pres, task, e, d, &budget)?;
            sum_over(&pairs, task.parallel, |(u, v)| {
                let dim = cocycle_space_basis(u, v)?.len();
                checked_pow(q, dim).ok_or(Error::BudgetExceeded {
                    requested: u128::MAX,
                    budget: task.budget,
                })
            })
        }
        Variety::Custom { vars, predicate } => {
            let n = budget.admit(checked_pow(q, *vars))?;
            budget.charge(n)?;
            let field = &task.field;
            let accept = |i: u64| u128::from(predicate(&decode_digits(field, q, *vars, i)));
            Ok(if task.parallel {
                (0..n).into_par_iter().map(accept).sum()
            } else {
                (0..n).map(accept).sum()
            })
        }
    }
}

/// Every point of `H(e, d)` (or `M(e, d)` when `mono`), pairs in enumeration
/// order and maps in odometer order over the Hom basis.
pub fn hom_points<F: Field>(
    pres: &Arc<BoundQuiverPresentation>,
    field: &F,
    e: &DimensionVector,
    d: &DimensionVector,
    mono: bool,
    budget: u128,
) -> Result<Vec<HomTriple<F>>> {
    let task = EnumerationTask::new(
        Variety::Hom {
            pres: Arc::clone(pres),
            e: e.clone(),
            d: d.clone(),
        },
        field.clone(),
    )
    .with_budget(budget)
    .serial();
    let b = Budget::new(budget);
    let mut out = Vec::new();
    for (v, w) in module_pairs(pres, &task, e, d, &b)? {
        let basis = hom_basis(&v, &w)?;
        let zero = HomMorphism::zero(field, v.dims(), w.dims());
        for c in span_coefficients(field, basis.len(), &b)? {
            let f = combine_maps(field, &basis, &c, &zero);
            if mono && !f.is_injective() {
                continue;
            }
            out.push(HomTriple {
                v: v.clone(),
                w: w.clone(),
                f,
            });
        }
    }
    Ok(out)
}

/// Every point of `E(e, d)`.
pub fn ext_points<F: Field>(
    pres: &Arc<BoundQuiverPresentation>,
    field: &F,
    e: &DimensionVector,
    d: &DimensionVector,
    budget: u128,
) -> Result<Vec<ExtensionTriple<F>>> {
    let task = EnumerationTask::new(
        Variety::Ext {
            pres: Arc::clone(pres),
            e: e.clone(),
            d: d.clone(),
        },
        field.clone(),
    )
    .with_budget(budget)
    .serial();
    let b = Budget::new(budget);
    let mut out = Vec::new();
    for (u, v) in module_pairs(pres, &task, e, d, &b)? {
        let basis = cocycle_space_basis(&u, &v)?;
        let zero = ArrowBlock::zero(pres, field, e, d);
        for c in span_coefficients(field, basis.len(), &b)? {
            out.push(ExtensionTriple {
                u: u.clone(),
                v: v.clone(),
                z: combine_blocks(&basis, &c, &zero),
            });
        }
    }
    Ok(out)
}
