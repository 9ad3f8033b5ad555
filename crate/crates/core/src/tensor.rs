//! Product tensors, families of them, and the per-subset span dimensions
//! `d_J^S` that every criterion is built on.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{kron_all, rank_of_rows, VectorList};
use crate::subset::{block_mask, check_scan, combinations, subsets_by_size, Subset};

/// `coeff * x_1 (x) ... (x) x_m` with every factor nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductTensor {
    factors: Vec<Vec<Scalar>>,
    coeff: Scalar,
}

impl ProductTensor {
    pub fn new(factors: Vec<Vec<Scalar>>, coeff: Scalar) -> Result<ProductTensor> {
        if factors.is_empty() {
            return Err(Error::Empty("product tensor without factors".into()));
        }
        let field = coeff.field();
        for (j, f) in factors.iter().enumerate() {
            if f.iter().any(|x| x.field() != field) {
                return Err(Error::FieldMismatch);
            }
            if f.iter().all(Scalar::is_zero) {
                return Err(Error::ZeroFactor { tensor: 0, mode: j });
            }
        }
        if coeff.is_zero() {
            return Err(Error::InvalidParameter("zero coefficient".into()));
        }
        Ok(ProductTensor { factors, coeff })
    }

    pub fn unit(field: Field, factors: Vec<Vec<Scalar>>) -> Result<ProductTensor> {
        ProductTensor::new(factors, field.one())
    }

    pub fn field(&self) -> Field {
        self.coeff.field()
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Vec<Scalar>] {
        &self.factors
    }

    pub fn factor(&self, j: usize) -> &[Scalar] {
        &self.factors[j]
    }

    pub fn coeff(&self) -> &Scalar {
        &self.coeff
    }

    pub fn with_coeff(&self, coeff: Scalar) -> Result<ProductTensor> {
        ProductTensor::new(self.factors.clone(), coeff)
    }

    /// Kronecker product of the factors, coefficient excluded.
    pub fn direction(&self) -> Vec<Scalar> {
        kron_all(self.field(), self.factors.iter().map(Vec::as_slice))
    }

    /// The coordinate vector including the coefficient.
    pub fn assemble(&self) -> Vec<Scalar> {
        self.direction().iter().map(|x| x * &self.coeff).collect()
    }

    /// Each factor scaled so its first nonzero entry is 1, the scalars folded
    /// into the coefficient.
    pub fn canonical(&self) -> ProductTensor {
        let mut coeff = self.coeff.clone();
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let lead = f
                    .iter()
                    .find(|x| !x.is_zero())
                    .expect("nonzero factor")
                    .clone();
                coeff = &coeff * &lead;
                let inv = lead.inv().expect("nonzero");
                f.iter().map(|x| x * &inv).collect()
            })
            .collect();
        ProductTensor { factors, coeff }
    }
}

/// Equality of two product tensors as tensors.
pub fn projective_equal(x: &ProductTensor, y: &ProductTensor) -> bool {
    x.order() == y.order()
        && x.factors
            .iter()
            .zip(&y.factors)
            .all(|(a, b)| a.len() == b.len())
        && x.canonical() == y.canonical()
}

/// A family `{x_a}` of `n >= 1` product tensors in `V_1 (x) ... (x) V_m`, `m >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFamily {
    field: Field,
    mode_dims: Vec<usize>,
    tensors: Vec<ProductTensor>,
}

impl ProductFamily {
    pub fn new(
        field: Field,
        mode_dims: Vec<usize>,
        tensors: Vec<ProductTensor>,
    ) -> Result<ProductFamily> {
        if tensors.is_empty() {
            return Err(Error::Empty("family needs at least one tensor".into()));
        }
        if mode_dims.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 modes, got {}",
                mode_dims.len()
            )));
        }
        if mode_dims.len() > 31 {
            return Err(Error::InvalidParameter(
                "at most 31 modes are supported".into(),
            ));
        }
        if mode_dims.contains(&0) {
            return Err(Error::InvalidParameter(
                "mode dimensions must be positive".into(),
            ));
        }
        for (a, t) in tensors.iter().enumerate() {
            if t.field() != field {
                return Err(Error::FieldMismatch);
            }
            if t.order() != mode_dims.len() {
                return Err(Error::DimensionMismatch(format!(
                    "tensor {} has {} factors, expected {}",
                    a + 1,
                    t.order(),
                    mode_dims.len()
                )));
            }
            for (j, f) in t.factors.iter().enumerate() {
                if f.len() != mode_dims[j] {
                    return Err(Error::DimensionMismatch(format!(
                        "tensor {}, mode {}: length {} but mode dimension {}",
                        a + 1,
                        j + 1,
                        f.len(),
                        mode_dims[j]
                    )));
                }
            }
        }
        Ok(ProductFamily {
            field,
            mode_dims,
            tensors,
        })
    }

    /// Builds a family from integer factor entries with unit coefficients.
    pub fn from_ints(field: Field, tensors: &[Vec<Vec<i64>>]) -> Result<ProductFamily> {
        let first = tensors
            .first()
            .ok_or_else(|| Error::Empty("no tensors".into()))?;
        let dims = first.iter().map(Vec::len).collect();
        let ts = tensors
            .iter()
            .enumerate()
            .map(|(a, fs)| {
                let factors = fs
                    .iter()
                    .map(|f| f.iter().map(|&v| field.from_i64(v)).collect())
                    .collect();
                ProductTensor::unit(field, factors).map_err(|e| relabel(e, a))
            })
            .collect::<Result<Vec<_>>>()?;
        ProductFamily::new(field, dims, ts)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.tensors.len()
    }

    pub fn m(&self) -> usize {
        self.mode_dims.len()
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn tensors(&self) -> &[ProductTensor] {
        &self.tensors
    }

    pub fn tensor(&self, a: usize) -> &ProductTensor {
        &self.tensors[a]
    }

    /// Length of an assembled tensor.
    pub fn ambient_dim(&self) -> usize {
        self.mode_dims.iter().product()
    }

    /// The mode-`j` factors `x_{a,j}`.
    pub fn mode_vectors(&self, j: usize) -> VectorList {
        let vs = self.tensors.iter().map(|t| t.factors[j].clone()).collect();
        VectorList::new(self.field, self.mode_dims[j], vs).expect("validated")
    }

    /// The assembled tensors, coefficients included.
    pub fn assembled(&self) -> VectorList {
        VectorList::new(
            self.field,
            self.ambient_dim(),
            self.tensors.iter().map(ProductTensor::assemble).collect(),
        )
        .expect("validated")
    }

    pub fn sum(&self) -> Vec<Scalar> {
        family_sum(self)
    }

    pub fn subfamily(&self, idx: &[usize]) -> Result<ProductFamily> {
        let ts = idx.iter().map(|&i| self.tensors[i].clone()).collect();
        ProductFamily::new(self.field, self.mode_dims.clone(), ts)
    }

    pub fn with_unit_coeffs(&self) -> ProductFamily {
        let one = self.field.one();
        let ts = self
            .tensors
            .iter()
            .map(|t| ProductTensor {
                factors: t.factors.clone(),
                coeff: one.clone(),
            })
            .collect();
        ProductFamily {
            field: self.field,
            mode_dims: self.mode_dims.clone(),
            tensors: ts,
        }
    }

    /// Canonical form of every tensor, sorted; equal for equal multisets.
    pub fn canonical_multiset(&self) -> Vec<ProductTensor> {
        let mut v: Vec<ProductTensor> = self.tensors.iter().map(ProductTensor::canonical).collect();
        v.sort_by(|a, b| {
            a.factors
                .cmp(&b.factors)
                .then_with(|| a.coeff.cmp(&b.coeff))
        });
        v
    }

    /// Reduces a rational family modulo `p`; fails if a factor or coefficient
    /// vanishes or a denominator is divisible by `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<ProductFamily> {
        let target = Field::prime(p)?;
        if self.field == target {
            return Ok(self.clone());
        }
        let conv = |x: &Scalar| -> Result<Scalar> {
            let q = x.as_rational().ok_or(Error::FieldMismatch)?;
            target.from_ratio(q.numer(), q.denom())
        };
        let ts = self
            .tensors
            .iter()
            .enumerate()
            .map(|(a, t)| {
                let factors = t
                    .factors
                    .iter()
                    .map(|f| f.iter().map(conv).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                ProductTensor::new(factors, conv(&t.coeff)?).map_err(|e| relabel(e, a))
            })
            .collect::<Result<Vec<_>>>()?;
        ProductFamily::new(target, self.mode_dims.clone(), ts)
    }
}

fn relabel(e: Error, tensor: usize) -> Error {
    match e {
        Error::ZeroFactor { mode, .. } => Error::ZeroFactor { tensor, mode },
        other => other,
    }
}

/// `sum_a x_a` as a coordinate vector.
pub fn family_sum(f: &ProductFamily) -> Vec<Scalar> {
    let mut acc = vec![f.field.zero(); f.ambient_dim()];
    for t in &f.tensors {
        for (s, x) in acc.iter_mut().zip(t.assemble()) {
            *s = &*s + &x;
        }
    }
    acc
}

/// Rank of the mode-`j` matricization of `v`; coordinates run with the last
/// index fastest.
pub fn flattening_rank(v: &[Scalar], mode_dims: &[usize], j: usize) -> Result<usize> {
    let total: usize = mode_dims.iter().product();
    if v.len() != total || j >= mode_dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "tensor of length {} with mode dims {mode_dims:?}, mode {j}",
            v.len()
        )));
    }
    let Some(field) = v.first().map(Scalar::field) else {
        return Ok(0);
    };
    let dj = mode_dims[j];
    let stride: usize = mode_dims[j + 1..].iter().product();
    let mut rows: Vec<Vec<Scalar>> = vec![Vec::with_capacity(total / dj); dj];
    for (t, x) in v.iter().enumerate() {
        rows[(t / stride) % dj].push(x.clone());
    }
    Ok(rank_of_rows(
        field,
        total / dj,
        rows.iter().map(Vec::as_slice),
    ))
}

/// Largest `k` such that every `k` of the vectors are independent.
/// Zero vectors are rejected.
pub fn k_rank(v: &VectorList) -> Result<usize> {
    if let Some(index) = v.first_zero() {
        return Err(Error::ZeroVector { index });
    }
    Ok(k_rank_unchecked(v))
}

/// Like [`k_rank`] but a zero vector gives 0.
pub fn k_rank_lenient(v: &VectorList) -> usize {
    if v.first_zero().is_some() {
        return 0;
    }
    k_rank_unchecked(v)
}

fn k_rank_unchecked(v: &VectorList) -> usize {
    let n = v.len();
    if n == 0 {
        return 0;
    }
    let top = v.span_dim().min(n);
    if top == n {
        return n;
    }
    for k in 2..=top {
        if combinations(n, k).any(|c| v.span_dim_of_indices(&c) < k) {
            return k - 1;
        }
    }
    top
}

/// Per-mode Kruskal ranks and span dimensions of a family.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct KRankProfile {
    pub k: Vec<usize>,
    pub d: Vec<usize>,
}

impl KRankProfile {
    pub fn of(f: &ProductFamily) -> KRankProfile {
        let (k, d) = (0..f.m())
            .map(|j| {
                let v = f.mode_vectors(j);
                (k_rank(&v).expect("factors are nonzero"), v.span_dim())
            })
            .unzip();
        KRankProfile { k, d }
    }

    /// `sum_j (k_j - 1)`.
    pub fn k_excess(&self) -> i64 {
        self.k.iter().map(|&k| k as i64 - 1).sum()
    }

    pub fn d_excess(&self) -> i64 {
        self.d.iter().map(|&d| d as i64 - 1).sum()
    }
}

/// Memoized `d_J^S = dim span { (x)_{j in J} x_{a,j} : a in S }`.
///
/// Safe to share across threads; entries are computed on first use.
pub struct DimTable<'a> {
    family: &'a ProductFamily,
    cap: Option<usize>,
    grouped: RwLock<HashMap<u32, Arc<VectorList>>>,
    cache: RwLock<HashMap<(u64, u32), usize>>,
}

impl<'a> DimTable<'a> {
    pub fn new(family: &'a ProductFamily) -> DimTable<'a> {
        DimTable::with_cap(family, None)
    }

    /// `cap` overrides the default subset-enumeration ceiling.
    pub fn with_cap(family: &'a ProductFamily, cap: Option<usize>) -> DimTable<'a> {
        DimTable {
            family,
            cap,
            grouped: RwLock::default(),
            cache: RwLock::default(),
        }
    }

    pub fn family(&self) -> &'a ProductFamily {
        self.family
    }

    pub fn n(&self) -> usize {
        self.family.n()
    }

    pub fn m(&self) -> usize {
        self.family.m()
    }

    /// The grouped vectors `(x)_{j in J} x_{a,j}` for a mode mask `J`.
    pub fn grouped(&self, jmask: u32) -> Arc<VectorList> {
        if let Some(v) = self.grouped.read().expect("lock").get(&jmask) {
            return v.clone();
        }
        let f = self.family;
        let modes: Vec<usize> = (0..f.m()).filter(|j| jmask >> j & 1 == 1).collect();
        let dim = modes.iter().map(|&j| f.mode_dims[j]).product();
        let vs = f
            .tensors
            .iter()
            .map(|t| kron_all(f.field, modes.iter().map(|&j| t.factors[j].as_slice())))
            .collect();
        let list = Arc::new(VectorList::new(f.field, dim, vs).expect("validated"));
        self.grouped
            .write()
            .expect("lock")
            .entry(jmask)
            .or_insert(list)
            .clone()
    }

    pub fn dim_grouped(&self, s: Subset, jmask: u32) -> usize {
        if let Some(&d) = self.cache.read().expect("lock").get(&(s.bits(), jmask)) {
            return d;
        }
        let d = self.grouped(jmask).span_dim_of(s);
        self.cache
            .write()
            .expect("lock")
            .insert((s.bits(), jmask), d);
        d
    }

    pub fn dim_block(&self, s: Subset, block: &[usize]) -> usize {
        self.dim_grouped(s, block_mask(block))
    }

    /// `d_j^S` for a single mode.
    pub fn dim(&self, s: Subset, j: usize) -> usize {
        self.dim_grouped(s, 1 << j)
    }

    /// `(d_1^S, .., d_m^S)`.
    pub fn dims(&self, s: Subset) -> Vec<usize> {
        (0..self.m()).map(|j| self.dim(s, j)).collect()
    }

    /// Subsets with `lo <= |S| <= hi` in the global order, after the cap check.
    pub fn subsets(&self, lo: usize, hi: usize) -> Result<impl Iterator<Item = Subset>> {
        check_scan(self.n(), lo, hi, self.cap)?;
        Ok(subsets_by_size(self.n(), lo, hi))
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n())
    }
}

/// Regroups modes by a set partition; block `i` becomes mode `i` and its factor
/// is the Kronecker product of the block's factors in ascending mode order.
pub fn mode_group(f: &ProductFamily, blocks: &[Vec<usize>]) -> Result<ProductFamily> {
    validate_partition(blocks, f.m())?;
    let mut sorted: Vec<Vec<usize>> = blocks.to_vec();
    for b in &mut sorted {
        b.sort_unstable();
    }
    let dims = sorted
        .iter()
        .map(|b| b.iter().map(|&j| f.mode_dims[j]).product())
        .collect();
    let ts = f
        .tensors
        .iter()
        .map(|t| {
            let factors = sorted
                .iter()
                .map(|b| kron_all(f.field, b.iter().map(|&j| t.factors[j].as_slice())))
                .collect();
            ProductTensor::new(factors, t.coeff.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    ProductFamily::new(f.field, dims, ts)
}

/// Checks that `blocks` is a set partition of `0..m` into nonempty blocks.
pub fn validate_partition(blocks: &[Vec<usize>], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    for b in blocks {
        if b.is_empty() {
            return Err(Error::InvalidParameter(
                "empty block in mode partition".into(),
            ));
        }
        for &j in b {
            if j >= m || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidParameter(format!(
                    "mode {} repeated or out of range",
                    j + 1
                )));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidParameter(
            "mode partition does not cover every mode".into(),
        ));
    }
    Ok(())
}

/// `{beta_a u_a^{(x) m}}` with the characteristic 0 or above `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricFamily {
    field: Field,
    dim: usize,
    m: usize,
    base: Vec<Vec<Scalar>>,
    coeffs: Vec<Scalar>,
}

impl SymmetricFamily {
    pub fn new(
        field: Field,
        m: usize,
        base: Vec<Vec<Scalar>>,
        coeffs: Vec<Scalar>,
    ) -> Result<SymmetricFamily> {
        if base.is_empty() {
            return Err(Error::Empty("symmetric family needs a base vector".into()));
        }
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "order m = {m} must be at least 2"
            )));
        }
        let ch = field.characteristic();
        if ch != 0 && ch as u128 <= m as u128 {
            return Err(Error::Characteristic { char: ch, need: m });
        }
        if coeffs.len() != base.len() {
            return Err(Error::DimensionMismatch(
                "one coefficient per base vector".into(),
            ));
        }
        let dim = base[0].len();
        let list = VectorList::new(field, dim, base.clone())?;
        if let Some(index) = list.first_zero() {
            return Err(Error::ZeroVector { index });
        }
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        if let Some(i) = coeffs.iter().position(Scalar::is_zero) {
            return Err(Error::InvalidParameter(format!(
                "coefficient {} is zero",
                i + 1
            )));
        }
        Ok(SymmetricFamily {
            field,
            dim,
            m,
            base,
            coeffs,
        })
    }

    pub fn unit(field: Field, m: usize, base: Vec<Vec<Scalar>>) -> Result<SymmetricFamily> {
        let c = vec![field.one(); base.len()];
        SymmetricFamily::new(field, m, base, c)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> VectorList {
        VectorList::new(self.field, self.dim, self.base.clone()).expect("validated")
    }

    pub fn base_vectors(&self) -> &[Vec<Scalar>] {
        &self.base
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Reduces a rational family modulo `p`, as [`ProductFamily::reduce_mod`].
    pub fn reduce_mod(&self, p: u64) -> Result<SymmetricFamily> {
        let target = Field::prime(p)?;
        if self.field == target {
            return Ok(self.clone());
        }
        let conv = |x: &Scalar| -> Result<Scalar> {
            let q = x.as_rational().ok_or(Error::FieldMismatch)?;
            target.from_ratio(q.numer(), q.denom())
        };
        let base = self
            .base
            .iter()
            .map(|u| u.iter().map(conv).collect())
            .collect::<Result<Vec<_>>>()?;
        let coeffs = self.coeffs.iter().map(conv).collect::<Result<Vec<_>>>()?;
        SymmetricFamily::new(target, self.m, base, coeffs)
    }
}

/// The product family `{beta_a u_a (x) ... (x) u_a}`.
pub fn symmetric_lift(s: &SymmetricFamily) -> Result<ProductFamily> {
    let ts = s
        .base
        .iter()
        .zip(&s.coeffs)
        .map(|(u, b)| ProductTensor::new(vec![u.clone(); s.m], b.clone()))
        .collect::<Result<Vec<_>>>()?;
    ProductFamily::new(s.field, vec![s.dim; s.m], ts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn e(n: usize, i: usize) -> Vec<i64> {
        (0..n).map(|k| i64::from(k == i)).collect()
    }

    fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    #[test]
    fn zero_factor_rejected_with_position() {
        let r = ProductFamily::from_ints(
            q(),
            &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 0], vec![1, 1]]],
        );
        assert_eq!(r, Err(Error::ZeroFactor { tensor: 1, mode: 0 }));
        assert!(ProductFamily::from_ints(q(), &[vec![vec![1, 0]]]).is_err());
    }

    #[test]
    fn flattening_follows_last_index_fastest() {
        // e1 (x) e2 in 2x3: coordinate (0,1) -> position 1
        let t = ProductTensor::unit(
            q(),
            vec![
                vec![q().one(), q().zero()],
                vec![q().zero(), q().one(), q().zero()],
            ],
        )
        .unwrap();
        let v = t.assemble();
        assert!(v[1].is_one());
        let f = ProductFamily::from_ints(q(), &[vec![e(2, 0), e(3, 0)], vec![e(2, 1), e(3, 1)]])
            .unwrap();
        let s = f.sum();
        assert_eq!(flattening_rank(&s, &[2, 3], 0).unwrap(), 2);
        assert_eq!(flattening_rank(&s, &[2, 3], 1).unwrap(), 2);
        assert_eq!(flattening_rank(&v, &[2, 3], 1).unwrap(), 1);
    }

    #[test]
    fn k_rank_cases() {
        let vl = |vs: Vec<Vec<i64>>| {
            let d = vs[0].len();
            VectorList::new(
                q(),
                d,
                vs.into_iter()
                    .map(|v| v.into_iter().map(|x| q().from_i64(x)).collect())
                    .collect(),
            )
            .unwrap()
        };
        assert_eq!(k_rank(&vl(vec![e(3, 0), e(3, 1), e(3, 2)])).unwrap(), 3);
        assert_eq!(k_rank(&vl(vec![e(2, 0), e(2, 1), vec![1, 1]])).unwrap(), 2);
        assert_eq!(k_rank(&vl(vec![e(2, 0), e(2, 0)])).unwrap(), 1);
        assert_eq!(k_rank(&vl(vec![vec![1, 1]])).unwrap(), 1);
        assert_eq!(
            k_rank(&vl(vec![e(2, 0), vec![0, 0]])),
            Err(Error::ZeroVector { index: 1 })
        );
        assert_eq!(k_rank_lenient(&vl(vec![e(2, 0), vec![0, 0]])), 0);
        // four vectors in F^3 with three coplanar: k-rank 2
        assert_eq!(
            k_rank(&vl(vec![e(3, 0), e(3, 1), vec![1, 1, 0], e(3, 2)])).unwrap(),
            2
        );
    }

    #[test]
    fn dim_table_and_grouping() {
        let f = ProductFamily::from_ints(
            q(),
            &[
                vec![e(2, 0), e(2, 0), e(2, 0)],
                vec![e(2, 0), e(2, 1), e(2, 1)],
            ],
        )
        .unwrap();
        let t = DimTable::new(&f);
        let all = t.full();
        assert_eq!(t.dims(all), vec![1, 2, 2]);
        assert_eq!(t.dim_grouped(all, 0b011), 2);
        assert_eq!(t.dim_grouped(all, 0b001), 1);
        let g = mode_group(&f, &[vec![0], vec![1, 2]]).unwrap();
        assert_eq!(g.mode_dims(), &[2, 4]);
        assert_eq!(g.sum(), {
            // same coordinates as the ungrouped sum
            f.sum()
        });
        assert!(mode_group(&f, &[vec![0], vec![1]]).is_err());
        assert!(mode_group(&f, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn canonical_form_folds_scalars() {
        let x = ProductTensor::new(
            vec![
                vec![q().from_i64(0), q().from_i64(2)],
                vec![q().from_i64(3), q().from_i64(3)],
            ],
            q().one(),
        )
        .unwrap();
        let y = ProductTensor::new(
            vec![
                vec![q().from_i64(0), q().from_i64(1)],
                vec![q().from_i64(1), q().from_i64(1)],
            ],
            q().from_i64(6),
        )
        .unwrap();
        assert!(projective_equal(&x, &y));
        assert_eq!(x.assemble(), y.assemble());
        let z = y.with_coeff(q().from_i64(5)).unwrap();
        assert!(!projective_equal(&x, &z));
    }

    #[test]
    fn symmetric_family_lift_and_characteristic() {
        let f = Field::prime(3).unwrap();
        let base = vec![vec![f.one(), f.zero()]];
        assert!(matches!(
            SymmetricFamily::unit(f, 3, base.clone()),
            Err(Error::Characteristic { .. })
        ));
        let s = SymmetricFamily::unit(
            q(),
            3,
            vec![vec![q().one(), q().zero()], vec![q().one(), q().one()]],
        )
        .unwrap();
        let lift = symmetric_lift(&s).unwrap();
        assert_eq!(lift.mode_dims(), &[2, 2, 2]);
        assert_eq!(KRankProfile::of(&lift).k, vec![2, 2, 2]);
        let v = add(&e(2, 0), &e(2, 1));
        assert_eq!(v, vec![1, 1]);
    }
}
