//! Extremal instances: moment-curve circuits of product tensors, pairs of
//! families meeting the rank lower bounds with equality, and a catalog of
//! worked families with their expected properties.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::criteria::{
    check_symmetric_nonrank, flattening_bound, run_check, tensor_rank_lb_mu, tensor_rank_lb_subset,
    waring_rank_lb, BoundMethod, CriterionId, Params, Status,
};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::io::Family;
use crate::linalg::{Matrix, VectorList};
use crate::matroid::is_circuit;
use crate::tensor::{
    family_sum, flattening_rank, k_rank, symmetric_lift, KRankProfile, ProductFamily,
    ProductTensor, SymmetricFamily,
};

pub const DEFAULT_SEED: u64 = 0x6b72_7573;
pub const DEFAULT_ATTEMPTS: usize = 32;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over `F_p`; small integers in `-4..=4` over the rationals.
pub fn random_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Scalar {
    match field.modulus() {
        Some(p) => field.from_u64(rng.gen_range(0..p)),
        None => field.from_i64(rng.gen_range(-4..=4)),
    }
}

pub fn random_vector<R: Rng + ?Sized>(field: Field, dim: usize, rng: &mut R) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..dim).map(|_| random_scalar(field, rng)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// `n` unit-coefficient product tensors with random nonzero factors.
pub fn random_family<R: Rng + ?Sized>(
    field: Field,
    mode_dims: &[usize],
    n: usize,
    rng: &mut R,
) -> Result<ProductFamily> {
    let ts = (0..n)
        .map(|_| {
            ProductTensor::unit(
                field,
                mode_dims
                    .iter()
                    .map(|&d| random_vector(field, d, rng))
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    ProductFamily::new(field, mode_dims.to_vec(), ts)
}

fn random_invertible<R: Rng + ?Sized>(field: Field, d: usize, rng: &mut R) -> Matrix {
    loop {
        let data = (0..d * d).map(|_| random_scalar(field, rng)).collect();
        let g = Matrix::new(field, d, d, data).expect("square");
        if g.rank() == d {
            return g;
        }
    }
}

fn apply(g: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    (0..g.rows())
        .map(|i| {
            g.row(i)
                .iter()
                .zip(v)
                .fold(g.field().zero(), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}

/// `(1, t, ..., t^(d-1))`.
fn moment(field: Field, t: &Scalar, d: usize) -> Vec<Scalar> {
    std::iter::successors(Some(field.one()), |x| Some(x * t))
        .take(d)
        .collect()
}

fn distinct_points<R: Rng + ?Sized>(
    field: Field,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Scalar>> {
    match field.modulus() {
        Some(p) => {
            if (p as u128) < count as u128 {
                return Err(Error::Characteristic {
                    char: p,
                    need: count.saturating_sub(1),
                });
            }
            Ok(rand::seq::index::sample(rng, p as usize, count)
                .into_iter()
                .map(|t| field.from_u64(t as u64))
                .collect())
        }
        None => {
            let span = count as i64 + 2;
            let mut pool: Vec<i64> = (-span..=span).collect();
            pool.shuffle(rng);
            Ok(pool[..count].iter().map(|&t| field.from_i64(t)).collect())
        }
    }
}

fn pad(v: &[Scalar], d: usize, field: Field) -> Vec<Scalar> {
    let mut out = v.to_vec();
    out.resize(d, field.zero());
    out
}

/// Target of a circuit search: `n = sum_j (d_j - 1) + 2` tensors whose mode-`j`
/// factors span `F^{d_j}` with k-rank `d_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitSpec {
    target_dims: Vec<usize>,
    target_n: usize,
    symmetric: bool,
}

impl CircuitSpec {
    pub fn new(target_dims: Vec<usize>, target_n: usize, symmetric: bool) -> Result<CircuitSpec> {
        if target_dims.len() < 2 || target_dims.contains(&0) {
            return Err(Error::InvalidParameter(
                "a circuit needs at least 2 modes of positive dimension".into(),
            ));
        }
        let want = target_dims.iter().map(|d| d - 1).sum::<usize>() + 2;
        if target_n != want {
            return Err(Error::InvalidParameter(format!(
                "target n = {target_n} but the dimensions force n = {want}"
            )));
        }
        if symmetric && target_dims.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::InvalidParameter(
                "a symmetric circuit needs equal mode dimensions".into(),
            ));
        }
        Ok(CircuitSpec {
            target_dims,
            target_n,
            symmetric,
        })
    }

    pub fn for_dims(target_dims: Vec<usize>, symmetric: bool) -> Result<CircuitSpec> {
        let n = target_dims
            .iter()
            .map(|d| d.saturating_sub(1))
            .sum::<usize>()
            + 2;
        CircuitSpec::new(target_dims, n, symmetric)
    }

    pub fn target_dims(&self) -> &[usize] {
        &self.target_dims
    }

    pub fn target_n(&self) -> usize {
        self.target_n
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }
}

/// Recomputes everything a circuit output promises.
pub fn verify_circuit(f: &ProductFamily, spec: &CircuitSpec) -> Result<bool> {
    if f.n() != spec.target_n
        || f.mode_dims() != spec.target_dims.as_slice()
        || !is_circuit(&f.assembled())?
    {
        return Ok(false);
    }
    for (j, &d) in spec.target_dims.iter().enumerate() {
        let v = f.mode_vectors(j);
        if v.span_dim() != d || k_rank(&v)? != d {
            return Ok(false);
        }
    }
    if spec.symmetric
        && !f
            .tensors()
            .iter()
            .all(|t| t.factors().windows(2).all(|w| w[0] == w[1]))
    {
        return Ok(false);
    }
    Ok(true)
}

/// Points on the moment curve pushed through a random change of basis per
/// mode, kept only when [`verify_circuit`] accepts them.
pub fn find_circuit<R: Rng + ?Sized>(
    spec: &CircuitSpec,
    field: Field,
    attempts: usize,
    rng: &mut R,
) -> Result<Option<ProductFamily>> {
    let n = spec.target_n;
    if let Some(p) = field.modulus() {
        if (p as u128) < n as u128 {
            return Err(Error::Characteristic {
                char: p,
                need: n - 1,
            });
        }
    }
    for _ in 0..attempts {
        let ts = distinct_points(field, n, rng)?;
        let gl: Vec<Matrix> = if spec.symmetric {
            vec![random_invertible(field, spec.target_dims[0], rng); spec.target_dims.len()]
        } else {
            spec.target_dims
                .iter()
                .map(|&d| random_invertible(field, d, rng))
                .collect()
        };
        let tensors = ts
            .iter()
            .map(|t| {
                let factors = spec
                    .target_dims
                    .iter()
                    .zip(&gl)
                    .map(|(&d, g)| apply(g, &moment(field, t, d)))
                    .collect();
                ProductTensor::unit(field, factors)
            })
            .collect::<Result<Vec<_>>>();
        let Ok(tensors) = tensors else { continue };
        let f = ProductFamily::new(field, spec.target_dims.clone(), tensors)?;
        if verify_circuit(&f, spec)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Coefficients `c` with `sum_a c_a x_a = 0` for a circuit; all nonzero.
fn circuit_relation(v: &VectorList) -> Result<Vec<Scalar>> {
    let ns = v.as_matrix().nullspace();
    match ns.as_slice() {
        [c] if c.iter().all(|x| !x.is_zero()) => Ok(c.clone()),
        _ => Err(Error::InvalidParameter("input is not a circuit".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SharpnessKind {
    /// Tensor rank bound, with the 0-based mode `i` carrying `mu = 2(d_i - k_i)`.
    Tensor {
        mode: usize,
    },
    Symmetric,
    /// The variant with k-rank `k`; sharp only when `k = d`.
    NearSharpSymmetric {
        k: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessParams {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    /// Span dimensions of `E`; a single entry for symmetric instances.
    pub dims: Vec<usize>,
    pub kranks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<usize>,
}

/// Two families `E` (size `n`) and `F` (size `r`) with equal weighted sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessInstance {
    pub kind: SharpnessKind,
    pub e: ProductFamily,
    pub f: ProductFamily,
    pub e_sym: Option<SymmetricFamily>,
    pub f_sym: Option<SymmetricFamily>,
    pub params: SharpnessParams,
}

impl SharpnessInstance {
    pub fn relation(&self) -> &'static str {
        "sum(E) = sum(F)"
    }

    pub fn is_near_sharp(&self) -> bool {
        matches!(self.kind, SharpnessKind::NearSharpSymmetric { k } if k < self.params.dims[0])
    }

    /// Re-verifies the equal sums and reads the parameters back off `E`.
    pub fn verify(&self) -> Result<bool> {
        let p = &self.params;
        if self.e.n() != p.n
            || self.f.n() != p.r
            || self.e.m() != p.m
            || family_sum(&self.e) != family_sum(&self.f)
        {
            return Ok(false);
        }
        match (&self.e_sym, &self.f_sym) {
            (Some(es), Some(fs)) => {
                let base = es.base();
                Ok(symmetric_lift(es)? == self.e
                    && symmetric_lift(fs)? == self.f
                    && p.dims == [base.span_dim()]
                    && p.kranks == [k_rank(&base)?])
            }
            (None, None) => {
                let prof = KRankProfile::of(&self.e);
                Ok(prof.k == p.kranks && prof.d == p.dims)
            }
            _ => Ok(false),
        }
    }
}

fn max_pair(gaps: &[usize]) -> usize {
    let mut g = gaps.to_vec();
    g.sort_unstable_by(|a, b| b.cmp(a));
    g[0] + g[1]
}

/// Extends a circuit to a pair meeting the mu bound with equality. The
/// circuit's mode-`j` k-rank is `k_j`; `dims` are the targets `d_j` and `mode`
/// is the 0-based index `i` with `mu = 2(d_i - k_i)`.
pub fn build_sharpness_tensor_instance<R: Rng + ?Sized>(
    circuit: &ProductFamily,
    dims: &[usize],
    mode: usize,
    n: usize,
    attempts: usize,
    rng: &mut R,
) -> Result<SharpnessInstance> {
    let field = circuit.field();
    let m = circuit.m();
    if dims.len() != m || mode >= m {
        return Err(Error::DimensionMismatch(format!(
            "need {m} target dimensions and a mode below {m}"
        )));
    }
    let circuit = circuit.with_unit_coeffs();
    let rel = circuit_relation(&circuit.assembled())?;
    let prof = KRankProfile::of(&circuit);
    if prof.k != prof.d {
        return Err(Error::InvalidParameter(
            "circuit factors must have k-rank equal to their span".into(),
        ));
    }
    let k = prof.k;
    let lambda = circuit.n();
    if lambda != k.iter().map(|k| k - 1).sum::<usize>() + 2 {
        return Err(Error::InvalidParameter(format!(
            "circuit size {lambda} does not match its k-ranks"
        )));
    }
    for j in 0..m {
        if circuit.mode_dims()[j] > dims[j] || dims[j] < 2 || dims[j] > n {
            return Err(Error::InvalidParameter(format!(
                "target dimension {} of mode {} is out of range",
                dims[j],
                j + 1
            )));
        }
    }
    let gaps: Vec<usize> = dims.iter().zip(&k).map(|(d, k)| d - k).collect();
    let g = gaps[mode];
    let mu = max_pair(&gaps);
    if mu != 2 * g {
        return Err(Error::InvalidParameter(format!(
            "mu = {mu} but 2(d_i - k_i) = {}",
            2 * g
        )));
    }
    let kmax = *k.iter().max().expect("m >= 2");
    if n < kmax + g + 1 || n > g + lambda {
        return Err(Error::InvalidParameter(format!(
            "n = {n} must lie in {}..={}",
            kmax + g + 1,
            g + lambda
        )));
    }
    let total: usize = k.iter().map(|k| k - 1).sum();
    if let Some(i) = k.iter().position(|&ki| ki > total - (ki - 1) + 1) {
        return Err(Error::InvalidParameter(format!(
            "k-ranks are unbalanced at mode {}",
            i + 1
        )));
    }
    let r = 2 * g + lambda - n;
    if r == 0 {
        return Err(Error::InvalidParameter(
            "the second family would be empty".into(),
        ));
    }
    let split = n - g;
    let padded = |t: &ProductTensor, c: Scalar| {
        ProductTensor::new(
            t.factors()
                .iter()
                .zip(dims)
                .map(|(x, &d)| pad(x, d, field))
                .collect(),
            c,
        )
    };
    let e_core = (0..split)
        .map(|a| padded(circuit.tensor(a), rel[a].clone()))
        .collect::<Result<Vec<_>>>()?;
    let f_core = (split..lambda)
        .map(|a| padded(circuit.tensor(a), -&rel[a]))
        .collect::<Result<Vec<_>>>()?;
    let params = SharpnessParams {
        n,
        r,
        m,
        dims: dims.to_vec(),
        kranks: k,
        lambda: Some(lambda),
        mu: Some(mu),
    };
    for _ in 0..attempts.max(1) {
        let extras = random_family(field, dims, g.max(1), rng)?;
        let extras = &extras.tensors()[..g];
        let build = |core: &[ProductTensor]| {
            ProductFamily::new(
                field,
                dims.to_vec(),
                core.iter().chain(extras).cloned().collect(),
            )
        };
        let inst = SharpnessInstance {
            kind: SharpnessKind::Tensor { mode },
            e: build(&e_core)?,
            f: build(&f_core)?,
            e_sym: None,
            f_sym: None,
            params: params.clone(),
        };
        if inst.verify()? {
            return Ok(inst);
        }
    }
    Err(Error::GenerationFailed(format!(
        "no generic extension found in {} attempts",
        attempts.max(1)
    )))
}

/// Finds a circuit with dims `k` and extends it to targets `dims`.
pub fn sharp_tensor_instance<R: Rng + ?Sized>(
    field: Field,
    dims: &[usize],
    kranks: &[usize],
    mode: usize,
    n: usize,
    attempts: usize,
    rng: &mut R,
) -> Result<SharpnessInstance> {
    let spec = CircuitSpec::for_dims(kranks.to_vec(), false)?;
    let circuit = find_circuit(&spec, field, attempts, rng)?.ok_or_else(|| {
        Error::GenerationFailed(format!(
            "no circuit for k-ranks {kranks:?} in {attempts} attempts"
        ))
    })?;
    build_sharpness_tensor_instance(&circuit, dims, mode, n, attempts, rng)
}

/// `m + 2` points `(1, t_a)` padded to `F^d`, with `sum_a alpha_a v_a^{(x) m} = 0`.
fn symmetric_circuit<R: Rng + ?Sized>(
    field: Field,
    m: usize,
    d: usize,
    rng: &mut R,
) -> Result<(Vec<Vec<Scalar>>, Vec<Scalar>)> {
    let ts = distinct_points(field, m + 2, rng)?;
    let vand: Vec<Vec<Scalar>> = ts.iter().map(|t| moment(field, t, m + 1)).collect();
    let alpha = circuit_relation(&VectorList::new(field, m + 1, vand)?)?;
    let base = ts
        .iter()
        .map(|t| pad(&[field.one(), t.clone()], d, field))
        .collect();
    Ok((base, alpha))
}

fn check_symmetric_field(field: Field, m: usize) -> Result<()> {
    let ch = field.characteristic();
    if ch != 0 && (ch as u128) < (m + 2) as u128 {
        return Err(Error::Characteristic {
            char: ch,
            need: m + 1,
        });
    }
    Ok(())
}

fn symmetric_instance(
    kind: SharpnessKind,
    field: Field,
    m: usize,
    e: (Vec<Vec<Scalar>>, Vec<Scalar>),
    f: (Vec<Vec<Scalar>>, Vec<Scalar>),
) -> Result<SharpnessInstance> {
    let es = SymmetricFamily::new(field, m, e.0, e.1)?;
    let fs = SymmetricFamily::new(field, m, f.0, f.1)?;
    let base = es.base();
    let params = SharpnessParams {
        n: es.n(),
        r: fs.n(),
        m,
        dims: vec![base.span_dim()],
        kranks: vec![k_rank(&base)?],
        lambda: None,
        mu: None,
    };
    Ok(SharpnessInstance {
        kind,
        e: symmetric_lift(&es)?,
        f: symmetric_lift(&fs)?,
        e_sym: Some(es),
        f_sym: Some(fs),
        params,
    })
}

/// Symmetric pair with `n + r = m + 2d - 2`, `dim span E = d` and k-rank at least 2.
pub fn build_sharpness_symmetric_instance<R: Rng + ?Sized>(
    field: Field,
    m: usize,
    d: usize,
    n: usize,
    r: usize,
    attempts: usize,
    rng: &mut R,
) -> Result<SharpnessInstance> {
    if m < 2 || d < 2 || n < d || r + 2 < d || r == 0 || n + r != m + 2 * d - 2 {
        return Err(Error::InvalidParameter(format!(
            "need m >= 2, d >= 2, n >= d, r >= max(1, d - 2) and n + r = m + 2d - 2; got m={m} d={d} n={n} r={r}"
        )));
    }
    check_symmetric_field(field, m)?;
    let cut = n + 2 - d;
    for _ in 0..attempts.max(1) {
        let (v, alpha) = symmetric_circuit(field, m, d, rng)?;
        let extras: Vec<Vec<Scalar>> = (0..d - 2).map(|_| random_vector(field, d, rng)).collect();
        let ones = vec![field.one(); d - 2];
        let e = (
            v[..cut].iter().chain(&extras).cloned().collect(),
            alpha[..cut].iter().cloned().chain(ones.clone()).collect(),
        );
        let f = (
            v[cut..].iter().chain(&extras).cloned().collect(),
            alpha[cut..].iter().map(|a| -a).chain(ones).collect(),
        );
        let inst = symmetric_instance(SharpnessKind::Symmetric, field, m, e, f)?;
        if inst.params.dims == [d] && inst.params.kranks[0] >= 2 && inst.verify()? {
            return Ok(inst);
        }
    }
    Err(Error::GenerationFailed(format!(
        "no generic symmetric instance in {} attempts",
        attempts.max(1)
    )))
}

/// The k-rank `k` variant with `n = d + 1`, `r = m + d - 1`; for `k = d` the
/// summed vector is dropped, giving `n = d`, `r = m + d - 2`. The summed vector
/// adds the first `k` base vectors of `E`.
pub fn build_near_sharp_symmetric_instance<R: Rng + ?Sized>(
    field: Field,
    m: usize,
    d: usize,
    k: usize,
    attempts: usize,
    rng: &mut R,
) -> Result<SharpnessInstance> {
    if m < 2 || k < 3 || k > d {
        return Err(Error::InvalidParameter(format!(
            "need m >= 2 and 3 <= k <= d; got m={m} d={d} k={k}"
        )));
    }
    check_symmetric_field(field, m)?;
    for _ in 0..attempts.max(1) {
        let (v, alpha) = symmetric_circuit(field, m, d, rng)?;
        let extras: Vec<Vec<Scalar>> = (0..d - 2).map(|_| random_vector(field, d, rng)).collect();
        let mut e_base: Vec<Vec<Scalar>> = v[m..].iter().chain(&extras).cloned().collect();
        let mut e_coef: Vec<Scalar> = alpha[m..]
            .iter()
            .cloned()
            .chain(vec![field.one(); d - 2])
            .collect();
        let mut f_base: Vec<Vec<Scalar>> = v[..m].iter().chain(&extras).cloned().collect();
        let mut f_coef: Vec<Scalar> = alpha[..m]
            .iter()
            .map(|a| -a)
            .chain(vec![field.one(); d - 2])
            .collect();
        if k < d {
            let w = e_base[..k].iter().fold(vec![field.zero(); d], |acc, x| {
                acc.iter().zip(x).map(|(a, b)| a + b).collect()
            });
            if w.iter().all(Scalar::is_zero) {
                continue;
            }
            e_base.push(w.clone());
            e_coef.push(field.one());
            f_base.push(w);
            f_coef.push(field.one());
        }
        let inst = symmetric_instance(
            SharpnessKind::NearSharpSymmetric { k },
            field,
            m,
            (e_base, e_coef),
            (f_base, f_coef),
        )?;
        if inst.params.dims == [d] && inst.params.kranks == [k] && inst.verify()? {
            return Ok(inst);
        }
    }
    Err(Error::GenerationFailed(format!(
        "no generic near-sharp instance in {} attempts",
        attempts.max(1)
    )))
}

/// Two-mode family with `k_1 = k_2 = d` whose sum has matrix rank `2d - n`.
pub fn sylvester_tight_instance<R: Rng + ?Sized>(
    field: Field,
    d: usize,
    n: usize,
    attempts: usize,
    rng: &mut R,
) -> Result<ProductFamily> {
    if d == 0 || n < d || n >= 2 * d {
        return Err(Error::InvalidParameter(format!(
            "need d <= n < 2d; got d={d} n={n}"
        )));
    }
    for _ in 0..attempts.max(1) {
        let xs: Vec<Vec<Scalar>> = (0..n).map(|_| random_vector(field, d, rng)).collect();
        let x = Matrix::from_columns(field, d, &xs)?;
        let kernel = x.nullspace();
        if kernel.len() != n - d {
            continue;
        }
        let cols: Vec<Vec<Scalar>> = kernel
            .into_iter()
            .chain((0..2 * d - n).map(|_| random_vector(field, n, rng)))
            .collect();
        let yt = Matrix::from_columns(field, n, &cols)?.mul(&random_invertible(field, d, rng))?;
        let ts: Result<Vec<_>> = (0..n)
            .map(|a| ProductTensor::unit(field, vec![xs[a].clone(), yt.row(a).to_vec()]))
            .collect();
        let Ok(ts) = ts else { continue };
        let f = ProductFamily::new(field, vec![d, d], ts)?;
        let prof = KRankProfile::of(&f);
        if prof.k == [d, d]
            && prof.d == [d, d]
            && flattening_rank(&family_sum(&f), &[d, d], 0)? == 2 * d - n
        {
            return Ok(f);
        }
    }
    Err(Error::GenerationFailed(format!(
        "no tight instance in {} attempts",
        attempts.max(1)
    )))
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|k| i64::from(k == i)).collect()
}

/// `sum_a e_a^{(x) m}` in `(F^n)^{(x) m}`.
pub fn identity_n_m(field: Field, n: usize, m: usize) -> Result<ProductFamily> {
    let ts: Vec<Vec<Vec<i64>>> = (0..n).map(|a| vec![unit(n, a); m]).collect();
    ProductFamily::from_ints(field, &ts)
}

pub fn symmetric_identity(field: Field, n: usize, m: usize) -> Result<SymmetricFamily> {
    let base = (0..n)
        .map(|a| unit(n, a).into_iter().map(|x| field.from_i64(x)).collect())
        .collect();
    SymmetricFamily::unit(field, m, base)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCheck {
    pub criterion: CriterionId,
    #[serde(default)]
    pub params: Params,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedBound {
    pub method: BoundMethod,
    pub status: Status,
    pub value: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub kranks: Option<Vec<usize>>,
    pub dims: Option<Vec<usize>>,
    pub checks: Vec<ExpectedCheck>,
    pub bounds: Vec<ExpectedBound>,
    /// Facts recorded for reference but not asserted.
    pub documented: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub family: Family,
    pub expected: Expected,
}

impl Fixture {
    /// Every expectation that does not hold, as a message.
    pub fn mismatches(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let f = self.family.product()?;
        let prof = KRankProfile::of(&f);
        if let Some(k) = &self.expected.kranks {
            if &prof.k != k {
                out.push(format!("k-ranks {:?}, expected {k:?}", prof.k));
            }
        }
        if let Some(d) = &self.expected.dims {
            if &prof.d != d {
                out.push(format!("dims {:?}, expected {d:?}", prof.d));
            }
        }
        for c in &self.expected.checks {
            let got = match (&self.family, c.criterion) {
                (Family::Symmetric(s), CriterionId::SymmetricNonrank) => {
                    check_symmetric_nonrank(s, Params::require(c.params.r, "r")?)?.status
                }
                _ => run_check(c.criterion, &f, &c.params)?.status,
            };
            if got != c.status {
                out.push(format!("{}: {got}, expected {}", c.criterion, c.status));
            }
        }
        for b in &self.expected.bounds {
            let got = match (b.method, &self.family) {
                (BoundMethod::Subset, _) => tensor_rank_lb_subset(&f, None)?,
                (BoundMethod::Mu, _) => tensor_rank_lb_mu(&f)?,
                (BoundMethod::Flattening, _) => flattening_bound(&f)?,
                (BoundMethod::Waring, Family::Symmetric(s)) => waring_rank_lb(s)?,
                (BoundMethod::Waring, Family::Product(_)) => {
                    out.push("waring bound on a product family".into());
                    continue;
                }
            };
            if got.status != b.status || got.lower_bound != b.value {
                out.push(format!(
                    "{:?} bound {} ({}), expected {} ({})",
                    b.method, got.lower_bound, got.status, b.value, b.status
                ));
            }
        }
        Ok(out)
    }
}

fn check(criterion: CriterionId, status: Status) -> ExpectedCheck {
    ExpectedCheck {
        criterion,
        params: Params::default(),
        status,
    }
}

fn bound(method: BoundMethod, value: usize) -> ExpectedBound {
    ExpectedBound {
        method,
        status: Status::Certified,
        value,
    }
}

fn fixture(name: &str, description: &str, family: Family, expected: Expected) -> Fixture {
    Fixture {
        name: name.into(),
        description: description.into(),
        family,
        expected,
    }
}

fn eight_one() -> ProductFamily {
    let mut ts: Vec<Vec<Vec<i64>>> = (0..4).map(|a| vec![unit(4, a); 3]).collect();
    ts.push(vec![vec![0, 1, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 0, 1]]);
    ProductFamily::from_ints(Field::Rational, &ts).expect("fixed")
}

/// The fixed catalog; every entry carries its expected properties.
pub fn fixture_catalog() -> Vec<Fixture> {
    let q = Field::Rational;
    let s = vec![1, 1, 0];
    let four = ProductFamily::from_ints(
        q,
        &[
            vec![unit(3, 0); 3],
            vec![unit(3, 1); 3],
            vec![s.clone(), s, unit(3, 2)],
            vec![unit(3, 2), unit(3, 2), vec![1, 1, 1]],
        ],
    )
    .expect("fixed");
    let mut indep: Vec<Vec<Vec<i64>>> = (0..4)
        .map(|a| vec![unit(6, a), unit(4, a), unit(4, a)])
        .collect();
    indep.push(vec![unit(6, 4), vec![1, 1, 0, 0], vec![1, 1, 0, 0]]);
    indep.push(vec![unit(6, 5), vec![1, -1, 0, 0], vec![1, -1, 0, 0]]);
    let indep = ProductFamily::from_ints(q, &indep).expect("fixed");
    let nonrank = |q, r| ExpectedCheck {
        criterion: CriterionId::NonrankIrreducible,
        params: Params {
            q: Some(q),
            s: Some(1),
            r: Some(r),
            ..Params::default()
        },
        status: Status::Certified,
    };
    let sym = |r, status| ExpectedCheck {
        criterion: CriterionId::SymmetricNonrank,
        params: Params {
            r: Some(r),
            ..Params::default()
        },
        status,
    };
    vec![
        fixture(
            "example_8_1",
            "four coordinate cubes and (e2+e3)(x)(e2+e4)(x)(e1+e4); certified below the k-rank threshold",
            Family::Product(eight_one()),
            Expected {
                kranks: Some(vec![2, 2, 2]),
                dims: Some(vec![4, 4, 4]),
                checks: vec![
                    check(CriterionId::Kgen, Status::Certified),
                    check(CriterionId::Kruskal, Status::HypothesisFails),
                    check(CriterionId::DlsThreshold, Status::Certified),
                ],
                ..Expected::default()
            },
        ),
        fixture(
            "four_term",
            "rank 4 reached by the mu bound but not by flattenings",
            Family::Product(four),
            Expected {
                bounds: vec![bound(BoundMethod::Mu, 4), bound(BoundMethod::Flattening, 3)],
                ..Expected::default()
            },
        ),
        fixture(
            "five_term",
            "rank 5 from the subset bound while the mu bound gives 4",
            Family::Product(eight_one()),
            Expected { bounds: vec![bound(BoundMethod::Subset, 5), bound(BoundMethod::Mu, 4)], ..Expected::default() },
        ),
        fixture(
            "ex_independent",
            "unbalanced k-ranks where the mu bound does not apply",
            Family::Product(indep),
            Expected {
                kranks: Some(vec![6, 2, 2]),
                dims: Some(vec![6, 4, 4]),
                bounds: vec![ExpectedBound { method: BoundMethod::Mu, status: Status::NotApplicable, value: 1 }],
                documented: vec!["tensor rank of the sum is 5 over the rationals".into()],
                ..Expected::default()
            },
        ),
        fixture(
            "identity_3_3",
            "sum of three coordinate cubes",
            Family::Product(identity_n_m(q, 3, 3).expect("fixed")),
            Expected {
                kranks: Some(vec![3, 3, 3]),
                dims: Some(vec![3, 3, 3]),
                checks: vec![check(CriterionId::Kruskal, Status::Certified), check(CriterionId::Kgen, Status::Certified), nonrank(1, 4)],
                bounds: vec![bound(BoundMethod::Subset, 3), bound(BoundMethod::Mu, 3), bound(BoundMethod::Flattening, 3)],
                ..Expected::default()
            },
        ),
        fixture(
            "identity_2_2",
            "the 2x2 identity matrix",
            Family::Product(identity_n_m(q, 2, 2).expect("fixed")),
            Expected {
                kranks: Some(vec![2, 2]),
                dims: Some(vec![2, 2]),
                bounds: vec![bound(BoundMethod::Flattening, 2)],
                ..Expected::default()
            },
        ),
        fixture(
            "identity_4_4",
            "sum of four coordinate fourth powers",
            Family::Product(identity_n_m(q, 4, 4).expect("fixed")),
            Expected {
                kranks: Some(vec![4; 4]),
                dims: Some(vec![4; 4]),
                checks: vec![check(CriterionId::Kruskal, Status::Certified), nonrank(2, 5)],
                ..Expected::default()
            },
        ),
        fixture(
            "symmetric_identity_3_3",
            "sum of three coordinate cubes as a symmetric family",
            Family::Symmetric(symmetric_identity(q, 3, 3).expect("fixed")),
            Expected {
                checks: vec![sym(3, Status::Certified), sym(4, Status::HypothesisFails)],
                bounds: vec![bound(BoundMethod::Waring, 3)],
                ..Expected::default()
            },
        ),
    ]
}

pub fn fixture_by_name(name: &str) -> Option<Fixture> {
    fixture_catalog().into_iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::check_split_corollary;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn circuit_two_by_two() {
        let mut rng = rng_from_seed(1);
        let spec = CircuitSpec::new(vec![2, 2], 4, false).unwrap();
        let f = find_circuit(&spec, gf(7), 16, &mut rng).unwrap().unwrap();
        assert!(verify_circuit(&f, &spec).unwrap());
        assert_eq!(f.assembled().span_dim(), 3);
    }

    #[test]
    fn circuit_spec_rejects_wrong_n() {
        assert!(CircuitSpec::new(vec![2, 3], 4, false).is_err());
        assert!(CircuitSpec::new(vec![2, 3], 5, true).is_err());
        assert!(CircuitSpec::for_dims(vec![3, 3, 3], true).is_ok());
    }

    #[test]
    fn symmetric_circuit_has_equal_factors() {
        let mut rng = rng_from_seed(2);
        let spec = CircuitSpec::for_dims(vec![3, 3, 3], true).unwrap();
        let f = find_circuit(&spec, gf(101), 8, &mut rng).unwrap().unwrap();
        assert!(f
            .tensors()
            .iter()
            .all(|t| t.factor(0) == t.factor(1) && t.factor(1) == t.factor(2)));
        let cert = check_split_corollary(&f).unwrap();
        assert_eq!(cert.status, Status::HypothesisFails);
    }

    #[test]
    fn rational_circuit() {
        let mut rng = rng_from_seed(3);
        let spec = CircuitSpec::for_dims(vec![2, 3], false).unwrap();
        assert!(find_circuit(&spec, Field::Rational, 8, &mut rng)
            .unwrap()
            .is_some());
    }

    #[test]
    fn small_field_rejected() {
        let spec = CircuitSpec::for_dims(vec![4, 4], false).unwrap();
        assert!(find_circuit(&spec, gf(5), 4, &mut rng_from_seed(0)).is_err());
    }

    #[test]
    fn sharp_tensor_meets_mu_bound() {
        let mut rng = rng_from_seed(4);
        // k = (2,2,2), d = (3,3,2): gaps (1,1,0), mu = 2 = 2 * gap_0, lambda = 5
        let inst =
            sharp_tensor_instance(gf(101), &[3, 3, 2], &[2, 2, 2], 0, 5, 16, &mut rng).unwrap();
        assert!(inst.verify().unwrap());
        assert_eq!(inst.params.r, 2 + 5 - 5);
        let b = tensor_rank_lb_mu(&inst.e).unwrap();
        assert_eq!(b.lower_bound, inst.f.n());
    }

    #[test]
    fn sharp_tensor_degenerate_gap() {
        let mut rng = rng_from_seed(5);
        let inst =
            sharp_tensor_instance(gf(101), &[2, 2, 2], &[2, 2, 2], 0, 3, 16, &mut rng).unwrap();
        assert_eq!(inst.params.r, 5 - 3);
        assert_eq!(tensor_rank_lb_mu(&inst.e).unwrap().lower_bound, 2);
    }

    #[test]
    fn sharp_tensor_rejects_bad_mu() {
        let mut rng = rng_from_seed(6);
        assert!(sharp_tensor_instance(gf(101), &[3, 2, 2], &[2, 2, 2], 0, 5, 4, &mut rng).is_err());
    }

    #[test]
    fn symmetric_d2_instances() {
        let mut rng = rng_from_seed(7);
        for m in 2..=5 {
            for n in 2..=m + 1 {
                let r = m + 2 - n;
                let inst =
                    build_sharpness_symmetric_instance(Field::Rational, m, 2, n, r, 8, &mut rng)
                        .unwrap();
                assert!(inst.verify().unwrap());
                assert_eq!(inst.params.n + inst.params.r, m + 2);
            }
        }
    }

    #[test]
    fn symmetric_boundary_probe() {
        let mut rng = rng_from_seed(8);
        let inst = build_sharpness_symmetric_instance(gf(101), 3, 3, 3, 4, 8, &mut rng).unwrap();
        let e = inst.e_sym.as_ref().unwrap();
        assert_eq!(
            check_symmetric_nonrank(e, 4).unwrap().status,
            Status::HypothesisFails
        );
        assert_eq!(
            check_symmetric_nonrank(e, 3).unwrap().status,
            Status::Certified
        );
    }

    #[test]
    fn near_sharp_variants() {
        let mut rng = rng_from_seed(9);
        let inst = build_near_sharp_symmetric_instance(gf(101), 3, 5, 3, 8, &mut rng).unwrap();
        assert!(inst.is_near_sharp());
        assert_eq!((inst.params.n, inst.params.r), (6, 7));
        assert_eq!(inst.params.kranks, [3]);
        let inst = build_near_sharp_symmetric_instance(gf(101), 3, 4, 4, 8, &mut rng).unwrap();
        assert!(!inst.is_near_sharp());
        assert_eq!(inst.params.n + inst.params.r, 3 + 2 * 4 - 2);
    }

    #[test]
    fn sylvester_tight() {
        let mut rng = rng_from_seed(10);
        for (d, n) in [(2, 3), (3, 4), (3, 5), (4, 6)] {
            let f = sylvester_tight_instance(gf(101), d, n, 8, &mut rng).unwrap();
            assert_eq!(tensor_rank_lb_mu(&f).unwrap().lower_bound, 2 * d - n);
        }
    }

    #[test]
    fn catalog_expectations_hold() {
        for fx in fixture_catalog() {
            assert_eq!(
                fx.mismatches().unwrap(),
                Vec::<String>::new(),
                "{}",
                fx.name
            );
        }
        assert!(fixture_by_name("example_8_1").is_some());
    }
}
