use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::tensor::{family_sum, symmetric_lift, ProductFamily, ProductTensor, SymmetricFamily};

use super::fp::Gf;
use super::{
    canonical_symmetric_terms, canonical_terms, oracle_prime, residues, terms_to_family, Meter,
    SearchBudget, Term,
};

/// Normalized product directions with their assembled coordinates.
pub(crate) struct DirTable {
    g: Gf,
    mode_dims: Vec<usize>,
    factors: Vec<Vec<Vec<u64>>>,
    assembled: Vec<Vec<u64>>,
    lookup: HashMap<Vec<u64>, usize>,
    /// Per-mode points and mixed-radix strides of a product table; empty for
    /// symmetric tables, whose directions are indexed by a single point.
    points: Vec<Vec<Vec<u64>>>,
    point_index: Vec<HashMap<Vec<u64>, usize>>,
    strides: Vec<usize>,
}

/// A mode whose flattening rank equals the number of terms still to place.
/// Every remaining term then has its factor in the column space and the
/// product of its other factors in the row space.
struct Tight {
    mode: usize,
    col_ann: Vec<Vec<u64>>,
    row_ann: Vec<Vec<u64>>,
}

fn projective_count(p: u64, d: usize) -> u64 {
    (p.saturating_pow(d as u32) - 1) / (p - 1)
}

impl DirTable {
    pub fn product(g: Gf, mode_dims: &[usize], meter: &mut Meter) -> Result<DirTable> {
        let total = mode_dims
            .iter()
            .fold(1u64, |acc, &d| acc.saturating_mul(projective_count(g.p, d)));
        meter.tick(total)?;
        let pts: Vec<Vec<Vec<u64>>> = mode_dims.iter().map(|&d| g.projective_points(d)).collect();
        let mut factors: Vec<Vec<Vec<u64>>> = vec![Vec::new()];
        for mode in &pts {
            factors = factors
                .into_iter()
                .flat_map(|pre| {
                    mode.iter().map(move |x| {
                        let mut f = pre.clone();
                        f.push(x.clone());
                        f
                    })
                })
                .collect();
        }
        let mut t = DirTable::from_factors(g, mode_dims.to_vec(), factors);
        t.strides = (0..pts.len())
            .map(|j| pts[j + 1..].iter().map(Vec::len).product())
            .collect();
        t.point_index = pts
            .iter()
            .map(|ps| ps.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect())
            .collect();
        t.points = pts;
        Ok(t)
    }

    pub fn symmetric(g: Gf, d: usize, m: usize, meter: &mut Meter) -> Result<DirTable> {
        meter.tick(projective_count(g.p, d))?;
        let factors = g
            .projective_points(d)
            .into_iter()
            .map(|u| vec![u; m])
            .collect();
        Ok(DirTable::from_factors(g, vec![d; m], factors))
    }

    fn from_factors(g: Gf, mode_dims: Vec<usize>, factors: Vec<Vec<Vec<u64>>>) -> DirTable {
        let assembled: Vec<Vec<u64>> = factors
            .iter()
            .map(|fs| fs.iter().fold(vec![1u64], |acc, x| g.kron(&acc, x)))
            .collect();
        let lookup = assembled
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        DirTable {
            g,
            mode_dims,
            factors,
            assembled,
            lookup,
            points: Vec::new(),
            point_index: Vec::new(),
            strides: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.assembled.len()
    }

    /// Mode-`j` flattening of `v` as `d_j` rows.
    fn flattening(&self, v: &[u64], j: usize) -> Vec<Vec<u64>> {
        let d = self.mode_dims[j];
        let stride: usize = self.mode_dims[j + 1..].iter().product();
        let mut rows = vec![Vec::with_capacity(v.len() / d); d];
        for (idx, &x) in v.iter().enumerate() {
            rows[(idx / stride) % d].push(x);
        }
        rows
    }

    fn tight(&self, rows: Vec<Vec<u64>>, mode: usize) -> Tight {
        let width = rows.first().map_or(0, Vec::len);
        let cols: Vec<Vec<u64>> = (0..width)
            .map(|c| rows.iter().map(|r| r[c]).collect())
            .collect();
        Tight {
            mode,
            col_ann: self.g.nullspace(&cols, rows.len()),
            row_ann: self.g.nullspace(&rows, width),
        }
    }

    fn admits(&self, i: usize, t: &Tight) -> bool {
        let fs = &self.factors[i];
        if t.col_ann.iter().any(|y| self.g.dot(y, &fs[t.mode]) != 0) {
            return false;
        }
        let rest = fs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != t.mode)
            .fold(vec![1u64], |acc, (_, x)| self.g.kron(&acc, x));
        t.row_ann.iter().all(|z| self.g.dot(z, &rest) == 0)
    }

    /// Directions from `min_idx` on that satisfy `t`. On product tables the
    /// last free mode is solved for linearly instead of enumerated.
    fn candidates(&self, t: &Tight, min_idx: usize) -> Vec<usize> {
        let m = self.mode_dims.len();
        if self.strides.is_empty() || m < 2 {
            return (min_idx..self.len())
                .filter(|&i| self.admits(i, t))
                .collect();
        }
        let g = self.g;
        let j = t.mode;
        let own: Vec<usize> = (0..self.points[j].len())
            .filter(|&a| t.col_ann.iter().all(|y| g.dot(y, &self.points[j][a]) == 0))
            .collect();
        let others: Vec<usize> = (0..m).filter(|&i| i != j).collect();
        let (&last, front) = others.split_last().expect("m >= 2");
        let dl = self.mode_dims[last];
        let mut out = Vec::new();
        let mut combo = vec![0usize; front.len()];
        loop {
            let prefix = front
                .iter()
                .zip(&combo)
                .fold(vec![1u64], |acc, (&i, &a)| g.kron(&acc, &self.points[i][a]));
            let forms: Vec<Vec<u64>> = t
                .row_ann
                .iter()
                .map(|z| {
                    (0..dl)
                        .map(|s| {
                            prefix
                                .iter()
                                .enumerate()
                                .fold(0, |acc, (q, &x)| g.add(acc, g.mul(x, z[q * dl + s])))
                        })
                        .collect()
                })
                .collect();
            let base: usize = front
                .iter()
                .zip(&combo)
                .map(|(&i, &a)| a * self.strides[i])
                .sum();
            for u in g.span_points(&g.nullspace(&forms, dl)) {
                let b = self.point_index[last][&u] * self.strides[last];
                out.extend(
                    own.iter()
                        .map(|&a| base + b + a * self.strides[j])
                        .filter(|&i| i >= min_idx),
                );
            }
            let Some(k) = (0..front.len())
                .rev()
                .find(|&k| combo[k] + 1 < self.points[front[k]].len())
            else {
                break;
            };
            combo[k] += 1;
            combo[k + 1..].iter_mut().for_each(|x| *x = 0);
        }
        out.sort_unstable();
        out
    }

    fn as_direction(&self, v: &[u64]) -> Option<(usize, u64)> {
        let (n, lead) = self.g.normalize(v)?;
        self.lookup.get(&n).map(|&i| (i, lead))
    }

    fn term(&self, (i, c): (usize, u64)) -> Term {
        Term {
            factors: self.factors[i].clone(),
            coeff: c,
        }
    }

    /// Visits every decomposition of `target` into at most `max_terms` terms
    /// with distinct directions and nonzero coefficients, each exactly once.
    /// The visitor returns true to stop; the result says whether it did.
    pub fn decompositions(
        &self,
        target: &[u64],
        max_terms: usize,
        meter: &mut Meter,
        visit: &mut dyn FnMut(&[Term]) -> bool,
    ) -> Result<bool> {
        if target.iter().all(|&x| x == 0) && visit(&[]) {
            return Ok(true);
        }
        let mut chosen = Vec::new();
        self.go(target, max_terms, 0, &mut chosen, meter, visit)
    }

    fn go(
        &self,
        rem: &[u64],
        left: usize,
        min_idx: usize,
        chosen: &mut Vec<(usize, u64)>,
        meter: &mut Meter,
        visit: &mut dyn FnMut(&[Term]) -> bool,
    ) -> Result<bool> {
        if left == 0 {
            return Ok(false);
        }
        meter.tick(1)?;
        let flats: Vec<Vec<Vec<u64>>> = (0..self.mode_dims.len())
            .map(|j| self.flattening(rem, j))
            .collect();
        let ranks: Vec<usize> = flats.iter().map(|f| self.g.rank(f.clone())).collect();
        if ranks.iter().any(|&r| r > left) {
            return Ok(false);
        }
        if let Some((i, c)) = self.as_direction(rem) {
            if i >= min_idx {
                chosen.push((i, c));
                let terms: Vec<Term> = chosen.iter().map(|&t| self.term(t)).collect();
                chosen.pop();
                if visit(&terms) {
                    return Ok(true);
                }
            }
        }
        if left < 2 {
            return Ok(false);
        }
        let tight: Vec<Tight> = flats
            .into_iter()
            .enumerate()
            .filter(|&(j, _)| ranks[j] == left)
            .map(|(j, f)| self.tight(f, j))
            .collect();
        let candidates: Vec<usize> = match tight.split_first() {
            Some((t, rest)) => {
                let mut c = self.candidates(t, min_idx);
                c.retain(|&i| rest.iter().all(|t| self.admits(i, t)));
                c
            }
            None => (min_idx..self.len()).collect(),
        };
        for i in candidates {
            for c in 1..self.g.p {
                meter.tick(1)?;
                let next = self.g.axpy_neg(rem, c, &self.assembled[i]);
                if next.iter().all(|&x| x == 0) {
                    continue;
                }
                chosen.push((i, c));
                let stop = self.go(&next, left - 1, i + 1, chosen, meter, visit)?;
                chosen.pop();
                if stop {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

fn prime_of(v: &[Scalar]) -> Result<u64> {
    let f = v
        .first()
        .map(Scalar::field)
        .ok_or_else(|| Error::Empty("empty tensor".into()))?;
    oracle_prime(f)
}

fn check_len(v: &[Scalar], mode_dims: &[usize]) -> Result<()> {
    if v.len() != mode_dims.iter().product::<usize>() {
        return Err(Error::DimensionMismatch(format!(
            "tensor of length {} for mode dims {mode_dims:?}",
            v.len()
        )));
    }
    Ok(())
}

/// One representative per projective class of product tensors.
pub fn enumerate_product_directions(
    mode_dims: &[usize],
    field: Field,
    budget: &SearchBudget,
) -> Result<Vec<ProductTensor>> {
    let g = Gf {
        p: oracle_prime(field)?,
    };
    let table = DirTable::product(g, mode_dims, &mut Meter::new(budget))?;
    table
        .factors
        .iter()
        .map(|fs| {
            Term {
                factors: fs.clone(),
                coeff: 1,
            }
            .to_tensor(field)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub p: u64,
    /// Exact rank, when found within the budget.
    pub rank: Option<usize>,
    /// Proven lower bound; equals `rank` when that is known.
    pub lower_bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Vec<Term>>,
    pub candidates: u64,
    /// Whether the candidate or time budget ran out.
    pub exhausted: bool,
    pub budget: SearchBudget,
}

/// Exact tensor rank over `F_p`, trying `r = 1, 2, ..` up to `budget.max_rank`.
pub fn brute_force_rank(
    v: &[Scalar],
    mode_dims: &[usize],
    budget: &SearchBudget,
) -> Result<RankReport> {
    check_len(v, mode_dims)?;
    let p = prime_of(v)?;
    let g = Gf { p };
    let target = residues(v);
    let mut report = RankReport {
        p,
        rank: None,
        lower_bound: 0,
        decomposition: None,
        candidates: 0,
        exhausted: false,
        budget: *budget,
    };
    if target.iter().all(|&x| x == 0) {
        report.rank = Some(0);
        report.decomposition = Some(Vec::new());
        return Ok(report);
    }
    report.lower_bound = 1;
    let mut meter = Meter::new(budget);
    let table = match DirTable::product(g, mode_dims, &mut meter) {
        Ok(t) => t,
        Err(Error::BudgetExceeded { used, .. }) => {
            report.candidates = used;
            report.exhausted = true;
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    for r in 1..=budget.max_rank {
        let mut found = None;
        let res = table.decompositions(&target, r, &mut meter, &mut |ts| {
            found = Some(ts.to_vec());
            true
        });
        report.candidates = meter.used();
        match res {
            Ok(_) => {}
            Err(Error::BudgetExceeded { .. }) => {
                report.exhausted = true;
                return Ok(report);
            }
            Err(e) => return Err(e),
        }
        if let Some(ts) = found {
            report.rank = Some(ts.len());
            report.lower_bound = ts.len();
            report.decomposition = Some(ts);
            return Ok(report);
        }
        report.lower_bound = r + 1;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSet {
    pub p: u64,
    pub mode_dims: Vec<usize>,
    pub target: Vec<u64>,
    pub r: usize,
    /// Each solution lists its terms in sorted order; solutions are sorted.
    pub solutions: Vec<Vec<Term>>,
    pub candidates: u64,
}

impl DecompositionSet {
    pub fn families(&self) -> Result<Vec<ProductFamily>> {
        self.solutions
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| terms_to_family(self.p, &self.mode_dims, s))
            .collect()
    }
}

/// Every decomposition of `v` into at most `r` product terms with pairwise
/// distinct directions.
pub fn all_decompositions(
    v: &[Scalar],
    mode_dims: &[usize],
    r: usize,
    budget: &SearchBudget,
) -> Result<DecompositionSet> {
    check_len(v, mode_dims)?;
    let p = prime_of(v)?;
    let g = Gf { p };
    let target = residues(v);
    let mut meter = Meter::new(budget);
    let table = DirTable::product(g, mode_dims, &mut meter)?;
    let mut solutions = Vec::new();
    table.decompositions(&target, r, &mut meter, &mut |ts| {
        let mut ts = ts.to_vec();
        ts.sort();
        solutions.push(ts);
        false
    })?;
    solutions.sort();
    Ok(DecompositionSet {
        p,
        mode_dims: mode_dims.to_vec(),
        target,
        r,
        solutions,
        candidates: meter.used(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub p: u64,
    pub r_max: usize,
    pub unique: bool,
    /// A decomposition into at most `r_max` terms that differs from the input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternative: Option<Vec<Term>>,
    pub symmetric: bool,
    pub candidates: u64,
    pub budget: SearchBudget,
}

/// Whether the sum of `f` has no decomposition into at most `r_max` terms
/// other than `f` itself, as a multiset of tensors.
pub fn uniqueness_bruteforce(
    f: &ProductFamily,
    r_max: usize,
    budget: &SearchBudget,
) -> Result<UniquenessReport> {
    let p = oracle_prime(f.field())?;
    let g = Gf { p };
    let own = canonical_terms(g, f);
    let target = residues(&family_sum(f));
    let mut meter = Meter::new(budget);
    let table = DirTable::product(g, f.mode_dims(), &mut meter)?;
    let mut alternative = None;
    table.decompositions(&target, r_max, &mut meter, &mut |ts| {
        let mut ts = ts.to_vec();
        ts.sort();
        if ts != own {
            alternative = Some(ts);
            return true;
        }
        false
    })?;
    Ok(UniquenessReport {
        p,
        r_max,
        unique: alternative.is_none(),
        alternative,
        symmetric: false,
        candidates: meter.used(),
        budget: *budget,
    })
}

/// Symmetric variant: candidates are symmetric terms `beta u^{(x)m}`, and
/// decompositions whose vectors `u_a` have k-rank 1 (a single term or a
/// parallel pair) are exempt.
pub fn uniqueness_symmetric(
    s: &SymmetricFamily,
    r_max: usize,
    budget: &SearchBudget,
) -> Result<UniquenessReport> {
    let p = oracle_prime(s.field())?;
    let g = Gf { p };
    let own = canonical_symmetric_terms(g, s);
    let target = residues(&family_sum(&symmetric_lift(s)?));
    let mut meter = Meter::new(budget);
    let table = DirTable::symmetric(g, s.dim(), s.m(), &mut meter)?;
    let mut alternative = None;
    // distinct directions make every candidate with two or more terms pairwise non-parallel
    table.decompositions(&target, r_max, &mut meter, &mut |ts| {
        if ts.len() == 1 {
            return false;
        }
        let mut ts = ts.to_vec();
        ts.sort();
        if ts != own {
            alternative = Some(ts);
            return true;
        }
        false
    })?;
    Ok(UniquenessReport {
        p,
        r_max,
        unique: alternative.is_none(),
        alternative,
        symmetric: true,
        candidates: meter.used(),
        budget: *budget,
    })
}
