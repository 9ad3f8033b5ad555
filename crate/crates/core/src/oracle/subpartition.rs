use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::subset::{subsets_by_size, Subset};
use crate::tensor::{family_sum, ProductFamily};

use super::fp::Gf;
use super::search::DirTable;
use super::{oracle_prime, residues, Meter, SearchBudget};

/// Largest `n + r` for the subpartition searches.
pub const MAX_SUBPARTITION_TERMS: usize = 16;

/// Blocks `Q_p` of the first decomposition matched with blocks `R_p` of the
/// second; labels are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubpartitionWitness {
    pub q_blocks: Vec<Vec<usize>>,
    pub r_blocks: Vec<Vec<usize>>,
    pub s: usize,
    pub l: usize,
}

impl SubpartitionWitness {
    /// Checks the block sizes, disjointness and block sums against the families.
    pub fn verify(&self, fx: &ProductFamily, fy: &ProductFamily) -> bool {
        let ok_sizes = self.q_blocks.len() == self.l
            && self.r_blocks.len() == self.l
            && self
                .q_blocks
                .iter()
                .zip(&self.r_blocks)
                .all(|(q, r)| r.len().max(1) <= q.len() && q.len() <= self.s);
        let disjoint = |blocks: &[Vec<usize>]| {
            let mut seen = Vec::new();
            blocks.iter().flatten().all(|&a| {
                let fresh = !seen.contains(&a);
                seen.push(a);
                fresh
            })
        };
        if !ok_sizes || !disjoint(&self.q_blocks) || !disjoint(&self.r_blocks) {
            return false;
        }
        let (Ok(wx), Ok(wy)) = (weighted(fx), weighted(fy)) else {
            return false;
        };
        self.q_blocks.iter().zip(&self.r_blocks).all(|(q, r)| {
            let idx = |b: &[usize]| b.iter().map(|&a| a.wrapping_sub(1)).collect::<Vec<_>>();
            let (q, r) = (idx(q), idx(r));
            if q.iter().any(|&a| a >= wx.len()) || r.iter().any(|&a| a >= wy.len()) {
                return false;
            }
            block_sum(&wx, Subset::from_indices(&q), fx)
                == block_sum(&wy, Subset::from_indices(&r), fy)
        })
    }
}

fn weighted(f: &ProductFamily) -> Result<Vec<Vec<Scalar>>> {
    Ok(f.tensors().iter().map(|t| t.assemble()).collect())
}

fn block_sum(w: &[Vec<Scalar>], s: Subset, f: &ProductFamily) -> Vec<Scalar> {
    let mut acc = vec![f.field().zero(); f.ambient_dim()];
    for a in s.iter() {
        for (x, y) in acc.iter_mut().zip(&w[a]) {
            *x = &*x + y;
        }
    }
    acc
}

fn check_pair(fx: &ProductFamily, fy: &ProductFamily) -> Result<()> {
    if fx.field() != fy.field() {
        return Err(Error::FieldMismatch);
    }
    if fx.mode_dims() != fy.mode_dims() {
        return Err(Error::DimensionMismatch(
            "the two decompositions live in different spaces".into(),
        ));
    }
    if fx.n() + fy.n() > MAX_SUBPARTITION_TERMS {
        return Err(Error::InvalidParameter(format!(
            "n + r = {} exceeds {MAX_SUBPARTITION_TERMS}",
            fx.n() + fy.n()
        )));
    }
    if family_sum(fx) != family_sum(fy) {
        return Err(Error::InvalidParameter(
            "the two decompositions have different sums".into(),
        ));
    }
    Ok(())
}

/// Block sums of every subset of `fy` up to size `hi`, keyed by the sum.
fn sums_by_value(
    fy: &ProductFamily,
    hi: usize,
    meter: &mut Meter,
) -> Result<HashMap<Vec<Scalar>, Vec<Subset>>> {
    let wy = weighted(fy)?;
    let mut map: HashMap<Vec<Scalar>, Vec<Subset>> = HashMap::new();
    for r in subsets_by_size(fy.n(), 0, hi.min(fy.n())) {
        meter.tick(1)?;
        map.entry(block_sum(&wy, r, fy)).or_default().push(r);
    }
    Ok(map)
}

/// Searches for an `(s, l)`-subpartition of the pair `(fx, fy)`: disjoint
/// `Q_1..Q_l` and disjoint `R_1..R_l` with `max(1, |R_p|) <= |Q_p| <= s` and
/// equal weighted block sums.
pub fn subpartition_verify(
    fx: &ProductFamily,
    fy: &ProductFamily,
    s: usize,
    l: usize,
    budget: &SearchBudget,
) -> Result<Option<SubpartitionWitness>> {
    check_pair(fx, fy)?;
    if s == 0 || l == 0 {
        return Err(Error::InvalidParameter("s and l must be positive".into()));
    }
    let mut meter = Meter::new(budget);
    let map = sums_by_value(fy, s, &mut meter)?;
    let wx = weighted(fx)?;
    let mut pairs: Vec<(Subset, Subset)> = Vec::new();
    for q in subsets_by_size(fx.n(), 1, s.min(fx.n())) {
        meter.tick(1)?;
        if let Some(rs) = map.get(&block_sum(&wx, q, fx)) {
            pairs.extend(rs.iter().filter(|r| r.len() <= q.len()).map(|&r| (q, r)));
        }
    }
    let mut chosen = Vec::new();
    if pack(
        &pairs,
        0,
        l,
        Subset::empty(),
        Subset::empty(),
        &mut chosen,
        &mut meter,
    )? {
        let blocks = |f: fn(&(Subset, Subset)) -> Subset| {
            chosen.iter().map(|&i| f(&pairs[i]).labels()).collect()
        };
        return Ok(Some(SubpartitionWitness {
            q_blocks: blocks(|p| p.0),
            r_blocks: blocks(|p| p.1),
            s,
            l,
        }));
    }
    Ok(None)
}

fn pack(
    pairs: &[(Subset, Subset)],
    from: usize,
    need: usize,
    used_q: Subset,
    used_r: Subset,
    chosen: &mut Vec<usize>,
    meter: &mut Meter,
) -> Result<bool> {
    if need == 0 {
        return Ok(true);
    }
    for i in from..pairs.len() {
        meter.tick(1)?;
        let (q, r) = pairs[i];
        if !q.intersection(used_q).is_empty() || !r.intersection(used_r).is_empty() {
            continue;
        }
        chosen.push(i);
        if pack(
            pairs,
            i + 1,
            need - 1,
            used_q.union(q),
            used_r.union(r),
            chosen,
            meter,
        )? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Subsets `Q`, `R` (1-based) with `|Q| > |R|` and equal weighted sums, if
/// the pair is reducible.
pub fn reducibility_witness(
    fx: &ProductFamily,
    fy: &ProductFamily,
    budget: &SearchBudget,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    check_pair(fx, fy)?;
    let mut meter = Meter::new(budget);
    let map = sums_by_value(fy, fy.n(), &mut meter)?;
    let wx = weighted(fx)?;
    for q in subsets_by_size(fx.n(), 1, fx.n()) {
        meter.tick(1)?;
        if let Some(rs) = map.get(&block_sum(&wx, q, fx)) {
            if let Some(r) = rs.iter().find(|r| r.len() < q.len()) {
                return Ok(Some((q.labels(), r.labels())));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficientSubset {
    pub subset: Vec<usize>,
    /// Rank of the weighted subset sum; below the requested threshold.
    pub rank: usize,
    pub checked: u64,
}

/// First `S` with `r_tilde <= |S| <= n - 1` whose weighted sum has tensor
/// rank below `r_tilde` over `F_p`.
pub fn rank_deficient_subset_search(
    f: &ProductFamily,
    r_tilde: usize,
    budget: &SearchBudget,
) -> Result<Option<DeficientSubset>> {
    let n = f.n();
    if r_tilde == 0 || r_tilde >= n {
        return Err(Error::InvalidParameter(format!(
            "r_tilde = {r_tilde} must lie in 1..={}",
            n.saturating_sub(1)
        )));
    }
    let g = Gf {
        p: oracle_prime(f.field())?,
    };
    let mut meter = Meter::new(budget);
    let table = DirTable::product(g, f.mode_dims(), &mut meter)?;
    let w: Vec<Vec<u64>> = f
        .tensors()
        .iter()
        .map(|t| residues(&t.assemble()))
        .collect();
    for s in subsets_by_size(n, r_tilde, n - 1) {
        let mut v = vec![0u64; f.ambient_dim()];
        for a in s.iter() {
            v = v.iter().zip(&w[a]).map(|(&x, &y)| g.add(x, y)).collect();
        }
        for k in 0..r_tilde {
            if table.decompositions(&v, k, &mut meter, &mut |_| true)? {
                return Ok(Some(DeficientSubset {
                    subset: s.labels(),
                    rank: k,
                    checked: meter.used(),
                }));
            }
        }
    }
    Ok(None)
}
