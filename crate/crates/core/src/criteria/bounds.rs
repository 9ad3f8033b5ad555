//! Lower bounds on tensor rank and Waring rank.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    family_sum, flattening_rank, k_rank_lenient, symmetric_lift, DimTable, KRankProfile,
    ProductFamily, SymmetricFamily,
};

use super::{excess_plus_one, Status, SubsetRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    /// Subset inequalities `|S| + min(|S|, r) <= sum_j (d_j^S - 1) + 1`.
    Subset,
    /// The k-rank bound corrected by `mu`, under the balance condition.
    Mu,
    Waring,
    Flattening,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub method: BoundMethod,
    pub status: Status,
    pub lower_bound: usize,
    /// The bound before clamping to `[0, n]` and raising to 1 for nonzero sums.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_value: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub k: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub d: Vec<usize>,
    /// `min(n, sum_j (k_j - 1) + 2 - n)`, implied by the subset bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_rank_form: Option<i64>,
    /// The subset that stops `r` from growing further.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocking: Option<SubsetRecord>,
    /// 1-based mode violating the balance condition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violating_mode: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundResult {
    fn new(method: BoundMethod, lower_bound: usize) -> BoundResult {
        BoundResult {
            method,
            status: Status::Certified,
            lower_bound,
            raw_value: None,
            mu: None,
            lambda: None,
            k: Vec::new(),
            d: Vec::new(),
            k_rank_form: None,
            blocking: None,
            violating_mode: None,
            notes: Vec::new(),
        }
    }
}

fn is_nonzero(f: &ProductFamily) -> bool {
    family_sum(f).iter().any(|x| !x.is_zero())
}

/// `max(raw, 0)`, raised to 1 when the tensor is nonzero.
fn settle(raw: i64, nonzero: bool) -> usize {
    let b = raw.max(0) as usize;
    if nonzero {
        b.max(1)
    } else {
        b
    }
}

/// The bound for a family with one term, whose sum is a nonzero product tensor.
pub fn single_term_bound(method: BoundMethod) -> BoundResult {
    let mut out = BoundResult::new(method, 1);
    out.raw_value = Some(1);
    out.notes.push("single product tensor".into());
    out
}

fn require_pair(f: &ProductFamily) -> Result<()> {
    if f.n() < 2 {
        return Err(Error::InvalidParameter(format!(
            "rank bounds need n >= 2, got {}",
            f.n()
        )));
    }
    Ok(())
}

/// Largest `r + 1` such that `|S| + min(|S|, r) <= sum_j (d_j^S - 1) + 1`
/// for all `S` with `|S| >= 2`.
pub fn tensor_rank_lb_subset(f: &ProductFamily, cap: Option<usize>) -> Result<BoundResult> {
    require_pair(f)?;
    let n = f.n();
    let dt = DimTable::with_cap(f, cap);
    let mut best = n as i64 - 1;
    let mut blocking = None;
    for s in dt.subsets(2, n)? {
        let dims = dt.dims(s);
        let size = s.len() as i64;
        let rhs = excess_plus_one(&dims);
        if 2 * size > rhs && rhs - size < best {
            best = rhs - size;
            blocking = Some(SubsetRecord::new(
                s,
                dims,
                (size + (rhs - size + 1).min(size), rhs),
            ));
        }
    }
    let prof = KRankProfile::of(f);
    let k_form = (n as i64).min(prof.k.iter().map(|&k| k as i64 - 1).sum::<i64>() + 2 - n as i64);
    let mut out = BoundResult::new(BoundMethod::Subset, settle(best + 1, is_nonzero(f)));
    out.raw_value = Some(best + 1);
    out.k = prof.k;
    out.d = prof.d;
    out.k_rank_form = Some(k_form);
    out.blocking = blocking;
    if best < 0 {
        out.notes
            .push("no r satisfies the subset inequalities".into());
    }
    Ok(out)
}

/// `min(n, mu + sum_j (k_j - 1) + 2 - n)` when every `k_i <= sum_{j != i} (k_j - 1) + 1`.
pub fn tensor_rank_lb_mu(f: &ProductFamily) -> Result<BoundResult> {
    require_pair(f)?;
    if f.m() < 2 {
        return Err(Error::InvalidParameter(format!(
            "the mu bound needs m >= 2, got {}",
            f.m()
        )));
    }
    let n = f.n() as i64;
    let prof = KRankProfile::of(f);
    let ks: Vec<i64> = prof.k.iter().map(|&k| k as i64).collect();
    let ds: Vec<i64> = prof.d.iter().map(|&d| d as i64).collect();
    let total: i64 = ks.iter().map(|k| k - 1).sum();
    let lambda = total + 2;
    let mut out = BoundResult::new(BoundMethod::Mu, 0);
    out.k = prof.k.clone();
    out.d = prof.d.clone();
    out.lambda = Some(lambda);
    if let Some(i) = ks.iter().position(|&k| k > total - (k - 1) + 1) {
        out.status = Status::NotApplicable;
        out.violating_mode = Some(i + 1);
        out.lower_bound = settle(0, is_nonzero(f));
        out.notes
            .push(format!("mode {} violates the balance condition", i + 1));
        return Ok(out);
    }
    let gap: Vec<i64> = ds.iter().zip(&ks).map(|(d, k)| d - k).collect();
    let mu = (0..gap.len())
        .flat_map(|i| (0..gap.len()).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| gap[i] + gap[j])
        .max()
        .expect("m >= 2");
    let raw = n.min(mu + lambda - n);
    out.mu = Some(mu);
    out.raw_value = Some(raw);
    out.lower_bound = settle(raw, is_nonzero(f));
    Ok(out)
}

/// `min(n, 2d + (m - 2)(k - 1) - n)` for a symmetric family.
pub fn waring_rank_lb(s: &SymmetricFamily) -> Result<BoundResult> {
    let n = s.n() as i64;
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "rank bounds need n >= 2, got {n}"
        )));
    }
    let base = s.base();
    let (d, k) = (base.span_dim(), k_rank_lenient(&base));
    let raw = n.min(2 * d as i64 + (s.m() as i64 - 2) * (k as i64 - 1) - n);
    let lifted = symmetric_lift(s)?;
    let mut out = BoundResult::new(BoundMethod::Waring, settle(raw, is_nonzero(&lifted)));
    out.raw_value = Some(raw);
    out.k = vec![k];
    out.d = vec![d];
    Ok(out)
}

/// The largest flattening rank of the sum.
pub fn flattening_bound(f: &ProductFamily) -> Result<BoundResult> {
    let v = family_sum(f);
    let ranks = (0..f.m())
        .map(|j| flattening_rank(&v, f.mode_dims(), j))
        .collect::<Result<Vec<_>>>()?;
    let mut out = BoundResult::new(
        BoundMethod::Flattening,
        ranks.iter().copied().max().unwrap_or(0),
    );
    out.d = ranks;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn e(n: usize, i: usize) -> Vec<i64> {
        (0..n).map(|k| i64::from(k == i)).collect()
    }

    fn fam(ts: &[Vec<Vec<i64>>]) -> ProductFamily {
        ProductFamily::from_ints(Field::Rational, ts).unwrap()
    }

    fn five_term() -> ProductFamily {
        let mut ts: Vec<Vec<Vec<i64>>> = (0..4).map(|a| vec![e(4, a); 3]).collect();
        ts.push(vec![vec![0, 1, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 0, 1]]);
        fam(&ts)
    }

    fn four_term() -> ProductFamily {
        let s = vec![1, 1, 0];
        fam(&[
            vec![e(3, 0); 3],
            vec![e(3, 1); 3],
            vec![s.clone(), s.clone(), e(3, 2)],
            vec![e(3, 2), e(3, 2), vec![1, 1, 1]],
        ])
    }

    #[test]
    fn single_term_is_one() {
        let b = single_term_bound(BoundMethod::Mu);
        assert_eq!((b.status, b.lower_bound), (Status::Certified, 1));
        assert!(tensor_rank_lb_subset(&fam(&[vec![e(2, 0), e(3, 1)]]), None).is_err());
    }

    #[test]
    fn subset_bound_examples() {
        let b = tensor_rank_lb_subset(&five_term(), None).unwrap();
        assert_eq!(b.lower_bound, 5);
        assert!(b.blocking.is_none());
        let b = tensor_rank_lb_subset(&four_term(), None).unwrap();
        assert!(b.lower_bound < 4);
        assert_eq!(b.blocking.unwrap().subset, vec![1, 2, 3]);
    }

    #[test]
    fn mu_bound_examples() {
        let b = tensor_rank_lb_mu(&four_term()).unwrap();
        assert_eq!((b.status, b.lower_bound), (Status::Certified, 4));
        let b = tensor_rank_lb_mu(&five_term()).unwrap();
        assert_eq!(b.lower_bound, 4);
    }

    #[test]
    fn mu_bound_unbalanced() {
        let u = vec![1, 1, 0, 0, 0, 0];
        let w = vec![1, -1, 0, 0, 0, 0];
        let mut ts: Vec<Vec<Vec<i64>>> = (0..4).map(|a| vec![e(6, a); 3]).collect();
        ts.push(vec![e(6, 4), u.clone(), u]);
        ts.push(vec![e(6, 5), w.clone(), w]);
        let b = tensor_rank_lb_mu(&fam(&ts)).unwrap();
        assert_eq!(b.status, Status::NotApplicable);
        assert_eq!(b.violating_mode, Some(1));
    }

    #[test]
    fn waring_examples() {
        let f = Field::Rational;
        for n in 2..5 {
            for m in 2..5 {
                let base = (0..n)
                    .map(|a| (0..n).map(|i| f.from_i64(i64::from(i == a))).collect())
                    .collect();
                let s = SymmetricFamily::unit(f, m, base).unwrap();
                assert_eq!(waring_rank_lb(&s).unwrap().lower_bound, n);
            }
        }
        let v = |a: i64, b: i64, c: i64| vec![f.from_i64(a), f.from_i64(b), f.from_i64(c)];
        let s = SymmetricFamily::unit(f, 3, vec![v(1, 0, 0), v(0, 1, 0), v(1, 1, 0), v(0, 0, 1)])
            .unwrap();
        // n = 4, d = 3, k = 2
        assert_eq!(waring_rank_lb(&s).unwrap().raw_value, Some(3));
    }

    #[test]
    fn flattening_of_identity() {
        let ts: Vec<Vec<Vec<i64>>> = (0..3).map(|a| vec![e(3, a); 3]).collect();
        assert_eq!(flattening_bound(&fam(&ts)).unwrap().lower_bound, 3);
        assert_eq!(flattening_bound(&four_term()).unwrap().lower_bound, 3);
    }
}
