//! Conditions that quantify over every coefficient vector `alpha`, checked by
//! enumerating `F_p^n` projectively.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::subsets_by_size;
use crate::tensor::ProductFamily;

use super::fp::Gf;
use super::{oracle_prime, residues, Meter, SearchBudget};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaViolation {
    pub alpha: Vec<u64>,
    pub weight: usize,
    pub rank: usize,
    pub bound: usize,
}

/// Outcome of a rank condition `rank[sum_a alpha_a x_a,i (x) x_a,j] >= min(w(alpha), t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankConditionReport {
    pub p: u64,
    /// 1-based mode that plays the first role.
    pub pivot: usize,
    pub holds: bool,
    /// 1-based mode whose k-rank must be at least 2, with that k-rank.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<(usize, usize)>,
    /// 1-based modes of the matrices whose ranks are tested.
    pub modes: (usize, usize),
    pub threshold: i64,
    pub checked: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<AlphaViolation>,
    pub budget: SearchBudget,
}

struct Modes {
    g: Gf,
    n: usize,
    x: Vec<Vec<Vec<u64>>>,
    roles: [usize; 3],
}

impl Modes {
    fn new(f: &ProductFamily, pivot: usize) -> Result<Modes> {
        if f.m() != 3 {
            return Err(Error::InvalidParameter(format!(
                "the condition needs three modes, got {}",
                f.m()
            )));
        }
        if pivot >= 3 {
            return Err(Error::InvalidParameter(format!(
                "pivot mode {} is not in 1..=3",
                pivot + 1
            )));
        }
        let g = Gf {
            p: oracle_prime(f.field())?,
        };
        let x = (0..3)
            .map(|j| f.tensors().iter().map(|t| residues(t.factor(j))).collect())
            .collect();
        let mut roles = [pivot, 0, 0];
        for (i, j) in (0..3).filter(|&j| j != pivot).enumerate() {
            roles[i + 1] = j;
        }
        Ok(Modes {
            g,
            n: f.n(),
            x,
            roles,
        })
    }

    fn d(&self, j: usize) -> usize {
        self.g.rank(self.x[j].clone())
    }

    fn k(&self, j: usize) -> usize {
        self.g.k_rank(&self.x[j])
    }
}

/// Calls `visit` on one representative of each line in `F_p^n` (first nonzero
/// entry 1); stops when it returns true.
fn projective_alphas(
    g: Gf,
    n: usize,
    meter: &mut Meter,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) -> Result<bool> {
    for pt in g.projective_points_iter(n) {
        meter.tick(1)?;
        if visit(&pt) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn weighted_matrix(g: Gf, alpha: &[u64], left: &[Vec<u64>], right: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let rows = left.first().map_or(0, Vec::len);
    let cols = right.first().map_or(0, Vec::len);
    let mut m = vec![vec![0u64; cols]; rows];
    for ((&a, l), r) in alpha.iter().zip(left).zip(right) {
        if a == 0 {
            continue;
        }
        for (i, &li) in l.iter().enumerate() {
            if li == 0 {
                continue;
            }
            let s = g.mul(a, li);
            for (j, &rj) in r.iter().enumerate() {
                m[i][j] = g.add(m[i][j], g.mul(s, rj));
            }
        }
    }
    m
}

fn rank_condition(
    md: &Modes,
    pivot: usize,
    gate: Option<usize>,
    pair: (usize, usize),
    threshold: i64,
    budget: &SearchBudget,
) -> Result<RankConditionReport> {
    let g = md.g;
    let mut report = RankConditionReport {
        p: g.p,
        pivot: pivot + 1,
        holds: true,
        gate: None,
        modes: (pair.0 + 1, pair.1 + 1),
        threshold,
        checked: 0,
        violation: None,
        budget: *budget,
    };
    if let Some(j) = gate {
        let k = md.k(j);
        report.gate = Some((j + 1, k));
        if k < 2 {
            report.holds = false;
            return Ok(report);
        }
    }
    let total = (g.p as u128).pow(md.n as u32);
    if total > budget.max_candidates as u128 {
        return Err(Error::BudgetExceeded {
            used: total.min(u64::MAX as u128) as u64,
            limit: budget.max_candidates,
        });
    }
    let mut meter = Meter::new(budget);
    let (left, right) = (&md.x[pair.0], &md.x[pair.1]);
    let mut violation = None;
    projective_alphas(g, md.n, &mut meter, &mut |alpha| {
        let weight = alpha.iter().filter(|&&a| a != 0).count();
        let bound = (weight as i64).min(threshold).max(0) as usize;
        let rank = g.rank(weighted_matrix(g, alpha, left, right));
        if rank < bound {
            violation = Some(AlphaViolation {
                alpha: alpha.to_vec(),
                weight,
                rank,
                bound,
            });
            return true;
        }
        false
    })?;
    report.checked = meter.used();
    report.holds = violation.is_none();
    report.violation = violation;
    Ok(report)
}

/// `k_p >= 2` and `rank[sum alpha_a x_a,b (x) x_a,c] >= min(w(alpha), n - d_p + 2)`
/// for every `alpha`, where `b < c` are the other two modes.
pub fn condition_u_bruteforce(
    f: &ProductFamily,
    pivot: usize,
    budget: &SearchBudget,
) -> Result<RankConditionReport> {
    let md = Modes::new(f, pivot)?;
    let [p, b, c] = md.roles;
    let t = md.n as i64 - md.d(p) as i64 + 2;
    rank_condition(&md, pivot, Some(p), (b, c), t, budget)
}

/// Side condition 2: condition U with the roles of the pivot and the second
/// mode exchanged.
pub fn dls_condition_two(
    f: &ProductFamily,
    pivot: usize,
    budget: &SearchBudget,
) -> Result<RankConditionReport> {
    let md = Modes::new(f, pivot)?;
    let [p, b, c] = md.roles;
    let t = md.n as i64 - md.d(b) as i64 + 2;
    rank_condition(&md, pivot, Some(b), (p, c), t, budget)
}

/// Side condition 6: condition U with `n - k_p + 2` in place of `n - d_p + 2`.
pub fn dls_condition_six(
    f: &ProductFamily,
    pivot: usize,
    budget: &SearchBudget,
) -> Result<RankConditionReport> {
    let md = Modes::new(f, pivot)?;
    let [p, b, c] = md.roles;
    let t = md.n as i64 - md.k(p) as i64 + 2;
    rank_condition(&md, pivot, None, (b, c), t, budget)
}

/// Side condition 3 with its projection requirement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub p: u64,
    pub pivot: usize,
    pub holds: bool,
    /// First subset (1-based labels) meeting all three requirements.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
    /// Subsets meeting the two dimension requirements.
    pub dimension_candidates: usize,
    /// For the last rejected candidate: coefficients on `[n] \ S` and the index `b` (1-based).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_rejection: Option<(Vec<usize>, Vec<u64>, usize)>,
    pub checked: u64,
    pub budget: SearchBudget,
}

/// Searches for `S` with `|S| <= d_p`, `d_p^S = |S|`, `d_b^{[n] \ S} = n - |S|`
/// and the projection requirement: for `Pi` with kernel spanned by the
/// pivot factors in `S`, whenever `sum_{a not in S} alpha_a Pi x_a,p (x) x_a,c`
/// equals `Pi x_b,p (x) z` for some `b` outside `S` and some `z`, at most one
/// `alpha_a` is nonzero. The coefficients range over `[n] \ S` only.
pub fn dls_condition_three(
    f: &ProductFamily,
    pivot: usize,
    budget: &SearchBudget,
) -> Result<ProjectionReport> {
    let md = Modes::new(f, pivot)?;
    let g = md.g;
    let [p, b, c] = md.roles;
    let n = md.n;
    let dp = md.d(p);
    let mut meter = Meter::new(budget);
    let mut report = ProjectionReport {
        p: g.p,
        pivot: pivot + 1,
        holds: false,
        subset: None,
        dimension_candidates: 0,
        last_rejection: None,
        checked: 0,
        budget: *budget,
    };
    for s in subsets_by_size(n, 0, dp) {
        meter.tick(1)?;
        let inside = s.indices();
        let outside = s.complement(n).indices();
        let pick =
            |j: usize, idx: &[usize]| idx.iter().map(|&a| md.x[j][a].clone()).collect::<Vec<_>>();
        if g.rank(pick(p, &inside)) != inside.len() || g.rank(pick(b, &outside)) != outside.len() {
            continue;
        }
        report.dimension_candidates += 1;
        let ann = g.nullspace(&pick(p, &inside), md.x[p][0].len());
        let proj = |v: &[u64]| -> Vec<u64> {
            ann.iter()
                .map(|y| {
                    y.iter()
                        .zip(v)
                        .fold(0, |acc, (&a, &b)| g.add(acc, g.mul(a, b)))
                })
                .collect()
        };
        let left: Vec<Vec<u64>> = outside.iter().map(|&a| proj(&md.x[p][a])).collect();
        let right = pick(c, &outside);
        let mut rejection = None;
        projective_alphas(g, outside.len(), &mut meter, &mut |alpha| {
            if alpha.iter().filter(|&&a| a != 0).count() < 2 {
                return false;
            }
            let m = weighted_matrix(g, alpha, &left, &right);
            let cols: Vec<Vec<u64>> = (0..right.first().map_or(0, Vec::len))
                .map(|j| m.iter().map(|row| row[j]).collect())
                .collect();
            for (pos, &bi) in outside.iter().enumerate() {
                let pb = &left[pos];
                let mut rows = cols.clone();
                let ok = if pb.iter().all(|&x| x == 0) {
                    g.rank(rows) == 0
                } else {
                    rows.push(pb.clone());
                    g.rank(rows) <= 1
                };
                if ok {
                    rejection = Some((alpha.to_vec(), bi));
                    return true;
                }
            }
            false
        })?;
        match rejection {
            None => {
                report.holds = true;
                report.subset = Some(s.labels());
                break;
            }
            Some((alpha, bi)) => report.last_rejection = Some((s.labels(), alpha, bi + 1)),
        }
    }
    report.checked = meter.used();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn e(n: usize, i: usize) -> Vec<i64> {
        (0..n).map(|k| i64::from(k == i)).collect()
    }

    fn fam(p: u64, ts: &[Vec<Vec<i64>>]) -> ProductFamily {
        ProductFamily::from_ints(Field::prime(p).unwrap(), ts).unwrap()
    }

    #[test]
    fn condition_u_on_identity_gf2() {
        let f = fam(2, &[vec![e(2, 0); 3], vec![e(2, 1); 3]]);
        let r = condition_u_bruteforce(&f, 0, &SearchBudget::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.checked, 3);
    }

    #[test]
    fn condition_u_gate() {
        let f = fam(
            3,
            &[
                vec![e(2, 0), e(2, 0), e(2, 0)],
                vec![e(2, 0), e(2, 1), e(2, 1)],
            ],
        );
        let r = condition_u_bruteforce(&f, 0, &SearchBudget::default()).unwrap();
        assert!(!r.holds);
        assert_eq!(r.gate, Some((1, 1)));
    }

    #[test]
    fn condition_u_violation() {
        // three tensors sharing a mode-2 and mode-3 pair: alpha = (1, -1, 0) kills the sum
        let f = fam(
            3,
            &[
                vec![e(3, 0), e(2, 0), e(2, 0)],
                vec![e(3, 1), e(2, 0), e(2, 0)],
                vec![e(3, 2), e(2, 1), e(2, 1)],
            ],
        );
        let r = condition_u_bruteforce(&f, 0, &SearchBudget::default()).unwrap();
        assert!(!r.holds);
        let v = r.violation.unwrap();
        assert!(v.rank < v.bound);
    }

    #[test]
    fn side_conditions_on_identity() {
        let f = fam(3, &[vec![e(3, 0); 3], vec![e(3, 1); 3], vec![e(3, 2); 3]]);
        let b = SearchBudget::default();
        assert!(dls_condition_two(&f, 0, &b).unwrap().holds);
        assert!(dls_condition_six(&f, 0, &b).unwrap().holds);
        let r = dls_condition_three(&f, 0, &b).unwrap();
        assert!(r.holds);
        assert_eq!(r.subset, Some(vec![]));
    }

    #[test]
    fn budget_is_enforced() {
        let f = fam(3, &[vec![e(3, 0); 3], vec![e(3, 1); 3], vec![e(3, 2); 3]]);
        assert!(condition_u_bruteforce(&f, 0, &SearchBudget::with_candidates(5)).is_err());
    }
}
