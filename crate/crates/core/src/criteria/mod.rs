//! Uniqueness criteria and rank bounds. Every check returns a [`Certificate`]
//! whose witness carries enough data to recompute its status.

mod bounds;
mod dls;
mod kruskal;
mod symmetric;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{Partition, Subset};
use crate::tensor::{DimTable, ProductFamily};

pub use bounds::{
    flattening_bound, single_term_bound, tensor_rank_lb_mu, tensor_rank_lb_subset, waring_rank_lb,
    BoundMethod, BoundResult,
};
pub use dls::{
    check_condition_c, check_condition_h, check_condition_h_any, check_condition_s,
    check_dls_side_condition, condition_four_quotient, dls_threshold, DlsDetail, TauChoice,
    DEFAULT_ENTRY_BUDGET, MAX_TAU_SEARCH_N,
};
pub use kruskal::{
    check_kgen, check_kruskal, check_low_rank_uniqueness, check_nonrank_general,
    check_nonrank_irreducible, check_reshaped_kgen, check_reshaped_kruskal, check_split_corollary,
    check_subpartition_interp, nonrank_general_r_max, nonrank_irreducible_r_max, PartitionStrategy,
    MAX_EXHAUSTIVE_MODES, MAX_TRIPARTITION_MODES,
};
pub use symmetric::check_symmetric_nonrank;

/// Outcome of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Certified,
    HypothesisFails,
    NotApplicable,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Certified => 0,
            Status::HypothesisFails => 1,
            Status::NotApplicable => 2,
        }
    }

    fn of(holds: bool) -> Status {
        if holds {
            Status::Certified
        } else {
            Status::HypothesisFails
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Certified => "certified",
            Status::HypothesisFails => "hypothesis-fails",
            Status::NotApplicable => "not-applicable",
        })
    }
}

macro_rules! criteria {
    ($($v:ident => $s:literal),* $(,)?) => {
        /// Identifier of a criterion, as used on the command line and in certificates.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum CriterionId {
            $(#[serde(rename = $s)] $v,)*
        }

        impl CriterionId {
            pub const ALL: &'static [CriterionId] = &[$(CriterionId::$v),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(CriterionId::$v => $s,)*
                }
            }
        }
    };
}

criteria! {
    Kruskal => "kruskal",
    Kgen => "kgen",
    ReshapedKgen => "reshaped-kgen",
    ReshapedKruskal => "reshaped-kruskal",
    SplitCorollary => "split",
    LowRank => "low-rank",
    Interpolation => "interpolation",
    NonrankIrreducible => "nonrank-irreducible",
    NonrankGeneral => "nonrank-general",
    SymmetricNonrank => "symmetric-nonrank",
    ConditionS => "condition-s",
    ConditionH => "condition-h",
    ConditionHAny => "condition-h-any",
    ConditionC => "condition-c",
    DlsThreshold => "dls-threshold",
    DlsSide => "dls-side",
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<CriterionId> {
        CriterionId::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown criterion '{s}'")))
    }
}

/// Parameters of a check, echoed into its certificate. Modes, indices and
/// partitions use 1-based labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub which: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<Vec<Partition>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exhaustive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entry_budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_subset_n: Option<usize>,
}

impl Params {
    pub fn require(v: Option<usize>, name: &str) -> Result<usize> {
        v.ok_or_else(|| Error::InvalidParameter(format!("parameter {name} is required")))
    }

    /// Pivot mode as a 0-based index, defaulting to the first mode.
    pub fn pivot_index(&self, m: usize) -> Result<usize> {
        let p = self.pivot.unwrap_or(1);
        if p == 0 || p > m {
            return Err(Error::InvalidParameter(format!(
                "pivot mode {p} is not in 1..={m}"
            )));
        }
        Ok(p - 1)
    }
}

/// `ceil(a / b)` for `b > 0`.
pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// `sum_j (d_j - 1) + 1`.
pub(crate) fn excess_plus_one(dims: &[usize]) -> i64 {
    dims.iter().map(|&d| d as i64 - 1).sum::<i64>() + 1
}

/// A per-subset inequality `lhs(|S|) <= rhs(d^S)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum SubsetRule {
    /// `2|S| <= sum_j (d_j^S - 1) + 1`.
    Kgen,
    /// `|S| + min(|S|, r) <= sum_j (d_j^S - 1) + 1`.
    LowRank { r: usize },
    /// `min(2|S|, |S| + r) <= sum_j (d_j^S - 1) + 1` for `|S| > s`.
    Interpolation { s: usize, r: usize },
    /// `2|S| + max(0, (r - n) - ceil((n - q + s)/|S|) + 1) <= sum_j (d_j^S - 1) + 1` for `|S| > s`.
    NonrankIrreducible {
        n: usize,
        q: usize,
        s: usize,
        r: usize,
    },
    /// As above with `r - n + q - s` in place of `r - n`.
    NonrankGeneral {
        n: usize,
        q: usize,
        s: usize,
        r: usize,
    },
    /// `min(|S|, n - d_p + 2) <= d_b^S + d_c^S - |S|` where `p` is the pivot mode.
    ConditionH {
        pivot: usize,
        n: usize,
        d_pivot: usize,
    },
}

impl SubsetRule {
    pub fn min_size(&self) -> usize {
        match *self {
            SubsetRule::Interpolation { s, .. }
            | SubsetRule::NonrankIrreducible { s, .. }
            | SubsetRule::NonrankGeneral { s, .. } => s + 1,
            _ => 2,
        }
    }

    /// `(lhs, rhs)`; the rule holds when `lhs <= rhs`.
    pub fn evaluate(&self, size: usize, dims: &[usize]) -> (i64, i64) {
        let k = size as i64;
        match *self {
            SubsetRule::Kgen => (2 * k, excess_plus_one(dims)),
            SubsetRule::LowRank { r } => (k + k.min(r as i64), excess_plus_one(dims)),
            SubsetRule::Interpolation { r, .. } => {
                ((2 * k).min(k + r as i64), excess_plus_one(dims))
            }
            SubsetRule::NonrankIrreducible { n, q, s, r } => {
                let extra = (r as i64 - n as i64) - ceil_div(n as i64 - q as i64 + s as i64, k) + 1;
                (2 * k + extra.max(0), excess_plus_one(dims))
            }
            SubsetRule::NonrankGeneral { n, q, s, r } => {
                let extra = (r as i64 - n as i64 + q as i64 - s as i64)
                    - ceil_div(n as i64 - q as i64 + s as i64, k)
                    + 1;
                (2 * k + extra.max(0), excess_plus_one(dims))
            }
            SubsetRule::ConditionH { pivot, n, d_pivot } => {
                let others: i64 = dims
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j + 1 != pivot)
                    .map(|(_, &d)| d as i64)
                    .sum();
                (k.min(n as i64 - d_pivot as i64 + 2), others - k)
            }
        }
    }

    pub fn holds(&self, size: usize, dims: &[usize]) -> bool {
        let (l, r) = self.evaluate(size, dims);
        l <= r
    }
}

/// One evaluated subset: labels are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetRecord {
    pub subset: Vec<usize>,
    pub dims: Vec<usize>,
    pub lhs: i64,
    pub rhs: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
}

impl SubsetRecord {
    pub(crate) fn new(s: Subset, dims: Vec<usize>, (lhs, rhs): (i64, i64)) -> SubsetRecord {
        SubsetRecord {
            subset: s.labels(),
            dims,
            lhs,
            rhs,
            partition: None,
        }
    }

    pub fn to_subset(&self) -> Result<Subset> {
        Subset::from_labels(&self.subset)
    }
}

/// A tripartition of the modes with its grouped k-ranks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripartitionRecord {
    pub blocks: Partition,
    pub k: Vec<usize>,
    pub lhs: i64,
    pub rhs: i64,
}

/// Evidence behind a status.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `2n <= sum_j (k_j - 1) + 1`.
    KRanks {
        n: usize,
        k: Vec<usize>,
        lhs: i64,
        rhs: i64,
    },
    /// A subset scan in the global order; `violation` is the first failing subset.
    SubsetScan {
        rule: SubsetRule,
        n: usize,
        checked: u64,
        violation: Option<SubsetRecord>,
    },
    /// A subset scan where each subset may regroup the modes.
    PartitionScan {
        n: usize,
        checked: u64,
        choices: Vec<SubsetRecord>,
        truncated: bool,
        violation: Option<SubsetRecord>,
    },
    /// `2n <= k_J + k_K + k_L - 2` for the recorded tripartition.
    Tripartition {
        n: usize,
        tried: u64,
        best: Option<TripartitionRecord>,
    },
    /// `n <= sum_j (d_j - 1) + 1`, with the separator found when it holds.
    Split {
        n: usize,
        d: Vec<usize>,
        lhs: i64,
        rhs: i64,
        separator: Option<Vec<usize>>,
    },
    /// `n + r + 1 <= m + 2d - 2` for a symmetric family.
    Symmetric {
        n: usize,
        m: usize,
        d: usize,
        k: usize,
        r: usize,
        lhs: i64,
        rhs: i64,
        waring_unique: bool,
    },
    /// The three clauses of the compound-matrix condition.
    ConditionC {
        pivot: usize,
        k_pivot: usize,
        s: i64,
        d_others: Vec<usize>,
        rows: u64,
        cols: u64,
        rank: Option<usize>,
    },
    /// The three k-rank threshold inequalities.
    Threshold {
        n: usize,
        k: Vec<usize>,
        d: Vec<usize>,
        clauses: Vec<bool>,
    },
    /// The pivot k-rank is below 2.
    KRankGate { pivot: usize, k_pivot: usize },
    /// A side condition of the three-mode synthesis.
    DlsSide {
        which: u8,
        pivot: usize,
        detail: DlsDetail,
    },
}

impl Witness {
    /// The status implied by the witness data alone.
    pub fn status(&self) -> Result<Status> {
        let bad = |what: &str| Err(Error::Internal(format!("witness is inconsistent: {what}")));
        match self {
            Witness::KRanks { n, k, lhs, rhs } => {
                if *lhs != 2 * *n as i64 || *rhs != excess_plus_one(k) {
                    return bad("k-rank sums");
                }
                Ok(Status::of(lhs <= rhs))
            }
            Witness::SubsetScan {
                rule, n, violation, ..
            } => match violation {
                None => Ok(Status::Certified),
                Some(rec) => {
                    let size = rec.subset.len();
                    if size < rule.min_size()
                        || size > *n
                        || rule.evaluate(size, &rec.dims) != (rec.lhs, rec.rhs)
                    {
                        return bad("violating subset does not match its rule");
                    }
                    if rec.lhs <= rec.rhs {
                        return bad("recorded subset satisfies its inequality");
                    }
                    Ok(Status::HypothesisFails)
                }
            },
            Witness::PartitionScan {
                choices, violation, ..
            } => {
                for c in choices {
                    if !SubsetRule::Kgen.holds(c.subset.len(), &c.dims) || c.partition.is_none() {
                        return bad("recorded partition choice fails");
                    }
                }
                match violation {
                    None => Ok(Status::Certified),
                    Some(rec) => {
                        if SubsetRule::Kgen.evaluate(rec.subset.len(), &rec.dims)
                            != (rec.lhs, rec.rhs)
                            || rec.lhs <= rec.rhs
                        {
                            return bad("violation record");
                        }
                        Ok(Status::HypothesisFails)
                    }
                }
            }
            Witness::Tripartition { n, best, .. } => match best {
                None => Ok(Status::HypothesisFails),
                Some(t) => {
                    let rhs = t.k.iter().map(|&k| k as i64).sum::<i64>() - 2;
                    if t.k.len() != 3
                        || t.blocks.len() != 3
                        || t.lhs != 2 * *n as i64
                        || t.rhs != rhs
                    {
                        return bad("tripartition sums");
                    }
                    Ok(Status::of(t.lhs <= t.rhs))
                }
            },
            Witness::Split {
                n,
                d,
                lhs,
                rhs,
                separator,
            } => {
                if *lhs != *n as i64 || *rhs != excess_plus_one(d) {
                    return bad("split sums");
                }
                if lhs <= rhs && separator.is_none() {
                    return bad("split inequality holds but no separator recorded");
                }
                Ok(Status::of(lhs <= rhs))
            }
            Witness::Symmetric {
                n,
                m,
                d,
                k,
                r,
                lhs,
                rhs,
                waring_unique,
            } => {
                if *k < 2 {
                    return Ok(Status::NotApplicable);
                }
                let (n, m, d, r) = (*n as i64, *m as i64, *d as i64, *r as i64);
                if *lhs != n + r + 1
                    || *rhs != m + 2 * d - 2
                    || *waring_unique != (2 * n < m + 2 * d - 2)
                {
                    return bad("symmetric sums");
                }
                Ok(Status::of(lhs <= rhs))
            }
            Witness::ConditionC {
                k_pivot,
                s,
                d_others,
                cols,
                rank,
                ..
            } => {
                if *k_pivot < 2 || d_others.iter().any(|&d| (d as i64) < *s) {
                    return Ok(Status::HypothesisFails);
                }
                match rank {
                    Some(r) => Ok(Status::of(*r as u64 == *cols)),
                    None => bad("rank missing"),
                }
            }
            Witness::Threshold { n, k, d, clauses } => {
                if k.len() != 3 || d.len() != 3 || clauses.len() != 3 {
                    return bad("threshold needs three modes");
                }
                for (i, &c) in clauses.iter().enumerate() {
                    let (a, b) = ((i + 1) % 3, (i + 2) % 3);
                    if c != (k[a].min(k[b]) as i64 <= *n as i64 - d[i] as i64 + 1) {
                        return bad("threshold clause");
                    }
                }
                Ok(Status::of(clauses.iter().all(|&c| c)))
            }
            Witness::KRankGate { k_pivot, .. } => {
                if *k_pivot >= 2 {
                    return bad("gate recorded with k-rank at least 2");
                }
                Ok(Status::HypothesisFails)
            }
            Witness::DlsSide { detail, .. } => detail.status(),
        }
    }
}

/// Verdict of one criterion on one input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub criterion: CriterionId,
    pub status: Status,
    #[serde(default)]
    pub params: Params,
    pub witness: Witness,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Certificate {
    pub(crate) fn new(
        criterion: CriterionId,
        params: Params,
        witness: Witness,
    ) -> Result<Certificate> {
        let status = witness.status()?;
        Ok(Certificate {
            criterion,
            status,
            params,
            witness,
            notes: Vec::new(),
        })
    }

    pub(crate) fn note(mut self, text: impl Into<String>) -> Certificate {
        self.notes.push(text.into());
        self
    }

    /// Recomputes the status from the witness alone.
    pub fn revalidate(&self) -> Result<Status> {
        self.witness.status()
    }

    pub fn is_consistent(&self) -> bool {
        self.revalidate().map(|s| s == self.status).unwrap_or(false)
    }

    /// Reruns the criterion on `f` and compares status and witness.
    pub fn recheck(&self, f: &ProductFamily) -> Result<bool> {
        let fresh = run_check(self.criterion, f, &self.params)?;
        Ok(fresh.status == self.status && fresh.witness == self.witness)
    }
}

/// Checks `rule` on every subset of size at least its minimum, stopping at the
/// first violation.
pub(crate) fn scan(dt: &DimTable<'_>, rule: SubsetRule) -> Result<Witness> {
    let n = dt.n();
    let mut checked = 0u64;
    for s in dt.subsets(rule.min_size(), n)? {
        checked += 1;
        let dims = dt.dims(s);
        let eval = rule.evaluate(s.len(), &dims);
        if eval.0 > eval.1 {
            let violation = Some(SubsetRecord::new(s, dims, eval));
            return Ok(Witness::SubsetScan {
                rule,
                n,
                checked,
                violation,
            });
        }
    }
    Ok(Witness::SubsetScan {
        rule,
        n,
        checked,
        violation: None,
    })
}

pub(crate) fn require_modes(f: &ProductFamily, lo: usize, what: &str) -> Result<()> {
    if f.m() < lo {
        return Err(Error::InvalidParameter(format!(
            "{what} needs at least {lo} modes, got {}",
            f.m()
        )));
    }
    Ok(())
}

pub(crate) fn require_three_modes(f: &ProductFamily, what: &str) -> Result<()> {
    if f.m() != 3 {
        return Err(Error::InvalidParameter(format!(
            "{what} needs exactly 3 modes, got {}",
            f.m()
        )));
    }
    Ok(())
}

/// Runs a product-family criterion by identifier.
pub fn run_check(id: CriterionId, f: &ProductFamily, p: &Params) -> Result<Certificate> {
    let cap = p.max_subset_n;
    match id {
        CriterionId::Kruskal => check_kruskal(f),
        CriterionId::Kgen => check_kgen(f, cap),
        CriterionId::ReshapedKgen => {
            let strategy = match &p.partitions {
                None => PartitionStrategy::Exhaustive,
                Some(ps) => PartitionStrategy::Fixed(
                    ps.iter().map(|p| to_zero_based(p)).collect::<Result<_>>()?,
                ),
            };
            check_reshaped_kgen(f, &strategy, cap)
        }
        CriterionId::ReshapedKruskal => check_reshaped_kruskal(f),
        CriterionId::SplitCorollary => check_split_corollary(f),
        CriterionId::LowRank => check_low_rank_uniqueness(f, Params::require(p.r, "r")?, cap),
        CriterionId::Interpolation => check_subpartition_interp(
            f,
            Params::require(p.s, "s")?,
            Params::require(p.r, "r")?,
            cap,
        ),
        CriterionId::NonrankIrreducible => check_nonrank_irreducible(
            f,
            Params::require(p.q, "q")?,
            Params::require(p.s, "s")?,
            Params::require(p.r, "r")?,
            cap,
        ),
        CriterionId::NonrankGeneral => check_nonrank_general(
            f,
            Params::require(p.q, "q")?,
            Params::require(p.s, "s")?,
            Params::require(p.r, "r")?,
            cap,
        ),
        CriterionId::SymmetricNonrank => Err(Error::InvalidParameter(
            "symmetric-nonrank needs a symmetric family".into(),
        )),
        CriterionId::ConditionS => check_condition_s(f, cap),
        CriterionId::ConditionH => check_condition_h(f, p.pivot_index(f.m().max(1))?, cap),
        CriterionId::ConditionHAny => check_condition_h_any(f, cap),
        CriterionId::ConditionC => {
            check_condition_c(f, p.pivot_index(f.m().max(1))?, p.entry_budget)
        }
        CriterionId::DlsThreshold => dls::check_dls_threshold(f),
        CriterionId::DlsSide => {
            let which = p
                .which
                .ok_or_else(|| Error::InvalidParameter("parameter which is required".into()))?;
            let tau = match (&p.tau, p.exhaustive) {
                (Some(t), _) => TauChoice::Given(to_zero_based(std::slice::from_ref(t))?.remove(0)),
                (None, true) => TauChoice::Exhaustive,
                (None, false) => TauChoice::Identity,
            };
            check_dls_side_condition(f, which, p.pivot_index(f.m().max(1))?, &tau, cap)
        }
    }
}

/// Converts 1-based labels to 0-based indices.
pub fn to_zero_based(p: &[Vec<usize>]) -> Result<Partition> {
    p.iter()
        .map(|b| {
            b.iter()
                .map(|&l| {
                    l.checked_sub(1)
                        .ok_or_else(|| Error::InvalidParameter("labels start at 1".into()))
                })
                .collect()
        })
        .collect()
}

pub(crate) fn to_labels(p: &[Vec<usize>]) -> Partition {
    p.iter()
        .map(|b| b.iter().map(|&i| i + 1).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_div_matches_float() {
        for a in -20i64..20 {
            for b in 1i64..7 {
                assert_eq!(
                    ceil_div(a, b),
                    (a as f64 / b as f64).ceil() as i64,
                    "{a}/{b}"
                );
            }
        }
    }

    #[test]
    fn criterion_names_round_trip() {
        for &c in CriterionId::ALL {
            assert_eq!(c.name().parse::<CriterionId>().unwrap(), c);
            let j = serde_json::to_string(&c).unwrap();
            assert_eq!(j, format!("\"{}\"", c.name()));
        }
        assert!("nope".parse::<CriterionId>().is_err());
    }

    #[test]
    fn rule_arithmetic() {
        assert_eq!(SubsetRule::Kgen.evaluate(2, &[1, 2, 2]), (4, 3));
        assert_eq!(SubsetRule::LowRank { r: 0 }.evaluate(3, &[2, 2, 2]), (3, 4));
        assert_eq!(
            SubsetRule::Interpolation { s: 2, r: 4 }.evaluate(3, &[3, 3, 3]),
            (6, 7)
        );
        // n = 5, q = 3, s = 1, r = 6: extra = 1 - ceil(3/|S|) + 1
        let rule = SubsetRule::NonrankIrreducible {
            n: 5,
            q: 3,
            s: 1,
            r: 6,
        };
        assert_eq!(rule.evaluate(3, &[3, 3, 3]), (6 + 1, 7));
        assert_eq!(rule.evaluate(2, &[2, 2, 2]), (4, 4));
        let h = SubsetRule::ConditionH {
            pivot: 1,
            n: 3,
            d_pivot: 3,
        };
        assert_eq!(h.evaluate(2, &[2, 2, 2]), (2, 2));
    }

    #[test]
    fn witness_status_detects_tampering() {
        let w = Witness::KRanks {
            n: 3,
            k: vec![3, 3, 3],
            lhs: 6,
            rhs: 7,
        };
        assert_eq!(w.status().unwrap(), Status::Certified);
        let w = Witness::KRanks {
            n: 3,
            k: vec![3, 3, 3],
            lhs: 6,
            rhs: 5,
        };
        assert!(w.status().is_err());
        let rec = SubsetRecord {
            subset: vec![1, 2],
            dims: vec![1, 2, 2],
            lhs: 4,
            rhs: 3,
            partition: None,
        };
        let w = Witness::SubsetScan {
            rule: SubsetRule::Kgen,
            n: 2,
            checked: 1,
            violation: Some(rec.clone()),
        };
        assert_eq!(w.status().unwrap(), Status::HypothesisFails);
        let forged = SubsetRecord {
            dims: vec![2, 2, 2],
            ..rec
        };
        let w = Witness::SubsetScan {
            rule: SubsetRule::Kgen,
            n: 2,
            checked: 1,
            violation: Some(forged),
        };
        assert!(w.status().is_err());
    }
}
