//! Three-mode conditions: the per-subset inequalities S and H, the
//! compound-matrix condition C, the k-rank threshold regime and the
//! computable side conditions of the three-mode synthesis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{compound_matrix, khatri_rao, Matrix, VectorList};
use crate::subset::binomial;
use crate::tensor::{k_rank_lenient, DimTable, KRankProfile, ProductFamily};

use super::{
    require_three_modes, scan, Certificate, CriterionId, Params, Status, SubsetRule, Witness,
};

/// Default ceiling on `rows * cols` of the compound Khatri-Rao matrix.
pub const DEFAULT_ENTRY_BUDGET: u64 = 4_000_000;
/// Largest `n` for the exhaustive permutation search of side condition 4.
pub const MAX_TAU_SEARCH_N: usize = 8;
const CANDIDATE_LIMIT: usize = 64;

/// Which permutations side condition 4 tries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauChoice {
    Identity,
    /// A permutation of `0..n`.
    Given(Vec<usize>),
    Exhaustive,
}

/// Evidence for one side condition; modes are listed pivot first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum DlsDetail {
    /// `k_p + min(k_b, k_c - 1) >= n + 1`.
    KRankSum {
        n: usize,
        k: Vec<usize>,
        lhs: i64,
        rhs: i64,
    },
    /// Subsets `S` with `|S| <= d_p`, `d_p^S = |S|` and `d_b^{[n] \ S} = n - |S|`.
    Projection {
        d_pivot: usize,
        checked: u64,
        candidates: Vec<Vec<usize>>,
        truncated: bool,
    },
    /// Echelon form of the permuted pivot factors and the k-ranks of its
    /// trailing blocks, one per `a` in `1..d_p`.
    Echelon {
        d_pivot: usize,
        tau: Vec<usize>,
        pivots_ok: bool,
        kranks: Vec<usize>,
        tried: u64,
    },
    /// `k_p = d_p`.
    Equal { k: usize, d: usize },
}

impl DlsDetail {
    pub(crate) fn status(&self) -> Result<Status> {
        let bad = |what: &str| {
            Err(Error::Internal(format!(
                "side-condition witness is inconsistent: {what}"
            )))
        };
        match self {
            DlsDetail::KRankSum { n, k, lhs, rhs } => {
                if k.len() != 3
                    || *lhs != (k[0] + k[1].min(k[2].saturating_sub(1))) as i64
                    || *rhs != *n as i64 + 1
                {
                    return bad("k-rank sum");
                }
                Ok(Status::of(lhs >= rhs))
            }
            DlsDetail::Projection {
                d_pivot,
                candidates,
                ..
            } => {
                if candidates.iter().any(|c| c.len() > *d_pivot) {
                    return bad("candidate larger than the pivot dimension");
                }
                Ok(Status::of(!candidates.is_empty()))
            }
            DlsDetail::Echelon {
                d_pivot,
                pivots_ok,
                kranks,
                ..
            } => {
                if !pivots_ok {
                    return Ok(Status::HypothesisFails);
                }
                let need = d_pivot.saturating_sub(1);
                let all_good = kranks.iter().all(|&k| k >= 2);
                if kranks.len() > need || (all_good && kranks.len() < need) {
                    return bad("echelon k-ranks");
                }
                Ok(Status::of(all_good))
            }
            DlsDetail::Equal { k, d } => Ok(Status::of(k == d)),
        }
    }
}

/// Pivot first, then the other two modes in ascending order.
fn mode_order(pivot: usize) -> [usize; 3] {
    let mut o = [pivot, 0, 0];
    let mut i = 1;
    for j in 0..3 {
        if j != pivot {
            o[i] = j;
            i += 1;
        }
    }
    o
}

fn check_pivot(pivot: usize) -> Result<()> {
    if pivot >= 3 {
        return Err(Error::InvalidParameter(format!(
            "pivot mode {} is not in 1..=3",
            pivot + 1
        )));
    }
    Ok(())
}

/// The per-subset inequality of the generalized Kruskal theorem for three modes.
pub fn check_condition_s(f: &ProductFamily, cap: Option<usize>) -> Result<Certificate> {
    require_three_modes(f, "condition S")?;
    let dt = DimTable::with_cap(f, cap);
    let params = Params {
        max_subset_n: cap,
        ..Params::default()
    };
    Certificate::new(
        CriterionId::ConditionS,
        params,
        scan(&dt, SubsetRule::Kgen)?,
    )
}

/// `k_p >= 2` and `d_b^S + d_c^S - |S| >= min(|S|, n - d_p + 2)` for `|S| >= 2`.
pub fn check_condition_h(
    f: &ProductFamily,
    pivot: usize,
    cap: Option<usize>,
) -> Result<Certificate> {
    require_three_modes(f, "condition H")?;
    check_pivot(pivot)?;
    let prof = KRankProfile::of(f);
    let params = Params {
        pivot: Some(pivot + 1),
        max_subset_n: cap,
        ..Params::default()
    };
    if prof.k[pivot] < 2 {
        let w = Witness::KRankGate {
            pivot: pivot + 1,
            k_pivot: prof.k[pivot],
        };
        return Certificate::new(CriterionId::ConditionH, params, w);
    }
    let dt = DimTable::with_cap(f, cap);
    let rule = SubsetRule::ConditionH {
        pivot: pivot + 1,
        n: f.n(),
        d_pivot: prof.d[pivot],
    };
    Certificate::new(CriterionId::ConditionH, params, scan(&dt, rule)?)
}

/// Condition H with each mode as pivot in turn; certified if any pivot works.
/// The witness is that of the first successful pivot, or of pivot 1.
pub fn check_condition_h_any(f: &ProductFamily, cap: Option<usize>) -> Result<Certificate> {
    let mut first = None;
    let mut failed = Vec::new();
    for p in 0..3 {
        let c = check_condition_h(f, p, cap)?;
        if c.status == Status::Certified {
            let mut c = c;
            c.criterion = CriterionId::ConditionHAny;
            c.params.pivot = None;
            let c = c.note(format!("holds with pivot mode {}", p + 1));
            return Ok(if failed.is_empty() {
                c
            } else {
                c.note(format!("fails with pivot modes {failed:?}"))
            });
        }
        failed.push(p + 1);
        first.get_or_insert(c);
    }
    let mut c = first.expect("three pivots tried");
    c.criterion = CriterionId::ConditionHAny;
    c.params.pivot = None;
    Ok(c.note("fails for every pivot mode; the witness is for pivot mode 1"))
}

/// Top `rank` rows of the reduced echelon form: coordinates of the factors in
/// a basis of their span.
fn span_coordinates(v: &VectorList) -> Matrix {
    let (red, pivots) = v.as_matrix().rref();
    let rows: Vec<usize> = (0..pivots.len()).collect();
    let cols: Vec<usize> = (0..v.len()).collect();
    red.select(&rows, &cols)
}

/// `k_p >= 2`, `min(d_b, d_c) >= s` and `rank(C_s(X_b) (.) C_s(X_c)) = C(n, s)`
/// with `s = n - d_p + 2`. The factor matrices are taken in coordinates of
/// their spans.
pub fn check_condition_c(
    f: &ProductFamily,
    pivot: usize,
    entry_budget: Option<u64>,
) -> Result<Certificate> {
    require_three_modes(f, "condition C")?;
    check_pivot(pivot)?;
    let [p, b, c] = mode_order(pivot);
    let prof = KRankProfile::of(f);
    let n = f.n();
    let s = n as i64 - prof.d[p] as i64 + 2;
    let d_others = vec![prof.d[b], prof.d[c]];
    let params = Params {
        pivot: Some(pivot + 1),
        entry_budget,
        ..Params::default()
    };
    let mut witness = Witness::ConditionC {
        pivot: pivot + 1,
        k_pivot: prof.k[p],
        s,
        d_others: d_others.clone(),
        rows: 0,
        cols: 0,
        rank: None,
    };
    if prof.k[p] >= 2 && d_others.iter().all(|&d| d as i64 >= s) {
        let su = s as usize;
        let rows = binomial(prof.d[b], su).saturating_mul(binomial(prof.d[c], su));
        let cols = binomial(n, su);
        let limit = entry_budget.unwrap_or(DEFAULT_ENTRY_BUDGET);
        let used = rows.saturating_mul(cols);
        if used > limit {
            return Err(Error::BudgetExceeded { used, limit });
        }
        let xb = compound_matrix(&span_coordinates(&f.mode_vectors(b)), su)?;
        let xc = compound_matrix(&span_coordinates(&f.mode_vectors(c)), su)?;
        let rank = khatri_rao(&xb, &xc)?.rank();
        witness = Witness::ConditionC {
            pivot: pivot + 1,
            k_pivot: prof.k[p],
            s,
            d_others,
            rows,
            cols,
            rank: Some(rank),
        };
    }
    Certificate::new(CriterionId::ConditionC, params, witness)
}

fn threshold_clauses(n: usize, k: &[usize], d: &[usize]) -> Vec<bool> {
    (0..3)
        .map(|i| k[(i + 1) % 3].min(k[(i + 2) % 3]) as i64 <= n as i64 - d[i] as i64 + 1)
        .collect()
}

/// Whether all three threshold inequalities `min(k_b, k_c) <= n - d_a + 1` hold.
pub fn dls_threshold(f: &ProductFamily) -> Result<bool> {
    require_three_modes(f, "the k-rank threshold")?;
    let prof = KRankProfile::of(f);
    Ok(threshold_clauses(f.n(), &prof.k, &prof.d)
        .iter()
        .all(|&c| c))
}

/// Certificate form of [`dls_threshold`]: certified means the family lies in
/// the threshold regime.
pub(crate) fn check_dls_threshold(f: &ProductFamily) -> Result<Certificate> {
    require_three_modes(f, "the k-rank threshold")?;
    let prof = KRankProfile::of(f);
    let clauses = threshold_clauses(f.n(), &prof.k, &prof.d);
    let w = Witness::Threshold {
        n: f.n(),
        k: prof.k,
        d: prof.d,
        clauses,
    };
    Certificate::new(CriterionId::DlsThreshold, Params::default(), w)
}

/// Evaluates side condition `which` (1, 3, 4 or 5) with `pivot` in the role
/// of the first mode. Conditions 2 and 6 quantify over all coefficient
/// vectors and are only available through the oracle.
pub fn check_dls_side_condition(
    f: &ProductFamily,
    which: u8,
    pivot: usize,
    tau: &TauChoice,
    cap: Option<usize>,
) -> Result<Certificate> {
    require_three_modes(f, "side conditions")?;
    check_pivot(pivot)?;
    let [p, b, c] = mode_order(pivot);
    let n = f.n();
    let prof = KRankProfile::of(f);
    let mut params = Params {
        which: Some(which),
        pivot: Some(pivot + 1),
        ..Params::default()
    };
    let detail = match which {
        1 => {
            let k = vec![prof.k[p], prof.k[b], prof.k[c]];
            let lhs = (k[0] + k[1].min(k[2] - 1)) as i64;
            DlsDetail::KRankSum {
                n,
                k,
                lhs,
                rhs: n as i64 + 1,
            }
        }
        3 => {
            params.max_subset_n = cap;
            let dt = DimTable::with_cap(f, cap);
            let dp = prof.d[p];
            let mut checked = 0u64;
            let mut candidates = Vec::new();
            let mut truncated = false;
            for s in dt.subsets(0, dp)? {
                checked += 1;
                if dt.dim(s, p) == s.len() && dt.dim(s.complement(n), b) == n - s.len() {
                    if candidates.len() < CANDIDATE_LIMIT {
                        candidates.push(s.labels());
                    } else {
                        truncated = true;
                        break;
                    }
                }
            }
            DlsDetail::Projection {
                d_pivot: dp,
                checked,
                candidates,
                truncated,
            }
        }
        4 => {
            let (detail, given) = condition_four(f, p, tau)?;
            match given {
                TauChoice::Given(t) => params.tau = Some(t.iter().map(|&i| i + 1).collect()),
                TauChoice::Exhaustive => params.exhaustive = true,
                TauChoice::Identity => {}
            }
            detail
        }
        5 => DlsDetail::Equal {
            k: prof.k[p],
            d: prof.d[p],
        },
        2 | 6 => {
            return Err(Error::OracleOnly(format!(
                "side condition {which} quantifies over every coefficient vector"
            )))
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "side condition {which} is not one of 1..=6"
            )))
        }
    };
    let w = Witness::DlsSide {
        which,
        pivot: pivot + 1,
        detail,
    };
    let cert = Certificate::new(CriterionId::DlsSide, params, w)?;
    let cert = if which == 3 && cert.status == Status::Certified {
        cert.note(
            "the listed subsets meet both dimension requirements; the projection requirement on each \
             is checked only by the finite-field oracle",
        )
    } else {
        cert
    };
    Ok(cert.note("a side condition implies uniqueness only together with condition U, which is not checked here"))
}

fn check_permutation(t: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if t.len() != n
        || t.iter()
            .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
    {
        return Err(Error::InvalidParameter(format!(
            "tau must be a permutation of 1..={n}"
        )));
    }
    Ok(())
}

/// Echelon test for one permutation: pivots in the leading columns, then for
/// each `a` in `1..d` the columns `a..n` restricted to rows `a..d` must have
/// k-rank at least 2.
fn echelon_for(v: &VectorList, tau: &[usize]) -> (bool, Vec<usize>) {
    let permuted = v.sublist(tau);
    let (red, pivots) = permuted.as_matrix().rref();
    let d = pivots.len();
    if pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return (false, Vec::new());
    }
    let n = tau.len();
    let mut kranks = Vec::new();
    for a in 0..d.saturating_sub(1) {
        let rows: Vec<usize> = (a..d).collect();
        let cols: Vec<usize> = (a..n).collect();
        let block = red.select(&rows, &cols);
        let list =
            VectorList::new(v.field(), rows.len(), block.column_vecs()).expect("block columns");
        let k = k_rank_lenient(&list);
        kranks.push(k);
        if k < 2 {
            break;
        }
    }
    (true, kranks)
}

fn condition_four(f: &ProductFamily, p: usize, tau: &TauChoice) -> Result<(DlsDetail, TauChoice)> {
    let v = f.mode_vectors(p);
    let n = f.n();
    let d = v.span_dim();
    let detail =
        |tau: &[usize], (pivots_ok, kranks): (bool, Vec<usize>), tried| DlsDetail::Echelon {
            d_pivot: d,
            tau: tau.iter().map(|&i| i + 1).collect(),
            pivots_ok,
            kranks,
            tried,
        };
    match tau {
        TauChoice::Identity => {
            let t: Vec<usize> = (0..n).collect();
            Ok((detail(&t, echelon_for(&v, &t), 1), TauChoice::Identity))
        }
        TauChoice::Given(t) => {
            check_permutation(t, n)?;
            Ok((detail(t, echelon_for(&v, t), 1), tau.clone()))
        }
        TauChoice::Exhaustive => {
            if n > MAX_TAU_SEARCH_N {
                return Err(Error::InvalidParameter(format!(
                    "exhaustive permutation search supports n <= {MAX_TAU_SEARCH_N}, got {n}"
                )));
            }
            // Only the ordered independent prefix of length d matters; the
            // remaining indices follow in ascending order.
            let mut tried = 0u64;
            let mut first: Option<(Vec<usize>, (bool, Vec<usize>))> = None;
            let mut prefix = Vec::with_capacity(d);
            let mut found = None;
            prefixes(&v, d, &mut prefix, &mut |pre| {
                tried += 1;
                let mut t = pre.to_vec();
                t.extend((0..n).filter(|i| !pre.contains(i)));
                let res = echelon_for(&v, &t);
                let ok = res.0 && res.1.iter().all(|&k| k >= 2);
                if ok {
                    found = Some((t, res));
                    return true;
                }
                first.get_or_insert((t, res));
                false
            });
            let (t, res) = found.or(first).expect("a spanning prefix exists");
            Ok((detail(&t, res, tried), TauChoice::Exhaustive))
        }
    }
}

/// Visits ordered independent index sequences of length `d`; stops when the
/// visitor returns true.
fn prefixes(
    v: &VectorList,
    d: usize,
    pre: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if pre.len() == d {
        return visit(pre);
    }
    for i in 0..v.len() {
        if pre.contains(&i) {
            continue;
        }
        pre.push(i);
        if v.span_dim_of_indices(pre) == pre.len() && prefixes(v, d, pre, visit) {
            return true;
        }
        pre.pop();
    }
    false
}

/// Side condition 4 for a fixed permutation through quotients: for each
/// `a < d`, the images of `x_{tau(a)}, .., x_{tau(n)}` modulo the span of the
/// earlier factors have k-rank at least 2.
pub fn condition_four_quotient(f: &ProductFamily, pivot: usize, tau: &[usize]) -> Result<bool> {
    require_three_modes(f, "side conditions")?;
    check_pivot(pivot)?;
    let v = f.mode_vectors(pivot);
    let n = f.n();
    check_permutation(tau, n)?;
    let d = v.span_dim();
    for a in 0..d.saturating_sub(1) {
        let earlier: Vec<usize> = tau[..a].to_vec();
        let base = v.span_dim_of_indices(&earlier);
        let rest = &tau[a..];
        // nonzero images
        for &x in rest {
            let mut idx = earlier.clone();
            idx.push(x);
            if v.span_dim_of_indices(&idx) == base {
                return Ok(false);
            }
        }
        // no two images parallel
        for (i, &x) in rest.iter().enumerate() {
            for &y in &rest[i + 1..] {
                let mut idx = earlier.clone();
                idx.extend([x, y]);
                if v.span_dim_of_indices(&idx) < base + 2 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn e(n: usize, i: usize) -> Vec<i64> {
        (0..n).map(|k| i64::from(k == i)).collect()
    }

    fn identity(n: usize) -> ProductFamily {
        let ts: Vec<Vec<Vec<i64>>> = (0..n).map(|a| vec![e(n, a); 3]).collect();
        ProductFamily::from_ints(Field::Rational, &ts).unwrap()
    }

    fn example_8_1() -> ProductFamily {
        let mut ts: Vec<Vec<Vec<i64>>> = (0..4).map(|a| vec![e(4, a); 3]).collect();
        ts.push(vec![vec![0, 1, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 0, 1]]);
        ProductFamily::from_ints(Field::Rational, &ts).unwrap()
    }

    #[test]
    fn condition_s_and_h_on_examples() {
        assert_eq!(
            check_condition_s(&example_8_1(), None).unwrap().status,
            Status::Certified
        );
        assert_eq!(
            check_condition_h(&identity(3), 0, None).unwrap().status,
            Status::Certified
        );
        let h = check_condition_h(&example_8_1(), 0, None).unwrap();
        assert_eq!(h.status, Status::HypothesisFails);
        assert!(h.is_consistent());
        assert_eq!(
            check_condition_h_any(&example_8_1(), None).unwrap().status,
            Status::HypothesisFails
        );
    }

    #[test]
    fn condition_h_gate() {
        let ts = vec![
            vec![e(2, 0), e(2, 0), e(2, 0)],
            vec![e(2, 0), e(2, 1), e(2, 1)],
        ];
        let f = ProductFamily::from_ints(Field::Rational, &ts).unwrap();
        let c = check_condition_h(&f, 0, None).unwrap();
        assert_eq!(
            c.witness,
            Witness::KRankGate {
                pivot: 1,
                k_pivot: 1
            }
        );
        assert_eq!(c.status, Status::HypothesisFails);
        let c = check_condition_c(&f, 0, None).unwrap();
        assert_eq!(c.status, Status::HypothesisFails);
    }

    #[test]
    fn condition_c_on_identity() {
        let c = check_condition_c(&identity(3), 0, None).unwrap();
        assert_eq!(c.status, Status::Certified);
        match c.witness {
            Witness::ConditionC { s, rank, cols, .. } => {
                assert_eq!(s, 2);
                assert_eq!(rank, Some(3));
                assert_eq!(cols, 3);
            }
            w => panic!("{w:?}"),
        }
        assert!(matches!(
            check_condition_c(&identity(3), 0, Some(3)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn threshold_examples() {
        assert!(dls_threshold(&example_8_1()).unwrap());
        assert!(!dls_threshold(&identity(3)).unwrap());
        assert_eq!(
            check_dls_threshold(&example_8_1()).unwrap().status,
            Status::Certified
        );
    }

    #[test]
    fn side_conditions_on_identity() {
        let f = identity(3);
        for which in [1, 3, 4, 5] {
            let c = check_dls_side_condition(&f, which, 0, &TauChoice::Identity, None).unwrap();
            assert_eq!(c.status, Status::Certified, "condition {which}");
            assert!(c.is_consistent());
        }
        assert!(matches!(
            check_dls_side_condition(&f, 2, 0, &TauChoice::Identity, None),
            Err(Error::OracleOnly(_))
        ));
        assert!(check_dls_side_condition(&f, 7, 0, &TauChoice::Identity, None).is_err());
    }

    #[test]
    fn condition_four_block_form() {
        // X_1 = [I_3 | z] with z = (1, 1, 1): every trailing block has k-rank 2
        let cols = [e(3, 0), e(3, 1), e(3, 2), vec![1, 1, 1]];
        let ts: Vec<Vec<Vec<i64>>> = cols
            .iter()
            .map(|c| vec![c.clone(), vec![1], vec![1]])
            .collect();
        let f = ProductFamily::from_ints(Field::Rational, &ts).unwrap();
        let c = check_dls_side_condition(&f, 4, 0, &TauChoice::Identity, None).unwrap();
        assert_eq!(c.status, Status::Certified);
        assert!(condition_four_quotient(&f, 0, &[0, 1, 2, 3]).unwrap());
        // z = (1, 0, 1): rows 2..3 of columns 2..4 are e1, e2, (0, 1) -> parallel pair
        let cols = [e(3, 0), e(3, 1), e(3, 2), vec![1, 0, 1]];
        let ts: Vec<Vec<Vec<i64>>> = cols
            .iter()
            .map(|c| vec![c.clone(), vec![1], vec![1]])
            .collect();
        let g = ProductFamily::from_ints(Field::Rational, &ts).unwrap();
        let c = check_dls_side_condition(&g, 4, 0, &TauChoice::Identity, None).unwrap();
        assert_eq!(c.status, Status::HypothesisFails);
        assert!(!condition_four_quotient(&g, 0, &[0, 1, 2, 3]).unwrap());
        let c = check_dls_side_condition(&g, 4, 0, &TauChoice::Exhaustive, None).unwrap();
        assert!(c.is_consistent());
    }
}
