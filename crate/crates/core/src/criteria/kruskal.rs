//! Kruskal-type criteria: the k-rank and per-subset dimension inequalities,
//! their mode-regrouped forms, the splitting corollary and the interpolating
//! and non-rank families.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matroid::separator_search;
use crate::subset::{block_mask, Partition, Subset};
use crate::tensor::{k_rank, validate_partition, DimTable, KRankProfile, ProductFamily};

use super::{
    ceil_div, excess_plus_one, require_modes, scan, to_labels, Certificate, CriterionId, Params,
    Status, SubsetRecord, SubsetRule, TripartitionRecord, Witness,
};

/// Largest `m` for the exhaustive partition search.
pub const MAX_EXHAUSTIVE_MODES: usize = 8;
/// Largest `m` for the tripartition search.
pub const MAX_TRIPARTITION_MODES: usize = 12;
/// Recorded partition choices beyond this are dropped.
const CHOICE_LIMIT: usize = 4096;

/// How [`check_reshaped_kgen`] looks for a mode partition per subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionStrategy {
    /// Every set partition of the modes.
    Exhaustive,
    /// Only these partitions (0-based modes), tried in order.
    Fixed(Vec<Partition>),
}

/// `2n <= sum_j (k_j - 1) + 1`.
pub fn check_kruskal(f: &ProductFamily) -> Result<Certificate> {
    require_modes(f, 3, "kruskal")?;
    let prof = KRankProfile::of(f);
    let n = f.n();
    let witness = Witness::KRanks {
        n,
        lhs: 2 * n as i64,
        rhs: excess_plus_one(&prof.k),
        k: prof.k,
    };
    let cert = Certificate::new(CriterionId::Kruskal, Params::default(), witness)?;
    Ok(conclude_unique(cert))
}

/// `2|S| <= sum_j (d_j^S - 1) + 1` for every `S` with `|S| >= 2`.
pub fn check_kgen(f: &ProductFamily, cap: Option<usize>) -> Result<Certificate> {
    require_modes(f, 3, "kgen")?;
    let dt = DimTable::with_cap(f, cap);
    let cert = Certificate::new(
        CriterionId::Kgen,
        cap_params(cap),
        scan(&dt, SubsetRule::Kgen)?,
    )?;
    Ok(conclude_unique(cert))
}

fn cap_params(cap: Option<usize>) -> Params {
    Params {
        max_subset_n: cap,
        ..Params::default()
    }
}

fn conclude_unique(c: Certificate) -> Certificate {
    if c.status == Status::Certified {
        c.note("the sum is its unique tensor rank decomposition")
    } else {
        c
    }
}

/// Best regrouping for one subset: maximizes `sum_i (d_{J_i}^S - 1)` over set
/// partitions of the modes by dynamic programming on mode masks.
fn best_partition(dt: &DimTable<'_>, s: Subset, m: usize) -> (Partition, Vec<usize>) {
    let full = (1u32 << m) - 1;
    let mut best = vec![i64::MIN; 1 << m];
    let mut pick = vec![0u32; 1 << m];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // blocks containing the lowest mode of `mask`
        let mut sub = rest;
        loop {
            let block = sub | low;
            let val = dt.dim_grouped(s, block) as i64 - 1 + best[(mask ^ block) as usize];
            if val > best[mask as usize] {
                best[mask as usize] = val;
                pick[mask as usize] = block;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut blocks = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let b = pick[mask as usize];
        blocks.push((0..m).filter(|j| b >> j & 1 == 1).collect::<Vec<_>>());
        mask ^= b;
    }
    blocks.sort();
    let dims = blocks.iter().map(|b| dt.dim_block(s, b)).collect();
    (blocks, dims)
}

/// Per subset `S`, some partition `J_1, .., J_t` of the modes with
/// `2|S| <= sum_i (d_{J_i}^S - 1) + 1`. Subsets that pass with every mode on
/// its own are not listed in the witness.
pub fn check_reshaped_kgen(
    f: &ProductFamily,
    strategy: &PartitionStrategy,
    cap: Option<usize>,
) -> Result<Certificate> {
    require_modes(f, 3, "reshaped-kgen")?;
    let m = f.m();
    if let PartitionStrategy::Fixed(ps) = strategy {
        for p in ps {
            validate_partition(p, m)?;
        }
    } else if m > MAX_EXHAUSTIVE_MODES {
        return Err(Error::InvalidParameter(format!(
            "exhaustive partition search supports at most {MAX_EXHAUSTIVE_MODES} modes, got {m}"
        )));
    }
    let dt = DimTable::with_cap(f, cap);
    let n = f.n();
    let mut checked = 0u64;
    let mut choices = Vec::new();
    let mut truncated = false;
    let mut violation = None;
    for s in dt.subsets(2, n)? {
        checked += 1;
        let dims = dt.dims(s);
        if SubsetRule::Kgen.holds(s.len(), &dims) {
            continue;
        }
        let (blocks, bdims) = match strategy {
            PartitionStrategy::Exhaustive => best_partition(&dt, s, m),
            PartitionStrategy::Fixed(ps) => {
                let scored = ps.iter().map(|p| {
                    let mut p = p.clone();
                    for b in &mut p {
                        b.sort_unstable();
                    }
                    p.sort();
                    let d: Vec<usize> = p.iter().map(|b| dt.dim_block(s, b)).collect();
                    (p, d)
                });
                // first passing partition, else the one with the largest right-hand side
                let mut best: Option<(Partition, Vec<usize>)> = None;
                for (p, d) in scored {
                    if SubsetRule::Kgen.holds(s.len(), &d) {
                        best = Some((p, d));
                        break;
                    }
                    if best
                        .as_ref()
                        .map_or(true, |(_, bd)| excess_plus_one(&d) > excess_plus_one(bd))
                    {
                        best = Some((p, d));
                    }
                }
                best.unwrap_or_else(|| ((0..m).map(|j| vec![j]).collect(), dims.clone()))
            }
        };
        let mut rec = SubsetRecord::new(s, bdims, SubsetRule::Kgen.evaluate(s.len(), &[]));
        rec.rhs = excess_plus_one(&rec.dims);
        rec.partition = Some(to_labels(&blocks));
        if rec.lhs > rec.rhs {
            violation = Some(rec);
            break;
        }
        if choices.len() < CHOICE_LIMIT {
            choices.push(rec);
        } else {
            truncated = true;
        }
    }
    let mut params = cap_params(cap);
    if let PartitionStrategy::Fixed(ps) = strategy {
        params.partitions = Some(ps.iter().map(|p| to_labels(p)).collect());
    }
    let witness = Witness::PartitionScan {
        n,
        checked,
        choices,
        truncated,
        violation,
    };
    Ok(conclude_unique(Certificate::new(
        CriterionId::ReshapedKgen,
        params,
        witness,
    )?))
}

/// Set partitions of `0..m` into exactly three blocks, in restricted-growth order.
fn tripartitions(m: usize) -> Vec<Partition> {
    fn go(i: usize, m: usize, used: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == m {
            if used == 3 {
                let mut p = vec![Vec::new(); 3];
                for (j, &b) in rgs.iter().enumerate() {
                    p[b].push(j);
                }
                out.push(p);
            }
            return;
        }
        // the remaining modes must be able to open the missing blocks
        if 3 - used > m - i {
            return;
        }
        for b in 0..=used.min(2) {
            rgs.push(b);
            go(i + 1, m, used.max(b + 1), rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, 0, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Some tripartition `J, K, L` of the modes with `2n <= k_J + k_K + k_L - 2`.
pub fn check_reshaped_kruskal(f: &ProductFamily) -> Result<Certificate> {
    require_modes(f, 3, "reshaped-kruskal")?;
    let m = f.m();
    if m > MAX_TRIPARTITION_MODES {
        return Err(Error::InvalidParameter(format!(
            "tripartition search supports at most {MAX_TRIPARTITION_MODES} modes, got {m}"
        )));
    }
    let dt = DimTable::new(f);
    let n = f.n();
    let lhs = 2 * n as i64;
    let mut kcache: HashMap<u32, usize> = HashMap::new();
    let mut kr = |mask: u32| {
        *kcache
            .entry(mask)
            .or_insert_with(|| k_rank(&dt.grouped(mask)).expect("grouped factors are nonzero"))
    };
    let mut tried = 0u64;
    let mut best: Option<TripartitionRecord> = None;
    for p in tripartitions(m) {
        tried += 1;
        let k: Vec<usize> = p.iter().map(|b| kr(block_mask(b))).collect();
        let rhs = k.iter().map(|&v| v as i64).sum::<i64>() - 2;
        if best.as_ref().map_or(true, |b| rhs > b.rhs) {
            best = Some(TripartitionRecord {
                blocks: to_labels(&p),
                k,
                lhs,
                rhs,
            });
        }
        if lhs <= rhs {
            break;
        }
    }
    let witness = Witness::Tripartition { n, tried, best };
    let c = Certificate::new(CriterionId::ReshapedKruskal, Params::default(), witness)?;
    Ok(if c.status == Status::HypothesisFails {
        c.note("no tripartition of the modes satisfies the inequality; the best one is recorded")
    } else {
        conclude_unique(c)
    })
}

/// `n <= sum_j (d_j - 1) + 1`, in which case the family splits and a separator
/// is attached.
pub fn check_split_corollary(f: &ProductFamily) -> Result<Certificate> {
    let n = f.n();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "splitting needs at least 2 tensors".into(),
        ));
    }
    let d: Vec<usize> = (0..f.m()).map(|j| f.mode_vectors(j).span_dim()).collect();
    let (lhs, rhs) = (n as i64, excess_plus_one(&d));
    let separator = if lhs <= rhs {
        let sep = separator_search(&f.assembled())?.ok_or_else(|| {
            Error::Internal("dimension count guarantees a separator but none exists".into())
        })?;
        Some(sep.labels())
    } else {
        None
    };
    let witness = Witness::Split {
        n,
        d,
        lhs,
        rhs,
        separator,
    };
    let c = Certificate::new(CriterionId::SplitCorollary, Params::default(), witness)?;
    Ok(if c.status == Status::Certified {
        c.note("the family splits")
    } else {
        c
    })
}

/// `|S| + min(|S|, r) <= sum_j (d_j^S - 1) + 1` for every `S` with `|S| >= 2`.
pub fn check_low_rank_uniqueness(
    f: &ProductFamily,
    r: usize,
    cap: Option<usize>,
) -> Result<Certificate> {
    let n = f.n();
    if r > n {
        return Err(Error::InvalidParameter(format!(
            "r = {r} must lie in 0..={n}"
        )));
    }
    let dt = DimTable::with_cap(f, cap);
    let params = Params {
        r: Some(r),
        ..cap_params(cap)
    };
    let c = Certificate::new(
        CriterionId::LowRank,
        params,
        scan(&dt, SubsetRule::LowRank { r })?,
    )?;
    Ok(if c.status == Status::Certified {
        let c = c.note(format!(
            "every tensor of rank at most {r} in the span is, uniquely, a combination of at most {r} family members"
        ));
        match r {
            0 => c.note("the family is linearly independent"),
            1 => c.note("the only product tensors in the span are multiples of family members"),
            _ => c,
        }
    } else {
        c
    })
}

/// `min(2|S|, |S| + r) <= sum_j (d_j^S - 1) + 1` for `s + 1 <= |S| <= n`.
pub fn check_subpartition_interp(
    f: &ProductFamily,
    s: usize,
    r: usize,
    cap: Option<usize>,
) -> Result<Certificate> {
    let n = f.n();
    if s == 0 || s >= n {
        return Err(Error::InvalidParameter(format!(
            "s = {s} must lie in 1..={}",
            n.saturating_sub(1)
        )));
    }
    if r > n {
        return Err(Error::InvalidParameter(format!(
            "r = {r} must lie in 0..={n}"
        )));
    }
    let dt = DimTable::with_cap(f, cap);
    let params = Params {
        r: Some(r),
        s: Some(s),
        ..cap_params(cap)
    };
    let c = Certificate::new(
        CriterionId::Interpolation,
        params,
        scan(&dt, SubsetRule::Interpolation { s, r })?,
    )?;
    Ok(if c.status == Status::Certified {
        c.note(format!(
            "for every S with |S| > {s} and every decomposition of a combination over S into at most {r} terms, \
             the pair has an ({s}, ceil(|S|/{s}))-partition"
        ))
    } else {
        c
    })
}

/// Upper end of the admissible `r` range for irreducible pairs: `n + ceil((n - q)/s)`.
pub fn nonrank_irreducible_r_max(n: usize, q: usize, s: usize) -> usize {
    n + ceil_div(n as i64 - q as i64, s as i64) as usize
}

/// Upper end of the admissible `r` range without irreducibility:
/// `ceil((s + 1)(n - q + s)/s) - 1`.
pub fn nonrank_general_r_max(n: usize, q: usize, s: usize) -> usize {
    (ceil_div((s as i64 + 1) * (n as i64 - q as i64 + s as i64), s as i64) - 1) as usize
}

fn nonrank_ranges(n: usize, q: usize, s: usize, r: usize, r_max: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 tensors".into()));
    }
    if q == 0 || q >= n {
        return Err(Error::InvalidParameter(format!(
            "q = {q} must lie in 1..={}",
            n - 1
        )));
    }
    if s == 0 || s > q {
        return Err(Error::InvalidParameter(format!(
            "s = {s} must lie in 1..={q}"
        )));
    }
    if r < n + 1 || r > r_max {
        return Err(Error::InvalidParameter(format!(
            "r = {r} must lie in {}..={r_max}",
            n + 1
        )));
    }
    Ok(())
}

/// The non-rank inequality for irreducible pairs of decompositions.
pub fn check_nonrank_irreducible(
    f: &ProductFamily,
    q: usize,
    s: usize,
    r: usize,
    cap: Option<usize>,
) -> Result<Certificate> {
    let n = f.n();
    nonrank_ranges(n, q, s, r, nonrank_irreducible_r_max(n, q, s))?;
    let dt = DimTable::with_cap(f, cap);
    let params = Params {
        q: Some(q),
        s: Some(s),
        r: Some(r),
        ..cap_params(cap)
    };
    let rule = SubsetRule::NonrankIrreducible { n, q, s, r };
    let c = Certificate::new(CriterionId::NonrankIrreducible, params, scan(&dt, rule)?)?;
    Ok(if c.status == Status::Certified {
        c.note(format!(
            "every irreducible pair with a second decomposition into {r} terms has an ({s}, {})-subpartition",
            q / s
        ))
    } else {
        c
    })
}

/// The stricter non-rank inequality that needs no irreducibility.
pub fn check_nonrank_general(
    f: &ProductFamily,
    q: usize,
    s: usize,
    r: usize,
    cap: Option<usize>,
) -> Result<Certificate> {
    let n = f.n();
    nonrank_ranges(n, q, s, r, nonrank_general_r_max(n, q, s))?;
    let dt = DimTable::with_cap(f, cap);
    let params = Params {
        q: Some(q),
        s: Some(s),
        r: Some(r),
        ..cap_params(cap)
    };
    let rule = SubsetRule::NonrankGeneral { n, q, s, r };
    let c = Certificate::new(CriterionId::NonrankGeneral, params, scan(&dt, rule)?)?;
    Ok(if c.status == Status::Certified {
        c.note(format!(
            "every second decomposition into {r} terms forms a pair with an ({s}, {})-subpartition",
            q / s
        ))
    } else {
        c
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::tensor::mode_group;

    fn q() -> Field {
        Field::Rational
    }

    fn e(n: usize, i: usize) -> Vec<i64> {
        (0..n).map(|k| i64::from(k == i)).collect()
    }

    fn identity(n: usize, m: usize) -> ProductFamily {
        let ts: Vec<Vec<Vec<i64>>> = (0..n).map(|a| vec![e(n, a); m]).collect();
        ProductFamily::from_ints(q(), &ts).unwrap()
    }

    fn example_8_1() -> ProductFamily {
        let mut ts: Vec<Vec<Vec<i64>>> = (0..4).map(|a| vec![e(4, a); 3]).collect();
        ts.push(vec![vec![0, 1, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 0, 1]]);
        ProductFamily::from_ints(q(), &ts).unwrap()
    }

    #[test]
    fn kruskal_on_identity_and_example() {
        let c = check_kruskal(&identity(3, 3)).unwrap();
        assert_eq!(c.status, Status::Certified);
        assert!(c.is_consistent());
        let c = check_kruskal(&example_8_1()).unwrap();
        assert_eq!(c.status, Status::HypothesisFails);
        assert_eq!(
            c.witness,
            Witness::KRanks {
                n: 5,
                k: vec![2, 2, 2],
                lhs: 10,
                rhs: 4
            }
        );
    }

    #[test]
    fn kruskal_arithmetic_with_k_221() {
        // k = (2, 2, 1): 4 <= 3 fails
        let f = ProductFamily::from_ints(
            q(),
            &[
                vec![e(2, 0), e(2, 0), e(1, 0)],
                vec![e(2, 1), e(2, 1), e(1, 0)],
            ],
        )
        .unwrap();
        let c = check_kruskal(&f).unwrap();
        assert_eq!(c.status, Status::HypothesisFails);
    }

    #[test]
    fn kgen_example_and_pair() {
        let c = check_kgen(&example_8_1(), None).unwrap();
        assert_eq!(c.status, Status::Certified);
        let f = ProductFamily::from_ints(
            q(),
            &[
                vec![e(2, 0), e(2, 0), e(2, 0)],
                vec![e(2, 0), e(2, 1), e(2, 1)],
            ],
        )
        .unwrap();
        let c = check_kgen(&f, None).unwrap();
        assert_eq!(c.status, Status::HypothesisFails);
        match &c.witness {
            Witness::SubsetScan {
                violation: Some(v), ..
            } => {
                assert_eq!(v.subset, vec![1, 2]);
                assert_eq!(v.dims, vec![1, 2, 2]);
                assert_eq!((v.lhs, v.rhs), (4, 3));
            }
            w => panic!("unexpected witness {w:?}"),
        }
        assert!(c.recheck(&f).unwrap());
    }

    #[test]
    fn modes_below_three_are_errors() {
        let f = ProductFamily::from_ints(q(), &[vec![e(2, 0), e(2, 0)]]).unwrap();
        assert!(check_kruskal(&f).is_err());
        assert!(check_kgen(&f, None).is_err());
    }

    #[test]
    fn tripartition_counts() {
        // Stirling numbers of the second kind S(m, 3)
        for (m, want) in [(3, 1), (4, 6), (5, 25), (6, 90), (7, 301)] {
            let t = tripartitions(m);
            assert_eq!(t.len(), want, "m = {m}");
            assert!(t
                .iter()
                .all(|p| p.len() == 3 && validate_partition(p, m).is_ok()));
        }
    }

    #[test]
    fn reshaped_kgen_groups_last_two_modes() {
        let ts = vec![
            vec![e(4, 0), vec![1, 0], vec![1, 0], vec![1, 0]],
            vec![e(4, 1), vec![0, 1], vec![0, 1], vec![0, 1]],
            vec![e(4, 2), vec![1, 1], vec![1, 1], vec![1, 3]],
            vec![e(4, 3), vec![1, 2], vec![1, 2], vec![1, 5]],
        ];
        let f = ProductFamily::from_ints(q(), &ts).unwrap();
        let dt = DimTable::new(&f);
        assert_eq!(dt.dim_grouped(dt.full(), 0b1100), 4);
        let k = check_kgen(&f, None).unwrap();
        assert_eq!(k.status, Status::HypothesisFails);
        let c = check_reshaped_kgen(&f, &PartitionStrategy::Exhaustive, None).unwrap();
        assert_eq!(c.status, Status::Certified);
        assert!(c.is_consistent());
        match &c.witness {
            Witness::PartitionScan { choices, .. } => {
                assert_eq!(choices.len(), 1);
                assert_eq!(choices[0].subset, vec![1, 2, 3, 4]);
                // modes 2 and 3 carry the same factors, so only pairing one of them with mode 4 helps
                let p = choices[0].partition.as_ref().unwrap();
                assert!(
                    p == &vec![vec![1], vec![2], vec![3, 4]]
                        || p == &vec![vec![1], vec![2, 4], vec![3]]
                );
                assert_eq!(choices[0].rhs, 8);
            }
            w => panic!("{w:?}"),
        }
        let fixed = PartitionStrategy::Fixed(vec![vec![vec![0], vec![1, 2], vec![3]]]);
        assert_eq!(
            check_reshaped_kgen(&f, &fixed, None).unwrap().status,
            Status::HypothesisFails
        );
    }

    #[test]
    fn reshaped_kgen_reports_violation() {
        // x_a = u_a (x) u_a (x) 1 (x) 1; for S = {1, 2} no grouping beats rhs 3 < 4
        let u = [vec![1, 0], vec![0, 1], vec![1, 1]];
        let ts: Vec<Vec<Vec<i64>>> = u
            .iter()
            .map(|v| vec![v.clone(), v.clone(), vec![1], vec![1]])
            .collect();
        let f = ProductFamily::from_ints(q(), &ts).unwrap();
        let c = check_reshaped_kgen(&f, &PartitionStrategy::Exhaustive, None).unwrap();
        assert_eq!(c.status, Status::HypothesisFails);
        match &c.witness {
            Witness::PartitionScan {
                violation: Some(v), ..
            } => {
                assert_eq!(v.subset, vec![1, 2]);
                assert!(v.partition.is_some());
            }
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn reshaped_kruskal_with_generic_factors() {
        let p = Field::prime(101).unwrap();
        let ts: Vec<Vec<Vec<i64>>> = (0..3)
            .map(|a| {
                (0..5)
                    .map(|j| vec![1, (7 * a as i64 + 3 * j as i64 * j as i64 + 2) % 101])
                    .collect()
            })
            .collect();
        let f = ProductFamily::from_ints(p, &ts).unwrap();
        let c = check_reshaped_kruskal(&f).unwrap();
        assert_eq!(c.status, Status::Certified);
        assert!(c.is_consistent());
        let g = mode_group(&f, &[vec![0], vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(check_kruskal(&g).unwrap().status, Status::Certified);
    }

    #[test]
    fn reshaped_kruskal_all_parallel_fails() {
        let ts: Vec<Vec<Vec<i64>>> = (0..3).map(|_| vec![vec![1, 1]; 4]).collect();
        let f = ProductFamily::from_ints(q(), &ts).unwrap();
        let c = check_reshaped_kruskal(&f).unwrap();
        assert_eq!(c.status, Status::HypothesisFails);
        assert!(c.is_consistent());
        assert!(!c.notes.is_empty());
    }

    #[test]
    fn split_corollary_examples() {
        let f = identity(2, 2);
        let c = check_split_corollary(&f).unwrap();
        assert_eq!(c.status, Status::Certified);
        match &c.witness {
            Witness::Split {
                separator: Some(s), ..
            } => assert_eq!(s, &vec![1]),
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn low_rank_identity() {
        let c = check_low_rank_uniqueness(&identity(4, 3), 4, None).unwrap();
        assert_eq!(c.status, Status::Certified);
        assert!(check_low_rank_uniqueness(&identity(4, 3), 5, None).is_err());
    }

    #[test]
    fn interpolation_identity() {
        let c = check_subpartition_interp(&identity(4, 3), 2, 4, None).unwrap();
        assert_eq!(c.status, Status::Certified);
        assert!(check_subpartition_interp(&identity(4, 3), 4, 4, None).is_err());
        assert!(check_subpartition_interp(&identity(4, 3), 0, 4, None).is_err());
    }

    #[test]
    fn nonrank_identity_example() {
        for n in 3..=7 {
            let c = check_nonrank_irreducible(&identity(n, 3), n - 2, 1, n + 1, None).unwrap();
            assert_eq!(c.status, Status::Certified, "n = {n}");
        }
        // n = 2 admits no q with s <= q and the range nonempty beyond q = 1
        assert!(check_nonrank_irreducible(&identity(2, 3), 2, 1, 3, None).is_err());
    }

    #[test]
    fn nonrank_general_full_range() {
        // s = n - 1 forces q = n - 1 and r = n + 1
        let n = 4;
        assert_eq!(nonrank_general_r_max(n, n - 1, n - 1), n + 1);
        let c = check_nonrank_general(&identity(n, 3), n - 1, n - 1, n + 1, None).unwrap();
        // 2n + 1 <= sum (d_j - 1) + 1 = 3(n - 1) + 1
        assert_eq!(c.status, Status::of(2 * n + 1 <= 3 * (n - 1) + 1));
    }
}
