//! Subsets of small index sets as bitmasks, in one global enumeration order:
//! by size, then lexicographically on the sorted index lists.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Default ceiling on `n` for exhaustive subset scans.
pub const DEFAULT_SUBSET_CAP: usize = 22;
/// Environment variable that raises or lowers [`DEFAULT_SUBSET_CAP`].
pub const SUBSET_CAP_ENV: &str = "KRUSKAL_CERT_MAX_SUBSET_N";
/// Bitmask width.
pub const MAX_INDEX: usize = 63;

/// The cap in force: the environment override when set and valid.
pub fn subset_cap() -> usize {
    std::env::var(SUBSET_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.min(MAX_INDEX))
        .unwrap_or(DEFAULT_SUBSET_CAP)
}

/// Fails when `n` exceeds `cap` (or [`subset_cap`] when `cap` is `None`).
pub fn check_cap(n: usize, cap: Option<usize>) -> Result<()> {
    let cap = cap.unwrap_or_else(subset_cap).min(MAX_INDEX);
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    Ok(())
}

/// Fails when scanning the sizes `lo..=hi` of `0..n` would visit more subsets
/// than a full scan at the cap allows. Full scans therefore need `n <= cap`,
/// while scans of a few sizes near `n` stay available for larger `n`.
pub fn check_scan(n: usize, lo: usize, hi: usize, cap: Option<usize>) -> Result<()> {
    let cap = cap.unwrap_or_else(subset_cap).min(MAX_INDEX);
    if n > MAX_INDEX {
        return Err(Error::EnumerationCap { n, cap });
    }
    let count = (lo..=hi.min(n)).fold(0u64, |acc, k| acc.saturating_add(binomial(n, k)));
    if count > 1u64 << cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    Ok(())
}

/// A subset of `{0, .., 62}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub fn empty() -> Subset {
        Subset(0)
    }

    pub fn full(n: usize) -> Subset {
        debug_assert!(n <= MAX_INDEX);
        Subset(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn from_indices(idx: &[usize]) -> Subset {
        Subset(idx.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn complement(&self, n: usize) -> Subset {
        Subset(Subset::full(n).0 & !self.0)
    }

    pub fn union(&self, o: Subset) -> Subset {
        Subset(self.0 | o.0)
    }

    pub fn intersection(&self, o: Subset) -> Subset {
        Subset(self.0 & o.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        })
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// 1-based indices, as they appear in certificates.
    pub fn labels(&self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    pub fn from_labels(labels: &[usize]) -> Result<Subset> {
        let mut s = Subset::empty();
        for &l in labels {
            if l == 0 || l > MAX_INDEX {
                return Err(Error::InvalidParameter(format!("index {l} out of range")));
            }
            s.insert(l - 1);
        }
        Ok(s)
    }
}

/// Size first, then lexicographic on sorted index lists.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// k-element subsets of `0..n` as sorted index vectors, in lexicographic order.
pub struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations {
        n,
        cur: (k <= n).then(|| (0..k).collect()),
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut c = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if c[i] < self.n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                self.cur = Some(c);
                break;
            }
        }
        Some(out)
    }
}

/// Subsets of `0..n` with `lo <= |S| <= hi`, in the global order.
pub fn subsets_by_size(n: usize, lo: usize, hi: usize) -> impl Iterator<Item = Subset> {
    (lo..=hi.min(n)).flat_map(move |k| combinations(n, k).map(|c| Subset::from_indices(&c)))
}

/// Binomial coefficient, saturating.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// A set partition of `0..m`: blocks sorted internally and by least element.
pub type Partition = Vec<Vec<usize>>;

/// Every set partition of `0..m`, in restricted-growth-string order.
pub fn set_partitions(m: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if m == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut rgs = vec![0usize; m];
    loop {
        let blocks = rgs.iter().max().unwrap() + 1;
        let mut p: Partition = vec![Vec::new(); blocks];
        for (i, &b) in rgs.iter().enumerate() {
            p[b].push(i);
        }
        out.push(p);
        // advance
        let mut i = m - 1;
        loop {
            if i == 0 {
                return out;
            }
            let bound = rgs[..i].iter().max().unwrap() + 1;
            if rgs[i] < bound {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Mask of a block of modes.
pub fn block_mask(block: &[usize]) -> u32 {
    block.iter().fold(0, |m, &j| m | (1 << j))
}
