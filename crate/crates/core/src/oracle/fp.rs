//! Plain `u64` arithmetic modulo a small prime, kept separate from the exact
//! field layer so the oracle does not share code with what it checks.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Gf {
    pub p: u64,
}

impl Gf {
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    /// `a - c * b` entrywise.
    pub fn axpy_neg(self, a: &[u64], c: u64, b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.sub(x, self.mul(c, y)))
            .collect()
    }

    pub fn kron(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| self.mul(x, y)))
            .collect()
    }

    /// Scales `v` so its first nonzero entry is 1; returns the scaled vector and
    /// that entry, or `None` for the zero vector.
    pub fn normalize(self, v: &[u64]) -> Option<(Vec<u64>, u64)> {
        let lead = *v.iter().find(|&&x| x != 0)?;
        let li = self.inv(lead);
        Some((v.iter().map(|&x| self.mul(x, li)).collect(), lead))
    }

    pub fn rank(self, mut rows: Vec<Vec<u64>>) -> usize {
        let width = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..width {
            let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][col]);
            let pivot: Vec<u64> = rows[rank].iter().map(|&x| self.mul(x, inv)).collect();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[col] != 0 {
                    *row = self.axpy_neg(row, row[col], &pivot);
                }
            }
            rows[rank] = pivot;
            rank += 1;
        }
        rank
    }

    /// Projective points of `F_p^d`: vectors whose first nonzero entry is 1.
    pub fn projective_points(self, d: usize) -> Vec<Vec<u64>> {
        self.projective_points_iter(d).collect()
    }

    pub fn projective_points_iter(self, d: usize) -> impl Iterator<Item = Vec<u64>> {
        let p = self.p;
        (0..d).flat_map(move |lead| {
            let tail = d - lead - 1;
            (0..p.pow(tail as u32)).map(move |mut code| {
                let mut v = vec![0; d];
                v[lead] = 1;
                for x in v[lead + 1..].iter_mut().rev() {
                    *x = code % p;
                    code /= p;
                }
                v
            })
        })
    }

    pub fn dot(self, a: &[u64], b: &[u64]) -> u64 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| (acc + x * y) % self.p)
    }

    /// Projective points of the span of the independent vectors `basis`.
    pub fn span_points(self, basis: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let width = basis.first().map_or(0, Vec::len);
        self.projective_points_iter(basis.len())
            .map(|c| {
                let v = c.iter().zip(basis).fold(vec![0; width], |acc, (&x, b)| {
                    acc.iter()
                        .zip(b)
                        .map(|(&a, &y)| self.add(a, self.mul(x, y)))
                        .collect()
                });
                self.normalize(&v).expect("independent basis").0
            })
            .collect()
    }

    /// Basis of `{y : <y, r> = 0 for every row r}` in `F_p^width`.
    pub fn nullspace(self, rows: &[Vec<u64>], width: usize) -> Vec<Vec<u64>> {
        let mut a: Vec<Vec<u64>> = rows.to_vec();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..width {
            let Some(piv) = (rank..a.len()).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(rank, piv);
            let inv = self.inv(a[rank][col]);
            let pivot: Vec<u64> = a[rank].iter().map(|&x| self.mul(x, inv)).collect();
            for (i, row) in a.iter_mut().enumerate() {
                if i != rank && row[col] != 0 {
                    *row = self.axpy_neg(row, row[col], &pivot);
                }
            }
            a[rank] = pivot;
            pivots.push(col);
            rank += 1;
        }
        (0..width)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut y = vec![0; width];
                y[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    y[pc] = self.sub(0, a[r][free]);
                }
                y
            })
            .collect()
    }

    /// Smallest `k` such that some `k + 1` of the vectors are dependent.
    pub fn k_rank(self, vs: &[Vec<u64>]) -> usize {
        let n = vs.len();
        for k in 1..=n {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                if self.rank(idx.iter().map(|&i| vs[i].clone()).collect()) < k {
                    return k - 1;
                }
                let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
                    break;
                };
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_counts() {
        for (p, d) in [(2u64, 1usize), (2, 2), (2, 3), (3, 2), (5, 3)] {
            let pts = Gf { p }.projective_points(d);
            assert_eq!(pts.len() as u64, (p.pow(d as u32) - 1) / (p - 1));
        }
    }

    #[test]
    fn small_ranks() {
        let g = Gf { p: 3 };
        assert_eq!(g.rank(vec![vec![1, 2], vec![2, 1]]), 1);
        assert_eq!(g.rank(vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]]), 3);
        assert_eq!(g.k_rank(&[vec![1, 0], vec![0, 1], vec![1, 1]]), 2);
        assert_eq!(g.k_rank(&[vec![1, 0], vec![2, 0]]), 1);
        assert_eq!(g.inv(2), 2);
        let rows = vec![vec![1, 2, 0], vec![0, 1, 1]];
        let ns = g.nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert_eq!(
                r.iter()
                    .zip(&ns[0])
                    .fold(0, |acc, (&a, &b)| g.add(acc, g.mul(a, b))),
                0
            );
        }
    }
}
