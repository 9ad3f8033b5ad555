//! Exact linear algebra over [`Field`]: rank, spans, solving, compound
//! matrices and Kronecker-type products.
//!
//! Rank over GF(p) runs on raw residues. Rank over the rationals clears
//! denominators row by row and runs fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{denominator_lcm, mul_mod, pow_mod, Field, Scalar};
use crate::subset::{binomial, combinations, Subset};

/// Dense row-major matrix over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<Scalar>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, rows.len(), cols, rows.concat())
    }

    /// The matrix whose columns are `cols`, each of length `dim`.
    pub fn from_columns(field: Field, dim: usize, cols: &[Vec<Scalar>]) -> Result<Matrix> {
        if cols.iter().any(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Matrix::zeros(field, dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        if m.data.iter().any(|x| x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows || self.field != o.field {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * o.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Matrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(
            self.field,
            self.cols,
            self.data.chunks(self.cols.max(1)).take(self.rows),
        )
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = -red.get(r, f);
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("pivot");
            for i in c + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }
}

/// Rank of a list of equal-length rows over `field`.
pub fn rank_of_rows<'a, I>(field: Field, width: usize, rows: I) -> usize
where
    I: IntoIterator<Item = &'a [Scalar]>,
{
    match field {
        Field::Prime { p } => {
            let rows: Vec<Vec<u64>> = rows
                .into_iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.as_residue().expect("modular scalar"))
                        .collect()
                })
                .collect();
            rank_mod_p(rows, width, p)
        }
        Field::Rational => {
            let rows: Vec<Vec<BigInt>> = rows.into_iter().map(clear_denominators).collect();
            rank_bareiss(rows, width)
        }
    }
}

fn clear_denominators(row: &[Scalar]) -> Vec<BigInt> {
    let qs: Vec<&BigRational> = row
        .iter()
        .map(|x| x.as_rational().expect("rational scalar"))
        .collect();
    let l = denominator_lcm(qs.iter().copied());
    qs.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

/// Rank over GF(p) of residue rows; consumes the rows.
pub fn rank_mod_p(mut a: Vec<Vec<u64>>, width: usize, p: u64) -> usize {
    let n = a.len();
    let mut r = 0;
    for c in 0..width {
        if r == n {
            break;
        }
        let Some(piv) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = pow_mod(a[r][c], p - 2, p);
        for i in r + 1..n {
            if a[i][c] == 0 {
                continue;
            }
            let f = mul_mod(a[i][c], inv, p);
            for j in c..width {
                let s = mul_mod(f, a[r][j], p);
                a[i][j] = if a[i][j] >= s {
                    a[i][j] - s
                } else {
                    a[i][j] + p - s
                };
            }
        }
        r += 1;
    }
    r
}

/// Fraction-free elimination over the integers.
fn rank_bareiss(mut a: Vec<Vec<BigInt>>, width: usize) -> usize {
    let n = a.len();
    let mut r = 0;
    let mut prev = BigInt::from(1);
    for c in 0..width {
        if r == n {
            break;
        }
        let Some(piv) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let (head, tail) = a.split_at_mut(r + 1);
        let pr = &head[r];
        for row in tail.iter_mut() {
            for j in c + 1..width {
                row[j] = (&pr[c] * &row[j] - &row[c] * &pr[j]) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pr[c].clone();
        r += 1;
    }
    r
}

/// A finite list of vectors of one dimension over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorList {
    field: Field,
    dim: usize,
    vectors: Vec<Vec<Scalar>>,
}

impl VectorList {
    pub fn new(field: Field, dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<VectorList> {
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "vector {i} has length {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| x.field() != field) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(VectorList {
            field,
            dim,
            vectors,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    pub fn get(&self, i: usize) -> &[Scalar] {
        &self.vectors[i]
    }

    /// Index of the first zero vector, if any.
    pub fn first_zero(&self) -> Option<usize> {
        self.vectors
            .iter()
            .position(|v| v.iter().all(Scalar::is_zero))
    }

    pub fn span_dim(&self) -> usize {
        rank_of_rows(self.field, self.dim, self.vectors.iter().map(Vec::as_slice))
    }

    /// Dimension of the span of the vectors indexed by `s`.
    pub fn span_dim_of(&self, s: Subset) -> usize {
        rank_of_rows(
            self.field,
            self.dim,
            s.iter().map(|i| self.vectors[i].as_slice()),
        )
    }

    pub fn span_dim_of_indices(&self, idx: &[usize]) -> usize {
        rank_of_rows(
            self.field,
            self.dim,
            idx.iter().map(|&i| self.vectors[i].as_slice()),
        )
    }

    /// Whether `span(V) = span(V_S) (+) span(V_{S^c})` as a direct sum.
    pub fn direct_sum_check(&self, s: Subset) -> bool {
        let n = self.len();
        self.span_dim_of(s) + self.span_dim_of(s.complement(n)) == self.span_dim()
    }

    pub fn sublist(&self, idx: &[usize]) -> VectorList {
        VectorList {
            field: self.field,
            dim: self.dim,
            vectors: idx.iter().map(|&i| self.vectors[i].clone()).collect(),
        }
    }

    /// The `dim x n` matrix with the vectors as columns.
    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.dim, &self.vectors).expect("validated")
    }
}

/// Kronecker product of two vectors; the last index runs fastest.
pub fn kron_vec(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    u.iter()
        .flat_map(|a| v.iter().map(move |b| a * b))
        .collect()
}

/// Kronecker product of several vectors in the given order.
pub fn kron_all<'a, I>(field: Field, parts: I) -> Vec<Scalar>
where
    I: IntoIterator<Item = &'a [Scalar]>,
{
    parts
        .into_iter()
        .fold(vec![field.one()], |acc, v| kron_vec(&acc, v))
}

/// Column-wise Kronecker product of two matrices with the same column count.
pub fn khatri_rao(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.cols || a.field != b.field {
        return Err(Error::DimensionMismatch(format!(
            "Khatri-Rao of {} and {} columns",
            a.cols, b.cols
        )));
    }
    let cols: Vec<Vec<Scalar>> = (0..a.cols)
        .map(|j| kron_vec(&a.column(j), &b.column(j)))
        .collect();
    Matrix::from_columns(a.field, a.rows * b.rows, &cols)
}

/// The s-th compound matrix: all s x s minors, row and column index sets in
/// lexicographic order.
pub fn compound_matrix(x: &Matrix, s: usize) -> Result<Matrix> {
    if s == 0 || s > x.rows.min(x.cols) {
        return Err(Error::InvalidParameter(format!(
            "compound order {s} for a {}x{} matrix",
            x.rows, x.cols
        )));
    }
    let rsets: Vec<Vec<usize>> = combinations(x.rows, s).collect();
    let csets: Vec<Vec<usize>> = combinations(x.cols, s).collect();
    let mut data = Vec::with_capacity(rsets.len() * csets.len());
    for r in &rsets {
        for c in &csets {
            data.push(x.select(r, c).determinant()?);
        }
    }
    debug_assert_eq!(rsets.len() as u64, binomial(x.rows, s));
    Matrix::new(x.field, rsets.len(), csets.len(), data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Field::Rational.from_i64(v)
    }

    fn qm(rows: &[&[i64]]) -> Matrix {
        let r: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| q(v)).collect())
            .collect();
        Matrix::from_rows(Field::Rational, &r).unwrap()
    }

    /// Rank by plain rational elimination, as an independent check.
    fn naive_rank(m: &Matrix) -> usize {
        let mut a: Vec<Vec<BigRational>> = m
            .row_vecs()
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| x.as_rational().unwrap().clone())
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            if let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) {
                a.swap(rank, p);
                for i in 0..a.len() {
                    if i != rank && !a[i][c].is_zero() {
                        let f = &a[i][c] / &a[rank][c];
                        for j in 0..m.cols() {
                            let t = &f * &a[rank][j];
                            a[i][j] = &a[i][j] - t;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn bareiss_rank_matches_naive_on_deficient_matrices() {
        let ms = [
            qm(&[&[0, 0, 1], &[0, 0, 2], &[1, 1, 1]]),
            qm(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 0]]),
            qm(&[&[0, 1, 0, 2], &[0, 2, 0, 4], &[0, 0, 3, 1], &[5, 0, 0, 0]]),
            qm(&[&[2, -3, 7], &[4, -6, 14], &[1, 1, 1], &[3, -2, 8]]),
        ];
        let expect = [2, 1, 3, 2];
        for (m, e) in ms.iter().zip(expect) {
            assert_eq!(m.rank(), e);
            assert_eq!(naive_rank(m), e);
        }
    }

    #[test]
    fn rational_rows_with_denominators() {
        let f = Field::Rational;
        let rows = vec![
            vec![f.parse("1/2").unwrap(), f.parse("1/3").unwrap()],
            vec![f.parse("3").unwrap(), f.parse("2").unwrap()],
        ];
        assert_eq!(Matrix::from_rows(f, &rows).unwrap().rank(), 1);
    }

    #[test]
    fn rank_mod_small_primes() {
        // rank 3 over Q, 2 over GF(2)
        let m = [[1i64, 1, 0], [0, 1, 1], [1, 0, 1]];
        let f2 = Field::prime(2).unwrap();
        let rows: Vec<Vec<Scalar>> = m
            .iter()
            .map(|r| r.iter().map(|&v| f2.from_i64(v)).collect())
            .collect();
        assert_eq!(Matrix::from_rows(f2, &rows).unwrap().rank(), 2);
        assert_eq!(qm(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]).rank(), 3);
    }

    #[test]
    fn solve_and_nullspace() {
        let a = qm(&[&[1, 2], &[3, 4], &[5, 6]]);
        let x = a.solve(&[q(5), q(11), q(17)]).unwrap().unwrap();
        assert_eq!(x, vec![q(1), q(2)]);
        assert!(a.solve(&[q(1), q(0), q(0)]).unwrap().is_none());
        let b = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = b.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let bv = b
                .mul(&Matrix::from_columns(Field::Rational, 3, &[v]).unwrap())
                .unwrap();
            assert!(bv.column(0).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        fn leibniz(m: &Matrix) -> Scalar {
            let n = m.rows();
            if n == 1 {
                return m.get(0, 0).clone();
            }
            let mut acc = Field::Rational.zero();
            for j in 0..n {
                let rows: Vec<usize> = (1..n).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let t = m.get(0, j) * &leibniz(&m.select(&rows, &cols));
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
        let m = qm(&[
            &[2, -1, 0, 3],
            &[1, 4, 2, -2],
            &[0, 5, 1, 1],
            &[3, 0, -1, 2],
        ]);
        assert_eq!(m.determinant().unwrap(), leibniz(&m));
        assert_eq!(qm(&[&[0, 1], &[1, 0]]).determinant().unwrap(), q(-1));
    }

    #[test]
    fn compound_of_identity_is_identity() {
        let c = compound_matrix(&Matrix::identity(Field::Rational, 4), 2).unwrap();
        assert_eq!(c, Matrix::identity(Field::Rational, 6));
    }

    #[test]
    fn compound_is_multiplicative() {
        // Cauchy-Binet: C_s(AB) = C_s(A) C_s(B)
        let a = qm(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let b = qm(&[&[2, 1, 1, 0], &[0, 1, 5, 2], &[1, 0, 0, 1]]);
        let lhs = compound_matrix(&a.mul(&b).unwrap(), 2).unwrap();
        let rhs = compound_matrix(&a, 2)
            .unwrap()
            .mul(&compound_matrix(&b, 2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.rows(), 3);
        assert_eq!(lhs.cols(), 6);
    }

    #[test]
    fn compound_entry_order() {
        let x = qm(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        let c = compound_matrix(&x, 2).unwrap();
        // rows {0,1}, cols {0,2}: 1*6 - 3*4
        assert_eq!(c.get(0, 1), &q(-6));
        // rows {1,2}, cols {1,2}: 5*10 - 6*8
        assert_eq!(c.get(2, 2), &q(2));
    }

    #[test]
    fn kron_ordering_and_khatri_rao() {
        let u = vec![q(1), q(2)];
        let v = vec![q(3), q(4), q(5)];
        assert_eq!(kron_vec(&u, &v), vec![q(3), q(4), q(5), q(6), q(8), q(10)]);
        let a = qm(&[&[1, 0], &[0, 1]]);
        let b = qm(&[&[1, 2], &[3, 4]]);
        let k = khatri_rao(&a, &b).unwrap();
        assert_eq!(k.column(0), vec![q(1), q(3), q(0), q(0)]);
        assert_eq!(k.column(1), vec![q(0), q(0), q(2), q(4)]);
        assert!(khatri_rao(&a, &qm(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn direct_sum() {
        let f = Field::Rational;
        let vs = vec![
            vec![q(1), q(0), q(0)],
            vec![q(0), q(1), q(0)],
            vec![q(1), q(1), q(0)],
            vec![q(0), q(0), q(1)],
        ];
        let l = VectorList::new(f, 3, vs).unwrap();
        assert!(l.direct_sum_check(Subset::from_indices(&[3])));
        assert!(!l.direct_sum_check(Subset::from_indices(&[0])));
        assert_eq!(l.span_dim(), 3);
    }
}
