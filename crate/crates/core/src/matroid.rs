//! Connectivity of the linear matroid on a list of vectors: separators,
//! connected components, circuits and ear decompositions.
//!
//! A subset `S` separates `V` when `span V = span V_S (+) span V_{S^c}` with
//! both sides nonempty. Components are found through fundamental circuits of a
//! greedy basis and then re-verified; a failed verification falls back to
//! exhaustive separator recursion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, VectorList};
use crate::subset::{subsets_by_size, Subset};
use crate::tensor::ProductFamily;

/// Blocks larger than this are not re-checked for internal connectivity.
pub const VERIFY_BLOCK_LIMIT: usize = 14;

/// A partition of the index set into connected components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPartition {
    /// Sorted blocks, ordered by least element; 0-based indices.
    pub blocks: Vec<Vec<usize>>,
    /// Whether the exhaustive fallback produced the answer.
    pub fallback_used: bool,
}

impl ComponentPartition {
    pub fn is_connected(&self) -> bool {
        self.blocks.len() <= 1
    }

    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&i))
    }
}

/// One step `E_{p-1} -> E_p` of an ear decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ear {
    /// The circuit `C_p`, sorted 0-based indices.
    pub circuit: Vec<usize>,
    /// `C_p \ E_{p-1}`.
    pub new_elements: Vec<usize>,
    /// `dim span E_p`.
    pub span_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarDecomposition {
    pub ears: Vec<Ear>,
}

impl EarDecomposition {
    /// The nested sets `E_1 < E_2 < ...`.
    pub fn nested_sets(&self) -> Vec<Vec<usize>> {
        let mut acc: Vec<usize> = Vec::new();
        self.ears
            .iter()
            .map(|e| {
                acc.extend(&e.new_elements);
                acc.sort_unstable();
                acc.clone()
            })
            .collect()
    }
}

fn reject_zero(v: &VectorList) -> Result<()> {
    match v.first_zero() {
        Some(index) => Err(Error::ZeroVector { index }),
        None => Ok(()),
    }
}

/// Indices of a greedy basis of `span{v_i : i in idx}`, scanning `idx` in order.
fn greedy_basis(v: &VectorList, idx: &[usize]) -> Vec<usize> {
    let mut basis = Vec::new();
    for &i in idx {
        basis.push(i);
        if v.span_dim_of_indices(&basis) < basis.len() {
            basis.pop();
        }
    }
    basis
}

/// Coefficients expressing `v_target` in the independent vectors `basis`.
fn express(v: &VectorList, basis: &[usize], target: usize) -> Result<Option<Vec<bool>>> {
    if basis.is_empty() {
        return Ok(None);
    }
    let cols: Vec<_> = basis.iter().map(|&b| v.get(b).to_vec()).collect();
    let m = Matrix::from_columns(v.field(), v.dim(), &cols)?;
    Ok(m.solve(v.get(target))?
        .map(|x| x.iter().map(|c| !c.is_zero()).collect()))
}

/// The unique circuit in `basis + {target}` through `target`, when `target`
/// depends on the independent set `basis`.
fn fundamental_circuit(
    v: &VectorList,
    basis: &[usize],
    target: usize,
) -> Result<Option<Vec<usize>>> {
    Ok(express(v, basis, target)?.map(|support| {
        let mut c: Vec<usize> = basis
            .iter()
            .zip(support)
            .filter(|(_, s)| *s)
            .map(|(&b, _)| b)
            .collect();
        c.push(target);
        c.sort_unstable();
        c
    }))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn normalize(mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort_by_key(|b| b[0]);
    blocks
}

/// Connected components of the linear matroid on `v`.
pub fn connected_components(v: &VectorList) -> Result<ComponentPartition> {
    reject_zero(v)?;
    let n = v.len();
    if n == 0 {
        return Ok(ComponentPartition {
            blocks: Vec::new(),
            fallback_used: false,
        });
    }
    let all: Vec<usize> = (0..n).collect();
    let basis = greedy_basis(v, &all);
    let mut uf = UnionFind((0..n).collect());
    for e in (0..n).filter(|e| !basis.contains(e)) {
        let circuit = fundamental_circuit(v, &basis, e)?
            .ok_or_else(|| Error::Internal("element outside the span of a basis".into()))?;
        for w in circuit.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = uf.find(i);
        groups.entry(r).or_default().push(i);
    }
    let blocks = normalize(groups.into_values().collect());
    if verify_components(v, &blocks) {
        return Ok(ComponentPartition {
            blocks,
            fallback_used: false,
        });
    }
    Ok(ComponentPartition {
        blocks: components_by_recursion(v),
        fallback_used: true,
    })
}

/// Direct-sum identity over the blocks, plus internal connectivity of every
/// block up to [`VERIFY_BLOCK_LIMIT`].
pub fn verify_components(v: &VectorList, blocks: &[Vec<usize>]) -> bool {
    let total: usize = blocks.iter().map(|b| v.span_dim_of_indices(b)).sum();
    if total != v.span_dim() {
        return false;
    }
    blocks
        .iter()
        .filter(|b| b.len() <= VERIFY_BLOCK_LIMIT)
        .all(|b| separator_search_exhaustive(&v.sublist(b)).is_none())
}

/// First separator in size-then-lex order by scanning every subset.
pub fn separator_search_exhaustive(v: &VectorList) -> Option<Subset> {
    let n = v.len();
    if n < 2 {
        return None;
    }
    let total = v.span_dim();
    subsets_by_size(n, 1, n - 1)
        .find(|&s| v.span_dim_of(s) + v.span_dim_of(s.complement(n)) == total)
}

/// Components by repeatedly splitting along exhaustive separators.
pub fn components_by_recursion(v: &VectorList) -> Vec<Vec<usize>> {
    fn go(v: &VectorList, idx: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let sub = v.sublist(&idx);
        match separator_search_exhaustive(&sub) {
            None => out.push(idx),
            Some(s) => {
                let (a, b): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| {
                    let k = idx.iter().position(|&x| x == i).expect("member");
                    s.contains(k)
                });
                go(v, a, out);
                go(v, b, out);
            }
        }
    }
    let mut out = Vec::new();
    if !v.is_empty() {
        go(v, (0..v.len()).collect(), &mut out);
    }
    normalize(out)
}

/// The minimal-size separator, ties broken lexicographically; `None` when `v`
/// is connected.
pub fn separator_search(v: &VectorList) -> Result<Option<Subset>> {
    let parts = connected_components(v)?;
    if parts.blocks.len() < 2 {
        return Ok(None);
    }
    Ok(parts.blocks.iter().map(|b| Subset::from_indices(b)).min())
}

/// Whether `v` is a minimal dependent set.
pub fn is_circuit(v: &VectorList) -> Result<bool> {
    reject_zero(v)?;
    let n = v.len();
    if n == 0 || v.span_dim() != n - 1 {
        return Ok(false);
    }
    Ok((0..n).all(|skip| {
        let idx: Vec<usize> = (0..n).filter(|&i| i != skip).collect();
        v.span_dim_of_indices(&idx) == n - 1
    }))
}

/// Ear decomposition of a connected list of at least two vectors.
///
/// The first circuit is the fundamental circuit of the first vector that
/// depends on its predecessors. Each later ear extends a greedy basis `B` of
/// `E_p` by the smallest-index vectors outside `E_p` that keep the added
/// vectors independent, stopping at the first dependency; the ear is the
/// circuit through the last added vector.
pub fn ear_decomposition(v: &VectorList) -> Result<EarDecomposition> {
    reject_zero(v)?;
    let n = v.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "ear decomposition needs at least two vectors".into(),
        ));
    }
    if !connected_components(v)?.is_connected() {
        return Err(Error::InvalidParameter("vectors are not connected".into()));
    }
    let mut ears = Vec::new();
    let mut indep = Vec::new();
    let mut first = None;
    for i in 0..n {
        if let Some(c) = fundamental_circuit(v, &indep, i)? {
            first = Some(c);
            break;
        }
        indep.push(i);
    }
    let c1 = first.ok_or_else(|| Error::Internal("connected set without a circuit".into()))?;
    let mut covered = Subset::from_indices(&c1);
    ears.push(Ear {
        circuit: c1.clone(),
        new_elements: c1.clone(),
        span_dim: v.span_dim_of(covered),
    });
    while covered.len() < n {
        let inside = covered.indices();
        let basis = greedy_basis(v, &inside);
        let mut chosen: Vec<usize> = Vec::new();
        let mut ear = None;
        for u in (0..n).filter(|&u| !covered.contains(u)) {
            let mut trial = chosen.clone();
            trial.push(u);
            if v.span_dim_of_indices(&trial) < trial.len() {
                continue;
            }
            let mut pool = basis.clone();
            pool.extend(&chosen);
            if let Some(c) = fundamental_circuit(v, &pool, u)? {
                ear = Some(c);
                break;
            }
            chosen.push(u);
        }
        let circuit = ear
            .ok_or_else(|| Error::Internal("ear construction stalled on a connected set".into()))?;
        let new_elements: Vec<usize> = circuit
            .iter()
            .copied()
            .filter(|&i| !covered.contains(i))
            .collect();
        if new_elements.len() == circuit.len() {
            return Err(Error::Internal("ear misses the previous set".into()));
        }
        let before = v.span_dim_of(covered);
        for &i in &new_elements {
            covered.insert(i);
        }
        let after = v.span_dim_of(covered);
        if after - before + 1 != new_elements.len() {
            return Err(Error::Internal(
                "ear changed the span by the wrong amount".into(),
            ));
        }
        ears.push(Ear {
            circuit,
            new_elements,
            span_dim: after,
        });
    }
    Ok(EarDecomposition { ears })
}

/// Components of the assembled tensors of a family.
pub fn family_components(f: &ProductFamily) -> Result<ComponentPartition> {
    connected_components(&f.assembled())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn vl(vs: &[&[i64]]) -> VectorList {
        let f = Field::Rational;
        VectorList::new(
            f,
            vs[0].len(),
            vs.iter()
                .map(|v| v.iter().map(|&x| f.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn separator_examples() {
        let v = vl(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(
            separator_search(&v).unwrap(),
            Some(Subset::from_indices(&[3]))
        );
        let v = vl(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            separator_search(&v).unwrap(),
            Some(Subset::from_indices(&[0]))
        );
        let v = vl(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(separator_search(&v).unwrap(), None);
        assert_eq!(separator_search_exhaustive(&v), None);
        let v = vl(&[&[1, 0], &[0, 0]]);
        assert_eq!(separator_search(&v), Err(Error::ZeroVector { index: 1 }));
    }

    #[test]
    fn components_with_parallel_and_coloops() {
        let v = vl(&[
            &[1, 0, 0, 0],
            &[0, 0, 1, 0],
            &[2, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 1],
            &[0, 0, 0, 1],
        ]);
        let c = connected_components(&v).unwrap();
        assert_eq!(c.blocks, vec![vec![0, 2], vec![1, 4, 5], vec![3]]);
        assert!(!c.fallback_used);
        assert_eq!(components_by_recursion(&v), c.blocks);
    }

    #[test]
    fn circuits() {
        assert!(is_circuit(&vl(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap());
        assert!(is_circuit(&vl(&[&[1, 1], &[2, 2]])).unwrap());
        assert!(!is_circuit(&vl(&[&[1, 0], &[0, 1]])).unwrap());
        assert!(!is_circuit(&vl(&[&[1, 0, 0], &[2, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap());
        assert!(!is_circuit(&vl(&[&[1, 0]])).unwrap());
    }

    #[test]
    fn ears_on_two_triangles() {
        // {0,1,2} and {2,3,4} are circuits sharing element 2
        let v = vl(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let d = ear_decomposition(&v).unwrap();
        assert_eq!(d.ears[0].circuit, vec![0, 1, 2]);
        assert_eq!(d.nested_sets().last().unwrap().len(), 5);
        for (p, e) in d.ears.iter().enumerate().skip(1) {
            let prev = &d.nested_sets()[p - 1];
            assert!(e.circuit.iter().any(|i| prev.contains(i)));
        }
        assert!(ear_decomposition(&vl(&[&[1, 0], &[0, 1]])).is_err());
    }
}
