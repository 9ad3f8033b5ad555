//! Exhaustive ground truth over small prime fields: tensor rank, every
//! decomposition up to a term bound, uniqueness, and the quantified three-mode
//! conditions. All searches run against an explicit [`SearchBudget`] and fail
//! hard when it runs out.

mod conditions;
pub(crate) mod fp;
mod search;
mod subpartition;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::tensor::{ProductFamily, ProductTensor, SymmetricFamily};

pub use conditions::{
    condition_u_bruteforce, dls_condition_six, dls_condition_three, dls_condition_two,
    AlphaViolation, ProjectionReport, RankConditionReport,
};
pub use search::{
    all_decompositions, brute_force_rank, enumerate_product_directions, uniqueness_bruteforce,
    uniqueness_symmetric, DecompositionSet, RankReport, UniquenessReport,
};
pub use subpartition::{
    rank_deficient_subset_search, reducibility_witness, subpartition_verify, DeficientSubset,
    SubpartitionWitness, MAX_SUBPARTITION_TERMS,
};

use fp::Gf;

/// Largest prime the oracle accepts.
pub const MAX_ORACLE_PRIME: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Largest term count a rank search tries before giving up.
    pub max_rank: usize,
    /// Ceiling on enumerated candidates (directions, search nodes, coefficient vectors).
    pub max_candidates: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_ms: Option<u64>,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_rank: 6,
            max_candidates: 20_000_000,
            time_limit_ms: None,
        }
    }
}

impl SearchBudget {
    pub fn with_candidates(max_candidates: u64) -> SearchBudget {
        SearchBudget {
            max_candidates,
            ..SearchBudget::default()
        }
    }
}

/// Counts work against a budget.
pub(crate) struct Meter {
    used: u64,
    limit: u64,
    deadline: Option<Instant>,
}

impl Meter {
    pub fn new(b: &SearchBudget) -> Meter {
        let deadline = b
            .time_limit_ms
            .map(|ms| Instant::now() + Duration::from_millis(ms));
        Meter {
            used: 0,
            limit: b.max_candidates,
            deadline,
        }
    }

    pub fn tick(&mut self, k: u64) -> Result<()> {
        self.used = self.used.saturating_add(k);
        if self.used > self.limit {
            return Err(Error::BudgetExceeded {
                used: self.used,
                limit: self.limit,
            });
        }
        if self.used % 4096 < k {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Error::BudgetExceeded {
                        used: self.used,
                        limit: self.limit,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

/// A weighted product term with factors in residues mod `p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Term {
    pub factors: Vec<Vec<u64>>,
    pub coeff: u64,
}

impl Term {
    pub fn to_tensor(&self, field: Field) -> Result<ProductTensor> {
        let factors = self
            .factors
            .iter()
            .map(|f| f.iter().map(|&x| field.from_u64(x)).collect())
            .collect();
        ProductTensor::new(factors, field.from_u64(self.coeff))
    }
}

/// Builds a family from terms over `F_p`.
pub fn terms_to_family(p: u64, mode_dims: &[usize], terms: &[Term]) -> Result<ProductFamily> {
    let field = Field::prime(p)?;
    let ts = terms
        .iter()
        .map(|t| t.to_tensor(field))
        .collect::<Result<Vec<_>>>()?;
    ProductFamily::new(field, mode_dims.to_vec(), ts)
}

pub(crate) fn oracle_prime(field: Field) -> Result<u64> {
    match field.modulus() {
        Some(p) if p <= MAX_ORACLE_PRIME => Ok(p),
        Some(p) => Err(Error::InvalidParameter(format!(
            "oracle prime {p} exceeds {MAX_ORACLE_PRIME}"
        ))),
        None => Err(Error::InvalidParameter(
            "the oracle works over prime fields; reduce the family first".into(),
        )),
    }
}

pub(crate) fn residues(v: &[crate::field::Scalar]) -> Vec<u64> {
    v.iter()
        .map(|x| x.as_residue().expect("prime field"))
        .collect()
}

/// Terms of a family with each factor scaled to lead with 1 and the scales
/// folded into the coefficient.
pub(crate) fn canonical_terms(g: Gf, f: &ProductFamily) -> Vec<Term> {
    let mut out: Vec<Term> = f
        .tensors()
        .iter()
        .map(|t| {
            let mut coeff = t.coeff().as_residue().expect("prime field");
            let factors = t
                .factors()
                .iter()
                .map(|x| {
                    let (v, lead) = g.normalize(&residues(x)).expect("nonzero factor");
                    coeff = g.mul(coeff, lead);
                    v
                })
                .collect();
            Term { factors, coeff }
        })
        .collect();
    out.sort();
    out
}

pub(crate) fn canonical_symmetric_terms(g: Gf, s: &SymmetricFamily) -> Vec<Term> {
    let m = s.m();
    let mut out: Vec<Term> = s
        .base_vectors()
        .iter()
        .zip(s.coeffs())
        .map(|(u, b)| {
            let (v, lead) = g.normalize(&residues(u)).expect("nonzero base vector");
            let coeff = g.mul(b.as_residue().expect("prime field"), g.pow(lead, m as u64));
            Term {
                factors: vec![v; m],
                coeff,
            }
        })
        .collect();
    out.sort();
    out
}
