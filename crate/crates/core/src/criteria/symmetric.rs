use crate::error::{Error, Result};
use crate::tensor::{k_rank_lenient, SymmetricFamily};

use super::{Certificate, CriterionId, Params, Status, Witness};

/// Uniqueness among symmetric decompositions into at most `r` terms:
/// `n + r + 1 <= m + 2d - 2`, with `d` the span dimension of the base vectors.
/// Not applicable when two base vectors are parallel.
pub fn check_symmetric_nonrank(s: &SymmetricFamily, r: usize) -> Result<Certificate> {
    let n = s.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "symmetric check needs n >= 2, got {n}"
        )));
    }
    if r < n {
        return Err(Error::InvalidParameter(format!(
            "term bound r = {r} is below n = {n}"
        )));
    }
    let base = s.base();
    let (m, d, k) = (s.m(), base.span_dim(), k_rank_lenient(&base));
    let lhs = (n + r + 1) as i64;
    let rhs = (m + 2 * d) as i64 - 2;
    let waring_unique = (2 * n + 1) as i64 <= rhs;
    let w = Witness::Symmetric {
        n,
        m,
        d,
        k,
        r,
        lhs,
        rhs,
        waring_unique,
    };
    let params = Params {
        r: Some(r),
        ..Params::default()
    };
    let c = Certificate::new(CriterionId::SymmetricNonrank, params, w)?;
    let c = match c.status {
        Status::Certified => c.note(format!(
            "no other symmetric decomposition into at most {r} terms"
        )),
        Status::HypothesisFails => c.note(format!(
            "every other symmetric decomposition has at least {} terms",
            rhs - n as i64
        )),
        Status::NotApplicable => c.note("base vectors contain a parallel pair"),
    };
    Ok(if waring_unique && k >= 2 {
        c.note("the decomposition is the unique Waring rank decomposition")
    } else {
        c
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn identity(n: usize, m: usize) -> SymmetricFamily {
        let f = Field::Rational;
        let base = (0..n)
            .map(|a| {
                (0..n)
                    .map(|i| if i == a { f.one() } else { f.zero() })
                    .collect()
            })
            .collect();
        SymmetricFamily::unit(f, m, base).unwrap()
    }

    #[test]
    fn identity_boundary() {
        for m in 3..=5 {
            for n in 2..=6 {
                let s = identity(n, m);
                assert_eq!(
                    check_symmetric_nonrank(&s, m + n - 3).unwrap().status,
                    Status::Certified
                );
                assert_eq!(
                    check_symmetric_nonrank(&s, m + n - 2).unwrap().status,
                    Status::HypothesisFails
                );
            }
        }
    }

    #[test]
    fn parallel_base_not_applicable() {
        let f = Field::Rational;
        let v = |a: i64, b: i64| vec![f.from_i64(a), f.from_i64(b)];
        let s = SymmetricFamily::unit(f, 3, vec![v(1, 0), v(2, 0), v(0, 1)]).unwrap();
        let c = check_symmetric_nonrank(&s, 3).unwrap();
        assert_eq!(c.status, Status::NotApplicable);
        assert!(check_symmetric_nonrank(&s, 2).is_err());
    }
}
