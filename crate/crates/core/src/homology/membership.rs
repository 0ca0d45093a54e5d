use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::smith::dense_smith;
use crate::complex::{BoundaryMatrix, ChainVector, EnhancedState};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MembershipError {
    #[error("chain at {got:?} but the matrix maps into {expected:?}")]
    Bidegree { expected: (i64, i64), got: (i64, i64) },
    #[error("solution coefficient does not fit in 64 bits")]
    Overflow,
}

/// Proof that `v` is not in the image of `m`: a row functional `phi` with
/// `phi · m ≡ 0` and `phi · v ≢ 0` modulo `modulus` (modulus 0 means
/// exact equality).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub functional: Vec<(EnhancedState, BigInt)>,
    pub modulus: BigInt,
}

impl Obstruction {
    fn reduce(&self, x: &BigInt) -> BigInt {
        if self.modulus.is_zero() {
            x.clone()
        } else {
            x.mod_floor(&self.modulus)
        }
    }

    /// Re-checks both halves of the obstruction against the data.
    pub fn verify(&self, m: &BoundaryMatrix, v: &ChainVector) -> bool {
        let index: std::collections::HashMap<&EnhancedState, usize> =
            m.target().iter().enumerate().map(|(k, s)| (s, k)).collect();
        let mut phi = vec![BigInt::zero(); m.rows()];
        for (s, c) in &self.functional {
            match index.get(s) {
                Some(&k) => phi[k] = c.clone(),
                None => return false,
            }
        }
        let kills_image = m.columns().iter().all(|col| {
            let dot: BigInt = col.iter().map(|&(r, e)| &phi[r] * e).sum();
            self.reduce(&dot).is_zero()
        });
        let on_v: BigInt = v.terms().map(|(s, &c)| index.get(s).map_or(BigInt::zero(), |&k| &phi[k] * c)).sum();
        kills_image && !self.reduce(&on_v).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// A chain `y` with `d(y) = v`.
    Solvable(ChainVector),
    Obstructed(Obstruction),
}

impl Membership {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Membership::Solvable(_))
    }
}

/// Decides whether `v` lies in the integer image of `m`, using the Smith
/// transforms `u · m · w = D`: with `u·v = b`, a solution exists iff each
/// `b_k` is divisible by `d_k` and vanishes past the rank.
pub fn image_membership(m: &BoundaryMatrix, v: &ChainVector) -> Result<Membership, MembershipError> {
    let (si, sj) = m.bidegree();
    let target = (si + 1, sj);
    if !v.is_zero() && (v.i, v.j) != target {
        return Err(MembershipError::Bidegree { expected: target, got: (v.i, v.j) });
    }
    if v.is_zero() {
        return Ok(Membership::Solvable(ChainVector::zero(si, sj)));
    }
    let index: std::collections::HashMap<&EnhancedState, usize> =
        m.target().iter().enumerate().map(|(k, s)| (s, k)).collect();
    let mut rhs = vec![BigInt::zero(); m.rows()];
    for (s, &c) in v.terms() {
        match index.get(s) {
            Some(&k) => rhs[k] = BigInt::from(c),
            // A term outside the basis cannot be hit; the coordinate
            // functional of that state is not available, so report via the
            // bidegree error path.
            None => return Err(MembershipError::Bidegree { expected: target, got: (v.i, v.j) }),
        }
    }
    let dense: Vec<Vec<BigInt>> = m.to_dense().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let dec = dense_smith(dense, true);
    let b: Vec<BigInt> = dec.u.iter().map(|row| row.iter().zip(&rhs).map(|(x, y)| x * y).sum()).collect();
    let rank = dec.form.rank();
    for (k, bk) in b.iter().enumerate() {
        let modulus = if k < rank { dec.form.factors[k].clone() } else { BigInt::zero() };
        let fails = if k < rank { !bk.is_multiple_of(&modulus) } else { !bk.is_zero() };
        if fails {
            let functional = m
                .target()
                .iter()
                .zip(&dec.u[k])
                .filter(|(_, c)| !c.is_zero())
                .map(|(s, c)| (*s, c.clone()))
                .collect();
            return Ok(Membership::Obstructed(Obstruction { functional, modulus }));
        }
    }
    let z: Vec<BigInt> = (0..m.cols())
        .map(|k| if k < rank { &b[k] / &dec.form.factors[k] } else { BigInt::zero() })
        .collect();
    let mut y = ChainVector::zero(si, sj);
    for (c, s) in m.source().iter().enumerate() {
        let yc: BigInt = dec.v[c].iter().zip(&z).map(|(x, y)| x * y).sum();
        y.add_term(*s, yc.to_i64().ok_or(MembershipError::Overflow)?);
    }
    Ok(Membership::Solvable(y))
}
