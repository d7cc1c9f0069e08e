//! Sturm-sequence counting and isolation of real roots.
//!
//! Everything runs on the square-free part, so counts are of distinct roots.

use serde::{Deserialize, Serialize};

use super::{Poly, Rat};
use crate::error::{Error, Result};

/// End point of a counting interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    At(Rat),
    PosInf,
}

impl From<Rat> for Bound {
    fn from(r: Rat) -> Self {
        Bound::At(r)
    }
}

/// Closed rational interval `[lo, hi]` holding exactly one distinct root.
/// `lo == hi` when the root itself is rational and was hit exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
}

/// Canonical Sturm chain `p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k)`.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> Result<Self> {
        let sf = p.square_free()?;
        let mut chain = vec![sf.clone()];
        if !sf.is_constant() {
            chain.push(sf.derive());
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1])?;
                if r.is_zero() {
                    break;
                }
                // Positive rescaling keeps signs intact and coefficients small.
                let lead = r.leading().expect("nonzero").abs().recip();
                chain.push(-&r.scale(&lead));
            }
        }
        Ok(SturmChain { chain })
    }

    /// The square-free polynomial the chain was built from.
    pub fn base(&self) -> &Poly {
        &self.chain[0]
    }

    fn sign_changes<I: Iterator<Item = i32>>(signs: I) -> usize {
        let mut last = 0;
        let mut changes = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    fn variations(&self, b: &Bound) -> usize {
        match b {
            Bound::At(x) => Self::sign_changes(self.chain.iter().map(|p| p.sign_at(x))),
            Bound::PosInf => {
                Self::sign_changes(self.chain.iter().map(|p| p.leading().map_or(0, Rat::signum)))
            }
            Bound::NegInf => Self::sign_changes(self.chain.iter().map(|p| {
                let s = p.leading().map_or(0, Rat::signum);
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            })),
        }
    }

    /// Distinct roots in the open interval `(lo, hi)`.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> usize {
        if let (Bound::At(a), Bound::At(b)) = (lo, hi) {
            if a >= b {
                return 0;
            }
        }
        // V(lo) - V(hi) counts (lo, hi]; drop hi itself if it is a root.
        let raw = self.variations(lo).saturating_sub(self.variations(hi));
        match hi {
            Bound::At(b) if self.base().sign_at(b) == 0 => raw.saturating_sub(1),
            _ => raw,
        }
    }

    /// Isolating intervals for the roots in `(lo, hi)` with finite ends, by bisection.
    pub fn isolate(&self, lo: &Rat, hi: &Rat) -> Vec<RootInterval> {
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone())];
        while let Some((a, b)) = stack.pop() {
            let n = self.count(&Bound::At(a.clone()), &Bound::At(b.clone()));
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push(RootInterval { lo: a, hi: b });
                continue;
            }
            let mid = (&a + &b) * Rat::half();
            if self.base().sign_at(&mid) == 0 {
                out.push(RootInterval {
                    lo: mid.clone(),
                    hi: mid.clone(),
                });
            }
            stack.push((mid.clone(), b));
            stack.push((a, mid));
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        out
    }
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
pub fn sturm_count(p: &Poly, lo: &Bound, hi: &Bound) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("sturm count"));
    }
    Ok(SturmChain::new(p)?.count(lo, hi))
}

/// Cauchy bound: every root has absolute value below `1 + max |a_k / a_n|`.
pub fn root_bound(p: &Poly) -> Result<Rat> {
    let lead = p.leading().ok_or(Error::ZeroPolynomial("root bound"))?;
    let max = p
        .coeffs()
        .iter()
        .rev()
        .skip(1)
        .map(|c| (c / lead).abs())
        .max()
        .unwrap_or_else(Rat::zero);
    Ok(max + Rat::one())
}

/// Isolating intervals for the distinct roots of `p` in `(lo, hi)`; infinite ends are
/// replaced by the Cauchy bound.
pub fn isolate_roots(p: &Poly, lo: &Bound, hi: &Bound) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("root isolation"));
    }
    let chain = SturmChain::new(p)?;
    let bound = root_bound(chain.base())?;
    let lo = match lo {
        Bound::NegInf => -&bound,
        Bound::At(x) => x.clone(),
        Bound::PosInf => return Ok(Vec::new()),
    };
    let hi = match hi {
        Bound::PosInf => bound,
        Bound::At(x) => x.clone(),
        Bound::NegInf => return Ok(Vec::new()),
    };
    Ok(chain.isolate(&lo, &hi))
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::testutil::{nonzero_poly, rat};

    proptest! {
        #[test]
        fn count_is_bounded_by_degree(p in nonzero_poly(7)) {
            let c = sturm_count(&p, &Bound::NegInf, &Bound::PosInf).unwrap();
            prop_assert!(c <= p.degree().unwrap());
        }

        #[test]
        fn counts_distinct_linear_factors(roots in prop::collection::btree_set(rat(), 1..6), lo in rat()) {
            let p = roots.iter().fold(Poly::one(), |acc, r| &acc * &Poly::new(vec![-r.clone(), Rat::one()]));
            let squared = &p * &p;
            prop_assert_eq!(sturm_count(&squared, &Bound::NegInf, &Bound::PosInf).unwrap(), roots.len());
            let above = roots.iter().filter(|r| **r > lo).count();
            prop_assert_eq!(sturm_count(&p, &Bound::At(lo), &Bound::PosInf).unwrap(), above);
            let found = isolate_roots(&p, &Bound::NegInf, &Bound::PosInf).unwrap();
            prop_assert_eq!(found.len(), roots.len());
        }
    }
}
