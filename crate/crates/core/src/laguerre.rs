//! Generalized Laguerre polynomials `L_n^(alpha)` with rational `alpha`, the
//! classical recurrences they satisfy, and the Kienast-Lawton-Hahn count of
//! their real zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, sturm_count, Bound, Poly, Rat};

/// `L_n^(alpha)(z)` as an exact polynomial in `z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Glp {
    pub n: usize,
    pub alpha: Rat,
    #[serde(rename = "coeffs")]
    pub poly: Poly,
}

impl Glp {
    /// Terminating series `sum_k (-1)^k C(n+alpha, n-k) z^k / k!`.
    pub fn build(n: usize, alpha: &Rat) -> Glp {
        let top = Rat::from_int(n as i64) + alpha;
        let coeffs = (0..=n)
            .map(|k| {
                let c = binomial(&top, n - k) / factorial(k);
                if k % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        Glp {
            n,
            alpha: alpha.clone(),
            poly: Poly::new(coeffs),
        }
    }
}

/// `L_n^(alpha)` as a polynomial; `L_{-1} = 0` so recurrences can be written uniformly.
pub fn laguerre(n: isize, alpha: &Rat) -> Poly {
    if n < 0 {
        Poly::zero()
    } else {
        Glp::build(n as usize, alpha).poly
    }
}

/// Three-term recurrence `(k+1) L_{k+1} = (2k+1+alpha-z) L_k - (k+alpha) L_{k-1}`.
/// Kept separate from [`Glp::build`] as an independent construction.
pub fn laguerre_by_recurrence(n: usize, alpha: &Rat) -> Poly {
    let mut prev = Poly::zero();
    let mut cur = Poly::one();
    for k in 0..n {
        let kr = Rat::from_int(k as i64);
        let lin = Poly::new(vec![Rat::from_int(2 * k as i64 + 1) + alpha, -Rat::one()]);
        let next = (&(&lin * &cur) - &prev.scale(&(&kr + alpha))).scale(&Rat::from_int(k as i64 + 1).recip());
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaguerreIdentity {
    /// `L_n^(a) + L_{n-1}^(a+1) - L_n^(a+1)`
    Sum,
    /// `(n+a) L_{n-1}^(a) - z L_n^(a+1) - (n-z) L_n^(a)`
    ThreeTerm,
    /// `z L_{n-1}^(a+1) - (n+a) L_{n-1}^(a) + n L_n^(a)`
    Contiguous,
}

/// Residual polynomial of a Laguerre identity; the identity holds iff it is zero.
pub fn identity_residual(id: LaguerreIdentity, n: usize, alpha: &Rat) -> Poly {
    let n_i = n as isize;
    let nr = Rat::from_int(n as i64);
    let a1 = alpha + Rat::one();
    let z = Poly::xi();
    match id {
        LaguerreIdentity::Sum => &(&laguerre(n_i, alpha) + &laguerre(n_i - 1, &a1)) - &laguerre(n_i, &a1),
        LaguerreIdentity::ThreeTerm => {
            let n_minus_z = Poly::new(vec![nr.clone(), -Rat::one()]);
            &(&laguerre(n_i - 1, alpha).scale(&(&nr + alpha)) - &(&z * &laguerre(n_i, &a1)))
                - &(&n_minus_z * &laguerre(n_i, alpha))
        }
        LaguerreIdentity::Contiguous => {
            &(&(&z * &laguerre(n_i - 1, &a1)) - &laguerre(n_i - 1, alpha).scale(&(&nr + alpha)))
                + &laguerre(n_i, alpha).scale(&nr)
        }
    }
}

/// Predicted numbers of positive and negative real zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlhPrediction {
    pub pos_zeros: usize,
    pub neg_zeros: usize,
}

fn is_negative_integer(r: &Rat) -> bool {
    r.is_integer() && r.is_negative()
}

/// Kienast-Lawton-Hahn zero count for `L_n^(alpha)`, `alpha` not a negative integer.
///
/// The integer part in the middle range is the floor of `alpha`.
pub fn klh_predict(n: usize, alpha: &Rat) -> Result<KlhPrediction> {
    if is_negative_integer(alpha) {
        return Err(Error::NegativeIntegerAlpha(alpha.clone()));
    }
    let neg_n = Rat::from_int(-(n as i64));
    let pred = if *alpha > -1 {
        KlhPrediction {
            pos_zeros: n,
            neg_zeros: 0,
        }
    } else if *alpha > neg_n {
        let fl = alpha.floor();
        let pos = BigInt::from(n) + &fl + 1;
        KlhPrediction {
            pos_zeros: usize::try_from(pos).expect("n + floor(alpha) + 1 >= 0 in this range"),
            neg_zeros: usize::from(fl.is_even()),
        }
    } else {
        KlhPrediction {
            pos_zeros: 0,
            neg_zeros: n % 2,
        }
    };
    Ok(pred)
}

/// Sturm-observed zero counts next to the theorem's prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlhCheck {
    pub n: usize,
    pub alpha: Rat,
    pub predicted: KlhPrediction,
    pub observed: KlhPrediction,
    pub holds: bool,
}

pub fn klh_check(n: usize, alpha: &Rat) -> Result<KlhCheck> {
    let predicted = klh_predict(n, alpha)?;
    let poly = Glp::build(n, alpha).poly;
    let zero = Bound::At(Rat::zero());
    let observed = KlhPrediction {
        pos_zeros: sturm_count(&poly, &zero, &Bound::PosInf)?,
        neg_zeros: sturm_count(&poly, &Bound::NegInf, &zero)?,
    };
    Ok(KlhCheck {
        n,
        alpha: alpha.clone(),
        predicted,
        observed,
        holds: predicted == observed,
    })
}

pub fn klh_verify(n: usize, alpha: &Rat) -> Result<bool> {
    klh_check(n, alpha).map(|c| c.holds)
}
