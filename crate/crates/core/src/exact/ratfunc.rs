use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{Poly, Rat};
use crate::error::{Error, Result};

/// Reduced rational function `num / den` in one variable.
///
/// Canonical form: `gcd(num, den) = 1`, `den` monic, and zero is `0/1`. Two
/// rational functions are equal exactly when their canonical forms agree
/// component-wise, so `==` decides identities.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatFunc")]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

#[derive(Deserialize)]
struct RawRatFunc {
    num: Poly,
    den: Poly,
}

impl TryFrom<RawRatFunc> for RatFunc {
    type Error = Error;
    fn try_from(raw: RawRatFunc) -> Result<Self> {
        RatFunc::new(raw.num, raw.den)
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = Poly::gcd(&num, &den).expect("denominator is nonzero");
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lead = den.leading().expect("nonzero").clone();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lead.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    /// `c / xi^k`
    pub fn inv_xi_pow(c: Rat, k: usize) -> Self {
        RatFunc::reduce(Poly::constant(c), Poly::monomial(Rat::one(), k))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Constant value if the function is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.is_constant() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RatFunc::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// d/dxi
    pub fn derive(&self) -> Self {
        if self.den.is_constant() {
            return RatFunc::reduce(self.num.derive(), self.den.clone());
        }
        let num = &(&self.num.derive() * &self.den) - &(&self.num * &self.den.derive());
        RatFunc::reduce(num, &self.den * &self.den)
    }

    /// `f(-xi)`
    pub fn compose_neg(&self) -> Self {
        RatFunc::reduce(self.num.compose_neg(), self.den.compose_neg())
    }

    /// `f(c * xi)`, `c != 0`.
    pub fn compose_scale(&self, c: &Rat) -> Self {
        RatFunc::reduce(self.num.compose_scale(c), self.den.compose_scale(c))
    }

    /// Exact value at a point; a vanishing denominator is a pole.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(x.clone()));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{self}]")
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        // Split off the common part of the denominators so products stay small.
        let g = Poly::gcd(&self.den, &rhs.den).expect("nonzero denominators");
        let (bd, dd) = if g.is_constant() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (
                self.den.div_exact(&g).expect("gcd divides"),
                rhs.den.div_exact(&g).expect("gcd divides"),
            )
        };
        let num = &(&self.num * &dd) + &(&rhs.num * &bd);
        RatFunc::reduce(num, &(&bd * &dd) * &g)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // Cross-cancel before multiplying.
        let g1 = Poly::gcd(&self.num, &rhs.den).expect("nonzero");
        let g2 = Poly::gcd(&rhs.num, &self.den).expect("nonzero");
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        let num = &a * &c;
        let den = &b * &d;
        let lead = den.leading().expect("nonzero").recip();
        RatFunc {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! owned_rf_ops {
    ($tr:ident, $method:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                (&self).$method(rhs)
            }
        }
        impl $tr<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                self.$method(&rhs)
            }
        }
    };
}

owned_rf_ops!(Add, add);
owned_rf_ops!(Sub, sub);
owned_rf_ops!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn make_cancels_common_factor() {
        let f = RatFunc::new(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(f.num(), &p(&[1, 1]));
        assert_eq!(f.den(), &Poly::one());
    }

    #[test]
    fn make_zero_numerator() {
        let f = RatFunc::new(Poly::zero(), p(&[3, 1, 7])).unwrap();
        assert_eq!(f, RatFunc::zero());
        assert_eq!(f.den(), &Poly::one());
    }

    #[test]
    fn make_normalizes_to_monic_denominator() {
        let f = RatFunc::new(p(&[0, 2]), p(&[4])).unwrap();
        assert_eq!(f.num(), &Poly::new(vec![Rat::zero(), Rat::half()]));
        assert_eq!(f.den(), &Poly::one());
    }

    #[test]
    fn make_rejects_zero_denominator() {
        assert_eq!(RatFunc::new(p(&[1]), Poly::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn eval_and_pole() {
        let f = RatFunc::from_poly(p(&[1, 1]));
        assert_eq!(f.eval(&Rat::one()).unwrap(), Rat::from_int(2));
        let g = RatFunc::inv_xi_pow(Rat::one(), 1);
        assert_eq!(g.eval(&Rat::zero()), Err(Error::Pole(Rat::zero())));
    }

    #[test]
    fn isotonic_value_by_substitution() {
        // omega xi/2 + a(a-1) omega/(2 xi) - omega(a+1/2), omega = 2, a = 2
        let v = &(&RatFunc::from_poly(p(&[0, 1])) + &RatFunc::inv_xi_pow(Rat::from_int(2), 1))
            + &RatFunc::constant(Rat::from_int(-5));
        assert_eq!(v.eval(&Rat::one()).unwrap(), Rat::from_int(-2));
    }

    #[test]
    fn arithmetic_cancels_to_zero() {
        let f = RatFunc::new(p(&[1, 2]), p(&[3, 0, 1])).unwrap();
        assert!((&f - &f).is_zero());
        let g = f.recip().unwrap();
        assert_eq!(&f * &g, RatFunc::one());
    }

    #[test]
    fn derive_quotient_rule() {
        // d/dxi 1/xi = -1/xi^2
        let f = RatFunc::inv_xi_pow(Rat::one(), 1);
        assert_eq!(f.derive(), RatFunc::inv_xi_pow(Rat::from_int(-1), 2));
    }

    #[test]
    fn serde_canonicalizes() {
        let f: RatFunc = serde_json::from_str(r#"{"num":["-1","0","1"],"den":["-2","2"]}"#).unwrap();
        assert_eq!(f.num(), &Poly::new(vec![Rat::half(), Rat::half()]));
        assert_eq!(f.den(), &Poly::one());
        assert!(serde_json::from_str::<RatFunc>(r#"{"num":["1"],"den":[]}"#).is_err());
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::testutil::{nonzero_poly, poly, rat, ratfunc};

    proptest! {
        #[test]
        fn canonical_form_ignores_common_factors(n in poly(4), d in nonzero_poly(4), c in nonzero_poly(3)) {
            prop_assert_eq!(RatFunc::new(&n * &c, &d * &c).unwrap(), RatFunc::new(n, d).unwrap());
        }

        #[test]
        fn arithmetic_agrees_with_evaluation(f in ratfunc(), g in ratfunc(), x in rat()) {
            if let (Ok(fx), Ok(gx)) = (f.eval(&x), g.eval(&x)) {
                prop_assert_eq!((&f + &g).eval(&x).unwrap(), &fx + &gx);
                prop_assert_eq!((&f * &g).eval(&x).unwrap(), &fx * &gx);
            }
        }

        #[test]
        fn derive_is_leibniz(f in ratfunc(), g in ratfunc()) {
            prop_assert_eq!((&f * &g).derive(), &(&f.derive() * &g) + &(&f * &g.derive()));
            prop_assert_eq!((&f - &g).derive(), &f.derive() - &g.derive());
        }
    }
}
