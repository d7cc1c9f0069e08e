//! Parity-typed rational fields on the half line.
//!
//! Everything is written in the single even variable `xi = omega x^2 / 2`. An odd
//! field is `x -> x R(xi)` and an even field is `x -> S(xi)`. The two types are
//! closed under the operations the construction needs (sums, products,
//! reciprocals, derivatives) without ever introducing square roots.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Poly, Rat, RatFunc};

/// Isotonic oscillator parameters: frequency `omega > 0` and `a = l + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub omega: Rat,
    pub a: Rat,
}

impl Params {
    pub fn new(omega: Rat, a: Rat) -> Result<Self> {
        if !omega.is_positive() {
            return Err(Error::InvalidParams(format!("omega must be positive, got {omega}")));
        }
        Ok(Params { omega, a })
    }

    pub fn from_ints(omega: i64, a: i64) -> Self {
        Params::new(Rat::from_int(omega), Rat::from_int(a)).expect("positive omega")
    }

    /// `a -> a + k`; `k = 1` is the shape-invariance shift `a_1`.
    pub fn shift_a(&self, k: i64) -> Params {
        Params {
            omega: self.omega.clone(),
            a: &self.a + Rat::from_int(k),
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "omega={}, a={}", self.omega, self.a)
    }
}

fn same_scale(a: &Rat, b: &Rat) {
    assert_eq!(a, b, "fields built on different xi scalings (omega {a} vs {b})");
}

/// `x -> x R(xi)`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OddField {
    omega: Rat,
    r: RatFunc,
}

/// `x -> S(xi)`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EvenField {
    omega: Rat,
    s: RatFunc,
}

impl OddField {
    pub fn new(omega: &Rat, r: RatFunc) -> Self {
        OddField {
            omega: omega.clone(),
            r,
        }
    }

    pub fn zero(omega: &Rat) -> Self {
        OddField::new(omega, RatFunc::zero())
    }

    /// `c x`
    pub fn linear(omega: &Rat, c: Rat) -> Self {
        OddField::new(omega, RatFunc::constant(c))
    }

    /// `c / x = x * c omega / (2 xi)`
    pub fn inverse_x(omega: &Rat, c: Rat) -> Self {
        let k = c * omega * Rat::half();
        OddField::new(omega, RatFunc::inv_xi_pow(k, 1))
    }

    /// `-(log P(xi))' = x * (-omega P'(xi) / P(xi))`
    pub fn neg_log_derivative(omega: &Rat, p: &Poly) -> Result<Self> {
        let r = RatFunc::new(p.derive(), p.clone())?.scale(&-omega);
        Ok(OddField::new(omega, r))
    }

    pub fn omega(&self) -> &Rat {
        &self.omega
    }

    /// The rational part `R` in `x R(xi)`.
    pub fn ratfunc(&self) -> &RatFunc {
        &self.r
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }

    pub fn add(&self, other: &OddField) -> OddField {
        same_scale(&self.omega, &other.omega);
        OddField::new(&self.omega, &self.r + &other.r)
    }

    pub fn sub(&self, other: &OddField) -> OddField {
        same_scale(&self.omega, &other.omega);
        OddField::new(&self.omega, &self.r - &other.r)
    }

    pub fn neg(&self) -> OddField {
        OddField::new(&self.omega, -&self.r)
    }

    pub fn scale(&self, c: &Rat) -> OddField {
        OddField::new(&self.omega, self.r.scale(c))
    }

    /// `(x R)' = R + 2 xi R'`
    pub fn derive(&self) -> EvenField {
        let xi = RatFunc::from_poly(Poly::xi());
        let s = &self.r + &(&xi * &self.r.derive()).scale(&Rat::from_int(2));
        EvenField::new(&self.omega, s)
    }

    /// `(x R1)(x R2) = (2 xi / omega) R1 R2`
    pub fn mul(&self, other: &OddField) -> EvenField {
        same_scale(&self.omega, &other.omega);
        let x2 = RatFunc::from_poly(Poly::monomial(Rat::from_int(2) / &self.omega, 1));
        EvenField::new(&self.omega, &x2 * &(&self.r * &other.r))
    }

    pub fn mul_even(&self, other: &EvenField) -> OddField {
        same_scale(&self.omega, &other.omega);
        OddField::new(&self.omega, &self.r * &other.s)
    }

    /// `c / (x R) = x * c omega / (2 xi R)`
    pub fn invert_scaled(&self, c: &Rat) -> Result<OddField> {
        if self.is_zero() {
            return Err(Error::ZeroField);
        }
        let xi_r = &RatFunc::from_poly(Poly::xi()) * &self.r;
        let r = xi_r.recip()?.scale(&(c * &self.omega * Rat::half()));
        Ok(OddField::new(&self.omega, r))
    }

    /// `R(xi) -> -R(-xi)`: the rational content of `x -> i f(i x)`.
    pub fn wick_image(&self) -> OddField {
        OddField::new(&self.omega, -self.r.compose_neg())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let xi = self.omega.to_f64() * x * x * 0.5;
        x * self.r.eval_f64(xi)
    }
}

impl EvenField {
    pub fn new(omega: &Rat, s: RatFunc) -> Self {
        EvenField {
            omega: omega.clone(),
            s,
        }
    }

    pub fn zero(omega: &Rat) -> Self {
        EvenField::new(omega, RatFunc::zero())
    }

    pub fn constant(omega: &Rat, c: Rat) -> Self {
        EvenField::new(omega, RatFunc::constant(c))
    }

    pub fn omega(&self) -> &Rat {
        &self.omega
    }

    pub fn ratfunc(&self) -> &RatFunc {
        &self.s
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        self.s.as_constant()
    }

    pub fn add(&self, other: &EvenField) -> EvenField {
        same_scale(&self.omega, &other.omega);
        EvenField::new(&self.omega, &self.s + &other.s)
    }

    pub fn sub(&self, other: &EvenField) -> EvenField {
        same_scale(&self.omega, &other.omega);
        EvenField::new(&self.omega, &self.s - &other.s)
    }

    pub fn neg(&self) -> EvenField {
        EvenField::new(&self.omega, -&self.s)
    }

    pub fn scale(&self, c: &Rat) -> EvenField {
        EvenField::new(&self.omega, self.s.scale(c))
    }

    pub fn add_constant(&self, c: &Rat) -> EvenField {
        EvenField::new(&self.omega, &self.s + &RatFunc::constant(c.clone()))
    }

    /// `S(xi)' = x * omega S'(xi)`
    pub fn derive(&self) -> OddField {
        OddField::new(&self.omega, self.s.derive().scale(&self.omega))
    }

    pub fn mul(&self, other: &EvenField) -> EvenField {
        same_scale(&self.omega, &other.omega);
        EvenField::new(&self.omega, &self.s * &other.s)
    }

    /// Exact value at `xi`.
    pub fn eval_xi(&self, xi: &Rat) -> Result<Rat> {
        self.s.eval(xi)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let xi = self.omega.to_f64() * x * x * 0.5;
        self.s.eval_f64(xi)
    }
}

/// Parity tag used by the JSON field payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// JSON payload `{"parity", "ratfunc", "omega", "a", "energy"}` for a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub parity: Parity,
    pub ratfunc: RatFunc,
    pub omega: Rat,
    pub a: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<Rat>,
}

impl FieldRecord {
    pub fn odd(f: &OddField, params: &Params, energy: Option<Rat>) -> Self {
        FieldRecord {
            parity: Parity::Odd,
            ratfunc: f.ratfunc().clone(),
            omega: f.omega().clone(),
            a: params.a.clone(),
            energy,
        }
    }

    pub fn even(f: &EvenField, params: &Params, energy: Option<Rat>) -> Self {
        FieldRecord {
            parity: Parity::Even,
            ratfunc: f.ratfunc().clone(),
            omega: f.omega().clone(),
            a: params.a.clone(),
            energy,
        }
    }

    pub fn to_odd(&self) -> Result<OddField> {
        match self.parity {
            Parity::Odd => Ok(OddField::new(&self.omega, self.ratfunc.clone())),
            Parity::Even => Err(Error::Parse("expected an odd field".into())),
        }
    }

    pub fn to_even(&self) -> Result<EvenField> {
        match self.parity {
            Parity::Even => Ok(EvenField::new(&self.omega, self.ratfunc.clone())),
            Parity::Odd => Err(Error::Parse("expected an even field".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    #[test]
    fn params_reject_nonpositive_omega() {
        assert!(Params::new(Rat::zero(), Rat::one()).is_err());
        assert!(Params::new(r(-1, 2), Rat::one()).is_err());
        assert_eq!(Params::from_ints(2, 3).shift_a(1).a, Rat::from_int(4));
    }

    #[test]
    fn derivative_of_ground_rs_function() {
        // w0 = omega x/2 - a/x, w0' = omega/2 + a/x^2 = omega/2 + a omega/(2 xi)
        let (om, a) = (r(5, 2), r(7, 2));
        let w0 = OddField::linear(&om, &om * Rat::half()).add(&OddField::inverse_x(&om, -&a));
        let expect = EvenField::new(
            &om,
            &RatFunc::constant(&om * Rat::half()) + &RatFunc::inv_xi_pow(&a * &om * Rat::half(), 1),
        );
        assert_eq!(w0.derive(), expect);
    }

    #[test]
    fn numeric_chain_rule_matches() {
        let om = r(3, 2);
        let f = OddField::new(&om, RatFunc::new(Poly::from_ints(&[1, 2]), Poly::from_ints(&[3, 1])).unwrap());
        let h = 1e-5;
        for x in [0.3, 1.0, 2.2] {
            let fd = (f.eval_f64(x + h) - f.eval_f64(x - h)) / (2.0 * h);
            assert!((fd - f.derive().eval_f64(x)).abs() < 1e-7);
            let g = f.derive();
            let gd = (g.eval_f64(x + h) - g.eval_f64(x - h)) / (2.0 * h);
            assert!((gd - g.derive().eval_f64(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn self_subtraction_is_zero() {
        let om = Rat::from_int(2);
        let f = OddField::inverse_x(&om, r(3, 4)).add(&OddField::linear(&om, Rat::one()));
        assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn reciprocal_of_linear_field() {
        // 1 / (omega x / 2) = 2 / (omega x)
        let om = r(2, 3);
        let f = OddField::linear(&om, &om * Rat::half());
        let inv = f.invert_scaled(&Rat::one()).unwrap();
        assert_eq!(inv, OddField::inverse_x(&om, Rat::from_int(2) / &om));
        assert_eq!(OddField::zero(&om).invert_scaled(&Rat::one()), Err(Error::ZeroField));
    }

    #[test]
    fn product_of_odd_fields_is_even() {
        let om = Rat::from_int(4);
        let x = OddField::linear(&om, Rat::one());
        let inv = OddField::inverse_x(&om, Rat::one());
        assert_eq!(x.mul(&inv), EvenField::constant(&om, Rat::one()));
        // x * x = x^2 = 2 xi / omega
        let sq = x.mul(&x);
        assert!((sq.eval_f64(1.5) - 2.25).abs() < 1e-12);
    }

    #[test]
    fn record_round_trip() {
        let p = Params::from_ints(2, 3);
        let f = OddField::inverse_x(&p.omega, Rat::one());
        let rec = FieldRecord::odd(&f, &p, Some(Rat::from_int(-4)));
        let s = serde_json::to_string(&rec).unwrap();
        assert!(s.contains("\"parity\":\"odd\""));
        let back: FieldRecord = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_odd().unwrap(), f);
        assert!(back.to_even().is_err());
    }
}
