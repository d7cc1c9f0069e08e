//! The isotonic potential, its Riccati-Schrodinger (RS) functions and their images
//! under the parameter inversions `omega -> -omega`, `a -> 1 - a` and both.
//!
//! Every RS function here is `w_n(x; omega', a')` for an effective parameter pair
//! `(omega', a')` obtained from `(omega, a)` by one of the inversions. Because
//! `omega'^2 = omega^2` and `a'(a'-1) = a(a-1)`, each image solves an RS equation
//! for the *same* potential `V(x; omega, a)` at a shifted energy, which is carried
//! alongside the field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{sturm_count, Bound, Poly, Rat, RatFunc};
use crate::field::{EvenField, OddField, Params};
use crate::laguerre::laguerre;

/// `V(x) = omega^2 x^2 / 4 + a(a-1)/x^2 - omega(a + 1/2)`, in `xi`:
/// `omega xi / 2 + a(a-1) omega / (2 xi) - omega (a + 1/2)`.
pub fn isotonic_potential(p: &Params) -> EvenField {
    let om = &p.omega;
    let half = Rat::half();
    let harmonic = RatFunc::from_poly(Poly::monomial(om * &half, 1));
    let centrifugal = RatFunc::inv_xi_pow(&p.a * (&p.a - Rat::one()) * om * &half, 1);
    let shift = RatFunc::constant(-(om * (&p.a + &half)));
    EvenField::new(om, &(&harmonic + &centrifugal) + &shift)
}

/// Which parameter inversion produced an RS function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    /// Physical `w_n`.
    Identity,
    /// `v_n = w_n(omega -> -omega)`.
    OmegaInversion,
    /// `u_n = w_n(a -> 1 - a)`.
    AInversion,
    /// `r_n = w_n(omega -> -omega, a -> 1 - a)`.
    Both,
}

impl Symmetry {
    pub const ALL: [Symmetry; 4] = [
        Symmetry::Identity,
        Symmetry::OmegaInversion,
        Symmetry::AInversion,
        Symmetry::Both,
    ];

    /// Sign `s` with `omega' = s omega`.
    pub fn omega_sign(self) -> i64 {
        match self {
            Symmetry::Identity | Symmetry::AInversion => 1,
            Symmetry::OmegaInversion | Symmetry::Both => -1,
        }
    }

    pub fn effective_a(self, a: &Rat) -> Rat {
        match self {
            Symmetry::Identity | Symmetry::OmegaInversion => a.clone(),
            Symmetry::AInversion | Symmetry::Both => Rat::one() - a,
        }
    }

    fn effective(self, p: &Params) -> (Rat, Rat) {
        (&p.omega * Rat::from_int(self.omega_sign()), self.effective_a(&p.a))
    }

    /// Energy of the `n`-th function relative to `V(x; omega, a)`:
    /// `2n omega' - omega (a + 1/2) + omega' (a' + 1/2)`.
    ///
    /// Gives `2n omega`, `-2(n+a+1/2) omega`, `2(n+1/2-a) omega`, `-2(n+1) omega`.
    pub fn energy(self, n: usize, p: &Params) -> Rat {
        let (om_e, a_e) = self.effective(p);
        let half = Rat::half();
        &om_e * Rat::from_int(2 * n as i64) - &p.omega * (&p.a + &half) + &om_e * (a_e + half)
    }

    /// Laguerre parameter `a' - 1/2`.
    pub fn laguerre_alpha(self, a: &Rat) -> Rat {
        self.effective_a(a) - Rat::half()
    }

    /// `L_n^(a'-1/2)(s xi)`, the polynomial whose log-derivative is the regular part.
    pub fn laguerre_factor(self, n: usize, p: &Params) -> Poly {
        let l = laguerre(n as isize, &self.laguerre_alpha(&p.a));
        if self.omega_sign() < 0 {
            l.compose_neg()
        } else {
            l
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Symmetry::Identity => "w",
            Symmetry::OmegaInversion => "v",
            Symmetry::AInversion => "u",
            Symmetry::Both => "r",
        }
    }
}

/// How to build `w_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RsMethod {
    /// Terminating continued fraction, evaluated from the innermost term outwards.
    Cf,
    /// `w_0 + omega' x L_{n-1}^(a'+1/2)(s xi) / L_n^(a'-1/2)(s xi)`.
    Log,
}

/// An RS function together with the energy of the RS equation it solves
/// for the base potential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsFunction {
    pub field: OddField,
    pub energy: Rat,
}

/// `omega' x / 2 - a' / x`
pub fn ground_rs(sym: Symmetry, p: &Params) -> OddField {
    let (om_e, a_e) = sym.effective(p);
    OddField::linear(&p.omega, om_e * Rat::half()).add(&OddField::inverse_x(&p.omega, -a_e))
}

fn regular_part_cf(sym: Symmetry, n: usize, p: &Params) -> Result<OddField> {
    let (om_e, a_e) = sym.effective(p);
    let mut tail = OddField::zero(&p.omega);
    for m in 1..=n {
        // b = a' + n - m, innermost term first
        let b = &a_e + Rat::from_int((n - m) as i64);
        let denom = OddField::linear(&p.omega, om_e.clone())
            .add(&OddField::inverse_x(&p.omega, -(b * Rat::from_int(2) + Rat::one())))
            .add(&tail);
        let num = -(&om_e * Rat::from_int(2 * m as i64));
        tail = denom.invert_scaled(&num)?;
    }
    Ok(tail)
}

fn regular_part_log(sym: Symmetry, n: usize, p: &Params) -> Result<OddField> {
    if n == 0 {
        return Ok(OddField::zero(&p.omega));
    }
    let (om_e, _) = sym.effective(p);
    let alpha = sym.laguerre_alpha(&p.a);
    let mut upper = laguerre(n as isize - 1, &(&alpha + Rat::one()));
    let mut lower = laguerre(n as isize, &alpha);
    if sym.omega_sign() < 0 {
        upper = upper.compose_neg();
        lower = lower.compose_neg();
    }
    Ok(OddField::new(&p.omega, RatFunc::new(upper, lower)?.scale(&om_e)))
}

/// `R_n, Q_n, P_n, T_n` as `-(log L_n^(a'-1/2)(s xi))'`.
pub fn regular_part(sym: Symmetry, n: usize, p: &Params) -> Result<OddField> {
    OddField::neg_log_derivative(&p.omega, &sym.laguerre_factor(n, p))
}

/// The `n`-th RS function of the given symmetry sector.
pub fn rs_image(sym: Symmetry, n: usize, p: &Params, method: RsMethod) -> Result<RsFunction> {
    let tail = match method {
        RsMethod::Cf => regular_part_cf(sym, n, p)?,
        RsMethod::Log => regular_part_log(sym, n, p)?,
    };
    Ok(RsFunction {
        field: ground_rs(sym, p).add(&tail),
        energy: sym.energy(n, p),
    })
}

pub fn rs_w(n: usize, p: &Params, method: RsMethod) -> Result<RsFunction> {
    rs_image(Symmetry::Identity, n, p, method)
}

/// Image of `w_n` under `omega -> -omega`; regular on the half line for `a >= 1`.
pub fn rs_v(n: usize, p: &Params) -> Result<RsFunction> {
    rs_image(Symmetry::OmegaInversion, n, p, RsMethod::Log)
}

/// Image of `w_n` under `a -> 1 - a`; regular for `a > n + 1/2`.
pub fn rs_u(n: usize, p: &Params) -> Result<RsFunction> {
    rs_image(Symmetry::AInversion, n, p, RsMethod::Log)
}

/// Image of `w_n` under both inversions; regular for even `n` and `a > n + 1/2`.
pub fn rs_r(n: usize, p: &Params) -> Result<RsFunction> {
    rs_image(Symmetry::Both, n, p, RsMethod::Log)
}

/// `v_n(x) = i w_n(i x)`, i.e. `R_v(xi) = -R_w(-xi)`.
pub fn wick_check(n: usize, p: &Params) -> Result<bool> {
    let w = rs_w(n, p, RsMethod::Log)?;
    let v = rs_v(n, p)?;
    Ok(v.field == w.field.wick_image())
}

/// Number of distinct poles of an odd field's rational part on `xi > 0`.
pub fn positive_pole_count(f: &OddField) -> Result<usize> {
    sturm_count(f.ratfunc().den(), &Bound::At(Rat::zero()), &Bound::PosInf)
}

/// `x^p exp(s omega x^2 / 4) rat(xi)` with energy `E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiRationalWave {
    pub xpow: Rat,
    pub gauss_sign: i8,
    pub rat: RatFunc,
    pub energy: Rat,
    pub omega: Rat,
}

impl QuasiRationalWave {
    /// `(log psi)' = p/x + s omega x / 2 + (log rat)'`.
    pub fn log_derivative(&self) -> OddField {
        let om = &self.omega;
        let mut f = OddField::inverse_x(om, self.xpow.clone())
            .add(&OddField::linear(om, Rat::from_int(self.gauss_sign as i64) * om * Rat::half()));
        if !self.rat.is_zero() {
            let num = OddField::neg_log_derivative(om, self.rat.num()).expect("nonzero numerator");
            let den = OddField::neg_log_derivative(om, self.rat.den()).expect("nonzero denominator");
            f = f.sub(&num.sub(&den));
        }
        f
    }

    /// RS function `-psi'/psi`.
    pub fn rs_function(&self) -> OddField {
        self.log_derivative().neg()
    }

    /// Moves any power of `xi` in `rat` into `xpow`, so `xpow` is the true
    /// behaviour at the origin.
    pub fn normalized(&self) -> QuasiRationalWave {
        let low = |p: &Poly| p.coeffs().iter().take_while(|c| c.is_zero()).count();
        let (mn, md) = (low(self.rat.num()), low(self.rat.den()));
        if mn == md {
            return self.clone();
        }
        let strip = |p: &Poly, m: usize| Poly::new(p.coeffs()[m..].to_vec());
        // xi^m = (omega/2)^m x^(2m)
        let shift = mn as i64 - md as i64;
        let c = (&self.omega * Rat::half()).pow(shift.unsigned_abs() as u32);
        let c = if shift > 0 { c } else { c.recip() };
        let rat = RatFunc::new(strip(self.rat.num(), mn), strip(self.rat.den(), md))
            .expect("nonzero denominator")
            .scale(&c);
        QuasiRationalWave {
            xpow: &self.xpow + Rat::from_int(2 * shift),
            rat,
            ..self.clone()
        }
    }

    /// Decaying Gaussian, `x^p` square-integrable at the origin, no poles on `xi > 0`.
    pub fn is_square_integrable(&self) -> Result<bool> {
        if self.rat.is_zero() {
            return Ok(false);
        }
        let w = self.normalized();
        if w.gauss_sign >= 0 || w.xpow <= Rat::new(-1, 2) {
            return Ok(false);
        }
        Ok(sturm_count(w.rat.den(), &Bound::At(Rat::zero()), &Bound::PosInf)? == 0)
    }

    /// `1 / psi`; its RS function is `psi'/psi`, the negative of the original one.
    pub fn reciprocal(&self) -> Result<QuasiRationalWave> {
        Ok(QuasiRationalWave {
            xpow: -&self.xpow,
            gauss_sign: -self.gauss_sign,
            rat: self.rat.recip()?,
            energy: self.energy.clone(),
            omega: self.omega.clone(),
        })
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let om = self.omega.to_f64();
        let xi = 0.5 * om * x * x;
        x.powf(self.xpow.to_f64()) * (self.gauss_sign as f64 * 0.25 * om * x * x).exp() * self.rat.eval_f64(xi)
    }
}

/// One of the four quasi-rational eigenfunctions of the isotonic Hamiltonian.
///
/// Sector 1 is the physical ladder; sectors 2-4 are its images under
/// `omega -> -omega`, `a -> 1 - a` and both, with `-psi'/psi` equal to
/// `v_n`, `u_n`, `r_n`.
pub fn sector_wave(sector: u8, n: usize, p: &Params) -> Result<QuasiRationalWave> {
    let sym = match sector {
        1 => Symmetry::Identity,
        2 => Symmetry::OmegaInversion,
        3 => Symmetry::AInversion,
        4 => Symmetry::Both,
        _ => return Err(Error::InvalidParams(format!("sector must be 1..=4, got {sector}"))),
    };
    Ok(QuasiRationalWave {
        xpow: sym.effective_a(&p.a),
        gauss_sign: -(sym.omega_sign() as i8),
        rat: RatFunc::from_poly(sym.laguerre_factor(n, p)),
        energy: sym.energy(n, p),
        omega: p.omega.clone(),
    })
}

/// Seed families that carry a prepotential form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrepotentialSeed {
    /// `v_n(x; omega, a)`
    V,
    /// `u_n(x; omega, a + n)`
    U,
}

/// `W(x) = gauss x^2 + xlog log x + log logpoly(xi)` with `-W' = seed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prepotential {
    pub gauss: Rat,
    pub xlog: Rat,
    pub logpoly: Poly,
}

impl Prepotential {
    /// `-W'` as an odd field.
    pub fn neg_gradient(&self, omega: &Rat) -> Result<OddField> {
        // -(gauss x^2)' = -2 gauss x; -(xlog log x)' = -xlog / x
        let f = OddField::linear(omega, -(&self.gauss * Rat::from_int(2)))
            .add(&OddField::inverse_x(omega, -&self.xlog));
        Ok(f.add(&OddField::neg_log_derivative(omega, &self.logpoly)?))
    }
}

/// Negative antiderivative of the seed: for `v_n`, `omega x^2/4 + a log x + log L_n^(a-1/2)(-xi)`;
/// for `u_n(a + n)`, `-omega x^2/4 - (a+n-1) log x + log L_n^(-(a+n-1/2))(xi)`.
pub fn prepotential(seed: PrepotentialSeed, n: usize, p: &Params) -> Prepotential {
    let quarter = &p.omega * Rat::new(1, 4);
    match seed {
        PrepotentialSeed::V => Prepotential {
            gauss: quarter,
            xlog: p.a.clone(),
            logpoly: Symmetry::OmegaInversion.laguerre_factor(n, p),
        },
        PrepotentialSeed::U => {
            let shifted = p.shift_a(n as i64);
            Prepotential {
                gauss: -quarter,
                xlog: -(&shifted.a - Rat::one()),
                logpoly: Symmetry::AInversion.laguerre_factor(n, &shifted),
            }
        }
    }
}

/// The RS function a prepotential integrates.
pub fn prepotential_seed_field(seed: PrepotentialSeed, n: usize, p: &Params) -> Result<OddField> {
    match seed {
        PrepotentialSeed::V => rs_v(n, p).map(|r| r.field),
        PrepotentialSeed::U => rs_u(n, &p.shift_a(n as i64)).map(|r| r.field),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    fn params(om: Rat, a: Rat) -> Params {
        Params::new(om, a).unwrap()
    }

    #[test]
    fn potential_value_and_pure_oscillator() {
        let v = isotonic_potential(&Params::from_ints(2, 2));
        assert_eq!(v.eval_xi(&Rat::one()).unwrap(), Rat::from_int(-2));
        let v1 = isotonic_potential(&Params::from_ints(2, 1));
        assert!(v1.ratfunc().den().is_constant());
    }

    #[test]
    fn ground_functions() {
        let p = params(r(5, 2), r(7, 2));
        let om = &p.omega;
        let half = Rat::half();
        let lin = |c: Rat| OddField::linear(om, c);
        let inv = |c: Rat| OddField::inverse_x(om, c);
        let w0 = lin(om * &half).add(&inv(-&p.a));
        assert_eq!(rs_w(0, &p, RsMethod::Cf).unwrap().field, w0);
        assert_eq!(rs_w(0, &p, RsMethod::Log).unwrap().field, w0);
        // R = (omega/2)(xi - a)/xi
        let expect = RatFunc::new(Poly::new(vec![-&p.a, Rat::one()]), Poly::xi()).unwrap().scale(&(om * &half));
        assert_eq!(w0.ratfunc(), &expect);
        assert_eq!(rs_v(0, &p).unwrap().field, lin(-(om * &half)).add(&inv(-&p.a)));
        assert_eq!(rs_u(0, &p).unwrap().field, lin(om * &half).add(&inv(&p.a - Rat::one())));
        assert_eq!(rs_r(0, &p).unwrap().field, lin(-(om * &half)).add(&inv(&p.a - Rat::one())));
        // r0(a) = -w0(a - 1)
        let w0_shift = rs_w(0, &p.shift_a(-1), RsMethod::Log).unwrap().field;
        assert_eq!(rs_r(0, &p).unwrap().field, w0_shift.neg());
    }

    #[test]
    fn first_excited_continued_fraction() {
        // w1 = w0 - 2 omega / (omega x - (2a+1)/x)
        let p = Params::from_ints(2, 2);
        let om = &p.omega;
        let den = OddField::linear(om, om.clone()).add(&OddField::inverse_x(om, -(&p.a * Rat::from_int(2) + Rat::one())));
        let expect = ground_rs(Symmetry::Identity, &p).add(&den.invert_scaled(&-(om * Rat::from_int(2))).unwrap());
        assert_eq!(rs_w(1, &p, RsMethod::Cf).unwrap().field, expect);
        assert_eq!(rs_w(1, &p, RsMethod::Log).unwrap().field, expect);
    }

    #[test]
    fn q1_formula() {
        // Q1 = -2 omega / (omega x + (2a+1)/x)
        let p = params(r(3, 2), r(5, 3));
        let om = &p.omega;
        let den = OddField::linear(om, om.clone()).add(&OddField::inverse_x(om, &p.a * Rat::from_int(2) + Rat::one()));
        let q1 = regular_part(Symmetry::OmegaInversion, 1, &p).unwrap();
        assert_eq!(q1, den.invert_scaled(&-(om * Rat::from_int(2))).unwrap());
    }

    #[test]
    fn cf_equals_log_all_sectors() {
        for (om, a) in [(r(2, 1), r(2, 1)), (r(1, 3), r(7, 5)), (r(5, 2), r(-4, 3))] {
            let p = params(om, a);
            for sym in Symmetry::ALL {
                for n in 0..=5 {
                    let cf = rs_image(sym, n, &p, RsMethod::Cf).unwrap();
                    let lg = rs_image(sym, n, &p, RsMethod::Log).unwrap();
                    assert_eq!(cf, lg, "{sym:?} n={n} {p}");
                    let reg = regular_part(sym, n, &p).unwrap();
                    assert_eq!(lg.field, ground_rs(sym, &p).add(&reg));
                }
            }
        }
    }

    #[test]
    fn energies_of_the_four_sectors() {
        let p = params(r(3, 1), r(5, 2));
        let om = &p.omega;
        let n = 4usize;
        let nr = Rat::from_int(n as i64);
        let two = Rat::from_int(2);
        assert_eq!(Symmetry::Identity.energy(n, &p), &two * &nr * om);
        assert_eq!(Symmetry::OmegaInversion.energy(n, &p), -(&two * (&nr + &p.a + Rat::half()) * om));
        assert_eq!(Symmetry::AInversion.energy(n, &p), &two * (&nr + Rat::half() - &p.a) * om);
        assert_eq!(Symmetry::Both.energy(n, &p), -(&two * (&nr + Rat::one()) * om));
    }

    #[test]
    fn wick_rotation_identity() {
        assert!(wick_check(0, &Params::from_ints(3, 2)).unwrap());
        assert!(wick_check(1, &Params::from_ints(2, 2)).unwrap());
        for n in 0..=6 {
            assert!(wick_check(n, &params(r(7, 3), r(11, 4))).unwrap());
        }
    }

    #[test]
    fn regular_seeds_have_no_positive_poles() {
        let p = params(r(2, 1), r(1, 1));
        for n in 0..=6 {
            assert_eq!(positive_pole_count(&rs_v(n, &p).unwrap().field).unwrap(), 0);
            assert_eq!(positive_pole_count(&rs_w(n, &p, RsMethod::Log).unwrap().field).unwrap(), n);
        }
        for n in 1..=4 {
            for m in 1..=2 {
                let p = params(r(2, 1), Rat::from_int((n + m) as i64) + Rat::half());
                let pn = regular_part(Symmetry::AInversion, n, &p).unwrap();
                assert_eq!(positive_pole_count(&pn).unwrap(), 0, "P_{n} a={}", p.a);
            }
        }
        let t2 = regular_part(Symmetry::Both, 2, &params(r(2, 1), r(7, 2))).unwrap();
        assert_eq!(positive_pole_count(&t2).unwrap(), 0);
    }

    #[test]
    fn sector_waves() {
        let p = params(r(2, 1), r(3, 1));
        let s1 = sector_wave(1, 0, &p).unwrap();
        assert_eq!((s1.xpow.clone(), s1.gauss_sign, s1.energy.clone()), (p.a.clone(), -1, Rat::zero()));
        assert_eq!(s1.rat, RatFunc::one());
        let s4 = sector_wave(4, 0, &p).unwrap();
        assert_eq!((s4.xpow.clone(), s4.gauss_sign), (Rat::one() - &p.a, 1));
        assert_eq!(s4.energy, -(&p.omega * Rat::from_int(2)));
        for n in 0..=4 {
            assert_eq!(sector_wave(2, n, &p).unwrap().rs_function(), rs_v(n, &p).unwrap().field);
            assert_eq!(sector_wave(3, n, &p).unwrap().rs_function(), rs_u(n, &p).unwrap().field);
            assert_eq!(sector_wave(4, n, &p).unwrap().rs_function(), rs_r(n, &p).unwrap().field);
            assert_eq!(sector_wave(1, n, &p).unwrap().rs_function(), rs_w(n, &p, RsMethod::Cf).unwrap().field);
        }
        assert!(sector_wave(5, 0, &p).is_err());
    }

    #[test]
    fn prepotential_records() {
        let p = Params::from_ints(2, 2);
        let w = prepotential(PrepotentialSeed::V, 0, &p);
        assert_eq!(w.logpoly, Poly::one());
        assert_eq!(w.xlog, p.a);
        let w1 = prepotential(PrepotentialSeed::V, 1, &p);
        assert_eq!(w1.logpoly, Poly::new(vec![r(5, 2), Rat::one()]));
        let u = prepotential(PrepotentialSeed::U, 2, &p);
        assert_eq!(u.xlog, Rat::from_int(-3));
        assert_eq!(u.gauss, r(-1, 2));
    }

    #[test]
    fn prepotential_gradient_reproduces_seed() {
        let p = params(r(3, 2), r(9, 4));
        for n in 0..=5 {
            for seed in [PrepotentialSeed::V, PrepotentialSeed::U] {
                let w = prepotential(seed, n, &p);
                assert_eq!(w.neg_gradient(&p.omega).unwrap(), prepotential_seed_field(seed, n, &p).unwrap());
            }
        }
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::testutil::params;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn continued_fraction_matches_log_derivative(p in params(), n in 0usize..7) {
            for sym in Symmetry::ALL {
                prop_assert_eq!(regular_part_cf(sym, n, &p).unwrap(), regular_part_log(sym, n, &p).unwrap(), "{:?}", sym);
            }
        }

        #[test]
        fn wick_relation(p in params(), n in 0usize..7) {
            prop_assert!(wick_check(n, &p).unwrap());
        }
    }
}
