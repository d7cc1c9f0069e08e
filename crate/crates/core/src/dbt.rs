//! Darboux-Backlund transformations built from the four seed families and the
//! extended potentials they generate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{isolate_roots, Bound, Poly, Rat, RatFunc, RootInterval};
use crate::field::{EvenField, FieldRecord, OddField, Params};
use crate::rsfields::{
    isotonic_potential, regular_part, rs_image, sector_wave, QuasiRationalWave, RsFunction, RsMethod,
    Symmetry,
};

/// Tower of extensions, named by the seed family: `w_n`, `v_n`, `u_n`, `r_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    L0,
    L1,
    L2,
    L3,
}

impl Series {
    pub const ALL: [Series; 4] = [Series::L0, Series::L1, Series::L2, Series::L3];

    pub fn symmetry(self) -> Symmetry {
        match self {
            Series::L0 => Symmetry::Identity,
            Series::L1 => Symmetry::OmegaInversion,
            Series::L2 => Symmetry::AInversion,
            Series::L3 => Symmetry::Both,
        }
    }

    /// Sector of the seed's quasi-rational wave.
    pub fn sector(self) -> u8 {
        match self {
            Series::L0 => 1,
            Series::L1 => 2,
            Series::L2 => 3,
            Series::L3 => 4,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "L0" => Ok(Series::L0),
            "L1" => Ok(Series::L1),
            "L2" => Ok(Series::L2),
            "L3" => Ok(Series::L3),
            _ => Err(Error::Parse(format!("unknown series {s:?}"))),
        }
    }
}

/// Seed RS function of a series with its energy.
pub fn seed(series: Series, n: usize, p: &Params) -> Result<RsFunction> {
    rs_image(series.symmetry(), n, p, RsMethod::Log)
}

/// Physical RS function `w_k` with energy `2 k omega`.
pub fn level(k: usize, p: &Params) -> Result<RsFunction> {
    rs_image(Symmetry::Identity, k, p, RsMethod::Log)
}

/// `w_k -> -seed + (E_k - E_s) / (seed - w_k)`.
pub fn dbt_apply(seed: &RsFunction, target: &RsFunction) -> Result<RsFunction> {
    let gap = &target.energy - &seed.energy;
    if gap.is_zero() {
        return Err(Error::EqualEnergies(gap + &seed.energy));
    }
    let diff = seed.field.sub(&target.field);
    if diff.is_zero() {
        return Err(Error::IdenticalFields);
    }
    Ok(RsFunction {
        field: seed.field.neg().add(&diff.invert_scaled(&gap)?),
        energy: target.energy.clone(),
    })
}

/// `-f' + f^2 - V + E`; the RS equation holds iff this is zero.
///
/// With `f = x N/D` and `V = A/B` the residual is
/// `[-(N D + 2 xi (N' D - N D')) B + (2 xi / omega) N^2 B - A D^2 + E D^2 B] / (D^2 B)`,
/// so the numerator is formed without any gcd and reduced only when nonzero.
pub fn riccati_residual(f: &OddField, v: &EvenField, e: &Rat) -> RatFunc {
    let (n, d) = (f.ratfunc().num(), f.ratfunc().den());
    let (a, b) = (v.ratfunc().num(), v.ratfunc().den());
    let xi = Poly::xi();
    let two_xi = xi.scale(&Rat::from_int(2));
    let d2 = d * d;
    let wronskian = &(&n.derive() * d) - &(n * &d.derive());
    let deriv = &(n * d) + &(&two_xi * &wronskian);
    let square = &(&two_xi * &(n * n)).scale(&f.omega().recip());
    let num = &(&(&(square - &deriv) * b) - &(a * &d2)) + &(&d2 * b).scale(e);
    if num.is_zero() {
        return RatFunc::zero();
    }
    RatFunc::new(num, &d2 * b).expect("nonzero denominator")
}

/// `V + 2 seed'` with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ExtendedPotentialRecord", try_from = "ExtendedPotentialRecord")]
pub struct ExtendedPotential {
    pub series: Series,
    pub n: usize,
    pub params: Params,
    pub field: EvenField,
    pub seed_energy: Rat,
}

#[derive(Serialize, Deserialize)]
struct ExtendedPotentialRecord {
    series: Series,
    n: usize,
    omega: Rat,
    a: Rat,
    field: FieldRecord,
    seed_energy: Rat,
}

impl From<ExtendedPotential> for ExtendedPotentialRecord {
    fn from(ep: ExtendedPotential) -> Self {
        ExtendedPotentialRecord {
            series: ep.series,
            n: ep.n,
            field: FieldRecord::even(&ep.field, &ep.params, None),
            omega: ep.params.omega,
            a: ep.params.a,
            seed_energy: ep.seed_energy,
        }
    }
}

impl TryFrom<ExtendedPotentialRecord> for ExtendedPotential {
    type Error = Error;
    fn try_from(r: ExtendedPotentialRecord) -> Result<Self> {
        let params = Params::new(r.omega, r.a)?;
        if r.field.omega != params.omega {
            return Err(Error::Parse("field omega differs from potential omega".into()));
        }
        Ok(ExtendedPotential {
            series: r.series,
            n: r.n,
            field: r.field.to_even()?,
            params,
            seed_energy: r.seed_energy,
        })
    }
}

pub fn extend(series: Series, n: usize, p: &Params) -> Result<ExtendedPotential> {
    let s = seed(series, n, p)?;
    let field = isotonic_potential(p).add(&s.field.derive().scale(&Rat::from_int(2)));
    Ok(ExtendedPotential {
        series,
        n,
        params: p.clone(),
        field,
        seed_energy: s.energy,
    })
}

impl ExtendedPotential {
    pub fn seed(&self) -> Result<RsFunction> {
        seed(self.series, self.n, &self.params)
    }

    /// RS function of the image of level `k` under the transformation.
    pub fn transformed_rs(&self, k: usize) -> Result<RsFunction> {
        dbt_apply(&self.seed()?, &level(k, &self.params)?)
    }

    /// `-seed` at the seed energy: RS function of `1 / psi_seed`, the state the
    /// transformation adds (normalizable only for the L3 series).
    pub fn extra_rs(&self) -> Result<RsFunction> {
        let s = self.seed()?;
        Ok(RsFunction {
            field: s.field.neg(),
            energy: s.energy,
        })
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.field.eval_f64(x)
    }
}

/// `psi_k^(n) = (seed - w_k) psi_k / sqrt(E_k - E_seed)`, with the normalisation carried
/// as the squared gap so no square root enters the exact layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformedWave {
    pub wave: QuasiRationalWave,
    pub energy_gap: Rat,
}

impl TransformedWave {
    /// Values including the `1/sqrt(E_k - E_seed)` factor.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.wave.eval_f64(x) / self.energy_gap.to_f64().abs().sqrt()
    }
}

pub fn transformed_wave(series: Series, n: usize, k: usize, p: &Params) -> Result<TransformedWave> {
    let s = seed(series, n, p)?;
    let target = level(k, p)?;
    let gap = &target.energy - &s.energy;
    if gap.is_zero() {
        return Err(Error::EqualEnergies(target.energy));
    }
    let psi = sector_wave(1, k, p)?;
    // seed - w_k = x D(xi)
    let d = s.field.sub(&target.field);
    let wave = QuasiRationalWave {
        xpow: &psi.xpow + Rat::one(),
        gauss_sign: psi.gauss_sign,
        rat: d.ratfunc() * &psi.rat,
        energy: target.energy,
        omega: p.omega.clone(),
    }
    .normalized();
    Ok(TransformedWave { wave, energy_gap: gap })
}

/// `exp(+ integral seed)`, the reciprocal of the seed's sector wave.
pub fn extra_state(series: Series, n: usize, p: &Params) -> Result<QuasiRationalWave> {
    Ok(sector_wave(series.sector(), n, p)?.reciprocal()?.normalized())
}

/// Poles of an extended potential on the open half line `xi > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub pole_count_positive_axis: usize,
    pub regular: bool,
    pub pole_locations: Vec<RootInterval>,
}

pub fn regularity(ep: &ExtendedPotential) -> Result<RegularityReport> {
    let den = ep.field.ratfunc().den();
    let poles = isolate_roots(den, &Bound::At(Rat::zero()), &Bound::PosInf)?;
    Ok(RegularityReport {
        pole_count_positive_axis: poles.len(),
        regular: poles.is_empty(),
        pole_locations: poles,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coincidence {
    /// `P_1(a) = Q_1(a - 2)`
    P1Q1,
    /// `T_1(a) = R_1(a - 2)`
    T1R1,
}

pub fn coincidence_check(which: Coincidence, p: &Params) -> Result<bool> {
    let lowered = p.shift_a(-2);
    let (lhs, rhs) = match which {
        Coincidence::P1Q1 => (
            regular_part(Symmetry::AInversion, 1, p)?,
            regular_part(Symmetry::OmegaInversion, 1, &lowered)?,
        ),
        Coincidence::T1R1 => (
            regular_part(Symmetry::Both, 1, p)?,
            regular_part(Symmetry::Identity, 1, &lowered)?,
        ),
    };
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    fn residual_by_field_calculus(f: &OddField, v: &EvenField, e: &Rat) -> RatFunc {
        f.derive().neg().add(&f.mul(f)).sub(v).add_constant(e).ratfunc().clone()
    }

    #[test]
    fn residual_matches_field_calculus() {
        let p = Params::new(r(3, 2), r(8, 3)).unwrap();
        let v = isotonic_potential(&p);
        let ep = extend(Series::L1, 2, &p).unwrap();
        for k in 0..=3 {
            for e in [Rat::zero(), r(-7, 4), Rat::from_int(2 * k as i64) * &p.omega] {
                let w = level(k, &p).unwrap().field;
                assert_eq!(riccati_residual(&w, &v, &e), residual_by_field_calculus(&w, &v, &e));
                let t = ep.transformed_rs(k).unwrap().field;
                assert_eq!(riccati_residual(&t, &ep.field, &e), residual_by_field_calculus(&t, &ep.field, &e));
            }
        }
    }

    #[test]
    fn ground_state_factorization() {
        let p = params(2, 2);
        let w0 = level(0, &p).unwrap();
        assert!(riccati_residual(&w0.field, &isotonic_potential(&p), &w0.energy).is_zero());
    }

    fn params(om: i64, a: i64) -> Params {
        Params::from_ints(om, a)
    }

    #[test]
    fn seeds_solve_their_equations() {
        let p = Params::new(r(5, 2), r(7, 2)).unwrap();
        let v = isotonic_potential(&p);
        for series in Series::ALL {
            for n in 0..=6 {
                let s = seed(series, n, &p).unwrap();
                assert!(riccati_residual(&s.field, &v, &s.energy).is_zero(), "{series} n={n}");
            }
        }
    }

    #[test]
    fn same_seed_and_target_rejected() {
        let p = params(2, 2);
        let w = level(1, &p).unwrap();
        assert!(matches!(dbt_apply(&w, &w), Err(Error::EqualEnergies(_))));
        let mut shifted = w.clone();
        shifted.energy = &shifted.energy + Rat::one();
        assert_eq!(dbt_apply(&w, &shifted), Err(Error::IdenticalFields));
    }

    #[test]
    fn ground_seed_reproduces_shape_invariance() {
        // w_k^(0)(a) = w_{k-1}(a+1)
        let p = Params::new(r(3, 2), r(9, 4)).unwrap();
        let w0 = level(0, &p).unwrap();
        for k in 1..=5 {
            let t = dbt_apply(&w0, &level(k, &p).unwrap()).unwrap();
            assert_eq!(t.field, level(k - 1, &p.shift_a(1)).unwrap().field);
        }
    }

    #[test]
    fn l1_first_transform_solves_extended_equation() {
        let p = params(2, 2);
        let ep = extend(Series::L1, 1, &p).unwrap();
        let t = ep.transformed_rs(0).unwrap();
        assert!(riccati_residual(&t.field, &ep.field, &t.energy).is_zero());
    }

    #[test]
    fn transformations_invert() {
        let p = Params::new(r(2, 1), r(7, 3)).unwrap();
        for n in 0..=3 {
            for k in 0..=3 {
                let s = seed(Series::L1, n, &p).unwrap();
                let t = level(k, &p).unwrap();
                let img = dbt_apply(&s, &t).unwrap();
                let back_seed = RsFunction {
                    field: s.field.neg(),
                    energy: s.energy.clone(),
                };
                assert_eq!(dbt_apply(&back_seed, &img).unwrap(), t);
            }
        }
    }

    #[test]
    fn transformed_wave_matches_transformed_rs() {
        let p = params(2, 3);
        for series in [Series::L1, Series::L2, Series::L3] {
            let ep = extend(series, 2, &p).unwrap();
            for k in 0..=3 {
                let w = transformed_wave(series, 2, k, &p).unwrap();
                assert_eq!(w.wave.rs_function(), ep.transformed_rs(k).unwrap().field, "{series} k={k}");
                assert_eq!(w.energy_gap, &w.wave.energy - &ep.seed_energy);
            }
        }
    }

    #[test]
    fn l1_base_case_is_ground_state_of_shifted_oscillator() {
        let p = params(2, 2);
        let w = transformed_wave(Series::L1, 0, 0, &p).unwrap().wave;
        assert_eq!(w.xpow, &p.a + Rat::one());
        assert_eq!(w.gauss_sign, -1);
        assert!(w.rat.as_constant().is_some());
    }

    #[test]
    fn extra_states() {
        let p = Params::new(r(2, 1), r(7, 2)).unwrap();
        let l3 = extra_state(Series::L3, 2, &p).unwrap();
        assert_eq!(l3.energy, Rat::from_int(-12));
        assert_eq!(l3.gauss_sign, -1);
        assert!(l3.is_square_integrable().unwrap());
        let ep = extend(Series::L3, 2, &p).unwrap();
        assert_eq!(l3.rs_function(), ep.extra_rs().unwrap().field);
        for series in [Series::L0, Series::L1, Series::L2] {
            assert!(!extra_state(series, 2, &p).unwrap().is_square_integrable().unwrap(), "{series}");
        }
    }

    #[test]
    fn regularity_examples() {
        let l0 = extend(Series::L0, 3, &params(2, 2)).unwrap();
        let rep = regularity(&l0).unwrap();
        assert_eq!(rep.pole_count_positive_axis, 3);
        assert!(!rep.regular);
        let l1 = extend(Series::L1, 4, &Params::new(r(2, 1), r(7, 2)).unwrap()).unwrap();
        assert!(regularity(&l1).unwrap().regular);
        let l3_odd = extend(Series::L3, 3, &params(2, 4)).unwrap();
        assert!(regularity(&l3_odd).unwrap().pole_count_positive_axis >= 1);
    }

    #[test]
    fn coincidences() {
        let p = params(2, 3);
        assert!(coincidence_check(Coincidence::P1Q1, &p).unwrap());
        assert!(coincidence_check(Coincidence::T1R1, &p).unwrap());
    }

    #[test]
    fn first_l1_extension_closed_form() {
        // V(a+1) + 4 omega/(omega x^2 + 2a + 1) - 8 omega (2a+1)/(omega x^2 + 2a + 1)^2
        let p = Params::new(r(5, 2), r(7, 3)).unwrap();
        let om = &p.omega;
        let c = &p.a * Rat::from_int(2) + Rat::one();
        // omega x^2 + c = 2 xi + c
        let q = Poly::new(vec![c.clone(), Rat::from_int(2)]);
        let t1 = RatFunc::new(Poly::constant(om * Rat::from_int(4)), q.clone()).unwrap();
        let t2 = RatFunc::new(Poly::constant(-(om * &c * Rat::from_int(8))), &q * &q).unwrap();
        let expect = isotonic_potential(&p.shift_a(1)).add(&EvenField::new(om, &t1 + &t2));
        assert_eq!(extend(Series::L1, 1, &p).unwrap().field, expect);
    }

    #[test]
    fn json_round_trip() {
        let ep = extend(Series::L2, 2, &Params::new(r(2, 1), r(9, 2)).unwrap()).unwrap();
        let s = serde_json::to_string(&ep).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["series"], "L2");
        assert_eq!(v["a"], "9/2");
        assert_eq!(v["field"]["parity"], "even");
        let back: ExtendedPotential = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ep);
    }
}
