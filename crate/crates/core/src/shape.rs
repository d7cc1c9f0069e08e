//! Shape invariance of the L1 and L2 towers and the L3 partner identity.
//!
//! Each `Delta` is computed twice: by brute expansion of its defining field
//! expression, and through the Laguerre form reduced by the recurrences
//! (`sum`, `three-term`, `contiguous`). The two must agree and both must equal
//! `-omega x`.

use serde::{Deserialize, Serialize};

use crate::dbt::{dbt_apply, extend, level, riccati_residual, ExtendedPotential, Series};
use crate::error::{Error, Result};
use crate::exact::{Poly, Rat, RatFunc};
use crate::field::{EvenField, FieldRecord, OddField, Params};
use crate::laguerre::{identity_residual, laguerre, LaguerreIdentity};
use crate::rsfields::{ground_rs, isotonic_potential, rs_u, rs_v, Symmetry};

/// RS function of the ground level of an extended potential: `w_0^(n)` for L0-L2
/// and `-r_n` for L3.
pub fn ground_of(ep: &ExtendedPotential) -> Result<OddField> {
    match ep.series {
        Series::L3 => Ok(ep.extra_rs()?.field),
        _ => Ok(dbt_apply(&ep.seed()?, &level(0, &ep.params)?)?.field),
    }
}

/// `V^(n) + 2 (ground RS function)'`.
pub fn susy_partner(ep: &ExtendedPotential) -> Result<EvenField> {
    let g = ground_of(ep)?;
    Ok(ep.field.add(&g.derive().scale(&Rat::from_int(2))))
}

fn minus_omega_x(p: &Params) -> OddField {
    OddField::linear(&p.omega, -p.omega.clone())
}

fn degenerate_on_equal_energy<T>(r: Result<T>, what: &str, p: &Params) -> Result<T> {
    r.map_err(|e| match e {
        Error::EqualEnergies(_) | Error::IdenticalFields | Error::ZeroField => {
            Error::Degenerate(format!("{what} at {p}: {e}"))
        }
        other => other,
    })
}

fn energy_quotient(energy: &Rat, seed: &OddField, p: &Params) -> Result<OddField> {
    seed.sub(&ground_rs(Symmetry::Identity, p)).invert_scaled(energy)
}

/// `E_{-(n+a+1/2)} / (v_n - w_0) + v_0(a) + v_n(a+1)`, expanded directly.
pub fn delta1(n: usize, p: &Params) -> Result<OddField> {
    let v = rs_v(n, p)?;
    let q = energy_quotient(&v.energy, &v.field, p)?;
    Ok(q.add(&rs_v(0, p)?.field).add(&rs_v(n, &p.shift_a(1))?.field))
}

/// `E_{n+1/2-a} / (u_n - w_0) + v_0(a) + u_n(a+1)`, expanded directly.
pub fn delta2(n: usize, p: &Params) -> Result<OddField> {
    if (&p.a - Rat::half()) == Rat::from_int(n as i64) {
        return Err(Error::Degenerate(format!(
            "u_{n} coincides with w_0 at {p}, so Delta^2 has a zero denominator"
        )));
    }
    let u = rs_u(n, p)?;
    let q = degenerate_on_equal_energy(energy_quotient(&u.energy, &u.field, p), "Delta^2", p)?;
    Ok(q.add(&rs_v(0, p)?.field).add(&rs_u(n, &p.shift_a(1))?.field))
}

/// Residuals of the recurrence instances that reduce a Laguerre form to `-omega x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResiduals {
    pub sum: Poly,
    pub recurrence: Poly,
}

impl LemmaResiduals {
    pub fn all_zero(&self) -> bool {
        self.sum.is_zero() && self.recurrence.is_zero()
    }
}

/// `Delta^1` in Laguerre form, with `alpha = a + 1/2`, `z = -xi`:
/// `-omega x B / (z L_n^(alpha))`,
/// `B = (alpha+n) L_n^(alpha-1) + z L_n^(alpha+1) - alpha L_n^(alpha)`.
///
/// `B - z L_n^(alpha)` is `(alpha+n)` times the sum identity at `alpha-1` minus the
/// three-term identity at `alpha`; that decomposition is checked exactly here.
pub fn delta1_laguerre(n: usize, p: &Params) -> Result<(OddField, LemmaResiduals)> {
    let alpha = &p.a + Rat::half();
    let ni = n as isize;
    let na = Rat::from_int(n as i64) + &alpha;
    let z = Poly::xi();
    let l = laguerre(ni, &alpha);
    let b = &(&laguerre(ni, &(&alpha - Rat::one())).scale(&na) + &(&z * &laguerre(ni, &(&alpha + Rat::one()))))
        - &l.scale(&alpha);
    let lemma = LemmaResiduals {
        sum: identity_residual(LaguerreIdentity::Sum, n, &(&alpha - Rat::one())),
        recurrence: identity_residual(LaguerreIdentity::ThreeTerm, n, &alpha),
    };
    let decomposed = &lemma.sum.scale(&na) - &lemma.recurrence;
    if &b - &(&z * &l) != decomposed {
        return Err(Error::Degenerate("Delta^1 lemma decomposition failed".into()));
    }
    // -omega x B(z) / (z L(z)) with z = -xi
    let r = RatFunc::new(b.compose_neg(), (&z * &l).compose_neg())?.scale(&-p.omega.clone());
    Ok((OddField::new(&p.omega, r), lemma))
}

/// `Delta^2` in Laguerre form, with `alpha = 1/2 - a`, `z = xi`:
/// `omega x [ (n+alpha) L_n^(alpha) / B + L_{n-1}^(alpha) / L_n^(alpha-1) ]`,
/// `B = z L_{n-1}^(alpha+1) - alpha L_n^(alpha)`.
///
/// `B + (n+alpha) L_n^(alpha-1)` is the contiguous identity at `alpha` plus `(n+alpha)`
/// times the sum identity at `alpha-1`; with both zero the bracket collapses to `-1`.
pub fn delta2_laguerre(n: usize, p: &Params) -> Result<(OddField, LemmaResiduals)> {
    let alpha = Rat::half() - &p.a;
    let ni = n as isize;
    let na = Rat::from_int(n as i64) + &alpha;
    if na.is_zero() {
        return Err(Error::Degenerate(format!("n + alpha = 0 in Delta^2 at {p}")));
    }
    let z = Poly::xi();
    let l = laguerre(ni, &alpha);
    let lm = laguerre(ni, &(&alpha - Rat::one()));
    let b = &(&z * &laguerre(ni - 1, &(&alpha + Rat::one()))) - &l.scale(&alpha);
    if b.is_zero() {
        return Err(Error::Degenerate(format!("Delta^2 denominator vanishes at {p}")));
    }
    let lemma = LemmaResiduals {
        sum: identity_residual(LaguerreIdentity::Sum, n, &(&alpha - Rat::one())),
        recurrence: identity_residual(LaguerreIdentity::Contiguous, n, &alpha),
    };
    let decomposed = &lemma.recurrence + &lemma.sum.scale(&na);
    if &b + &lm.scale(&na) != decomposed {
        return Err(Error::Degenerate("Delta^2 lemma decomposition failed".into()));
    }
    let first = RatFunc::new(l.scale(&na), b)?;
    let second = RatFunc::new(laguerre(ni - 1, &alpha), lm)?;
    Ok((OddField::new(&p.omega, (&first + &second).scale(&p.omega)), lemma))
}

/// Outcome of the two shape-invariance routes for one member of L1 or L2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub series: Series,
    pub n: usize,
    pub params: Params,
    pub delta_field: FieldRecord,
    pub delta_is_minus_omega_x: bool,
    pub laguerre_route_agrees: bool,
    pub lemma_residuals_zero: bool,
    /// `V~^(n)(a) - V^(n)(a+1) - 2 omega`
    pub partner_residual: RatFunc,
    pub partner_identity_holds: bool,
}

impl ShapeReport {
    pub fn holds(&self) -> bool {
        self.delta_is_minus_omega_x
            && self.laguerre_route_agrees
            && self.lemma_residuals_zero
            && self.partner_identity_holds
    }
}

pub fn shape_check(series: Series, n: usize, p: &Params) -> Result<ShapeReport> {
    let (delta, (lag, lemma)) = match series {
        Series::L1 => (delta1(n, p)?, delta1_laguerre(n, p)?),
        Series::L2 => (delta2(n, p)?, delta2_laguerre(n, p)?),
        _ => {
            return Err(Error::InvalidParams(format!(
                "shape invariance is defined for L1 and L2, not {series}"
            )))
        }
    };
    let ep = extend(series, n, p)?;
    let partner = degenerate_on_equal_energy(susy_partner(&ep), "SUSY partner", p)?;
    let shifted = extend(series, n, &p.shift_a(1))?;
    let residual = partner
        .sub(&shifted.field)
        .add_constant(&-(&p.omega * Rat::from_int(2)))
        .ratfunc()
        .clone();
    Ok(ShapeReport {
        series,
        n,
        params: p.clone(),
        delta_is_minus_omega_x: delta == minus_omega_x(p),
        laguerre_route_agrees: lag == delta,
        lemma_residuals_zero: lemma.all_zero(),
        delta_field: FieldRecord::odd(&delta, p, None),
        partner_identity_holds: residual.is_zero(),
        partner_residual: residual,
    })
}

/// `susy_partner(W^(n)) - V`; zero when the L3 transformation undoes itself.
pub fn l3_partner_residual(n: usize, p: &Params) -> Result<RatFunc> {
    let ep = extend(Series::L3, n, p)?;
    Ok(susy_partner(&ep)?.sub(&isotonic_potential(p)).ratfunc().clone())
}

/// The ground RS function of the extended potential solves its RS equation at the
/// right energy; used as a sanity check on [`ground_of`].
pub fn ground_residual(ep: &ExtendedPotential) -> Result<RatFunc> {
    let g = ground_of(ep)?;
    let e = match ep.series {
        Series::L3 => ep.seed_energy.clone(),
        _ => Rat::zero(),
    };
    Ok(riccati_residual(&g, &ep.field, &e))
}
