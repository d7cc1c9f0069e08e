use proptest::prelude::*;

use crate::exact::{Poly, Rat, RatFunc};
use crate::field::Params;

pub fn rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| Rat::new(p, q))
}

pub fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rat(), 0..=max_len).prop_map(Poly::new)
}

pub fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    poly(max_len).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(4), nonzero_poly(4)).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

/// `omega > 0` and `a` in `(1, 6)` away from the half-integers that make some
/// Laguerre parameters degenerate.
pub fn params() -> impl Strategy<Value = Params> {
    (1i64..=6, 1i64..=3, 4i64..=29, prop::sample::select(vec![3i64, 5, 7]))
        .prop_map(|(wp, wq, ap, aq)| (Rat::new(wp, wq), Rat::new(ap.max(aq + 1), aq)))
        .prop_filter("a in (1, 6)", |(_, a)| *a > Rat::from_int(1) && *a < Rat::from_int(6))
        .prop_map(|(w, a)| Params::new(w, a).unwrap())
}
