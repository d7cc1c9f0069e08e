use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use isoext::dbt::{extend, Series};
use isoext::laguerre::laguerre;
use isoext::shape::shape_check;
use isoext::spectral::{default_grid, discretize, Target};
use isoext::{Params, Poly, Rat};

fn params() -> Params {
    Params::new(Rat::from_int(2), Rat::new(7, 3)).unwrap()
}

fn gcd(c: &mut Criterion) {
    let alpha = Rat::new(5, 7);
    let a = &laguerre(8, &alpha) * &laguerre(5, &Rat::new(-3, 2));
    let b = &laguerre(8, &alpha) * &laguerre(6, &Rat::new(1, 3));
    c.bench_function("poly_gcd_deg14", |bch| bch.iter(|| Poly::gcd(black_box(&a), black_box(&b)).unwrap()));
}

fn extension(c: &mut Criterion) {
    let p = params();
    let mut g = c.benchmark_group("extend");
    for series in Series::ALL {
        g.bench_function(series.to_string(), |bch| bch.iter(|| extend(series, black_box(6), &p).unwrap()));
    }
    g.finish();
}

fn shape(c: &mut Criterion) {
    let p = params();
    c.bench_function("shape_check_L1_n5", |bch| bch.iter(|| shape_check(Series::L1, black_box(5), &p).unwrap()));
}

fn eigen(c: &mut Criterion) {
    let p = params();
    let target = Target::Extended(Series::L1, 2);
    let g = default_grid(target, &p, 6);
    let t = discretize(&target.potential(&p).unwrap(), &p.a, &g).unwrap();
    c.bench_function("eigen_lowest_6_of_4000", |bch| bch.iter(|| black_box(&t).eigen_lowest(6)));
}

criterion_group!(benches, gcd, extension, shape, eigen);
criterion_main!(benches);
