use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hirota_core::scatter::{reflection_coefficient, s11_at, uniform_grid};
use hirota_core::simulate::Simulation;
use hirota_core::soliton::{solve_reflectionless, TriangleSplit};
use hirota_core::{AsymptoticSolver, Complex64, DiscreteSpectrum, FieldState, InitialProfile, Params, Pole, SimConfig};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gaussian(points: usize) -> InitialProfile {
    InitialProfile::from_fn(-30.0, 30.0, points, |x| c(0.3 * (-(x / 2.0).powi(2)).exp(), 0.0)).unwrap()
}

fn scattering(cr: &mut Criterion) {
    let profile = gaussian(4096);
    cr.bench_function("s11 off axis, M=4096", |b| {
        b.iter(|| s11_at(&profile, black_box(c(0.2, 0.4))).unwrap())
    });
    let zs = uniform_grid(-4.0, 4.0, 101);
    cr.bench_function("reflection sweep, 101 points", |b| {
        b.iter(|| reflection_coefficient(&profile, &zs).unwrap())
    });
}

fn solitons(cr: &mut Criterion) {
    let p = Params::new(1.0, 0.5).unwrap();
    let poles = [
        (c(0.5, 0.5), c(1.0, 0.0)),
        (c(-0.3, 0.4), c(1.0, 0.0)),
        (c(0.1, 0.8), c(0.0, 2.0)),
    ];
    let s = DiscreteSpectrum::new(poles.iter().map(|&(z, c)| Pole { z, c }).collect()).unwrap();
    let split = TriangleSplit::balanced(&s, 1.0, 2.0, &p);
    cr.bench_function("three-soliton solve", |b| {
        b.iter(|| solve_reflectionless(&s, &split, black_box(1.0), 2.0, &p).unwrap())
    });
}

fn integrator(cr: &mut Criterion) {
    let p = Params::new(1.0, 1.0).unwrap();
    let cfg = SimConfig::new(200.0, 4096, 0.01, 1.0).unwrap();
    let q0 = FieldState::from_fn(200.0, 4096, 0.0, |x| c(0.3 * (-(x / 2.0).powi(2)).exp(), 0.0)).unwrap();
    cr.bench_function("100 integrator steps, 4096 modes", |b| {
        b.iter(|| {
            let mut sim = Simulation::new(&q0, &cfg, &p).unwrap();
            sim.advance_to(1.0).unwrap();
            sim.time()
        })
    });
}

fn asymptotics(cr: &mut Criterion) {
    let p = Params::new(1.0, 1.0).unwrap();
    let gamma = reflection_coefficient(&gaussian(4097), &uniform_grid(-4.0, 4.0, 801)).unwrap();
    let empty = DiscreteSpectrum::empty();
    let solver = AsymptoticSolver::new(p, &gamma, &empty);
    cr.bench_function("asymptotic frame", |b| {
        b.iter(|| solver.frame(black_box(-100.0), 100.0).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = scattering, solitons, integrator, asymptotics
}
criterion_main!(benches);
