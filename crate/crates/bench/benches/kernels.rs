use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qldrift_core::dynamics::{step_cap, Stepper, UNIT_RATE_COUPLING};
use qldrift_core::wavefield::Control;
use qldrift_core::{EnsembleSpec, FieldRealization, ParticleState, SigmaScheme, SpectrumConfig};

fn config(modes: usize, waves: usize) -> SpectrumConfig {
    SpectrumConfig::new(modes, waves, SigmaScheme::Ladder, EnsembleSpec::steinhaus(), 32.0, 7).unwrap()
}

fn realize(c: &mut Criterion) {
    let mut g = c.benchmark_group("realize");
    for (m, n) in [(128, 32), (256, 64)] {
        let cfg = config(m, n);
        g.bench_with_input(BenchmarkId::from_parameter(format!("M{m}_N{n}")), &cfg, |b, cfg| b.iter(|| FieldRealization::realize(black_box(cfg)).unwrap()));
    }
    g.finish();
}

fn force(c: &mut Criterion) {
    let mut g = c.benchmark_group("force");
    for (m, n) in [(128, 32), (256, 64)] {
        let field = FieldRealization::realize(&config(m, n)).unwrap();
        let mut fast = field.force_sampler();
        let mut t = 0.0;
        g.bench_function(format!("sampler_M{m}_N{n}"), |b| {
            b.iter(|| {
                t += 1e-3;
                fast.eval(black_box(t))
            })
        });
        g.bench_function(format!("direct_M{m}_N{n}"), |b| b.iter(|| field.force_coefficients(black_box(1.234))));
    }
    g.finish();
}

fn control(c: &mut Criterion) {
    let field = FieldRealization::realize(&config(128, 32)).unwrap();
    let mut sampler = field.control_sampler(Control::Aggregate);
    c.bench_function("control/sampler_M128_N32", |b| b.iter(|| sampler.eval(black_box(2.5))));
    c.bench_function("control/closed_form_M128_N32", |b| b.iter(|| field.eval_aggregate(black_box(2.5))));
}

fn integrator(c: &mut Criterion) {
    let field = FieldRealization::realize(&config(128, 32)).unwrap();
    let dt = step_cap(128);
    let mut stepper = Stepper::new(&field, UNIT_RATE_COUPLING);
    let mut states: Vec<ParticleState> = (0..8).map(|l| ParticleState::new(l as f64 * 0.785, 0.0)).collect();
    let mut t = 0.0;
    c.bench_function("integrator/step_8_particles_M128_N32", |b| {
        b.iter(|| {
            stepper.step(black_box(&mut states), t + 0.5 * dt, dt);
            t += dt;
        })
    });
}

criterion_group!(benches, realize, force, control, integrator);
criterion_main!(benches);
