use criterion::{criterion_group, criterion_main, Criterion};

use burgers_core::{apply_b, Boundary, Domain, EigenBasis, GridSpec, SpectralField};

fn bench_transforms(c: &mut Criterion) {
    let d = Domain::interval(2.0 * std::f64::consts::PI, Boundary::Periodic, false).unwrap();
    let basis = EigenBasis::build(&d, 64).unwrap();
    let grid = GridSpec::for_basis(&basis);
    let coeffs: Vec<f64> = (0..64).map(|j| 1.0 / (1.0 + j as f64)).collect();
    let field = SpectralField::from_coeffs(basis.clone(), 1, coeffs).unwrap();

    c.bench_function("to_grid_1d_m64", |b| {
        b.iter(|| grid.to_grid(&field).unwrap())
    });
    c.bench_function("from_grid_1d_m64", |b| {
        let g = grid.to_grid(&field).unwrap();
        b.iter(|| grid.from_grid(&g, &basis).unwrap())
    });
    c.bench_function("apply_b_1d_m64", |b| {
        b.iter(|| apply_b(&field, &field, 64).unwrap())
    });
}

fn bench_2d(c: &mut Criterion) {
    let d = Domain::rectangle(1.0, 1.0, Boundary::Dirichlet, false).unwrap();
    let basis = EigenBasis::build(&d, 64).unwrap();
    let coeffs: Vec<f64> = (0..128).map(|j| 1.0 / (1.0 + j as f64)).collect();
    let field = SpectralField::from_coeffs(basis.clone(), 2, coeffs).unwrap();
    c.bench_function("apply_b_2d_m64", |b| {
        b.iter(|| apply_b(&field, &field, 64).unwrap())
    });
}

criterion_group!(benches, bench_transforms, bench_2d);
criterion_main!(benches);
