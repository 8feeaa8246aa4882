use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use tbconc::ssh::ssh_sweep;
use tbconc::{
    assemble_hamiltonian, build_betts, build_kagome, build_ring, build_square, evaluate,
    ground_state_density_matrix, Hoppings, Lattice,
};

fn lattices() -> Vec<(Lattice, usize)> {
    vec![
        (build_ring(16).unwrap(), 8),
        (build_square(6, 6, true).unwrap(), 9),
        (build_kagome(4, 4).unwrap(), 16),
        (build_betts(4, 2).unwrap(), 16),
    ]
}

fn fitness(c: &mut Criterion) {
    let mut group = c.benchmark_group("c_nn");
    for (lattice, n) in lattices() {
        let t = Hoppings::new(
            (0..lattice.n_edges())
                .map(|k| -5.0 * ((k * 7919) % 97) as f64 / 96.0)
                .collect(),
        )
        .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(lattice.name()), &n, |b, &n| {
            b.iter(|| {
                evaluate(black_box(&lattice), black_box(&t), n)
                    .unwrap()
                    .c_nn
            })
        });
    }
    group.finish();
}

fn density_matrix(c: &mut Criterion) {
    let ring = build_ring(400).unwrap();
    let h = assemble_hamiltonian(&ring, &Hoppings::uniform(400, -1.0)).unwrap();
    c.bench_function("density_matrix/ring-400", |b| {
        b.iter(|| ground_state_density_matrix(black_box(&h), 199).unwrap())
    });
}

fn ssh(c: &mut Criterion) {
    let alphas: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    c.bench_function("ssh_sweep/21x4096", |b| {
        b.iter(|| ssh_sweep(black_box(&alphas), 4096, 1e-4).unwrap())
    });
}

criterion_group!(benches, fitness, density_matrix, ssh);
criterion_main!(benches);
