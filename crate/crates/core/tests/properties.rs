use proptest::prelude::*;
use tbconc::lattice::Point;
use tbconc::{
    assemble_hamiltonian, build_betts, build_kagome, build_ring, build_square, build_triangular,
    concurrence, correlators, evaluate, ground_state_density_matrix, load_lattice, Hoppings,
    Lattice,
};

fn small_lattice() -> impl Strategy<Value = Lattice> {
    prop_oneof![
        (3usize..=14).prop_map(|n| build_ring(n).unwrap()),
        (2usize..=4, 2usize..=4).prop_map(|(x, y)| build_square(x, y, true).unwrap()),
        (2usize..=4, 2usize..=4).prop_map(|(x, y)| build_square(x, y, false).unwrap()),
        Just(build_kagome(2, 2).unwrap()),
        Just(build_triangular(3, 4).unwrap()),
    ]
}

fn bipartite_lattice() -> impl Strategy<Value = Lattice> {
    prop_oneof![
        (2usize..=10).prop_map(|m| build_ring(2 * m).unwrap()),
        (1usize..=3, 1usize..=3).prop_map(|(x, y)| build_square(2 * x, 2 * y, true).unwrap()),
        (2usize..=5, 2usize..=5).prop_map(|(x, y)| build_square(x, y, false).unwrap()),
    ]
}

/// Lattice, hoppings in [-5, 0] and a filling.
fn instance(
    lattices: impl Strategy<Value = Lattice>,
) -> impl Strategy<Value = (Lattice, Hoppings, usize)> {
    lattices.prop_flat_map(|lattice| {
        let edges = lattice.n_edges();
        let sites = lattice.n_sites();
        (
            Just(lattice),
            prop::collection::vec(-5.0f64..=0.0, edges).prop_map(|t| Hoppings::new(t).unwrap()),
            0..=sites,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn density_matrix_is_a_projector((lattice, t, n) in instance(small_lattice())) {
        let h = assemble_hamiltonian(&lattice, &t).unwrap();
        let dm = ground_state_density_matrix(&h, n).unwrap();
        prop_assert!((dm.trace() - n as f64).abs() < 1e-10);
        let g = &dm.gamma;
        prop_assert!((g * g - g).amax() < 1e-10);
        prop_assert!((g - g.transpose()).amax() < 1e-14);
        for i in 0..lattice.n_sites() {
            prop_assert!(g[(i, i)] > -1e-12 && g[(i, i)] < 1.0 + 1e-12);
        }
    }

    #[test]
    fn concurrence_symmetric_and_bounded((lattice, t, n) in instance(small_lattice())) {
        let h = assemble_hamiltonian(&lattice, &t).unwrap();
        let dm = ground_state_density_matrix(&h, n).unwrap();
        for i in 0..lattice.n_sites() {
            for j in 0..i {
                let cij = concurrence(&dm, i, j).unwrap();
                let cji = concurrence(&dm, j, i).unwrap();
                prop_assert!((0.0..=1.0).contains(&cij));
                prop_assert!((cij - cji).abs() < 1e-14);
                let c = correlators(&dm, i, j).unwrap();
                prop_assert!(c.v >= 0.0 && c.y >= 0.0);
            }
        }
    }

    #[test]
    fn gauge_flip_preserves_concurrence(
        (lattice, t, n) in instance(small_lattice()),
        mask in prop::collection::vec(any::<bool>(), 48),
    ) {
        // c_i -> -c_i on masked sites flips every bond with one masked end
        let flipped = Hoppings::new(
            lattice
                .edges()
                .iter()
                .zip(t.as_slice())
                .map(|(&(i, j), &x)| if mask[i] != mask[j] { -x } else { x })
                .collect(),
        )
        .unwrap();
        let a = evaluate(&lattice, &t, n).unwrap();
        let b = evaluate(&lattice, &flipped, n).unwrap();
        prop_assume!(!a.degenerate);
        for (x, y) in a.per_bond.iter().zip(&b.per_bond) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn overall_scale_is_irrelevant((lattice, t, n) in instance(small_lattice()), s in 0.1f64..10.0) {
        let a = evaluate(&lattice, &t, n).unwrap();
        prop_assume!(!a.degenerate);
        let b = evaluate(&lattice, &t.scaled(s), n).unwrap();
        prop_assert!((a.c_nn - b.c_nn).abs() < 1e-10);
    }

    #[test]
    fn particle_hole_symmetry_on_bipartite((lattice, t, n) in instance(bipartite_lattice())) {
        let m = lattice.n_sites() - n;
        let a = evaluate(&lattice, &t, n).unwrap();
        let b = evaluate(&lattice, &t, m).unwrap();
        prop_assume!(!a.degenerate);
        prop_assert!((a.c_nn - b.c_nn).abs() < 1e-10, "{} vs {}", a.c_nn, b.c_nn);
    }

    #[test]
    fn lattice_document_roundtrip(
        n in 1usize..12,
        raw in prop::collection::vec((0usize..12, 0usize..12), 0..30),
        with_coords in any::<bool>(),
    ) {
        let mut seen = std::collections::HashSet::new();
        let edges: Vec<(usize, usize)> = raw
            .into_iter()
            .map(|(i, j)| (i % n, j % n))
            .filter(|&(i, j)| i != j && seen.insert((i.min(j), i.max(j))))
            .collect();
        let coords: Option<Vec<Point>> =
            with_coords.then(|| (0..n).map(|k| [k as f64 * 0.1, 1.0 / (k + 1) as f64]).collect());
        let lattice = Lattice::new("custom", n, edges, coords).unwrap();
        prop_assert_eq!(load_lattice(&lattice.to_json()).unwrap(), lattice);
    }
}

#[test]
fn uniform_bipartite_sweeps_are_symmetric() {
    let lattices = [
        build_ring(16).unwrap(),
        build_ring(18).unwrap(),
        build_square(4, 4, true).unwrap(),
        build_square(6, 4, true).unwrap(),
        build_square(3, 4, false).unwrap(),
    ];
    for lattice in &lattices {
        let n_sites = lattice.n_sites();
        let t = Hoppings::uniform(lattice.n_edges(), -1.0);
        let c: Vec<f64> = (0..=n_sites)
            .map(|n| evaluate(lattice, &t, n).unwrap().c_nn)
            .collect();
        for n in 0..=n_sites {
            assert!(
                (c[n] - c[n_sites - n]).abs() < 1e-10,
                "{} n={n}: {} vs {}",
                lattice.name(),
                c[n],
                c[n_sites - n]
            );
        }
    }
}

#[test]
fn frustrated_lattices_are_asymmetric() {
    for lattice in [build_kagome(4, 4).unwrap(), build_betts(4, 2).unwrap()] {
        let n_sites = lattice.n_sites();
        let t = Hoppings::uniform(lattice.n_edges(), -1.0);
        let c: Vec<f64> = (0..=n_sites)
            .map(|n| evaluate(&lattice, &t, n).unwrap().c_nn)
            .collect();
        let asym = (0..=n_sites)
            .map(|n| (c[n] - c[n_sites - n]).abs())
            .fold(0.0, f64::max);
        assert!(asym > 1e-2, "{}: {asym}", lattice.name());
    }
}

#[test]
fn kagome_ordered_curve_peaks_near_one_third() {
    let lattice = build_kagome(4, 4).unwrap();
    let t = Hoppings::uniform(lattice.n_edges(), -1.0);
    let c: Vec<f64> = (0..=48)
        .map(|n| evaluate(&lattice, &t, n).unwrap().c_nn)
        .collect();
    let argmax = (0..=48).max_by(|&a, &b| c[a].total_cmp(&c[b])).unwrap();
    let x = argmax as f64 / 48.0;
    assert!((x - 1.0 / 3.0).abs() < 0.1, "peak at x = {x}");
}
