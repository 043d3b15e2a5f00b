mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sepinv::field::{Field, GaloisField};
use sepinv::scheme::build_scheme_graph;

fn groups(seed: u64, count: usize) -> Vec<sepinv::FiniteMatrixGroup<GaloisField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f3 = GaloisField::prime(3).unwrap();
    let f4 = GaloisField::new(2, &[1, 1, 1]).unwrap();
    (0..count)
        .map(|i| {
            if i % 3 == 2 {
                common::random_group(&mut rng, &f4, 2, 2000)
            } else {
                common::random_group(&mut rng, &f3, 3, 2000)
            }
        })
        .collect()
}

#[test]
fn weights_match_rank_of_difference() {
    for g in groups(5, 12) {
        let sg = build_scheme_graph(&g);
        let n = g.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(g.order() as u64);
        for _ in 0..50 {
            let s = rng.gen_range(0..g.order());
            let t = rng.gen_range(0..g.order());
            let diff = g.elements()[s].sub(&g.elements()[t]).unwrap();
            assert_eq!(sg.weight(s, t), n - diff.rank());
        }
        for s in 0..g.order() {
            assert_eq!(sg.weight(s, s), n);
        }
    }
}

#[test]
fn symmetric_and_translation_invariant() {
    for g in groups(6, 12) {
        let sg = build_scheme_graph(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let (r, s, t) = (
                rng.gen_range(0..g.order()),
                rng.gen_range(0..g.order()),
                rng.gen_range(0..g.order()),
            );
            assert_eq!(sg.weight(s, t), sg.weight(t, s));
            assert_eq!(
                sg.weight(g.product_index(r, s), g.product_index(r, t)),
                sg.weight(s, t)
            );
            assert!(sg.weight(s, t) <= g.dim());
        }
    }
}

#[test]
fn connectivity_matches_class_generation() {
    for g in groups(7, 20) {
        let sg = build_scheme_graph(&g);
        assert!(sg.edge_count(2) >= sg.edge_count(1));
        for c in [1, 2] {
            let conn = sg.connectivity_at_codim(c);
            let gen = g.generated_by_class(c);
            assert_eq!(conn.connected, gen.verdict, "order {} codim {c}", g.order());
            // The component of the identity is the subgroup generated by the class.
            assert_eq!(conn.components[0].len(), gen.subgroup_order);
        }
    }
}

#[test]
fn dot_export_is_deterministic() {
    let f = GaloisField::prime(3).unwrap();
    let minus = sepinv::Matrix::scalar(f.clone(), 2, f.from_i64(-1));
    let g = sepinv::FiniteMatrixGroup::closure(f, 2, vec![minus], 10).unwrap();
    let a = build_scheme_graph(&g).to_dot();
    let b = build_scheme_graph(&g).to_dot();
    assert_eq!(a, b);
    assert!(a.contains("v0 -- v1 [label=\"0\", codim=2];"));
}
