mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sepinv::catalog::{myeg_bundle, myeg_generators, verify_myeg};
use sepinv::field::{Field, GaloisField, Gf};
use sepinv::matrix::Matrix;
use sepinv::scheme::build_scheme_graph;
use sepinv::verify::{verify_separating, CandidateSet, VerifyOptions};

/// `I + (s + t z) E21 + t E41 + r E43`.
fn parametrized(f: &GaloisField, s: u64, t: u64, r: u64) -> Matrix<GaloisField> {
    let z = f.generator().unwrap();
    let (s, t, r) = (
        f.from_i64(s as i64),
        f.from_i64(t as i64),
        f.from_i64(r as i64),
    );
    let mut m = Matrix::identity(f.clone(), 4);
    m.set(1, 0, f.add(&s, &f.mul(&t, &z)));
    m.set(3, 0, t);
    m.set(3, 2, r);
    m
}

/// Rows 2 and 4 of `M - I` are `(s + tz, 0, 0, 0)` and `(t, 0, r, 0)`.
fn is_reflection_param(s: u64, t: u64, r: u64) -> bool {
    let row2 = s != 0 || t != 0;
    let row4 = t != 0 || r != 0;
    match (row2, row4) {
        (true, false) | (false, true) => true,
        (true, true) => r == 0,
        (false, false) => false,
    }
}

fn check_parameter_oracle(p: u64) {
    let b = myeg_bundle(p).unwrap();
    assert_eq!(b.group.order() as u64, p * p * p);
    let mut reflections = 0;
    for s in 0..p {
        for t in 0..p {
            for r in 0..p {
                let m = parametrized(&b.field, s, t, r);
                let idx = b
                    .group
                    .index_of(&m)
                    .expect("parametrized element is in the group");
                let c = &b.group.classifications()[idx];
                assert_eq!(
                    c.is_reflection,
                    is_reflection_param(s, t, r),
                    "({s},{t},{r})"
                );
                reflections += is_reflection_param(s, t, r) as usize;
            }
        }
    }
    assert_eq!(reflections as u64, p * p + p - 2);
    let class = b.group.generated_by_class(1);
    assert_eq!(class.class.len(), reflections);
    assert!(class.verdict);
}

#[test]
fn p2_matches_parameter_triples() {
    check_parameter_oracle(2);
}

#[test]
fn p3_matches_parameter_triples() {
    check_parameter_oracle(3);
}

#[test]
fn p2_scheme_graph() {
    let b = myeg_bundle(2).unwrap();
    let sg = build_scheme_graph(&b.group);
    let gens = myeg_generators(&b.field);
    let e43 = b.group.index_of(&gens[0]).unwrap();
    assert_eq!(sg.weight(0, e43), 3);
    let json: serde_json::Value = serde_json::from_str(&sg.to_json()).unwrap();
    assert_eq!(json["vertices"].as_array().unwrap().len(), 8);
    assert_eq!(json["edges"].as_array().unwrap().len(), 28);
    assert!(sg.connectivity_at_codim(1).connected);
}

/// Invariance and the relation, checked by evaluation at random points.
#[test]
fn identities_by_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for p in [2u64, 3] {
        let b = myeg_bundle(p).unwrap();
        let f = &b.field;
        for _ in 0..200 {
            let u = common::random_point(&mut rng, f, 4);
            for g in myeg_generators(f) {
                let gu = g.apply(&u);
                for inv in b.invariants() {
                    assert_eq!(inv.evaluate(&u).unwrap(), inv.evaluate(&gu).unwrap());
                }
            }
            let [x1, _, x2, _] = [u[0], u[1], u[2], u[3]];
            let ev = |q: &sepinv::MultiPoly<GaloisField>| q.evaluate(&u).unwrap();
            let (m1, m2, h) = (ev(&b.m1), ev(&b.m2), ev(&b.h));
            let d = f.sub(&f.pow(&x1, p - 1), &f.pow(&x2, p - 1));
            let terms = [
                f.pow(&h, p),
                f.neg(&f.mul(&f.pow(&d, p), &m1)),
                f.mul(&f.pow(&x1, p * p - p), &m2),
                f.neg(&f.mul(&f.pow(&f.mul(&f.pow(&x1, p), &d), p - 1), &h)),
            ];
            let total = terms.iter().fold(f.zero(), |acc, t| f.add(&acc, t));
            assert_eq!(total, Gf(0));
        }
        assert!(b.relation.is_zero());
    }
}

#[test]
fn truncated_set_is_refuted() {
    let b = myeg_bundle(2).unwrap();
    let set = CandidateSet::new(&b.group, b.separating[..3].to_vec()).unwrap();
    let v = verify_separating(&b.group, &set, &VerifyOptions::default()).unwrap();
    let c = v.counterexample().expect("refuted");
    assert!(c.recheck(&b.group, &set).unwrap());
    assert!(!b
        .group
        .lift(&sepinv::field::extension(&b.field, c.ext).unwrap())
        .unwrap()
        .same_orbit(&c.u, &c.v));
}

#[test]
fn p3_full_report() {
    let opts = VerifyOptions {
        max_ext: 1,
        ..Default::default()
    };
    let r = verify_myeg(3, &opts).unwrap();
    assert_eq!(r.order, 27);
    assert_eq!(r.reflections, 10);
    assert!(r.all_pass());
}
