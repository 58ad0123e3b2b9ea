use std::collections::BTreeSet;

use gvkit::cech::{
    betti, coboundary, is_cocycle, nontrivial_class, obstruction_class, torsor_count, BitVec, Cochain, Nerve,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixtures() -> Vec<(&'static str, Nerve)> {
    vec![
        ("simplex", Nerve::simplex(4)),
        ("circle", Nerve::circle()),
        ("rp2", Nerve::projective_plane()),
        ("cone", Nerve::cone_over_tetrahedron_boundary()),
        ("five-simplex", Nerve::simplex(5)),
        (
            "two-circles",
            Nerve::closure_of_indices(5, &[vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3], vec![3, 4], vec![2, 4]]),
        ),
        ("torus", seven_vertex_torus()),
    ]
}

/// Triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
fn seven_vertex_torus() -> Nerve {
    let tris: Vec<Vec<usize>> = (0..7)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect();
    Nerve::closure_of_indices(7, &tris)
}

fn random_cochain(rng: &mut ChaCha8Rng, nerve: &Nerve, dim: usize) -> Cochain {
    Cochain::from_fn(nerve, dim, |_| rng.gen_bool(0.5))
}

#[test]
fn coboundary_squares_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let nerves = fixtures();
    for i in 0..1000 {
        let (name, nerve) = &nerves[i % nerves.len()];
        let dim = i % 3;
        let c = random_cochain(&mut rng, nerve, dim);
        let dd = coboundary(nerve, &coboundary(nerve, &c));
        assert!(dd.is_zero(), "{name}, dim {dim}");
    }
}

#[test]
fn verdict_invariant_under_coboundary_twists() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, nerve) in fixtures() {
        let base = nontrivial_class(&nerve).unwrap_or_else(|| Cochain::zero(&nerve, 2));
        let base_class = obstruction_class(&nerve, &base).unwrap();
        let verdict = base_class.trivial;
        for _ in 0..100 {
            let tau = random_cochain(&mut rng, &nerve, 1);
            let sigma = base.add(&coboundary(&nerve, &tau));
            let oc = obstruction_class(&nerve, &sigma).unwrap();
            assert_eq!(oc.trivial, verdict, "{name}");
            if let Some(w) = oc.witness {
                assert_eq!(coboundary(&nerve, &w), sigma, "{name}");
                // τ + w₀ is another witness, so it differs from w by a 1-cocycle
                let w0 = base_class.witness.as_ref().unwrap();
                assert!(is_cocycle(&nerve, &w.add(&tau).add(w0)), "{name}");
            }
        }
    }
}

/// `|Z¹| / |B¹|` by enumerating every 1-cochain and every 0-cochain.
fn brute_force_torsor(nerve: &Nerve) -> BigUint {
    let edges = nerve.face_count(1);
    let verts = nerve.face_count(0);
    assert!(edges <= 12);
    let from_mask = |dim: usize, len: usize, mask: u32| {
        let mut b = BitVec::zeros(len);
        for i in 0..len {
            b.set(i, mask >> i & 1 == 1);
        }
        Cochain::from_bits(dim, b)
    };
    let cocycles = (0..1u32 << edges)
        .filter(|&m| is_cocycle(nerve, &from_mask(1, edges, m)))
        .count();
    let boundaries: BTreeSet<Vec<usize>> = (0..1u32 << verts)
        .map(|m| coboundary(nerve, &from_mask(0, verts, m)).support().collect())
        .collect();
    BigUint::from(cocycles / boundaries.len())
}

#[test]
fn torsor_count_matches_brute_force() {
    let mut small: Vec<(String, Nerve)> = fixtures()
        .into_iter()
        .filter(|(_, n)| n.face_count(1) <= 12)
        .map(|(s, n)| (s.to_owned(), n))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..30 {
        // random complexes on 6 vertices with at most 12 edges
        let mut faces = Vec::new();
        let mut edges = BTreeSet::new();
        while edges.len() < rng.gen_range(3..=12) {
            let a = rng.gen_range(0..6);
            let b = rng.gen_range(0..6);
            if a != b {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        for &(a, b) in &edges {
            faces.push(vec![a, b]);
        }
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    let all = [(a, b), (a, c), (b, c)].iter().all(|e| edges.contains(e));
                    if all && rng.gen_bool(0.6) {
                        faces.push(vec![a, b, c]);
                    }
                }
            }
        }
        small.push((format!("random-{i}"), Nerve::closure_of_indices(6, &faces)));
    }
    for (name, nerve) in &small {
        let count = torsor_count(nerve);
        assert_eq!(count, brute_force_torsor(nerve), "{name}");
        assert!(count.count_ones() == 1, "{name}: not a power of two");
    }
}

#[test]
fn fixture_cohomology() {
    let rp2 = Nerve::projective_plane();
    assert!(!obstruction_class(&rp2, &nontrivial_class(&rp2).unwrap()).unwrap().trivial);
    assert_eq!(torsor_count(&rp2), BigUint::from(2u32));
    assert_eq!(torsor_count(&Nerve::simplex(4)), BigUint::from(1u32));
    assert_eq!(torsor_count(&Nerve::circle()), BigUint::from(2u32));
    assert_eq!(betti(&Nerve::circle(), 2), 0);
    let torus = seven_vertex_torus();
    assert_eq!((torus.face_count(1), torus.face_count(2)), (21, 14));
    assert_eq!((betti(&torus, 0), betti(&torus, 1), betti(&torus, 2)), (1, 2, 1));
}
