//! Randomised and exhaustive invariants.

use std::sync::OnceLock;

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::sample::Index;

use cartan_core::classify::{classify_connected, enumerate_connected, minor_sequence, node_reduce, sylvester_pd, NodeCase};
use cartan_core::diagram::{parse_diagram, print_diagram, ParsedDiagram};
use cartan_core::roots::{generate_roots, generate_roots_gram, simple_reflection, Guard};
use cartan_core::{CartanMatrix, CoxeterDiagram, DynkinDiagram, Qf, Rational, RootVector, Sign};

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=24).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn qf() -> impl Strategy<Value = Qf> {
    (rational(), rational(), rational(), rational()).prop_map(|(a, b, c, d)| Qf::new(a, b, c, d))
}

/// Random labelled tree: vertex `i > 0` hangs off an earlier vertex.
fn tree(max: usize) -> impl Strategy<Value = CoxeterDiagram> {
    (1..=max)
        .prop_flat_map(|l| (prop::collection::vec(any::<Index>(), l - 1), prop::collection::vec(1u8..=3, l - 1)))
        .prop_map(|(parents, mults)| {
            let l = parents.len() + 1;
            let edges = parents.iter().zip(&mults).enumerate().map(|(i, (p, &m))| (p.index(i + 1), i + 1, m));
            CoxeterDiagram::new(l, edges.collect::<Vec<_>>()).unwrap()
        })
}

/// Random tree with one direction per multiple line.
fn oriented_tree(max: usize) -> impl Strategy<Value = (CoxeterDiagram, Vec<(usize, usize)>)> {
    tree(max).prop_flat_map(|d| {
        let n = d.edges().len();
        (Just(d), prop::collection::vec(any::<bool>(), n)).prop_map(|(d, flips)| {
            let dirs = d
                .edges()
                .iter()
                .zip(flips)
                .filter(|(e, _)| e.m > 1)
                .map(|(e, f)| if f { (e.u, e.v) } else { (e.v, e.u) })
                .collect();
            (d, dirs)
        })
    })
}

fn permutation(l: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..l).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn rational_embedding_round_trips(q in rational()) {
        prop_assert_eq!(Qf::from_rational(q.clone()).to_rational(), Some(q));
    }

    #[test]
    fn squares_are_positive(x in qf()) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!((&x * &x).sign(), Sign::Positive);
    }

    #[test]
    fn division_inverts_multiplication(x in qf(), y in qf()) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!(&(&x * &y) / &y, x);
    }

    #[test]
    fn reflections_are_involutions((d, dirs) in oriented_tree(9), coeffs in prop::collection::vec(-20i64..=20, 9), i in any::<Index>()) {
        let a = d.orient(&dirs).unwrap();
        let l = a.rank();
        let i = i.index(l);
        let k = RootVector::new(coeffs[..l].to_vec());
        let once = simple_reflection(&a, i, &k).unwrap();
        prop_assert_eq!(simple_reflection(&a, i, &once).unwrap(), k);
    }

    #[test]
    fn print_parse_round_trip(d in tree(9)) {
        if let Ok(text) = print_diagram(&d) {
            let back: CoxeterDiagram = text.parse().unwrap();
            prop_assert!(back.is_isomorphic(&d).is_some(), "{} does not read back as {:?}", text, d);
        } else {
            // Only nodes with a multiple line or a degree above 3 fall outside the notation.
            prop_assert!((0..d.order()).any(|v| d.adjacency()[v].len() >= 3));
        }
    }

    #[test]
    fn chains_always_print(mults in prop::collection::vec(1u8..=3, 0..9)) {
        let d = CoxeterDiagram::chain(&mults);
        let text = print_diagram(&d).unwrap();
        prop_assert!(text.parse::<CoxeterDiagram>().unwrap().is_isomorphic(&d).is_some());
    }

    #[test]
    fn dynkin_round_trip((d, dirs) in oriented_tree(9)) {
        let a = d.orient(&dirs).unwrap();
        let expected = DynkinDiagram::new(d, &dirs).unwrap();
        prop_assert!(DynkinDiagram::of_cartan(&a).is_isomorphic(&expected).is_some());
        if let Ok(text) = cartan_core::diagram::print_dynkin(&expected) {
            match parse_diagram(&text, true).unwrap() {
                ParsedDiagram::Dynkin(back) => prop_assert!(back.is_isomorphic(&expected).is_some()),
                ParsedDiagram::Coxeter(_) => prop_assert!(false, "directed parse gave an undirected diagram"),
            }
        }
    }

    #[test]
    fn symmetrisation_is_equivariant((d, dirs) in oriented_tree(9), seed in any::<u64>()) {
        let a = d.orient(&dirs).unwrap();
        let l = a.rank();
        let mut perm: Vec<usize> = (0..l).collect();
        // Deterministic shuffle from the seed.
        let mut s = seed;
        for i in (1..l).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let b = a.symmetrise().unwrap();
        let pb = a.permuted(&perm).symmetrise().unwrap();
        prop_assert_eq!(pb.matrix(), &b.matrix().permuted(&perm));
        for i in 0..l {
            for j in 0..l {
                prop_assert_eq!(&b.matrix()[(i, j)], &b.matrix()[(j, i)]);
                if i != j {
                    prop_assert_eq!(b.multiplicity(i, j), Rational::from_integer((a.entry(i, j) * a.entry(j, i)).into()));
                }
            }
        }
        prop_assert!(b.satisfies_scaling(&a));
    }

    #[test]
    fn positive_definiteness_is_order_independent(d in tree(7), perm in permutation(7)) {
        let l = d.order();
        let order: Vec<usize> = perm.into_iter().filter(|&v| v < l).collect();
        let base = sylvester_pd(d.to_sym().matrix()).unwrap().positive_definite;
        prop_assert_eq!(sylvester_pd(d.to_sym_ordered(&order).matrix()).unwrap().positive_definite, base);
    }

    #[test]
    fn minors_match_determinants(t in prop::collection::vec(1u8..=3, 0..10)) {
        let seq = minor_sequence(&t.iter().map(|&m| Rational::from_integer(m.into())).collect::<Vec<_>>());
        let det = CoxeterDiagram::chain(&t).to_sym().into_matrix().determinant();
        prop_assert_eq!(det.to_rational(), Some(seq.last().clone()));
    }
}

fn positive_definite(d: &CoxeterDiagram) -> bool {
    d.components().iter().all(|c| classify_connected(&d.induced(c)).unwrap().is_positive_definite())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn sign_agrees_with_floats(x in qf()) {
        let f = x.to_f64();
        prop_assume!(f.abs() > 1e-6);
        let expected = if f > 0.0 { Sign::Positive } else { Sign::Negative };
        prop_assert_eq!(x.sign(), expected);
    }
}

fn census() -> &'static [CoxeterDiagram] {
    static CENSUS: OnceLock<Vec<CoxeterDiagram>> = OnceLock::new();
    CENSUS.get_or_init(|| enumerate_connected(7, true).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn subdiagram_monotonicity(pick in any::<Index>(), mask in any::<u16>()) {
        let d = &census()[pick.index(census().len())];
        let keep: Vec<usize> = (0..d.order()).filter(|&v| mask >> v & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        if !positive_definite(&d.induced(&keep)) {
            prop_assert!(!classify_connected(d).unwrap().is_positive_definite(), "{:?} over {:?}", d, keep);
        }
    }
}

#[test]
fn node_reduction_is_a_congruence() {
    // Every node diagram with l ≤ 9 in block order: the node block, then a
    // single line from the node into a tail chain of any multiplicities.
    let blocks = [
        (NodeCase::Y, vec![(0, 2, 1), (1, 2, 1)]),
        (NodeCase::E, vec![(0, 1, 1), (1, 3, 1), (2, 3, 1)]),
        (NodeCase::H, vec![(0, 2, 1), (1, 3, 1), (2, 4, 1), (3, 4, 1)]),
    ];
    let mut checked = 0;
    for (case, block) in &blocks {
        let k = case.block_size();
        let node = k - 1;
        for tail in 1..=(9 - k) {
            for code in 0..3usize.pow(tail as u32 - 1) {
                let mut edges = block.clone();
                edges.push((node, k, 1));
                let mut c = code;
                for i in 0..tail - 1 {
                    edges.push((k + i, k + i + 1, (c % 3) as u8 + 1));
                    c /= 3;
                }
                let d = CoxeterDiagram::new(k + tail, edges).unwrap();
                let b = d.to_sym();
                let reduced = node_reduce(&b, *case).unwrap();
                assert_eq!(
                    sylvester_pd(b.matrix()).unwrap().positive_definite,
                    sylvester_pd(&reduced).unwrap().positive_definite,
                    "{case:?} {d:?}"
                );
                assert_eq!(b.matrix().determinant(), reduced.determinant());
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 364 + 121 + 40);
}

#[test]
fn a_series_root_counts_grow() {
    let mut last = 0;
    for l in 1..=6 {
        let a = CoxeterDiagram::chain(&vec![1; l - 1]).orient(&[]).unwrap();
        let rs = generate_roots(&a, 30).unwrap();
        assert_eq!(rs.len(), l * (l + 1));
        assert!(rs.len() > last);
        last = rs.len();
    }
}

#[test]
fn root_systems_are_symmetric() {
    for d in enumerate_connected(6, false).unwrap() {
        if !classify_connected(&d).unwrap().is_positive_definite() {
            continue;
        }
        let dirs: Vec<_> = d.edges().iter().filter(|e| e.m > 1).map(|e| (e.u, e.v)).collect();
        let a: CartanMatrix = d.orient(&dirs).unwrap();
        let rs = generate_roots(&a, 30).unwrap();
        assert_eq!(rs.len() % 2, 0);
        for r in rs.roots() {
            assert!(rs.contains(&r.neg()));
            assert!(r.is_sign_coherent());
        }
    }
}

#[test]
fn weights_are_unique_per_component() {
    // Any positive weights making c A c⁻¹ symmetric are a multiple of ours.
    let a = CartanMatrix::validate(vec![
        vec![2, -1, 0, 0, 0],
        vec![-2, 2, 0, 0, 0],
        vec![0, 0, 2, -3, 0],
        vec![0, 0, -1, 2, -1],
        vec![0, 0, 0, -1, 2],
    ])
    .unwrap();
    let w = a.symmetrise().unwrap().weights().to_vec();
    assert!(w[0].is_one() && w[2].is_one());
    for i in 0..5 {
        for j in 0..5 {
            // c²_i A_ij = c²_j A_ji characterises symmetrisability.
            let lhs = &w[i] * Rational::from_integer(a.entry(i, j).into());
            let rhs = &w[j] * Rational::from_integer(a.entry(j, i).into());
            assert_eq!(lhs, rhs);
        }
    }
    assert!(!w.iter().any(Zero::is_zero));
}

#[test]
fn closures_agree_on_every_family() {
    let mut systems = 0;
    for d in enumerate_connected(8, false).unwrap() {
        if !classify_connected(&d).unwrap().is_positive_definite() {
            continue;
        }
        let multiple: Vec<_> = d.edges().iter().filter(|e| e.m > 1).map(|e| (e.u, e.v)).collect();
        for flip in [false, true] {
            let dirs: Vec<_> = multiple.iter().map(|&(u, v)| if flip { (v, u) } else { (u, v) }).collect();
            let a = d.orient(&dirs).unwrap();
            let rs = generate_roots(&a, 30).unwrap();
            assert_eq!(generate_roots_gram(&a, Guard::default()).unwrap(), rs.roots(), "{d:?}");
            systems += 1;
        }
    }
    // A_1..A_8, B/C_2..8, D_4..8, E_6..8, F_4, G_2, each oriented both ways.
    assert_eq!(systems, 2 * (8 + 7 + 5 + 3 + 1 + 1));
}
