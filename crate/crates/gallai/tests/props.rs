//! Property tests for the core invariants.

use proptest::prelude::*;

use gallai::coloring::{self, check_witness, ColorSet, EdgeColoring, Witness};
use gallai::oracle;
use gallai::products::lex_product;

fn arb_coloring(max_n: usize, r: u32) -> impl Strategy<Value = EdgeColoring> {
    (1..=max_n).prop_flat_map(move |n| {
        let edges = n * (n - 1) / 2;
        proptest::collection::vec(1..=r as u8, edges)
            .prop_map(move |colors| EdgeColoring::from_flat(n, r, colors).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encode_decode_roundtrip(f in arb_coloring(12, 4)) {
        let text = coloring::encode(&f);
        let back = coloring::decode(&text).unwrap();
        prop_assert_eq!(&back, &f);
        // canonical text is a fixpoint
        prop_assert_eq!(coloring::encode(&back), text);
        let json = coloring::encode_json(&f);
        prop_assert_eq!(coloring::decode_json(&json).unwrap(), f);
    }

    #[test]
    fn witness_subset_monotone(
        f in arb_coloring(10, 3),
        verts in proptest::collection::btree_set(0usize..10, 0..6),
        mask in 1u32..8,
        submask in 0u32..8,
    ) {
        let verts: Vec<usize> = verts.into_iter().filter(|&v| v < f.n()).collect();
        let s = ColorSet(mask);
        let w = Witness::new(verts.clone(), s);
        if check_witness(&f, &w).unwrap() {
            // removing vertices preserves acceptance
            let half: Vec<usize> = verts.iter().copied().step_by(2).collect();
            prop_assert!(check_witness(&f, &Witness::new(half, s)).unwrap());
            // enlarging the color set preserves acceptance
            let s2 = ColorSet(mask | submask);
            prop_assert!(check_witness(&f, &Witness::new(verts, s2)).unwrap());
        }
    }

    #[test]
    fn product_law_holds(
        f1 in arb_coloring(5, 3),
        f2 in arb_coloring(5, 3),
        mask in 1u32..8,
    ) {
        let s = ColorSet(mask);
        let prod = lex_product(&f1, &f2).unwrap();
        let lhs = oracle::g_exact(&prod, s).unwrap().size;
        let rhs = oracle::g_exact(&f1, s).unwrap().size * oracle::g_exact(&f2, s).unwrap().size;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rainbow_free_iff_no_rainbow_triple(f in arb_coloring(9, 3)) {
        let detected = f.find_rainbow_triangle();
        let mut naive = None;
        'outer: for u in 0..f.n() {
            for v in u + 1..f.n() {
                for w in v + 1..f.n() {
                    let (a, b, c) = (f.color(u, v), f.color(u, w), f.color(v, w));
                    if a != b && b != c && a != c {
                        naive = Some((u, v, w));
                        break 'outer;
                    }
                }
            }
        }
        prop_assert_eq!(detected, naive);
    }
}
