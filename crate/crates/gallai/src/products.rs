//! Lexicographic products, substitution blow-ups, the exact product law for
//! subchromatic numbers, and the seeded random Gallai generator.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::coloring::{ColorSet, EdgeColoring};
use crate::error::{Error, Result};
use crate::oracle;

/// Lexicographic product coloring.
///
/// Vertex `(u, v)` maps to index `u * n2 + v`; an edge gets the first
/// factor's color when the first coordinates differ and the second factor's
/// color otherwise.
pub fn lex_product(f1: &EdgeColoring, f2: &EdgeColoring) -> Result<EdgeColoring> {
    if f1.r() != f2.r() {
        return Err(Error::PaletteMismatch {
            expected: f1.r(),
            got: f2.r(),
        });
    }
    let n2 = f2.n();
    EdgeColoring::from_fn(f1.n() * n2, f1.r(), |a, b| {
        let (u1, v1) = (a / n2, a % n2);
        let (u2, v2) = (b / n2, b % n2);
        if u1 != u2 {
            f1.color(u1, u2)
        } else {
            f2.color(v1, v2)
        }
    })
}

/// Substitution blow-up: vertex `i` of the quotient is replaced by
/// `children[i]`, edges between blocks inherit the quotient color.
///
/// If the quotient uses at most two colors and every child is Gallai, the
/// output is Gallai.
pub fn substitute(quotient: &EdgeColoring, children: &[EdgeColoring]) -> Result<EdgeColoring> {
    if children.len() != quotient.n() {
        return Err(Error::invalid(format!(
            "arity mismatch: quotient has {} vertices, got {} children",
            quotient.n(),
            children.len()
        )));
    }
    for c in children {
        if c.r() != quotient.r() {
            return Err(Error::PaletteMismatch {
                expected: quotient.r(),
                got: c.r(),
            });
        }
    }
    let mut offsets = Vec::with_capacity(children.len() + 1);
    let mut total = 0usize;
    for c in children {
        offsets.push(total);
        total += c.n();
    }
    offsets.push(total);
    let block_of = |v: usize| -> usize {
        // offsets is sorted; children counts are >= 1
        match offsets.binary_search(&v) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    };
    EdgeColoring::from_fn(total, quotient.r(), |a, b| {
        let (i, j) = (block_of(a), block_of(b));
        if i != j {
            quotient.color(i, j)
        } else {
            children[i].color(a - offsets[i], b - offsets[i])
        }
    })
}

/// A build plan for product/substitution colorings.
#[derive(Clone, Debug)]
pub enum ProductTree {
    Leaf(EdgeColoring),
    Prod(Box<ProductTree>, Box<ProductTree>),
    Sub {
        quotient: EdgeColoring,
        children: Vec<ProductTree>,
    },
}

impl ProductTree {
    pub fn flatten(&self) -> Result<EdgeColoring> {
        match self {
            ProductTree::Leaf(f) => Ok(f.clone()),
            ProductTree::Prod(a, b) => lex_product(&a.flatten()?, &b.flatten()?),
            ProductTree::Sub { quotient, children } => {
                let kids: Result<Vec<_>> = children.iter().map(|c| c.flatten()).collect();
                substitute(quotient, &kids?)
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            ProductTree::Leaf(f) => f.n(),
            ProductTree::Prod(a, b) => a.vertex_count() * b.vertex_count(),
            ProductTree::Sub { children, .. } => children.iter().map(|c| c.vertex_count()).sum(),
        }
    }

    pub fn palette(&self) -> u32 {
        match self {
            ProductTree::Leaf(f) => f.r(),
            ProductTree::Prod(a, _) => a.palette(),
            ProductTree::Sub { quotient, .. } => quotient.r(),
        }
    }
}

/// Exact `g(flatten(tree), S)` without flattening, given exact `g` values for
/// the leaves.
///
/// Binary product nodes multiply. Substitution nodes with a quotient using at
/// most two colors combine children through an exact maximum-weight clique on
/// the quotient's `S`-agreement graph; substitution nodes with more quotient
/// colors fall back to the oracle on the flattened subtree.
pub fn g_of_product(
    tree: &ProductTree,
    s: ColorSet,
    leaf_g: &mut dyn FnMut(&EdgeColoring, ColorSet) -> Result<u64>,
) -> Result<u64> {
    match tree {
        ProductTree::Leaf(f) => leaf_g(f, s),
        ProductTree::Prod(a, b) => Ok(g_of_product(a, s, leaf_g)? * g_of_product(b, s, leaf_g)?),
        ProductTree::Sub { quotient, children } => {
            if quotient.used_colors().len() > 2 {
                // The product law is only available for the structures the
                // recursion covers; defer to the oracle.
                let flat = tree.flatten()?;
                return Ok(oracle::g_exact(&flat, s)?.size as u64);
            }
            let weights: Result<Vec<u64>> = children
                .iter()
                .map(|c| g_of_product(c, s, leaf_g))
                .collect();
            let weights = weights?;
            let t = quotient.n();
            let mut adj = vec![BitSet::new(t); t];
            for i in 0..t {
                for j in i + 1..t {
                    if s.contains(quotient.color(i, j)) {
                        adj[i].insert(j);
                        adj[j].insert(i);
                    }
                }
            }
            let (_, w) = oracle::max_weight_clique(&adj, &weights);
            Ok(w)
        }
    }
}

/// A random Gallai coloring on `n` vertices with palette `r`, deterministic
/// given the seed (ChaCha8). Built by random recursive substitution: a random
/// quotient on at most `MAX_ARITY` parts colored with a random color pair.
pub fn random_gallai(n: usize, r: u32, seed: u64) -> EdgeColoring {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_gallai_with(n, r, &mut rng)
}

/// Quotient arity cap for the random generator; kept small so the recursion
/// trees are deep.
pub const MAX_ARITY: usize = 8;

pub fn random_gallai_with(n: usize, r: u32, rng: &mut ChaCha8Rng) -> EdgeColoring {
    assert!(n >= 1 && r >= 1);
    if n == 1 {
        return EdgeColoring::k1(r);
    }
    if r == 1 {
        return EdgeColoring::monochromatic(n, 1, 1).expect("valid");
    }
    let t = rng.gen_range(2..=n.min(MAX_ARITY));
    // Uniform random composition of n into t positive parts: t-1 distinct
    // cut points among the n-1 gaps.
    let mut cuts: Vec<usize> = Vec::with_capacity(t - 1);
    while cuts.len() < t - 1 {
        let c = rng.gen_range(1..n);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(t);
    let mut prev = 0usize;
    for &c in &cuts {
        parts.push(c - prev);
        prev = c;
    }
    parts.push(n - prev);

    // Random color pair and a random quotient colored within it.
    let a = rng.gen_range(1..=r) as u8;
    let b = loop {
        let b = rng.gen_range(1..=r) as u8;
        if b != a {
            break b;
        }
    };
    let quotient = EdgeColoring::from_fn(t, r, |_, _| if rng.gen_bool(0.5) { a } else { b })
        .expect("valid quotient");
    let children: Vec<EdgeColoring> = parts
        .iter()
        .map(|&sz| random_gallai_with(sz, r, rng))
        .collect();
    substitute(&quotient, &children).expect("substitution of valid children")
}

// ---------------------------------------------------------------------------
// s-expression serialization of ProductTree
// ---------------------------------------------------------------------------
//
// Grammar:
//   tree  := (leaf <gal>) | (prod tree tree) | (sub (q <gal>) (child tree)*)
//   <gal> := n r c1 c2 ... cK   (whitespace-separated, same pair order as .gal)

pub fn tree_to_sexp(tree: &ProductTree) -> String {
    fn gal(f: &EdgeColoring) -> String {
        let mut parts = vec![f.n().to_string(), f.r().to_string()];
        parts.extend(f.flat_colors().iter().map(|c| c.to_string()));
        parts.join(" ")
    }
    match tree {
        ProductTree::Leaf(f) => format!("(leaf {})", gal(f)),
        ProductTree::Prod(a, b) => format!("(prod {} {})", tree_to_sexp(a), tree_to_sexp(b)),
        ProductTree::Sub { quotient, children } => {
            let kids: Vec<String> = children
                .iter()
                .map(|c| format!("(child {})", tree_to_sexp(c)))
                .collect();
            format!("(sub (q {}) {})", gal(quotient), kids.join(" "))
        }
    }
}

pub fn tree_from_sexp(text: &str) -> Result<ProductTree> {
    let tokens = tokenize(text)?;
    let mut pos = 0usize;
    let tree = parse_tree(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Parse("trailing tokens after tree".into()));
    }
    Ok(tree)
}

#[derive(Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(Tok::Atom(std::mem::take(&mut cur)));
                }
                out.push(if ch == '(' { Tok::Open } else { Tok::Close });
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(Tok::Atom(std::mem::take(&mut cur)));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(Tok::Atom(cur));
    }
    Ok(out)
}

fn expect_open(tokens: &[Tok], pos: &mut usize) -> Result<()> {
    match tokens.get(*pos) {
        Some(Tok::Open) => {
            *pos += 1;
            Ok(())
        }
        other => Err(Error::Parse(format!("expected '(', got {other:?}"))),
    }
}

fn expect_close(tokens: &[Tok], pos: &mut usize) -> Result<()> {
    match tokens.get(*pos) {
        Some(Tok::Close) => {
            *pos += 1;
            Ok(())
        }
        other => Err(Error::Parse(format!("expected ')', got {other:?}"))),
    }
}

fn parse_atom<'a>(tokens: &'a [Tok], pos: &mut usize) -> Result<&'a str> {
    match tokens.get(*pos) {
        Some(Tok::Atom(a)) => {
            *pos += 1;
            Ok(a)
        }
        other => Err(Error::Parse(format!("expected atom, got {other:?}"))),
    }
}

fn parse_gal_inline(tokens: &[Tok], pos: &mut usize) -> Result<EdgeColoring> {
    let n: usize = parse_atom(tokens, pos)?
        .parse()
        .map_err(|e| Error::Parse(format!("bad n: {e}")))?;
    let r: u32 = parse_atom(tokens, pos)?
        .parse()
        .map_err(|e| Error::Parse(format!("bad r: {e}")))?;
    let count = n * n.saturating_sub(1) / 2;
    let mut colors = Vec::with_capacity(count);
    for _ in 0..count {
        let c: u8 = parse_atom(tokens, pos)?
            .parse()
            .map_err(|e| Error::Parse(format!("bad color: {e}")))?;
        colors.push(c);
    }
    EdgeColoring::from_flat(n, r, colors)
}

fn parse_tree(tokens: &[Tok], pos: &mut usize) -> Result<ProductTree> {
    expect_open(tokens, pos)?;
    let head = parse_atom(tokens, pos)?.to_string();
    let tree = match head.as_str() {
        "leaf" => ProductTree::Leaf(parse_gal_inline(tokens, pos)?),
        "prod" => {
            let a = parse_tree(tokens, pos)?;
            let b = parse_tree(tokens, pos)?;
            ProductTree::Prod(Box::new(a), Box::new(b))
        }
        "sub" => {
            expect_open(tokens, pos)?;
            let q = parse_atom(tokens, pos)?;
            if q != "q" {
                return Err(Error::Parse(format!("expected 'q', got {q}")));
            }
            let quotient = parse_gal_inline(tokens, pos)?;
            expect_close(tokens, pos)?;
            let mut children = Vec::new();
            while matches!(tokens.get(*pos), Some(Tok::Open)) {
                expect_open(tokens, pos)?;
                let c = parse_atom(tokens, pos)?;
                if c != "child" {
                    return Err(Error::Parse(format!("expected 'child', got {c}")));
                }
                children.push(parse_tree(tokens, pos)?);
                expect_close(tokens, pos)?;
            }
            ProductTree::Sub { quotient, children }
        }
        other => return Err(Error::Parse(format!("unknown tree head '{other}'"))),
    };
    expect_close(tokens, pos)?;
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{check_witness, e1, Witness};

    fn k2(color: u8, r: u32) -> EdgeColoring {
        EdgeColoring::from_flat(2, r, vec![color]).unwrap()
    }

    #[test]
    fn lex_product_k2_k2() {
        let f = lex_product(&k2(1, 3), &k2(2, 3)).unwrap();
        assert_eq!(f.n(), 4);
        // blocks {0,1} and {2,3} internal color 2, cross edges color 1
        assert_eq!(f.color(0, 1), 2);
        assert_eq!(f.color(2, 3), 2);
        for (u, v) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(f.color(u, v), 1);
        }
    }

    #[test]
    fn lex_product_identity_factor() {
        let f = e1();
        let k1 = EdgeColoring::k1(3);
        assert_eq!(lex_product(&f, &k1).unwrap(), f);
        assert_eq!(lex_product(&k1, &f).unwrap(), f);
    }

    #[test]
    fn lex_product_counts_and_palette_mismatch() {
        let f = lex_product(&e1(), &k2(1, 3)).unwrap();
        assert_eq!(f.n(), 8);
        assert!(matches!(
            lex_product(&k2(1, 3), &k2(1, 2)),
            Err(Error::PaletteMismatch { .. })
        ));
    }

    #[test]
    fn substitute_builds_e1() {
        let q = k2(3, 3);
        let f = substitute(&q, &[k2(1, 3), k2(2, 3)]).unwrap();
        assert_eq!(f, e1());
    }

    #[test]
    fn substitute_identity_and_rainbow_quotient() {
        let f = e1();
        let q1 = EdgeColoring::k1(3);
        assert_eq!(substitute(&q1, &[f.clone()]).unwrap(), f);
        let rainbow = EdgeColoring::from_flat(3, 3, vec![1, 2, 3]).unwrap();
        let k1 = EdgeColoring::k1(3);
        let out = substitute(&rainbow, &[k1.clone(), k1.clone(), k1]).unwrap();
        assert_eq!(out.find_rainbow_triangle(), Some((0, 1, 2)));
    }

    #[test]
    fn substitute_arity_mismatch() {
        let q = k2(3, 3);
        assert!(substitute(&q, &[EdgeColoring::k1(3)]).is_err());
    }

    #[test]
    fn associativity_of_indexing() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(1..=4);
                EdgeColoring::from_fn(n, 3, |_, _| rng.gen_range(1..=3) as u8).unwrap()
            };
            let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            let left = lex_product(&lex_product(&a, &b).unwrap(), &c).unwrap();
            let right = lex_product(&a, &lex_product(&b, &c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn product_law_against_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n1 = rng.gen_range(1..=5);
            let n2 = rng.gen_range(1..=5);
            let f1 = EdgeColoring::from_fn(n1, 3, |_, _| rng.gen_range(1..=3) as u8).unwrap();
            let f2 = EdgeColoring::from_fn(n2, 3, |_, _| rng.gen_range(1..=3) as u8).unwrap();
            let prod = lex_product(&f1, &f2).unwrap();
            for s in 1u32..8 {
                let s = ColorSet(s);
                let lhs = oracle::g_exact(&prod, s).unwrap().size;
                let rhs =
                    oracle::g_exact(&f1, s).unwrap().size * oracle::g_exact(&f2, s).unwrap().size;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn g_of_product_binary_and_trivial() {
        let t = ProductTree::Prod(
            Box::new(ProductTree::Leaf(k2(1, 3))),
            Box::new(ProductTree::Leaf(k2(2, 3))),
        );
        // stub leaf values 5 and 7
        let mut calls = 0;
        let g = g_of_product(&t, ColorSet::pair(1, 2), &mut |_, _| {
            calls += 1;
            Ok(if calls == 1 { 5 } else { 7 })
        })
        .unwrap();
        assert_eq!(g, 35);

        // leaf identity
        let t = ProductTree::Leaf(e1());
        let g = g_of_product(&t, ColorSet::pair(1, 3), &mut |f, s| {
            Ok(oracle::g_exact(f, s).unwrap().size as u64)
        })
        .unwrap();
        assert_eq!(g, 3);
    }

    #[test]
    fn g_of_product_full_palette_is_vertex_count() {
        let t = ProductTree::Sub {
            quotient: k2(3, 3),
            children: vec![ProductTree::Leaf(k2(1, 3)), ProductTree::Leaf(e1())],
        };
        let s = ColorSet::full(3);
        let g = g_of_product(&t, s, &mut |f, s| {
            Ok(oracle::g_exact(f, s).unwrap().size as u64)
        })
        .unwrap();
        assert_eq!(g, t.vertex_count() as u64);
    }

    #[test]
    fn g_of_product_substitution_matches_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let t = rng.gen_range(2..=3);
            let quotient =
                EdgeColoring::from_fn(t, 3, |_, _| if rng.gen_bool(0.5) { 1 } else { 3 }).unwrap();
            let children: Vec<ProductTree> = (0..t)
                .map(|_| {
                    let n = rng.gen_range(1..=4);
                    ProductTree::Leaf(
                        EdgeColoring::from_fn(n, 3, |_, _| rng.gen_range(1..=3) as u8).unwrap(),
                    )
                })
                .collect();
            let tree = ProductTree::Sub { quotient, children };
            let flat = tree.flatten().unwrap();
            for sm in 1u32..8 {
                let s = ColorSet(sm);
                let via_tree = g_of_product(&tree, s, &mut |f, s| {
                    Ok(oracle::g_exact(f, s).unwrap().size as u64)
                })
                .unwrap();
                let direct = oracle::g_exact(&flat, s).unwrap().size as u64;
                assert_eq!(via_tree, direct);
            }
        }
    }

    #[test]
    fn random_gallai_edges() {
        assert_eq!(random_gallai(1, 4, 0).n(), 1);
        let mono = random_gallai(9, 1, 1);
        assert_eq!(mono.used_colors(), ColorSet::single(1));
        // determinism
        assert_eq!(random_gallai(30, 4, 42), random_gallai(30, 4, 42));
        assert_ne!(random_gallai(30, 4, 42), random_gallai(30, 4, 43));
    }

    #[test]
    fn random_gallai_has_no_rainbow() {
        for seed in 0..1000 {
            let f = random_gallai(50, 4, seed);
            assert_eq!(f.find_rainbow_triangle(), None, "seed {seed}");
        }
    }

    #[test]
    fn products_of_two_colorings_are_gallai() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..15 {
            let mut acc = EdgeColoring::k1(4);
            for _ in 0..3 {
                let n = rng.gen_range(2..=4);
                let a = rng.gen_range(1..=4) as u8;
                let b = (a % 4) + 1;
                let f = EdgeColoring::from_fn(n, 4, |_, _| if rng.gen_bool(0.5) { a } else { b })
                    .unwrap();
                acc = lex_product(&acc, &f).unwrap();
            }
            assert_eq!(acc.find_rainbow_triangle(), None);
        }
    }

    #[test]
    fn sexp_roundtrip() {
        let tree = ProductTree::Sub {
            quotient: k2(3, 3),
            children: vec![ProductTree::Leaf(k2(1, 3)), ProductTree::Leaf(k2(2, 3))],
        };
        let text = tree_to_sexp(&tree);
        assert_eq!(text, "(sub (q 2 3 3) (child (leaf 2 3 1)) (child (leaf 2 3 2)))");
        let parsed = tree_from_sexp(&text).unwrap();
        assert_eq!(parsed.flatten().unwrap(), e1());
        let prod = ProductTree::Prod(
            Box::new(ProductTree::Leaf(k2(1, 2))),
            Box::new(ProductTree::Leaf(k2(2, 2))),
        );
        let t2 = tree_from_sexp(&tree_to_sexp(&prod)).unwrap();
        assert_eq!(t2.flatten().unwrap(), prod.flatten().unwrap());
    }

    #[test]
    fn product_witnesses_check() {
        let f = lex_product(&k2(1, 3), &k2(2, 3)).unwrap();
        let w = Witness::new(vec![0, 1, 2, 3], ColorSet::pair(1, 2));
        assert!(check_witness(&f, &w).unwrap());
    }
}
