//! Gallai partitions and the three-cograph edge partition of a Gallai
//! 3-coloring, with exact cotree clique/independent-set recursions.

use serde::Serialize;

use crate::coloring::{ColorSet, EdgeColoring};
use crate::error::{Error, Result};

/// A nontrivial vertex partition whose quotient uses at most two colors and
/// whose cross pairs are each monochromatic.
#[derive(Clone, Debug, Serialize)]
pub struct GallaiPartition {
    /// Disjoint nonempty vertex sets covering the vertex range, sorted by
    /// minimum vertex.
    pub parts: Vec<Vec<usize>>,
    /// The (at most two) colors allowed on cross edges.
    pub q: ColorSet,
    /// Coloring on `parts.len()` vertices; `quotient(i, j)` is the color of
    /// every edge between `parts[i]` and `parts[j]`.
    #[serde(serialize_with = "ser_coloring")]
    pub quotient: EdgeColoring,
}

fn ser_coloring<S: serde::Serializer>(f: &EdgeColoring, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("coloring", 3)?;
    st.serialize_field("n", &f.n())?;
    st.serialize_field("r", &f.r())?;
    st.serialize_field("colors", f.flat_colors())?;
    st.end()
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Finds a Gallai partition.
///
/// For each color pair `{a, b}` in lexicographic order: take connected
/// components of the graph of edges colored outside `{a, b}`, then coarsen,
/// merging two parts whenever the edges between them are not monochromatic;
/// the first pair yielding at least two parts wins. If every pair coarsens to
/// one part, an exhaustive partition search runs for `n <= 10`, otherwise the
/// result is `None`.
///
/// For a Gallai coloring the loop always succeeds: components of the
/// non-`{a,b}` graph refine the true partition and coarsening never crosses
/// its boundaries, so at least two parts survive for the true quotient pair.
pub fn find_gallai_partition(f: &EdgeColoring) -> Result<Option<GallaiPartition>> {
    let n = f.n();
    if n < 2 {
        return Err(Error::invalid("partition requires n >= 2"));
    }
    let r = f.r();
    let pairs: Vec<ColorSet> = if r == 1 {
        vec![ColorSet::single(1)]
    } else {
        ColorSet::all_of_size(r, 2)
    };
    for q in pairs {
        if let Some(parts) = components_then_coarsen(f, q) {
            return Ok(Some(assemble(f, q, parts)));
        }
    }
    if n <= 10 {
        return Ok(exhaustive_partition_search(f));
    }
    Ok(None)
}

fn components_then_coarsen(f: &EdgeColoring, q: ColorSet) -> Option<Vec<Vec<usize>>> {
    let n = f.n();
    let mut dsu = Dsu::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if !q.contains(f.color(u, v)) {
                dsu.union(u, v);
            }
        }
    }
    let mut parts = collect_parts(&mut dsu, n);
    // Coarsen to the fixpoint where every cross pair is monochromatic.
    loop {
        if parts.len() < 2 {
            return None;
        }
        let t = parts.len();
        let mut pd = Dsu::new(t);
        let mut merged = false;
        for i in 0..t {
            for j in i + 1..t {
                if pd.find(i) == pd.find(j) {
                    continue;
                }
                if !cross_monochromatic(f, &parts[i], &parts[j]) {
                    pd.union(i, j);
                    merged = true;
                }
            }
        }
        if !merged {
            return Some(parts);
        }
        let mut grouped: Vec<Vec<usize>> = vec![Vec::new(); t];
        for (i, part) in parts.into_iter().enumerate() {
            let root = pd.find(i);
            grouped[root].extend(part);
        }
        parts = grouped.into_iter().filter(|p| !p.is_empty()).collect();
        for p in parts.iter_mut() {
            p.sort_unstable();
        }
        parts.sort_by_key(|p| p[0]);
    }
}

fn collect_parts(dsu: &mut Dsu, n: usize) -> Vec<Vec<usize>> {
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        by_root.entry(dsu.find(v)).or_default().push(v);
    }
    by_root.into_values().collect()
}

fn cross_monochromatic(f: &EdgeColoring, a: &[usize], b: &[usize]) -> bool {
    let c0 = f.color(a[0], b[0]);
    for &u in a {
        for &v in b {
            if f.color(u, v) != c0 {
                return false;
            }
        }
    }
    true
}

fn assemble(f: &EdgeColoring, q: ColorSet, mut parts: Vec<Vec<usize>>) -> GallaiPartition {
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    parts.sort_by_key(|p| p[0]);
    let quotient = EdgeColoring::from_fn(parts.len(), f.r(), |i, j| {
        f.color(parts[i][0], parts[j][0])
    })
    .expect("quotient colors are valid");
    GallaiPartition { parts, q, quotient }
}

fn exhaustive_partition_search(f: &EdgeColoring) -> Option<GallaiPartition> {
    let n = f.n();
    // Restricted growth strings enumerate set partitions canonically.
    let mut rgs = vec![0usize; n];
    loop {
        let t = rgs.iter().copied().max().unwrap() + 1;
        if t >= 2 {
            let mut parts: Vec<Vec<usize>> = vec![Vec::new(); t];
            for (v, &g) in rgs.iter().enumerate() {
                parts[g].push(v);
            }
            if let Some(q) = partition_color_set(f, &parts) {
                return Some(assemble(f, q, parts));
            }
        }
        // next RGS
        let mut i = n;
        loop {
            if i <= 1 {
                return None;
            }
            i -= 1;
            let maxp = rgs[..i].iter().copied().max().unwrap();
            if rgs[i] <= maxp {
                rgs[i] += 1;
                for x in rgs[i + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
        }
    }
}

fn partition_color_set(f: &EdgeColoring, parts: &[Vec<usize>]) -> Option<ColorSet> {
    let mut used = ColorSet::empty();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if !cross_monochromatic(f, &parts[i], &parts[j]) {
                return None;
            }
            used.insert(f.color(parts[i][0], parts[j][0]));
        }
    }
    if used.len() > 2 {
        return None;
    }
    // Widen to a pair when possible so Q is always a color pair for r >= 2.
    if used.len() < 2 {
        for c in 1..=f.r() as u8 {
            if used.len() >= 2 {
                break;
            }
            if !used.contains(c) {
                used.insert(c);
            }
        }
    }
    Some(used)
}

/// True iff the partition is nontrivial, the quotient uses only `q`, and
/// every cross pair is monochromatic matching the quotient.
pub fn validate_partition(f: &EdgeColoring, p: &GallaiPartition) -> bool {
    let n = f.n();
    let t = p.parts.len();
    if t < 2 || p.quotient.n() != t || p.q.is_empty() || p.q.len() > 2 {
        return false;
    }
    let mut seen = vec![false; n];
    for part in &p.parts {
        if part.is_empty() {
            return false;
        }
        for &v in part {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    if !seen.into_iter().all(|x| x) {
        return false;
    }
    for i in 0..t {
        for j in i + 1..t {
            let qc = p.quotient.color(i, j);
            if !p.q.contains(qc) {
                return false;
            }
            for &u in &p.parts[i] {
                for &v in &p.parts[j] {
                    if f.color(u, v) != qc {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Cotrees
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Union,
    Join,
}

/// Rooted cotree; leaves carry vertex ids, internal nodes are UNION or JOIN
/// with at least two children. Two vertices are adjacent in the realized
/// graph iff their lowest common ancestor is a JOIN.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Cotree {
    Leaf(usize),
    Node { kind: NodeKind, children: Vec<Cotree> },
}

impl Cotree {
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vertices(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_vertices(&self, out: &mut Vec<usize>) {
        match self {
            Cotree::Leaf(v) => out.push(*v),
            Cotree::Node { children, .. } => {
                for c in children {
                    c.collect_vertices(out);
                }
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Cotree::Leaf(_) => 1,
            Cotree::Node { children, .. } => children.iter().map(|c| c.vertex_count()).sum(),
        }
    }

    /// Edge list of the realized graph (test scale).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        self.collect_edges(&mut out);
        for e in out.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        out.sort_unstable();
        out
    }

    fn collect_edges(&self, out: &mut Vec<(usize, usize)>) {
        if let Cotree::Node { kind, children } = self {
            for c in children {
                c.collect_edges(out);
            }
            if *kind == NodeKind::Join {
                for i in 0..children.len() {
                    for j in i + 1..children.len() {
                        for &u in &children[i].vertices() {
                            for &v in &children[j].vertices() {
                                out.push((u, v));
                            }
                        }
                    }
                }
            }
        }
    }

    /// Restriction to a vertex subset; single-child nodes collapse.
    pub fn restrict(&self, keep: &std::collections::BTreeSet<usize>) -> Option<Cotree> {
        match self {
            Cotree::Leaf(v) => keep.contains(v).then_some(Cotree::Leaf(*v)),
            Cotree::Node { kind, children } => {
                let kids: Vec<Cotree> = children.iter().filter_map(|c| c.restrict(keep)).collect();
                match kids.len() {
                    0 => None,
                    1 => Some(kids.into_iter().next().unwrap()),
                    _ => Some(Cotree::Node {
                        kind: *kind,
                        children: kids,
                    }),
                }
            }
        }
    }
}

/// Exact maximum clique of the realized cograph: sum over JOIN children, best
/// over UNION children.
pub fn cotree_max_clique(t: &Cotree) -> Vec<usize> {
    match t {
        Cotree::Leaf(v) => vec![*v],
        Cotree::Node { kind, children } => {
            let sub: Vec<Vec<usize>> = children.iter().map(cotree_max_clique).collect();
            match kind {
                NodeKind::Join => {
                    let mut all: Vec<usize> = sub.into_iter().flatten().collect();
                    all.sort_unstable();
                    all
                }
                NodeKind::Union => sub.into_iter().max_by_key(|s| s.len()).unwrap(),
            }
        }
    }
}

/// Exact maximum independent set: best over JOIN children, sum over UNION.
pub fn cotree_max_independent(t: &Cotree) -> Vec<usize> {
    match t {
        Cotree::Leaf(v) => vec![*v],
        Cotree::Node { kind, children } => {
            let sub: Vec<Vec<usize>> = children.iter().map(cotree_max_independent).collect();
            match kind {
                NodeKind::Union => {
                    let mut all: Vec<usize> = sub.into_iter().flatten().collect();
                    all.sort_unstable();
                    all
                }
                NodeKind::Join => sub.into_iter().max_by_key(|s| s.len()).unwrap(),
            }
        }
    }
}

/// Index of a color pair among `{1,2} < {1,3} < {2,3}`.
pub fn pair_index(q: ColorSet) -> usize {
    if q == ColorSet::pair(1, 2) {
        0
    } else if q == ColorSet::pair(1, 3) {
        1
    } else {
        2
    }
}

pub const PAIRS3: [(u8, u8); 3] = [(1, 2), (1, 3), (2, 3)];

/// The three-cograph edge partition of a Gallai 3-coloring.
///
/// Built by the structural recursion: a Gallai partition's quotient pair
/// yields a JOIN of the children's cotrees for that pair, and a UNION for
/// each of the other two pairs. The three cotrees' edge sets partition the
/// edges of the complete graph, and cotree `i` only contains edges whose
/// color lies in `PAIRS3[i]`.
pub fn cograph_edge_partition(f: &EdgeColoring) -> Result<[Cotree; 3]> {
    if f.r() != 3 {
        return Err(Error::invalid("cograph edge partition requires r = 3"));
    }
    cograph_rec(f, &(0..f.n()).collect::<Vec<_>>())
}

fn cograph_rec(f: &EdgeColoring, global_ids: &[usize]) -> Result<[Cotree; 3]> {
    if f.n() == 1 {
        let leaf = || Cotree::Leaf(global_ids[0]);
        return Ok([leaf(), leaf(), leaf()]);
    }
    let p = find_gallai_partition(f)?
        .ok_or_else(|| Error::invalid("not a Gallai coloring: no partition found"))?;
    let qi = pair_index(p.q);
    let mut per_pair: [Vec<Cotree>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for part in &p.parts {
        let sub = f.restrict(part)?;
        let ids: Vec<usize> = part.iter().map(|&v| global_ids[v]).collect();
        let trees = cograph_rec(&sub, &ids)?;
        for (k, t) in trees.into_iter().enumerate() {
            per_pair[k].push(t);
        }
    }
    let mut out = Vec::with_capacity(3);
    for (k, kids) in per_pair.into_iter().enumerate() {
        let kind = if k == qi { NodeKind::Join } else { NodeKind::Union };
        out.push(Cotree::Node { kind, children: kids });
    }
    Ok(out.try_into().expect("three cotrees"))
}

// ---------------------------------------------------------------------------
// Cotree s-expressions: (J ...) / (U ...) / (v k)
// ---------------------------------------------------------------------------

pub fn cotree_to_sexp(t: &Cotree) -> String {
    match t {
        Cotree::Leaf(v) => format!("(v {v})"),
        Cotree::Node { kind, children } => {
            let tag = if *kind == NodeKind::Join { "J" } else { "U" };
            let kids: Vec<String> = children.iter().map(cotree_to_sexp).collect();
            format!("({tag} {})", kids.join(" "))
        }
    }
}

pub fn cotree_from_sexp(text: &str) -> Result<Cotree> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
                toks.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    let mut pos = 0;
    let t = parse_cotree(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(Error::Parse("trailing tokens after cotree".into()));
    }
    Ok(t)
}

fn parse_cotree(toks: &[String], pos: &mut usize) -> Result<Cotree> {
    if toks.get(*pos).map(String::as_str) != Some("(") {
        return Err(Error::Parse("expected '('".into()));
    }
    *pos += 1;
    let head = toks
        .get(*pos)
        .ok_or_else(|| Error::Parse("unexpected end".into()))?
        .clone();
    *pos += 1;
    let node = match head.as_str() {
        "v" => {
            let v: usize = toks
                .get(*pos)
                .ok_or_else(|| Error::Parse("missing leaf id".into()))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad leaf id: {e}")))?;
            *pos += 1;
            Cotree::Leaf(v)
        }
        "J" | "U" => {
            let kind = if head == "J" { NodeKind::Join } else { NodeKind::Union };
            let mut children = Vec::new();
            while toks.get(*pos).map(String::as_str) == Some("(") {
                children.push(parse_cotree(toks, pos)?);
            }
            if children.len() < 2 {
                return Err(Error::Parse("internal cotree node needs >= 2 children".into()));
            }
            Cotree::Node { kind, children }
        }
        other => return Err(Error::Parse(format!("unknown cotree head '{other}'"))),
    };
    if toks.get(*pos).map(String::as_str) != Some(")") {
        return Err(Error::Parse("expected ')'".into()));
    }
    *pos += 1;
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::e1;
    use crate::oracle;
    use crate::products::random_gallai;
    use rand::{Rng, SeedableRng};

    #[test]
    fn e1_partition_matches_contract() {
        let f = e1();
        let p = find_gallai_partition(&f).unwrap().unwrap();
        // Pair {1,2} coarsens to one part; {1,3} is the first that works and
        // yields components {0}, {1}, {2,3}.
        assert_eq!(p.q, ColorSet::pair(1, 3));
        assert_eq!(p.parts, vec![vec![0], vec![1], vec![2, 3]]);
        assert!(validate_partition(&f, &p));
        // The coarser partition named in the books is also valid.
        let coarse = GallaiPartition {
            parts: vec![vec![0, 1], vec![2, 3]],
            q: ColorSet::pair(1, 3),
            quotient: EdgeColoring::from_flat(2, 3, vec![3]).unwrap(),
        };
        assert!(validate_partition(&f, &coarse));
    }

    #[test]
    fn monochromatic_partition_is_singletons() {
        let f = EdgeColoring::monochromatic(5, 3, 1).unwrap();
        let p = find_gallai_partition(&f).unwrap().unwrap();
        assert_eq!(p.parts.len(), 5);
        assert!(p.parts.iter().all(|x| x.len() == 1));
        assert_eq!(p.q, ColorSet::pair(1, 2));
        assert!(validate_partition(&f, &p));
    }

    #[test]
    fn rainbow_k3_has_no_partition() {
        let f = EdgeColoring::from_flat(3, 3, vec![1, 2, 3]).unwrap();
        assert!(find_gallai_partition(&f).unwrap().is_none());
    }

    #[test]
    fn invalid_partitions_rejected() {
        let f = e1();
        let bad = GallaiPartition {
            parts: vec![vec![0, 2], vec![1, 3]],
            q: ColorSet::pair(1, 3),
            quotient: EdgeColoring::from_flat(2, 3, vec![3]).unwrap(),
        };
        assert!(!validate_partition(&f, &bad));
        let single = GallaiPartition {
            parts: vec![vec![0, 1, 2, 3]],
            q: ColorSet::pair(1, 3),
            quotient: EdgeColoring::k1(3),
        };
        assert!(!validate_partition(&f, &single));
    }

    #[test]
    fn random_gallai_partitions_validate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let n = rng.gen_range(2..=60);
            let r = rng.gen_range(1..=5);
            let f = random_gallai(n, r, rng.gen());
            let p = find_gallai_partition(&f).unwrap().expect("gallai must partition");
            assert!(validate_partition(&f, &p));
        }
    }

    #[test]
    fn cotree_clique_and_independent() {
        // single JOIN of 4 leaves: complete graph
        let t = Cotree::Node {
            kind: NodeKind::Join,
            children: (0..4).map(Cotree::Leaf).collect(),
        };
        assert_eq!(cotree_max_clique(&t).len(), 4);
        assert_eq!(cotree_max_independent(&t).len(), 1);
        // single UNION of 4 leaves: empty graph
        let t = Cotree::Node {
            kind: NodeKind::Union,
            children: (0..4).map(Cotree::Leaf).collect(),
        };
        assert_eq!(cotree_max_clique(&t).len(), 1);
        assert_eq!(cotree_max_independent(&t).len(), 4);
        // JOIN of two 2-leaf UNIONs (E1's quotient-pair cograph, a C4)
        let t = Cotree::Node {
            kind: NodeKind::Join,
            children: vec![
                Cotree::Node {
                    kind: NodeKind::Union,
                    children: vec![Cotree::Leaf(0), Cotree::Leaf(1)],
                },
                Cotree::Node {
                    kind: NodeKind::Union,
                    children: vec![Cotree::Leaf(2), Cotree::Leaf(3)],
                },
            ],
        };
        assert_eq!(cotree_max_clique(&t).len(), 2);
        assert_eq!(cotree_max_independent(&t).len(), 2);
    }

    fn random_cotree(rng: &mut rand_chacha::ChaCha8Rng, ids: &[usize]) -> Cotree {
        if ids.len() == 1 {
            return Cotree::Leaf(ids[0]);
        }
        let k = rng.gen_range(2..=ids.len().min(4));
        // split ids into k nonempty chunks
        let mut cuts: Vec<usize> = Vec::new();
        while cuts.len() < k - 1 {
            let c = rng.gen_range(1..ids.len());
            if !cuts.contains(&c) {
                cuts.push(c);
            }
        }
        cuts.sort_unstable();
        let mut children = Vec::new();
        let mut prev = 0;
        for &c in cuts.iter().chain(std::iter::once(&ids.len())) {
            children.push(random_cotree(rng, &ids[prev..c]));
            prev = c;
        }
        Cotree::Node {
            kind: if rng.gen_bool(0.5) { NodeKind::Join } else { NodeKind::Union },
            children,
        }
    }

    #[test]
    fn cotree_dp_matches_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..60 {
            let n = rng.gen_range(1..=16);
            let ids: Vec<usize> = (0..n).collect();
            let t = random_cotree(&mut rng, &ids);
            let edges = t.edges();
            let mut adj = vec![crate::bits::BitSet::new(n); n];
            for &(u, v) in &edges {
                adj[u].insert(v);
                adj[v].insert(u);
            }
            let clique = cotree_max_clique(&t);
            assert_eq!(clique.len(), oracle::max_clique(&adj, None).len());
            // verify clique really is a clique
            for i in 0..clique.len() {
                for j in i + 1..clique.len() {
                    assert!(adj[clique[i]].contains(clique[j]));
                }
            }
            let indep = cotree_max_independent(&t);
            let mut co = vec![crate::bits::BitSet::new(n); n];
            for u in 0..n {
                for v in 0..n {
                    if u != v && !adj[u].contains(v) {
                        co[u].insert(v);
                    }
                }
            }
            assert_eq!(indep.len(), oracle::max_clique(&co, None).len());
        }
    }

    fn assert_edge_partition(f: &EdgeColoring) {
        let trees = cograph_edge_partition(f).unwrap();
        let n = f.n();
        let mut seen = std::collections::BTreeMap::new();
        for (k, t) in trees.iter().enumerate() {
            let (a, b) = PAIRS3[k];
            for (u, v) in t.edges() {
                let c = f.color(u, v);
                assert!(c == a || c == b, "edge ({u},{v}) color {c} not in pair {k}");
                assert!(seen.insert((u, v), k).is_none(), "edge in two cographs");
            }
        }
        assert_eq!(seen.len(), n * (n - 1) / 2, "cotree edges must cover K_n");
    }

    #[test]
    fn e1_cograph_partition() {
        assert_edge_partition(&e1());
        let trees = cograph_edge_partition(&e1()).unwrap();
        // quotient pair {1,3}: JOIN at the root; others UNION at the root
        match &trees[1] {
            Cotree::Node { kind, .. } => assert_eq!(*kind, NodeKind::Join),
            _ => panic!("expected node"),
        }
        match &trees[0] {
            Cotree::Node { kind, .. } => assert_eq!(*kind, NodeKind::Union),
            _ => panic!("expected node"),
        }
    }

    #[test]
    fn k1_cograph_partition() {
        let trees = cograph_edge_partition(&EdgeColoring::k1(3)).unwrap();
        for t in &trees {
            assert_eq!(t, &Cotree::Leaf(0));
        }
    }

    #[test]
    fn monochromatic_cograph_partition() {
        let f = EdgeColoring::monochromatic(6, 3, 1).unwrap();
        assert_edge_partition(&f);
        let trees = cograph_edge_partition(&f).unwrap();
        // the {2,3} cotree is edgeless
        assert!(trees[2].edges().is_empty());
    }

    #[test]
    fn random_cograph_partitions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..40 {
            let n = rng.gen_range(1..=24);
            let f = random_gallai(n, 3, rng.gen());
            assert_edge_partition(&f);
        }
    }

    #[test]
    fn cographs_are_p4_free() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let n = rng.gen_range(4..=12);
            let f = random_gallai(n, 3, rng.gen());
            let trees = cograph_edge_partition(&f).unwrap();
            for t in &trees {
                let edges: std::collections::BTreeSet<(usize, usize)> = t.edges().into_iter().collect();
                let has = |u: usize, v: usize| edges.contains(&(u.min(v), u.max(v)));
                // brute-force over ordered 4-tuples: an induced P4 a-b-c-d
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            for d in 0..n {
                                let distinct =
                                    a < d && b != a && b != c && b != d && c != a && c != d;
                                if distinct
                                    && has(a, b)
                                    && has(b, c)
                                    && has(c, d)
                                    && !has(a, c)
                                    && !has(a, d)
                                    && !has(b, d)
                                {
                                    panic!("induced P4 in cograph");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cotree_sexp_roundtrip() {
        let t = Cotree::Node {
            kind: NodeKind::Join,
            children: vec![
                Cotree::Node {
                    kind: NodeKind::Union,
                    children: vec![Cotree::Leaf(0), Cotree::Leaf(1)],
                },
                Cotree::Leaf(2),
            ],
        };
        let s = cotree_to_sexp(&t);
        assert_eq!(s, "(J (U (v 0) (v 1)) (v 2))");
        assert_eq!(cotree_from_sexp(&s).unwrap(), t);
    }

    #[test]
    fn cotree_restrict_collapses() {
        let t = cotree_from_sexp("(J (U (v 0) (v 1)) (v 2))").unwrap();
        let keep: std::collections::BTreeSet<usize> = [0, 2].into_iter().collect();
        let r = t.restrict(&keep).unwrap();
        assert_eq!(cotree_to_sexp(&r), "(J (v 0) (v 2))");
        let keep: std::collections::BTreeSet<usize> = [1].into_iter().collect();
        assert_eq!(t.restrict(&keep).unwrap(), Cotree::Leaf(1));
    }
}
