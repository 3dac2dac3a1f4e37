//! Generators for the graph families used throughout the crate.
//!
//! Numbering conventions (fixed, tests rely on them):
//!
//! * `circulant(n, S)`: vertex `i` is `i`.
//! * `gp(n, k)`: `x_i = i`, `y_i = n + i`. `prism(n)` is `gp(n, 1)`.
//! * `moebius_ladder(n)`: the cycle `0..2n` plus chords `i ~ i + n`.
//! * `lex_cycle_2k1(n)`: `(i, e) = 2i + e`.
//! * `px_digraph(r, 1)`: `(x, i) = 2x + i`.
//! * `px_digraph(r, s)`, `s >= 2`: the path `((x, b0), (x+1, b1), ..., (x+s, bs))`
//!   has index `x * 2^(s+1) + (b0 b1 .. bs)` read as a binary number with `b0`
//!   most significant. This is lexicographic order on (start, coordinates).
//! * `spx(r, s)`: `u- = 2 idx(u)`, `u+ = 2 idx(u) + 1`.
//! * `psi(r)`: `(i, j) = 3i + j`.
//! * Pappus and Heawood are split into rings `base..base+size`; the shift
//!   automorphism sends `base + j` to `base + (j + 1) % size` in every ring.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};
use crate::perm::Perm;

fn bad(family: &str, message: impl Into<String>) -> Error {
    Error::BadParameters {
        family: family.to_string(),
        message: message.into(),
    }
}

/// `i ~ i ± s (mod n)` for every step `s`.
pub fn circulant(n: usize, steps: &[usize]) -> Result<Graph> {
    if n < 3 {
        return Err(bad("circulant", format!("n = {n} is below 3")));
    }
    let mut edges = Vec::new();
    for &s in steps {
        if s == 0 || s > n / 2 {
            return Err(bad("circulant", format!("step {s} outside 1..={}", n / 2)));
        }
        for i in 0..n {
            edges.push((i, (i + s) % n));
        }
    }
    Graph::from_edges(n, edges)
}

/// Generalised Petersen graph: `x_i x_{i+1}`, `x_i y_i`, `y_i y_{i+k}`.
pub fn gp(n: usize, k: usize) -> Result<Graph> {
    if n < 3 {
        return Err(bad("gp", format!("n = {n} is below 3")));
    }
    if k == 0 || 2 * k >= n {
        return Err(bad("gp", format!("k = {k} must satisfy 1 <= k < n/2")));
    }
    let mut edges = Vec::with_capacity(3 * n);
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((i, n + i));
        edges.push((n + i, n + (i + k) % n));
    }
    Graph::from_edges(2 * n, edges)
}

pub fn prism(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(bad("prism", format!("n = {n} is below 3")));
    }
    gp(n, 1)
}

/// `C_{2n}` with antipodal chords; `2n` vertices.
pub fn moebius_ladder(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(bad("moebius", format!("n = {n} is below 3")));
    }
    let m = 2 * n;
    let edges = (0..m).flat_map(|i| [(i, (i + 1) % m), (i, (i + n) % m)]);
    Graph::from_edges(m, edges)
}

/// Lexicographic product `C_n[2K_1]`.
pub fn lex_cycle_2k1(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(bad("lex2k1", format!("n = {n} is below 3")));
    }
    let mut edges = Vec::with_capacity(4 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        for a in 0..2 {
            for b in 0..2 {
                edges.push((2 * i + a, 2 * j + b));
            }
        }
    }
    Graph::from_edges(2 * n, edges)
}

fn check_px(family: &str, r: usize, s: usize) -> Result<()> {
    if r < 3 {
        return Err(bad(family, format!("r = {r} is below 3")));
    }
    if s == 0 || s >= r {
        return Err(bad(family, format!("s = {s} must satisfy 1 <= s <= r - 1")));
    }
    // keep the vertex count addressable
    if s + 1 >= usize::BITS as usize - 8 {
        return Err(bad(family, format!("s = {s} is too large")));
    }
    Ok(())
}

/// Number of vertices of `PX(r, s)`.
pub fn px_order(r: usize, s: usize) -> usize {
    if s == 1 {
        2 * r
    } else {
        r << (s + 1)
    }
}

/// The Praeger-Xu digraph. See the module docs for the numbering.
pub fn px_digraph(r: usize, s: usize) -> Result<Digraph> {
    check_px("px", r, s)?;
    if s == 1 {
        let arcs = (0..r).flat_map(|x| {
            let y = (x + 1) % r;
            (0..2).flat_map(move |i| (0..2).map(move |j| (2 * x + i, 2 * y + j)))
        });
        return Digraph::from_arcs(2 * r, arcs);
    }
    let width = 1usize << (s + 1);
    let mask = width - 1;
    let arcs = (0..r).flat_map(|x| {
        let y = (x + 1) % r;
        (0..width).flat_map(move |bits| {
            (0..2).map(move |c| (x * width + bits, y * width + (((bits << 1) & mask) | c)))
        })
    });
    Digraph::from_arcs(r * width, arcs)
}

/// Split of a digraph: `u- u+` for every vertex, `v+ u-` for every arc `(v, u)`.
pub fn split(d: &Digraph) -> Result<Graph> {
    let n = d.order();
    let rungs = (0..n).map(|u| (2 * u, 2 * u + 1));
    let arcs = d.arcs().map(|(v, u)| (2 * v + 1, 2 * u));
    Graph::from_edges(2 * n, rungs.chain(arcs))
}

/// Split Praeger-Xu graph `SPX(r, s)`.
pub fn spx(r: usize, s: usize) -> Result<Graph> {
    check_px("spx", r, s)?;
    split(&px_digraph(r, s)?)
}

/// Automorphism of `PX(r, s)` swapping `(x, 0)` and `(x, 1)` in the base
/// digraph, as a permutation of the PX vertices.
pub fn px_swap(r: usize, s: usize, x: usize) -> Result<Perm> {
    check_px("px", r, s)?;
    if x >= r {
        return Err(bad("px", format!("position {x} outside 0..{r}")));
    }
    if s == 1 {
        let mut images: Vec<usize> = (0..2 * r).collect();
        images.swap(2 * x, 2 * x + 1);
        return Perm::from_images(images);
    }
    let width = 1usize << (s + 1);
    let mut images = Vec::with_capacity(r * width);
    for start in 0..r {
        for bits in 0..width {
            let mut out = bits;
            for t in 0..=s {
                if (start + t) % r == x {
                    out ^= 1 << (s - t);
                }
            }
            images.push(start * width + out);
        }
    }
    Perm::from_images(images)
}

/// Lifts a permutation of digraph vertices to the split graph.
pub fn split_perm(p: &Perm) -> Perm {
    let images = (0..2 * p.degree())
        .map(|w| 2 * p.image(w / 2) + w % 2)
        .collect();
    Perm::from_images(images).expect("lift of a permutation is a permutation")
}

/// Order-2 automorphism of `SPX(r, s)` induced by [`px_swap`] at position 0.
pub fn spx_swap(r: usize, s: usize) -> Result<Perm> {
    Ok(split_perm(&px_swap(r, s, 0)?))
}

/// `Z_r x Z_3`; for even `i`: `(i,j)(i-1,j)`, `(i,j)(i+1,j+1)`, `(i,j)(i+1,j+2)`.
pub fn psi(r: usize) -> Result<Graph> {
    if r < 4 || r.is_odd() {
        return Err(bad("psi", format!("r = {r} must be even and at least 4")));
    }
    let v = |i: usize, j: usize| 3 * (i % r) + j % 3;
    let mut edges = Vec::with_capacity(9 * r / 2);
    for i in (0..r).step_by(2) {
        for j in 0..3 {
            edges.push((v(i, j), v(i + r - 1, j)));
            edges.push((v(i, j), v(i + 1, j + 1)));
            edges.push((v(i, j), v(i + 1, j + 2)));
        }
    }
    Graph::from_edges(3 * r, edges)
}

/// `(i,0) <-> (i,1)`, `(i,2)` fixed.
pub fn psi_swap(r: usize) -> Result<Perm> {
    if r < 4 || r.is_odd() {
        return Err(bad("psi", format!("r = {r} must be even and at least 4")));
    }
    let images = (0..3 * r)
        .map(|w| match w % 3 {
            0 => w + 1,
            1 => w - 1,
            _ => w,
        })
        .collect();
    Perm::from_images(images)
}

const PAPPUS_RINGS: [(usize, usize); 5] = [(0, 6), (6, 6), (12, 3), (15, 2), (17, 1)];
const PAPPUS_EDGES: [(usize, usize); 27] = [
    (0, 6), (0, 7), (0, 12), (1, 7), (1, 8), (1, 13), (2, 8), (2, 9), (2, 14),
    (3, 9), (3, 10), (3, 12), (4, 10), (4, 11), (4, 13), (5, 6), (5, 11), (5, 14),
    (6, 15), (7, 16), (8, 15), (9, 16), (10, 15), (11, 16), (12, 17), (13, 17), (14, 17),
];

const HEAWOOD_RINGS: [(usize, usize); 6] = [(0, 4), (4, 4), (8, 2), (10, 2), (12, 1), (13, 1)];
const HEAWOOD_EDGES: [(usize, usize); 21] = [
    (0, 4), (0, 5), (0, 8), (1, 5), (1, 6), (1, 9), (2, 6), (2, 7), (2, 8), (3, 4), (3, 7),
    (3, 9), (4, 10), (5, 11), (6, 10), (7, 11), (8, 13), (9, 13), (10, 12), (11, 12), (12, 13),
];

fn ring_shift(n: usize, rings: &[(usize, usize)]) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    for &(base, size) in rings {
        for j in 0..size {
            images[base + j] = base + (j + 1) % size;
        }
    }
    Perm::from_images(images).expect("rings partition the vertex set")
}

/// The "add one to the sub-index" automorphism of the Pappus graph.
pub fn pappus_shift() -> Perm {
    ring_shift(18, &PAPPUS_RINGS)
}

/// The "add one to the sub-index" automorphism of the Heawood graph.
pub fn heawood_shift() -> Perm {
    ring_shift(14, &HEAWOOD_RINGS)
}

pub const NAMED: [&str; 7] = [
    "k4",
    "k33",
    "q3",
    "petersen",
    "pappus",
    "heawood",
    "dodecahedron",
];

/// Small named graphs. Petersen is built as the Kneser graph `K(5,2)` so that
/// comparing it with `gp(5, 2)` is not a tautology.
pub fn named(name: &str) -> Result<Graph> {
    match name.to_ascii_lowercase().as_str() {
        "k4" => Ok(Graph::complete(4)),
        "k33" | "k3,3" => Graph::from_edges(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b)))),
        "q3" | "cube" => Graph::from_edges(
            8,
            (0..8usize).flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b)))),
        ),
        "petersen" => {
            let pairs: Vec<(usize, usize)> = (0..5)
                .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
                .collect();
            let mut edges = Vec::new();
            for (i, &(a, b)) in pairs.iter().enumerate() {
                for (j, &(c, d)) in pairs.iter().enumerate().skip(i + 1) {
                    if a != c && a != d && b != c && b != d {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(10, edges)
        }
        "pappus" => Graph::from_edges(18, PAPPUS_EDGES),
        "heawood" => Graph::from_edges(14, HEAWOOD_EDGES),
        "dodecahedron" => gp(10, 2),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// A family member with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilySpec {
    Named { name: String },
    Gp { n: usize, k: usize },
    Prism { n: usize },
    Moebius { n: usize },
    Circulant { n: usize, steps: Vec<usize> },
    Lex2k1 { n: usize },
    Px { r: usize, s: usize },
    Spx { r: usize, s: usize },
    Psi { r: usize },
}

impl FamilySpec {
    pub fn named(name: &str) -> Self {
        FamilySpec::Named {
            name: name.to_ascii_lowercase(),
        }
    }

    /// The undirected graph. For `Px` this is the underlying graph.
    pub fn build(&self) -> Result<Graph> {
        match self {
            FamilySpec::Named { name } => named(name),
            FamilySpec::Gp { n, k } => gp(*n, *k),
            FamilySpec::Prism { n } => prism(*n),
            FamilySpec::Moebius { n } => moebius_ladder(*n),
            FamilySpec::Circulant { n, steps } => circulant(*n, steps),
            FamilySpec::Lex2k1 { n } => lex_cycle_2k1(*n),
            FamilySpec::Px { r, s } => Ok(px_digraph(*r, *s)?.underlying_graph()),
            FamilySpec::Spx { r, s } => spx(*r, *s),
            FamilySpec::Psi { r } => psi(*r),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Named { name } => write!(f, "{name}"),
            FamilySpec::Gp { n, k } => write!(f, "gp({n},{k})"),
            FamilySpec::Prism { n } => write!(f, "prism({n})"),
            FamilySpec::Moebius { n } => write!(f, "moebius({n})"),
            FamilySpec::Circulant { n, steps } => {
                let s: Vec<String> = steps.iter().map(|s| s.to_string()).collect();
                write!(f, "circulant({n};{})", s.join(","))
            }
            FamilySpec::Lex2k1 { n } => write!(f, "lex2k1({n})"),
            FamilySpec::Px { r, s } => write!(f, "px({r},{s})"),
            FamilySpec::Spx { r, s } => write!(f, "spx({r},{s})"),
            FamilySpec::Psi { r } => write!(f, "psi({r})"),
        }
    }
}

/// Every cubic family member on at most `max_n` vertices.
///
/// `gp(n, 1)` is listed as `prism(n)` only. Circulants are `{a, n/2}` with
/// `n` even and `gcd(a, n/2) = 1`. Members that are not vertex-transitive
/// (most generalised Petersen graphs) are included; checks skip them.
pub fn cubic_corpus(max_n: usize) -> Vec<FamilySpec> {
    let mut out: Vec<FamilySpec> = NAMED.iter().map(|n| FamilySpec::named(n)).collect();
    for n in 3..=max_n / 2 {
        out.push(FamilySpec::Prism { n });
    }
    for n in 3..=max_n / 2 {
        out.push(FamilySpec::Moebius { n });
    }
    for n in 5..=max_n / 2 {
        for k in 2..n.div_ceil(2) {
            out.push(FamilySpec::Gp { n, k });
        }
    }
    for n in (4..=max_n).step_by(2) {
        for a in 1..n / 2 {
            if a.gcd(&(n / 2)) == 1 {
                out.push(FamilySpec::Circulant {
                    n,
                    steps: vec![a, n / 2],
                });
            }
        }
    }
    for r in 3.. {
        if px_order(r, 1) * 2 > max_n {
            break;
        }
        for s in 1..r {
            if px_order(r, s) * 2 <= max_n {
                out.push(FamilySpec::Spx { r, s });
            }
        }
    }
    for r in (4..).step_by(2) {
        if 3 * r > max_n {
            break;
        }
        out.push(FamilySpec::Psi { r });
    }
    out
}

/// The quartic corpus: `C_n[2K_1]` for `n <= max_lex`, `K5`, and connected
/// 4-valent circulants `{a, b}`, `1 <= a < b < n/2`, on at most `max_circ`
/// vertices.
pub fn quartic_corpus(max_lex: usize, max_circ: usize) -> Vec<FamilySpec> {
    let mut out: Vec<FamilySpec> = (3..=max_lex).map(|n| FamilySpec::Lex2k1 { n }).collect();
    out.push(FamilySpec::Circulant {
        n: 5,
        steps: vec![1, 2],
    });
    for n in 6..=max_circ {
        for a in 1..n.div_ceil(2) {
            for b in a + 1..n.div_ceil(2) {
                if n.gcd(&a).gcd(&b) == 1 {
                    out.push(FamilySpec::Circulant {
                        n,
                        steps: vec![a, b],
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circulants() {
        assert_eq!(circulant(6, &[1]).unwrap(), Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap());
        assert!(circulant(5, &[1, 2]).unwrap().is_complete());
        assert!(circulant(6, &[0]).is_err());
        assert!(circulant(6, &[4]).is_err());
        assert!(circulant(8, &[1, 4]).unwrap().is_regular(3));
    }

    #[test]
    fn gp_shapes() {
        let g = gp(8, 3).unwrap();
        assert_eq!(g.order(), 16);
        assert!(g.is_regular(3));
        assert!(gp(6, 3).is_err());
        assert!(gp(2, 1).is_err());
        assert_eq!(gp(10, 2).unwrap().girth(), Some(5));
    }

    #[test]
    fn named_graphs() {
        let k33 = named("k33").unwrap();
        assert!(k33.is_bipartite());
        assert_eq!(k33.girth(), Some(4));
        let pappus = named("pappus").unwrap();
        assert_eq!(pappus.order(), 18);
        assert!(pappus.is_regular(3));
        assert_eq!(pappus.girth(), Some(6));
        let heawood = named("heawood").unwrap();
        assert_eq!(heawood.order(), 14);
        assert!(heawood.is_regular(3));
        assert_eq!(heawood.girth(), Some(6));
        let petersen = named("petersen").unwrap();
        assert!(petersen.is_regular(3));
        assert_eq!(petersen.girth(), Some(5));
        assert!(named("tutte").is_err());
        for name in NAMED {
            let g = named(name).unwrap();
            assert!(g.is_connected() && g.is_regular(3), "{name}");
        }
    }

    #[test]
    fn shifts_are_automorphisms() {
        assert!(pappus_shift().is_automorphism(&named("pappus").unwrap()));
        assert!(heawood_shift().is_automorphism(&named("heawood").unwrap()));
    }

    #[test]
    fn ladders() {
        assert_eq!(prism(3).unwrap().order(), 6);
        let m = moebius_ladder(4).unwrap();
        assert!(m.is_regular(3) && m.order() == 8);
        assert!(moebius_ladder(2).is_err());
    }

    #[test]
    fn lex_product() {
        let g = lex_cycle_2k1(6).unwrap();
        assert_eq!(g.order(), 12);
        assert!(g.is_regular(4));
        // n = 3 is the octahedron
        let oct = lex_cycle_2k1(3).unwrap();
        assert_eq!(oct.edge_count(), 12);
    }

    #[test]
    fn px_counts() {
        let d = px_digraph(3, 1).unwrap();
        assert_eq!((d.order(), d.arc_count()), (6, 12));
        assert!(d.underlying_graph().is_regular(4));
        let d = px_digraph(4, 2).unwrap();
        assert_eq!(d.order(), 32);
        assert!((0..32).all(|v| d.out_degree(v) == 2));
        assert!(d.in_degrees().iter().all(|&k| k == 2));
        assert!(px_digraph(3, 3).is_err());
        assert!(px_digraph(2, 1).is_err());
    }

    #[test]
    fn px_swap_is_an_automorphism() {
        for (r, s) in [(3, 1), (4, 2), (5, 3)] {
            let d = px_digraph(r, s).unwrap();
            let p = px_swap(r, s, 1).unwrap();
            assert!(d.arcs().all(|(u, v)| d.has_arc(p.image(u), p.image(v))));
        }
    }

    #[test]
    fn px_automorphism_counts() {
        use crate::search::{automorphism_group, digraph_automorphism_group};
        use num_bigint::BigUint;
        for r in 3..=8 {
            let a = digraph_automorphism_group(&px_digraph(r, 1).unwrap()).unwrap();
            assert_eq!(a.order(), &(BigUint::from(r) << r), "r = {r}");
        }
        // the split has twice as many automorphisms as the digraph
        for (r, s) in [(3, 1), (4, 1), (4, 2), (5, 2)] {
            let px = digraph_automorphism_group(&px_digraph(r, s).unwrap()).unwrap();
            let sp = automorphism_group(&spx(r, s).unwrap());
            assert_eq!(sp.order(), &(px.order() * 2u32), "({r},{s})");
        }
    }

    #[test]
    fn spx_shapes() {
        let g = spx(4, 1).unwrap();
        assert_eq!(g.order(), 16);
        assert!(g.is_regular(3) && g.is_connected());
        let h = spx(3, 2).unwrap();
        assert_eq!(h.order(), 48);
        assert!(h.is_regular(3) && h.is_connected());
        let p = spx_swap(4, 1).unwrap();
        assert!(p.is_automorphism(&g));
        assert_eq!(p.cycles().len(), 16 - 2);
    }

    #[test]
    fn psi_shapes() {
        let g = psi(4).unwrap();
        assert_eq!(g.order(), 12);
        assert!(g.is_regular(3) && g.is_connected());
        assert!(psi(5).is_err());
        assert!(psi(2).is_err());
        assert!(psi_swap(6).unwrap().is_automorphism(&psi(6).unwrap()));
    }

    #[test]
    fn corpora_are_cubic_and_connected() {
        let corpus = cubic_corpus(64);
        for spec in &corpus {
            let g = spec.build().unwrap();
            assert!(g.order() <= 64, "{spec}");
            assert!(g.is_regular(3) && g.is_connected(), "{spec}");
        }
        assert!(corpus.contains(&FamilySpec::Spx { r: 4, s: 2 }));
        assert!(corpus.contains(&FamilySpec::Spx { r: 16, s: 1 }));
        assert!(!corpus.contains(&FamilySpec::Spx { r: 5, s: 2 }));
        for spec in quartic_corpus(16, 32) {
            let g = spec.build().unwrap();
            assert!(g.is_regular(4) && g.is_connected(), "{spec}");
        }
    }

    #[test]
    fn spec_display() {
        assert_eq!(FamilySpec::Gp { n: 5, k: 2 }.to_string(), "gp(5,2)");
        let c = FamilySpec::Circulant { n: 8, steps: vec![1, 4] };
        assert_eq!(c.to_string(), "circulant(8;1,4)");
    }
}
