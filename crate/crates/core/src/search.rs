//! Automorphism groups and isomorphisms by individualisation-refinement.
//!
//! Ordered partitions are refined to equitable ones by colour refinement.
//! The refinement only looks at cell indices and neighbour counts, so it
//! commutes with relabelling; two search-tree nodes related by an
//! isomorphism produce identical traces. The target cell at every node is
//! the first smallest non-singleton cell.
//!
//! The automorphism search walks a first path to a discrete leaf, then for
//! each level (deepest first) and each vertex of the level's target cell
//! not yet in the known orbit of the path vertex, looks for a leaf in the
//! corresponding subtree that matches the first leaf.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};
use crate::group::{DisjointSets, PermGroup};
use crate::perm::Perm;

#[derive(Clone, Debug)]
struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    fn unit(n: usize) -> Self {
        Partition {
            cells: if n == 0 { Vec::new() } else { vec![(0..n).collect()] },
            cell_of: vec![0; n],
        }
    }

    fn target_cell(&self) -> Option<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
    }

    /// Splits `v` out of its cell into a new singleton cell at the end.
    fn individualise(&mut self, v: usize) -> usize {
        let c = self.cell_of[v];
        self.cells[c].retain(|&x| x != v);
        let new = self.cells.len();
        self.cells.push(vec![v]);
        self.cell_of[v] = new;
        new
    }

    fn refine(&mut self, g: &Graph, initial: impl IntoIterator<Item = usize>, trace: &mut Vec<u64>) {
        let n = g.order();
        let mut queued = vec![false; self.cells.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for c in initial {
            if !queued[c] {
                queued[c] = true;
                queue.push_back(c);
            }
        }
        let mut count = vec![0u32; n];
        let mut touched: Vec<usize> = Vec::new();
        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            for &x in &self.cells[w] {
                for &y in g.neighbours(x) {
                    if count[y] == 0 {
                        touched.push(y);
                    }
                    count[y] += 1;
                }
            }
            let mut affected: Vec<usize> = touched.iter().map(|&y| self.cell_of[y]).collect();
            affected.sort_unstable();
            affected.dedup();
            for c in affected {
                if self.cells[c].len() == 1 {
                    continue;
                }
                let first = count[self.cells[c][0]];
                if self.cells[c].iter().all(|&v| count[v] == first) {
                    continue;
                }
                let mut members = std::mem::take(&mut self.cells[c]);
                members.sort_by_key(|&v| (count[v], v));
                let mut groups: Vec<Vec<usize>> = Vec::new();
                let mut last = None;
                for v in members {
                    if last != Some(count[v]) {
                        groups.push(Vec::new());
                        last = Some(count[v]);
                    }
                    groups.last_mut().unwrap().push(v);
                }
                trace.push(((c as u64) << 32) | groups.len() as u64);
                for (k, group) in groups.into_iter().enumerate() {
                    trace.push(((count[group[0]] as u64) << 32) | group.len() as u64);
                    let idx = if k == 0 {
                        c
                    } else {
                        self.cells.push(Vec::new());
                        queued.push(false);
                        self.cells.len() - 1
                    };
                    for &v in &group {
                        self.cell_of[v] = idx;
                    }
                    self.cells[idx] = group;
                    if !queued[idx] {
                        queued[idx] = true;
                        queue.push_back(idx);
                    }
                }
            }
            for &y in &touched {
                count[y] = 0;
            }
            touched.clear();
        }
        trace.push(u64::MAX);
    }

    /// For a discrete partition: vertex in each cell.
    fn labelling(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c[0]).collect()
    }
}

/// One node of the first path: the equitable partition reached, and the
/// trace that produced it.
struct PathNode {
    partition: Partition,
    trace: Vec<u64>,
    target: Option<usize>,
}

struct FirstPath {
    nodes: Vec<PathNode>,
    /// The vertex individualised at each non-leaf node.
    base: Vec<usize>,
    leaf: Vec<usize>,
}

fn first_path(g: &Graph) -> FirstPath {
    let mut p = Partition::unit(g.order());
    let mut trace = Vec::new();
    let cells: Vec<usize> = (0..p.cells.len()).collect();
    p.refine(g, cells, &mut trace);
    let mut nodes = Vec::new();
    let mut base = Vec::new();
    loop {
        let target = p.target_cell();
        nodes.push(PathNode {
            partition: p.clone(),
            trace: trace.clone(),
            target,
        });
        let Some(t) = target else { break };
        let v = *p.cells[t].iter().min().unwrap();
        base.push(v);
        let mut child = p.clone();
        let new = child.individualise(v);
        trace = Vec::new();
        child.refine(g, [t, new], &mut trace);
        p = child;
    }
    let leaf = p.labelling();
    FirstPath { nodes, base, leaf }
}

/// Depth-first search below `node` (a partition of `h` at depth `depth`)
/// for a leaf whose labelling, matched against `path.leaf` of `g`, gives an
/// isomorphism `g -> h`.
fn explore(g: &Graph, h: &Graph, path: &FirstPath, node: &Partition, depth: usize, v: usize) -> Option<Perm> {
    let target = path.nodes[depth].target.expect("non-leaf depth");
    let mut child = node.clone();
    let new = child.individualise(v);
    let mut trace = Vec::new();
    child.refine(h, [target, new], &mut trace);
    let expected = &path.nodes[depth + 1];
    if trace != expected.trace {
        return None;
    }
    match expected.target {
        None => {
            let lab = child.labelling();
            let mut images = vec![0; g.order()];
            for (c, &x) in path.leaf.iter().enumerate() {
                images[x] = lab[c];
            }
            let candidate = Perm::from_images_unchecked(images);
            let preserves = g
                .edges()
                .all(|(a, b)| h.has_edge(candidate.image(a), candidate.image(b)));
            preserves.then_some(candidate)
        }
        Some(t) => {
            let mut options = child.cells[t].clone();
            options.sort_unstable();
            options
                .into_iter()
                .find_map(|w| explore(g, h, path, &child, depth + 1, w))
        }
    }
}

/// Generators of `Aut(g)` together with the base they stabilise along.
pub fn automorphism_generators(g: &Graph) -> (Vec<Perm>, Vec<usize>) {
    let n = g.order();
    if n > 1 && (g.edge_count() == 0 || g.is_complete()) {
        let sym = PermGroup::symmetric(n);
        return (sym.generators().to_vec(), Vec::new());
    }
    let path = first_path(g);
    let mut gens: Vec<Perm> = Vec::new();
    for level in (0..path.base.len()).rev() {
        let node = &path.nodes[level];
        let t = node.target.unwrap();
        let b = path.base[level];
        let mut candidates = node.partition.cells[t].clone();
        candidates.sort_unstable();
        let mut orbits = orbit_sets(n, &gens);
        for w in candidates {
            if orbits.find(w) == orbits.find(b) {
                continue;
            }
            if let Some(aut) = explore(g, g, &path, &node.partition, level, w) {
                debug_assert!(aut.is_automorphism(g));
                gens.push(aut);
                orbits = orbit_sets(n, &gens);
            }
        }
    }
    (gens, path.base)
}

fn orbit_sets(n: usize, gens: &[Perm]) -> DisjointSets {
    let mut dsu = DisjointSets::new(n);
    for g in gens {
        for p in 0..n {
            dsu.union(p, g.image(p));
        }
    }
    dsu
}

/// The full automorphism group of `g`.
pub fn automorphism_group(g: &Graph) -> PermGroup {
    let (gens, base) = automorphism_generators(g);
    PermGroup::with_base_prefix(g.order(), gens, &base)
}

/// Automorphisms of a digraph (maps preserving arcs). Each arc `u -> v` is
/// replaced by a path `u - a - b - v` with a pendant vertex on `a`; gadget
/// vertices have degree at most 3, so every vertex of `d` needs total degree
/// at least 4.
pub fn digraph_automorphism_group(d: &Digraph) -> Result<PermGroup> {
    let n = d.order();
    let indeg = d.in_degrees();
    if let Some(v) = (0..n).find(|&v| d.out_degree(v) + indeg[v] < 4) {
        return Err(Error::DegreeMismatch {
            expected: 4,
            got: d.out_degree(v) + indeg[v],
        });
    }
    let arcs: Vec<(usize, usize)> = d.arcs().collect();
    let mut edges = Vec::with_capacity(4 * arcs.len());
    for (k, &(u, v)) in arcs.iter().enumerate() {
        let (a, b, c) = (n + 3 * k, n + 3 * k + 1, n + 3 * k + 2);
        edges.extend([(u, a), (a, b), (b, v), (a, c)]);
    }
    let gadget = Graph::from_edges(n + 3 * arcs.len(), edges)?;
    let full = automorphism_group(&gadget);
    let points: Vec<usize> = (0..n).collect();
    let group = full.induced_on(&points);
    for (index, s) in group.generators().iter().enumerate() {
        if !arcs.iter().all(|&(u, v)| d.has_arc(s.image(u), s.image(v))) {
            return Err(Error::NotAnAutomorphism { index });
        }
    }
    Ok(group)
}

/// An isomorphism `g -> h` as a vertex map, if one exists.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Perm> {
    let n = g.order();
    if n != h.order() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut dg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return None;
    }
    let path = first_path(g);
    let mut root = Partition::unit(n);
    let mut trace = Vec::new();
    let cells: Vec<usize> = (0..root.cells.len()).collect();
    root.refine(h, cells, &mut trace);
    if trace != path.nodes[0].trace {
        return None;
    }
    match path.nodes[0].target {
        None => {
            let lab = root.labelling();
            let mut images = vec![0; n];
            for (c, &x) in path.leaf.iter().enumerate() {
                images[x] = lab[c];
            }
            let iso = Perm::from_images_unchecked(images);
            g.edges()
                .all(|(a, b)| h.has_edge(iso.image(a), iso.image(b)))
                .then_some(iso)
        }
        Some(t) => {
            let mut options = root.cells[t].clone();
            options.sort_unstable();
            options.into_iter().find_map(|w| explore(g, h, &path, &root, 0, w))
        }
    }
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}

pub fn is_vertex_transitive(g: &Graph) -> bool {
    automorphism_group(g).is_transitive()
}

/// Orbits of a group of automorphisms on the arcs of `g`, as a map from
/// arc index (position in `g.arcs()`) to orbit index, plus the orbit count.
pub fn arc_orbits(g: &Graph, group: &PermGroup) -> (Vec<(usize, usize)>, Vec<usize>, usize) {
    let arcs: Vec<(usize, usize)> = g.arcs().collect();
    let index = |u: usize, v: usize| -> usize {
        arcs.binary_search(&(u, v)).expect("image of an arc is an arc")
    };
    let mut dsu = DisjointSets::new(arcs.len());
    for s in group.generators() {
        for (i, &(u, v)) in arcs.iter().enumerate() {
            dsu.union(i, index(s.image(u), s.image(v)));
        }
    }
    let mut label = vec![usize::MAX; arcs.len()];
    let mut next = 0;
    let mut orbit_of = vec![0; arcs.len()];
    for i in 0..arcs.len() {
        let r = dsu.find(i);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        orbit_of[i] = label[r];
    }
    (arcs, orbit_of, next)
}

pub fn is_arc_transitive(g: &Graph) -> bool {
    let group = automorphism_group(g);
    group.is_transitive() && arc_orbits(g, &group).2 <= 1
}

/// Number of orbits of `Aut(g)` on edges.
pub fn edge_orbit_count(g: &Graph) -> usize {
    let group = automorphism_group(g);
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let index = |u: usize, v: usize| edges.binary_search(&(u.min(v), u.max(v))).unwrap();
    let mut dsu = DisjointSets::new(edges.len());
    for s in group.generators() {
        for (i, &(u, v)) in edges.iter().enumerate() {
            dsu.union(i, index(s.image(u), s.image(v)));
        }
    }
    (0..edges.len()).filter(|&i| dsu.find(i) == i).count()
}

/// Largest order accepted by [`brute_force_automorphisms`].
pub const BRUTE_FORCE_LIMIT: usize = 10;

/// Every automorphism of `g`, by running through the permutations of the
/// vertex set and discarding those that break an adjacency. A partial map is
/// abandoned as soon as one of its pairs fails, which leaves the result
/// unchanged.
pub fn brute_force_automorphisms(g: &Graph) -> Result<Vec<Perm>> {
    let n = g.order();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(g, &mut images, &mut used, &mut out);
    Ok(out)
}

fn extend(g: &Graph, images: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
    let n = g.order();
    let i = images.len();
    if i == n {
        out.push(Perm::from_images_unchecked(images.clone()));
        return;
    }
    for x in 0..n {
        if used[x] {
            continue;
        }
        let consistent = (0..i).all(|j| g.has_edge(i, j) == g.has_edge(x, images[j]));
        if !consistent {
            continue;
        }
        used[x] = true;
        images.push(x);
        extend(g, images, used, out);
        images.pop();
        used[x] = false;
    }
}
