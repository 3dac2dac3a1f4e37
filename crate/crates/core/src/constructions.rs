//! Quotients by groups of automorphisms and the two matching contractions.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::search::{arc_orbits, automorphism_group};

#[derive(Clone, Debug, Serialize)]
pub struct QuotientResult {
    pub quotient: Graph,
    /// vertex -> block
    pub block_map: Vec<usize>,
    pub block_sizes: Vec<usize>,
}

/// `g / G`: one vertex per `G`-orbit, two orbits adjacent when some of their
/// vertices are. Loops are dropped. Blocks are numbered by least element.
pub fn quotient(g: &Graph, group: &PermGroup) -> Result<QuotientResult> {
    if group.degree() != g.order() {
        return Err(Error::DegreeMismatch {
            expected: g.order(),
            got: group.degree(),
        });
    }
    for (index, s) in group.generators().iter().enumerate() {
        if !s.is_automorphism(g) {
            return Err(Error::NotAnAutomorphism { index });
        }
    }
    let orbits = group.orbits();
    let edges = g.edges().filter_map(|(u, v)| {
        let (a, b) = (orbits.block_of[u], orbits.block_of[v]);
        (a != b).then_some((a, b))
    });
    Ok(QuotientResult {
        quotient: Graph::from_edges(orbits.len(), edges)?,
        block_sizes: orbits.sizes(),
        block_map: orbits.block_of,
    })
}

/// Quotient by the cyclic group generated by `p`.
pub fn cyclic_quotient(g: &Graph, p: &Perm) -> Result<QuotientResult> {
    quotient(g, &PermGroup::cyclic(p))
}

#[derive(Clone, Debug, Serialize)]
pub struct MergeResult {
    /// Contracted graph with parallel edges collapsed.
    pub merged: Graph,
    /// merged vertex -> matching edge
    pub edge_map: Vec<(usize, usize)>,
    /// original vertex -> merged vertex
    pub vertex_map: Vec<usize>,
    /// `false` when contracting created parallel edges.
    pub simple: bool,
}

/// Contracts every edge of a perfect matching. Merged vertices follow the
/// sorted order of the matching.
pub fn contract_matching(g: &Graph, matching: &EdgeSet) -> Result<MergeResult> {
    matching.check_perfect_matching(g)?;
    let edge_map: Vec<(usize, usize)> = matching.iter().collect();
    let mut vertex_map = vec![0; g.order()];
    for (i, &(u, v)) in edge_map.iter().enumerate() {
        vertex_map[u] = i;
        vertex_map[v] = i;
    }
    let mut multiplicity: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (u, v) in g.edges() {
        let (a, b) = (vertex_map[u], vertex_map[v]);
        if a != b {
            *multiplicity.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let simple = multiplicity.values().all(|&m| m == 1);
    let merged = Graph::from_edges(edge_map.len(), multiplicity.into_keys())?;
    Ok(MergeResult {
        merged,
        edge_map,
        vertex_map,
        simple,
    })
}

/// Contraction of an invariant perfect matching of a cubic graph.
pub fn merge_cubic(g: &Graph, matching: &EdgeSet) -> Result<MergeResult> {
    contract_matching(g, matching)
}

/// For a cubic vertex-transitive graph whose automorphism group has exactly
/// two orbits on arcs, the orbit that is a perfect matching. `None` when the
/// pattern is absent.
pub fn invariant_matching(g: &Graph) -> Option<EdgeSet> {
    invariant_matching_in(g, &automorphism_group(g))
}

pub fn invariant_matching_in(g: &Graph, aut: &PermGroup) -> Option<EdgeSet> {
    if g.order() == 0 || !g.is_regular(3) || !aut.is_transitive() {
        return None;
    }
    let (arcs, orbit_of, count) = arc_orbits(g, aut);
    if count != 2 {
        return None;
    }
    let mut sizes = [0usize; 2];
    for &o in &orbit_of {
        sizes[o] += 1;
    }
    let small = sizes.iter().position(|&s| s == g.order())?;
    let matching: EdgeSet = arcs
        .iter()
        .zip(&orbit_of)
        .filter(|(_, &o)| o == small)
        .map(|(&(u, v), _)| (u, v))
        .collect();
    matching.check_perfect_matching(g).ok().map(|_| matching)
}

/// Transitive imprimitive groups of degree four.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegreeFourAction {
    D4,
    C4,
    C2xC2,
    /// anything else, with its order
    Other,
}

/// How the stabiliser of a contracted edge acts on its four neighbours.
#[derive(Clone, Debug, Serialize)]
pub struct MergeLocalAction {
    pub action: DegreeFourAction,
    pub action_order: u64,
    pub action_transitive: bool,
    #[serde(serialize_with = "crate::serde_big::serialize")]
    pub vertex_stabiliser_order: BigUint,
    #[serde(serialize_with = "crate::serde_big::serialize")]
    pub edge_stabiliser_order: BigUint,
    /// Order of the subgroup of the edge stabiliser fixing both neighbour
    /// pairs setwise.
    pub pair_fixer_order: u64,
}

/// Stabiliser action at the merged vertex `0` of `merge`. `aut` must act on
/// `g` and preserve the matching.
pub fn merge_local_action(g: &Graph, aut: &PermGroup, merge: &MergeResult) -> Result<MergeLocalAction> {
    let (v, w) = merge.edge_map[0];
    let gv = aut.stabiliser(v);
    let h = aut
        .transporter(v, w)
        .ok_or_else(|| Error::NotAPerfectMatching("edge endpoints lie in different orbits".into()))?;
    let mut gens: Vec<Perm> = gv.generators().to_vec();
    gens.push(h);
    let ge = PermGroup::from_generators(g.order(), gens);

    let lambda = &merge.merged;
    let e = 0;
    // neighbours of e reached through v, then through w
    let pair = |x: usize| -> Vec<usize> {
        let mut out: Vec<usize> = g
            .neighbours(x)
            .iter()
            .map(|&y| merge.vertex_map[y])
            .filter(|&m| m != e)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    };
    let (ab, cd) = (pair(v), pair(w));
    let mut nbrs: Vec<usize> = ab.iter().chain(&cd).copied().collect();
    nbrs.sort_unstable();
    nbrs.dedup();
    if nbrs.len() != lambda.degree(e) {
        return Err(Error::NotAPerfectMatching("merged neighbourhood is inconsistent".into()));
    }
    let induced = |p: &Perm| -> Vec<usize> {
        (0..merge.edge_map.len())
            .map(|m| {
                let (x, _) = merge.edge_map[m];
                merge.vertex_map[p.image(x)]
            })
            .collect()
    };
    let mut local_gens = Vec::new();
    for s in ge.generators() {
        let on_merged = induced(s);
        let images: Vec<usize> = nbrs
            .iter()
            .map(|&m| nbrs.binary_search(&on_merged[m]).expect("G_e fixes the neighbourhood"))
            .collect();
        local_gens.push(Perm::from_images(images)?);
    }
    let local = PermGroup::from_generators(nbrs.len(), local_gens);
    let action_order = local.order_u64().unwrap_or(u64::MAX);
    let action_transitive = local.is_transitive();
    let action = if nbrs.len() != 4 || !action_transitive {
        DegreeFourAction::Other
    } else {
        match action_order {
            8 => DegreeFourAction::D4,
            4 if local.elements().any(|p| p.order() == BigUint::from(4u32)) => DegreeFourAction::C4,
            4 => DegreeFourAction::C2xC2,
            _ => DegreeFourAction::Other,
        }
    };
    let pair_fixer_order = ge
        .elements()
        .filter(|p| {
            let m = induced(p);
            let keeps = |set: &[usize]| set.iter().all(|x| set.contains(&m[*x]));
            keeps(&ab) && keeps(&cd)
        })
        .count() as u64;
    Ok(MergeLocalAction {
        action,
        action_order,
        action_transitive,
        vertex_stabiliser_order: gv.order().clone(),
        edge_stabiliser_order: ge.order().clone(),
        pair_fixer_order,
    })
}

/// Result of the quartic contraction.
#[derive(Clone, Debug, Serialize)]
pub struct QuarticMerge {
    pub merge: MergeResult,
    /// The matching `v v'` that was contracted.
    pub red: EdgeSet,
    /// Valence of the contracted graph, `None` if it is not regular.
    pub valence: Option<usize>,
}

/// The local action of a vertex stabiliser on the neighbourhood: its orbit
/// sizes and its order.
pub fn local_action(g: &Graph, aut: &PermGroup, v: usize) -> PermGroup {
    aut.stabiliser(v).induced_on(g.neighbours(v))
}

/// For a 4-valent vertex-transitive graph whose vertex stabiliser acts on the
/// neighbourhood as `Sym(3)` (one fixed neighbour, `S3` on the rest), contract
/// the matching formed by the fixed neighbours.
pub fn merge_quartic(g: &Graph) -> Option<QuarticMerge> {
    merge_quartic_in(g, &automorphism_group(g))
}

pub fn merge_quartic_in(g: &Graph, aut: &PermGroup) -> Option<QuarticMerge> {
    if g.order() == 0 || !g.is_regular(4) || !aut.is_transitive() {
        return None;
    }
    let fixed_neighbour = |v: usize| -> Option<usize> {
        let local = local_action(g, aut, v);
        let mut sizes = local.orbits().sizes();
        sizes.sort_unstable();
        if sizes != [1, 3] || local.order_u64() != Some(6) {
            return None;
        }
        let orbits = local.orbits();
        let i = orbits.blocks.iter().find(|b| b.len() == 1)?[0];
        Some(g.neighbours(v)[i])
    };
    // one vertex suffices for the pattern; the partner map must be an involution
    fixed_neighbour(0)?;
    let mut red = EdgeSet::new();
    for v in 0..g.order() {
        let w = fixed_neighbour(v)?;
        if fixed_neighbour(w) != Some(v) {
            return None;
        }
        red.insert(v, w);
    }
    let merge = contract_matching(g, &red).ok()?;
    let valence = merge.merged.valence();
    Some(QuarticMerge {
        merge,
        red,
        valence,
    })
}

/// The permutation induced on merged vertices by an automorphism preserving
/// the matching.
pub fn induced_on_merged(merge: &MergeResult, p: &Perm) -> Result<Perm> {
    let images = merge
        .edge_map
        .iter()
        .map(|&(x, _)| merge.vertex_map[p.image(x)])
        .collect();
    Perm::from_images(images)
}

/// The group `aut` induces on the merged graph.
pub fn induced_group(merge: &MergeResult, aut: &PermGroup) -> Result<PermGroup> {
    let gens = aut
        .generators()
        .iter()
        .map(|p| induced_on_merged(merge, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(PermGroup::from_generators(merge.edge_map.len(), gens))
}
